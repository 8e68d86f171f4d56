mod common;

use std::sync::OnceLock;

use fptlab::basep::ratio;
use fptlab::fedder::nu_sequence;
use fptlab::fpt::FptApproximation;
use fptlab::purity::{classify, classify_at_threshold, classify_table, Reason};
use fptlab::{ExactRational, Flavor, Outcome, Polynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use common::{corpus, naive_nu, prime};

fn shared_corpus() -> &'static [Polynomial] {
    static CORPUS: OnceLock<Vec<Polynomial>> = OnceLock::new();
    CORPUS.get_or_init(corpus)
}

fn corpus_member() -> impl Strategy<Value = &'static Polynomial> {
    (0..shared_corpus().len()).prop_map(|i| &shared_corpus()[i])
}

fn lambda() -> impl Strategy<Value = ExactRational> {
    (1i64..=60).prop_flat_map(|den| (0..=den).prop_map(move |num| ratio(num, den)))
}

fn int(b: BigInt) -> ExactRational {
    ExactRational::from_integer(b)
}

fn ceil(r: &ExactRational) -> BigInt {
    Integer::div_ceil(r.numer(), r.denom())
}

fn floor(r: &ExactRational) -> BigInt {
    Integer::div_floor(r.numer(), r.denom())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Every decided verdict is re-derived from a brute-force nu at its witness level.
    #[test]
    fn soundness_against_brute_force(f in corpus_member(), lambda in lambda()) {
        let verdicts = classify(f, &lambda, 2).unwrap();
        prop_assert!(verdicts.respects_implications());
        let p = f.p();
        for v in verdicts.iter() {
            let (Some(e), Some(reason)) = (v.witness, v.reason) else { continue };
            let nu = int(BigInt::from(naive_nu(f, e)));
            let pe = int(p.pow(e));
            let pe_m1 = &pe - int(BigInt::from(1));
            let confirmed = match (v.flavor, reason) {
                (Flavor::Strong, Reason::Splits) => nu >= int(ceil(&(&pe * &lambda))),
                (Flavor::Sharp, Reason::Splits) => nu >= int(ceil(&(&pe_m1 * &lambda))),
                (Flavor::FPure, Reason::DoesNotSplit) => nu < int(floor(&(&pe_m1 * &lambda))),
                (_, Reason::BelowCertifiedLower) => lambda <= &nu / &pe_m1,
                (_, Reason::AboveUpperBound) => lambda > (&nu + int(BigInt::from(1))) / &pe,
                (_, Reason::Implied(_)) => true,
                (flavor, reason) => return Err(TestCaseError::fail(format!("{flavor:?} with {reason:?}"))),
            };
            prop_assert!(confirmed, "{} over F_{}: {:?} at lambda {}", f, p, v, lambda);
        }
    }

    #[test]
    fn monotone_in_lambda(f in corpus_member(), a in lambda(), b in lambda(), extra in 0u32..=1) {
        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        let at_large = classify(f, &large, 2).unwrap();
        if at_large.f_pure.outcome == Outcome::Holds {
            let at_small = classify(f, &small, 2 + extra).unwrap();
            prop_assert_ne!(at_small.f_pure.outcome, Outcome::Fails);
        }
    }
}

#[test]
fn consistent_with_threshold_bounds() {
    for f in shared_corpus() {
        let table = nu_sequence(f, 3).unwrap();
        let approx = FptApproximation::from_table(table.clone());
        for num in 0..=24 {
            let lambda = ratio(num, 24);
            let v = classify_table(&table, &lambda).unwrap();
            if lambda < approx.certified_lower {
                assert_eq!(v.f_pure.outcome, Outcome::Holds, "{f} at {lambda}");
            }
            if lambda > approx.upper {
                assert_eq!(v.f_pure.outcome, Outcome::Fails, "{f} at {lambda}");
            }
        }
    }
}

#[test]
fn documented_verdicts() {
    let outcomes = |f: &str, p: u64, lambda: ExactRational, depth: u32| {
        let v = classify(&Polynomial::parse(f, prime(p)).unwrap(), &lambda, depth).unwrap();
        [v.f_pure.outcome, v.strong.outcome, v.sharp.outcome]
    };
    use Outcome::*;
    assert_eq!(outcomes("x*y", 3, ratio(2, 3), 1), [Holds, Holds, Holds]);
    let cusp = outcomes("x^2 + y^3", 7, ratio(5, 6), 1);
    assert_eq!((cusp[1], cusp[2]), (Undecided, Holds));
    assert_eq!(outcomes("x^2", 2, ratio(3, 4), 2)[0], Fails);
    assert_eq!(outcomes("x^3 + y^2*z", 5, ratio(0, 1), 3), [Holds; 3]);
    for p in [2, 3, 5, 7] {
        assert_ne!(outcomes("x*y", p, ratio(1, 1), 6)[1], Holds);
    }

    let at = |lambda: ExactRational, p: u64| {
        let v = classify_at_threshold(&lambda, prime(p), 10).unwrap();
        [v.f_pure.outcome, v.strong.outcome, v.sharp.outcome]
    };
    for p in [2, 3, 5] {
        assert_eq!(at(ratio(1, p as i64), p), [Holds, Fails, Fails]);
        assert_eq!(at(ratio(1, 1), p), [Holds, Fails, Holds]);
    }
    assert_eq!(at(ratio(5, 6), 7), [Holds, Fails, Holds]);
    assert!(classify_at_threshold(&ratio(3, 2), prime(2), 10).is_err());
}
