mod common;

use std::sync::OnceLock;

use fptlab::basep::ratio;
use fptlab::fedder::{nu, nu_sequence, FedderOracle, NuTable};
use fptlab::fpt::{approximate, rational_candidate, special_values, CandidateStatus, FptApproximation, Positivity};
use fptlab::poly::pow_reduced;
use fptlab::{ExactRational, Polynomial};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::{corpus, naive_nu, naive_pow, prime};

fn shared_corpus() -> &'static [Polynomial] {
    static CORPUS: OnceLock<Vec<Polynomial>> = OnceLock::new();
    CORPUS.get_or_init(corpus)
}

fn corpus_member() -> impl Strategy<Value = &'static Polynomial> {
    (0..shared_corpus().len()).prop_map(|i| &shared_corpus()[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduced_power_matches_full_expansion(f in corpus_member(), a in 0u64..=30, e in 1u32..=2) {
        let fast = pow_reduced(f, a, e);
        prop_assert!(naive_pow(f, a).reduce(e).same_as(&fast));
        prop_assert_eq!(fast.reduce(e), fast.clone());
    }

    #[test]
    fn incremental_matches_direct(f in corpus_member()) {
        let table = nu_sequence(f, 3).unwrap();
        for e in 1..=3 {
            prop_assert_eq!(table.nu_at(e), nu(f, e).unwrap());
            prop_assert!(table.digits()[e as usize - 1] < f.p().get());
        }
    }

    #[test]
    fn binary_search_matches_scan(f in corpus_member(), e in 1u32..=2) {
        prop_assert_eq!(nu(f, e).unwrap(), naive_nu(f, e));
    }

    #[test]
    fn fedder_base_case(f in corpus_member()) {
        let p = f.p().get();
        let survives = !naive_pow(f, p - 1).reduce(1).is_zero();
        prop_assert_eq!(nu(f, 1).unwrap() == p - 1, survives);
        prop_assert_eq!(special_values(f, 1).unwrap().is_one, survives);
    }

    #[test]
    fn approximation_invariants(f in corpus_member()) {
        let depth = 4;
        let approx = approximate(f, depth).unwrap();
        let p = f.p();
        let unit = |e: u32| ExactRational::new(BigInt::one(), p.pow(e));
        for e in 1..depth {
            let (lo, hi) = (&approx.truncations[e as usize - 1], &approx.truncations[e as usize]);
            prop_assert!(lo <= hi);
            prop_assert!(hi + unit(e + 1) <= lo + unit(e));
        }
        prop_assert_eq!(&approx.upper - &approx.lower, unit(depth));
        prop_assert!(approx.lower < approx.upper);
        prop_assert!(approx.certified_lower <= approx.upper);
        prop_assert!(approx.upper <= ExactRational::one());
        prop_assert!(approx.truncations.iter().all(|t| *t >= ExactRational::zero() && *t < ExactRational::one()));
        let c = rational_candidate(&approx, 64);
        prop_assert!(c.candidate >= approx.certified_lower);
        if c.status == CandidateStatus::ExactCertified {
            prop_assert_eq!(&c.candidate, &approx.upper);
        }
    }

    #[test]
    fn merging_keeps_the_deeper_table(f in corpus_member()) {
        let shallow = approximate(f, 2).unwrap();
        let deep = approximate(f, 3).unwrap();
        prop_assert_eq!(shallow.clone().merge(deep.clone()).unwrap(), deep.clone());
        prop_assert_eq!(deep.clone().merge(shallow).unwrap(), deep);
    }
}

#[test]
fn prefix_tables_agree() {
    for f in shared_corpus().iter().take(50) {
        let full = nu_sequence(f, 3).unwrap();
        let prefix = NuTable::from_nu(f.clone(), full.nu()[..2].to_vec()).unwrap();
        let mut extended = prefix.clone();
        extended.extend_with(&FedderOracle::new(f).unwrap(), 3).unwrap();
        assert_eq!(extended, full);
        let a = FptApproximation::from_table(prefix);
        let b = FptApproximation::from_table(full);
        assert!(a.lower <= b.lower && b.upper <= a.upper);
        assert!(a.certified_lower <= b.certified_lower);
    }
}

#[test]
fn documented_thresholds() {
    let x2 = Polynomial::parse("x^2", prime(2)).unwrap();
    let approx = approximate(&x2, 3).unwrap();
    assert_eq!(approx.truncations, vec![ratio(0, 1), ratio(1, 4), ratio(3, 8)]);
    assert_eq!((approx.lower.clone(), approx.upper.clone()), (ratio(3, 8), ratio(1, 2)));
    assert_eq!(approx.certified_lower, ratio(3, 7));

    let c = rational_candidate(&approximate(&x2, 8).unwrap(), 64);
    assert_eq!((c.candidate, c.status), (ratio(1, 2), CandidateStatus::ConsistentAtDepth));

    let xy = Polynomial::parse("x*y", prime(2)).unwrap();
    let c = rational_candidate(&approximate(&xy, 3).unwrap(), 64);
    assert_eq!((c.candidate, c.status), (ratio(1, 1), CandidateStatus::ExactCertified));

    let cusp = Polynomial::parse("x^2 + y^3", prime(7)).unwrap();
    assert_eq!(naive_nu(&cusp, 2), 40);
    let c = rational_candidate(&approximate(&cusp, 2).unwrap(), 64);
    assert_eq!((c.candidate, c.status, c.period), (ratio(5, 6), CandidateStatus::ConsistentAtDepth, Some(1)));

    let sv = special_values(&x2, 6).unwrap();
    assert_eq!((sv.positive, sv.is_one), (Positivity::Positive { witness: 2 }, false));
    assert!(special_values(&Polynomial::parse("x*y", prime(5)).unwrap(), 6).unwrap().is_one);
    assert!(!special_values(&Polynomial::parse("x^3", prime(3)).unwrap(), 6).unwrap().is_one);
}
