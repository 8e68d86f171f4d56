//! Bounds and rational candidates for the F-pure threshold.
//!
//! A table of depth `E` pins the threshold into `(<fpt>_E, <fpt>_E + 1/p^E]`.
//! Independently, every level gives a certified lower bound
//! `nu(p^e) / (p^e - 1)`: it is the number whose expansion repeats the first
//! `e` digits of the threshold, and such a number never exceeds it.
//!
//! Whether the threshold is rational is not decided here. Candidates carry an
//! explicit status saying how much is actually known.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::basep::{periodicity_order, truncation, ExactRational, Prime};
use crate::error::{Error, Result};
use crate::fedder::{nu_sequence, FedderOracle, NuTable, SplittingOracle};
use crate::poly::Polynomial;

/// Positivity is probed up to this level unless told otherwise.
pub const DEFAULT_POSITIVITY_DEPTH: u32 = 6;

/// A period extrapolation needs this many clean repetitions at the end of the digits.
pub const MIN_REPETITIONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuessStatus {
    /// The guess coincides with the certified lower bound.
    CertifiedLowerBound,
    Uncertified,
}

/// Eventually periodic rational read off the trailing digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodGuess {
    pub value: ExactRational,
    /// Number of digits before the repeating block starts.
    pub preperiod: u32,
    pub period: u32,
    pub status: GuessStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptApproximation {
    pub table: NuTable,
    /// `<fpt>_e = nu(p^e) / p^e` for `e = 1..=E`.
    pub truncations: Vec<ExactRational>,
    /// Strict lower bound `<fpt>_E`.
    pub lower: ExactRational,
    /// Inclusive upper bound `<fpt>_E + 1/p^E`.
    pub upper: ExactRational,
    /// `max_e nu(p^e) / (p^e - 1)`; never above the threshold.
    pub certified_lower: ExactRational,
    /// The first level attaining `certified_lower`.
    pub certified_level: u32,
    pub guess: Option<PeriodGuess>,
}

/// Approximates `fpt(f)` from `nu(p^1), ..., nu(p^depth)`.
pub fn approximate(f: &Polynomial, depth: u32) -> Result<FptApproximation> {
    Ok(FptApproximation::from_table(nu_sequence(f, depth)?))
}

fn level_value(nu: u64, p: Prime, e: u32, minus_one: bool) -> ExactRational {
    let pe = p.pow(e);
    let den = if minus_one { pe - 1 } else { pe };
    ExactRational::new(BigInt::from(nu), den)
}

impl FptApproximation {
    pub fn from_table(table: NuTable) -> Self {
        let p = table.p();
        let depth = table.depth();
        let truncations: Vec<ExactRational> = (1..=depth).map(|e| table.truncation(e)).collect();
        let lower = truncations.last().cloned().expect("tables are never empty");
        let upper = &lower + ExactRational::new(BigInt::one(), p.pow(depth));

        let mut certified_lower = ExactRational::zero();
        let mut certified_level = 1;
        for e in 1..=depth {
            let candidate = level_value(table.nu_at(e), p, e, true);
            if candidate > certified_lower {
                certified_lower = candidate;
                certified_level = e;
            }
        }

        let guess = period_guess(table.digits(), p).map(|(value, preperiod, period)| {
            let status = if value == certified_lower {
                GuessStatus::CertifiedLowerBound
            } else {
                GuessStatus::Uncertified
            };
            PeriodGuess {
                value,
                preperiod,
                period,
                status,
            }
        });

        FptApproximation {
            table,
            truncations,
            lower,
            upper,
            certified_lower,
            certified_level,
            guess,
        }
    }

    pub fn p(&self) -> Prime {
        self.table.p()
    }

    pub fn depth(&self) -> u32 {
        self.table.depth()
    }

    /// Combines two approximations of the same polynomial, keeping the deeper
    /// table after checking that the shared levels agree.
    pub fn merge(self, other: FptApproximation) -> Result<FptApproximation> {
        if self.table.polynomial() != other.table.polynomial() {
            return Err(Error::InconsistentTable {
                level: 0,
                message: "approximations of different polynomials".into(),
            });
        }
        let shared = self.depth().min(other.depth()) as usize;
        if let Some(i) = (0..shared).find(|&i| self.table.nu()[i] != other.table.nu()[i]) {
            return Err(Error::InconsistentTable {
                level: i as u32 + 1,
                message: "approximations disagree".into(),
            });
        }
        Ok(if other.depth() > self.depth() { other } else { self })
    }
}

/// Finds the smallest period `L` such that the last `3L` digits are
/// `L`-periodic, extends the periodic stretch as far left as it goes, and
/// returns the eventually periodic rational with those digits.
///
/// An all-zero block is rejected: it would describe a terminating expansion.
pub fn period_guess(digits: &[u64], p: Prime) -> Option<(ExactRational, u32, u32)> {
    let n = digits.len();
    let period = (1..=n / MIN_REPETITIONS).find(|&len| {
        let start = n - MIN_REPETITIONS * len;
        (start..n - len).all(|i| digits[i] == digits[i + len])
    })?;
    let mut start = n - MIN_REPETITIONS * period;
    while start > 0 && digits[start - 1] == digits[start - 1 + period] {
        start -= 1;
    }
    let block = &digits[start..start + period];
    if block.iter().all(|&d| d == 0) {
        return None;
    }
    let pb = p.to_bigint();
    let as_int = |ds: &[u64]| {
        ds.iter()
            .fold(BigInt::zero(), |acc, &d| acc * &pb + BigInt::from(d))
    };
    let head = p.pow(start as u32);
    let value = ExactRational::new(as_int(&digits[..start]), head.clone())
        + ExactRational::new(as_int(block), head * (p.pow(period as u32) - 1));
    Some((value, start as u32, period as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateStatus {
    /// The certified lower bound meets the upper bound, so the threshold is known.
    ExactCertified,
    /// The candidate reproduces every computed truncation of the threshold.
    ConsistentAtDepth,
    /// Only known to be a lower bound.
    LowerBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCandidate {
    pub candidate: ExactRational,
    pub status: CandidateStatus,
    /// Smallest `d <= d_max` with `(p^d - 1) candidate` integral, if any.
    pub period: Option<u32>,
}

/// Picks the best rational candidate and states how much of it is proven.
///
/// Exactness is certified only when `certified_lower == upper`, since the
/// threshold always lies in `[certified_lower, upper]`. Matching finitely many
/// digits is reported as [`CandidateStatus::ConsistentAtDepth`], never as exact.
pub fn rational_candidate(approx: &FptApproximation, d_max: u32) -> RationalCandidate {
    let p = approx.p();
    let mut candidate = approx.certified_lower.clone();
    if let Some(guess) = &approx.guess {
        if guess.value > candidate {
            candidate = guess.value.clone();
        }
    }

    let status = if approx.certified_lower == approx.upper {
        CandidateStatus::ExactCertified
    } else if candidate > ExactRational::zero()
        && candidate <= ExactRational::one()
        && (1..=approx.depth()).all(|e| {
            truncation(&candidate, p, e).expect("candidate lies in (0, 1]")
                == approx.truncations[e as usize - 1]
        })
    {
        CandidateStatus::ConsistentAtDepth
    } else {
        CandidateStatus::LowerBoundOnly
    };

    let period = periodicity_order(&candidate, p, d_max).expect("candidate lies in [0, 1]");
    RationalCandidate {
        candidate,
        status,
        period,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    /// `f` splits at exponent `1/p^witness`.
    Positive { witness: u32 },
    /// No splitting found up to the probed level; not a proof that `fpt = 0`.
    Undecided { depth: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialValues {
    pub positive: Positivity,
    /// `fpt(f) = 1`, decided completely by `nu(p) = p - 1`.
    pub is_one: bool,
}

pub fn special_values_with<O: SplittingOracle + ?Sized>(oracle: &O, probe_depth: u32) -> SpecialValues {
    let positive = (1..=probe_depth)
        .find(|&e| oracle.splits(1, e))
        .map_or(Positivity::Undecided { depth: probe_depth }, |witness| {
            Positivity::Positive { witness }
        });
    let is_one = oracle.splits(oracle.prime().get() - 1, 1);
    SpecialValues { positive, is_one }
}

pub fn special_values(f: &Polynomial, probe_depth: u32) -> Result<SpecialValues> {
    Ok(special_values_with(&FedderOracle::new(f)?, probe_depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basep::ratio;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn poly(text: &str, v: u64) -> Polynomial {
        Polynomial::parse(text, p(v)).unwrap()
    }

    #[test]
    fn square_in_characteristic_two() {
        let a = approximate(&poly("x^2", 2), 3).unwrap();
        assert_eq!(a.truncations, vec![ratio(0, 1), ratio(1, 4), ratio(3, 8)]);
        assert_eq!((a.lower.clone(), a.upper.clone()), (ratio(3, 8), ratio(1, 2)));
        assert_eq!(a.certified_lower, ratio(3, 7));
        assert_eq!(a.certified_level, 3);
        assert!(a.guess.is_none());
    }

    #[test]
    fn node_in_characteristic_two() {
        let a = approximate(&poly("x*y", 2), 3).unwrap();
        assert_eq!(a.truncations, vec![ratio(1, 2), ratio(3, 4), ratio(7, 8)]);
        assert_eq!(a.certified_lower, ratio(1, 1));
        assert_eq!(a.certified_level, 1);
        let c = rational_candidate(&a, 10);
        assert_eq!(c.candidate, ratio(1, 1));
        assert_eq!(c.status, CandidateStatus::ExactCertified);
        assert_eq!(c.period, Some(1));
        let g = a.guess.unwrap();
        assert_eq!(g.value, ratio(1, 1));
        assert_eq!(g.status, GuessStatus::CertifiedLowerBound);
    }

    #[test]
    fn x_to_the_p() {
        for v in [2u64, 3, 5] {
            let a = approximate(&poly(&format!("x^{v}"), v), 6).unwrap();
            assert_eq!(&a.upper - &a.lower, ExactRational::new(1.into(), p(v).pow(6)));
            for e in 1..=6u32 {
                let expected = ExactRational::new(
                    BigInt::from(v.pow(e - 1) - 1),
                    BigInt::from(v.pow(e)),
                );
                assert_eq!(a.truncations[e as usize - 1], expected);
            }
            assert!(a.lower < ratio(1, v as i64) && ratio(1, v as i64) <= a.upper);
        }
    }

    #[test]
    fn guess_for_square_is_consistent_not_exact() {
        let a = approximate(&poly("x^2", 2), 8).unwrap();
        let g = a.guess.clone().unwrap();
        assert_eq!((g.value.clone(), g.preperiod, g.period), (ratio(1, 2), 1, 1));
        assert_eq!(g.status, GuessStatus::Uncertified);
        let c = rational_candidate(&a, 64);
        assert_eq!(c.candidate, ratio(1, 2));
        assert_eq!(c.status, CandidateStatus::ConsistentAtDepth);
        assert_eq!(c.period, None);
    }

    #[test]
    fn cusp_in_characteristic_seven() {
        let a = approximate(&poly("x^2 + y^3", 7), 2).unwrap();
        assert_eq!(a.table.nu(), &[5, 40]);
        assert_eq!(a.certified_lower, ratio(5, 6));
        let c = rational_candidate(&a, 10);
        assert_eq!(c.candidate, ratio(5, 6));
        assert_eq!(c.status, CandidateStatus::ConsistentAtDepth);
        assert_eq!(c.period, Some(1));
    }

    #[test]
    fn lower_bound_only_when_digits_disagree() {
        // fpt(x^3) = 1/3 in characteristic 2: digits 0,1,0,1,...; depth 2 has no guess
        let a = approximate(&poly("x^3", 2), 2).unwrap();
        assert_eq!(a.table.digits(), &[0, 1]);
        assert_eq!(a.certified_lower, ratio(1, 3));
        let c = rational_candidate(&a, 10);
        assert_eq!(c.status, CandidateStatus::ConsistentAtDepth);

        let a = approximate(&poly("x^2*y^3 + x^5", 3), 3).unwrap();
        let c = rational_candidate(&a, 10);
        assert!(c.candidate >= a.certified_lower);
        if c.status == CandidateStatus::LowerBoundOnly {
            assert!(c.candidate <= a.lower);
        }
    }

    #[test]
    fn period_guess_edge_cases() {
        assert_eq!(period_guess(&[0, 1, 0, 1, 0, 1], p(2)), Some((ratio(1, 3), 0, 2)));
        assert_eq!(period_guess(&[1, 0, 0, 0], p(2)), None);
        assert_eq!(period_guess(&[1, 1], p(2)), None);
        assert_eq!(period_guess(&[4, 2, 2, 2], p(5)).unwrap().0, ratio(9, 10));
    }

    #[test]
    fn merge_keeps_deeper() {
        let f = poly("x^3 + y^2", 5);
        let shallow = approximate(&f, 1).unwrap();
        let deep = approximate(&f, 3).unwrap();
        assert_eq!(shallow.clone().merge(deep.clone()).unwrap(), deep);
        assert_eq!(deep.clone().merge(shallow).unwrap(), deep);
        assert!(deep.merge(approximate(&poly("x", 5), 2).unwrap()).is_err());
    }

    #[test]
    fn special_value_examples() {
        let s = special_values(&poly("x*y", 5), DEFAULT_POSITIVITY_DEPTH).unwrap();
        assert_eq!(s.positive, Positivity::Positive { witness: 1 });
        assert!(s.is_one);

        let s = special_values(&poly("x^2", 2), DEFAULT_POSITIVITY_DEPTH).unwrap();
        assert_eq!(s.positive, Positivity::Positive { witness: 2 });
        assert!(!s.is_one);

        assert!(!special_values(&poly("x^3", 3), 6).unwrap().is_one);

        let s = special_values(&poly("x^100", 3), 3).unwrap();
        assert_eq!(s.positive, Positivity::Undecided { depth: 3 });
        let s = special_values(&poly("x^100", 3), 6).unwrap();
        assert_eq!(s.positive, Positivity::Positive { witness: 5 });
    }
}
