//! The splitting oracle and the `nu` invariants of `f`.
//!
//! `nu_f(p^e)` is the largest `a` for which `R f^{a/p^e} ⊆ R^{1/p^e}` splits.
//! In `F_p[x_1, ..., x_n]` localized at the origin, Fedder's criterion turns
//! the splitting question into monomial-ideal membership: the inclusion splits
//! iff `f^a` is not in `m^[p^e]`. The `nu` values are exactly `p^e` times the
//! truncations of the F-pure threshold.

use num_bigint::BigInt;

use crate::basep::{ExactRational, Prime};
use crate::error::{Error, Result};
use crate::poly::{in_frobenius_power, pow_reduced, Polynomial};

/// Decides whether `R f^{a/p^e} ⊆ R^{1/p^e}` splits for a fixed `f`.
///
/// The decision must be monotone in `a` (if `a` splits so does every smaller
/// exponent) and `a = 0` must split, as it does over any F-pure ring.
pub trait SplittingOracle {
    fn prime(&self) -> Prime;

    fn splits(&self, a: u64, e: u32) -> bool;
}

/// Fedder's criterion at the origin of a polynomial ring.
#[derive(Debug, Clone, Copy)]
pub struct FedderOracle<'a> {
    f: &'a Polynomial,
}

impl<'a> FedderOracle<'a> {
    pub fn new(f: &'a Polynomial) -> Result<Self> {
        f.ensure_nonunit()?;
        Ok(FedderOracle { f })
    }
}

impl SplittingOracle for FedderOracle<'_> {
    fn prime(&self) -> Prime {
        self.f.p()
    }

    fn splits(&self, a: u64, e: u32) -> bool {
        !in_frobenius_power(&pow_reduced(self.f, a, e), e)
    }
}

fn level_size(p: Prime, e: u32) -> Result<u64> {
    if e == 0 {
        return Err(Error::ZeroDepth);
    }
    p.checked_pow(e).ok_or(Error::Overflow(p.get(), e))
}

/// `nu(p^e)` by binary search over `[0, p^e - 1]`.
pub fn nu_with<O: SplittingOracle + ?Sized>(oracle: &O, e: u32) -> Result<u64> {
    let size = level_size(oracle.prime(), e)?;
    if !oracle.splits(0, e) {
        return Err(Error::InconsistentTable {
            level: e,
            message: "f^0 does not split".into(),
        });
    }
    let (mut lo, mut hi) = (0, size - 1);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if oracle.splits(mid, e) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

/// `nu_f(p^e)` via Fedder's criterion.
pub fn nu(f: &Polynomial, e: u32) -> Result<u64> {
    nu_with(&FedderOracle::new(f)?, e)
}

/// Given `nu(p^{e-1})`, finds `nu(p^e)` among the `p` candidates
/// `p nu(p^{e-1}) + d`, `0 <= d < p`.
pub fn nu_step<O: SplittingOracle + ?Sized>(oracle: &O, previous: u64, e: u32) -> Result<u64> {
    let p = oracle.prime().get();
    level_size(oracle.prime(), e)?;
    let base = previous
        .checked_mul(p)
        .ok_or(Error::Overflow(oracle.prime().get(), e))?;
    if !oracle.splits(base, e) {
        return Err(Error::DigitOutOfRange { level: e });
    }
    let mut digit = 0;
    while digit + 1 < p && oracle.splits(base + digit + 1, e) {
        digit += 1;
    }
    Ok(base + digit)
}

/// Runs the digit-by-digit search for levels `1..=depth`.
pub fn nu_sequence_with<O: SplittingOracle + ?Sized>(oracle: &O, depth: u32) -> Result<Vec<u64>> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let mut out = Vec::with_capacity(depth as usize);
    let mut previous = 0;
    for e in 1..=depth {
        previous = nu_step(oracle, previous, e)?;
        out.push(previous);
    }
    Ok(out)
}

pub fn nu_sequence(f: &Polynomial, depth: u32) -> Result<NuTable> {
    let values = nu_sequence_with(&FedderOracle::new(f)?, depth)?;
    NuTable::from_nu(f.clone(), values)
}

/// `nu(p^e)` for `e = 1..=depth`, with the base-`p` digits they encode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuTable {
    f: Polynomial,
    nu: Vec<u64>,
    digits: Vec<u64>,
}

impl NuTable {
    /// Validates `0 <= nu(p^e) <= p^e - 1` and `0 <= a_e <= p - 1`, where
    /// `a_e = nu(p^e) - p nu(p^{e-1})`.
    pub fn from_nu(f: Polynomial, nu: Vec<u64>) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::ZeroDepth);
        }
        let p = f.p();
        let mut digits = Vec::with_capacity(nu.len());
        let mut previous = 0u64;
        for (i, &value) in nu.iter().enumerate() {
            let level = i as u32 + 1;
            let size = level_size(p, level)?;
            if value >= size {
                return Err(Error::InconsistentTable {
                    level,
                    message: format!("nu = {value} exceeds p^e - 1 = {}", size - 1),
                });
            }
            let base = previous * p.get();
            if value < base || value - base >= p.get() {
                return Err(Error::InconsistentTable {
                    level,
                    message: format!("digit out of range: nu = {value}, previous = {previous}"),
                });
            }
            digits.push(value - base);
            previous = value;
        }
        Ok(NuTable { f, nu, digits })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    pub fn p(&self) -> Prime {
        self.f.p()
    }

    pub fn depth(&self) -> u32 {
        self.nu.len() as u32
    }

    pub fn nu(&self) -> &[u64] {
        &self.nu
    }

    /// `nu(p^e)` for `1 <= e <= depth`.
    pub fn nu_at(&self, e: u32) -> u64 {
        self.nu[e as usize - 1]
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `<fpt>_e = nu(p^e) / p^e`.
    pub fn truncation(&self, e: u32) -> ExactRational {
        ExactRational::new(BigInt::from(self.nu_at(e)), self.p().pow(e))
    }

    /// Extends the table in place with further levels from the oracle.
    pub fn extend_with<O: SplittingOracle + ?Sized>(&mut self, oracle: &O, depth: u32) -> Result<()> {
        let mut previous = *self.nu.last().expect("tables are never empty");
        for e in self.depth() + 1..=depth {
            let value = nu_step(oracle, previous, e)?;
            self.digits.push(value - previous * self.p().get());
            self.nu.push(value);
            previous = value;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn poly(text: &str, v: u64) -> Polynomial {
        Polynomial::parse(text, p(v)).unwrap()
    }

    /// Largest `a < p^e` with `f^a` (fully expanded, then reduced) nonzero mod m^[p^e].
    fn brute_force_nu(f: &Polynomial, e: u32) -> u64 {
        let size = f.p().checked_pow(e).unwrap();
        let mut power = Polynomial::one(f.p(), f.nvars());
        let mut best = 0;
        for a in 0..size {
            if !in_frobenius_power(&power.reduce(e), e) {
                best = a;
            }
            power = power.mul(f);
        }
        best
    }

    #[test]
    fn nu_of_pure_powers() {
        for v in [2u64, 3, 5] {
            let f = poly(&format!("x^{v}"), v);
            for e in 1..=4 {
                let expected = v.pow(e - 1) - 1;
                assert_eq!(nu(&f, e).unwrap(), expected, "p = {v}, e = {e}");
            }
        }
        let f = poly("x^2", 2);
        assert_eq!(
            (nu(&f, 1).unwrap(), nu(&f, 2).unwrap(), nu(&f, 3).unwrap()),
            (0, 1, 3)
        );
    }

    #[test]
    fn nu_examples() {
        assert_eq!(brute_force_nu(&poly("x*y", 3), 1), 2);
        assert_eq!(nu(&poly("x*y", 3), 1).unwrap(), 2);
        let cusp = poly("x^2 + y^3", 7);
        assert_eq!(brute_force_nu(&cusp, 1), 5);
        assert_eq!(nu(&cusp, 1).unwrap(), 5);
    }

    #[test]
    fn sequences() {
        let t = nu_sequence(&poly("x^2", 2), 3).unwrap();
        assert_eq!((t.nu(), t.digits()), (&[0, 1, 3][..], &[0, 1, 1][..]));
        let t = nu_sequence(&poly("x*y", 2), 3).unwrap();
        assert_eq!((t.nu(), t.digits()), (&[1, 3, 7][..], &[1, 1, 1][..]));
        let t = nu_sequence(&poly("x^2 + y^3", 7), 1).unwrap();
        assert_eq!((t.nu(), t.digits()), (&[5][..], &[5][..]));

        let cusp = poly("x^2 + y^3", 7);
        assert_eq!(brute_force_nu(&cusp, 2), 40);
        assert_eq!(nu_sequence(&cusp, 2).unwrap().nu(), &[5, 40]);
    }

    #[test]
    fn rejects_units_and_zero() {
        assert_eq!(nu(&poly("1 + x", 3), 1), Err(Error::Unit));
        assert_eq!(
            nu(&Polynomial::zero(p(3), 1), 1),
            Err(Error::ZeroPolynomial(3))
        );
        assert_eq!(nu(&poly("x", 3), 0), Err(Error::ZeroDepth));
        assert_eq!(nu(&poly("x", 3), 41), Err(Error::Overflow(3, 41)));
    }

    #[test]
    fn table_validation() {
        let f = poly("x", 2);
        assert!(NuTable::from_nu(f.clone(), vec![1, 3, 7]).is_ok());
        assert!(matches!(
            NuTable::from_nu(f.clone(), vec![2]),
            Err(Error::InconsistentTable { level: 1, .. })
        ));
        assert!(matches!(
            NuTable::from_nu(f.clone(), vec![1, 1]),
            Err(Error::InconsistentTable { level: 2, .. })
        ));
        assert_eq!(NuTable::from_nu(f, vec![]), Err(Error::ZeroDepth));
    }

    #[test]
    fn extend_matches_fresh_sequence() {
        let f = poly("x^3 + y^4 + x*y*z", 3);
        let mut t = nu_sequence(&f, 1).unwrap();
        t.extend_with(&FedderOracle::new(&f).unwrap(), 4).unwrap();
        assert_eq!(t, nu_sequence(&f, 4).unwrap());
    }

    /// An oracle that is not monotone: everything splits except exactly `p nu`.
    struct Broken;

    impl SplittingOracle for Broken {
        fn prime(&self) -> Prime {
            Prime::new(3).unwrap()
        }
        fn splits(&self, a: u64, e: u32) -> bool {
            !(e == 2 && a == 6)
        }
    }

    #[test]
    fn digit_range_is_asserted_not_clamped() {
        assert_eq!(nu_sequence_with(&Broken, 1).unwrap(), vec![2]);
        assert_eq!(
            nu_sequence_with(&Broken, 2),
            Err(Error::DigitOutOfRange { level: 2 })
        );
    }
}
