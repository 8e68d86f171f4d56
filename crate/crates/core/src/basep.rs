//! Non-terminating base-`p` expansions of rationals in `[0, 1]`.
//!
//! Every `alpha` in `(0, 1]` has a unique expansion `sum a_d / p^d` whose
//! digits are not eventually zero. The `e`-th truncation keeps the first `e`
//! digits and is always strictly below `alpha`; for `alpha = 0` the truncation
//! and tail are `0` by convention.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// Shorthand for building small exact rationals.
pub fn ratio(numer: i64, denom: i64) -> ExactRational {
    ExactRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// A prime characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as a machine word, if it fits.
    pub fn checked_pow(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e)
    }

    pub fn pow(self, e: u32) -> BigInt {
        Pow::pow(self.to_bigint(), e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn ceil_int(r: &ExactRational) -> BigInt {
    r.ceil().to_integer()
}

pub(crate) fn floor_int(r: &ExactRational) -> BigInt {
    r.floor().to_integer()
}

fn check_unit_interval(what: &'static str, alpha: &ExactRational) -> Result<()> {
    if alpha.is_negative() || *alpha > ExactRational::one() {
        return Err(Error::OutOfRange {
            what,
            range: "[0, 1]",
            value: alpha.clone(),
        });
    }
    Ok(())
}

/// The first `depth` digits of the non-terminating expansion of `alpha`,
/// together with the matching truncation and tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub alpha: ExactRational,
    pub p: Prime,
    pub depth: u32,
    pub digits: Vec<u64>,
    pub truncation: ExactRational,
    pub tail: ExactRational,
}

/// Expands `alpha` to `e` digits.
///
/// Digits come from `a_d = ceil(p^d alpha) - p ceil(p^{d-1} alpha) + p - 1`,
/// which is exact for every `alpha` in `(0, 1]` and picks the non-terminating
/// representative automatically.
pub fn expand(alpha: &ExactRational, p: Prime, e: u32) -> Result<Expansion> {
    if e == 0 {
        return Err(Error::ZeroDepth);
    }
    check_unit_interval("alpha", alpha)?;
    if alpha.is_zero() {
        return Ok(Expansion {
            alpha: alpha.clone(),
            p,
            depth: e,
            digits: vec![0; e as usize],
            truncation: ExactRational::zero(),
            tail: ExactRational::zero(),
        });
    }

    let pb = p.to_bigint();
    let mut scale = BigInt::one();
    let mut prev_ceil = BigInt::one();
    let mut digits = Vec::with_capacity(e as usize);
    for _ in 0..e {
        scale *= &pb;
        let c = ceil_int(&(alpha * ExactRational::from_integer(scale.clone())));
        let digit: BigInt = &c - &pb * &prev_ceil + &pb - 1u32;
        digits.push(
            digit
                .to_u64()
                .expect("base-p digit lies in [0, p-1] for alpha in (0, 1]"),
        );
        prev_ceil = c;
    }
    let truncation = ExactRational::new(prev_ceil - 1, scale);
    let tail = alpha - &truncation;
    Ok(Expansion {
        alpha: alpha.clone(),
        p,
        depth: e,
        digits,
        truncation,
        tail,
    })
}

/// `<alpha>_e`, the sum of the first `e` digit terms.
pub fn truncation(alpha: &ExactRational, p: Prime, e: u32) -> Result<ExactRational> {
    if e == 0 {
        return Err(Error::ZeroDepth);
    }
    check_unit_interval("alpha", alpha)?;
    if alpha.is_zero() {
        return Ok(ExactRational::zero());
    }
    let scale = p.pow(e);
    let c = ceil_int(&(alpha * ExactRational::from_integer(scale.clone())));
    Ok(ExactRational::new(c - 1, scale))
}

/// `alpha - <alpha>_e`.
pub fn tail(alpha: &ExactRational, p: Prime, e: u32) -> Result<ExactRational> {
    Ok(alpha - truncation(alpha, p, e)?)
}

/// The rational whose expansion repeats the first `e` digits of `alpha`
/// forever: `<alpha>_e * p^e / (p^e - 1)`.
pub fn repeat(alpha: &ExactRational, p: Prime, e: u32) -> Result<ExactRational> {
    let trunc = truncation(alpha, p, e)?;
    let pe = p.pow(e);
    Ok(trunc * ExactRational::new(pe.clone(), pe - 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusRounding {
    /// `ceil(p^e alpha)`
    pub ceil_pe: BigInt,
    /// `floor((p^e - 1) alpha)`
    pub floor_pem1: BigInt,
    /// `ceil((p^e - 1) alpha)`
    pub ceil_pem1: BigInt,
}

/// The three roundings that appear in the purity conditions, for `alpha` in `(0, 1]`.
pub fn frobenius_rounding(alpha: &ExactRational, p: Prime, e: u32) -> Result<FrobeniusRounding> {
    if e == 0 {
        return Err(Error::ZeroDepth);
    }
    if !alpha.is_positive() || *alpha > ExactRational::one() {
        return Err(Error::OutOfRange {
            what: "alpha",
            range: "(0, 1]",
            value: alpha.clone(),
        });
    }
    let pe = p.pow(e);
    let scaled = alpha * ExactRational::from_integer(pe.clone());
    let scaled_m1 = alpha * ExactRational::from_integer(&pe - 1);
    let out = FrobeniusRounding {
        ceil_pe: ceil_int(&scaled),
        floor_pem1: floor_int(&scaled_m1),
        ceil_pem1: ceil_int(&scaled_m1),
    };
    // p^e <alpha>_e is ceil_pe - 1; the other two sit within one of it.
    let base = &out.ceil_pe - 1;
    debug_assert!(&base - 1 <= out.floor_pem1 && out.floor_pem1 <= base);
    debug_assert!(base <= out.ceil_pem1 && out.ceil_pem1 <= &base + 1);
    Ok(out)
}

/// Smallest `d <= d_max` with `(p^d - 1) alpha` an integer.
///
/// This is the multiplicative order of `p` modulo the reduced denominator of
/// `alpha`; it does not exist when the denominator shares a factor with `p`.
pub fn periodicity_order(alpha: &ExactRational, p: Prime, d_max: u32) -> Result<Option<u32>> {
    check_unit_interval("alpha", alpha)?;
    let q = alpha.denom();
    if d_max == 0 {
        return Ok(None);
    }
    if q.is_one() {
        return Ok(Some(1));
    }
    let pb = p.to_bigint();
    if !q.gcd(&pb).is_one() {
        return Ok(None);
    }
    let step = pb.mod_floor(q);
    let mut power = step.clone();
    for d in 1..=d_max {
        if power.is_one() {
            return Ok(Some(d));
        }
        power = (power * &step).mod_floor(q);
    }
    Ok(None)
}
