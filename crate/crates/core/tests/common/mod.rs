//! Reference implementations shared by the integration tests.
//!
//! Nothing here calls the library's arithmetic: polynomials are re-expanded
//! with a plain hash map, digits come from long division, and `nu` is found by
//! a linear scan over fully expanded powers.

#![allow(dead_code)]

use std::collections::HashMap;

use fptlab::basep::ratio;
use fptlab::{ExactRational, Polynomial, Prime};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_f9f7;
pub const CORPUS_SIZE: usize = 200;

/// A polynomial over `F_p` as a bare exponent -> coefficient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Naive {
    pub p: u64,
    pub terms: HashMap<Vec<u64>, u64>,
}

impl Naive {
    pub fn from_poly(f: &Polynomial) -> Self {
        let terms = f.terms().map(|(m, c)| (m.exponents().to_vec(), c)).collect();
        Naive { p: f.p().get(), terms }
    }

    pub fn one(p: u64, nvars: usize) -> Self {
        Naive {
            p,
            terms: HashMap::from([(vec![0; nvars], 1)]),
        }
    }

    pub fn mul(&self, other: &Naive) -> Naive {
        let mut terms: HashMap<Vec<u64>, u64> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m: Vec<u64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let slot = terms.entry(m).or_insert(0);
                *slot = (*slot + ca * cb) % self.p;
            }
        }
        terms.retain(|_, c| *c != 0);
        Naive { p: self.p, terms }
    }

    /// Drops every monomial with some exponent `>= p^e`.
    pub fn reduce(&self, e: u32) -> Naive {
        let bound = self.p.pow(e);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.iter().all(|&x| x < bound))
            .map(|(m, &c)| (m.clone(), c))
            .collect();
        Naive { p: self.p, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_as(&self, f: &Polynomial) -> bool {
        *self == Naive::from_poly(f)
    }
}

/// `f^a`, fully expanded with no reduction along the way.
pub fn naive_pow(f: &Polynomial, a: u64) -> Naive {
    let base = Naive::from_poly(f);
    let mut acc = Naive::one(f.p().get(), f.nvars());
    for _ in 0..a {
        acc = acc.mul(&base);
    }
    acc
}

/// `nu(p^e)` by scanning every `a < p^e`, expanding fully and reducing once.
pub fn naive_nu(f: &Polynomial, e: u32) -> u64 {
    let size = f.p().get().pow(e);
    let base = Naive::from_poly(f);
    let mut power = Naive::one(f.p().get(), f.nvars());
    let mut best = 0;
    for a in 0..size {
        if !power.reduce(e).is_zero() {
            best = a;
        }
        power = power.mul(&base);
    }
    best
}

/// Non-terminating base-`p` digits of `num/den` in `(0, 1]` by long division.
///
/// The remainder stays in `(0, 1]`: each digit is `ceil(p r) - 1`.
pub fn long_division(alpha: &ExactRational, p: u64, e: u32) -> Vec<u64> {
    assert!(*alpha > ExactRational::zero() && *alpha <= ExactRational::one());
    let den = alpha.denom().clone();
    let mut num = alpha.numer().clone();
    let p_big = BigInt::from(p);
    let mut digits = Vec::with_capacity(e as usize);
    for _ in 0..e {
        let scaled = &num * &p_big;
        let digit: BigInt = Integer::div_ceil(&scaled, &den) - 1u32;
        num = scaled - &digit * &den;
        digits.push(u64::try_from(digit).unwrap());
    }
    digits
}

pub fn digit_sum(digits: &[u64], p: u64) -> ExactRational {
    let mut acc = ExactRational::zero();
    let mut scale = BigInt::one();
    for &d in digits {
        scale *= p;
        acc += ExactRational::new(BigInt::from(d), scale.clone());
    }
    acc
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// Random rational in `(0, 1]` with denominator at most `max_den`.
pub fn random_unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> ExactRational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(1..=den);
    ratio(num, den)
}

/// A seeded list of non-unit polynomials with at most 3 variables, total
/// degree at most 6 and at most 4 terms, over `F_2`, `F_3` or `F_5`.
pub fn corpus() -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut out = Vec::with_capacity(CORPUS_SIZE);
    while out.len() < CORPUS_SIZE {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let nvars = rng.gen_range(1..=3usize);
        let nterms = rng.gen_range(1..=4usize);
        let terms: Vec<(Vec<u64>, u64)> = (0..nterms)
            .map(|_| {
                let degree = rng.gen_range(1..=6u64);
                let mut exps = vec![0u64; nvars];
                for _ in 0..degree {
                    exps[rng.gen_range(0..nvars)] += 1;
                }
                (exps, rng.gen_range(1..p))
            })
            .collect();
        let f = Polynomial::from_terms(prime(p), nvars, terms);
        if !f.is_zero() {
            out.push(f);
        }
    }
    out
}

/// Deepest level used for `f` in the digit-range suite.
pub fn corpus_depth(f: &Polynomial) -> u32 {
    if f.p().get() == 2 {
        4
    } else {
        3
    }
}
