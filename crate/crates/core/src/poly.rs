//! Sparse multivariate polynomials over `F_p`.
//!
//! The only ideals we ever reduce by are the Frobenius powers of the maximal
//! ideal at the origin, `m^[p^e] = (x_1^{p^e}, ..., x_n^{p^e})`. These are
//! monomial ideals, so the normal form of `g` is `g` with every monomial that
//! has some exponent `>= p^e` deleted.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::basep::Prime;
use crate::error::{Error, Result};

/// Exponent vector of a monomial. All monomials of one polynomial share a length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u64>);

impl Monomial {
    pub fn new(exponents: Vec<u64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Whether the monomial lies in `(x_1^bound, ..., x_n^bound)`.
    fn hits(&self, bound: u64) -> bool {
        self.0.iter().any(|&x| x >= bound)
    }
}

/// A polynomial in `F_p[x_1, ..., x_n]`. Coefficients are stored in `[1, p-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    p: Prime,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod_small(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn frobenius_bound(p: Prime, e: u32) -> u64 {
    p.checked_pow(e).unwrap_or(u64::MAX)
}

impl Polynomial {
    /// Builds a polynomial from `(exponents, coefficient)` pairs, collecting like
    /// terms and reducing coefficients modulo `p`.
    ///
    /// Panics if an exponent vector does not have length `nvars`.
    pub fn from_terms<I>(p: Prime, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u64>, u64)>,
    {
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length must equal nvars");
            let slot = acc.entry(Monomial(exps)).or_insert(0);
            *slot = (*slot + c % p.get()) % p.get();
        }
        acc.retain(|_, c| *c != 0);
        Polynomial { p, nvars, terms: acc }
    }

    pub fn zero(p: Prime, nvars: usize) -> Self {
        Polynomial {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: Prime, nvars: usize) -> Self {
        Self::constant(p, nvars, 1)
    }

    pub fn constant(p: Prime, nvars: usize, c: u64) -> Self {
        Self::from_terms(p, nvars, [(vec![0; nvars], c)])
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order: exponent vectors descending lexicographically.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> + '_ {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exponents: &[u64]) -> u64 {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Nonzero with zero constant term, i.e. a non-unit of the local ring at the origin.
    pub fn ensure_nonunit(&self) -> Result<()> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial(self.p.get()));
        }
        if self.constant_term() != 0 {
            return Err(Error::Unit);
        }
        Ok(())
    }

    /// Parses the `fptlab` polynomial grammar over `F_p`.
    pub fn parse(text: &str, p: Prime) -> Result<Self> {
        let parsed = Parser::new(text, p).parse()?;
        if parsed.is_zero() {
            return Err(Error::ZeroPolynomial(p.get()));
        }
        Ok(parsed)
    }

    /// Like [`Polynomial::parse`], additionally requiring `f` to vanish at the origin.
    pub fn parse_nonunit(text: &str, p: Prime) -> Result<Self> {
        let f = Self::parse(text, p)?;
        f.ensure_nonunit()?;
        Ok(f)
    }

    fn mul_bounded(&self, other: &Polynomial, bound: u64) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let p = self.p.get();
        let mut acc: HashMap<Vec<u64>, u64> = HashMap::new();
        for (ma, &ca) in &self.terms {
            'rhs: for (mb, &cb) in &other.terms {
                let mut exps = Vec::with_capacity(self.nvars);
                for (x, y) in ma.0.iter().zip(&mb.0) {
                    let s = x.saturating_add(*y);
                    if s >= bound {
                        continue 'rhs;
                    }
                    exps.push(s);
                }
                let slot = acc.entry(exps).or_insert(0);
                *slot = (*slot + mul_mod(ca, cb, p)) % p;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (Monomial(m), c))
            .collect();
        Polynomial {
            p: self.p,
            nvars: self.nvars,
            terms,
        }
    }

    /// The full product, with no reduction.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.mul_bounded(other, u64::MAX)
    }

    fn reduce_bound(&self, bound: u64) -> Polynomial {
        Polynomial {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.hits(bound))
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Normal form modulo `m^[p^e]`.
    pub fn reduce(&self, e: u32) -> Polynomial {
        self.reduce_bound(frobenius_bound(self.p, e))
    }

    /// `g^p`, which over `F_p` is `g` with every exponent multiplied by `p`.
    fn frobenius(&self) -> Polynomial {
        let p = self.p.get();
        Polynomial {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (Monomial(m.0.iter().map(|x| x.saturating_mul(p)).collect()), c))
                .collect(),
        }
    }

    fn pow_bounded(&self, mut exp: u64, bound: u64) -> Polynomial {
        let mut acc = Polynomial::one(self.p, self.nvars).reduce_bound(bound);
        let mut base = self.reduce_bound(bound);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_bounded(&base, bound);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_bounded(&base, bound);
            }
        }
        acc
    }
}

/// `f^a` reduced modulo `m^[p^e]`.
///
/// Writing `a = d + p q` with `d < p`, we have `f^a = f^d (f^q)^p`, and
/// `(f^q)^p` only needs `f^q` modulo `m^[p^{e-1}]`. The recursion therefore
/// walks the base-`p` digits of `a`; each step multiplies a small power
/// `f^d` (square-and-multiply, reduced after every product) against the
/// Frobenius image of the previous level.
///
/// When `p^e` exceeds `u64` no monomial is ever discarded.
pub fn pow_reduced(f: &Polynomial, a: u64, e: u32) -> Polynomial {
    if a == 0 {
        return Polynomial::one(f.p, f.nvars).reduce(e);
    }
    if e == 0 {
        // modulo (x_1, ..., x_n) only the constant term survives
        let c = f.constant_term();
        return Polynomial::constant(f.p, f.nvars, pow_mod_small(c, a, f.p.get()));
    }
    let p = f.p.get();
    let bound = frobenius_bound(f.p, e);
    let (q, d) = (a / p, a % p);
    let mut acc = if q == 0 {
        Polynomial::one(f.p, f.nvars)
    } else {
        pow_reduced(f, q, e - 1).frobenius().reduce_bound(bound)
    };
    if d > 0 {
        acc = acc.mul_bounded(&f.pow_bounded(d, bound), bound);
    }
    acc
}

/// Whether every monomial of `g` has some exponent `>= p^e`.
pub fn in_frobenius_power(g: &Polynomial, e: u32) -> bool {
    let bound = frobenius_bound(g.p, e);
    g.terms.keys().all(|m| m.hits(bound))
}

fn variable_name(index: usize, nvars: usize) -> String {
    if nvars <= 3 {
        ["x", "y", "z"][index].to_string()
    } else {
        format!("x{}", index + 1)
    }
}

impl fmt::Display for Polynomial {
    /// Canonical serialization, e.g. `x^2*y + 3*y^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (index, &x) in m.0.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(variable_name(index, self.nvars)),
                    _ => factors.push(format!("{}^{}", variable_name(index, self.nvars), x)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Recursive-descent parser for
///
/// ```text
/// poly   := term ('+' term)*
/// term   := coeff ('*' factor)* | factor ('*' factor)*
/// factor := var ('^' nat)?
/// var    := 'x' | 'y' | 'z' | 'x' nat
/// coeff  := nat
/// ```
///
/// `x`, `y`, `z` are variables 1, 2, 3; `xN` is variable `N`, so `x1` and `x`
/// name the same variable.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    p: Prime,
}

struct RawTerm {
    coeff: u64,
    // (variable index, exponent)
    factors: Vec<(usize, u64)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, p: Prime) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            p,
        }
    }

    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return self.error(start, "expected a natural number");
        }
        let mut value: u64 = 0;
        for &d in digits {
            value = match value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d - b'0')))
            {
                Some(v) => v,
                None => return self.error(start, "number too large"),
            };
        }
        Ok(value)
    }

    /// Coefficients may be arbitrarily long; only their residue matters.
    fn coeff(&mut self) -> u64 {
        let p = self.p.get();
        self.digits()
            .iter()
            .fold(0, |acc, &d| (mul_mod(acc, 10, p) + u64::from(d - b'0') % p) % p)
    }

    fn var(&mut self) -> Result<usize> {
        let start = self.pos;
        let index = match self.src.get(self.pos) {
            Some(b'x') => {
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    let n = self.nat()?;
                    if n == 0 || n > 4096 {
                        return self.error(start + 1, "variable index must be in 1..=4096");
                    }
                    (n - 1) as usize
                } else {
                    0
                }
            }
            Some(b'y') => {
                self.pos += 1;
                1
            }
            Some(b'z') => {
                self.pos += 1;
                2
            }
            _ => return self.error(start, "expected a variable"),
        };
        Ok(index)
    }

    fn factor(&mut self) -> Result<(usize, u64)> {
        self.skip_ws();
        let index = self.var()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.nat()?;
            Ok((index, exp))
        } else {
            Ok((index, 1))
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut term = RawTerm {
            coeff: 1,
            factors: Vec::new(),
        };
        match self.peek() {
            Some(c) if c.is_ascii_digit() => term.coeff = self.coeff(),
            _ => term.factors.push(self.factor()?),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            term.factors.push(self.factor()?);
        }
        Ok(term)
    }

    fn parse(mut self) -> Result<Polynomial> {
        let mut raw = vec![self.term()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            raw.push(self.term()?);
        }
        if let Some(c) = self.peek() {
            return self.error(self.pos, format!("unexpected character '{}'", c as char));
        }
        let nvars = raw
            .iter()
            .flat_map(|t| t.factors.iter().map(|&(i, _)| i + 1))
            .max()
            .unwrap_or(1);
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let mut exps = vec![0u64; nvars];
            for (i, x) in t.factors {
                exps[i] = match exps[i].checked_add(x) {
                    Some(v) => v,
                    None => return self.error(0, "exponent overflow"),
                };
            }
            terms.push((exps, t.coeff));
        }
        Ok(Polynomial::from_terms(self.p, nvars, terms))
    }
}
