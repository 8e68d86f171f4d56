//! F-pure, strongly F-pure and sharply F-pure verdicts for pairs `(R, f^lambda)`.
//!
//! Through Fedder's criterion, `R f^{N/p^e}` splits iff `nu(p^e) >= N`, so a
//! table of `nu` values decides each definitional condition level by level:
//!
//! | flavor | holds when, for some `e` | fails when, for some `e` |
//! |--------|--------------------------|---------------------------|
//! | strong | `nu >= ceil(p^e lambda)` | `lambda > (nu + 1) / p^e` |
//! | sharp  | `nu >= ceil((p^e - 1) lambda)` | `lambda > (nu + 1) / p^e` |
//! | F-pure | `lambda <= nu / (p^e - 1)` | `nu < floor((p^e - 1) lambda)` |
//!
//! This is a semi-decision procedure. At `lambda = fpt` with `(p^e - 1) fpt`
//! never integral the pair is F-pure, yet no finite table can show it; such
//! verdicts come back [`Outcome::Undecided`]. [`classify_at_threshold`] covers
//! that case when the caller knows the exact threshold.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::basep::{ceil_int, floor_int, periodicity_order, ExactRational, Prime};
use crate::error::{Error, Result};
use crate::fedder::{nu_sequence, NuTable};
use crate::poly::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    FPure,
    Strong,
    Sharp,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::FPure, Flavor::Strong, Flavor::Sharp];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::FPure => "f-pure",
            Flavor::Strong => "strong",
            Flavor::Sharp => "sharp",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Undecided,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Undecided => "undecided",
        }
    }
}

/// What a decided verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// The defining inclusion splits at the witness level.
    Splits,
    /// The defining inclusion does not split at the witness level.
    DoesNotSplit,
    /// `lambda <= nu(p^e) / (p^e - 1) <= fpt`.
    BelowCertifiedLower,
    /// `lambda > (nu(p^e) + 1) / p^e >= fpt`.
    AboveUpperBound,
    /// No pair with `lambda > 1` is F-pure.
    AboveOne,
    /// The pair `(R, f^0)` is F-pure because `R` is.
    ZeroParameter,
    /// Follows from another flavor through strong => sharp => F-pure.
    Implied(Flavor),
    /// Behaviour at the exact threshold.
    AtThreshold,
    /// `(p^e - 1) fpt` is never an integer: the denominator is divisible by `p`.
    DenominatorDivisibleByP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PurityVerdict {
    pub flavor: Flavor,
    pub outcome: Outcome,
    pub witness: Option<u32>,
    /// `None` exactly when the outcome is undecided.
    pub reason: Option<Reason>,
    pub depth_used: u32,
}

impl PurityVerdict {
    fn decided(flavor: Flavor, outcome: Outcome, witness: Option<u32>, reason: Reason, depth: u32) -> Self {
        PurityVerdict {
            flavor,
            outcome,
            witness,
            reason: Some(reason),
            depth_used: depth,
        }
    }

    fn undecided(flavor: Flavor, depth: u32) -> Self {
        PurityVerdict {
            flavor,
            outcome: Outcome::Undecided,
            witness: None,
            reason: None,
            depth_used: depth,
        }
    }
}

/// The three verdicts for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdicts {
    pub f_pure: PurityVerdict,
    pub strong: PurityVerdict,
    pub sharp: PurityVerdict,
}

impl Verdicts {
    pub fn get(&self, flavor: Flavor) -> &PurityVerdict {
        match flavor {
            Flavor::FPure => &self.f_pure,
            Flavor::Strong => &self.strong,
            Flavor::Sharp => &self.sharp,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &PurityVerdict> {
        [&self.f_pure, &self.strong, &self.sharp].into_iter()
    }

    pub fn any_undecided(&self) -> bool {
        self.iter().any(|v| v.outcome == Outcome::Undecided)
    }

    /// Pushes decided outcomes along strong => sharp => F-pure and back along
    /// the contrapositive.
    fn close_under_implications(&mut self) {
        let depth = self.f_pure.depth_used;
        let implied = |flavor, outcome, from| PurityVerdict::decided(flavor, outcome, None, Reason::Implied(from), depth);
        if self.strong.outcome == Outcome::Holds && self.sharp.outcome == Outcome::Undecided {
            self.sharp = implied(Flavor::Sharp, Outcome::Holds, Flavor::Strong);
        }
        if self.sharp.outcome == Outcome::Holds && self.f_pure.outcome == Outcome::Undecided {
            self.f_pure = implied(Flavor::FPure, Outcome::Holds, Flavor::Sharp);
        }
        if self.f_pure.outcome == Outcome::Fails && self.sharp.outcome == Outcome::Undecided {
            self.sharp = implied(Flavor::Sharp, Outcome::Fails, Flavor::FPure);
        }
        if self.sharp.outcome == Outcome::Fails && self.strong.outcome == Outcome::Undecided {
            self.strong = implied(Flavor::Strong, Outcome::Fails, Flavor::Sharp);
        }
        debug_assert!(self.respects_implications());
    }

    /// No reported pair of verdicts contradicts strong => sharp => F-pure.
    pub fn respects_implications(&self) -> bool {
        let holds = |v: &PurityVerdict| v.outcome == Outcome::Holds;
        let fails = |v: &PurityVerdict| v.outcome == Outcome::Fails;
        !(holds(&self.strong) && fails(&self.sharp))
            && !(holds(&self.sharp) && fails(&self.f_pure))
            && !(holds(&self.strong) && fails(&self.f_pure))
    }
}

fn frac(num: impl Into<BigInt>, den: BigInt) -> ExactRational {
    ExactRational::new(num.into(), den)
}

/// Verdicts for `(R, f^lambda)` read off an existing table.
pub fn classify_table(table: &NuTable, lambda: &ExactRational) -> Result<Verdicts> {
    if lambda.is_negative() {
        return Err(Error::OutOfRange {
            what: "lambda",
            range: "[0, infinity)",
            value: lambda.clone(),
        });
    }
    let depth = table.depth();
    if *lambda > ExactRational::one() {
        let fail = |flavor| PurityVerdict::decided(flavor, Outcome::Fails, None, Reason::AboveOne, depth);
        return Ok(Verdicts {
            f_pure: fail(Flavor::FPure),
            strong: fail(Flavor::Strong),
            sharp: fail(Flavor::Sharp),
        });
    }

    let p = table.p();
    let mut strong_split = None;
    let mut sharp_split = None;
    let mut f_pure_nonsplit = None;
    let mut below_certified = None;
    let mut above_upper = None;
    for e in 1..=depth {
        let pe = p.pow(e);
        let nu = BigInt::from(table.nu_at(e));
        let scaled = lambda * ExactRational::from_integer(pe.clone());
        let scaled_m1 = lambda * ExactRational::from_integer(&pe - 1);
        if strong_split.is_none() && nu >= ceil_int(&scaled) {
            strong_split = Some(e);
        }
        if sharp_split.is_none() && nu >= ceil_int(&scaled_m1) {
            sharp_split = Some(e);
        }
        if f_pure_nonsplit.is_none() && nu < floor_int(&scaled_m1) {
            f_pure_nonsplit = Some(e);
        }
        if below_certified.is_none() && *lambda <= frac(nu.clone(), &pe - 1) {
            below_certified = Some(e);
        }
        if above_upper.is_none() && *lambda > frac(nu + 1, pe) {
            above_upper = Some(e);
        }
    }

    let pick = |flavor, hold: Option<(u32, Reason)>, fail: Option<(u32, Reason)>| match (hold, fail) {
        (Some((e, r)), _) => PurityVerdict::decided(flavor, Outcome::Holds, Some(e), r, depth),
        (None, Some((e, r))) => PurityVerdict::decided(flavor, Outcome::Fails, Some(e), r, depth),
        (None, None) => PurityVerdict::undecided(flavor, depth),
    };
    let upper_fail = above_upper.map(|e| (e, Reason::AboveUpperBound));

    let strong = pick(Flavor::Strong, strong_split.map(|e| (e, Reason::Splits)), upper_fail);
    let sharp = pick(Flavor::Sharp, sharp_split.map(|e| (e, Reason::Splits)), upper_fail);
    let f_pure = match f_pure_nonsplit {
        Some(e) => PurityVerdict::decided(Flavor::FPure, Outcome::Fails, Some(e), Reason::DoesNotSplit, depth),
        None => pick(
            Flavor::FPure,
            below_certified.map(|e| (e, Reason::BelowCertifiedLower)),
            upper_fail,
        ),
    };

    let mut verdicts = Verdicts { f_pure, strong, sharp };
    verdicts.close_under_implications();
    Ok(verdicts)
}

/// Classifies `(R, f^lambda)` using `nu(p^e)` for `e <= depth`.
///
/// `lambda > 1` fails every flavor without touching the polynomial.
pub fn classify(f: &Polynomial, lambda: &ExactRational, depth: u32) -> Result<Verdicts> {
    if *lambda > ExactRational::one() {
        f.ensure_nonunit()?;
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        let fail = |flavor| PurityVerdict::decided(flavor, Outcome::Fails, None, Reason::AboveOne, depth);
        return Ok(Verdicts {
            f_pure: fail(Flavor::FPure),
            strong: fail(Flavor::Strong),
            sharp: fail(Flavor::Sharp),
        });
    }
    classify_table(&nu_sequence(f, depth)?, lambda)
}

/// Verdicts at `lambda = fpt`, trusting the caller that `fpt` is exact.
///
/// The pair is F-pure and not strongly F-pure; it is sharply F-pure exactly
/// when `(p^e - 1) fpt` is an integer for some `e`. That search stops at
/// `d_max`; beyond it the sharp verdict is undecided unless the denominator is
/// divisible by `p`, which rules it out for every `e`.
pub fn classify_at_threshold(fpt: &ExactRational, p: Prime, d_max: u32) -> Result<Verdicts> {
    if fpt.is_negative() || *fpt > ExactRational::one() {
        return Err(Error::OutOfRange {
            what: "fpt",
            range: "[0, 1]",
            value: fpt.clone(),
        });
    }
    if fpt.is_zero() {
        let hold = |flavor| PurityVerdict::decided(flavor, Outcome::Holds, Some(1), Reason::ZeroParameter, d_max);
        return Ok(Verdicts {
            f_pure: hold(Flavor::FPure),
            strong: hold(Flavor::Strong),
            sharp: hold(Flavor::Sharp),
        });
    }
    let f_pure = PurityVerdict::decided(Flavor::FPure, Outcome::Holds, None, Reason::AtThreshold, d_max);
    let strong = PurityVerdict::decided(Flavor::Strong, Outcome::Fails, None, Reason::AtThreshold, d_max);
    let sharp = match periodicity_order(fpt, p, d_max)? {
        Some(d) => PurityVerdict::decided(Flavor::Sharp, Outcome::Holds, Some(d), Reason::AtThreshold, d_max),
        None if !fpt.denom().gcd(&p.to_bigint()).is_one() => {
            PurityVerdict::decided(Flavor::Sharp, Outcome::Fails, None, Reason::DenominatorDivisibleByP, d_max)
        }
        None => PurityVerdict::undecided(Flavor::Sharp, d_max),
    };
    Ok(Verdicts { f_pure, strong, sharp })
}
