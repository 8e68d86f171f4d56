//! JSON and plain-text renderings of command results.
//!
//! Every JSON shape is a plain struct so that field order, and therefore the
//! output bytes, are fixed.

use std::fmt::Write as _;

use serde::Serialize;

use crate::basep::{ExactRational, Prime};
use crate::fedder::NuTable;
use crate::fpt::{CandidateStatus, FptApproximation, GuessStatus, Positivity, RationalCandidate, SpecialValues};
use crate::fptset::ForbiddenIntervalSet;
use crate::poly::Polynomial;
use crate::purity::{Reason, Verdicts};

#[derive(Debug, Serialize)]
pub struct Rational {
    pub num: String,
    pub den: String,
}

impl From<&ExactRational> for Rational {
    fn from(r: &ExactRational) -> Self {
        Rational {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

fn rationals(values: &[ExactRational]) -> Vec<Rational> {
    values.iter().map(Rational::from).collect()
}

fn list(values: &[ExactRational]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Serialize)]
pub struct NuReport {
    command: &'static str,
    prime: u64,
    poly: String,
    depth: u32,
    nu: Vec<u64>,
    digits: Vec<u64>,
    truncations: Vec<Rational>,
}

fn truncations(table: &NuTable) -> Vec<ExactRational> {
    (1..=table.depth()).map(|e| table.truncation(e)).collect()
}

pub fn nu(table: &NuTable) -> NuReport {
    NuReport {
        command: "nu",
        prime: table.p().get(),
        poly: table.polynomial().to_string(),
        depth: table.depth(),
        nu: table.nu().to_vec(),
        digits: table.digits().to_vec(),
        truncations: rationals(&truncations(table)),
    }
}

pub fn nu_text(table: &NuTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "f = {} over F_{}", table.polynomial(), table.p());
    for e in 1..=table.depth() {
        let _ = writeln!(
            s,
            "e={e} nu={} digit={} truncation={}",
            table.nu_at(e),
            table.digits()[e as usize - 1],
            table.truncation(e)
        );
    }
    s
}

#[derive(Serialize)]
pub struct GuessReport {
    value: Rational,
    preperiod: u32,
    period: u32,
    status: &'static str,
}

#[derive(Serialize)]
pub struct CandidateReport {
    value: Rational,
    status: &'static str,
    period: Option<u32>,
}

fn candidate_status(status: CandidateStatus) -> &'static str {
    match status {
        CandidateStatus::ExactCertified => "exact-certified",
        CandidateStatus::ConsistentAtDepth => "consistent-at-depth",
        CandidateStatus::LowerBoundOnly => "lower-bound-only",
    }
}

fn guess_status(status: GuessStatus) -> &'static str {
    match status {
        GuessStatus::CertifiedLowerBound => "certified-lower-bound",
        GuessStatus::Uncertified => "uncertified-guess",
    }
}

fn candidate_report(candidate: &RationalCandidate) -> CandidateReport {
    CandidateReport {
        value: (&candidate.candidate).into(),
        status: candidate_status(candidate.status),
        period: candidate.period,
    }
}

#[derive(Serialize)]
pub struct FptReport {
    command: &'static str,
    prime: u64,
    poly: String,
    depth: u32,
    nu: Vec<u64>,
    digits: Vec<u64>,
    truncations: Vec<Rational>,
    lower: Rational,
    upper: Rational,
    certified_lower: Rational,
    certified_level: u32,
    guess: Option<GuessReport>,
    candidate: CandidateReport,
}

pub fn fpt(approx: &FptApproximation, candidate: &RationalCandidate) -> FptReport {
    FptReport {
        command: "fpt",
        prime: approx.p().get(),
        poly: approx.table.polynomial().to_string(),
        depth: approx.depth(),
        nu: approx.table.nu().to_vec(),
        digits: approx.table.digits().to_vec(),
        truncations: rationals(&approx.truncations),
        lower: (&approx.lower).into(),
        upper: (&approx.upper).into(),
        certified_lower: (&approx.certified_lower).into(),
        certified_level: approx.certified_level,
        guess: approx.guess.as_ref().map(|g| GuessReport {
            value: (&g.value).into(),
            preperiod: g.preperiod,
            period: g.period,
            status: guess_status(g.status),
        }),
        candidate: candidate_report(candidate),
    }
}

fn candidate_line(s: &mut String, candidate: &RationalCandidate) {
    let period = candidate
        .period
        .map_or_else(|| "none".to_string(), |d| d.to_string());
    let _ = writeln!(
        s,
        "candidate: {} ({}, period {period})",
        candidate.candidate,
        candidate_status(candidate.status)
    );
}

pub fn fpt_text(approx: &FptApproximation, candidate: &RationalCandidate) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "f = {} over F_{}, depth {}",
        approx.table.polynomial(),
        approx.p(),
        approx.depth()
    );
    let _ = writeln!(s, "truncations: {}", list(&approx.truncations));
    let _ = writeln!(s, "lower (strict): {}", approx.lower);
    let _ = writeln!(s, "upper: {}", approx.upper);
    let _ = writeln!(
        s,
        "certified lower: {} (level {})",
        approx.certified_lower, approx.certified_level
    );
    match &approx.guess {
        None => s.push_str("guess: none\n"),
        Some(g) => {
            let _ = writeln!(
                s,
                "guess: {} (preperiod {}, period {}, {})",
                g.value,
                g.preperiod,
                g.period,
                guess_status(g.status)
            );
        }
    }
    candidate_line(&mut s, candidate);
    s
}

#[derive(Serialize)]
pub struct PositivityReport {
    decided: bool,
    witness: Option<u32>,
    probed_depth: Option<u32>,
}

#[derive(Serialize)]
pub struct CertifyReport {
    command: &'static str,
    prime: u64,
    poly: String,
    depth: u32,
    d_max: u32,
    certified_lower: Rational,
    upper: Rational,
    candidate: CandidateReport,
    positive: PositivityReport,
    is_one: bool,
}

pub fn certify(
    approx: &FptApproximation,
    candidate: &RationalCandidate,
    special: &SpecialValues,
    d_max: u32,
) -> CertifyReport {
    CertifyReport {
        command: "certify",
        prime: approx.p().get(),
        poly: approx.table.polynomial().to_string(),
        depth: approx.depth(),
        d_max,
        certified_lower: (&approx.certified_lower).into(),
        upper: (&approx.upper).into(),
        candidate: candidate_report(candidate),
        positive: match special.positive {
            Positivity::Positive { witness } => PositivityReport {
                decided: true,
                witness: Some(witness),
                probed_depth: None,
            },
            Positivity::Undecided { depth } => PositivityReport {
                decided: false,
                witness: None,
                probed_depth: Some(depth),
            },
        },
        is_one: special.is_one,
    }
}

pub fn certify_text(approx: &FptApproximation, candidate: &RationalCandidate, special: &SpecialValues) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "f = {} over F_{}, depth {}",
        approx.table.polynomial(),
        approx.p(),
        approx.depth()
    );
    let _ = writeln!(s, "fpt in [{}, {}]", approx.certified_lower, approx.upper);
    candidate_line(&mut s, candidate);
    match special.positive {
        Positivity::Positive { witness } => {
            let _ = writeln!(s, "positive: yes (level {witness})");
        }
        Positivity::Undecided { depth } => {
            let _ = writeln!(s, "positive: undecided up to level {depth}");
        }
    }
    let _ = writeln!(s, "fpt = 1: {}", if special.is_one { "yes" } else { "no" });
    s
}

#[derive(Serialize)]
pub struct VerdictReport {
    flavor: &'static str,
    outcome: &'static str,
    witness: Option<u32>,
    reason: Option<String>,
    depth_used: u32,
}

fn reason_name(reason: Reason) -> String {
    match reason {
        Reason::Splits => "splits".into(),
        Reason::DoesNotSplit => "does-not-split".into(),
        Reason::BelowCertifiedLower => "below-certified-lower".into(),
        Reason::AboveUpperBound => "above-upper-bound".into(),
        Reason::AboveOne => "above-one".into(),
        Reason::ZeroParameter => "zero-parameter".into(),
        Reason::Implied(flavor) => format!("implied-by-{}", flavor.name()),
        Reason::AtThreshold => "at-threshold".into(),
        Reason::DenominatorDivisibleByP => "denominator-divisible-by-p".into(),
    }
}

#[derive(Serialize)]
pub struct ClassifyReport {
    command: &'static str,
    prime: u64,
    poly: Option<String>,
    lambda: Rational,
    mode: &'static str,
    verdicts: Vec<VerdictReport>,
}

pub fn classify(p: Prime, poly: Option<&Polynomial>, lambda: &ExactRational, verdicts: &Verdicts) -> ClassifyReport {
    ClassifyReport {
        command: "classify",
        prime: p.get(),
        poly: poly.map(ToString::to_string),
        lambda: lambda.into(),
        mode: if poly.is_some() { "table" } else { "at-threshold" },
        verdicts: verdicts
            .iter()
            .map(|v| VerdictReport {
                flavor: v.flavor.name(),
                outcome: v.outcome.name(),
                witness: v.witness,
                reason: v.reason.map(reason_name),
                depth_used: v.depth_used,
            })
            .collect(),
    }
}

pub fn classify_text(p: Prime, poly: Option<&Polynomial>, lambda: &ExactRational, verdicts: &Verdicts) -> String {
    let mut s = String::new();
    match poly {
        Some(f) => {
            let _ = writeln!(s, "pair (R, f^({lambda})) with f = {f} over F_{p}");
        }
        None => {
            let _ = writeln!(s, "pair (R, f^({lambda})) at fpt(f) = {lambda} over F_{p}");
        }
    }
    for v in verdicts.iter() {
        let _ = write!(s, "{}: {}", v.flavor.name(), v.outcome.name());
        if let Some(w) = v.witness {
            let _ = write!(s, " (witness e={w})");
        }
        match v.reason {
            Some(r) => {
                let _ = writeln!(s, " [{}]", reason_name(r));
            }
            None => {
                let _ = writeln!(s, " [depth {}]", v.depth_used);
            }
        }
    }
    s
}

#[derive(Serialize)]
pub struct IntervalReport {
    left: Rational,
    right: Rational,
}

#[derive(Serialize)]
pub struct LevelReport {
    level: u32,
    intervals: Vec<IntervalReport>,
    measure: Rational,
}

#[derive(Serialize)]
pub struct IntervalsReport {
    command: &'static str,
    prime: u64,
    levels: Vec<LevelReport>,
}

pub fn intervals(p: Prime, levels: &[(ForbiddenIntervalSet, ExactRational)]) -> IntervalsReport {
    IntervalsReport {
        command: "intervals",
        prime: p.get(),
        levels: levels
            .iter()
            .map(|(set, m)| LevelReport {
                level: set.e,
                intervals: set
                    .intervals
                    .iter()
                    .map(|i| IntervalReport {
                        left: (&i.left).into(),
                        right: (&i.right).into(),
                    })
                    .collect(),
                measure: m.into(),
            })
            .collect(),
    }
}

pub fn intervals_text(p: Prime, levels: &[(ForbiddenIntervalSet, ExactRational)]) -> String {
    let mut s = String::new();
    for (set, m) in levels {
        let _ = writeln!(s, "p={p} e={} intervals={} measure={m}", set.e, set.intervals.len());
        for i in &set.intervals {
            let _ = writeln!(s, "  ({}, {})", i.left, i.right);
        }
    }
    s
}
