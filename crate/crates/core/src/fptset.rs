//! Forbidden intervals of `FPT_p`, the set of all F-pure thresholds in
//! characteristic `p`.
//!
//! Every threshold `lambda` satisfies `lambda >= repeat(lambda, e)` for all
//! `e`. Equivalently, no threshold lies in `(beta, p^e / (p^e - 1) * beta)`
//! for `beta` a multiple of `1/p^e` in `[0, 1]`. For each level these are
//! `p^e - 1` disjoint open intervals of total length `1/2`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::basep::{repeat, truncation, ExactRational, Prime};
use crate::error::{Error, Result};

/// Levels with more intervals than this are refused rather than enumerated.
pub const MAX_INTERVALS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenInterval {
    pub left: ExactRational,
    pub right: ExactRational,
}

impl OpenInterval {
    pub fn contains(&self, x: &ExactRational) -> bool {
        self.left < *x && *x < self.right
    }

    pub fn length(&self) -> ExactRational {
        &self.right - &self.left
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenIntervalSet {
    pub p: Prime,
    pub e: u32,
    /// Sorted by left endpoint.
    pub intervals: Vec<OpenInterval>,
}

fn interval_count(p: Prime, e: u32) -> Result<u64> {
    if e == 0 {
        return Err(Error::ZeroDepth);
    }
    match p.checked_pow(e) {
        Some(pe) if pe - 1 <= MAX_INTERVALS => Ok(pe - 1),
        _ => Err(Error::Overflow(p.get(), e)),
    }
}

/// `(k/p^e, k/(p^e - 1))` for `k = 1, ..., p^e - 1`.
///
/// `k = 0` gives an empty interval and `k = p^e` lies beyond `1`, so neither
/// appears.
pub fn forbidden_intervals(p: Prime, e: u32) -> Result<ForbiddenIntervalSet> {
    let count = interval_count(p, e)?;
    let pe = p.pow(e);
    let pe_m1: BigInt = &pe - 1u32;
    let intervals = (1..=count)
        .map(|k| OpenInterval {
            left: ExactRational::new(BigInt::from(k), pe.clone()),
            right: ExactRational::new(BigInt::from(k), pe_m1.clone()),
        })
        .collect();
    Ok(ForbiddenIntervalSet { p, e, intervals })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    /// `true` only means no exclusion was found up to the checked depth.
    pub admissible: bool,
    pub violation: Option<(u32, OpenInterval)>,
}

/// Checks `lambda >= repeat(lambda, e)` for `e = 1..=depth` and reports the
/// first forbidden interval containing `lambda`.
pub fn admissible(lambda: &ExactRational, p: Prime, depth: u32) -> Result<Admissibility> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    for e in 1..=depth {
        let rep = repeat(lambda, p, e)?;
        if *lambda < rep {
            let interval = OpenInterval {
                left: truncation(lambda, p, e)?,
                right: rep,
            };
            debug_assert!(interval.contains(lambda));
            return Ok(Admissibility {
                admissible: false,
                violation: Some((e, interval)),
            });
        }
    }
    Ok(Admissibility {
        admissible: true,
        violation: None,
    })
}

/// Total length of the level-`e` forbidden intervals.
pub fn measure(p: Prime, e: u32) -> Result<ExactRational> {
    let set = forbidden_intervals(p, e)?;
    // Every length is k / (p^e (p^e - 1)); sum numerators over that common denominator.
    let den: BigInt = p.pow(e) * (p.pow(e) - 1u32);
    let mut num = BigInt::zero();
    for interval in &set.intervals {
        // each endpoint denominator divides den, so this is exact
        let right = interval.right.numer() * (&den / interval.right.denom());
        let left = interval.left.numer() * (&den / interval.left.denom());
        num += right - left;
    }
    Ok(ExactRational::new(num, den))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

pub const ASCII_WIDTH: usize = 80;
const ASCII_LABEL: usize = 6;
const SVG_WIDTH: i64 = 1000;
const SVG_MARGIN: i64 = 60;
const SVG_ROW: i64 = 40;
const SVG_RADIUS: i64 = 4;

/// Draws one number line per level with the forbidden intervals marked.
pub fn render(p: Prime, levels: &[u32], format: RenderFormat) -> Result<String> {
    if levels.is_empty() {
        return Err(Error::ZeroDepth);
    }
    let sets = levels
        .iter()
        .map(|&e| forbidden_intervals(p, e))
        .collect::<Result<Vec<_>>>()?;
    let max_e = *levels.iter().max().expect("levels is nonempty");
    let ticks = p.checked_pow(max_e).ok_or(Error::Overflow(p.get(), max_e))?;
    Ok(match format {
        RenderFormat::Ascii => render_ascii(&sets, ticks),
        RenderFormat::Svg => render_svg(&sets, ticks),
    })
}

/// `round(x * scale)` for non-negative `x`, halves rounded up.
fn round_scaled(x: &ExactRational, scale: i64) -> i64 {
    let half = ExactRational::new(BigInt::one(), BigInt::from(2));
    (x * ExactRational::from_integer(scale.into()) + half)
        .floor()
        .to_integer()
        .to_i64()
        .expect("coordinate fits in i64")
}

/// Exact decimal with at most three fractional digits, trailing zeros dropped.
fn decimal(x: &ExactRational) -> String {
    let milli = round_scaled(x, 1000);
    let (whole, frac) = (milli.div_euclid(1000), milli.rem_euclid(1000));
    if frac == 0 {
        whole.to_string()
    } else {
        format!("{whole}.{frac:03}").trim_end_matches('0').to_string()
    }
}

fn fraction_label(k: u64, n: u64) -> String {
    let r = ExactRational::new(BigInt::from(k), BigInt::from(n));
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_ascii(sets: &[ForbiddenIntervalSet], ticks: u64) -> String {
    let track = ASCII_WIDTH - ASCII_LABEL;
    let last = (track - 1) as i64;
    let col = |x: &ExactRational| round_scaled(x, last) as usize;
    let mut out = String::new();
    for set in sets {
        let mut row: Vec<char> = vec!['.'; track];
        for interval in &set.intervals {
            let (a, b) = (col(&interval.left), col(&interval.right));
            for c in row.iter_mut().take(b).skip(a + 1) {
                *c = '=';
            }
            row[a] = '(';
            row[b] = ')';
        }
        let _ = writeln!(
            out,
            "{:<width$}{}",
            format!("e={}", set.e),
            row.iter().collect::<String>(),
            width = ASCII_LABEL
        );
    }

    let mut axis: Vec<char> = vec!['-'; track];
    let mut labels: Vec<char> = vec![' '; track + 8];
    let mut free_from = 0;
    for k in 0..=ticks {
        let c = col(&ExactRational::new(BigInt::from(k), BigInt::from(ticks)));
        axis[c] = '|';
        let label = fraction_label(k, ticks);
        if c >= free_from && c + label.len() <= labels.len() {
            for (i, ch) in label.chars().enumerate() {
                labels[c + i] = ch;
            }
            free_from = c + label.len() + 1;
        }
    }
    let _ = writeln!(out, "{:<width$}{}", "", axis.iter().collect::<String>(), width = ASCII_LABEL);
    let label_row: String = labels.iter().collect();
    let _ = writeln!(out, "{:<width$}{}", "", label_row.trim_end(), width = ASCII_LABEL);
    out
}

fn render_svg(sets: &[ForbiddenIntervalSet], ticks: u64) -> String {
    let x = |v: &ExactRational| decimal(&(v * ExactRational::from_integer(SVG_WIDTH.into())));
    let height = SVG_ROW * (sets.len() as i64 + 2);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} 0 {} {}" width="{}" height="{}">"#,
        -SVG_MARGIN,
        SVG_WIDTH + 2 * SVG_MARGIN,
        height,
        SVG_WIDTH + 2 * SVG_MARGIN,
        height
    );
    for (i, set) in sets.iter().enumerate() {
        let y = SVG_ROW * (i as i64 + 1);
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-size="14" text-anchor="end">e={}</text>"#,
            -10,
            y + 5,
            set.e
        );
        let _ = writeln!(
            out,
            r#"  <line x1="0" y1="{y}" x2="{SVG_WIDTH}" y2="{y}" stroke="gray" stroke-dasharray="1,3"/>"#
        );
        for interval in &set.intervals {
            let (a, b) = (x(&interval.left), x(&interval.right));
            let _ = writeln!(
                out,
                r#"  <line class="forbidden" x1="{a}" y1="{y}" x2="{b}" y2="{y}" stroke="blue" stroke-width="2"/>"#
            );
            for cx in [&a, &b] {
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{cx}" cy="{y}" r="{SVG_RADIUS}" fill="white" stroke="blue"/>"#
                );
            }
        }
    }
    let y = SVG_ROW * (sets.len() as i64 + 1);
    let _ = writeln!(
        out,
        r#"  <line x1="0" y1="{y}" x2="{SVG_WIDTH}" y2="{y}" stroke="black"/>"#
    );
    for k in 0..=ticks {
        let tx = x(&ExactRational::new(BigInt::from(k), BigInt::from(ticks)));
        let _ = writeln!(
            out,
            r#"  <line x1="{tx}" y1="{}" x2="{tx}" y2="{}" stroke="black"/>"#,
            y - 5,
            y + 5
        );
        let _ = writeln!(
            out,
            r#"  <text x="{tx}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            y + 20,
            fraction_label(k, ticks)
        );
    }
    out.push_str("</svg>\n");
    out
}
