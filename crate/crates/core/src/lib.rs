//! Exact computation of F-pure thresholds of hypersurfaces `f` in
//! `F_p[x_1, ..., x_n]` localized at the origin.
//!
//! The threshold is recovered digit by digit from its non-terminating base-`p`
//! expansion: the `e`-th truncation equals `nu_f(p^e) / p^e`, where
//! `nu_f(p^e)` is the largest `a` with `f^a` outside the Frobenius power
//! `(x_1^{p^e}, ..., x_n^{p^e})`. Everything is exact; there is no floating
//! point anywhere in the library.
//!
//! Modules, bottom-up:
//!
//! - [`basep`]: primes, base-`p` expansions, truncations, tails, repeats.
//! - [`poly`]: sparse polynomials over `F_p` and reduction modulo Frobenius
//!   powers of the maximal ideal.
//! - [`fedder`]: the splitting oracle and `nu` tables.
//! - [`fpt`]: nested bounds, certified lower bounds, rational candidates.
//! - [`purity`]: F-pure / strongly F-pure / sharply F-pure verdicts.
//! - [`fptset`]: forbidden intervals of the set of all thresholds.
//! - [`cli`]: the `fptlab` command-line front end and its result cache.

pub mod basep;
pub mod cli;
mod error;
pub mod fedder;
pub mod fpt;
pub mod fptset;
pub mod poly;
pub mod purity;

pub use basep::{ExactRational, Expansion, Prime};
pub use error::{Error, Result};
pub use fedder::{FedderOracle, NuTable, SplittingOracle};
pub use fpt::{FptApproximation, RationalCandidate};
pub use fptset::ForbiddenIntervalSet;
pub use poly::{Monomial, Polynomial};
pub use purity::{Flavor, Outcome, PurityVerdict};
