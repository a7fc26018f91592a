//! Reducibility of integer power series in Z[[x]] whose constant term is a
//! prime power, with explicit truncated factorizations.
//!
//! For `f = p^n + p^m βx + αx²` (p ∤ αβ) the series is reducible in Z[[x]]
//! exactly when it is reducible as a polynomial over Z_p, which comes down to
//! whether its discriminant is a square in Z_p. [`classify`] decides that and
//! [`factor`] builds the factors coefficient by coefficient. [`oracle`]
//! re-checks everything by brute force.

pub mod arith;
pub mod classify;
pub mod error;
pub mod factor;
pub mod oracle;
pub mod padics;
pub mod report;
pub mod serial;
pub mod series;

pub use classify::{classify_general, classify_quadratic, QuadInput, Rule, Verdict, VerdictKind};
pub use error::{Error, Result};
pub use factor::FactorPair;
pub use series::TruncSeries;
