//! Twisted L-values, p-adic L-values and Iwasawa-theoretic invariants of
//! elliptic curves over false Tate curve extensions Q(mu_p, m^(1/p)).
//!
//! The library is organized in layers:
//!
//! - [`numerics`]: exact integers/rationals, p-adic numbers, cyclotomic
//!   numbers, and high-precision reals/complexes with tracked error bounds.
//! - [`elliptic`]: curve models, Tate's algorithm, point counts, periods,
//!   torsion, and local data over the tower fields.
//! - [`fieldtower`]: arithmetic of Q ⊂ Q(mu_p) ⊂ Q(mu_p, m^(1/p)):
//!   Frobenius classes, conductors, Kummer symbols.
//! - [`artin`]: the representations sigma and rho, their local polynomials,
//!   twist conductors and functional-equation signs.
//! - [`lseries`]: Dirichlet coefficients, the Gamma-factor kernel, L-value
//!   evaluation, functional-equation tests and rational recognition.
//! - [`epsilon`]: local epsilon factors at p via Gauss sums and explicit
//!   class field theory.
//! - [`padicl`]: assembly of the p-adic L-values, BSD quotients, and the
//!   congruence check.
//! - [`iwasawa`]: Weierstrass preparation, Euler characteristics, lambda
//!   invariants, root numbers and the main biconditional report.

pub mod artin;
pub mod curvedb;
pub mod elliptic;
pub mod epsilon;
pub mod fieldtower;
pub mod iwasawa;
pub mod lseries;
pub mod numerics;
pub mod padicl;

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not ordinary: p | a_p")]
    NotOrdinary,
    #[error("bad prime: {0}")]
    BadPrime(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("insufficient coefficient budget: need about {required} terms, cap is {cap}")]
    InsufficientBudget { required: u64, cap: u64 },
    #[error("indeterminate sign: residuals do not separate")]
    IndeterminateSign,
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Provenance of an arithmetic assumption fed into a computation.
///
/// Selmer finiteness and mu = 0 are never silently assumed; every report
/// carries one of these tags for each such input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Established by descent in the literature.
    DescentKnown,
    /// Deduced from a computed L-value through the BSD formula.
    BsdAnalytic,
    /// Assumed by the caller.
    Assumed,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::DescentKnown => write!(f, "descent-known"),
            Provenance::BsdAnalytic => write!(f, "BSD-analytic"),
            Provenance::Assumed => write!(f, "assumed"),
        }
    }
}
