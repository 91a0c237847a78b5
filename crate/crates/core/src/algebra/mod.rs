//! Exact arithmetic: rationals, cyclotomic fields ℚ(ζ_n), polynomials and
//! truncated power series over them, and matrices of both.

mod cyclo;
mod matrix;
mod poly;
mod qpoly;

pub use cyclo::{cyclotomic_polynomial, euler_phi, Cyclo};
pub use matrix::{CycloMatrix, ScalarMatrix};
pub use poly::CycloPoly;

use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("cannot embed Q(zeta_{from}) into Q(zeta_{into})")]
    NotASubfield { from: u32, into: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("power series has zero constant term")]
    ZeroConstantTerm,
    #[error("nonzero coefficient at odd degree {degree}")]
    OddCoefficient { degree: usize },
    #[error("polynomial division leaves a nonzero remainder")]
    InexactDivision,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub(crate) fn lcm_order(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| AlgebraError::ParseRational(s.to_string()))
}
