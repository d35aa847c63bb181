//! Sparse multivariate polynomials over exact complex rationals and over
//! floating complex numbers.

pub mod coeff;
mod parse;
pub(crate) mod poly;

use thiserror::Error;

pub use coeff::{exact, rat, to_c64, Exact, Field, MpComplex, NumScalar, Ring};
pub use num_complex::Complex64;
pub use parse::parse_system;
pub use poly::{ExponentVector, Polynomial, PolynomialSystem};

pub type ExactPoly = Polynomial<Exact>;
pub type ExactSystem = PolynomialSystem<Exact>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("negative exponent at line {line}, column {col}")]
    NegativeExponent { line: usize, col: usize },
    #[error("variable index 0 at line {line}, column {col} (variables start at x1)")]
    VariableIndexZero { line: usize, col: usize },
    #[error("division by a non-constant at line {line}, column {col}")]
    DivisionByNonConstant { line: usize, col: usize },
    #[error("division by zero at line {line}, column {col}")]
    DivisionByZero { line: usize, col: usize },
    #[error("input contains no polynomials")]
    EmptySystem,
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
}

impl PolyError {
    /// Parse-type failures, as opposed to shape failures.
    pub fn is_parse_error(&self) -> bool {
        !matches!(self, PolyError::DimensionMismatch { .. } | PolyError::ZeroPolynomial)
    }
}

/// Evaluate at a point; precision follows the scalar type (exact rationals,
/// doubles, or multiprecision complex numbers carrying their own bit count).
pub fn evaluate<C: Ring>(p: &Polynomial<C>, point: &[C]) -> Result<C, PolyError> {
    p.eval(point)
}

/// Evaluate an exact polynomial at a double-precision point using
/// `precision` bits of working precision.
pub fn evaluate_numeric(p: &ExactPoly, point: &[Complex64], precision: usize) -> Result<Complex64, PolyError> {
    if precision <= 53 {
        p.map(to_c64).eval(point)
    } else {
        let q = p.map(|c| MpComplex::from_exact(c, precision));
        let x: Vec<MpComplex> = point.iter().map(|z| MpComplex::from_c64(*z, precision)).collect();
        Ok(q.eval(&x)?.to_c64())
    }
}

pub fn support<C: Ring>(p: &Polynomial<C>) -> Result<Vec<ExponentVector>, PolyError> {
    p.support()
}

pub fn jacobian<C: Ring>(s: &PolynomialSystem<C>) -> Vec<Vec<Polynomial<C>>> {
    s.jacobian()
}
