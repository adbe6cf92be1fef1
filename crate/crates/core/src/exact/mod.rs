//! Exact arithmetic: cyclotomic scalars, generic dense matrices over a
//! field, and integer Smith normal form. Everything downstream that claims
//! exactness routes through here.

mod cyclotomic;
mod matrix;
mod snf;

pub use cyclotomic::{unify, Cyclotomic, DEFAULT_CONDUCTOR_BOUND};
pub use matrix::{Field, Matrix};
pub use snf::{smith_normal_form, SnfResult};

use num::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational, the coefficient type of every exact scalar.
pub type Rational = BigRational;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("conductor {0} exceeds configured bound {1}")]
    ConductorOverflow(u32, u32),
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("malformed exact scalar `{0}`")]
    Parse(String),
}

/// `n/1` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `p/q` as a rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
