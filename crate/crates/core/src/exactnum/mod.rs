//! Exact arithmetic: rationals, the cyclotomic field `Q(zeta_ell)`, integer
//! Laurent polynomials in `q`, and dense exact linear algebra.

mod cyclotomic;
mod laurent;
mod matrix;
mod rational;

pub use cyclotomic::{cyc_make, cyclotomic_field, cyclotomic_polynomial, CycField, CycScalar};
pub use laurent::LaurentPoly;
pub use matrix::ExactMatrix;
pub use rational::{rat, rat_int, solve_rational, Rat};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("conductor {0} is not an odd integer >= 3")]
    BadConductor(i64),
    #[error("cyclotomic fields differ: ell = {0} vs ell = {1}")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact Laurent division: quotient {quotient}, remainder {remainder}")]
    InexactDivision {
        quotient: LaurentPoly,
        remainder: LaurentPoly,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular: rank {rank} < {dim}")]
    Singular { rank: usize, dim: usize },
    #[error("linear system has no solution")]
    Inconsistent,
}

