use thiserror::Error;

use crate::var::VarId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no usable evaluation point after {0} consecutive degenerate draws")]
    DegeneratePoint(usize),
    #[error("substitution image for {0} is zero")]
    ZeroSubstitution(VarId),
    #[error("a denominator factor becomes the constant {0} under substitution")]
    ConstantDenominator(i64),
    #[error("value is not invertible: numerator is not a product of binomials 1 - m")]
    NotInvertible,
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("orders must be positive, got ({0}, {1})")]
    InvalidOrder(i64, i64),
    #[error("a must divide k (a = {a}, k = {k})")]
    NotADivisor { a: u64, k: u64 },
    #[error("invalid derivative sequence: {0}")]
    InvalidSequence(String),
    #[error("parse error: {0}")]
    Parse(String),
}
