//! Associative combination rules on `[0, x_max]`, their additive
//! representations, and the deduced probability rules on lattices.

mod extract;
mod grid;
mod rules;

use thiserror::Error;

pub use extract::{extract_additive_representation, Representation, BISECTION_TOL, EXTRACTION_DEPTH};
pub use grid::{associativity_residual, rescaling_transport, GridFunction, MonotoneMap, Residual, DEFAULT_POINTS};
pub use rules::cox_rules_check;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoxError {
    #[error("grid needs at least 2 points per axis and a positive domain")]
    BadGrid,
    #[error("expected {expected} values, found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("not strictly increasing at grid point ({0}, {1})")]
    NotMonotone(usize, usize),
    #[error("f(x, 0) != x at grid point {0}")]
    NoIdentity(usize),
    #[error("no admissible triple: domain too small")]
    DomainTooSmall,
    #[error("associativity residual {0:.3e} exceeds the extraction threshold")]
    NotAssociative(f64),
    #[error("bisection could not bracket f(x,x) = {0}")]
    Bracket(f64),
    #[error("unit must lie in (0, x_max]")]
    BadUnit,
    #[error("rescaling map is not invertible on the domain: {0}")]
    NotInvertible(String),
    #[error("unknown built-in function `{0}` (expected sum, sumprod or sumsq)")]
    UnknownBuiltin(String),
    #[error("grid format: {0}")]
    Format(String),
}
