//! Exact arithmetic for valuations over symbolic real generators and for the
//! truncated Novikov field.

mod basis;
mod coeff;
pub mod enclose;
mod novikov;
mod valuation;

use thiserror::Error;

pub use basis::{Generator, Provider, ValuationBasis, DEFAULT_REFINEMENT_DEPTH};
pub use coeff::{phase_pi_to_complex, reduce_mod2, Coeff, ExactTag, DEFAULT_EPS};
pub use novikov::{NovCtx, Novikov};
pub use valuation::{parse_linexpr, parse_rational, Valuation, ValuationDisplay};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("ordering still ambiguous after {depth} refinements")]
    AmbiguousOrdering { depth: u32 },
    #[error("operands carry different cutoffs")]
    CutoffMismatch,
    #[error("operands use different valuation bases")]
    BasisMismatch,
    #[error("division by zero")]
    ZeroDivision,
    #[error("zero has no valuation")]
    ZeroHasNoValuation,
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
}
