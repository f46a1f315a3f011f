//! From SAT instances to succinct graphs: gadget layout, label arithmetic,
//! circuit synthesis, the quadruple construction and two direct reductions.

mod auxiliary;
mod cnf;
mod compile;
mod construct;
mod layout;
pub mod samples;

pub use auxiliary::{reduce_clique, reduce_loop, CliqueVariant};
pub use cnf::CnfInstance;
pub use compile::{compile, gate_budget};
pub use construct::{build_quadruple, pump_check, PumpReport, BUILD_COPY_LIMIT};
pub use layout::{
    adjacency_table, normalize_layout, quadruple_from_json, triple_from_json, triple_to_json, Condition,
    GadgetQuadruple, LayoutConstants,
};

use num_bigint::BigUint;
use thiserror::Error;

use crate::circuit::CircuitError;
use crate::graph::GraphError;
use crate::mso::MsoError;
use crate::sgr::SgrError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("literal {literal} is outside variables 1..={vars}")]
    BadLiteral { literal: i32, vars: usize },
    #[error("index {index} is not below {bound}")]
    IndexOutOfRange { index: BigUint, bound: BigUint },
    #[error("{condition} fails: {detail}")]
    ValidationError { condition: Condition, detail: String },
    #[error("the quadruple has not been validated")]
    NotValidated,
    #[error("constructed quadruple fails {condition}: {detail}")]
    ConstructionFailed { condition: Condition, detail: String },
    #[error("{what} of size {size} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Mso(#[from] MsoError),
    #[error(transparent)]
    Sgr(#[from] SgrError),
}

impl ReduceError {
    pub fn kind(&self) -> &'static str {
        match self {
            ReduceError::ParseError { .. } => "ParseError",
            ReduceError::BadLiteral { .. } => "BadLiteral",
            ReduceError::IndexOutOfRange { .. } => "IndexOutOfRange",
            ReduceError::ValidationError { .. } => "ValidationError",
            ReduceError::NotValidated => "NotValidated",
            ReduceError::ConstructionFailed { .. } => "ConstructionFailed",
            ReduceError::TooLarge { .. } => "TooLarge",
            ReduceError::Graph(e) => e.kind(),
            ReduceError::Circuit(e) => e.kind(),
            ReduceError::Mso(e) => e.kind(),
            ReduceError::Sgr(e) => e.kind(),
        }
    }

    /// The violated condition, for validation and construction failures.
    pub fn condition(&self) -> Option<Condition> {
        match self {
            ReduceError::ValidationError { condition, .. } | ReduceError::ConstructionFailed { condition, .. } => {
                Some(*condition)
            }
            _ => None,
        }
    }
}
