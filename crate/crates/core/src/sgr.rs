//! Succinct graph representations `⟨N, C⟩`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{BoolCircuit, CircuitError, RawCircuit};
use crate::graph::Digraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SgrError {
    #[error("label {label} is not below N = {n}")]
    LabelOutOfRange { label: BigUint, n: BigUint },
    #[error("N = {n} exceeds the materialization limit {limit}")]
    TooLargeToMaterialize { n: BigUint, limit: usize },
    #[error("invalid representation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl SgrError {
    pub fn kind(&self) -> &'static str {
        match self {
            SgrError::LabelOutOfRange { .. } => "LabelOutOfRange",
            SgrError::TooLargeToMaterialize { .. } => "TooLargeToMaterialize",
            SgrError::Invalid(_) => "InvalidSgr",
            SgrError::Circuit(e) => e.kind(),
        }
    }
}

/// The graph on labels `0..N` whose edge `x → y` exists iff `C(x, y) = 1`.
/// The circuit's answers on labels `≥ N` are never consulted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sgr {
    n_vertices: BigUint,
    circuit: BoolCircuit,
}

impl Sgr {
    pub fn new(n_vertices: BigUint, circuit: BoolCircuit) -> Result<Self, SgrError> {
        if n_vertices < BigUint::one() {
            return Err(SgrError::Invalid("N must be at least 1".into()));
        }
        if n_vertices > BigUint::one() << circuit.label_bits() {
            return Err(SgrError::Invalid(format!(
                "N = {n_vertices} does not fit in {} label bits",
                circuit.label_bits()
            )));
        }
        Ok(Sgr { n_vertices, circuit })
    }

    pub fn n_vertices(&self) -> &BigUint {
        &self.n_vertices
    }

    pub fn circuit(&self) -> &BoolCircuit {
        &self.circuit
    }

    pub fn edge_query(&self, x: &BigUint, y: &BigUint) -> Result<bool, SgrError> {
        for label in [x, y] {
            if label >= &self.n_vertices {
                return Err(SgrError::LabelOutOfRange {
                    label: label.clone(),
                    n: self.n_vertices.clone(),
                });
            }
        }
        Ok(self.circuit.eval(x, y)?)
    }

    /// Evaluates all `N²` label pairs. Rows are evaluated in parallel and
    /// merged in label order.
    pub fn materialize(&self, limit: usize) -> Result<Digraph, SgrError> {
        let n = self
            .n_vertices
            .to_usize()
            .filter(|&n| n <= limit)
            .ok_or_else(|| SgrError::TooLargeToMaterialize {
                n: self.n_vertices.clone(),
                limit,
            })?;
        let rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|x| {
                (0..n)
                    .filter(|&y| {
                        self.circuit
                            .eval_u64(x as u64, y as u64)
                            .expect("labels below N fit the circuit")
                    })
                    .collect()
            })
            .collect();
        let edges = rows
            .into_iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.into_iter().map(move |y| (x, y)));
        Ok(Digraph::from_edges(n, edges).expect("labels are in range"))
    }

    /// `64 · (N² + 64)`, the admissible gate count for a graph on `N` vertices.
    pub fn size_bound(&self) -> BigUint {
        (&self.n_vertices * &self.n_vertices + 64u32) * 64u32
    }

    /// Whether the circuit is within the fixed polynomial of the adjacency
    /// matrix size. Advisory only.
    pub fn check_size_convention(&self) -> bool {
        BigUint::from(self.circuit.gate_count()) <= self.size_bound()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SgrBundle::from(self)).expect("bundle serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Sgr, SgrError> {
        let bundle: SgrBundle = serde_json::from_str(text).map_err(|e| SgrError::Circuit(crate::circuit::json_error(e)))?;
        let n: BigUint = bundle
            .n
            .parse()
            .map_err(|_| SgrError::Invalid(format!("N {:?} is not a decimal integer", bundle.n)))?;
        Sgr::new(n, bundle.circuit.into_circuit()?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SgrBundle {
    #[serde(rename = "N")]
    n: String,
    circuit: RawCircuit,
}

impl From<&Sgr> for SgrBundle {
    fn from(s: &Sgr) -> Self {
        SgrBundle {
            n: s.n_vertices.to_string(),
            circuit: RawCircuit::from(&s.circuit),
        }
    }
}
