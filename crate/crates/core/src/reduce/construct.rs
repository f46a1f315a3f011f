use std::collections::BTreeSet;

use serde::Serialize;

use super::layout::{invert, middle_order, shared_positions};
use super::{normalize_layout, Condition, GadgetQuadruple, ReduceError};
use crate::graph::{delta, BiboundariedGraph, Digraph, GadgetTriple};
use crate::mso::{eval, Formula, MsoError};

/// Largest number of `G1` copies glued while searching for room for `Ω`.
pub const BUILD_COPY_LIMIT: usize = 64;

/// `G1` glued `n` times, relabeled so its shared ports come last.
fn repeated(g1: &BiboundariedGraph, n: usize) -> Result<BiboundariedGraph, ReduceError> {
    let family = [(1, g1.clone())].into_iter().collect();
    let glued = delta(&family, &vec![1; n])?;
    let order = middle_order(&glued, &shared_positions(&glued));
    Ok(glued.relabel(&invert(&order)))
}

/// Shared ports of `g` together with their out-neighbours.
fn anchor_vertices(g: &BiboundariedGraph) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for v in g.shared_ports() {
        out.insert(v);
        out.extend(g.graph().out_neighbors(v).iter().copied());
    }
    out
}

/// `H ⊔ Ω` on the labels of `host`: `H` keeps its labels inside `host`,
/// `Ω` takes the lowest free labels and every other vertex is isolated.
fn place_omega(host: &BiboundariedGraph, anchor: &BTreeSet<usize>, omega: &Digraph) -> Result<BiboundariedGraph, ReduceError> {
    let n = host.vertex_count();
    let mut g = Digraph::new(n);
    for &u in anchor {
        for &v in host.graph().out_neighbors(u) {
            if anchor.contains(&v) {
                g.add_edge(u, v)?;
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|v| !anchor.contains(v)).collect();
    for (u, v) in omega.edges() {
        g.add_edge(free[u], free[v])?;
    }
    Ok(BiboundariedGraph::new(g, host.p1().to_vec(), host.p2().to_vec())?)
}

/// Builds `(G′0, G′1, G2, G3)` where `G′1` is the shortest repetition of `G1`
/// with room for `Ω` beside the shared-port neighbourhood `H`, and `G′0` is
/// `H ⊔ Ω` padded with isolated vertices.
pub fn build_quadruple(triple: &GadgetTriple, omega: &Digraph) -> Result<GadgetQuadruple, ReduceError> {
    if triple.g1.shared_ports().len() == triple.g1.vertex_count() {
        return Err(ReduceError::ConstructionFailed {
            condition: Condition::CondII,
            detail: "the shared ports of G1 cover every vertex".into(),
        });
    }
    for n in 1..=BUILD_COPY_LIMIT {
        let g1 = repeated(&triple.g1, n)?;
        let anchor = anchor_vertices(&g1);
        if g1.vertex_count() < anchor.len() + omega.vertex_count() {
            continue;
        }
        let g0 = place_omega(&g1, &anchor, omega)?;
        return normalize_layout([g0, g1, triple.g2.clone(), triple.g3.clone()]).map_err(|e| match e {
            ReduceError::ValidationError { condition, detail } => ReduceError::ConstructionFailed { condition, detail },
            other => other,
        });
    }
    Err(ReduceError::TooLarge {
        what: "copies of G1",
        size: BUILD_COPY_LIMIT + 1,
        limit: BUILD_COPY_LIMIT,
    })
}

/// Outcome of evaluating a sentence along the pumping words `2·1^n·3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PumpReport {
    pub expected: bool,
    pub checked: Vec<usize>,
    /// First `n` whose glued graph disagrees with `expected`.
    pub first_mismatch: Option<usize>,
}

impl PumpReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Evaluates `phi` on `Δ(2·1^n·3)` for `n = 0..=n_max`, stopping at the first mismatch.
pub fn pump_check(triple: &GadgetTriple, phi: &Formula, expected: bool, n_max: usize) -> Result<PumpReport, ReduceError> {
    let family = triple.family();
    let mut report = PumpReport {
        expected,
        checked: Vec::new(),
        first_mismatch: None,
    };
    for n in 0..=n_max {
        let glued = delta(&family, &GadgetTriple::pump_word(n))?;
        let verdict = eval(glued.graph(), phi).map_err(|e| match e {
            MsoError::TooLargeForBruteForce { n, limit } => ReduceError::TooLarge {
                what: "glued graph",
                size: n,
                limit,
            },
            other => other.into(),
        })?;
        report.checked.push(n);
        if verdict != expected {
            report.first_mismatch = Some(n);
            break;
        }
    }
    Ok(report)
}
