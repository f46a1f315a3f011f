//! Small gadget families used by the tests, examples and command line.

use crate::graph::{BiboundariedGraph, Digraph, GadgetTriple};

use super::{normalize_layout, GadgetQuadruple};

/// The single edge `0 → 1` with ports `(0)` and `(1)`.
pub fn edge_gadget() -> BiboundariedGraph {
    BiboundariedGraph::new(Digraph::from_edges(2, [(0, 1)]).expect("valid edge"), vec![0], vec![1])
        .expect("valid ports")
}

/// `[G0, G1, G2, G3]` with `G0 = {0 → 0, 0 → 1}` and the rest single edges.
pub fn toy_gadgets() -> [BiboundariedGraph; 4] {
    let g0 = BiboundariedGraph::new(Digraph::from_edges(2, [(0, 0), (0, 1)]).expect("valid edges"), vec![0], vec![1])
        .expect("valid ports");
    [g0, edge_gadget(), edge_gadget(), edge_gadget()]
}

pub fn toy_quadruple() -> GadgetQuadruple {
    normalize_layout(toy_gadgets()).expect("the toy quadruple is valid")
}

/// Three single-edge gadgets: `2·1^n·3` glues to a path on `n + 3` vertices.
pub fn path_triple() -> GadgetTriple {
    GadgetTriple::new(edge_gadget(), edge_gadget(), edge_gadget()).expect("valid triple")
}

/// One vertex with a loop.
pub fn loop_vertex() -> Digraph {
    Digraph::from_edges(1, [(0, 0)]).expect("valid loop")
}
