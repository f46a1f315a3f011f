//! Explicit digraphs on `{0, …, n-1}` and the biboundaried gluing machinery.

mod boundaried;
mod text;

pub use boundaried::{delta, delta_with_maps, glue, glue_with_map, parse_word, BiboundariedGraph, Family, GadgetTriple};
pub use text::GraphObject;

use std::collections::BTreeSet;

use thiserror::Error;

/// Largest graph accepted by the brute-force isomorphism test.
pub const ISO_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    BadVertex { vertex: usize, n: usize },
    #[error("port counts differ: {left} vs {right}")]
    PortArityMismatch { left: usize, right: usize },
    #[error("bad port sequences: {0}")]
    BadPorts(String),
    #[error("the gluing word is empty")]
    EmptyWord,
    #[error("letter {0} has no gadget in the family")]
    UnknownLetter(usize),
    #[error("graph of size {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("bad gadget triple: {0}")]
    BadTriple(String),
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
}

impl GraphError {
    pub fn kind(&self) -> &'static str {
        match self {
            GraphError::BadVertex { .. } => "BadVertex",
            GraphError::PortArityMismatch { .. } => "PortArityMismatch",
            GraphError::BadPorts(_) => "BadPorts",
            GraphError::EmptyWord => "EmptyWord",
            GraphError::UnknownLetter(_) => "UnknownLetter",
            GraphError::TooLarge { .. } => "TooLarge",
            GraphError::BadTriple(_) => "BadTriple",
            GraphError::ParseError { .. } => "ParseError",
        }
    }
}

/// A finite digraph whose vertex set is `{0, …, n-1}`. Self-loops are
/// allowed; the edge set is a relation, so parallel edges collapse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Digraph {
    succ: Vec<BTreeSet<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            succ: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self, GraphError> {
        let mut g = Digraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for vertex in [u, v] {
            if vertex >= n {
                return Err(GraphError::BadVertex { vertex, n });
            }
        }
        self.succ[u].insert(v);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(BTreeSet::len).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ.get(u).is_some_and(|s| s.contains(&v))
    }

    /// Out-neighbourhood `{v : (u, v) ∈ E}`.
    pub fn out_neighbors(&self, u: usize) -> &BTreeSet<usize> {
        &self.succ[u]
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    pub fn has_loop(&self) -> bool {
        (0..self.vertex_count()).any(|u| self.has_edge(u, u))
    }

    /// Undirected adjacency of the symmetric closure, loops dropped.
    pub fn undirected_neighbors(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertex_count()];
        for (u, v) in self.edges() {
            if u != v {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        adj
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let shift = self.vertex_count();
        let mut succ = self.succ.clone();
        succ.extend(
            other
                .succ
                .iter()
                .map(|s| s.iter().map(|&v| v + shift).collect::<BTreeSet<_>>()),
        );
        Digraph { succ }
    }

    /// Disjoint union of `k` copies; `k = 0` gives the empty graph.
    pub fn power_union(&self, k: usize) -> Digraph {
        (0..k).fold(Digraph::new(0), |acc, _| acc.disjoint_union(self))
    }

    /// Induced subgraph on `vertices`, relabeled `0..k` in increasing order.
    /// The returned map sends each new label to its original vertex.
    pub fn spanned_subgraph(&self, vertices: &BTreeSet<usize>) -> Result<(Digraph, Vec<usize>), GraphError> {
        let n = self.vertex_count();
        if let Some(&bad) = vertices.iter().find(|&&v| v >= n) {
            return Err(GraphError::BadVertex { vertex: bad, n });
        }
        let order: Vec<usize> = vertices.iter().copied().collect();
        let mut new_label = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            new_label[v] = i;
        }
        let mut sub = Digraph::new(order.len());
        for &u in &order {
            for &v in &self.succ[u] {
                if new_label[v] != usize::MAX {
                    sub.succ[new_label[u]].insert(new_label[v]);
                }
            }
        }
        Ok((sub, order))
    }

    /// Renames vertex `v` to `perm[v]`; `perm` must be a permutation.
    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        debug_assert_eq!(perm.len(), self.vertex_count());
        let mut g = Digraph::new(self.vertex_count());
        for (u, v) in self.edges() {
            g.succ[perm[u]].insert(perm[v]);
        }
        g
    }

    /// Brute-force isomorphism test for graphs of at most [`ISO_LIMIT`] vertices.
    pub fn isomorphic_small(&self, other: &Digraph) -> Result<bool, GraphError> {
        for g in [self, other] {
            if g.vertex_count() > ISO_LIMIT {
                return Err(GraphError::TooLarge {
                    size: g.vertex_count(),
                    limit: ISO_LIMIT,
                });
            }
        }
        if self.vertex_count() != other.vertex_count() || self.edge_count() != other.edge_count() {
            return Ok(false);
        }
        let profile = |g: &Digraph| -> Vec<(usize, usize, bool)> {
            let mut indeg = vec![0; g.vertex_count()];
            for (_, v) in g.edges() {
                indeg[v] += 1;
            }
            (0..g.vertex_count())
                .map(|u| (g.succ[u].len(), indeg[u], g.has_edge(u, u)))
                .collect()
        };
        let (pa, pb) = (profile(self), profile(other));
        let mut sorted_a = pa.clone();
        let mut sorted_b = pb.clone();
        sorted_a.sort();
        sorted_b.sort();
        if sorted_a != sorted_b {
            return Ok(false);
        }
        let n = self.vertex_count();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        Ok(self.extend_iso(other, &pa, &pb, 0, &mut map, &mut used))
    }

    fn extend_iso(
        &self,
        other: &Digraph,
        pa: &[(usize, usize, bool)],
        pb: &[(usize, usize, bool)],
        u: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if u == self.vertex_count() {
            return true;
        }
        for cand in 0..other.vertex_count() {
            if used[cand] || pa[u] != pb[cand] {
                continue;
            }
            let consistent = (0..u).all(|w| {
                self.has_edge(u, w) == other.has_edge(cand, map[w])
                    && self.has_edge(w, u) == other.has_edge(map[w], cand)
            });
            if !consistent {
                continue;
            }
            map[u] = cand;
            used[cand] = true;
            if self.extend_iso(other, pa, pb, u + 1, map, used) {
                return true;
            }
            used[cand] = false;
        }
        false
    }

    /// Every digraph (loops allowed) on exactly `n` vertices, in increasing
    /// order of the edge bitmask. There are `2^(n*n)` of them.
    pub fn all_on(n: usize) -> impl Iterator<Item = Digraph> {
        let slots = n * n;
        assert!(slots < 32, "enumeration limited to n <= 5");
        (0u32..(1u32 << slots)).map(move |mask| {
            let mut g = Digraph::new(n);
            for bit in 0..slots {
                if mask >> bit & 1 == 1 {
                    g.succ[bit / n].insert(bit % n);
                }
            }
            g
        })
    }
}
