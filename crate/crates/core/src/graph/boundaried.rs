use std::collections::{BTreeMap, BTreeSet};

use super::{Digraph, GraphError};

/// Gadgets indexed by the letters of gluing words.
pub type Family = BTreeMap<usize, BiboundariedGraph>;

/// A digraph with primary ports `p1` and secondary ports `p2` of equal length.
/// The two sequences may share vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiboundariedGraph {
    pub(crate) graph: Digraph,
    pub(crate) p1: Vec<usize>,
    pub(crate) p2: Vec<usize>,
}

impl BiboundariedGraph {
    pub fn new(graph: Digraph, p1: Vec<usize>, p2: Vec<usize>) -> Result<Self, GraphError> {
        if p1.len() != p2.len() {
            return Err(GraphError::PortArityMismatch {
                left: p1.len(),
                right: p2.len(),
            });
        }
        let n = graph.vertex_count();
        for (name, ports) in [("p1", &p1), ("p2", &p2)] {
            if let Some(&v) = ports.iter().find(|&&v| v >= n) {
                return Err(GraphError::BadVertex { vertex: v, n });
            }
            let distinct: BTreeSet<_> = ports.iter().collect();
            if distinct.len() != ports.len() {
                return Err(GraphError::BadPorts(format!("{name} repeats a vertex")));
            }
        }
        Ok(BiboundariedGraph { graph, p1, p2 })
    }

    /// A graph without ports.
    pub fn unported(graph: Digraph) -> Self {
        BiboundariedGraph {
            graph,
            p1: Vec::new(),
            p2: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn p1(&self) -> &[usize] {
        &self.p1
    }

    pub fn p2(&self) -> &[usize] {
        &self.p2
    }

    pub fn port_count(&self) -> usize {
        self.p1.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// `P1 \ P2`, in vertex order.
    pub fn p1_only(&self) -> Vec<usize> {
        let p2: BTreeSet<_> = self.p2.iter().copied().collect();
        let mut v: Vec<usize> = self.p1.iter().copied().filter(|x| !p2.contains(x)).collect();
        v.sort_unstable();
        v
    }

    /// `P2 \ P1`, in vertex order.
    pub fn p2_only(&self) -> Vec<usize> {
        let p1: BTreeSet<_> = self.p1.iter().copied().collect();
        let mut v: Vec<usize> = self.p2.iter().copied().filter(|x| !p1.contains(x)).collect();
        v.sort_unstable();
        v
    }

    /// `P1 ∩ P2`, in vertex order.
    pub fn shared_ports(&self) -> Vec<usize> {
        let p2: BTreeSet<_> = self.p2.iter().copied().collect();
        let mut v: Vec<usize> = self.p1.iter().copied().filter(|x| p2.contains(x)).collect();
        v.sort_unstable();
        v
    }

    /// Applies the vertex renaming `perm` to the graph and both port sequences.
    pub fn relabel(&self, perm: &[usize]) -> BiboundariedGraph {
        BiboundariedGraph {
            graph: self.graph.relabel(perm),
            p1: self.p1.iter().map(|&v| perm[v]).collect(),
            p2: self.p2.iter().map(|&v| perm[v]).collect(),
        }
    }
}

/// `a ⊕ b` together with the map sending each vertex of `b` to its label in
/// the result.
///
/// Labeling: `a` keeps its labels, the i-th primary port of `b` becomes the
/// i-th secondary port of `a`, and the remaining vertices of `b` follow in
/// increasing order of their original labels.
pub fn glue_with_map(
    a: &BiboundariedGraph,
    b: &BiboundariedGraph,
) -> Result<(BiboundariedGraph, Vec<usize>), GraphError> {
    if a.port_count() != b.port_count() {
        return Err(GraphError::PortArityMismatch {
            left: a.port_count(),
            right: b.port_count(),
        });
    }
    let mut map = vec![usize::MAX; b.vertex_count()];
    for (&pb, &pa) in b.p1.iter().zip(&a.p2) {
        map[pb] = pa;
    }
    let mut next = a.vertex_count();
    for slot in map.iter_mut().filter(|m| **m == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let mut graph = a.graph.disjoint_union(&Digraph::new(next - a.vertex_count()));
    for (u, v) in b.graph.edges() {
        graph.succ[map[u]].insert(map[v]);
    }
    let glued = BiboundariedGraph {
        graph,
        p1: a.p1.clone(),
        p2: b.p2.iter().map(|&v| map[v]).collect(),
    };
    Ok((glued, map))
}

pub fn glue(a: &BiboundariedGraph, b: &BiboundariedGraph) -> Result<BiboundariedGraph, GraphError> {
    glue_with_map(a, b).map(|(g, _)| g)
}

/// Left fold of [`glue`] over `word`, also returning, for every position of
/// the word, where that gadget copy's vertices ended up.
pub fn delta_with_maps(gamma: &Family, word: &[usize]) -> Result<(BiboundariedGraph, Vec<Vec<usize>>), GraphError> {
    let lookup = |letter: usize| gamma.get(&letter).ok_or(GraphError::UnknownLetter(letter));
    let (&first, rest) = word.split_first().ok_or(GraphError::EmptyWord)?;
    let mut acc = lookup(first)?.clone();
    let mut maps = vec![(0..acc.vertex_count()).collect::<Vec<_>>()];
    for &letter in rest {
        let (next, map) = glue_with_map(&acc, lookup(letter)?)?;
        acc = next;
        maps.push(map);
    }
    Ok((acc, maps))
}

pub fn delta(gamma: &Family, word: &[usize]) -> Result<BiboundariedGraph, GraphError> {
    delta_with_maps(gamma, word).map(|(g, _)| g)
}

/// Reads a word of decimal-digit letters such as `"2113"`.
pub fn parse_word(text: &str) -> Result<Vec<usize>, GraphError> {
    text.trim()
        .chars()
        .map(|c| {
            c.to_digit(10).map(|d| d as usize).ok_or_else(|| GraphError::ParseError {
                line: 1,
                message: format!("word letter {c:?} is not a digit"),
            })
        })
        .collect()
}

/// Gadgets `(G1, G2, G3)` for the pumping words `2·1^n·3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetTriple {
    pub g1: BiboundariedGraph,
    pub g2: BiboundariedGraph,
    pub g3: BiboundariedGraph,
}

impl GadgetTriple {
    pub fn new(g1: BiboundariedGraph, g2: BiboundariedGraph, g3: BiboundariedGraph) -> Result<Self, GraphError> {
        let l = g1.port_count();
        for g in [&g2, &g3] {
            if g.port_count() != l {
                return Err(GraphError::PortArityMismatch {
                    left: l,
                    right: g.port_count(),
                });
            }
        }
        if g1.shared_ports().len() == g1.vertex_count() {
            return Err(GraphError::BadTriple("P1(G1) ∩ P2(G1) covers every vertex of G1".into()));
        }
        Ok(GadgetTriple { g1, g2, g3 })
    }

    /// The family `{1: G1, 2: G2, 3: G3}`.
    pub fn family(&self) -> Family {
        BTreeMap::from([(1, self.g1.clone()), (2, self.g2.clone()), (3, self.g3.clone())])
    }

    /// The pumping word `2·1^n·3`.
    pub fn pump_word(n: usize) -> Vec<usize> {
        let mut w = vec![2];
        w.extend(std::iter::repeat_n(1, n));
        w.push(3);
        w
    }
}
