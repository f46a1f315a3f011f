//! Tree decompositions of the symmetric closure of a digraph.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{delta_with_maps, Digraph, Family, GraphError};

/// Largest graph accepted by [`treewidth_exact`].
pub const TREEWIDTH_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeDecError {
    #[error("a decomposition needs at least one node")]
    EmptyDecomposition,
    #[error("parent pointers do not form a rooted tree: {0}")]
    NotATree(String),
    #[error("node {0} does not exist")]
    BadNode(usize),
    #[error("node {0} is not a leaf")]
    NotALeaf(usize),
    #[error("decomposition for letter {0} has no pointed leaf")]
    MissingPointedLeaf(usize),
    #[error("decomposition for letter {letter}: {reason}")]
    BadAnchorBags { letter: usize, reason: String },
    #[error("graph of size {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("malformed decomposition file: {0}")]
    ParseError(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl TreeDecError {
    pub fn kind(&self) -> &'static str {
        match self {
            TreeDecError::EmptyDecomposition => "EmptyDecomposition",
            TreeDecError::NotATree(_) => "NotATree",
            TreeDecError::BadNode(_) => "BadNode",
            TreeDecError::NotALeaf(_) => "NotALeaf",
            TreeDecError::MissingPointedLeaf(_) => "MissingPointedLeaf",
            TreeDecError::BadAnchorBags { .. } => "BadAnchorBags",
            TreeDecError::TooLarge { .. } => "TooLarge",
            TreeDecError::ParseError(_) => "ParseError",
            TreeDecError::Graph(e) => e.kind(),
        }
    }
}

/// A failed decomposition condition, reported as a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "violation")]
pub enum Violation {
    VertexOutOfRange { vertex: usize },
    VertexUncovered { vertex: usize },
    EdgeUncovered { from: usize, to: usize },
    ConnectivityViolated { vertex: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::VertexOutOfRange { vertex } => write!(f, "VertexOutOfRange({vertex})"),
            Violation::VertexUncovered { vertex } => write!(f, "VertexUncovered({vertex})"),
            Violation::EdgeUncovered { from, to } => write!(f, "EdgeUncovered({from},{to})"),
            Violation::ConnectivityViolated { vertex } => write!(f, "ConnectivityViolated({vertex})"),
        }
    }
}

/// Rooted tree of bags, optionally with a distinguished leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    parents: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
    bags: Vec<BTreeSet<usize>>,
    pointed_leaf: Option<usize>,
}

impl TreeDecomposition {
    pub fn new(
        parents: Vec<Option<usize>>,
        bags: Vec<BTreeSet<usize>>,
        pointed_leaf: Option<usize>,
    ) -> Result<Self, TreeDecError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeDecError::EmptyDecomposition);
        }
        if bags.len() != n {
            return Err(TreeDecError::NotATree(format!("{n} parent entries but {} bags", bags.len())));
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parents[i].is_none()).collect();
        let [root] = roots[..] else {
            return Err(TreeDecError::NotATree(format!("expected one root, found {}", roots.len())));
        };
        let mut children = vec![Vec::new(); n];
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(TreeDecError::BadNode(p));
                }
                children[p].push(i);
            }
        }
        // every node must reach the root
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            seen[u] = true;
            stack.extend(&children[u]);
        }
        if let Some(orphan) = seen.iter().position(|s| !s) {
            return Err(TreeDecError::NotATree(format!("node {orphan} lies on a cycle")));
        }
        let t = TreeDecomposition {
            parents,
            children,
            root,
            bags,
            pointed_leaf: None,
        };
        t.with_pointed_leaf(pointed_leaf)
    }

    pub fn single(bag: BTreeSet<usize>) -> Self {
        TreeDecomposition::new(vec![None], vec![bag], None).expect("one node is a tree")
    }

    /// A path rooted at the first bag, pointed at the last one.
    pub fn chain(bags: Vec<BTreeSet<usize>>) -> Result<Self, TreeDecError> {
        let n = bags.len();
        let parents = (0..n).map(|i| i.checked_sub(1)).collect();
        TreeDecomposition::new(parents, bags, n.checked_sub(1))
    }

    pub fn with_pointed_leaf(mut self, leaf: Option<usize>) -> Result<Self, TreeDecError> {
        if let Some(v) = leaf {
            self.check_node(v)?;
            if !self.is_leaf(v) {
                return Err(TreeDecError::NotALeaf(v));
            }
        }
        self.pointed_leaf = leaf;
        Ok(self)
    }

    fn check_node(&self, v: usize) -> Result<(), TreeDecError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(TreeDecError::BadNode(v))
        }
    }

    pub fn node_count(&self) -> usize {
        self.parents.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn bag(&self, v: usize) -> &BTreeSet<usize> {
        &self.bags[v]
    }

    pub fn bags(&self) -> &[BTreeSet<usize>] {
        &self.bags
    }

    pub fn pointed_leaf(&self) -> Option<usize> {
        self.pointed_leaf
    }

    /// A node without children. A lone root counts as a leaf.
    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Parent plus children.
    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parents[v].is_some())
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Largest bag size minus one; a decomposition of only empty bags has width 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Nodes of the subtree rooted at `v`, in preorder.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    /// Applies a vertex map to every bag.
    pub fn relabel(&self, map: &[usize]) -> TreeDecomposition {
        let mut t = self.clone();
        t.bags = self.bags.iter().map(|b| b.iter().map(|&v| map[v]).collect()).collect();
        t
    }

    /// Checks coverage of vertices and of edges of the symmetric closure, and
    /// that the nodes containing each vertex form a connected subtree.
    pub fn validate(&self, g: &Digraph) -> Vec<Violation> {
        let n = g.vertex_count();
        let mut out = BTreeSet::new();
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (node, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    out.insert(Violation::VertexOutOfRange { vertex: v });
                } else {
                    holders[v].push(node);
                }
            }
        }
        for (v, nodes) in holders.iter().enumerate() {
            if nodes.is_empty() {
                out.insert(Violation::VertexUncovered { vertex: v });
                continue;
            }
            // a set of tree nodes is connected iff exactly one of them has its parent outside
            let tops = nodes
                .iter()
                .filter(|&&node| self.parents[node].is_none_or(|p| !self.bags[p].contains(&v)))
                .count();
            if tops != 1 {
                out.insert(Violation::ConnectivityViolated { vertex: v });
            }
        }
        for (u, v) in g.edges() {
            if u != v && !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                out.insert(Violation::EdgeUncovered { from: u, to: v });
            }
        }
        out.into_iter().collect()
    }

    pub fn is_valid_for(&self, g: &Digraph) -> bool {
        self.validate(g).is_empty()
    }

    /// Splits every node with too many children into a chain of copies of
    /// its bag, so that every node has degree at most 3. Existing nodes keep
    /// their indices; copies are appended.
    pub fn normalize_degree3(&self) -> TreeDecomposition {
        let mut parents = self.parents.clone();
        let mut bags = self.bags.clone();
        let mut order = vec![self.root];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            order.extend(&self.children[v]);
            let allowance = if v == self.root { 3 } else { 2 };
            let kids = &self.children[v];
            if kids.len() <= allowance {
                continue;
            }
            // v keeps allowance-1 children plus a copy; each copy keeps one child plus the next copy
            let mut holder = v;
            let mut rest = &kids[..];
            let mut keep = allowance - 1;
            while rest.len() > keep + 1 {
                let (kept, tail) = rest.split_at(keep);
                for &c in kept {
                    parents[c] = Some(holder);
                }
                let copy = parents.len();
                parents.push(Some(holder));
                bags.push(self.bags[v].clone());
                holder = copy;
                rest = tail;
                keep = 1;
            }
            for &c in rest {
                parents[c] = Some(holder);
            }
        }
        TreeDecomposition::new(parents, bags, self.pointed_leaf).expect("splitting preserves the tree shape")
    }

    /// Replaces the subtree rooted at `v` by `other`, attaching the root of
    /// `other` where `v` was. Surviving nodes keep their relative order and
    /// the nodes of `other` follow. The pointed leaf comes from `other`.
    pub fn subtree_replace(&self, v: usize, other: &TreeDecomposition) -> Result<TreeDecomposition, TreeDecError> {
        self.check_node(v)?;
        let removed: BTreeSet<usize> = self.subtree(v).into_iter().collect();
        let mut new_index = vec![usize::MAX; self.node_count()];
        let mut kept = 0;
        for (i, slot) in new_index.iter_mut().enumerate() {
            if !removed.contains(&i) {
                *slot = kept;
                kept += 1;
            }
        }
        let mut parents = Vec::with_capacity(kept + other.node_count());
        let mut bags = Vec::with_capacity(kept + other.node_count());
        for i in 0..self.node_count() {
            if !removed.contains(&i) {
                parents.push(self.parents[i].map(|p| new_index[p]));
                bags.push(self.bags[i].clone());
            }
        }
        let attach = self.parents[v].map(|p| new_index[p]);
        for i in 0..other.node_count() {
            let p = match other.parents[i] {
                Some(p) => Some(p + kept),
                None => attach,
            };
            parents.push(p);
            bags.push(other.bags[i].clone());
        }
        TreeDecomposition::new(parents, bags, other.pointed_leaf.map(|l| l + kept))
    }

    /// `self ⊕_v other`: subtree replacement at a leaf.
    pub fn glue_at_leaf(&self, v: usize, other: &TreeDecomposition) -> Result<TreeDecomposition, TreeDecError> {
        self.check_node(v)?;
        if !self.is_leaf(v) {
            return Err(TreeDecError::NotALeaf(v));
        }
        self.subtree_replace(v, other)
    }

    /// Glues `other` in at this decomposition's pointed leaf.
    pub fn glue_pointed(&self, other: &TreeDecomposition, letter: usize) -> Result<TreeDecomposition, TreeDecError> {
        let leaf = self.pointed_leaf.ok_or(TreeDecError::MissingPointedLeaf(letter))?;
        self.glue_at_leaf(leaf, other)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DecompositionFile::from(self)).expect("serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<TreeDecomposition, TreeDecError> {
        let file: DecompositionFile =
            serde_json::from_str(text).map_err(|e| TreeDecError::ParseError(e.to_string()))?;
        TreeDecomposition::try_from(file)
    }
}

/// `{"root", "parents" (-1 for the root), "bags", "pointed_leaf"}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub root: usize,
    pub parents: Vec<i64>,
    pub bags: Vec<Vec<usize>>,
    #[serde(default)]
    pub pointed_leaf: Option<usize>,
}

impl From<&TreeDecomposition> for DecompositionFile {
    fn from(t: &TreeDecomposition) -> Self {
        DecompositionFile {
            root: t.root,
            parents: t.parents.iter().map(|p| p.map_or(-1, |p| p as i64)).collect(),
            bags: t.bags.iter().map(|b| b.iter().copied().collect()).collect(),
            pointed_leaf: t.pointed_leaf,
        }
    }
}

impl TryFrom<DecompositionFile> for TreeDecomposition {
    type Error = TreeDecError;

    fn try_from(f: DecompositionFile) -> Result<Self, TreeDecError> {
        let parents = f
            .parents
            .iter()
            .map(|&p| match p {
                -1 => Ok(None),
                p if p >= 0 => Ok(Some(p as usize)),
                p => Err(TreeDecError::ParseError(format!("parent index {p}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let t = TreeDecomposition::new(parents, f.bags.into_iter().map(|b| b.into_iter().collect()).collect(), f.pointed_leaf)?;
        if t.root != f.root {
            return Err(TreeDecError::NotATree(format!("declared root {} but node {} has no parent", f.root, t.root)));
        }
        Ok(t)
    }
}

/// `Λ(w)`: left fold of pointed-leaf gluing over the word.
pub fn lambda(family: &BTreeMap<usize, TreeDecomposition>, word: &[usize]) -> Result<TreeDecomposition, TreeDecError> {
    let lookup = |l: usize| family.get(&l).ok_or(TreeDecError::Graph(GraphError::UnknownLetter(l)));
    let (&first, rest) = word.split_first().ok_or(TreeDecError::Graph(GraphError::EmptyWord))?;
    let mut acc = lookup(first)?.clone();
    let mut prev = first;
    for &letter in rest {
        acc = acc.glue_pointed(lookup(letter)?, prev)?;
        prev = letter;
    }
    Ok(acc)
}

/// Decomposition of `Δ(w)` assembled from per-gadget decompositions whose
/// root bag is the gadget's primary ports and whose pointed leaf holds its
/// secondary ports. Bags follow the same vertex maps as the glued graph.
pub fn decomposition_of_delta(
    gamma: &Family,
    decompositions: &BTreeMap<usize, TreeDecomposition>,
    word: &[usize],
) -> Result<TreeDecomposition, TreeDecError> {
    for &letter in word.iter().collect::<BTreeSet<_>>() {
        let gadget = gamma.get(&letter).ok_or(GraphError::UnknownLetter(letter))?;
        let t = decompositions.get(&letter).ok_or_else(|| TreeDecError::BadAnchorBags {
            letter,
            reason: "no decomposition supplied".into(),
        })?;
        let p1: BTreeSet<usize> = gadget.p1().iter().copied().collect();
        let p2: BTreeSet<usize> = gadget.p2().iter().copied().collect();
        if t.bag(t.root()) != &p1 {
            return Err(TreeDecError::BadAnchorBags {
                letter,
                reason: format!("root bag {:?} is not the primary port set {:?}", t.bag(t.root()), p1),
            });
        }
        match t.pointed_leaf() {
            Some(leaf) if t.bag(leaf) == &p2 => {}
            Some(leaf) => {
                return Err(TreeDecError::BadAnchorBags {
                    letter,
                    reason: format!("pointed leaf bag {:?} is not the secondary port set {:?}", t.bag(leaf), p2),
                })
            }
            None => {
                return Err(TreeDecError::BadAnchorBags {
                    letter,
                    reason: "no pointed leaf".into(),
                })
            }
        }
        if t.bags().iter().flatten().any(|&v| v >= gadget.vertex_count()) {
            return Err(TreeDecError::BadAnchorBags {
                letter,
                reason: "a bag mentions a vertex outside the gadget".into(),
            });
        }
    }
    let (_, maps) = delta_with_maps(gamma, word)?;
    let mut acc: Option<TreeDecomposition> = None;
    for (pos, (&letter, map)) in word.iter().zip(&maps).enumerate() {
        let piece = decompositions[&letter].relabel(map);
        acc = Some(match acc {
            None => piece,
            Some(t) => t.glue_pointed(&piece, word[pos - 1])?,
        });
    }
    Ok(acc.expect("word is nonempty"))
}

/// Exact treewidth of the symmetric closure, with an optimal elimination
/// ordering (first eliminated first). Loops are ignored; the empty graph has
/// width 0.
pub fn treewidth_with_order(g: &Digraph) -> Result<(usize, Vec<usize>), TreeDecError> {
    let n = g.vertex_count();
    if n > TREEWIDTH_LIMIT {
        return Err(TreeDecError::TooLarge {
            size: n,
            limit: TREEWIDTH_LIMIT,
        });
    }
    let adj: Vec<u32> = g
        .undirected_neighbors()
        .iter()
        .enumerate()
        .map(|(v, ns)| ns.iter().filter(|&&u| u != v).fold(0u32, |m, &u| m | 1 << u))
        .collect();
    // vertices outside `eliminated ∪ {v}` reachable from v through eliminated ones
    let q_size = |eliminated: u32, v: usize| -> usize {
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut outside = 0u32;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[u] & !seen;
            seen |= fresh;
            outside |= fresh & !eliminated;
            frontier |= fresh & eliminated;
        }
        outside.count_ones() as usize
    };
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut best = vec![usize::MAX; 1usize << n];
    let mut last = vec![usize::MAX; 1usize << n];
    best[0] = 0;
    for set in 1..=full {
        let mut bits = set;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let before = set & !(1 << v);
            let cost = best[before as usize].max(q_size(before, v));
            if cost < best[set as usize] {
                best[set as usize] = cost;
                last[set as usize] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = last[set as usize];
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    Ok((best[full as usize], order))
}

pub fn treewidth_exact(g: &Digraph) -> Result<usize, TreeDecError> {
    treewidth_with_order(g).map(|(w, _)| w)
}

/// The decomposition induced by eliminating vertices in `order`.
pub fn from_elimination_order(g: &Digraph, order: &[usize]) -> Result<TreeDecomposition, TreeDecError> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(TreeDecomposition::single(BTreeSet::new()));
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(TreeDecError::Graph(GraphError::BadVertex { vertex: v, n }));
        }
        position[v] = i;
    }
    if order.len() != n {
        return Err(TreeDecError::NotATree("elimination order must list every vertex once".into()));
    }
    let mut nbrs: Vec<BTreeSet<usize>> = g.undirected_neighbors();
    for (v, ns) in nbrs.iter_mut().enumerate() {
        ns.remove(&v);
    }
    let mut bags = Vec::with_capacity(n);
    let mut parents = Vec::with_capacity(n);
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = nbrs[v].iter().copied().filter(|&u| position[u] > i).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    nbrs[a].insert(b);
                }
            }
        }
        let parent = later.iter().map(|&u| position[u]).min().or(if i + 1 < n { Some(i + 1) } else { None });
        parents.push(parent);
        let mut bag: BTreeSet<usize> = later.into_iter().collect();
        bag.insert(v);
        bags.push(bag);
    }
    TreeDecomposition::new(parents, bags, None)
}

/// An optimal decomposition for graphs within [`TREEWIDTH_LIMIT`].
pub fn optimal_decomposition(g: &Digraph) -> Result<TreeDecomposition, TreeDecError> {
    let (_, order) = treewidth_with_order(g)?;
    from_elimination_order(g, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_word, BiboundariedGraph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bag(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    fn path(n: usize) -> Digraph {
        Digraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn validate_examples() {
        let p3 = path(3);
        let t = TreeDecomposition::chain(vec![bag(&[0, 1]), bag(&[1, 2])]).unwrap();
        assert!(t.validate(&p3).is_empty());
        assert_eq!(t.width(), 1);
        let tri = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let single = TreeDecomposition::single(bag(&[0, 1, 2]));
        assert!(single.is_valid_for(&tri));
        assert_eq!(single.width(), 2);
        let bad = TreeDecomposition::chain(vec![bag(&[0, 1]), bag(&[2])]).unwrap();
        assert_eq!(bad.validate(&p3), vec![Violation::EdgeUncovered { from: 1, to: 2 }]);
        let gap = TreeDecomposition::chain(vec![bag(&[0, 1]), bag(&[2]), bag(&[1, 2])]).unwrap();
        assert_eq!(gap.validate(&p3), vec![Violation::ConnectivityViolated { vertex: 1 }]);
        let short = TreeDecomposition::single(bag(&[0, 1]));
        assert_eq!(
            short.validate(&p3),
            vec![Violation::VertexUncovered { vertex: 2 }, Violation::EdgeUncovered { from: 1, to: 2 }]
        );
        assert_eq!(
            TreeDecomposition::single(bag(&[0, 1, 2, 7])).validate(&p3),
            vec![Violation::VertexOutOfRange { vertex: 7 }]
        );
    }

    #[test]
    fn widths_and_construction_errors() {
        let singles = TreeDecomposition::chain((0..4).map(|v| bag(&[v])).collect()).unwrap();
        assert_eq!(singles.width(), 0);
        assert_eq!(TreeDecomposition::new(vec![], vec![], None).unwrap_err().kind(), "EmptyDecomposition");
        assert_eq!(
            TreeDecomposition::new(vec![Some(1), Some(0)], vec![bag(&[0]), bag(&[1])], None).unwrap_err().kind(),
            "NotATree"
        );
        let t = TreeDecomposition::chain(vec![bag(&[0]), bag(&[0, 1])]).unwrap();
        assert_eq!(t.clone().with_pointed_leaf(Some(0)).unwrap_err().kind(), "NotALeaf");
    }

    fn star(k: usize) -> TreeDecomposition {
        let mut parents = vec![None];
        let mut bags = vec![bag(&[0])];
        for i in 1..=k {
            parents.push(Some(0));
            bags.push(bag(&[0, i]));
        }
        TreeDecomposition::new(parents, bags, Some(k)).unwrap()
    }

    fn star_graph(k: usize) -> Digraph {
        Digraph::from_edges(k + 1, (1..=k).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn normalize_star() {
        let t = star(5);
        let n = t.normalize_degree3();
        assert!(n.max_degree() <= 3);
        assert!(n.is_valid_for(&star_graph(5)));
        assert_eq!(n.width(), t.width());
        assert_eq!(n.node_count(), 8);
        for copy in 6..8 {
            assert_eq!(n.bag(copy), t.bag(0));
        }
        assert_eq!(n.pointed_leaf(), Some(5));
        let small = star(3);
        assert_eq!(small.normalize_degree3(), small);
    }

    /// Random decomposition of a random graph: grow a random tree, then
    /// choose each vertex's subtree as a connected set and cover edges.
    fn random_decomposition(rng: &mut ChaCha8Rng) -> (Digraph, TreeDecomposition) {
        let nodes = rng.gen_range(1..=14);
        let mut parents = vec![None];
        for i in 1..nodes {
            // skew toward low indices so some nodes get many children
            parents.push(Some(rng.gen_range(0..i.min(3))));
        }
        let n = rng.gen_range(1..=8);
        let mut bags = vec![BTreeSet::new(); nodes];
        let mut children = vec![Vec::new(); nodes];
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        for v in 0..n {
            // a connected subtree: start somewhere, walk down a random number of steps
            let mut frontier = vec![rng.gen_range(0..nodes)];
            while let Some(u) = frontier.pop() {
                bags[u].insert(v);
                for &c in &children[u] {
                    if rng.gen_bool(0.5) {
                        frontier.push(c);
                    }
                }
            }
        }
        let mut g = Digraph::new(n);
        for b in &bags {
            for &u in b {
                for &v in b {
                    if u != v && rng.gen_bool(0.3) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
        }
        (g, TreeDecomposition::new(parents, bags, None).unwrap())
    }

    #[test]
    fn normalize_preserves_validity_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let (g, t) = random_decomposition(&mut rng);
            assert!(t.is_valid_for(&g));
            let n = t.normalize_degree3();
            assert!(n.is_valid_for(&g));
            assert!(n.max_degree() <= 3);
            assert_eq!(n.width(), t.width());
            assert!(n.node_count() >= t.node_count());
        }
    }

    fn edge_gadget() -> BiboundariedGraph {
        BiboundariedGraph::new(Digraph::from_edges(2, [(0, 1)]).unwrap(), vec![0], vec![1]).unwrap()
    }

    fn toy() -> (Family, BTreeMap<usize, TreeDecomposition>) {
        let gamma: Family = (1..=3).map(|l| (l, edge_gadget())).collect();
        let t = TreeDecomposition::chain(vec![bag(&[0]), bag(&[0, 1]), bag(&[1])]).unwrap();
        let decs = (1..=3).map(|l| (l, t.clone())).collect();
        (gamma, decs)
    }

    #[test]
    fn lambda_examples() {
        let (_, decs) = toy();
        assert_eq!(lambda(&decs, &[2]).unwrap(), decs[&2]);
        let w = parse_word("213").unwrap();
        let t = lambda(&decs, &w).unwrap();
        assert_eq!(t.node_count(), 3 * 3 - 2);
        assert_eq!(t.max_degree(), 2);
        assert_eq!(t.width(), 1);
        assert_eq!(t.pointed_leaf(), Some(6));
        assert!(lambda(&decs, &[]).is_err());
        assert_eq!(lambda(&decs, &[4]).unwrap_err().kind(), "UnknownLetter");
        let unpointed: BTreeMap<usize, TreeDecomposition> =
            [(1, decs[&1].clone().with_pointed_leaf(None).unwrap())].into();
        assert_eq!(lambda(&unpointed, &[1, 1]).unwrap_err().kind(), "MissingPointedLeaf");
    }

    #[test]
    fn glue_requires_leaf() {
        let (_, decs) = toy();
        assert_eq!(decs[&1].glue_at_leaf(1, &decs[&2]).unwrap_err().kind(), "NotALeaf");
        let replaced = decs[&1].subtree_replace(1, &decs[&2]).unwrap();
        assert_eq!(replaced.node_count(), 4);
        let whole = decs[&1].subtree_replace(0, &decs[&2]).unwrap();
        assert_eq!(whole, decs[&2]);
    }

    #[test]
    fn delta_decomposition_examples() {
        let (gamma, decs) = toy();
        let w = parse_word("213").unwrap();
        let t = decomposition_of_delta(&gamma, &decs, &w).unwrap();
        let glued = crate::graph::delta(&gamma, &w).unwrap();
        assert_eq!(glued.graph(), &path(4));
        assert!(t.is_valid_for(glued.graph()));
        assert_eq!(t.width(), 1);
        assert_eq!(decomposition_of_delta(&gamma, &decs, &[2]).unwrap(), decs[&2]);

        let mut wrong = decs.clone();
        wrong.insert(1, TreeDecomposition::chain(vec![bag(&[0, 1]), bag(&[1])]).unwrap());
        assert_eq!(decomposition_of_delta(&gamma, &wrong, &w).unwrap_err().kind(), "BadAnchorBags");
    }

    #[test]
    fn delta_decomposition_random_words() {
        // gadgets with two ports and a shared port, to exercise repeated identifications
        let g1 = BiboundariedGraph::new(
            Digraph::from_edges(4, [(0, 2), (2, 3), (1, 2), (3, 1)]).unwrap(),
            vec![0, 1],
            vec![3, 1],
        )
        .unwrap();
        let g2 = BiboundariedGraph::new(Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap(), vec![0, 1], vec![2, 1]).unwrap();
        let g3 = BiboundariedGraph::new(Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap(), vec![0, 1], vec![0, 1]).unwrap();
        let gamma: Family = [(1, g1), (2, g2), (3, g3)].into();
        let mk = |parents: Vec<Option<usize>>, bags: Vec<Vec<usize>>, leaf| {
            TreeDecomposition::new(parents, bags.into_iter().map(|b| b.into_iter().collect()).collect(), Some(leaf)).unwrap()
        };
        let decs: BTreeMap<usize, TreeDecomposition> = [
            (1, mk(vec![None, Some(0), Some(1)], vec![vec![0, 1], vec![0, 1, 2, 3], vec![1, 3]], 2)),
            (2, mk(vec![None, Some(0), Some(1)], vec![vec![0, 1], vec![0, 1, 2], vec![1, 2]], 2)),
            (3, mk(vec![None, Some(0)], vec![vec![0, 1], vec![0, 1]], 1)),
        ]
        .into();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let len = rng.gen_range(1..=6);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=3)).collect();
            let t = decomposition_of_delta(&gamma, &decs, &w).unwrap();
            let glued = crate::graph::delta(&gamma, &w).unwrap();
            assert!(t.is_valid_for(glued.graph()), "{w:?}: {:?}", t.validate(glued.graph()));
            let member_width = w.iter().map(|l| decs[l].width()).max().unwrap();
            assert_eq!(t.width(), member_width);
            assert_eq!(t.node_count(), w.iter().map(|l| decs[l].node_count()).sum::<usize>() - (len - 1));
        }
    }

    #[test]
    fn treewidth_examples() {
        assert_eq!(treewidth_exact(&path(4)).unwrap(), 1);
        let k4 = Digraph::from_edges(4, (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v)))).unwrap();
        assert_eq!(treewidth_exact(&k4).unwrap(), 3);
        let c4 = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(treewidth_exact(&c4).unwrap(), 2);
        assert_eq!(treewidth_exact(&Digraph::new(11)).unwrap_err().kind(), "TooLarge");
        assert_eq!(treewidth_exact(&Digraph::new(0)).unwrap(), 0);
    }

    /// Width of the elimination game along one ordering, computed directly.
    fn elimination_width(g: &Digraph, order: &[usize]) -> usize {
        let n = g.vertex_count();
        let mut nbrs = g.undirected_neighbors();
        for (v, ns) in nbrs.iter_mut().enumerate() {
            ns.remove(&v);
        }
        let mut alive = vec![true; n];
        let mut width = 0;
        for &v in order {
            let live: Vec<usize> = nbrs[v].iter().copied().filter(|&u| alive[u]).collect();
            width = width.max(live.len());
            for &a in &live {
                for &b in &live {
                    if a != b {
                        nbrs[a].insert(b);
                    }
                }
            }
            alive[v] = false;
        }
        width
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn treewidth_matches_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.gen_range(1..=5);
            let edges: Vec<(usize, usize)> = (0..n * n).filter(|_| rng.gen_bool(0.4)).map(|i| (i / n, i % n)).collect();
            let g = Digraph::from_edges(n, edges).unwrap();
            let mut naive = usize::MAX;
            for order in permutations(n) {
                let t = from_elimination_order(&g, &order).unwrap();
                assert!(t.is_valid_for(&g));
                assert_eq!(t.width(), elimination_width(&g, &order));
                naive = naive.min(t.width());
            }
            assert_eq!(treewidth_exact(&g).unwrap(), naive);
            let best = optimal_decomposition(&g).unwrap();
            assert!(best.is_valid_for(&g));
            assert_eq!(best.width(), naive);
        }
    }

    #[test]
    fn json_round_trip() {
        let t = star(3);
        let text = t.to_json();
        assert_eq!(text, r#"{"root":0,"parents":[-1,0,0,0],"bags":[[0],[0,1],[0,2],[0,3]],"pointed_leaf":3}"#);
        assert_eq!(TreeDecomposition::from_json(&text).unwrap(), t);
        assert!(TreeDecomposition::from_json(r#"{"root":1,"parents":[-1,0],"bags":[[0],[0]],"pointed_leaf":null}"#).is_err());
    }
}
