use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{CnfInstance, ReduceError};
use crate::graph::{BiboundariedGraph, Family, GadgetTriple, GraphObject};

/// The named conditions a gadget quadruple must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    /// `|G0| = |G1|`
    #[serde(rename = "COND_I")]
    CondI,
    /// `P1 ∩ P2` agrees on `G0` and `G1` and is not all of `V(G1)`.
    #[serde(rename = "COND_II")]
    CondII,
    /// Shared ports have the same out-neighbours in `G0` and `G1`.
    #[serde(rename = "COND_III")]
    CondIII,
    /// Equal port counts, and shared ports sit at the same port positions
    /// on both faces of every gadget.
    #[serde(rename = "PORT_ALIGNMENT")]
    PortAlignment,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::CondI => "COND_I",
            Condition::CondII => "COND_II",
            Condition::CondIII => "COND_III",
            Condition::PortAlignment => "PORT_ALIGNMENT",
        })
    }
}

/// Size constants of a normalized quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayoutConstants {
    /// Port count.
    pub k: usize,
    /// Ports private to one face.
    pub k_private: usize,
    /// Ports on both faces.
    pub k_shared: usize,
    /// Vertices each middle copy contributes: `|G1| - k`.
    pub n1: usize,
    /// Vertices the first gadget contributes: `|G2| - k`.
    pub n2: usize,
    /// `|G3|`
    pub n3: usize,
}

/// Gadgets `G0..G3` relabeled into the block layout the compiler expects:
/// for `G0`, `G1`, `G2` the private primary ports come first, then inner
/// vertices, then the private secondary ports, then the shared ports; for
/// `G3` the private primary ports, then the shared ports, then the rest
/// with private secondary ports last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetQuadruple {
    gadgets: [BiboundariedGraph; 4],
    relabelings: [Vec<usize>; 4],
    layout: LayoutConstants,
    validated: bool,
}

/// Port positions `i` whose primary port is also a secondary port.
pub(super) fn shared_positions(g: &BiboundariedGraph) -> Vec<usize> {
    let p2: BTreeSet<usize> = g.p2().iter().copied().collect();
    (0..g.port_count()).filter(|&i| p2.contains(&g.p1()[i])).collect()
}

fn invalid(condition: Condition, detail: impl Into<String>) -> ReduceError {
    ReduceError::ValidationError {
        condition,
        detail: detail.into(),
    }
}

/// `order[new] = old`, turned into `perm[old] = new`.
pub(super) fn invert(order: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    perm
}

pub(super) fn middle_order(g: &BiboundariedGraph, shared: &[usize]) -> Vec<usize> {
    let k = g.port_count();
    let private: Vec<usize> = (0..k).filter(|i| !shared.contains(i)).collect();
    let ports: BTreeSet<usize> = g.p1().iter().chain(g.p2()).copied().collect();
    let p2: BTreeSet<usize> = g.p2().iter().copied().collect();
    let mut order: Vec<usize> = g.p1().iter().copied().filter(|v| !p2.contains(v)).collect();
    order.extend((0..g.vertex_count()).filter(|v| !ports.contains(v)));
    order.extend(private.iter().map(|&i| g.p2()[i]));
    order.extend(shared.iter().map(|&i| g.p2()[i]));
    order
}

fn last_order(g: &BiboundariedGraph, shared: &[usize]) -> Vec<usize> {
    let k = g.port_count();
    let p1: BTreeSet<usize> = g.p1().iter().copied().collect();
    let ports: BTreeSet<usize> = g.p1().iter().chain(g.p2()).copied().collect();
    let mut order: Vec<usize> = (0..k).filter(|i| !shared.contains(i)).map(|i| g.p1()[i]).collect();
    order.extend(shared.iter().map(|&i| g.p1()[i]));
    order.extend((0..g.vertex_count()).filter(|v| !ports.contains(v)));
    order.extend(g.p2().iter().copied().filter(|v| !p1.contains(v)));
    order
}

/// Checks the quadruple conditions and relabels every gadget into block layout.
pub fn normalize_layout(graphs: [BiboundariedGraph; 4]) -> Result<GadgetQuadruple, ReduceError> {
    let k = graphs[1].port_count();
    for (j, g) in graphs.iter().enumerate() {
        if g.port_count() != k {
            return Err(invalid(
                Condition::PortAlignment,
                format!("G{j} has {} ports, G1 has {k}", g.port_count()),
            ));
        }
    }
    if graphs[0].vertex_count() != graphs[1].vertex_count() {
        return Err(invalid(
            Condition::CondI,
            format!("|G0| = {} but |G1| = {}", graphs[0].vertex_count(), graphs[1].vertex_count()),
        ));
    }
    let shared = shared_positions(&graphs[1]);
    let shared0 = shared_positions(&graphs[0]);
    if shared0.len() != shared.len() {
        return Err(invalid(
            Condition::CondII,
            format!("G0 has {} shared ports, G1 has {}", shared0.len(), shared.len()),
        ));
    }
    if shared.len() == graphs[1].vertex_count() {
        return Err(invalid(Condition::CondII, "the shared ports of G1 cover every vertex"));
    }
    for (j, g) in graphs.iter().enumerate() {
        if shared_positions(g) != shared {
            return Err(invalid(
                Condition::PortAlignment,
                format!("G{j} shares ports at positions {:?}, G1 at {shared:?}", shared_positions(g)),
            ));
        }
        if let Some(&i) = shared.iter().find(|&&i| g.p1()[i] != g.p2()[i]) {
            return Err(invalid(
                Condition::PortAlignment,
                format!("shared port {} of G{j} moves from position {i} on the secondary face", g.p1()[i]),
            ));
        }
    }
    let orders = [
        middle_order(&graphs[0], &shared),
        middle_order(&graphs[1], &shared),
        middle_order(&graphs[2], &shared),
        last_order(&graphs[3], &shared),
    ];
    let relabelings = orders.map(|o| invert(&o));
    let gadgets: [BiboundariedGraph; 4] = std::array::from_fn(|j| graphs[j].relabel(&relabelings[j]));
    let k_shared = shared.len();
    let size1 = gadgets[1].vertex_count();
    for t in 0..k_shared {
        let p = size1 - k_shared + t;
        if gadgets[0].graph().out_neighbors(p) != gadgets[1].graph().out_neighbors(p) {
            return Err(invalid(
                Condition::CondIII,
                format!(
                    "shared port {p} (after relabeling) has out-neighbours {:?} in G0 but {:?} in G1",
                    gadgets[0].graph().out_neighbors(p),
                    gadgets[1].graph().out_neighbors(p)
                ),
            ));
        }
    }
    let layout = LayoutConstants {
        k,
        k_private: k - k_shared,
        k_shared,
        n1: size1 - k,
        n2: gadgets[2].vertex_count() - k,
        n3: gadgets[3].vertex_count(),
    };
    Ok(GadgetQuadruple {
        gadgets,
        relabelings,
        layout,
        validated: true,
    })
}

impl GadgetQuadruple {
    /// Wraps gadgets without checking anything; the compiler refuses such a quadruple.
    pub fn unchecked(gadgets: [BiboundariedGraph; 4]) -> Self {
        let k = gadgets[1].port_count();
        let k_shared = shared_positions(&gadgets[1]).len();
        let layout = LayoutConstants {
            k,
            k_private: k.saturating_sub(k_shared),
            k_shared,
            n1: gadgets[1].vertex_count().saturating_sub(k),
            n2: gadgets[2].vertex_count().saturating_sub(k),
            n3: gadgets[3].vertex_count(),
        };
        let relabelings = std::array::from_fn(|j| (0..gadgets[j].vertex_count()).collect());
        GadgetQuadruple {
            gadgets,
            relabelings,
            layout,
            validated: false,
        }
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn gadget(&self, j: usize) -> &BiboundariedGraph {
        &self.gadgets[j]
    }

    pub fn gadgets(&self) -> &[BiboundariedGraph; 4] {
        &self.gadgets
    }

    /// For each gadget, `perm[old] = new` as applied by normalization.
    pub fn relabelings(&self) -> &[Vec<usize>; 4] {
        &self.relabelings
    }

    pub fn layout(&self) -> LayoutConstants {
        self.layout
    }

    /// `{0: G0, 1: G1, 2: G2, 3: G3}`
    pub fn family(&self) -> Family {
        (0..4).map(|j| (j, self.gadgets[j].clone())).collect()
    }

    /// `N = n2 + 2^s·n1 + n3`
    pub fn n_vertices(&self, s: usize) -> BigUint {
        let l = &self.layout;
        BigUint::from(l.n2) + (BigUint::from(l.n1) << s) + l.n3
    }

    /// Index of the last middle copy, `2^s - 1`.
    pub fn last_copy(s: usize) -> BigUint {
        (BigUint::one() << s) - 1u32
    }

    pub fn to_json(&self) -> String {
        let objs: Vec<GraphObject> = self.gadgets.iter().map(GraphObject::from).collect();
        serde_json::to_string(&objs).expect("serialization is infallible")
    }

    fn size(&self, j: usize) -> usize {
        self.gadgets[j].vertex_count()
    }

    /// Label of vertex `r` of gadget `j` in middle copy `q`. The copy index
    /// is ignored for `j = 2, 3`.
    pub fn delta_map(&self, s: usize, j: usize, q: &BigUint, r: usize) -> Result<BigUint, ReduceError> {
        let out_of_range = |index: BigUint, bound: BigUint| ReduceError::IndexOutOfRange { index, bound };
        if j > 3 {
            return Err(out_of_range(j.into(), 4u32.into()));
        }
        if r >= self.size(j) {
            return Err(out_of_range(r.into(), self.size(j).into()));
        }
        if j <= 1 && q > &Self::last_copy(s) {
            return Err(out_of_range(q.clone(), BigUint::one() << s));
        }
        Ok(self.delta_unchecked(s, j, q, r))
    }

    fn delta_unchecked(&self, s: usize, j: usize, q: &BigUint, r: usize) -> BigUint {
        let l = &self.layout;
        let n2 = BigUint::from(l.n2);
        let n1 = BigUint::from(l.n1);
        let last = Self::last_copy(s);
        match j {
            0 | 1 if r < self.size(1) - l.k_shared => n2 + q * n1 + r,
            0 | 1 => n2 + last * n1 + r,
            2 if r < self.size(2) - l.k_shared => r.into(),
            2 => n2 + last * n1 + (r + self.size(1) - self.size(2)),
            _ => n2 + (n1 << s) + r,
        }
    }

    /// Both readings of the high branch of the first gadget's map: shifting
    /// the result of the last copy's map, or shifting its argument.
    pub fn delta2_readings_agree(&self, s: usize) -> bool {
        let (size1, size2) = (self.size(1), self.size(2));
        let last = Self::last_copy(s);
        (size2 - self.layout.k_shared..size2).all(|r| {
            let outer = self.delta_unchecked(s, 1, &last, r) + size1 - size2;
            let inner = self.delta_unchecked(s, 1, &last, r + size1 - size2);
            outer == inner && inner == self.delta_unchecked(s, 2, &BigUint::zero(), r)
        })
    }

    fn image(&self, s: usize, j: usize, q: &BigUint, source: usize, out: &mut BTreeSet<BigUint>) {
        for &v in self.gadgets[j].graph().out_neighbors(source) {
            out.insert(self.delta_unchecked(s, j, q, v));
        }
    }

    /// Out-neighbour labels of `x` in the glued graph `2·S̄·3`, by integer arithmetic.
    pub fn succ_ref(&self, cnf: &CnfInstance, x: &BigUint) -> Result<BTreeSet<BigUint>, ReduceError> {
        let s = cnf.vars();
        let n = self.n_vertices(s);
        if x >= &n {
            return Err(ReduceError::IndexOutOfRange {
                index: x.clone(),
                bound: n,
            });
        }
        let l = self.layout;
        let n1 = BigUint::from(l.n1);
        let n2 = BigUint::from(l.n2);
        let base3 = &n2 + (&n1 << s);
        let last = Self::last_copy(s);
        let mut out = BTreeSet::new();
        let small = |v: &BigUint| v.to_usize().expect("local index fits");
        if x < &n2 {
            self.image(s, 2, &BigUint::zero(), small(x), &mut out);
        } else if x < &base3 {
            let offset = x - &n2;
            let (q, r) = (&offset / &n1, &offset % &n1);
            let r = small(&r);
            let j = usize::from(cnf.sbar_at(&q)?);
            self.image(s, j, &q, r, &mut out);
            if r < l.k_private {
                if q.is_zero() {
                    self.image(s, 2, &q, r + l.n2, &mut out);
                } else {
                    let prev = &q - 1u32;
                    let i = usize::from(cnf.sbar_at(&prev)?);
                    self.image(s, i, &prev, r + l.n1, &mut out);
                }
            }
        } else {
            let r = small(&(x - &base3));
            self.image(s, 3, &BigUint::zero(), r, &mut out);
            if r < l.k_private {
                let i = usize::from(cnf.sbar_at(&last)?);
                self.image(s, i, &last, r + l.n1, &mut out);
            } else if r < l.k {
                self.image(s, 2, &BigUint::zero(), r + l.n2, &mut out);
                let mut t = BigUint::zero();
                while t <= last {
                    self.image(s, 1, &t, r + l.n1, &mut out);
                    t += 1u32;
                }
            }
        }
        Ok(out)
    }
}

fn graphs_from_json<const K: usize>(text: &str) -> Result<[BiboundariedGraph; K], ReduceError> {
    let objs: Vec<GraphObject> = serde_json::from_str(text).map_err(|e| ReduceError::ParseError {
        line: e.line(),
        message: e.to_string(),
    })?;
    if objs.len() != K {
        return Err(ReduceError::ParseError {
            line: 0,
            message: format!("expected {K} graph objects, found {}", objs.len()),
        });
    }
    let graphs = objs
        .into_iter()
        .map(BiboundariedGraph::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(graphs.try_into().expect("length checked"))
}

/// Reads `[G0, G1, G2, G3]` as a JSON array of graph objects.
pub fn quadruple_from_json(text: &str) -> Result<[BiboundariedGraph; 4], ReduceError> {
    graphs_from_json::<4>(text)
}

/// Reads `[G1, G2, G3]` as a JSON array of graph objects.
pub fn triple_from_json(text: &str) -> Result<GadgetTriple, ReduceError> {
    let [g1, g2, g3] = graphs_from_json::<3>(text)?;
    Ok(GadgetTriple::new(g1, g2, g3)?)
}

pub fn triple_to_json(triple: &GadgetTriple) -> String {
    let objs: Vec<GraphObject> = [&triple.g1, &triple.g2, &triple.g3].into_iter().map(GraphObject::from).collect();
    serde_json::to_string(&objs).expect("serialization is infallible")
}

/// Out-neighbour table of a glued graph keyed by label, for comparisons.
pub fn adjacency_table(g: &crate::graph::Digraph) -> BTreeMap<usize, BTreeSet<usize>> {
    (0..g.vertex_count()).map(|v| (v, g.out_neighbors(v).clone())).collect()
}
