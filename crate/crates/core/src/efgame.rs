//! MSO Ehrenfeucht–Fraïssé games on tiny digraphs, the idempotence index
//! of disjoint powers, and the explicit idempotence bound.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::Digraph;
use crate::mso::{eval, Formula, MsoError};

/// Largest graph on either side of a game.
pub const EF_VERTEX_LIMIT: usize = 5;
/// Largest number of rounds.
pub const EF_MOVE_LIMIT: usize = 3;
/// Largest binary exponent [`q_bound`] will materialize.
pub const BOUND_EXPONENT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EfError {
    #[error("game on {vertices} vertices with {moves} moves exceeds the search limits ({EF_VERTEX_LIMIT} vertices, {EF_MOVE_LIMIT} moves)")]
    TooLarge { vertices: usize, moves: usize },
    #[error("the graph is empty")]
    EmptyGraph,
    #[error("bound needs 2^{exponent}, beyond the limit of 2^{BOUND_EXPONENT_LIMIT}")]
    BoundTooLarge { exponent: BigUint },
    #[error(transparent)]
    Mso(#[from] MsoError),
}

impl EfError {
    pub fn kind(&self) -> &'static str {
        match self {
            EfError::TooLarge { .. } => "TooLarge",
            EfError::EmptyGraph => "EmptyGraph",
            EfError::BoundTooLarge { .. } => "BoundTooLarge",
            EfError::Mso(e) => e.kind(),
        }
    }
}

/// Position in a game on one side: chosen points and chosen sets, each in
/// move order. Sets are bitmasks over the vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GamePosition {
    pub points: Vec<usize>,
    pub sets: Vec<u32>,
}

#[derive(Hash, PartialEq, Eq)]
struct TypeKey {
    atomic: Vec<bool>,
    after_point: Vec<u32>,
    after_set: Vec<u32>,
}

/// Interns rank-r types of positions. Two positions (on any graphs typed by
/// the same interner) get the same id iff Duplicator wins the remaining
/// r-round game from them.
#[derive(Default)]
pub struct TypeTable {
    ids: HashMap<(usize, TypeKey), u32>,
}

impl TypeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Equalities, edges and memberships among the chosen elements.
    fn atomic(g: &Digraph, pos: &GamePosition) -> Vec<bool> {
        let k = pos.points.len();
        let mut out = Vec::with_capacity(2 * k * k + k * pos.sets.len());
        for &a in &pos.points {
            for &b in &pos.points {
                out.push(a == b);
                out.push(g.has_edge(a, b));
            }
            for &s in &pos.sets {
                out.push(s >> a & 1 == 1);
            }
        }
        out
    }

    pub fn type_of(&mut self, g: &Digraph, pos: &mut GamePosition, rounds: usize) -> u32 {
        let atomic = Self::atomic(g, pos);
        let mut after_point = BTreeSet::new();
        let mut after_set = BTreeSet::new();
        if rounds > 0 {
            let n = g.vertex_count();
            for v in 0..n {
                pos.points.push(v);
                after_point.insert(self.type_of(g, pos, rounds - 1));
                pos.points.pop();
            }
            for mask in 0..(1u32 << n) {
                pos.sets.push(mask);
                after_set.insert(self.type_of(g, pos, rounds - 1));
                pos.sets.pop();
            }
        }
        let key = TypeKey {
            atomic,
            after_point: after_point.into_iter().collect(),
            after_set: after_set.into_iter().collect(),
        };
        let next = self.ids.len() as u32;
        *self.ids.entry((rounds, key)).or_insert(next)
    }
}

fn check_limits(g: &Digraph, h: &Digraph, m: usize) -> Result<(), EfError> {
    let vertices = g.vertex_count().max(h.vertex_count());
    if vertices > EF_VERTEX_LIMIT || m > EF_MOVE_LIMIT {
        return Err(EfError::TooLarge { vertices, moves: m });
    }
    Ok(())
}

/// Whether Duplicator wins the m-round MSO game on `g` and `h`, with Spoiler
/// choosing side and move kind freely each round.
pub fn ef_equiv(g: &Digraph, h: &Digraph, m: usize) -> Result<bool, EfError> {
    check_limits(g, h, m)?;
    let mut table = TypeTable::new();
    let a = table.type_of(g, &mut GamePosition::default(), m);
    let b = table.type_of(h, &mut GamePosition::default(), m);
    Ok(a == b)
}

/// Least `q ≤ q_max` with `q·g ≡_m (q+1)·g`, or `None`.
pub fn q_search(g: &Digraph, m: usize, q_max: usize) -> Result<Option<usize>, EfError> {
    if g.vertex_count() == 0 {
        return Err(EfError::EmptyGraph);
    }
    for q in 1..=q_max {
        let left = g.power_union(q);
        let right = g.power_union(q + 1);
        if ef_equiv(&left, &right, m)? {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// The explicit bound for `m1` point moves and `m2` set moves:
/// `q(m1, 0) = m1` and `q(m1, m2) = 2^(size · (q(m1, m2 - 1) + m1 + m2))`.
pub fn q_bound(size_g: u64, m1: u64, m2: u64) -> Result<BigUint, EfError> {
    let mut q = BigUint::from(m1);
    for j in 1..=m2 {
        let exponent = (q + m1 + j) * size_g;
        if exponent > BigUint::from(BOUND_EXPONENT_LIMIT) {
            return Err(EfError::BoundTooLarge { exponent });
        }
        let e: u64 = exponent.try_into().expect("exponent is below the limit");
        q = BigUint::one() << e;
    }
    Ok(q)
}

/// Maximum of [`q_bound`] over all splits `m1 + m2 = m`.
pub fn q_bound_total(size_g: u64, m: u64) -> Result<BigUint, EfError> {
    let mut best = BigUint::zero();
    for m1 in 0..=m {
        best = best.max(q_bound(size_g, m1, m - m1)?);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanVerdict {
    Sufficient,
    Forbidden,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub verdict: ScanVerdict,
    pub models: usize,
    pub tried: usize,
}

/// Evaluates `phi` on `g ⊔ omega` for every battery member. An empty battery
/// counts as sufficient.
pub fn saturating_scan<'a>(
    omega: &Digraph,
    phi: &Formula,
    battery: impl IntoIterator<Item = &'a Digraph>,
) -> Result<ScanReport, EfError> {
    let mut models = 0;
    let mut tried = 0;
    for g in battery {
        tried += 1;
        if eval(&g.disjoint_union(omega), phi)? {
            models += 1;
        }
    }
    let verdict = if models == tried {
        ScanVerdict::Sufficient
    } else if models == 0 {
        ScanVerdict::Forbidden
    } else {
        ScanVerdict::Mixed
    };
    Ok(ScanReport { verdict, models, tried })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mso::{parse, sentences};

    fn g(n: usize, edges: &[(usize, usize)]) -> Digraph {
        Digraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn equiv_examples() {
        let path = g(3, &[(0, 1), (1, 2)]);
        for m in 0..=3 {
            assert!(ef_equiv(&path, &path, m).unwrap());
        }
        let one = Digraph::new(1);
        let two = Digraph::new(2);
        assert!(ef_equiv(&one, &two, 1).unwrap());
        assert!(!ef_equiv(&one, &two, 2).unwrap());
        assert_eq!(ef_equiv(&Digraph::new(6), &one, 1).unwrap_err().kind(), "TooLarge");
        assert_eq!(ef_equiv(&one, &one, 4).unwrap_err().kind(), "TooLarge");
    }

    #[test]
    fn set_moves_matter() {
        // three distinct points separate 2 and 3 isolated vertices, two moves do not
        let two = Digraph::new(2);
        let three = Digraph::new(3);
        assert!(ef_equiv(&two, &three, 2).unwrap());
        assert!(!ef_equiv(&two, &three, 3).unwrap());
        assert!(!ef_equiv(&g(1, &[(0, 0)]), &Digraph::new(1), 1).unwrap());
        // a 2-cycle and two loops differ at rank 2 (ex x. ex y. E(x,y) & ~x=y)
        assert!(!ef_equiv(&g(2, &[(0, 1), (1, 0)]), &g(2, &[(0, 0), (1, 1)]), 2).unwrap());
    }

    #[test]
    fn q_search_examples() {
        let one = Digraph::new(1);
        assert_eq!(q_search(&one, 1, 8).unwrap(), Some(1));
        assert_eq!(q_search(&one, 2, 8).unwrap(), Some(2));
        assert_eq!(q_search(&g(1, &[(0, 0)]), 1, 8).unwrap(), Some(1));
        assert_eq!(q_search(&one, 2, 1).unwrap(), None);
        assert_eq!(q_search(&Digraph::new(0), 1, 8).unwrap_err().kind(), "EmptyGraph");
    }

    #[test]
    fn q_search_minimality() {
        let loop_vertex = g(1, &[(0, 0)]);
        for (graph, m) in [(Digraph::new(1), 1), (Digraph::new(1), 2), (Digraph::new(1), 3), (loop_vertex, 2)] {
            let q = q_search(&graph, m, 4).unwrap().unwrap();
            assert!(ef_equiv(&graph.power_union(q), &graph.power_union(q + 1), m).unwrap());
            if q > 1 {
                assert!(!ef_equiv(&graph.power_union(q - 1), &graph.power_union(q), m).unwrap());
            }
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(q_bound(1, 3, 0).unwrap(), BigUint::from(3u32));
        assert_eq!(q_bound(1, 0, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(q_bound_total(1, 1).unwrap(), BigUint::from(2u32));
        // q(1,1,1) = 2^(1+1+1), q(1,0,2) = 2^(2+0+2)
        assert_eq!(q_bound(1, 1, 1).unwrap(), BigUint::from(8u32));
        assert_eq!(q_bound(1, 0, 2).unwrap(), BigUint::from(16u32));
        assert_eq!(q_bound_total(1, 2).unwrap(), BigUint::from(16u32));
        assert_eq!(q_bound(2, 0, 4).unwrap_err().kind(), "BoundTooLarge");
    }

    #[test]
    fn scan_examples() {
        let small: Vec<Digraph> = (0..=3).flat_map(Digraph::all_on).collect();
        let lp = parse(sentences::LOOP).unwrap();
        let loop_vertex = g(1, &[(0, 0)]);
        assert_eq!(saturating_scan(&loop_vertex, &lp, &small).unwrap().verdict, ScanVerdict::Sufficient);
        assert_eq!(saturating_scan(&Digraph::new(1), &lp, &small).unwrap().verdict, ScanVerdict::Mixed);
        let taut = parse(sentences::TAUTOLOGY).unwrap();
        assert_eq!(saturating_scan(&Digraph::new(2), &taut, &small).unwrap().verdict, ScanVerdict::Sufficient);
        let never = parse("ex x. ~x=x").unwrap();
        assert_eq!(saturating_scan(&Digraph::new(2), &never, &small).unwrap().verdict, ScanVerdict::Forbidden);
    }

    #[test]
    fn equivalence_is_sound_for_the_battery() {
        let battery = crate::mso::sentences::battery();
        let graphs: Vec<Digraph> = (1..=3).flat_map(Digraph::all_on).collect();
        let truth: Vec<Vec<bool>> = graphs
            .iter()
            .map(|g| battery.iter().map(|f| eval(g, f).unwrap()).collect())
            .collect();
        for m in 1..=2 {
            let mut table = TypeTable::new();
            let types: Vec<u32> = graphs
                .iter()
                .map(|g| table.type_of(g, &mut GamePosition::default(), m))
                .collect();
            for i in 0..graphs.len() {
                for j in 0..graphs.len() {
                    if types[i] == types[j] {
                        for (k, f) in battery.iter().enumerate() {
                            if f.rank() <= m {
                                assert_eq!(truth[i][k], truth[j][k], "{} on {:?} vs {:?}", f, graphs[i], graphs[j]);
                            }
                        }
                    }
                }
            }
        }
    }
}
