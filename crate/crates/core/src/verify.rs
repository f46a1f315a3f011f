//! Independent oracles: SAT solving, direct placement of the glued graph on
//! layout labels, and end-to-end runs of the reduction over instance batteries.

use std::fmt;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::Digraph;
use crate::mso::{eval, Formula};
use crate::reduce::{compile, CnfInstance, GadgetQuadruple, ReduceError};

/// Largest vertex count [`delta_layout`] and [`end_to_end`] will materialize.
pub const LAYOUT_LIMIT: usize = 1 << 14;

/// Instances up to this many variables are solved by enumeration.
pub const ENUMERATION_LIMIT: usize = 20;

/// Seed of the pseudorandom part of [`battery`].
pub const BATTERY_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "assignment", rename_all = "lowercase")]
pub enum SatOutcome {
    /// Value of variable `j + 1` at index `j`.
    Sat(Vec<bool>),
    Unsat,
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(_))
    }
}

impl fmt::Display for SatOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatOutcome::Unsat => f.write_str("UNSAT"),
            SatOutcome::Sat(values) => {
                f.write_str("SAT")?;
                for (j, &v) in values.iter().enumerate() {
                    write!(f, " {}", if v { j as i64 + 1 } else { -(j as i64 + 1) })?;
                }
                Ok(())
            }
        }
    }
}

fn enumerate(cnf: &CnfInstance) -> Option<Vec<bool>> {
    let s = cnf.vars();
    (0..1u64 << s)
        .find(|&a| cnf.eval_u64(a))
        .map(|a| (0..s).map(|j| a >> j & 1 == 1).collect())
}

/// Unit propagation followed by branching on the first unassigned variable.
fn dpll(clauses: &[Vec<i32>], values: &mut Vec<Option<bool>>) -> bool {
    let lit_value = |values: &[Option<bool>], lit: i32| values[lit.unsigned_abs() as usize - 1].map(|v| v == (lit > 0));
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        for clause in clauses {
            if clause.iter().any(|&l| lit_value(values, l) == Some(true)) {
                continue;
            }
            let open: Vec<i32> = clause.iter().copied().filter(|&l| lit_value(values, l).is_none()).collect();
            match open.len() {
                0 => {
                    for v in trail {
                        values[v] = None;
                    }
                    return false;
                }
                1 => {
                    unit = Some(open[0]);
                    break;
                }
                _ => {}
            }
        }
        let Some(lit) = unit else { break };
        let var = lit.unsigned_abs() as usize - 1;
        values[var] = Some(lit > 0);
        trail.push(var);
    }
    let Some(var) = values.iter().position(Option::is_none) else {
        return true;
    };
    for choice in [true, false] {
        values[var] = Some(choice);
        if dpll(clauses, values) {
            return true;
        }
    }
    values[var] = None;
    for v in trail {
        values[v] = None;
    }
    false
}

/// Decides `cnf`, returning a checked satisfying assignment when one exists.
pub fn sat_solve(cnf: &CnfInstance) -> SatOutcome {
    let found = if cnf.vars() <= ENUMERATION_LIMIT {
        enumerate(cnf)
    } else {
        let mut values = vec![None; cnf.vars()];
        dpll(cnf.clauses(), &mut values).then(|| values.iter().map(|v| v.unwrap_or(false)).collect())
    };
    match found {
        Some(values) => {
            assert!(cnf.eval_bits(|j| values[j]), "solver returned a non-satisfying assignment");
            SatOutcome::Sat(values)
        }
        None => SatOutcome::Unsat,
    }
}

struct Classes(Vec<usize>);

impl Classes {
    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// `Δ(2·S̄·3)` built by placing gadget copies at their layout offsets
/// (`G2` at 0, copy `q` at `n2 + q·n1`, `G3` at `n2 + 2^s·n1`), merging
/// glued ports and letting each merged class keep its largest placement.
pub fn delta_layout(quad: &GadgetQuadruple, cnf: &CnfInstance) -> Result<Digraph, ReduceError> {
    let s = cnf.vars();
    let too_large = |size| ReduceError::TooLarge {
        what: "layout graph",
        size,
        limit: LAYOUT_LIMIT,
    };
    let n_big = quad.n_vertices(s);
    let n = n_big.to_usize().filter(|&n| n <= LAYOUT_LIMIT).ok_or_else(|| too_large(n_big.to_usize().unwrap_or(usize::MAX)))?;
    let l = quad.layout();
    let copies = 1usize << s;
    let mut pieces = Vec::with_capacity(copies + 2);
    pieces.push((quad.gadget(2), 0));
    for q in 0..copies {
        let letter = usize::from(cnf.sbar_at(&q.into())?);
        pieces.push((quad.gadget(letter), l.n2 + q * l.n1));
    }
    pieces.push((quad.gadget(3), l.n2 + copies * l.n1));

    let mut starts = Vec::with_capacity(pieces.len());
    let mut total = 0;
    for (g, _) in &pieces {
        starts.push(total);
        total += g.vertex_count();
    }
    let mut classes = Classes((0..total).collect());
    for p in 1..pieces.len() {
        let (prev, next) = (pieces[p - 1].0, pieces[p].0);
        for (&a, &b) in prev.p2().iter().zip(next.p1()) {
            classes.union(starts[p - 1] + a, starts[p] + b);
        }
    }
    let mut label = vec![0; total];
    for (p, (g, offset)) in pieces.iter().enumerate() {
        for v in 0..g.vertex_count() {
            let root = classes.find(starts[p] + v);
            label[root] = label[root].max(offset + v);
        }
    }
    let mut used = vec![false; n];
    for p in 0..pieces.len() {
        for v in 0..pieces[p].0.vertex_count() {
            let id = starts[p] + v;
            if classes.find(id) == id {
                let at = label[id];
                if at >= n || used[at] {
                    return Err(ReduceError::Sgr(crate::sgr::SgrError::Invalid(format!(
                        "layout placement is not a bijection at label {at}"
                    ))));
                }
                used[at] = true;
            }
        }
    }
    if let Some(missing) = used.iter().position(|&u| !u) {
        return Err(ReduceError::Sgr(crate::sgr::SgrError::Invalid(format!(
            "layout placement leaves label {missing} unused"
        ))));
    }
    let mut g = Digraph::new(n);
    for (p, (gadget, _)) in pieces.iter().enumerate() {
        for (u, v) in gadget.graph().edges() {
            let lu = label[classes.find(starts[p] + u)];
            let lv = label[classes.find(starts[p] + v)];
            g.add_edge(lu, lv)?;
        }
    }
    Ok(g)
}

/// All instances on one or two variables with at most two distinct clauses,
/// followed by ten pseudorandom three-variable instances.
pub fn battery() -> Vec<CnfInstance> {
    seeded_battery(BATTERY_SEED)
}

/// [`battery`] with another seed for the three-variable part.
pub fn seeded_battery(seed: u64) -> Vec<CnfInstance> {
    let mut out = Vec::new();
    for s in 1..=2usize {
        let lits: Vec<i32> = (1..=s as i32).flat_map(|v| [v, -v]).collect();
        let clauses: Vec<Vec<i32>> = (1..1u32 << lits.len())
            .map(|mask| (0..lits.len()).filter(|&i| mask >> i & 1 == 1).map(|i| lits[i]).collect())
            .collect();
        out.push(CnfInstance::new(s, vec![]).expect("valid instance"));
        for (i, a) in clauses.iter().enumerate() {
            out.push(CnfInstance::new(s, vec![a.clone()]).expect("valid instance"));
            for b in &clauses[i + 1..] {
                out.push(CnfInstance::new(s, vec![a.clone(), b.clone()]).expect("valid instance"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        let count = rng.gen_range(1..=5);
        let clauses = (0..count)
            .map(|_| {
                let width = rng.gen_range(1..=3);
                (0..width)
                    .map(|_| {
                        let v = rng.gen_range(1..=3);
                        if rng.gen_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        out.push(CnfInstance::new(3, clauses).expect("valid instance"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub id: usize,
    pub dimacs: String,
    pub sat: bool,
    pub formula_holds: bool,
    /// The compiled circuit materializes to exactly the layout graph.
    pub label_exact: bool,
    pub succ_ref_agrees: bool,
    pub micros: u128,
    pub error: Option<String>,
}

impl InstanceRecord {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.label_exact && self.succ_ref_agrees && self.formula_holds == self.sat
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndToEndReport {
    pub records: Vec<InstanceRecord>,
    pub passed: bool,
}

impl EndToEndReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization is infallible")
    }
}

impl fmt::Display for EndToEndReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            write!(
                f,
                "{} #{} sat={} formula={} label_exact={} succ_ref={} {}us",
                if r.passed() { "PASS" } else { "FAIL" },
                r.id,
                r.sat,
                r.formula_holds,
                r.label_exact,
                r.succ_ref_agrees,
                r.micros
            )?;
            if let Some(e) = &r.error {
                write!(f, " error: {e}")?;
            }
            writeln!(f)?;
        }
        let failed = self.records.iter().filter(|r| !r.passed()).count();
        write!(f, "{} of {} instances passed", self.records.len() - failed, self.records.len())
    }
}

fn check_instance(quad: &GadgetQuadruple, phi: &Formula, cnf: &CnfInstance) -> Result<(bool, bool, bool, bool), ReduceError> {
    let sat = sat_solve(cnf).is_sat();
    let placed = delta_layout(quad, cnf)?;
    let compiled = compile(quad, cnf)?.materialize(LAYOUT_LIMIT)?;
    let label_exact = compiled == placed;
    let mut succ_ref_agrees = true;
    for x in 0..compiled.vertex_count() {
        let reference = quad.succ_ref(cnf, &x.into())?;
        let row: Vec<usize> = reference.iter().filter_map(ToPrimitive::to_usize).collect();
        if row.len() != reference.len() || !row.iter().eq(compiled.out_neighbors(x).iter()) {
            succ_ref_agrees = false;
            break;
        }
    }
    let formula_holds = eval(&compiled, phi)?;
    Ok((sat, formula_holds, label_exact, succ_ref_agrees))
}

/// For each instance: compiled graph equals the layout graph label for
/// label, agrees with `succ_ref`, and satisfies `phi` exactly when the
/// instance is satisfiable. Failures are recorded, not raised.
pub fn end_to_end(quad: &GadgetQuadruple, phi: &Formula, instances: &[CnfInstance]) -> EndToEndReport {
    let records: Vec<InstanceRecord> = instances
        .par_iter()
        .enumerate()
        .map(|(id, cnf)| {
            let start = Instant::now();
            let outcome = check_instance(quad, phi, cnf);
            let micros = start.elapsed().as_micros();
            let dimacs = cnf.to_dimacs();
            match outcome {
                Ok((sat, formula_holds, label_exact, succ_ref_agrees)) => InstanceRecord {
                    id,
                    dimacs,
                    sat,
                    formula_holds,
                    label_exact,
                    succ_ref_agrees,
                    micros,
                    error: None,
                },
                Err(e) => InstanceRecord {
                    id,
                    dimacs,
                    sat: false,
                    formula_holds: false,
                    label_exact: false,
                    succ_ref_agrees: false,
                    micros,
                    error: Some(format!("{}: {e}", e.kind())),
                },
            }
        })
        .collect();
    let passed = records.iter().all(InstanceRecord::passed);
    EndToEndReport { records, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{delta, BiboundariedGraph};
    use crate::mso::{parse, sentences};
    use crate::reduce::{build_quadruple, normalize_layout, samples};

    fn cnf(s: usize, clauses: &[&[i32]]) -> CnfInstance {
        CnfInstance::new(s, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn sat_examples() {
        assert_eq!(sat_solve(&cnf(1, &[&[1]])), SatOutcome::Sat(vec![true]));
        assert_eq!(sat_solve(&cnf(1, &[&[1], &[-1]])), SatOutcome::Unsat);
        assert_eq!(sat_solve(&cnf(3, &[&[1, 2], &[-1, 3], &[-2], &[-3]])), SatOutcome::Unsat);
    }

    #[test]
    fn dpll_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let s = rng.gen_range(1..=6);
            let clauses: Vec<Vec<i32>> = (0..rng.gen_range(0..=12))
                .map(|_| {
                    (0..rng.gen_range(1..=3))
                        .map(|_| {
                            let v = rng.gen_range(1..=s as i32);
                            if rng.gen_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let instance = CnfInstance::new(s, clauses.clone()).unwrap();
            let mut values = vec![None; s];
            let found = dpll(&clauses, &mut values);
            assert_eq!(found, enumerate(&instance).is_some(), "{instance}");
            if found {
                assert!(instance.eval_bits(|j| values[j].unwrap_or(false)));
            }
        }
    }

    #[test]
    fn large_instances_use_backtracking() {
        let s = 30;
        let mut clauses: Vec<Vec<i32>> = (1..s as i32).map(|v| vec![-v, v + 1]).collect();
        clauses.push(vec![1]);
        let chain = CnfInstance::new(s, clauses.clone()).unwrap();
        assert_eq!(sat_solve(&chain), SatOutcome::Sat(vec![true; s]));
        clauses.push(vec![-(s as i32)]);
        assert_eq!(sat_solve(&CnfInstance::new(s, clauses).unwrap()), SatOutcome::Unsat);
    }

    #[test]
    fn layout_examples() {
        let quad = samples::toy_quadruple();
        let g = delta_layout(&quad, &cnf(1, &[&[1]])).unwrap();
        assert_eq!(g, Digraph::from_edges(5, [(0, 1), (1, 2), (2, 2), (2, 3), (3, 4)]).unwrap());
        let g = delta_layout(&quad, &cnf(1, &[&[1], &[-1]])).unwrap();
        assert_eq!(g, Digraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap());
        for instance in battery() {
            let g = delta_layout(&quad, &instance).unwrap();
            assert_eq!(g.vertex_count(), quad.n_vertices(instance.vars()).to_usize().unwrap());
        }
    }

    #[test]
    fn battery_shape() {
        let b = battery();
        assert_eq!(b.len(), 7 + 121 + 10);
        assert_eq!(b.iter().filter(|c| c.vars() == 3).count(), 10);
        assert_eq!(battery(), b);
    }

    fn shared_port_quadruple() -> GadgetQuadruple {
        let bb = |n, edges: &[(usize, usize)], p1: &[usize], p2: &[usize]| {
            BiboundariedGraph::new(Digraph::from_edges(n, edges.iter().copied()).unwrap(), p1.to_vec(), p2.to_vec()).unwrap()
        };
        let g1 = bb(5, &[(0, 2), (2, 3), (1, 2), (3, 1), (1, 4), (4, 0)], &[0, 1], &[3, 1]);
        let g0 = bb(5, &[(0, 0), (0, 3), (1, 2), (2, 3), (1, 4)], &[0, 1], &[3, 1]);
        let g2 = bb(4, &[(0, 1), (1, 2), (2, 1), (3, 0)], &[0, 1], &[2, 1]);
        let g3 = bb(3, &[(0, 1), (1, 2), (2, 0)], &[0, 1], &[2, 1]);
        normalize_layout([g0, g1, g2, g3]).unwrap()
    }

    #[test]
    fn layout_matches_canonical_gluing() {
        for quad in [samples::toy_quadruple(), shared_port_quadruple()] {
            for instance in battery().iter().filter(|c| c.vars() <= 2) {
                let placed = delta_layout(&quad, instance).unwrap();
                let mut word = vec![2];
                word.extend(instance.sbar_string().bytes().map(|b| usize::from(b - b'0')));
                word.push(3);
                let glued = delta(&quad.family(), &word).unwrap();
                assert_eq!(placed.edge_count(), glued.graph().edge_count());
                let degrees = |g: &Digraph| {
                    let mut d: Vec<usize> = (0..g.vertex_count()).map(|v| g.out_neighbors(v).len()).collect();
                    d.sort_unstable();
                    d
                };
                assert_eq!(degrees(&placed), degrees(glued.graph()));
                if placed.vertex_count() <= crate::graph::ISO_LIMIT {
                    assert!(placed.isomorphic_small(glued.graph()).unwrap());
                }
            }
        }
    }

    #[test]
    fn end_to_end_examples() {
        let loop_sentence = parse(sentences::LOOP).unwrap();
        let quad = samples::toy_quadruple();
        let report = end_to_end(&quad, &loop_sentence, &battery());
        assert!(report.passed, "{report}");
        let shared = shared_port_quadruple();
        let report = end_to_end(&shared, &parse(sentences::TAUTOLOGY).unwrap(), &battery()[..20]);
        assert!(report.records.iter().all(|r| r.label_exact && r.succ_ref_agrees), "{report}");
        let built = build_quadruple(&samples::path_triple(), &samples::loop_vertex()).unwrap();
        assert!(end_to_end(&built, &loop_sentence, &battery()).passed);
    }

    #[test]
    fn corrupted_quadruple_fails_on_unsatisfiable_instances() {
        let [g0, g1, g2, g3] = samples::toy_gadgets();
        let corrupted = normalize_layout([g1, g0, g2, g3]).unwrap();
        let report = end_to_end(&corrupted, &parse(sentences::LOOP).unwrap(), &battery());
        assert!(!report.passed);
        for r in &report.records {
            assert!(r.label_exact && r.succ_ref_agrees);
            if !r.sat {
                assert!(!r.passed(), "{}", r.dimacs);
            }
        }
        assert!(report.to_json().contains("\"passed\": false"));
    }
}
