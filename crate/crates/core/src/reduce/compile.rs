use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{CnfInstance, GadgetQuadruple, ReduceError};
use crate::circuit::{CircuitBuilder, GateId, WireBundle};
use crate::sgr::Sgr;

/// Regression cap on compiled gate counts: `2000·(s+1)² + 200·literals`.
pub fn gate_budget(s: usize, literals: usize) -> usize {
    2000 * (s + 1) * (s + 1) + 200 * literals
}

/// Which middle copy a gadget row is read in.
#[derive(Clone, Copy)]
enum CopyIndex {
    /// The copy `q + offset` of the source label, `offset ∈ {-1, 0}`.
    Relative(i8),
    /// A copy fixed at compile time.
    Fixed,
}

/// Target-side decomposition of `y` and the copy-index bundles of `x`.
struct Targets<'a> {
    quad: &'a GadgetQuadruple,
    s: usize,
    y: WireBundle,
    y_ge_n2: GateId,
    yq: WireBundle,
    yr: WireBundle,
    /// `q - 1`, `q`, `q + 1`
    copies: [WireBundle; 3],
}

impl Targets<'_> {
    fn label_is(&self, b: &mut CircuitBuilder, label: &BigUint) -> Result<GateId, ReduceError> {
        Ok(b.eq_const(&self.y, label)?)
    }

    /// `y = n2 + (copy + a)·n1 + rem` where `copy + a` is `q + delta`.
    fn in_copy(&self, b: &mut CircuitBuilder, delta: i8, rem: usize) -> Result<GateId, ReduceError> {
        let rem_ok = b.eq_const(&self.yr, &rem.into())?;
        let bundle = &self.copies[(delta + 1) as usize];
        let copy_ok = b.eq(&self.yq, bundle)?;
        Ok(b.and_all([self.y_ge_n2, rem_ok, copy_ok]))
    }

    /// `y ∈ δ_j(targets)` for the given copy.
    fn image(
        &self,
        b: &mut CircuitBuilder,
        j: usize,
        copy: CopyIndex,
        fixed_q: &BigUint,
        targets: &BTreeSet<usize>,
    ) -> Result<GateId, ReduceError> {
        let l = self.quad.layout();
        let low_limit = self.quad.gadget(1).vertex_count() - l.k_shared;
        let mut hits = Vec::with_capacity(targets.len());
        for &v in targets {
            let hit = match (j, copy) {
                (0 | 1, CopyIndex::Relative(offset)) if v < low_limit => {
                    let a = (v / l.n1) as i8;
                    self.in_copy(b, offset + a, v % l.n1)?
                }
                _ => {
                    let label = self.quad.delta_map(self.s, j, fixed_q, v)?;
                    self.label_is(b, &label)?
                }
            };
            hits.push(hit);
        }
        Ok(b.or_all(hits))
    }

    /// `y ∈ ⋃_t δ^t_1(targets)` over every middle copy `t`.
    fn image_all_copies(&self, b: &mut CircuitBuilder, targets: &BTreeSet<usize>) -> Result<GateId, ReduceError> {
        let l = self.quad.layout();
        let low_limit = self.quad.gadget(1).vertex_count() - l.k_shared;
        let mut hits = Vec::with_capacity(targets.len());
        for &v in targets {
            if v < low_limit {
                let a = v / l.n1;
                let rem_ok = b.eq_const(&self.yr, &(v % l.n1).into())?;
                let below = b.less_const(&self.yq, &BigUint::from(a))?;
                let at_least = b.not(below);
                let at_most = b.less_const(&self.yq, &((BigUint::one() << self.s) + a))?;
                hits.push(b.and_all([self.y_ge_n2, rem_ok, at_least, at_most]));
            } else {
                let label = self.quad.delta_map(self.s, 1, &GadgetQuadruple::last_copy(self.s), v)?;
                hits.push(self.label_is(b, &label)?);
            }
        }
        Ok(b.or_all(hits))
    }
}

fn row(quad: &GadgetQuadruple, j: usize, r: usize) -> &BTreeSet<usize> {
    quad.gadget(j).graph().out_neighbors(r)
}

/// Synthesizes the adjacency circuit of the glued graph `2·S̄·3` over the
/// quadruple, without expanding the word.
pub fn compile(quad: &GadgetQuadruple, cnf: &CnfInstance) -> Result<Sgr, ReduceError> {
    if !quad.is_validated() {
        return Err(ReduceError::NotValidated);
    }
    let s = cnf.vars();
    let l = quad.layout();
    let n_vertices = quad.n_vertices(s);
    let label_bits = (&n_vertices - 1u32).bits().max(1) as usize;
    let n1 = BigUint::from(l.n1);
    let n2 = BigUint::from(l.n2);
    let middle_len = &n1 << s;
    let base3 = &n2 + &middle_len;
    let last = GadgetQuadruple::last_copy(s);
    let zero = BigUint::zero();
    let one = BigUint::one();

    let mut b = CircuitBuilder::new(label_bits);
    let x = b.x_label();
    let y = b.y_label();

    // source: which block x is in, and (q, r) inside the middle block
    let x_lt_n2 = b.less_const(&x, &n2)?;
    let x_ge_n2 = b.not(x_lt_n2);
    let dx = b.sub_const(&x, &n2)?;
    let (q, r) = b.divmod_const(&dx, &n1)?;
    let dx_in_middle = b.less_const(&dx, &middle_len)?;
    let in_middle = b.and(x_ge_n2, dx_in_middle);
    let past_middle = b.not(dx_in_middle);
    let in_last = b.and(x_ge_n2, past_middle);
    let r3 = b.sub_const(&x, &base3)?;

    let sat_q = b.cnf_eval(cnf.clauses(), &q.truncated(s))?;
    let j_is_1 = b.not(sat_q);
    let q_minus_1 = b.sub_const(&q, &one)?;
    let sat_prev = b.cnf_eval(cnf.clauses(), &q_minus_1.truncated(s))?;
    let i_is_1 = b.not(sat_prev);
    let q_is_0 = b.eq_const(&q, &zero)?;
    let q_plus_1 = b.add_const(&q, &one)?;

    // target: y relative to the middle block
    let y_lt_n2 = b.less_const(&y, &n2)?;
    let y_ge_n2 = b.not(y_lt_n2);
    let dy = b.sub_const(&y, &n2)?;
    let (yq, yr) = b.divmod_const(&dy, &n1)?;
    let t = Targets {
        quad,
        s,
        y,
        y_ge_n2,
        yq,
        yr,
        copies: [q_minus_1, q, q_plus_1],
    };

    let mut first = Vec::with_capacity(l.n2);
    for r0 in 0..l.n2 {
        let at = b.eq_const(&x, &r0.into())?;
        let hit = t.image(&mut b, 2, CopyIndex::Fixed, &zero, row(quad, 2, r0))?;
        first.push(b.and(at, hit));
    }
    let first = b.or_all(first);

    let mut middle = Vec::with_capacity(l.n1);
    for r0 in 0..l.n1 {
        let at = b.eq_const(&r, &r0.into())?;
        let as_g0 = t.image(&mut b, 0, CopyIndex::Relative(0), &zero, row(quad, 0, r0))?;
        let as_g1 = t.image(&mut b, 1, CopyIndex::Relative(0), &zero, row(quad, 1, r0))?;
        let mut hit = b.mux2(j_is_1, as_g0, as_g1);
        if r0 < l.k_private {
            // r0 is also a secondary port of the previous copy (or of G2 when q = 0)
            let from_g2 = t.image(&mut b, 2, CopyIndex::Fixed, &zero, row(quad, 2, r0 + l.n2))?;
            let prev_g0 = t.image(&mut b, 0, CopyIndex::Relative(-1), &zero, row(quad, 0, r0 + l.n1))?;
            let prev_g1 = t.image(&mut b, 1, CopyIndex::Relative(-1), &zero, row(quad, 1, r0 + l.n1))?;
            let prev = b.mux2(i_is_1, prev_g0, prev_g1);
            let before = b.mux2(q_is_0, prev, from_g2);
            hit = b.or(hit, before);
        }
        middle.push(b.and(at, hit));
    }
    let middle = b.or_all(middle);

    let last_letter = usize::from(cnf.sbar_at(&last)?);
    let mut closing = Vec::with_capacity(l.n3);
    for r0 in 0..l.n3 {
        let at = b.eq_const(&r3, &r0.into())?;
        let mut hit = t.image(&mut b, 3, CopyIndex::Fixed, &zero, row(quad, 3, r0))?;
        if r0 < l.k_private {
            let prev = t.image(&mut b, last_letter, CopyIndex::Fixed, &last, row(quad, last_letter, r0 + l.n1))?;
            hit = b.or(hit, prev);
        } else if r0 < l.k {
            let from_g2 = t.image(&mut b, 2, CopyIndex::Fixed, &zero, row(quad, 2, r0 + l.n2))?;
            let from_copies = t.image_all_copies(&mut b, row(quad, 1, r0 + l.n1))?;
            hit = b.or_all([hit, from_g2, from_copies]);
        }
        closing.push(b.and(at, hit));
    }
    let closing = b.or_all(closing);

    let middle = b.and(in_middle, middle);
    let closing = b.and(in_last, closing);
    let out = b.or_all([first, middle, closing]);
    let circuit = b.finish(out)?;
    Ok(Sgr::new(n_vertices, circuit)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Digraph;
    use crate::reduce::{normalize_layout, samples};
    use num_traits::ToPrimitive;
    use std::time::Instant;

    fn path(n: usize) -> Digraph {
        Digraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn toy_examples() {
        let quad = samples::toy_quadruple();
        let s = CnfInstance::new(1, vec![vec![1]]).unwrap();
        let sgr = compile(&quad, &s).unwrap();
        assert_eq!(sgr.n_vertices(), &BigUint::from(5u32));
        let g = sgr.materialize(64).unwrap();
        assert_eq!(g, Digraph::from_edges(5, [(0, 1), (1, 2), (2, 2), (2, 3), (3, 4)]).unwrap());
        assert!(sgr.check_size_convention());

        let contra = CnfInstance::new(1, vec![vec![1], vec![-1]]).unwrap();
        let g = compile(&quad, &contra).unwrap().materialize(64).unwrap();
        assert_eq!(g, path(5));
    }

    #[test]
    fn unvalidated_quadruple_is_refused() {
        let quad = GadgetQuadruple::unchecked(samples::toy_gadgets());
        let s = CnfInstance::new(1, vec![vec![1]]).unwrap();
        assert_eq!(compile(&quad, &s).unwrap_err().kind(), "NotValidated");
    }

    fn check_against_succ_ref(quad: &GadgetQuadruple, cnf: &CnfInstance) {
        let sgr = compile(quad, cnf).unwrap();
        let g = sgr.materialize(1 << 12).unwrap();
        let n = quad.n_vertices(cnf.vars()).to_usize().unwrap();
        assert_eq!(g.vertex_count(), n);
        for x in 0..n {
            let expected: BTreeSet<usize> = quad
                .succ_ref(cnf, &x.into())
                .unwrap()
                .iter()
                .map(|v| v.to_usize().unwrap())
                .collect();
            assert_eq!(g.out_neighbors(x), &expected, "x = {x} for {cnf}");
        }
    }

    #[test]
    fn agrees_with_succ_ref_on_shared_port_gadgets() {
        let bb = |n, edges: &[(usize, usize)], p1: &[usize], p2: &[usize]| {
            crate::graph::BiboundariedGraph::new(Digraph::from_edges(n, edges.iter().copied()).unwrap(), p1.to_vec(), p2.to_vec())
                .unwrap()
        };
        let g1 = bb(5, &[(0, 2), (2, 3), (1, 2), (3, 1), (1, 4), (4, 0)], &[0, 1], &[3, 1]);
        let g0 = bb(5, &[(0, 0), (0, 3), (1, 2), (2, 3), (1, 4)], &[0, 1], &[3, 1]);
        let g2 = bb(4, &[(0, 1), (1, 2), (2, 1), (3, 0)], &[0, 1], &[2, 1]);
        let g3 = bb(3, &[(0, 1), (1, 2), (2, 0)], &[0, 1], &[2, 1]);
        let quad = normalize_layout([g0, g1, g2, g3]).unwrap();
        for s in 1..=3usize {
            let si = s as i32;
            for clauses in [vec![], vec![vec![1]], vec![vec![-1, si]], vec![vec![1], vec![-1]], vec![vec![-si], vec![1, -1]]] {
                check_against_succ_ref(&quad, &CnfInstance::new(s, clauses).unwrap());
            }
        }
    }

    #[test]
    fn budget_and_speed_on_toy() {
        let quad = samples::toy_quadruple();
        let mut previous = 0;
        for s in 4..=12usize {
            let clauses: Vec<Vec<i32>> = (1..=s as i32).map(|v| vec![v, -(v % s as i32 + 1)]).collect();
            let cnf = CnfInstance::new(s, clauses).unwrap();
            let start = Instant::now();
            let sgr = compile(&quad, &cnf).unwrap();
            let elapsed = start.elapsed();
            let gates = sgr.circuit().gate_count();
            assert!(gates <= gate_budget(s, cnf.literal_count()), "s = {s}: {gates} gates");
            assert!(gates >= previous);
            assert!(elapsed.as_millis() < 100, "s = {s}: {elapsed:?}");
            previous = gates;
        }
    }
}
