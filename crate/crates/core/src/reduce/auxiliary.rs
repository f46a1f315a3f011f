use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{CnfInstance, ReduceError};
use crate::circuit::CircuitBuilder;
use crate::mso::sentences;
use crate::sgr::Sgr;

/// `x → x` when `S(x)` holds, otherwise `x → x + 1 mod 2^s`.
pub fn reduce_loop(cnf: &CnfInstance) -> Result<Sgr, ReduceError> {
    let s = cnf.vars();
    let mut b = CircuitBuilder::new(s);
    let x = b.x_label();
    let y = b.y_label();
    let sat = b.cnf_eval(cnf.clauses(), &x)?;
    let next = b.add_const(&x, &BigUint::one())?.truncated(s);
    let stay = b.eq(&x, &y)?;
    let step = b.eq(&next, &y)?;
    let out = b.mux2(sat, step, stay);
    Ok(Sgr::new(BigUint::one() << s, b.finish(out)?)?)
}

/// `C(x, y) = ¬S(x) ∨ x = y`
pub fn reduce_clique(cnf: &CnfInstance) -> Result<Sgr, ReduceError> {
    let s = cnf.vars();
    let mut b = CircuitBuilder::new(s);
    let x = b.x_label();
    let y = b.y_label();
    let sat = b.cnf_eval(cnf.clauses(), &x)?;
    let unsat = b.not(sat);
    let stay = b.eq(&x, &y)?;
    let out = b.or(unsat, stay);
    Ok(Sgr::new(BigUint::one() << s, b.finish(out)?)?)
}

/// Which sentence counts as "the graph is a clique".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CliqueVariant {
    /// Every ordered pair, loops included.
    #[default]
    WithLoops,
    /// Every pair of distinct vertices.
    Irreflexive,
}

impl CliqueVariant {
    pub fn sentence(self) -> &'static str {
        match self {
            CliqueVariant::WithLoops => sentences::CLIQUE,
            CliqueVariant::Irreflexive => sentences::CLIQUE_IRREFLEXIVE,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Digraph;
    use crate::mso::{eval, parse};

    fn small_instances() -> Vec<CnfInstance> {
        let mut out = Vec::new();
        for s in 1..=3usize {
            let lits: Vec<i32> = (1..=s as i32).flat_map(|v| [v, -v]).collect();
            out.push(CnfInstance::new(s, vec![]).unwrap());
            for &a in &lits {
                out.push(CnfInstance::new(s, vec![vec![a]]).unwrap());
                for &b in &lits {
                    out.push(CnfInstance::new(s, vec![vec![a], vec![b]]).unwrap());
                    out.push(CnfInstance::new(s, vec![vec![a, b]]).unwrap());
                }
            }
        }
        out
    }

    fn satisfiable(cnf: &CnfInstance) -> bool {
        (0..1u64 << cnf.vars()).any(|a| cnf.eval_u64(a))
    }

    #[test]
    fn loop_examples() {
        let pos = CnfInstance::new(1, vec![vec![1]]).unwrap();
        let g = reduce_loop(&pos).unwrap().materialize(16).unwrap();
        assert_eq!(g, Digraph::from_edges(2, [(0, 1), (1, 1)]).unwrap());
        let contra = CnfInstance::new(1, vec![vec![1], vec![-1]]).unwrap();
        let g = reduce_loop(&contra).unwrap().materialize(16).unwrap();
        assert_eq!(g, Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap());
    }

    #[test]
    fn clique_examples() {
        let contra = CnfInstance::new(1, vec![vec![1], vec![-1]]).unwrap();
        let g = reduce_clique(&contra).unwrap().materialize(16).unwrap();
        assert_eq!(g.edge_count(), 4);
        let pos = CnfInstance::new(1, vec![vec![1]]).unwrap();
        let g = reduce_clique(&pos).unwrap().materialize(16).unwrap();
        assert_eq!(g.out_neighbors(1).iter().copied().collect::<Vec<_>>(), vec![1]);
        assert!(!eval(&g, &parse(CliqueVariant::default().sentence()).unwrap()).unwrap());
    }

    #[test]
    fn verdicts_track_satisfiability() {
        let loop_sentence = parse(sentences::LOOP).unwrap();
        let clique = parse(CliqueVariant::WithLoops.sentence()).unwrap();
        let irreflexive = parse(CliqueVariant::Irreflexive.sentence()).unwrap();
        for cnf in small_instances() {
            let sat = satisfiable(&cnf);
            let g = reduce_loop(&cnf).unwrap().materialize(16).unwrap();
            assert!((0..g.vertex_count()).all(|v| g.out_neighbors(v).len() == 1));
            assert_eq!(eval(&g, &loop_sentence).unwrap(), sat, "{cnf}");
            let g = reduce_clique(&cnf).unwrap().materialize(16).unwrap();
            assert_eq!(eval(&g, &clique).unwrap(), !sat, "{cnf}");
            assert_eq!(eval(&g, &irreflexive).unwrap(), !sat, "{cnf}");
        }
    }
}
