//! The two direct reductions: loops on a cycle of assignments, and a clique
//! that breaks exactly when some assignment satisfies the formula.
//!
//! ```text
//! cargo run --example auxiliary_reductions
//! ```

use succmso::mso::{eval, parse, sentences};
use succmso::reduce::{reduce_clique, reduce_loop, CliqueVariant, CnfInstance};
use succmso::verify::sat_solve;

fn main() -> Result<(), succmso::Error> {
    let looped = parse(sentences::LOOP)?;
    let cases = [
        CnfInstance::new(2, vec![vec![1], vec![-2]])?,
        CnfInstance::new(2, vec![vec![1, 2], vec![-1], vec![-2]])?,
        CnfInstance::new(3, vec![vec![-1, -2, -3], vec![1], vec![2], vec![3]])?,
    ];
    for cnf in &cases {
        let sat = sat_solve(cnf);
        let loop_graph = reduce_loop(cnf)?.materialize(64)?;
        let clique_graph = reduce_clique(cnf)?.materialize(64)?;
        let clique_checks: Vec<String> = [CliqueVariant::WithLoops, CliqueVariant::Irreflexive]
            .into_iter()
            .map(|v| Ok(format!("{v:?}={}", eval(&clique_graph, &parse(v.sentence())?)?)))
            .collect::<Result<_, succmso::Error>>()?;
        println!(
            "{sat}: loop sentence {} on {} vertices, clique sentence {}",
            eval(&loop_graph, &looped)?,
            loop_graph.vertex_count(),
            clique_checks.join(" ")
        );
    }
    Ok(())
}
