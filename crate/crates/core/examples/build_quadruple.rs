//! From a gadget triple and a fixed graph Ω to a full quadruple: first
//! confirm on small pumps that the sentence fails, then build, compile and
//! check a couple of formulas.
//!
//! ```text
//! cargo run --example build_quadruple
//! ```

use succmso::graph::{delta, GadgetTriple};
use succmso::mso::{eval, parse};
use succmso::reduce::samples::{loop_vertex, path_triple};
use succmso::reduce::{build_quadruple, compile, pump_check, CnfInstance};

fn main() -> Result<(), succmso::Error> {
    let triple = path_triple();
    let omega = loop_vertex();
    let phi = parse("ex x. E(x,x)")?;

    let report = pump_check(&triple, &phi, false, 6)?;
    println!("pump check on n = {:?}: passed {}", report.checked, report.passed());

    let quad = build_quadruple(&triple, &omega)?;
    println!("built quadruple, layout {:?}", quad.layout());
    for (j, g) in quad.gadgets().iter().enumerate() {
        println!("G{j}: {} vertices, edges {:?}", g.vertex_count(), g.graph().edges().collect::<Vec<_>>());
    }

    // Words using G0 pick up Ω's loop; pure pumps do not.
    for word in [vec![2, 1, 1, 3], vec![2, 0, 1, 3], vec![2, 1, 0, 0, 3]] {
        let g = delta(&quad.family(), &word)?;
        println!("word {word:?}: loop {}", eval(g.graph(), &phi)?);
    }

    for cnf in [CnfInstance::new(2, vec![vec![1, 2]])?, CnfInstance::new(1, vec![vec![1], vec![-1]])?] {
        let graph = compile(&quad, &cnf)?.materialize(1 << 10)?;
        println!("{}: {} vertices, loop {}", cnf.to_dimacs().trim().replace('\n', " "), graph.vertex_count(), eval(&graph, &phi)?);
    }

    let looped = GadgetTriple::new(quad.gadget(0).clone(), quad.gadget(2).clone(), quad.gadget(3).clone())?;
    let bad = pump_check(&looped, &phi, false, 3)?;
    println!("a looped middle gadget fails first at n = {:?}", bad.first_mismatch);
    Ok(())
}
