//! Compiles CNF formulas into succinct graphs over a gadget quadruple and
//! checks that the MSO sentence holds exactly on the satisfiable ones.
//!
//! ```text
//! cargo run --example sat_to_sgr
//! ```

use num_bigint::BigUint;
use succmso::mso::{eval, sentences};
use succmso::reduce::samples::toy_quadruple;
use succmso::reduce::{compile, gate_budget, CnfInstance};
use succmso::verify::{delta_layout, sat_solve};

fn main() -> Result<(), succmso::Error> {
    let quad = toy_quadruple();
    println!("layout: {:?}", quad.layout());
    let phi = succmso::mso::parse(sentences::LOOP)?;

    let cases = [
        ("x1", CnfInstance::new(1, vec![vec![1]])?),
        ("x1 & ~x1", CnfInstance::new(1, vec![vec![1], vec![-1]])?),
        ("(x1 | x2) & ~x1 & ~x2", CnfInstance::new(2, vec![vec![1, 2], vec![-1], vec![-2]])?),
        ("(x1 | ~x2) & (x2 | x3)", CnfInstance::new(3, vec![vec![1, -2], vec![2, 3]])?),
    ];
    for (name, cnf) in &cases {
        let sgr = compile(&quad, cnf)?;
        let graph = sgr.materialize(1 << 10)?;
        assert_eq!(graph, delta_layout(&quad, cnf)?);
        println!(
            "{name}: {} | N = {}, {} gates (budget {}), loop present: {}",
            sat_solve(cnf),
            sgr.n_vertices(),
            sgr.circuit().gate_count(),
            gate_budget(cnf.vars(), cnf.literal_count()),
            eval(&graph, &phi)?
        );
    }

    // Out-neighbours straight from the gadget layout, no circuit involved.
    let (_, cnf) = &cases[3];
    for x in 0u32..4 {
        let succ: Vec<String> = quad.succ_ref(cnf, &BigUint::from(x))?.iter().map(ToString::to_string).collect();
        println!("succ({x}) = {{{}}}", succ.join(", "));
    }
    Ok(())
}
