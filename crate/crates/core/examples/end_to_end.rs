//! Runs the built-in CNF battery through the whole pipeline and prints the
//! per-instance report.
//!
//! ```text
//! cargo run --release --example end_to_end
//! ```

use succmso::mso::{parse, sentences};
use succmso::reduce::samples::toy_quadruple;
use succmso::verify::{battery, end_to_end};

fn main() -> Result<(), succmso::Error> {
    let instances = battery();
    let report = end_to_end(&toy_quadruple(), &parse(sentences::LOOP)?, &instances);
    let failures: Vec<_> = report.records.iter().filter(|r| !r.passed()).collect();
    let sat = report.records.iter().filter(|r| r.sat).count();
    println!("{} instances, {sat} satisfiable", instances.len());
    for r in report.records.iter().take(5) {
        println!("#{} {}: sat={} formula={} in {}us", r.id, r.dimacs.trim().replace('\n', " "), r.sat, r.formula_holds, r.micros);
    }
    println!("...");
    println!("{} failures", failures.len());
    for r in failures {
        println!("{r:?}");
    }
    Ok(())
}
