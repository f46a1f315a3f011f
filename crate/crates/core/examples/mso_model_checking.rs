//! Parses a few MSO sentences and evaluates them on small digraphs.
//!
//! ```text
//! cargo run --example mso_model_checking
//! ```

use succmso::graph::Digraph;
use succmso::mso::{eval, Formula, eval_with, parse, reach_macro, sentences, Valuation};

fn main() -> Result<(), succmso::Error> {
    let path = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3)])?;
    let cycle = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])?;
    let fork = Digraph::from_edges(3, [(0, 1), (0, 2)])?;

    for (name, text) in [
        ("loop", sentences::LOOP),
        ("determinism", sentences::DETERMINISM),
        ("nontrivial cycle", sentences::NONTRIVIAL_CYCLE),
    ] {
        let phi = parse(text)?;
        println!("{name} (rank {}): {text}", phi.rank());
        for (gname, g) in [("path", &path), ("cycle", &cycle), ("fork", &fork)] {
            println!("  {gname:>5}: {}", eval(g, &phi)?);
        }
    }

    // Reachability needs a set quantifier; free variables are bound by a valuation.
    let reach = reach_macro("x", "y", "R");
    for (from, to) in [(0, 3), (3, 0)] {
        let v = Valuation::new().with_point("x", from).with_point("y", to);
        println!("path: {to} reachable from {from}: {}", eval_with(&path, &reach, &v)?);
    }

    let has_pred_in_set = Formula::parse_in_context("ex y. (E(y,x) & y in X)", &["x", "X"])?;
    let v = Valuation::new().with_point("x", 2).with_set("X", [1, 2]);
    println!("path: 2 has a predecessor in {{1, 2}}: {}", eval_with(&path, &has_pred_in_set, &v)?);
    Ok(())
}
