//! MSO Ehrenfeucht-Fraïssé games: equivalence of small digraphs, the point
//! where disjoint copies stop being distinguishable, and the explicit bound.
//!
//! ```text
//! cargo run --example ef_games
//! ```

use succmso::efgame::{ef_equiv, q_bound, q_search, saturating_scan};
use succmso::graph::Digraph;
use succmso::mso::parse;

fn path(n: usize) -> Digraph {
    Digraph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
}

fn main() -> Result<(), succmso::Error> {
    for m in 1..=3 {
        let row: Vec<String> = (1..=4)
            .map(|n| format!("P{n}~P{}:{}", n + 1, ef_equiv(&path(n), &path(n + 1), m).unwrap()))
            .collect();
        println!("{m} rounds: {}", row.join(" "));
    }

    let vertex = Digraph::new(1);
    let edge = path(2);
    // Copies are capped by the game's vertex limit.
    for m in 1..=3 {
        println!(
            "{m} rounds: q for one vertex = {:?}, for one edge = {:?}",
            q_search(&vertex, m, 4)?,
            q_search(&edge, m, 1)?
        );
    }
    println!("explicit bound for |G| = 1, one point and one set move: {}", q_bound(1, 1, 1)?);

    // Adding a looped vertex makes every graph a model of "some vertex has a loop".
    let omega = Digraph::from_edges(1, [(0, 0)])?;
    let battery: Vec<Digraph> = (1..=3).flat_map(Digraph::all_on).collect();
    let phi = parse("ex x. E(x,x)")?;
    let report = saturating_scan(&omega, &phi, &battery)?;
    println!("saturation: {:?} ({} of {} models)", report.verdict, report.models, report.tried);
    Ok(())
}
