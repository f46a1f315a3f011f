//! Gluing biboundaried graphs: secondary ports of the left operand are
//! identified with primary ports of the right one, and words over a gadget
//! family fold left to right.
//!
//! ```text
//! cargo run --example gluing
//! ```

use std::collections::BTreeMap;

use succmso::graph::{delta, glue, parse_word, BiboundariedGraph, Digraph, GadgetTriple};

fn main() -> Result<(), succmso::Error> {
    let edge = BiboundariedGraph::new(Digraph::from_edges(2, [(0, 1)])?, vec![0], vec![1])?;
    let looped = BiboundariedGraph::new(Digraph::from_edges(2, [(0, 1), (1, 1)])?, vec![0], vec![1])?;
    print!("edge . looped:\n{}", glue(&edge, &looped)?.to_text());

    // Two ports per face: a ladder rung glued end to end.
    let rung = BiboundariedGraph::new(
        Digraph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])?,
        vec![0, 1],
        vec![2, 3],
    )?;
    let family = BTreeMap::from([(1, rung), (2, edge.clone()), (3, looped)]);
    let ladder = delta(&family, &parse_word("111")?)?;
    println!(
        "rung^3: {} vertices, {} edges, ports {:?} / {:?}",
        ladder.vertex_count(),
        ladder.graph().edge_count(),
        ladder.p1(),
        ladder.p2()
    );

    let triple = GadgetTriple::new(edge.clone(), edge.clone(), edge)?;
    for n in 0..4 {
        let word = GadgetTriple::pump_word(n);
        let g = delta(&triple.family(), &word)?;
        println!("2 1^{n} 3 -> path on {} vertices", g.vertex_count());
    }
    Ok(())
}
