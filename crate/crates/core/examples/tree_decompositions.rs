//! Exact treewidth, decomposition validation and degree normalization, plus
//! a decomposition of a glued path assembled from per-gadget pieces.
//!
//! ```text
//! cargo run --example tree_decompositions
//! ```

use std::collections::{BTreeMap, BTreeSet};

use succmso::graph::{delta, Digraph, GadgetTriple};
use succmso::reduce::samples::path_triple;
use succmso::treedec::{decomposition_of_delta, optimal_decomposition, treewidth_exact, TreeDecomposition};

fn grid(rows: usize, cols: usize) -> Digraph {
    let mut g = Digraph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                g.add_edge(v, v + 1).unwrap();
            }
            if r + 1 < rows {
                g.add_edge(v, v + cols).unwrap();
            }
        }
    }
    g
}

fn main() -> Result<(), succmso::Error> {
    let cycle = Digraph::from_edges(5, (0..5).map(|v| (v, (v + 1) % 5)))?;
    for (name, g) in [("5-cycle", cycle), ("3x3 grid", grid(3, 3)), ("2x4 grid", grid(2, 4))] {
        let td = optimal_decomposition(&g)?;
        println!(
            "{name}: treewidth {} with {} bags, valid {}",
            treewidth_exact(&g)?,
            td.node_count(),
            td.is_valid_for(&g)
        );
    }

    // A star of bags: the root has degree 4 before normalization.
    let square = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])?;
    let bag = |vs: &[usize]| vs.iter().copied().collect::<BTreeSet<_>>();
    let star = TreeDecomposition::new(
        vec![None, Some(0), Some(0), Some(0), Some(0)],
        vec![bag(&[0, 1, 2, 3]), bag(&[0, 1]), bag(&[1, 2]), bag(&[2, 3]), bag(&[0, 3])],
        None,
    )?;
    let normalized = star.normalize_degree3();
    println!(
        "star: max degree {} -> {}, width {} -> {}, still valid {}",
        star.max_degree(),
        normalized.max_degree(),
        star.width(),
        normalized.width(),
        normalized.is_valid_for(&square)
    );

    let broken = TreeDecomposition::chain(vec![bag(&[0, 1]), bag(&[2, 3])])?;
    println!("chain missing edges: {:?}", broken.validate(&square));

    // Each edge gadget gets the chain {0} - {0,1} - {1} with the last bag pointed.
    let family = path_triple().family();
    let piece = TreeDecomposition::chain(vec![bag(&[0]), bag(&[0, 1]), bag(&[1])])?.with_pointed_leaf(Some(2))?;
    let pieces: BTreeMap<usize, TreeDecomposition> = family.keys().map(|&l| (l, piece.clone())).collect();
    let word = GadgetTriple::pump_word(4);
    let glued = delta(&family, &word)?;
    let td = decomposition_of_delta(&family, &pieces, &word)?;
    println!(
        "word {word:?}: {} vertices, decomposition width {} valid {}",
        glued.vertex_count(),
        td.width(),
        td.is_valid_for(glued.graph())
    );
    Ok(())
}
