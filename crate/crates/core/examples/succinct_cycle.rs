//! Builds a succinct representation of the directed cycle on 8 vertices
//! (`x → x + 1 mod 8`) by hand, then queries and materializes it.
//!
//! ```text
//! cargo run --example succinct_cycle
//! ```

use num_bigint::BigUint;
use succmso::circuit::CircuitBuilder;
use succmso::sgr::Sgr;

fn main() -> Result<(), succmso::Error> {
    let bits = 3;
    let mut b = CircuitBuilder::new(bits);
    let x = b.x_label();
    let y = b.y_label();
    // The sum is one bit wider; dropping the carry wraps around.
    let next = b.add_const(&x, &BigUint::from(1u32))?.truncated(bits);
    let out = b.eq(&next, &y)?;
    let circuit = b.finish(out)?;

    let sgr = Sgr::new(BigUint::from(8u32), circuit)?;
    println!("gates: {} (size bound {})", sgr.circuit().gate_count(), sgr.size_bound());
    for (x, y) in [(3u32, 4u32), (7, 0), (4, 3)] {
        let edge = sgr.edge_query(&x.into(), &y.into())?;
        println!("edge {x} -> {y}: {edge}");
    }

    let g = sgr.materialize(8)?;
    print!("{}", g.to_text());

    let json = sgr.to_json();
    assert_eq!(Sgr::from_json(&json)?.materialize(8)?, g);
    println!("bundle: {} bytes of JSON", json.len());
    Ok(())
}
