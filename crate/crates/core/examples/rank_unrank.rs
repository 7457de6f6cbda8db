//! Rank a few shapes, invert ranks back into shapes, and show how ranks
//! are grouped by height.
//!
//!     cargo run --example rank_unrank -- "((a,b),(c,(d,e)));"

use cprank::rank::{caterpillar_rank, height_rank_bounds, pseudocaterpillar_rank, split_rank};
use cprank::{double_log_rank, parse_newick, rank, to_newick, unrank, TreeShape};
use num_bigint::BigUint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let input = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "((a,b),(c,(d,e)));".to_string());
    let t = parse_newick(&input)?;
    let r = rank(&t);
    println!("{input} -> rank {r}, height {}, canonical {}", t.height(), to_newick(&t));
    if r > BigUint::from(1u32) {
        let (first, second) = split_rank(&r);
        println!("  children ranks ({first}, {second})");
    }

    for k in [1u32, 2, 3, 4, 5, 11, 437] {
        let t = unrank(&BigUint::from(k))?;
        println!("unrank({k:>3}) = {}", to_newick(&t));
    }

    println!("\nheight  first rank  last rank");
    for h in 0..=5 {
        let (lo, hi) = height_rank_bounds(h);
        println!("{h:>6}  {lo:>10}  {hi:>9}");
    }

    println!(
        "\ncaterpillar(12): rank has {} decimal digits",
        caterpillar_rank(11).to_string().len()
    );
    // Far too large to write down; the double log is still cheap.
    let cat = TreeShape::caterpillar(100_000)?;
    println!("caterpillar(100000): log2 ln f = {:.6}", double_log_rank(&cat)?);
    println!(
        "pseudocaterpillar(8) = {}",
        pseudocaterpillar_rank(6).expect("h >= 2")
    );
    Ok(())
}
