//! Every shape with up to N leaves (default 8) with its rank, height and
//! exact probability under the three random-tree models.
//!
//!     cargo run --example shape_tables -- 8

use cprank::enumeration::{shape_probability, ShapeTable};
use cprank::numeric::fmt_ratio;
use cprank::{to_newick, Model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_n: u64 = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    let table = ShapeTable::build(max_n)?;
    println!(
        "{:>2} {:>9} {:>6} {:>8} {:>9} {:>8}  newick",
        "n", "rank", "height", "uniform", "labeled", "yule"
    );
    for n in 1..=max_n {
        // Largest rank first, as in the usual presentation.
        for rec in table.shapes(n)?.iter().rev() {
            let p = |m| fmt_ratio(&shape_probability(&rec.shape, m));
            println!(
                "{n:>2} {:>9} {:>6} {:>8} {:>9} {:>8}  {}",
                rec.rank,
                rec.height,
                p(Model::UniformUnordered),
                p(Model::UniformLabeled),
                p(Model::YuleHarding),
                to_newick(&rec.shape)
            );
        }
    }
    Ok(())
}
