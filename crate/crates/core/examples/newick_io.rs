//! Read Newick trees (labels and branch lengths are accepted and dropped),
//! print their canonical shape, and report parse errors with positions.

use cprank::{parse_newick, rank, to_newick};

fn main() {
    let inputs = [
        "((Homo:0.2,Pan:0.3)'great apes':1.0,(Mus,Rattus));",
        "(((A,B),C),(D,(E,F)));",
        "((,),);",
        "((,,),);",
        "((A,B),C",
    ];
    for s in inputs {
        match parse_newick(s) {
            Ok(t) => {
                let m = t.metrics();
                println!("{s}");
                println!(
                    "  shape {}  rank {}  leaves {}  height {}  symmetric nodes {}",
                    to_newick(&t),
                    rank(&t),
                    m.leaves,
                    m.height,
                    m.symmetric_nodes
                );
            }
            Err(e) => println!("{s}\n  error: {e}"),
        }
    }
}
