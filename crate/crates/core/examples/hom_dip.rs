//! Two-particle coincidence behind a balanced beamsplitter versus displacement.

use interference::prelude::Statistics;
use interference::scenarios::{hom_coincidence, linspace};

fn main() -> interference::Result<()> {
    let lc = 1.0;
    println!("{:>6} {:>12} {:>12}", "x/lc", "bosons", "fermions");
    for x in linspace(0.0, 3.0, 13)? {
        let b = hom_coincidence(lc, x, Statistics::Boson)?;
        let f = hom_coincidence(lc, x, Statistics::Fermion)?;
        println!("{x:6.2} {b:12.8} {f:12.8}");
    }
    Ok(())
}
