//! A single photon rotated between two pure states and projected onto a
//! fixed state: the signal dips to zero although no coherence is lost.

use std::f64::consts::FRAC_PI_2;

use interference::scenarios::{bjork_predictability, bjork_projection, linspace};

fn main() -> interference::Result<()> {
    println!("{:>7} {:>10} {:>8} {:>10}", "gamma", "P", "purity", "predict.");
    for g in linspace(0.0, FRAC_PI_2, 11)? {
        let p = bjork_projection(g)?;
        println!(
            "{g:7.4} {:10.6} {:8.5} {:10.6}",
            p.probability,
            p.purity,
            bjork_predictability(g)?
        );
    }
    Ok(())
}
