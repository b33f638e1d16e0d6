//! Three particles through a nine-mode Fourier multiport, entering modes
//! 3, 6 and 9, scanned over the relative delay.

use interference::prelude::Statistics;
use interference::scenarios::{boson_fourier_scan, fermion_fourier_scan, linspace};

fn main() -> interference::Result<()> {
    let xs = linspace(0.0, 5.0, 201)?;

    let fermions = fermion_fourier_scan(1.0, &xs, &[])?;
    let bosons = boson_fourier_scan(1.0, &xs, &[])?;

    for (stats, curve) in [(Statistics::Fermion, &fermions), (Statistics::Boson, &bosons)] {
        let flagged = curve.nonmonotonic_events();
        println!(
            "{stats}: {} events, {} with an interior extremum",
            curve.events().len(),
            flagged.len()
        );
        if let Some(event) = flagged.first() {
            for (x, p) in curve.series(event).iter().step_by(25) {
                println!("  {event} x={x:4.2} p={p:.6}");
            }
        }
    }
    Ok(())
}
