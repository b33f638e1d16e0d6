//! Screen intensity behind two slits as the cross term is switched off.

use std::f64::consts::PI;

use interference::scenarios::double_slit;

fn main() -> interference::Result<()> {
    println!("{:>8} {:>10} {:>10} {:>10}", "phase", "c=1", "c=0.5", "c=0");
    for i in 0..=8 {
        let phase = i as f64 * PI / 4.0;
        println!(
            "{phase:8.4} {:10.6} {:10.6} {:10.6}",
            double_slit(phase, 1.0)?,
            double_slit(phase, 0.5)?,
            double_slit(phase, 0.0)?
        );
    }
    Ok(())
}
