//! Bosonic (N,0,...,0) events have nonnegative orders, so they only grow
//! with overlap.

use interference::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> interference::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..5 {
        let u = random_unitary(5, &mut rng)?;
        let input = AssignmentList::new(vec![0, 2, 4])?;
        let output = OccupationVector::new(vec![3, 0, 0, 0, 0]);
        let orders = interference_orders(&u, &input, &output, Statistics::Boson)?;
        let coeffs: Vec<String> = orders
            .coefficients()
            .iter()
            .map(|(d, c)| format!("C_{d}={c:.3e}"))
            .collect();
        println!("trial {trial}: {} monotone={}", coeffs.join(" "), orders.is_monotonic());
    }
    Ok(())
}
