//! Splits an event probability into contributions of 0, 2, 3, ... interfering
//! particles and compares against the two-term interpolation.

use interference::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> interference::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u = random_unitary(3, &mut rng)?;
    let input = AssignmentList::new(vec![0, 1, 2])?;
    let output = OccupationVector::new(vec![1, 1, 1]);

    let orders = interference_orders(&u, &input, &output, Statistics::Boson)?;
    for (d, c) in orders.coefficients() {
        println!("C_{d} = {c:+.6}");
    }

    let pc = orders.coefficient(0);
    let pq = orders.total_check;
    println!("{:>5} {:>10} {:>10}", "alpha", "exact", "two-term");
    for i in 0..=10 {
        let a = i as f64 / 10.0;
        println!(
            "{a:5.2} {:10.6} {:10.6}",
            transition_polynomial(&orders, a)?,
            naive_interpolation(pc, pq, a)?
        );
    }

    // the coefficients can also be recovered from sampled probabilities
    let samples: Vec<(f64, f64)> = (0..=6)
        .map(|i| {
            let a = i as f64 / 6.0;
            let spec = EventSpec::new(
                u.clone(),
                input.clone(),
                output.clone(),
                uniform_gram(3, a).unwrap(),
                Statistics::Boson,
            )
            .unwrap();
            (a, event_probability(&spec).unwrap())
        })
        .collect();
    let fitted = fit_orders(&samples, 3)?;
    println!("fitted C_3 = {:+.6}", fitted.coefficient(3));
    Ok(())
}
