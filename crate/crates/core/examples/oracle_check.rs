//! Cross-checks the path-sum engine against an explicit first-quantized
//! simulation for partially distinguishable particles.

use interference::oracle::engine_deviation;
use interference::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> interference::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let m = rng.random_range(3..=6);
        let u = random_unitary(m, &mut rng)?;
        let input = AssignmentList::new(vec![0, 1, 2])?;
        let positions = (0..3).map(|_| rng.random_range(0.0..2.0)).collect();
        let gram = gram_from_positions(&SourceConfig::new(positions, 1.0)?)?;
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let (dev, total) = engine_deviation(&u, &input, &gram, stats)?;
            worst = worst.max(dev);
            assert!((total - 1.0).abs() < 1e-9);
        }
    }
    println!("max |engine - oracle| over 40 runs: {worst:.2e}");
    Ok(())
}
