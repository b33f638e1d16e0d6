#![allow(dead_code)]

use interference::prelude::*;
use rand::seq::index::sample;
use rand::Rng;

/// Random event: Haar unitary on `m` modes, `n` particles in distinct input
/// modes, and a uniformly chosen output occupation.
pub struct Instance {
    pub unitary: ComplexMatrix,
    pub input: AssignmentList,
    pub output: OccupationVector,
}

pub fn distinct_inputs<R: Rng>(rng: &mut R, m: usize, n: usize) -> AssignmentList {
    let mut modes = sample(rng, m, n).into_vec();
    modes.sort_unstable();
    AssignmentList::new(modes).unwrap()
}

pub fn random_output<R: Rng>(rng: &mut R, m: usize, n: usize) -> OccupationVector {
    let mut counts = vec![0; m];
    for _ in 0..n {
        counts[rng.random_range(0..m)] += 1;
    }
    OccupationVector::new(counts)
}

pub fn random_instance<R: Rng>(rng: &mut R, m: usize, n: usize) -> Instance {
    Instance {
        unitary: random_unitary(m, rng).unwrap(),
        input: distinct_inputs(rng, m, n),
        output: random_output(rng, m, n),
    }
}

/// One pass/fail line per acceptance criterion.
pub fn report(id: u32, name: &str, outcome: &std::result::Result<String, String>) {
    match outcome {
        Ok(detail) => println!("[PASS] criterion {id:>2}: {name} ({detail})"),
        Err(detail) => println!("[FAIL] criterion {id:>2}: {name} ({detail})"),
    }
}
