//! Event probabilities for partially distinguishable particles.
//!
//! For inputs `r` (one mode per particle), output occupation `s` with
//! ascending expansion `d`, Gram matrix `S` and unitary `U`, the probability
//! of observing `s` is
//!
//! ```text
//! P = 1/(∏_j s_j! · Z) · Σ_{σ,ρ} ε(σ)ε(ρ) ∏_k S[σ(k),ρ(k)] · conj(U[r_σ(k), d_k]) · U[r_ρ(k), d_k]
//! ```
//!
//! with `ε ≡ 1` for bosons and the permutation sign for fermions. `Z` is the
//! norm of the (anti)symmetrized input state and equals 1 whenever all
//! particles start in distinct modes.
//!
//! The double sum is evaluated as `ρ = σ∘π`, so each term carries the sign
//! `ε(π)` and can be grouped by the number of particles `π` moves. The
//! [`crate::decompose`] module reuses that grouping.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::linalg::{determinant, permanent, scattering_submatrix, ComplexMatrix};
use crate::model::{
    enumerate_occupations, occupation_to_assignment, AssignmentList, GramMatrix, OccupationVector,
    Statistics,
};
use crate::permutations::PermutationTable;
use crate::{Error, Result};

/// Largest particle number for the general double-permutation sum.
pub const MAX_GENERAL_PARTICLES: usize = 7;
/// Largest particle number for the permanent/determinant fast paths.
pub const MAX_FAST_PARTICLES: usize = 16;
/// Particle budget of [`full_distribution`].
pub const MAX_DISTRIBUTION_PARTICLES: usize = 5;
/// Mode budget of [`full_distribution`].
pub const MAX_DISTRIBUTION_MODES: usize = 12;
/// Residual imaginary part and out-of-range slack accepted before a result
/// is reported as inconsistent.
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// A fully specified detection event.
#[derive(Debug, Clone)]
pub struct EventSpec {
    pub unitary: ComplexMatrix,
    pub input: AssignmentList,
    pub output: OccupationVector,
    pub gram: GramMatrix,
    pub statistics: Statistics,
}

impl EventSpec {
    pub fn new(
        unitary: ComplexMatrix,
        input: AssignmentList,
        output: OccupationVector,
        gram: GramMatrix,
        statistics: Statistics,
    ) -> Result<Self> {
        let spec = Self {
            unitary,
            input,
            output,
            gram,
            statistics,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn particles(&self) -> usize {
        self.input.len()
    }

    pub fn modes(&self) -> usize {
        self.unitary.rows()
    }

    fn validate(&self) -> Result<()> {
        check_event(&self.unitary, &self.input, &self.output)?;
        if self.gram.dim() != self.input.len() {
            return Err(Error::Spec(format!(
                "Gram matrix is {}x{} but there are {} particles",
                self.gram.dim(),
                self.gram.dim(),
                self.input.len()
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_event(
    u: &ComplexMatrix,
    input: &AssignmentList,
    output: &OccupationVector,
) -> Result<()> {
    if !u.is_square() {
        return Err(Error::Spec(format!(
            "unitary must be square, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let m = u.rows();
    if output.modes() != m {
        return Err(Error::Spec(format!(
            "output has {} modes, unitary has {m}",
            output.modes()
        )));
    }
    if output.total() != input.len() {
        return Err(Error::Spec(format!(
            "output holds {} particles, input holds {}",
            output.total(),
            input.len()
        )));
    }
    if let Some(&bad) = input.modes().iter().find(|&&r| r >= m) {
        return Err(Error::Index(format!("input mode {bad} out of range for {m} modes")));
    }
    Ok(())
}

/// Products `conj(M[a,k])·M[b,k]·w(a,b)` indexed as `[(a·n + b)·n + k]`.
fn pair_table(
    sub: &ComplexMatrix,
    weight: impl Fn(usize, usize) -> Complex64,
) -> Vec<Complex64> {
    let n = sub.rows();
    let mut table = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            let w = weight(a, b);
            for k in 0..n {
                table.push(sub[(a, k)].conj() * sub[(b, k)] * w);
            }
        }
    }
    table
}

/// Accumulates `Σ_σ ∏_k table[σ(k), σ(π(k)), k]` times `ε(π)` into the
/// bucket of π's moved-point count. Summation order is fixed.
pub(crate) fn accumulate_by_order(
    sub: &ComplexMatrix,
    weight: impl Fn(usize, usize) -> Complex64,
    statistics: Statistics,
    perms: &PermutationTable,
) -> Vec<Complex64> {
    let n = sub.rows();
    let table = pair_table(sub, weight);
    let mut buckets = vec![Complex64::new(0.0, 0.0); n + 1];
    for pi_idx in 0..perms.len() {
        let pi = perms.get(pi_idx);
        let mut inner = Complex64::new(0.0, 0.0);
        for sigma in perms.iter() {
            let mut term = Complex64::new(1.0, 0.0);
            for k in 0..n {
                let a = sigma[k] as usize;
                let b = sigma[pi[k] as usize] as usize;
                term *= table[(a * n + b) * n + k];
            }
            inner += term;
        }
        buckets[perms.moved_points(pi_idx)] += inner * statistics.exchange_sign(perms.sign(pi_idx));
    }
    buckets
}

/// Norm `Z` of the (anti)symmetrized input state, divided by `N!`.
pub fn input_normalization(
    input: &AssignmentList,
    gram: &GramMatrix,
    statistics: Statistics,
) -> Result<f64> {
    let n = input.len();
    if input.has_distinct_modes() {
        return Ok(1.0);
    }
    let perms = PermutationTable::new(n)?;
    let r = input.modes();
    let mut z = Complex64::new(0.0, 0.0);
    for idx in 0..perms.len() {
        let tau = perms.get(idx);
        if (0..n).any(|q| r[q] != r[tau[q] as usize]) {
            continue;
        }
        let prod: Complex64 = (0..n).map(|q| gram.get(q, tau[q] as usize)).product();
        z += prod * statistics.exchange_sign(perms.sign(idx));
    }
    if z.im.abs() > CONSISTENCY_TOL {
        return Err(Error::Consistency(format!("input norm has imaginary part {:e}", z.im)));
    }
    if z.re <= 1e-12 {
        return Err(Error::Spec(
            "input state vanishes: fermions share a mode with overlapping internal states".into(),
        ));
    }
    Ok(z.re)
}

/// Rejects residual imaginary parts and out-of-range values, then clamps
/// floating-point noise into `[0, 1]`.
pub(crate) fn finish_probability(value: Complex64) -> Result<f64> {
    if value.im.abs() > CONSISTENCY_TOL {
        return Err(Error::Consistency(format!(
            "probability has imaginary part {:e}",
            value.im
        )));
    }
    let p = value.re;
    if !p.is_finite() || p < -CONSISTENCY_TOL || p > 1.0 + CONSISTENCY_TOL {
        return Err(Error::Consistency(format!("probability {p} outside [0, 1]")));
    }
    // `+ 0.0` folds a possible -0.0
    Ok(p.clamp(0.0, 1.0) + 0.0)
}

/// General event probability from the double sum over many-particle paths.
pub fn event_probability(spec: &EventSpec) -> Result<f64> {
    spec.validate()?;
    let n = spec.particles();
    if n > MAX_GENERAL_PARTICLES {
        return Err(Error::Resource(format!(
            "{n} particles exceed the general-path limit of {MAX_GENERAL_PARTICLES}"
        )));
    }
    let z = input_normalization(&spec.input, &spec.gram, spec.statistics)?;
    let out = occupation_to_assignment(&spec.output);
    let sub = scattering_submatrix(&spec.unitary, spec.input.modes(), out.modes())?;
    let perms = PermutationTable::new(n)?;
    let gram = &spec.gram;
    let buckets = accumulate_by_order(&sub, |a, b| gram.get(a, b), spec.statistics, &perms);
    let total: Complex64 = buckets.iter().sum();
    finish_probability(total / (spec.output.factorial_product() * z))
}

fn fast_path_checks(
    u: &ComplexMatrix,
    input: &AssignmentList,
    output: &OccupationVector,
) -> Result<ComplexMatrix> {
    check_event(u, input, output)?;
    if input.len() > MAX_FAST_PARTICLES {
        return Err(Error::Resource(format!(
            "{} particles exceed the fast-path limit of {MAX_FAST_PARTICLES}",
            input.len()
        )));
    }
    let out = occupation_to_assignment(output);
    scattering_submatrix(u, input.modes(), out.modes())
}

/// Fully indistinguishable particles: `|perm M|²/(∏s!∏r!)` for bosons,
/// `|det M|²` for fermions.
pub fn quantum_probability(
    u: &ComplexMatrix,
    input: &AssignmentList,
    output: &OccupationVector,
    statistics: Statistics,
) -> Result<f64> {
    let sub = fast_path_checks(u, input, output)?;
    let value = match statistics {
        Statistics::Boson => {
            let input_occ = input.to_occupation(u.rows())?;
            permanent(&sub)?.norm_sqr()
                / (output.factorial_product() * input_occ.factorial_product())
        }
        Statistics::Fermion => {
            if !input.has_distinct_modes() {
                return Err(Error::Spec(
                    "indistinguishable fermions cannot share an input mode".into(),
                ));
            }
            determinant(&sub)?.norm_sqr()
        }
    };
    finish_probability(Complex64::new(value, 0.0))
}

/// Fully distinguishable particles: permanent of the entrywise `|M|²`
/// divided by `∏s!`. Independent of the exchange statistics.
pub fn classical_probability(
    u: &ComplexMatrix,
    input: &AssignmentList,
    output: &OccupationVector,
) -> Result<f64> {
    let sub = fast_path_checks(u, input, output)?;
    let intensities = sub.map(|z| Complex64::new(z.norm_sqr(), 0.0));
    let value = permanent(&intensities)? / output.factorial_product();
    finish_probability(value)
}

/// Probabilities of every output occupation, in the order of
/// [`enumerate_occupations`]. Events are evaluated in parallel; each value is
/// computed with a fixed summation order so the result does not depend on
/// scheduling.
pub fn full_distribution(
    u: &ComplexMatrix,
    input: &AssignmentList,
    gram: &GramMatrix,
    statistics: Statistics,
) -> Result<Vec<(OccupationVector, f64)>> {
    let n = input.len();
    let m = u.rows();
    if n > MAX_DISTRIBUTION_PARTICLES || m > MAX_DISTRIBUTION_MODES {
        return Err(Error::Resource(format!(
            "full distribution limited to N ≤ {MAX_DISTRIBUTION_PARTICLES}, m ≤ {MAX_DISTRIBUTION_MODES} (got N={n}, m={m})"
        )));
    }
    let events = enumerate_occupations(m, n);
    events
        .into_par_iter()
        .map(|output| {
            let spec = EventSpec {
                unitary: u.clone(),
                input: input.clone(),
                output,
                gram: gram.clone(),
                statistics,
            };
            let p = event_probability(&spec)?;
            Ok((spec.output, p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{beamsplitter, fourier_unitary};
    use crate::model::uniform_gram;

    fn hom(output: [usize; 2], gram: GramMatrix, statistics: Statistics) -> EventSpec {
        EventSpec::new(
            beamsplitter(0.5).unwrap(),
            AssignmentList::new(vec![0, 1]).unwrap(),
            OccupationVector::new(output.to_vec()),
            gram,
            statistics,
        )
        .unwrap()
    }

    #[test]
    fn hom_coincidence_limits() {
        let p = event_probability(&hom([1, 1], GramMatrix::all_ones(2), Statistics::Boson));
        assert!(p.unwrap().abs() < 1e-15);
        let p = event_probability(&hom([1, 1], GramMatrix::identity(2), Statistics::Boson));
        assert!((p.unwrap() - 0.5).abs() < 1e-15);
        let p = event_probability(&hom([1, 1], GramMatrix::all_ones(2), Statistics::Fermion));
        assert!((p.unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hom_coincidence_partial_overlap() {
        for alpha in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
            let g = uniform_gram(2, alpha).unwrap();
            let p = event_probability(&hom([1, 1], g, Statistics::Boson)).unwrap();
            assert!((p - (1.0 - alpha * alpha) / 2.0).abs() < 1e-14, "alpha={alpha}");
        }
    }

    #[test]
    fn pauli_exclusion() {
        let u = fourier_unitary(4).unwrap();
        let input = AssignmentList::new(vec![0, 1, 3]).unwrap();
        for out in [[2, 1, 0, 0], [0, 0, 3, 0], [1, 0, 0, 2]] {
            let spec = EventSpec::new(
                u.clone(),
                input.clone(),
                OccupationVector::new(out.to_vec()),
                GramMatrix::all_ones(3),
                Statistics::Fermion,
            )
            .unwrap();
            assert!(event_probability(&spec).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn fast_paths_on_hom() {
        let bs = beamsplitter(0.5).unwrap();
        let input = AssignmentList::new(vec![0, 1]).unwrap();
        let coinc = OccupationVector::new(vec![1, 1]);
        let bunched = OccupationVector::new(vec![2, 0]);
        assert!(quantum_probability(&bs, &input, &coinc, Statistics::Boson).unwrap() < 1e-15);
        let f = quantum_probability(&bs, &input, &coinc, Statistics::Fermion).unwrap();
        assert!((f - 1.0).abs() < 1e-14);
        let b = quantum_probability(&bs, &input, &bunched, Statistics::Boson).unwrap();
        assert!((b - 0.5).abs() < 1e-14);
        let c = classical_probability(&bs, &input, &coinc).unwrap();
        assert!((c - 0.5).abs() < 1e-14);
    }

    #[test]
    fn fourier_distinguishable_values() {
        let u = fourier_unitary(9).unwrap();
        let input = AssignmentList::new(vec![2, 5, 8]).unwrap();
        let cases = [
            (vec![1, 1, 1, 0, 0, 0, 0, 0, 0], 6.0 / 729.0),
            (vec![0, 0, 0, 0, 0, 0, 0, 0, 3], 1.0 / 729.0),
            (vec![2, 1, 0, 0, 0, 0, 0, 0, 0], 3.0 / 729.0),
        ];
        for (occ, expected) in cases {
            let out = OccupationVector::new(occ);
            let classical = classical_probability(&u, &input, &out).unwrap();
            assert!((classical - expected).abs() < 1e-14);
            for stats in [Statistics::Boson, Statistics::Fermion] {
                let spec = EventSpec::new(
                    u.clone(),
                    input.clone(),
                    out.clone(),
                    GramMatrix::identity(3),
                    stats,
                )
                .unwrap();
                assert!((event_probability(&spec).unwrap() - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn repeated_boson_inputs_are_normalized() {
        let input = AssignmentList::new(vec![0, 0]).unwrap();
        let id = ComplexMatrix::identity(2);
        let out = OccupationVector::new(vec![2, 0]);
        let spec = EventSpec::new(
            id.clone(),
            input.clone(),
            out.clone(),
            GramMatrix::all_ones(2),
            Statistics::Boson,
        )
        .unwrap();
        assert!((event_probability(&spec).unwrap() - 1.0).abs() < 1e-14);
        assert!((quantum_probability(&id, &input, &out, Statistics::Boson).unwrap() - 1.0).abs() < 1e-14);

        let bs = beamsplitter(0.5).unwrap();
        let dist = full_distribution(&bs, &input, &GramMatrix::all_ones(2), Statistics::Boson).unwrap();
        let probs: Vec<f64> = dist.iter().map(|(_, p)| *p).collect();
        // (2,0), (1,1), (0,2)
        assert!((probs[0] - 0.25).abs() < 1e-14);
        assert!((probs[1] - 0.5).abs() < 1e-14);
        assert!((probs[2] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn coincident_identical_fermions_are_rejected() {
        let spec = EventSpec::new(
            beamsplitter(0.5).unwrap(),
            AssignmentList::new(vec![0, 0]).unwrap(),
            OccupationVector::new(vec![1, 1]),
            GramMatrix::all_ones(2),
            Statistics::Fermion,
        )
        .unwrap();
        assert!(matches!(event_probability(&spec), Err(Error::Spec(_))));

        // orthogonal internal states make the same-mode pair legal
        let spec = EventSpec::new(
            beamsplitter(0.5).unwrap(),
            AssignmentList::new(vec![0, 0]).unwrap(),
            OccupationVector::new(vec![1, 1]),
            GramMatrix::identity(2),
            Statistics::Fermion,
        )
        .unwrap();
        assert!((event_probability(&spec).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatches() {
        let bs = beamsplitter(0.5).unwrap();
        let input = AssignmentList::new(vec![0, 1]).unwrap();
        let bad_out = OccupationVector::new(vec![1, 1, 0]);
        assert!(matches!(
            EventSpec::new(bs.clone(), input.clone(), bad_out, GramMatrix::identity(2), Statistics::Boson),
            Err(Error::Spec(_))
        ));
        let wrong_total = OccupationVector::new(vec![2, 1]);
        assert!(matches!(
            EventSpec::new(bs.clone(), input.clone(), wrong_total, GramMatrix::identity(2), Statistics::Boson),
            Err(Error::Spec(_))
        ));
        let out = OccupationVector::new(vec![1, 1]);
        assert!(matches!(
            EventSpec::new(bs, input, out, GramMatrix::identity(3), Statistics::Boson),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn distribution_budget() {
        let u = fourier_unitary(13).unwrap();
        let input = AssignmentList::new(vec![0, 1]).unwrap();
        assert!(matches!(
            full_distribution(&u, &input, &GramMatrix::identity(2), Statistics::Boson),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn hom_distribution() {
        let bs = beamsplitter(0.5).unwrap();
        let input = AssignmentList::new(vec![0, 1]).unwrap();
        let dist = full_distribution(&bs, &input, &GramMatrix::all_ones(2), Statistics::Boson).unwrap();
        let expected = [([2, 0], 0.5), ([1, 1], 0.0), ([0, 2], 0.5)];
        for ((occ, p), (e_occ, e_p)) in dist.iter().zip(expected) {
            assert_eq!(occ.counts(), &e_occ);
            assert!((p - e_p).abs() < 1e-14);
        }
    }
}
