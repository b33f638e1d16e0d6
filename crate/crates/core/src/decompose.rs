//! Interference-order decomposition of event probabilities.
//!
//! Under a uniform pairwise overlap `α` every term of the path double sum
//! picks up one factor `α` per particle moved by the relative permutation
//! `π = σ⁻¹∘ρ`, so an event probability is the polynomial
//! `P(α) = Σ_d α^d C_d` with `d ∈ {0, 2, 3, …, N}`. `C_0` is the
//! distinguishable-particle probability and `Σ_d C_d` the fully
//! indistinguishable one. No permutation moves exactly one point, hence
//! there is never a linear term.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::{accumulate_by_order, check_event, finish_probability, CONSISTENCY_TOL};
use crate::engine::MAX_GENERAL_PARTICLES;
use crate::linalg::{scattering_submatrix, ComplexMatrix};
use crate::model::{occupation_to_assignment, AssignmentList, OccupationVector, Statistics};
use crate::permutations::PermutationTable;
use crate::{Error, Result};

/// Coefficients `C_d` of the transition polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    particles: usize,
    coefficients: BTreeMap<usize, f64>,
    /// `Σ_d C_d`, the value at full overlap.
    pub total_check: f64,
}

impl DecompositionResult {
    fn from_coefficients(particles: usize, coefficients: BTreeMap<usize, f64>) -> Self {
        let total_check = coefficients.values().sum();
        Self {
            particles,
            coefficients,
            total_check,
        }
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, f64> {
        &self.coefficients
    }

    /// `C_d`; zero for orders that do not occur.
    pub fn coefficient(&self, d: usize) -> f64 {
        self.coefficients.get(&d).copied().unwrap_or(0.0)
    }

    /// Polynomial value without range checks or clamping.
    pub fn evaluate(&self, alpha: f64) -> f64 {
        self.coefficients
            .iter()
            .map(|(&d, &c)| c * alpha.powi(d as i32))
            .sum()
    }

    /// `dP/dα`
    pub fn derivative(&self, alpha: f64) -> f64 {
        self.coefficients
            .iter()
            .filter(|(&d, _)| d > 0)
            .map(|(&d, &c)| d as f64 * c * alpha.powi(d as i32 - 1))
            .sum()
    }

    /// Locations in `(0, 1)` where the derivative changes sign, located on
    /// a uniform grid of `resolution` intervals. Derivative magnitudes below
    /// `floor` are ignored.
    pub fn interior_extrema(&self, resolution: usize, floor: f64) -> Vec<f64> {
        let mut extrema = Vec::new();
        let mut last_sign = 0.0;
        for i in 1..resolution {
            let alpha = i as f64 / resolution as f64;
            let slope = self.derivative(alpha);
            if slope.abs() <= floor {
                continue;
            }
            let sign = slope.signum();
            if last_sign != 0.0 && sign != last_sign {
                extrema.push(alpha);
            }
            last_sign = sign;
        }
        extrema
    }

    pub fn is_monotonic(&self) -> bool {
        self.interior_extrema(10_000, 1e-12).is_empty()
    }
}

fn orders(particles: usize) -> impl Iterator<Item = usize> {
    std::iter::once(0).chain(2..=particles)
}

/// Groups every path-pair term by the number of particles `d` the relative
/// permutation moves and returns the real coefficients `C_d`.
///
/// All particles must start in distinct modes; otherwise the input norm
/// itself depends on the overlap and the probability is not a polynomial.
pub fn interference_orders(
    u: &ComplexMatrix,
    input: &AssignmentList,
    output: &OccupationVector,
    statistics: Statistics,
) -> Result<DecompositionResult> {
    check_event(u, input, output)?;
    let n = input.len();
    if n > MAX_GENERAL_PARTICLES {
        return Err(Error::Resource(format!(
            "{n} particles exceed the decomposition limit of {MAX_GENERAL_PARTICLES}"
        )));
    }
    if !input.has_distinct_modes() {
        return Err(Error::Spec(
            "interference orders require particles in distinct input modes".into(),
        ));
    }
    let out = occupation_to_assignment(output);
    let sub = scattering_submatrix(u, input.modes(), out.modes())?;
    let perms = PermutationTable::new(n)?;
    let buckets = accumulate_by_order(&sub, |_, _| Complex64::new(1.0, 0.0), statistics, &perms);
    let norm = output.factorial_product();

    let mut coefficients = BTreeMap::new();
    for d in orders(n) {
        let c = buckets[d] / norm;
        if c.im.abs() > CONSISTENCY_TOL {
            return Err(Error::Consistency(format!(
                "order {d} coefficient has imaginary part {:e}",
                c.im
            )));
        }
        coefficients.insert(d, c.re + 0.0);
    }
    if buckets[1].norm() != 0.0 {
        return Err(Error::Consistency("nonzero single-particle exchange bucket".into()));
    }
    Ok(DecompositionResult::from_coefficients(n, coefficients))
}

/// `Σ_d α^d C_d`, clamped into `[0, 1]` like engine results.
pub fn transition_polynomial(result: &DecompositionResult, alpha: f64) -> Result<f64> {
    check_unit("overlap", alpha)?;
    finish_probability(Complex64::new(result.evaluate(alpha), 0.0))
}

/// Affine blend `(1 − α)·P_classical + α·P_quantum`.
pub fn naive_interpolation(p_classical: f64, p_quantum: f64, alpha: f64) -> Result<f64> {
    check_unit("classical probability", p_classical)?;
    check_unit("quantum probability", p_quantum)?;
    check_unit("overlap", alpha)?;
    Ok((1.0 - alpha) * p_classical + alpha * p_quantum)
}

/// Least-squares recovery of `C_d` from sampled `(α, P(α))` pairs, with the
/// linear term held at zero.
pub fn fit_orders(samples: &[(f64, f64)], particles: usize) -> Result<DecompositionResult> {
    if particles == 0 {
        return Err(Error::Fit("particle count must be positive".into()));
    }
    let powers: Vec<usize> = orders(particles).collect();
    for &(alpha, p) in samples {
        check_unit("overlap", alpha)?;
        if !p.is_finite() {
            return Err(Error::Fit(format!("non-finite sample at α={alpha}")));
        }
    }
    let mut distinct: Vec<f64> = samples.iter().map(|s| s.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < powers.len() {
        return Err(Error::Fit(format!(
            "{} distinct overlaps cannot determine {} coefficients",
            distinct.len(),
            powers.len()
        )));
    }

    let design = DMatrix::from_fn(samples.len(), powers.len(), |i, j| {
        samples[i].0.powi(powers[j] as i32)
    });
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let svd = design.svd(true, true);
    let max_sv = svd.singular_values.max();
    let min_sv = svd.singular_values.min();
    if !(min_sv > max_sv * 1e-13) {
        return Err(Error::Fit("sample design matrix is rank deficient".into()));
    }
    let solution = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::Fit(e.to_string()))?;

    let coefficients = powers
        .iter()
        .zip(solution.iter())
        .map(|(&d, &c)| (d, c))
        .collect();
    Ok(DecompositionResult::from_coefficients(particles, coefficients))
}

fn check_unit(what: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Domain(format!("{what} {value} outside [0, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{classical_probability, event_probability, quantum_probability, EventSpec};
    use crate::linalg::{beamsplitter, fourier_unitary};
    use crate::model::uniform_gram;

    fn hom_orders(out: [usize; 2], stats: Statistics) -> DecompositionResult {
        interference_orders(
            &beamsplitter(0.5).unwrap(),
            &AssignmentList::new(vec![0, 1]).unwrap(),
            &OccupationVector::new(out.to_vec()),
            stats,
        )
        .unwrap()
    }

    #[test]
    fn hom_coefficients() {
        let c = hom_orders([1, 1], Statistics::Boson);
        assert_eq!(c.coefficients().keys().copied().collect::<Vec<_>>(), vec![0, 2]);
        assert!((c.coefficient(0) - 0.5).abs() < 1e-15);
        assert!((c.coefficient(2) + 0.5).abs() < 1e-15);

        let c = hom_orders([2, 0], Statistics::Boson);
        assert!((c.coefficient(0) - 0.25).abs() < 1e-15);
        assert!((c.coefficient(2) - 0.25).abs() < 1e-15);

        let c = hom_orders([1, 1], Statistics::Fermion);
        assert!((c.coefficient(0) - 0.5).abs() < 1e-15);
        assert!((c.coefficient(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_particle_has_only_classical_order() {
        let u = fourier_unitary(5).unwrap();
        let c = interference_orders(
            &u,
            &AssignmentList::new(vec![3]).unwrap(),
            &OccupationVector::new(vec![0, 1, 0, 0, 0]),
            Statistics::Boson,
        )
        .unwrap();
        assert_eq!(c.coefficients().len(), 1);
        assert!((c.coefficient(0) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn polynomial_endpoints_and_midpoint() {
        let c = hom_orders([1, 1], Statistics::Boson);
        assert!((transition_polynomial(&c, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(transition_polynomial(&c, 1.0).unwrap().abs() < 1e-15);
        assert!((transition_polynomial(&c, 0.5).unwrap() - 0.375).abs() < 1e-15);
        assert!(matches!(transition_polynomial(&c, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn buckets_match_limits_and_engine() {
        let u = fourier_unitary(9).unwrap();
        let input = AssignmentList::new(vec![2, 5, 8]).unwrap();
        let out = OccupationVector::new(vec![1, 0, 1, 0, 0, 0, 1, 0, 0]);
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let c = interference_orders(&u, &input, &out, stats).unwrap();
            let classical = classical_probability(&u, &input, &out).unwrap();
            let quantum = quantum_probability(&u, &input, &out, stats).unwrap();
            assert!((c.coefficient(0) - classical).abs() < 1e-12);
            assert!((c.total_check - quantum).abs() < 1e-12);
            for alpha in [0.1, 0.45, 0.8] {
                let spec = EventSpec::new(
                    u.clone(),
                    input.clone(),
                    out.clone(),
                    uniform_gram(3, alpha).unwrap(),
                    stats,
                )
                .unwrap();
                let p = event_probability(&spec).unwrap();
                assert!((transition_polynomial(&c, alpha).unwrap() - p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn naive_blend_endpoints() {
        assert_eq!(naive_interpolation(0.2, 0.7, 0.0).unwrap(), 0.2);
        assert_eq!(naive_interpolation(0.2, 0.7, 1.0).unwrap(), 0.7);
        assert!(naive_interpolation(0.2, 1.7, 0.5).is_err());
        assert!(naive_interpolation(0.2, 0.7, -0.1).is_err());
    }

    #[test]
    fn fit_recovers_hom_curve() {
        let samples: Vec<(f64, f64)> = (0..11)
            .map(|i| {
                let a = i as f64 / 10.0;
                (a, (1.0 - a * a) / 2.0)
            })
            .collect();
        let fit = fit_orders(&samples, 2).unwrap();
        assert!((fit.coefficient(0) - 0.5).abs() < 1e-12);
        assert!((fit.coefficient(2) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn fit_of_constant_is_pure_classical() {
        let samples: Vec<(f64, f64)> = (0..6).map(|i| (i as f64 / 5.0, 0.3)).collect();
        let fit = fit_orders(&samples, 3).unwrap();
        assert!((fit.coefficient(0) - 0.3).abs() < 1e-12);
        assert!(fit.coefficient(2).abs() < 1e-12 && fit.coefficient(3).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_too_few_distinct_samples() {
        let samples = [(0.5, 0.1), (0.5, 0.1), (0.2, 0.3)];
        assert!(matches!(fit_orders(&samples, 3), Err(Error::Fit(_))));
    }

    #[test]
    fn fit_matches_three_particle_decomposition() {
        let u = fourier_unitary(9).unwrap();
        let input = AssignmentList::new(vec![2, 5, 8]).unwrap();
        let out = OccupationVector::new(vec![1, 1, 0, 0, 0, 0, 0, 0, 1]);
        let exact = interference_orders(&u, &input, &out, Statistics::Fermion).unwrap();
        let samples: Vec<(f64, f64)> = (0..21)
            .map(|i| {
                let a = i as f64 / 20.0;
                let spec = EventSpec::new(
                    u.clone(),
                    input.clone(),
                    out.clone(),
                    uniform_gram(3, a).unwrap(),
                    Statistics::Fermion,
                )
                .unwrap();
                (a, event_probability(&spec).unwrap())
            })
            .collect();
        let fit = fit_orders(&samples, 3).unwrap();
        for d in [0, 2, 3] {
            assert!((fit.coefficient(d) - exact.coefficient(d)).abs() < 1e-8, "d={d}");
        }
    }

    #[test]
    fn repeated_inputs_are_rejected() {
        let err = interference_orders(
            &beamsplitter(0.5).unwrap(),
            &AssignmentList::new(vec![0, 0]).unwrap(),
            &OccupationVector::new(vec![1, 1]),
            Statistics::Boson,
        );
        assert!(matches!(err, Err(Error::Spec(_))));
    }
}
