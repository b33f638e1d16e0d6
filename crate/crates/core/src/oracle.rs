//! Brute-force first-quantized simulator.
//!
//! Each particle carries a mode index and an internal-state vector. The
//! input is the explicit (anti)symmetrized tensor product of the
//! single-particle states, the network acts on every mode factor, and
//! event probabilities are read off by summing squared amplitudes. Nothing
//! here shares code with the path-sum engine; it exists to check it.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::engine::{event_probability, EventSpec};
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::model::{AssignmentList, GramMatrix, OccupationVector, Statistics, PSD_TOL};
use crate::{Error, Result};

pub const MAX_ORACLE_PARTICLES: usize = 3;
pub const MAX_ORACLE_MODES: usize = 9;

/// Eigenvalues at or below this are dropped when factorizing a Gram matrix.
const RANK_TOL: f64 = 1e-12;

/// Internal-state vectors whose pairwise inner products reproduce `gram`.
pub fn internal_vectors_from_gram(gram: &GramMatrix) -> Result<Vec<Vec<Complex64>>> {
    let n = gram.dim();
    let (values, vectors) = hermitian_eigen(gram.matrix())?;
    if let Some(&bad) = values.iter().find(|&&v| v < -PSD_TOL) {
        return Err(Error::Domain(format!(
            "Gram matrix has negative eigenvalue {bad:e}"
        )));
    }
    let kept: Vec<usize> = (0..n).filter(|&i| values[i] > RANK_TOL).collect();
    Ok((0..n)
        .map(|k| {
            kept.iter()
                .map(|&i| vectors[(k, i)].conj() * values[i].sqrt())
                .collect()
        })
        .collect())
}

/// Amplitude tensor over `(mode, internal)^N`, slot 0 most significant.
#[derive(Debug, Clone)]
pub struct FirstQuantizedState {
    particles: usize,
    modes: usize,
    internal_dim: usize,
    amplitudes: Vec<Complex64>,
}

impl FirstQuantizedState {
    /// Normalized (anti)symmetrized product of `|input[p]⟩ ⊗ |vectors[p]⟩`.
    pub fn prepare(
        modes: usize,
        input: &[usize],
        vectors: &[Vec<Complex64>],
        statistics: Statistics,
    ) -> Result<Self> {
        let n = input.len();
        if vectors.len() != n {
            return Err(Error::Dimension(format!(
                "{} internal vectors for {n} particles",
                vectors.len()
            )));
        }
        if n == 0 || n > MAX_ORACLE_PARTICLES || modes > MAX_ORACLE_MODES {
            return Err(Error::Resource(format!(
                "oracle limited to 1..={MAX_ORACLE_PARTICLES} particles and {MAX_ORACLE_MODES} modes (got N={n}, m={modes})"
            )));
        }
        let internal_dim = vectors[0].len();
        if vectors.iter().any(|v| v.len() != internal_dim) {
            return Err(Error::Dimension("internal vectors differ in length".into()));
        }
        if let Some(&bad) = input.iter().find(|&&r| r >= modes) {
            return Err(Error::Index(format!("input mode {bad} out of range")));
        }

        let mut state = Self {
            particles: n,
            modes,
            internal_dim,
            amplitudes: vec![Complex64::new(0.0, 0.0); (modes * internal_dim).pow(n as u32)],
        };
        let product: Vec<Complex64> = (0..state.amplitudes.len())
            .map(|idx| {
                state
                    .slots(idx)
                    .iter()
                    .enumerate()
                    .map(|(p, &(mode, internal))| {
                        if mode == input[p] {
                            vectors[p][internal]
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .product()
            })
            .collect();

        for (perm, parity) in heap_permutations(n) {
            let sign = match statistics {
                Statistics::Boson => 1.0,
                Statistics::Fermion => parity,
            };
            for idx in 0..state.amplitudes.len() {
                let slots = state.slots(idx);
                let permuted: Vec<(usize, usize)> = perm.iter().map(|&q| slots[q]).collect();
                let src = state.index(&permuted);
                state.amplitudes[idx] += product[src] * sign;
            }
        }

        let norm = state.norm();
        if norm <= 1e-12 {
            return Err(Error::Spec(
                "(anti)symmetrized input state has zero norm".into(),
            ));
        }
        for a in &mut state.amplitudes {
            *a /= norm;
        }
        Ok(state)
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn internal_dim(&self) -> usize {
        self.internal_dim
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude with particle slots `a` and `b` exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Vec<Complex64> {
        (0..self.amplitudes.len())
            .map(|idx| {
                let mut slots = self.slots(idx);
                slots.swap(a, b);
                self.amplitudes[self.index(&slots)]
            })
            .collect()
    }

    fn base(&self) -> usize {
        self.modes * self.internal_dim
    }

    fn slots(&self, mut idx: usize) -> Vec<(usize, usize)> {
        let base = self.base();
        let mut out = vec![(0, 0); self.particles];
        for p in (0..self.particles).rev() {
            let c = idx % base;
            idx /= base;
            out[p] = (c / self.internal_dim, c % self.internal_dim);
        }
        out
    }

    fn index(&self, slots: &[(usize, usize)]) -> usize {
        let base = self.base();
        slots
            .iter()
            .fold(0, |acc, &(mode, internal)| acc * base + mode * self.internal_dim + internal)
    }

    /// Sends a particle in mode `r` to mode `o` with amplitude `U[r, o]`, on
    /// every slot.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.modes || u.cols() != self.modes {
            return Err(Error::Dimension(format!(
                "unitary is {}x{}, state has {} modes",
                u.rows(),
                u.cols(),
                self.modes
            )));
        }
        let mut current = self.amplitudes.clone();
        for p in 0..self.particles {
            let mut next = vec![Complex64::new(0.0, 0.0); current.len()];
            for (idx, amp) in current.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let mut slots = self.slots(idx);
                let from = slots[p].0;
                for to in 0..self.modes {
                    slots[p].0 = to;
                    next[self.index(&slots)] += amp * u[(from, to)];
                }
            }
            current = next;
        }
        Ok(Self {
            amplitudes: current,
            ..self.clone()
        })
    }

    /// Probability of every occupation pattern with nonzero weight.
    pub fn occupation_probabilities(&self) -> BTreeMap<Vec<usize>, f64> {
        let mut out = BTreeMap::new();
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let mut counts = vec![0usize; self.modes];
            for (mode, _) in self.slots(idx) {
                counts[mode] += 1;
            }
            *out.entry(counts).or_insert(0.0) += amp.norm_sqr();
        }
        out
    }

    pub fn occupation_probability(&self, output: &OccupationVector) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(idx, _)| {
                let mut counts = vec![0usize; self.modes];
                for (mode, _) in self.slots(*idx) {
                    counts[mode] += 1;
                }
                counts == output.counts()
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// All permutations of `0..n` with parity sign, by Heap's algorithm.
fn heap_permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut out = vec![(perm.clone(), sign)];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Probability of `output` from the explicit first-quantized state.
pub fn first_quantized_probability(
    u: &ComplexMatrix,
    input: &AssignmentList,
    vectors: &[Vec<Complex64>],
    output: &OccupationVector,
    statistics: Statistics,
) -> Result<f64> {
    if output.modes() != u.rows() || output.total() != input.len() {
        return Err(Error::Spec(format!(
            "output {output} does not match {} particles in {} modes",
            input.len(),
            u.rows()
        )));
    }
    let state = FirstQuantizedState::prepare(u.rows(), input.modes(), vectors, statistics)?;
    Ok(state.evolve(u)?.occupation_probability(output))
}

/// Largest |engine − oracle| over every output occupation, plus the oracle's
/// total probability.
pub fn engine_deviation(
    u: &ComplexMatrix,
    input: &AssignmentList,
    gram: &GramMatrix,
    statistics: Statistics,
) -> Result<(f64, f64)> {
    let vectors = internal_vectors_from_gram(gram)?;
    let state = FirstQuantizedState::prepare(u.rows(), input.modes(), &vectors, statistics)?
        .evolve(u)?;
    let oracle = state.occupation_probabilities();
    let mut max_dev: f64 = 0.0;
    for output in crate::model::enumerate_occupations(u.rows(), input.len()) {
        let spec = EventSpec::new(
            u.clone(),
            input.clone(),
            output.clone(),
            gram.clone(),
            statistics,
        )?;
        let engine = event_probability(&spec)?;
        let reference = oracle.get(output.counts()).copied().unwrap_or(0.0);
        max_dev = max_dev.max((engine - reference).abs());
    }
    Ok((max_dev, oracle.values().sum()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{beamsplitter, fourier_unitary};
    use crate::model::{gram_from_positions, uniform_gram, SourceConfig};

    fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    fn check_factorization(g: &GramMatrix) {
        let v = internal_vectors_from_gram(g).unwrap();
        for j in 0..g.dim() {
            for k in 0..g.dim() {
                assert!((inner(&v[j], &v[k]) - g.get(j, k)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn factorization_round_trips() {
        check_factorization(&GramMatrix::identity(3));
        check_factorization(&GramMatrix::all_ones(3));
        check_factorization(&uniform_gram(3, 0.5).unwrap());
        let complex = GramMatrix::new(
            ComplexMatrix::from_rows(&[
                [Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.4)],
                [Complex64::new(0.3, -0.4), Complex64::new(1.0, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        check_factorization(&complex);
    }

    #[test]
    fn identical_internal_states_collapse_to_one_dimension() {
        let v = internal_vectors_from_gram(&GramMatrix::all_ones(3)).unwrap();
        assert_eq!(v[0].len(), 1);
        assert!(v.iter().all(|x| (x[0] - v[0][0]).norm() < 1e-12));
    }

    #[test]
    fn heap_enumerates_signed_permutations() {
        let perms = heap_permutations(4);
        assert_eq!(perms.len(), 24);
        let even = perms.iter().filter(|(_, s)| *s > 0.0).count();
        assert_eq!(even, 12);
    }

    #[test]
    fn hom_reference_values() {
        let bs = beamsplitter(0.5).unwrap();
        let input = AssignmentList::new(vec![0, 1]).unwrap();
        let coinc = OccupationVector::new(vec![1, 1]);
        let same = internal_vectors_from_gram(&GramMatrix::all_ones(2)).unwrap();
        let orth = internal_vectors_from_gram(&GramMatrix::identity(2)).unwrap();
        let p = first_quantized_probability(&bs, &input, &same, &coinc, Statistics::Boson).unwrap();
        assert!(p.abs() < 1e-14);
        let p = first_quantized_probability(&bs, &input, &orth, &coinc, Statistics::Boson).unwrap();
        assert!((p - 0.5).abs() < 1e-14);
    }

    #[test]
    fn exchange_symmetry_of_prepared_state() {
        let vectors = internal_vectors_from_gram(&uniform_gram(3, 0.4).unwrap()).unwrap();
        for (stats, sign) in [(Statistics::Boson, 1.0), (Statistics::Fermion, -1.0)] {
            let state = FirstQuantizedState::prepare(4, &[0, 2, 3], &vectors, stats).unwrap();
            assert!((state.norm() - 1.0).abs() < 1e-12);
            let swapped = state.swapped(0, 2);
            for (a, b) in state.amplitudes().iter().zip(&swapped) {
                assert!((a * sign - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn fermions_sharing_mode_and_state_are_rejected() {
        let vectors = internal_vectors_from_gram(&GramMatrix::all_ones(2)).unwrap();
        let err = FirstQuantizedState::prepare(3, &[1, 1], &vectors, Statistics::Fermion);
        assert!(matches!(err, Err(Error::Spec(_))));
    }

    #[test]
    fn fourier_fermions_agree_with_engine() {
        let u = fourier_unitary(9).unwrap();
        let input = AssignmentList::new(vec![2, 5, 8]).unwrap();
        let gram =
            gram_from_positions(&SourceConfig::evenly_delayed(3, 1.0, 1.0).unwrap()).unwrap();
        let (dev, total) = engine_deviation(&u, &input, &gram, Statistics::Fermion).unwrap();
        assert!(dev <= 1e-9, "deviation {dev:e}");
        assert!((total - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn budget_is_enforced() {
        let vectors = internal_vectors_from_gram(&GramMatrix::identity(4)).unwrap();
        assert!(matches!(
            FirstQuantizedState::prepare(5, &[0, 1, 2, 3], &vectors, Statistics::Boson),
            Err(Error::Resource(_))
        ));
    }
}
