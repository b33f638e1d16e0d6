//! Particle configurations and internal-state overlap structure.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::{Error, Result};

/// Tolerance for the Hermitian and unit-diagonal checks on a Gram matrix.
pub const GRAM_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated before a Gram matrix is rejected.
pub const PSD_TOL: f64 = 1e-10;

/// Exchange statistics of the particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// Exchange sign of a permutation with the given parity sign.
    #[inline]
    pub fn exchange_sign(self, parity: i8) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => parity as f64,
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        })
    }
}

/// Number of particles in each mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector {
    counts: Vec<usize>,
}

impl OccupationVector {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Mode count `m`.
    pub fn modes(&self) -> usize {
        self.counts.len()
    }

    /// Particle count `N`.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `∏_j s_j!`
    pub fn factorial_product(&self) -> f64 {
        self.counts.iter().map(|&s| factorial(s)).product()
    }

    pub fn max_occupation(&self) -> usize {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn is_single_occupancy(&self) -> bool {
        self.max_occupation() <= 1
    }

    /// Comma-free label, e.g. `1.1.1.0.0.0.0.0.0`.
    pub fn label(&self) -> String {
        self.counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses `1,1,0` or `1.1.0`.
    pub fn parse(text: &str) -> Result<Self> {
        let counts = text
            .split([',', '.'])
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Usage(format!("bad occupation entry '{t}' in '{text}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(counts))
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Mode index of each particle slot. Inputs may come in any order (slot `k`
/// is the particle whose internal state is row `k` of the Gram matrix);
/// lists produced from an occupation vector are in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssignmentList {
    modes: Vec<usize>,
}

impl AssignmentList {
    pub fn new(modes: Vec<usize>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Spec("assignment needs at least one particle".into()));
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.modes.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn has_distinct_modes(&self) -> bool {
        let mut sorted = self.modes.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Occupation vector over `m` modes.
    pub fn to_occupation(&self, m: usize) -> Result<OccupationVector> {
        let mut counts = vec![0; m];
        for &mode in &self.modes {
            *counts.get_mut(mode).ok_or_else(|| {
                Error::Index(format!("mode {mode} out of range for {m} modes"))
            })? += 1;
        }
        Ok(OccupationVector::new(counts))
    }

    /// Applies a slot relabeling: slot `k` of the result is slot `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.len())?;
        Ok(Self {
            modes: perm.iter().map(|&p| self.modes[p]).collect(),
        })
    }
}

/// Expands `s` into the ascending list where mode `j` appears `s_j` times.
pub fn occupation_to_assignment(s: &OccupationVector) -> AssignmentList {
    let modes = s
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(mode, &count)| std::iter::repeat_n(mode, count))
        .collect();
    AssignmentList { modes }
}

/// Inverse of [`occupation_to_assignment`] on canonical lists.
pub fn assignment_to_occupation(a: &AssignmentList, m: usize) -> Result<OccupationVector> {
    a.to_occupation(m)
}

/// Every occupation vector of `n` particles in `m` modes, ordered by the
/// lexicographic order of their ascending assignment lists.
pub fn enumerate_occupations(m: usize, n: usize) -> Vec<OccupationVector> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut modes = vec![0usize; n];
    loop {
        let mut counts = vec![0; m];
        for &k in &modes {
            counts[k] += 1;
        }
        out.push(OccupationVector::new(counts));

        // next non-decreasing sequence
        let Some(pos) = (0..n).rev().find(|&i| modes[i] + 1 < m) else {
            break;
        };
        let next = modes[pos] + 1;
        for slot in &mut modes[pos..] {
            *slot = next;
        }
    }
    out
}

/// Hermitian, positive semidefinite, unit-diagonal matrix of internal-state
/// overlaps `S[j,k] = ⟨φ_j|φ_k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    overlaps: ComplexMatrix,
}

impl GramMatrix {
    /// Validates Hermiticity, unit diagonal and positive semidefiniteness.
    pub fn new(overlaps: ComplexMatrix) -> Result<Self> {
        if !overlaps.is_square() {
            return Err(Error::Dimension(format!(
                "Gram matrix must be square, got {}x{}",
                overlaps.rows(),
                overlaps.cols()
            )));
        }
        let n = overlaps.rows();
        for j in 0..n {
            if (overlaps[(j, j)] - Complex64::new(1.0, 0.0)).norm() > GRAM_TOL {
                return Err(Error::Domain(format!(
                    "Gram diagonal entry {j} is {}, expected 1",
                    overlaps[(j, j)]
                )));
            }
            for k in j + 1..n {
                if (overlaps[(j, k)] - overlaps[(k, j)].conj()).norm() > GRAM_TOL {
                    return Err(Error::Domain(format!("Gram matrix not Hermitian at ({j},{k})")));
                }
            }
        }
        let gram = Self { overlaps };
        let min = gram.min_eigenvalue()?;
        if min < -PSD_TOL {
            return Err(Error::Domain(format!(
                "Gram matrix not positive semidefinite (eigenvalue {min:e})"
            )));
        }
        Ok(gram)
    }

    /// Fully indistinguishable particles.
    pub fn all_ones(n: usize) -> Self {
        Self {
            overlaps: ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(1.0, 0.0)),
        }
    }

    /// Fully distinguishable particles.
    pub fn identity(n: usize) -> Self {
        Self {
            overlaps: ComplexMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.overlaps.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.overlaps
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.overlaps[(j, k)]
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = hermitian_eigen(&self.overlaps)?;
        Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn is_all_ones(&self, tol: f64) -> bool {
        self.overlaps
            .entries()
            .iter()
            .all(|z| (z - Complex64::new(1.0, 0.0)).norm() <= tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|k| j == k || self.overlaps[(j, k)].norm() <= tol))
    }

    /// Gram matrix of the relabeled particles: `S'[a,b] = S[perm[a], perm[b]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.dim())?;
        let n = self.dim();
        Ok(Self {
            overlaps: ComplexMatrix::from_fn(n, n, |a, b| self.overlaps[(perm[a], perm[b])]),
        })
    }
}

/// Particle displacements plus the wavepacket coherence length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    positions: Vec<f64>,
    coherence_length: f64,
}

impl SourceConfig {
    pub fn new(positions: Vec<f64>, coherence_length: f64) -> Result<Self> {
        if !(coherence_length > 0.0 && coherence_length.is_finite()) {
            return Err(Error::Domain(format!(
                "coherence length must be positive, got {coherence_length}"
            )));
        }
        if positions.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("particle positions must be finite".into()));
        }
        Ok(Self {
            positions,
            coherence_length,
        })
    }

    /// Particles at `0, x, 2x, …`.
    pub fn evenly_delayed(n: usize, x: f64, coherence_length: f64) -> Result<Self> {
        Self::new((0..n).map(|k| k as f64 * x).collect(), coherence_length)
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn coherence_length(&self) -> f64 {
        self.coherence_length
    }
}

/// Gaussian overlap `exp(−(x_j − x_k)² / (2 l_c²))` between displaced
/// wavepackets.
pub fn gram_from_positions(cfg: &SourceConfig) -> Result<GramMatrix> {
    let lc = cfg.coherence_length;
    if !(lc > 0.0) {
        return Err(Error::Domain(format!("coherence length must be positive, got {lc}")));
    }
    let x = &cfg.positions;
    let n = x.len();
    let overlaps = ComplexMatrix::from_fn(n, n, |j, k| {
        let d = (x[j] - x[k]) / lc;
        Complex64::new((-0.5 * d * d).exp(), 0.0)
    });
    GramMatrix::new(overlaps)
}

/// Unit diagonal with every off-diagonal overlap equal to `alpha`.
pub fn uniform_gram(n: usize, alpha: f64) -> Result<GramMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("overlap {alpha} outside [0, 1]")));
    }
    Ok(GramMatrix {
        overlaps: ComplexMatrix::from_fn(n, n, |j, k| {
            Complex64::new(if j == k { 1.0 } else { alpha }, 0.0)
        }),
    })
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::Dimension(format!(
            "relabeling has {} entries for {n} particles",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Index(format!("{perm:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupation_expansion() {
        let cases: [(&[usize], &[usize]); 3] = [
            (&[2, 0, 1], &[0, 0, 2]),
            (&[1, 1, 1], &[0, 1, 2]),
            (&[0, 3], &[1, 1, 1]),
        ];
        for (occ, modes) in cases {
            let s = OccupationVector::new(occ.to_vec());
            let a = occupation_to_assignment(&s);
            assert_eq!(a.modes(), modes);
            assert!(a.is_canonical());
            assert_eq!(assignment_to_occupation(&a, occ.len()).unwrap(), s);
        }
    }

    #[test]
    fn out_of_range_assignment() {
        let a = AssignmentList::new(vec![0, 4]).unwrap();
        assert!(matches!(a.to_occupation(3), Err(Error::Index(_))));
    }

    #[test]
    fn labels_and_parsing() {
        let s = OccupationVector::new(vec![1, 1, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(s.label(), "1.1.1.0.0.0.0.0.0");
        assert_eq!(s.to_string(), "(1,1,1,0,0,0,0,0,0)");
        assert_eq!(OccupationVector::parse(&s.label()).unwrap(), s);
        assert_eq!(OccupationVector::parse("1,1,1,0,0,0,0,0,0").unwrap(), s);
        assert!(OccupationVector::parse("1,x").is_err());
    }

    #[test]
    fn enumeration_counts() {
        // C(m + n - 1, n)
        assert_eq!(enumerate_occupations(9, 3).len(), 165);
        assert_eq!(enumerate_occupations(2, 2).len(), 3);
        assert_eq!(enumerate_occupations(12, 5).len(), 4368);
        let single = enumerate_occupations(9, 3)
            .into_iter()
            .filter(OccupationVector::is_single_occupancy)
            .count();
        assert_eq!(single, 84);
        assert!(enumerate_occupations(4, 3).iter().all(|s| s.total() == 3));
    }

    #[test]
    fn gaussian_gram_values() {
        let same = gram_from_positions(&SourceConfig::new(vec![0.3; 3], 1.0).unwrap()).unwrap();
        assert!(same.is_all_ones(1e-15));

        let one = gram_from_positions(&SourceConfig::new(vec![0.0, 2.0], 2.0).unwrap()).unwrap();
        assert!((one.get(0, 1).re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((one.get(0, 1).re - 0.60653).abs() < 1e-5);

        let far =
            gram_from_positions(&SourceConfig::evenly_delayed(3, 20.0, 1.0).unwrap()).unwrap();
        assert!(far.is_identity((-200.0f64).exp()));

        assert!(matches!(SourceConfig::new(vec![0.0], 0.0), Err(Error::Domain(_))));
        assert!(matches!(SourceConfig::new(vec![0.0], -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn uniform_gram_spectrum() {
        assert!(uniform_gram(4, 0.0).unwrap().is_identity(0.0));
        assert!(uniform_gram(4, 1.0).unwrap().is_all_ones(0.0));
        let g = uniform_gram(3, 0.5).unwrap();
        assert!((g.min_eigenvalue().unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(uniform_gram(3, 1.2), Err(Error::Domain(_))));
        assert!(matches!(uniform_gram(3, -0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn gram_validation_rejects_bad_input() {
        let not_unit = ComplexMatrix::from_real_rows(&[[2.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(GramMatrix::new(not_unit), Err(Error::Domain(_))));

        let not_herm = ComplexMatrix::from_real_rows(&[[1.0, 0.5], [0.2, 1.0]]).unwrap();
        assert!(matches!(GramMatrix::new(not_herm), Err(Error::Domain(_))));

        let not_psd = ComplexMatrix::from_real_rows(&[
            [1.0, 0.9, -0.9],
            [0.9, 1.0, 0.9],
            [-0.9, 0.9, 1.0],
        ])
        .unwrap();
        assert!(matches!(GramMatrix::new(not_psd), Err(Error::Domain(_))));
    }

    #[test]
    fn relabeling_checks_permutation() {
        let g = uniform_gram(3, 0.2).unwrap();
        assert!(g.permuted(&[2, 0, 1]).is_ok());
        assert!(g.permuted(&[0, 0, 1]).is_err());
        let a = AssignmentList::new(vec![4, 5, 6]).unwrap();
        assert_eq!(a.permuted(&[2, 0, 1]).unwrap().modes(), &[6, 4, 5]);
    }
}
