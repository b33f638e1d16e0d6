//! Dense complex linear algebra used by the probability engine.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Absolute tolerance for unitarity and zero checks.
pub const UNITARY_TOL: f64 = 1e-12;

/// Largest dimension accepted by [`permanent`].
pub const MAX_PERMANENT_DIM: usize = 20;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Real matrix convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        }))
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> Result<f64> {
        let gram = self.adjoint().matmul(self)?;
        let id = Self::identity(self.cols);
        Ok(gram
            .data
            .iter()
            .zip(&id.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square()
            && self
                .unitarity_defect()
                .is_ok_and(|defect| defect <= UNITARY_TOL)
    }

    fn require_square(&self, what: &str) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "{what} requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(self.rows)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Matrix permanent by Ryser's formula, visiting column subsets in Gray-code
/// order so each step updates the row sums by a single column.
pub fn permanent(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.require_square("permanent")?;
    if n == 0 {
        return Err(Error::Dimension("permanent of an empty matrix".into()));
    }
    if n > MAX_PERMANENT_DIM {
        return Err(Error::Resource(format!(
            "permanent dimension {n} exceeds {MAX_PERMANENT_DIM}"
        )));
    }

    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut in_subset = vec![false; n];
    let mut total = Complex64::new(0.0, 0.0);

    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        let sign = if in_subset[col] { -1.0 } else { 1.0 };
        in_subset[col] = !in_subset[col];
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += m[(i, col)] * sign;
        }
        let gray = step ^ (step >> 1);
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }

    if n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// Reference permanent: the plain sum over all permutations. O(n!·n).
pub fn permanent_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.require_square("permanent")?;
    if n == 0 {
        return Err(Error::Dimension("permanent of an empty matrix".into()));
    }
    fn expand(m: &ComplexMatrix, row: usize, used: &mut [bool], acc: Complex64) -> Complex64 {
        if row == used.len() {
            return acc;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for col in 0..used.len() {
            if !used[col] {
                used[col] = true;
                sum += expand(m, row + 1, used, acc * m[(row, col)]);
                used[col] = false;
            }
        }
        sum
    }
    Ok(expand(m, 0, &mut vec![false; n], Complex64::new(1.0, 0.0)))
}

/// Determinant by LU decomposition with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.require_square("determinant")?;
    let mut lu = m.clone();
    let mut det = Complex64::new(1.0, 0.0);

    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&a, &b| lu[(a, k)].norm().total_cmp(&lu[(b, k)].norm()))
            .unwrap_or(k);
        if lu[(pivot, k)].norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if pivot != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let p = lu[(k, k)];
        det *= p;
        for i in k + 1..n {
            let factor = lu[(i, k)] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let delta = factor * lu[(k, j)];
                lu[(i, j)] -= delta;
            }
        }
    }
    Ok(det)
}

/// `m`-mode discrete Fourier multiport, `U[j,k] = exp(2πi·jk/m)/√m`.
pub fn fourier_unitary(m: usize) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::Domain("Fourier multiport needs at least one mode".into()));
    }
    let norm = 1.0 / (m as f64).sqrt();
    Ok(ComplexMatrix::from_fn(m, m, |j, k| {
        // reduce jk mod m first so the phase stays accurate for large m
        let phase = 2.0 * PI * ((j * k) % m) as f64 / m as f64;
        Complex64::from_polar(norm, phase)
    }))
}

/// Two-mode beamsplitter with intensity transmissivity `t`.
pub fn beamsplitter(t: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("transmissivity {t} outside [0, 1]")));
    }
    let (tr, rf) = (t.sqrt(), (1.0 - t).sqrt());
    ComplexMatrix::from_real_rows(&[[tr, rf], [rf, -tr]])
}

/// The `N×N` matrix `result[a,b] = U[inputs[a], outputs[b]]` whose permanent
/// (bosons) or determinant (fermions) is the many-particle amplitude.
pub fn scattering_submatrix(
    u: &ComplexMatrix,
    inputs: &[usize],
    outputs: &[usize],
) -> Result<ComplexMatrix> {
    if inputs.len() != outputs.len() {
        return Err(Error::Dimension(format!(
            "{} input slots but {} output slots",
            inputs.len(),
            outputs.len()
        )));
    }
    if let Some(&bad) = inputs.iter().find(|&&r| r >= u.rows()) {
        return Err(Error::Index(format!(
            "input mode {bad} out of range for {} modes",
            u.rows()
        )));
    }
    if let Some(&bad) = outputs.iter().find(|&&c| c >= u.cols()) {
        return Err(Error::Index(format!(
            "output mode {bad} out of range for {} modes",
            u.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(inputs.len(), outputs.len(), |a, b| {
        u[(inputs[a], outputs[b])]
    }))
}

/// Haar-random unitary: modified Gram-Schmidt on the columns of a complex
/// Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::Domain("random unitary needs at least one mode".into()));
    }
    let mut cols: Vec<Vec<Complex64>> = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();

    for k in 0..m {
        for prev in 0..k {
            let (done, rest) = cols.split_at_mut(k);
            let q = &done[prev];
            let proj: Complex64 = q.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
            for (x, qi) in rest[0].iter_mut().zip(q) {
                *x -= proj * qi;
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::Consistency("degenerate Gaussian sample".into()));
        }
        for x in &mut cols[k] {
            *x /= norm;
        }
    }
    Ok(ComplexMatrix::from_fn(m, m, |i, j| cols[j][i]))
}

/// Eigen-decomposition of a Hermitian matrix. Returns the real eigenvalues
/// and a matrix whose columns are the matching orthonormal eigenvectors.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.require_square("eigen-decomposition")?;
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    let eig = nalgebra::linalg::SymmetricEigen::new(dm);
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, j)]);
    Ok((eig.eigenvalues.iter().copied().collect(), vectors))
}
