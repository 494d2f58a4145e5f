//! Dense complex linear algebra used by every measure.
//!
//! Matrices are square, row-major and dense. Every matrix function (square
//! root, absolute value, powers) goes through one Hermitian eigendecomposition.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Max-entry tolerance for Hermiticity gates.
pub const TOL_HERM: f64 = 1e-10;
/// Eigenvalues in `[-TOL_PSD, 0)` count as rounding noise and are clamped to zero.
pub const TOL_PSD: f64 = 1e-10;
/// Relative rank threshold, scaled by the largest |eigenvalue|.
pub const RANK_TOL_REL: f64 = 1e-8;

/// Reconstruction tolerance, grows linearly with the dimension.
pub fn tol_recon(dim: usize) -> f64 {
    1e-9 * dim as f64
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square matrix of complex scalars in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from real rows (imaginary parts zero).
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Shape(format!(
                    "row of length {} in a {dim}-row matrix",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(dim, data)
    }

    /// Outer product |v><v|.
    pub fn projector(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// Largest entry of |m - m^dagger|.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// U m U^dagger.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

/// Eigenvalues in nondecreasing order with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    /// V diag(f(lambda)) V^dagger.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (k, &w) in weights.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    /// Column `k` of the eigenvector matrix.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvalues.len()).map(|i| self.eigenvectors[(i, k)]).collect()
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let max_deviation = m.hermitian_deviation();
    if max_deviation > TOL_HERM {
        return Err(Error::NotHermitian { max_deviation });
    }
    Ok(())
}

fn max_iterations(dim: usize) -> usize {
    1000 + 100 * dim
}

/// (m + m^dagger) / 2.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = z;
            out[(j, i)] = z.conj();
        }
    }
    out
}

/// Full Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenSystem> {
    check_hermitian(m)?;
    let n = m.dim();
    let eig = SymmetricEigen::try_new(m.to_nalgebra(), f64::EPSILON, max_iterations(n))
        .ok_or(Error::ConvergenceFailure { dim: n })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending. Cheaper than [`eigh`] since no vectors are accumulated.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut vals: Vec<f64> = m.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure { dim: m.dim() });
    }
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Principal square root of a PSD matrix: V diag(sqrt(max(lambda, 0))) V^dagger.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let min_eigenvalue = eig.eigenvalues[0];
    if min_eigenvalue < -TOL_PSD {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}

/// tr(a^dagger b).
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.conj() * y).sum())
}

/// Real part of tr(a^dagger b) for Hermitian arguments.
pub fn hs_inner_real(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum())
}

/// Sum of singular values. Hermitian input takes the sum of |eigenvalues|;
/// anything else goes through the eigenvalues of m^dagger m.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.hermitian_deviation() <= TOL_HERM {
        return Ok(eigvalsh(m)?.iter().map(|l| l.abs()).sum());
    }
    let gram = hermitize(&m.adjoint().matmul(m));
    Ok(eigvalsh(&gram)?.iter().map(|l| l.max(0.0).sqrt()).sum())
}

/// Frobenius norm.
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |i, j| a[(i / db, j / db)] * b[(i % db, j % db)])
}

/// Which factor of a bipartite system is traced out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traced {
    First,
    Second,
}

/// Reduced matrix after tracing out one factor of a `d1 x d2` system.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), traced: Traced) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    if d1 * d2 != m.dim() {
        return Err(Error::DimMismatch {
            left: d1 * d2,
            right: m.dim(),
        });
    }
    Ok(match traced {
        Traced::First => ComplexMatrix::from_fn(d2, |i, j| (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()),
        Traced::Second => ComplexMatrix::from_fn(d1, |i, j| (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()),
    })
}

/// Number of eigenvalues with |lambda| > `rank_tol`.
pub fn rank_of(m: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    Ok(eigvalsh(m)?.iter().filter(|l| l.abs() > rank_tol).count())
}

/// Rank with the default relative threshold `RANK_TOL_REL * max|lambda|`.
pub fn rank_default(m: &ComplexMatrix) -> Result<usize> {
    let vals = eigvalsh(m)?;
    Ok(rank_from_spectrum(&vals))
}

pub(crate) fn rank_from_spectrum(vals: &[f64]) -> usize {
    let largest = vals.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    if largest == 0.0 {
        return 0;
    }
    let tol = RANK_TOL_REL * largest;
    vals.iter().filter(|l| l.abs() > tol).count()
}

/// Rounding-noise floor for the spectrum of a computed Hermitian matrix.
pub(crate) fn noise_floor(vals: &[f64]) -> f64 {
    let largest = vals.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    16.0 * vals.len() as f64 * f64::EPSILON * largest
}
