//! Density matrices: validation, random ensembles and the named state families.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, hermitize, hs_inner_real, ComplexMatrix, TOL_HERM, TOL_PSD};
use crate::rng::{complex_normal, seeded};

/// Allowed deviation of the trace from one.
pub const TOL_TRACE: f64 = 1e-10;

/// A validated quantum state. The stored matrix is exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix already known to be a state. Only hermitizes.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self { mat: hermitize(&m) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// tr(rho^2).
    pub fn purity(&self) -> f64 {
        hs_inner_real(&self.mat, &self.mat).expect("same matrix")
    }

    /// Linear entropy 1 - tr(rho^2). Values below the rounding noise of the
    /// purity sum are zero, so pure inputs give exactly 0.
    pub fn linear_entropy(&self) -> f64 {
        resolved_linear_entropy(self.purity(), self.dim())
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }

    /// U rho U^dagger.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::from_trusted(self.mat.conjugate_by(u))
    }

    /// Convex combination `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        check_same_dim(self, other)?;
        Ok(Self::from_trusted(&self.mat.scale(p) + &other.mat.scale(1.0 - p)))
    }

    /// rho (x) sigma.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_trusted(crate::linalg::kron(&self.mat, &other.mat))
    }
}

/// 1 - purity, with anything under 16 d eps (rounding noise of tr rho^2) set to 0.
pub(crate) fn resolved_linear_entropy(purity: f64, dim: usize) -> f64 {
    let le = 1.0 - purity;
    if le <= 16.0 * dim as f64 * f64::EPSILON {
        0.0
    } else {
        le
    }
}

pub(crate) fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Checks Hermiticity, unit trace and positivity, in that order.
pub fn validate(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let max_deviation = m.hermitian_deviation();
    if max_deviation > TOL_HERM {
        return Err(Error::NotHermitian { max_deviation });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > TOL_TRACE {
        return Err(Error::TraceNotOne { trace });
    }
    let herm = hermitize(m);
    let min_eigenvalue = eigvalsh(&herm)?[0];
    if min_eigenvalue < -TOL_PSD {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(DensityMatrix { mat: herm })
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng))
}

/// Hilbert-Schmidt random state G G^dagger / tr(G G^dagger).
pub fn random_mixed_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale(1.0 / tr))
}

pub fn random_mixed(dim: usize, seed: u64) -> DensityMatrix {
    random_mixed_with(dim, &mut seeded(seed))
}

/// Uniformly random unit vector.
pub fn random_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn pure_state(psi: &[Complex64]) -> DensityMatrix {
    DensityMatrix::from_trusted(ComplexMatrix::projector(psi))
}

pub fn random_pure_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    pure_state(&random_state_vector(dim, rng))
}

pub fn random_pure(dim: usize, seed: u64) -> DensityMatrix {
    random_pure_with(dim, &mut seeded(seed))
}

/// Haar-random unitary: Gram-Schmidt (QR) of a Ginibre matrix. Gram-Schmidt
/// leaves the diagonal of R real and positive, which fixes the phases.
pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..dim).map(|j| (0..dim).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..dim {
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (x, q) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_with(dim, &mut seeded(seed))
}

/// The pair (1/2 diag(1,1,0,0), 1/2 diag(0,0,1,1)) on two qubits.
pub fn ozawa_pair() -> (DensityMatrix, DensityMatrix) {
    (
        DensityMatrix::from_trusted(ComplexMatrix::from_diagonal(&[0.5, 0.5, 0.0, 0.0])),
        DensityMatrix::from_trusted(ComplexMatrix::from_diagonal(&[0.0, 0.0, 0.5, 0.5])),
    )
}

/// Qutrit triple (I/3, diag(1,0,0), tau) on which the arccos and Bures-type
/// functionals of F_N break the triangle inequality.
pub fn qutrit_triple() -> (DensityMatrix, DensityMatrix, DensityMatrix) {
    let third = 1.0 / 3.0;
    let rho = ComplexMatrix::from_diagonal(&[third, third, third]);
    let sigma = ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0]);
    let tau =
        ComplexMatrix::from_real_rows(&[&[0.90, 0.04, 0.03], &[0.04, 0.05, 0.02], &[0.03, 0.02, 0.05]]).expect("3x3");
    (
        DensityMatrix::from_trusted(rho),
        DensityMatrix::from_trusted(sigma),
        DensityMatrix::from_trusted(tau),
    )
}

/// Two maximally mixed states on complementary `dim`-dimensional halves of a
/// `2 * dim` space.
pub fn disjoint_maximally_mixed(dim: usize) -> (DensityMatrix, DensityMatrix) {
    let w = 1.0 / dim as f64;
    let mut first = vec![w; dim];
    first.extend(std::iter::repeat_n(0.0, dim));
    let second: Vec<f64> = first.iter().rev().copied().collect();
    (
        DensityMatrix::from_trusted(ComplexMatrix::from_diagonal(&first)),
        DensityMatrix::from_trusted(ComplexMatrix::from_diagonal(&second)),
    )
}

/// Which of the two spectrum values sits at a pattern position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    L1,
    L2,
}

/// Isospectral pair U diag[pattern] U^dagger, U diag[P(pattern)] U^dagger,
/// both normalized by the pattern's trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturatingPairSpec {
    pub d: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub pattern: Vec<Level>,
    /// `sigma` has `pattern[permutation[k]]` at diagonal position `k`.
    pub permutation: Vec<usize>,
    /// `None` means U = I.
    pub unitary_seed: Option<u64>,
}

impl SaturatingPairSpec {
    /// Even `d`: first half lambda1, second half lambda2, each position swapped
    /// with its partner in the other half. rank(rho - sigma) = d when lambda1 != lambda2.
    pub fn pair_swap(d: usize, lambda1: f64, lambda2: f64, unitary_seed: Option<u64>) -> Self {
        let half = d / 2;
        let pattern = (0..d).map(|k| if k < half { Level::L1 } else { Level::L2 }).collect();
        let permutation = (0..d)
            .map(|k| match k {
                k if k < half => k + half,
                k if k < 2 * half => k - half,
                k => k,
            })
            .collect();
        Self {
            d,
            lambda1,
            lambda2,
            pattern,
            permutation,
            unitary_seed,
        }
    }

    fn check(&self) -> Result<()> {
        if self.pattern.len() != self.d || self.permutation.len() != self.d {
            return Err(Error::InvalidPattern(format!(
                "pattern/permutation lengths {}/{} for d = {}",
                self.pattern.len(),
                self.permutation.len(),
                self.d
            )));
        }
        let mut seen = vec![false; self.d];
        for &p in &self.permutation {
            if p >= self.d || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPattern("permutation is not a bijection".into()));
            }
        }
        if self.lambda1 < 0.0 || self.lambda2 < 0.0 {
            return Err(Error::InvalidPattern("negative spectrum value".into()));
        }
        Ok(())
    }

    fn value(&self, level: Level) -> f64 {
        match level {
            Level::L1 => self.lambda1,
            Level::L2 => self.lambda2,
        }
    }
}

pub fn saturating_pair(spec: &SaturatingPairSpec) -> Result<(DensityMatrix, DensityMatrix)> {
    spec.check()?;
    let diag: Vec<f64> = spec.pattern.iter().map(|&l| spec.value(l)).collect();
    let total: f64 = diag.iter().sum();
    if total == 0.0 {
        return Err(Error::AllZeroSpectrum);
    }
    let rho_diag: Vec<f64> = diag.iter().map(|x| x / total).collect();
    let sigma_diag: Vec<f64> = spec.permutation.iter().map(|&p| rho_diag[p]).collect();
    let rho = ComplexMatrix::from_diagonal(&rho_diag);
    let sigma = ComplexMatrix::from_diagonal(&sigma_diag);
    Ok(match spec.unitary_seed {
        None => (DensityMatrix::from_trusted(rho), DensityMatrix::from_trusted(sigma)),
        Some(seed) => {
            let u = haar_unitary(spec.d, seed);
            (
                DensityMatrix::from_trusted(rho.conjugate_by(&u)),
                DensityMatrix::from_trusted(sigma.conjugate_by(&u)),
            )
        }
    })
}
