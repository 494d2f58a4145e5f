//! Expansion of states in an orthonormal Hermitian basis, tr(v_i v_j) = delta_ij.
//!
//! With the normalized generalized Gell-Mann basis (plus I/sqrt(d)) the purity
//! is the squared length of the coefficient vector, so F_N becomes
//! `r.s + sqrt(1 - |r|^2) sqrt(1 - |s|^2)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hs_inner_real, ComplexMatrix};
use crate::states::{resolved_linear_entropy, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisId {
    #[serde(rename = "gellmann")]
    GellMann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochExpansion {
    pub coeffs: Vec<f64>,
    pub basis_id: BasisId,
}

impl BlochExpansion {
    pub fn dim(&self) -> usize {
        (self.coeffs.len() as f64).sqrt().round() as usize
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coeffs)
    }
}

/// Normalized generalized Gell-Mann basis. Element 0 is I/sqrt(d), then the
/// symmetric and antisymmetric off-diagonal pairs for each j < k, then the
/// d - 1 traceless diagonal elements.
pub fn gell_mann_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(d * d);
    basis.push(ComplexMatrix::identity(d).scale(1.0 / (d as f64).sqrt()));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = ComplexMatrix::zeros(d);
            sym[(j, k)] = Complex64::new(s, 0.0);
            sym[(k, j)] = Complex64::new(s, 0.0);
            basis.push(sym);
            let mut anti = ComplexMatrix::zeros(d);
            anti[(j, k)] = Complex64::new(0.0, -s);
            anti[(k, j)] = Complex64::new(0.0, s);
            basis.push(anti);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for x in diag.iter_mut().take(l) {
            *x = norm;
        }
        diag[l] = -(l as f64) * norm;
        basis.push(ComplexMatrix::from_diagonal(&diag));
    }
    basis
}

pub fn basis(id: BasisId, d: usize) -> Vec<ComplexMatrix> {
    match id {
        BasisId::GellMann => gell_mann_basis(d),
    }
}

pub fn to_bloch(rho: &DensityMatrix, basis_id: BasisId) -> BlochExpansion {
    let coeffs = basis(basis_id, rho.dim())
        .iter()
        .map(|v| hs_inner_real(v, rho.matrix()).expect("same dimension"))
        .collect();
    BlochExpansion { coeffs, basis_id }
}

/// Rebuilds the matrix sum_k r_k v_k. The result is validated as a state.
pub fn from_bloch(b: &BlochExpansion) -> Result<DensityMatrix> {
    let d = b.dim();
    if d * d != b.coeffs.len() {
        return Err(Error::DimMismatch {
            left: d * d,
            right: b.coeffs.len(),
        });
    }
    let mut m = ComplexMatrix::zeros(d);
    for (v, &r) in basis(b.basis_id, d).iter().zip(&b.coeffs) {
        m = &m + &v.scale(r);
    }
    crate::states::validate(&m)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// F_N evaluated on coefficient vectors.
pub fn fidelity_n_coeffs(r: &[f64], s: &[f64]) -> Result<f64> {
    if r.len() != s.len() {
        return Err(Error::DimMismatch {
            left: r.len(),
            right: s.len(),
        });
    }
    let d = (r.len() as f64).sqrt().round() as usize;
    let lr = resolved_linear_entropy(dot(r, r), d);
    let ls = resolved_linear_entropy(dot(s, s), d);
    Ok(dot(r, s) + lr.sqrt() * ls.sqrt())
}

/// The straight-line mixing path F(x) = f_N(r + x u, s + x v) between two
/// pairs of states, r = r1, u = r2 - r1, s = s1, v = s2 - s1.
#[derive(Debug, Clone)]
pub struct MixingPath {
    r: Vec<f64>,
    u: Vec<f64>,
    s: Vec<f64>,
    v: Vec<f64>,
}

impl MixingPath {
    pub fn new(rho1: &DensityMatrix, rho2: &DensityMatrix, sigma1: &DensityMatrix, sigma2: &DensityMatrix) -> Self {
        let coeffs = |m: &DensityMatrix| to_bloch(m, BasisId::GellMann).coeffs;
        let (r1, r2, s1, s2) = (coeffs(rho1), coeffs(rho2), coeffs(sigma1), coeffs(sigma2));
        let u = r2.iter().zip(&r1).map(|(a, b)| a - b).collect();
        let v = s2.iter().zip(&s1).map(|(a, b)| a - b).collect();
        Self { r: r1, u, s: s1, v }
    }

    fn point(&self, x: f64) -> (Vec<f64>, Vec<f64>) {
        let a = self.r.iter().zip(&self.u).map(|(r, u)| r + x * u).collect();
        let b = self.s.iter().zip(&self.v).map(|(s, v)| s + x * v).collect();
        (a, b)
    }

    pub fn value(&self, x: f64) -> f64 {
        let (a, b) = self.point(x);
        fidelity_n_coeffs(&a, &b).expect("equal lengths")
    }

    /// Closed-form d^2F/dx^2, split into the two nonpositive parts
    /// `-(|sqrt(g/f) u - sqrt(f/g) v|^2)` and
    /// `-(g/f a.u - f/g b.v)^2 / (f g)`. `None` when a path endpoint is pure
    /// enough that f or g vanishes.
    pub fn second_derivative(&self, x: f64) -> Option<(f64, f64)> {
        let (a, b) = self.point(x);
        let f = (1.0 - dot(&a, &a)).max(0.0).sqrt();
        let g = (1.0 - dot(&b, &b)).max(0.0).sqrt();
        if f < 1e-8 || g < 1e-8 {
            return None;
        }
        let uu = dot(&self.u, &self.u);
        let vv = dot(&self.v, &self.v);
        let uv = dot(&self.u, &self.v);
        let alpha = dot(&self.u, &a);
        let beta = dot(&self.v, &b);
        let first = 2.0 * uv - g * uu / f - f * vv / g;
        let second = 2.0 * alpha * beta / (f * g) - g * alpha * alpha / f.powi(3) - f * beta * beta / g.powi(3);
        Some((first, second))
    }
}
