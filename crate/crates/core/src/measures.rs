//! The scalar similarity and distance measures between two states.
//!
//! | id      | quantity                                              |
//! |---------|-------------------------------------------------------|
//! | `F`     | Uhlmann-Jozsa fidelity `[tr sqrt(sqrt(rho) sigma sqrt(rho))]^2` |
//! | `sqrtF` | its square root                                       |
//! | `FN`    | `tr(rho sigma) + sqrt(1 - tr rho^2) sqrt(1 - tr sigma^2)` |
//! | `FC`    | Chen's affine rescaling of `FN`                       |
//! | `Q`     | `min_s tr(rho^s sigma^(1-s))`                         |
//! | `D`     | trace distance `||rho - sigma||_tr / 2`               |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, hermitize, hs_inner_real, hs_norm, noise_floor, ComplexMatrix};
use crate::optimize::brent_minimize;
use crate::states::{check_same_dim, DensityMatrix};

/// Tolerance in `s` for the Chernoff minimization.
pub const Q_TOL: f64 = 1e-10;
/// Out-of-range excursions larger than this are logged before clamping.
pub const CLAMP_WARN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureId {
    F,
    #[serde(rename = "sqrtF")]
    SqrtF,
    FN,
    FC,
    Q,
    D,
}

impl MeasureId {
    pub const ALL: [MeasureId; 6] = [Self::F, Self::SqrtF, Self::FN, Self::FC, Self::Q, Self::D];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::F => "F",
            Self::SqrtF => "sqrtF",
            Self::FN => "FN",
            Self::FC => "FC",
            Self::Q => "Q",
            Self::D => "D",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub measure: MeasureId,
    pub value: f64,
    pub dim: usize,
}

impl MeasureValue {
    /// Clamps into [0, 1], warning when the excursion is beyond rounding noise.
    fn clamped(measure: MeasureId, raw: f64, dim: usize) -> Self {
        let value = raw.clamp(0.0, 1.0);
        if (value - raw).abs() > CLAMP_WARN {
            log::warn!("{measure} = {raw:e} outside [0, 1] for d = {dim}; clamped");
        }
        Self { measure, value, dim }
    }
}

/// tr sqrt(sqrt(rho) sigma sqrt(rho)). With rho = U L U^dagger the product is
/// unitarily similar to sqrt(L) (U^dagger sigma U) sqrt(L), so its spectrum is
/// taken from that matrix restricted to the support of rho.
pub(crate) fn root_fidelity_raw(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let eig = eigh(rho.matrix())?;
    let floor = noise_floor(&eig.eigenvalues);
    let support: Vec<(usize, f64)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > floor)
        .map(|(i, &l)| (i, l.sqrt()))
        .collect();
    let u = &eig.eigenvectors;
    let rotated = u.adjoint().matmul(sigma.matrix()).matmul(u);
    let product = hermitize(&ComplexMatrix::from_fn(support.len(), |a, b| {
        let ((i, si), (j, sj)) = (support[a], support[b]);
        rotated[(i, j)] * (si * sj)
    }));
    let vals = if support.is_empty() {
        Vec::new()
    } else {
        eigvalsh(&product)?
    };
    // the product's rounding noise scales with |rho| |sigma| <= |rho|
    let largest_rho = eig.eigenvalues.last().copied().unwrap_or(0.0).abs();
    let floor = noise_floor(&vals).max(noise_floor(&[largest_rho]) * rho.dim() as f64);
    Ok(vals.iter().filter(|&&l| l > floor).map(|l| l.sqrt()).sum())
}

pub fn fidelity_uj(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MeasureValue> {
    let root = root_fidelity_raw(rho, sigma)?;
    Ok(MeasureValue::clamped(MeasureId::F, root * root, rho.dim()))
}

pub fn sqrt_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MeasureValue> {
    let root = root_fidelity_raw(rho, sigma)?;
    Ok(MeasureValue::clamped(MeasureId::SqrtF, root, rho.dim()))
}

pub fn fidelity_n(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MeasureValue> {
    check_same_dim(rho, sigma)?;
    let overlap = hs_inner_real(rho.matrix(), sigma.matrix())?;
    let raw = overlap + rho.linear_entropy().sqrt() * sigma.linear_entropy().sqrt();
    Ok(MeasureValue::clamped(MeasureId::FN, raw, rho.dim()))
}

/// 1 - F_N as `|rho - sigma|_HS^2 / 2 + (sqrt(1 - tr rho^2) - sqrt(1 - tr sigma^2))^2 / 2`.
/// Both terms are nonnegative, so there is no cancellation near rho = sigma.
pub fn one_minus_fidelity_n(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let diff = hs_norm(&(rho.matrix() - sigma.matrix()));
    let gap = rho.linear_entropy().sqrt() - sigma.linear_entropy().sqrt();
    Ok((0.5 * diff * diff + 0.5 * gap * gap).min(1.0))
}

/// Qubit-only form tr(rho sigma) + 2 sqrt(det rho) sqrt(det sigma). Kept as a cross-check.
pub fn fidelity_n_qubit_det(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MeasureValue> {
    check_same_dim(rho, sigma)?;
    if rho.dim() != 2 {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: 2,
        });
    }
    let det = |m: &DensityMatrix| {
        let a = m.matrix();
        (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).re.max(0.0)
    };
    let overlap = hs_inner_real(rho.matrix(), sigma.matrix())?;
    let raw = overlap + 2.0 * det(rho).sqrt() * det(sigma).sqrt();
    Ok(MeasureValue::clamped(MeasureId::FN, raw, 2))
}

pub fn fidelity_chen(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MeasureValue> {
    check_same_dim(rho, sigma)?;
    let d = rho.dim();
    if d < 2 {
        return Err(Error::DimTooSmall { dim: d, min: 2 });
    }
    let r = 1.0 / (d as f64 - 1.0);
    let fnv = fidelity_n(rho, sigma)?.value;
    let raw = 0.5 * (1.0 - r) + 0.5 * (1.0 + r) * fnv;
    Ok(MeasureValue::clamped(MeasureId::FC, raw, d))
}

/// The convex function s -> sum_ij lambda_i^s mu_j^(1-s) |<v_i|w_j>|^2.
#[derive(Debug, Clone)]
pub struct ChernoffObjective {
    lambda: Vec<f64>,
    mu: Vec<f64>,
    overlap: Vec<f64>,
}

impl ChernoffObjective {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        check_same_dim(rho, sigma)?;
        let er = eigh(rho.matrix())?;
        let es = eigh(sigma.matrix())?;
        let clamp = |vals: &[f64]| -> Vec<f64> {
            let floor = noise_floor(vals);
            vals.iter().map(|&l| if l > floor { l } else { 0.0 }).collect()
        };
        let overlap = er
            .eigenvectors
            .adjoint()
            .matmul(&es.eigenvectors)
            .as_slice()
            .iter()
            .map(|z| z.norm_sqr())
            .collect();
        Ok(Self {
            lambda: clamp(&er.eigenvalues),
            mu: clamp(&es.eigenvalues),
            overlap,
        })
    }

    /// 0^0 evaluates to 1 and 0^s to 0 for s > 0.
    pub fn eval(&self, s: f64) -> f64 {
        let n = self.lambda.len();
        let right: Vec<f64> = self.mu.iter().map(|m| m.powf(1.0 - s)).collect();
        let mut total = 0.0;
        for (i, l) in self.lambda.iter().enumerate() {
            let left = l.powf(s);
            if left == 0.0 {
                continue;
            }
            let row = &self.overlap[i * n..(i + 1) * n];
            total += left * row.iter().zip(&right).map(|(a, b)| a * b).sum::<f64>();
        }
        total
    }

    /// (argmin s, min value).
    pub fn minimize(&self) -> (f64, f64) {
        let m = brent_minimize(|s| self.eval(s), 0.0, 1.0, 0.5, Q_TOL, 500);
        (m.x, m.value)
    }
}

pub fn chernoff_q(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MeasureValue> {
    let (_, value) = ChernoffObjective::new(rho, sigma)?.minimize();
    Ok(MeasureValue::clamped(MeasureId::Q, value, rho.dim()))
}

pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MeasureValue> {
    check_same_dim(rho, sigma)?;
    let vals = eigvalsh(&(rho.matrix() - sigma.matrix()))?;
    let raw = 0.5 * vals.iter().map(|l| l.abs()).sum::<f64>();
    Ok(MeasureValue::clamped(MeasureId::D, raw, rho.dim()))
}

pub fn evaluate(id: MeasureId, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MeasureValue> {
    match id {
        MeasureId::F => fidelity_uj(rho, sigma),
        MeasureId::SqrtF => sqrt_fidelity(rho, sigma),
        MeasureId::FN => fidelity_n(rho, sigma),
        MeasureId::FC => fidelity_chen(rho, sigma),
        MeasureId::Q => chernoff_q(rho, sigma),
        MeasureId::D => trace_distance(rho, sigma),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::rng::seeded;
    use crate::states::{
        disjoint_maximally_mixed, haar_unitary, ozawa_pair, pure_state, qutrit_triple, random_mixed, random_pure,
        random_state_vector, validate,
    };

    fn diag(v: &[f64]) -> DensityMatrix {
        validate(&ComplexMatrix::from_diagonal(v)).unwrap()
    }

    fn expectation(rho: &DensityMatrix, psi: &[num_complex::Complex64]) -> f64 {
        let m = rho.matrix();
        let n = psi.len();
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += psi[i].conj() * m[(i, j)] * psi[j];
            }
        }
        acc.re
    }

    /// tr(rho^s sigma^(1-s)) through explicit matrix powers.
    fn chernoff_by_matrix_powers(rho: &DensityMatrix, sigma: &DensityMatrix, s: f64) -> f64 {
        let er = eigh(rho.matrix()).unwrap();
        let es = eigh(sigma.matrix()).unwrap();
        let pow = |l: f64, t: f64| {
            if l <= 1e-14 {
                if t == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                l.powf(t)
            }
        };
        let a = er.map_spectrum(|l| pow(l, s));
        let b = es.map_spectrum(|l| pow(l, 1.0 - s));
        a.matmul(&b).trace().re
    }

    fn grid_min(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
        (1..2000)
            .map(|k| chernoff_by_matrix_powers(rho, sigma, k as f64 / 2000.0))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn measure_ids_round_trip_strings() {
        for id in MeasureId::ALL {
            assert_eq!(id.as_str().parse::<MeasureId>().unwrap(), id);
        }
        assert!(matches!("G".parse::<MeasureId>(), Err(Error::UnknownMeasure(_))));
    }

    #[test]
    fn uj_fidelity_examples() {
        let rho = random_mixed(4, 3);
        assert!((fidelity_uj(&rho, &rho).unwrap().value - 1.0).abs() < 1e-10);
        assert_eq!(fidelity_uj(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap().value, 0.0);
        for seed in 0..50 {
            let a = random_mixed(2, seed);
            let b = random_mixed(2, seed + 1000);
            let f = fidelity_uj(&a, &b).unwrap().value;
            let fnv = fidelity_n(&a, &b).unwrap().value;
            assert!((f - fnv).abs() < 1e-10);
        }
    }

    #[test]
    fn uj_fidelity_reduces_to_expectation_for_pure_argument() {
        for d in [2, 3, 4, 8] {
            for seed in 0..20 {
                let rho = random_mixed(d, seed);
                let psi = random_state_vector(d, &mut seeded(seed + 500));
                let sigma = pure_state(&psi);
                let target = expectation(&rho, &psi);
                let f1 = fidelity_uj(&rho, &sigma).unwrap().value;
                let f2 = fidelity_uj(&sigma, &rho).unwrap().value;
                assert!((f1 - target).abs() < 1e-10, "d={d} {f1} vs {target}");
                assert!((f2 - target).abs() < 1e-10, "d={d} {f2} vs {target}");
            }
        }
    }

    #[test]
    fn fn_examples() {
        let (r, s) = ozawa_pair();
        assert!((fidelity_n(&r, &s).unwrap().value - 0.5).abs() < 1e-15);
        let (a, b) = disjoint_maximally_mixed(50);
        assert!((fidelity_n(&a, &b).unwrap().value - 0.98).abs() < 1e-12);
        let (a, b) = disjoint_maximally_mixed(2);
        assert!((fidelity_n(&a, &b).unwrap().value - 0.5).abs() < 1e-15);
        let (a, b) = disjoint_maximally_mixed(1);
        assert_eq!(fidelity_n(&a, &b).unwrap().value, 0.0);

        for seed in 0..10 {
            let rho = random_mixed(5, seed);
            let psi = random_state_vector(5, &mut seeded(seed + 77));
            let v = fidelity_n(&rho, &pure_state(&psi)).unwrap().value;
            assert!((v - expectation(&rho, &psi)).abs() < 1e-12);
        }
    }

    #[test]
    fn one_minus_fn_matches_direct_form() {
        for seed in 0..20 {
            let a = random_mixed(4, seed);
            let b = random_mixed(4, seed + 40);
            let direct = 1.0 - fidelity_n(&a, &b).unwrap().value;
            assert!((one_minus_fidelity_n(&a, &b).unwrap() - direct).abs() < 1e-14);
        }
        let a = random_mixed(4, 1);
        assert_eq!(one_minus_fidelity_n(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn qubit_determinant_form() {
        let half = diag(&[0.5, 0.5]);
        assert!((fidelity_n_qubit_det(&half, &half).unwrap().value - 1.0).abs() < 1e-15);
        for seed in 0..30 {
            let a = random_mixed(2, seed);
            let b = random_mixed(2, seed + 300);
            let x = fidelity_n_qubit_det(&a, &b).unwrap().value;
            let y = fidelity_n(&a, &b).unwrap().value;
            assert!((x - y).abs() < 1e-12);
        }
        let p = random_pure(2, 4);
        assert!((fidelity_n_qubit_det(&p, &half).unwrap().value - 0.5).abs() < 1e-12);
        assert!(fidelity_n_qubit_det(&random_mixed(3, 1), &random_mixed(3, 2)).is_err());
    }

    #[test]
    fn chen_fidelity() {
        let a = random_mixed(2, 1);
        let b = random_mixed(2, 2);
        assert!((fidelity_chen(&a, &b).unwrap().value - fidelity_n(&a, &b).unwrap().value).abs() < 1e-15);
        let c = random_mixed(5, 3);
        assert!((fidelity_chen(&c, &c).unwrap().value - 1.0).abs() < 1e-12);
        let (rho, sigma, _) = qutrit_triple();
        assert!((fidelity_chen(&rho, &sigma).unwrap().value - 0.5).abs() < 1e-12);
        let one = diag(&[1.0]);
        assert_eq!(fidelity_chen(&one, &one), Err(Error::DimTooSmall { dim: 1, min: 2 }));
    }

    #[test]
    fn chernoff_examples() {
        let rho = random_mixed(3, 8);
        assert!((chernoff_q(&rho, &rho).unwrap().value - 1.0).abs() < 1e-10);
        assert!(chernoff_q(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap().value < 1e-9);
        let a = diag(&[0.7, 0.3]);
        let b = diag(&[0.3, 0.7]);
        let expected = 2.0 * 0.21f64.sqrt();
        let q = chernoff_q(&a, &b).unwrap().value;
        assert!((q - expected).abs() < 1e-12);
        assert!((grid_min(&a, &b) - expected).abs() < 1e-6);
    }

    #[test]
    fn chernoff_matches_grid_oracle() {
        for seed in 0..5 {
            let a = random_mixed(4, seed);
            let b = random_mixed(4, seed + 10);
            let q = chernoff_q(&a, &b).unwrap().value;
            let grid = grid_min(&a, &b);
            // the grid can only overestimate the minimum
            assert!(q <= grid + 1e-12);
            assert!(grid - q < 1e-6, "q={q} grid={grid}");
            let q_rev = chernoff_q(&b, &a).unwrap().value;
            assert!((q - q_rev).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_distance_examples() {
        let rho = random_mixed(3, 1);
        assert!(trace_distance(&rho, &rho).unwrap().value.abs() < 1e-15);
        let (r, s) = ozawa_pair();
        assert!((trace_distance(&r, &s).unwrap().value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_invariance_of_fn_and_f() {
        let a = random_mixed(3, 5);
        let b = random_mixed(3, 6);
        let u = haar_unitary(3, 7);
        let (ua, ub) = (a.conjugate_by(&u), b.conjugate_by(&u));
        for id in [MeasureId::F, MeasureId::FN, MeasureId::Q, MeasureId::D] {
            let x = evaluate(id, &a, &b).unwrap().value;
            let y = evaluate(id, &ua, &ub).unwrap().value;
            assert!((x - y).abs() < 1e-9, "{id}");
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = random_mixed(2, 1);
        let b = random_mixed(3, 1);
        for id in MeasureId::ALL {
            assert!(matches!(evaluate(id, &a, &b), Err(Error::DimMismatch { .. })), "{id}");
        }
    }
}
