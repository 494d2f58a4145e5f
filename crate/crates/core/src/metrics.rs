//! Distance functionals built from F and F_N, and the conditionally-negative
//! kernel test that certifies `sqrt(K)` as a metric.
//!
//! `A = arccos sqrt(m)`, `B = sqrt(2 - 2 sqrt(m))`, `C = sqrt(1 - m)`,
//! `H = sqrt(2 - 2 tr(sqrt(rho) sqrt(sigma)))`, `modBures = sqrt(2) C[F_N]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::MatrixJson;
use crate::linalg::{hs_norm, matrix_sqrt_psd};
use crate::measures::{fidelity_uj, one_minus_fidelity_n, MeasureId};
use crate::rng::seeded;
use crate::states::{check_same_dim, DensityMatrix};

/// Absolute slack for triangle and kernel checks.
pub const METRIC_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricId {
    #[serde(rename = "A_F")]
    AF,
    #[serde(rename = "B_F")]
    BF,
    #[serde(rename = "C_F")]
    CF,
    #[serde(rename = "A_FN")]
    AFN,
    #[serde(rename = "B_FN")]
    BFN,
    #[serde(rename = "C_FN")]
    CFN,
    H,
    #[serde(rename = "modBures")]
    ModBures,
}

impl MetricId {
    pub const ALL: [MetricId; 8] = [
        Self::AF,
        Self::BF,
        Self::CF,
        Self::AFN,
        Self::BFN,
        Self::CFN,
        Self::H,
        Self::ModBures,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AF => "A_F",
            Self::BF => "B_F",
            Self::CF => "C_F",
            Self::AFN => "A_FN",
            Self::BFN => "B_FN",
            Self::CFN => "C_FN",
            Self::H => "H",
            Self::ModBures => "modBures",
        }
    }

    /// The fidelity the functional is applied to; `H` uses tr(sqrt(rho) sqrt(sigma)).
    pub fn base_measure(self) -> Option<MeasureId> {
        match self {
            Self::AF | Self::BF | Self::CF => Some(MeasureId::F),
            Self::AFN | Self::BFN | Self::CFN | Self::ModBures => Some(MeasureId::FN),
            Self::H => None,
        }
    }

    /// Largest attainable value.
    pub fn upper_limit(self) -> f64 {
        match self {
            Self::AF | Self::AFN => std::f64::consts::FRAC_PI_2,
            Self::CF | Self::CFN => 1.0,
            Self::BF | Self::BFN | Self::H | Self::ModBures => std::f64::consts::SQRT_2,
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

/// `(m, 1 - m)` for the base fidelity. For F_N the complement comes from the
/// cancellation-free form, so it is exactly 0 at rho = sigma.
fn base_pair(id: MetricId, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(f64, f64)> {
    match id.base_measure() {
        Some(MeasureId::FN) => {
            let gap = one_minus_fidelity_n(rho, sigma)?;
            Ok((1.0 - gap, gap))
        }
        _ => {
            let f = fidelity_uj(rho, sigma)?.value;
            Ok((f, 1.0 - f))
        }
    }
}

/// ||sqrt(rho) - sqrt(sigma)||_HS^2, which equals 2 - 2 tr(sqrt(rho) sqrt(sigma)).
pub fn hellinger_sq(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let a = matrix_sqrt_psd(rho.matrix())?;
    let b = matrix_sqrt_psd(sigma.matrix())?;
    Ok(hs_norm(&(&a - &b)).powi(2).min(2.0))
}

pub fn metric_value(id: MetricId, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    if id == MetricId::H {
        return Ok(hellinger_sq(rho, sigma)?.sqrt());
    }
    let (m, gap) = base_pair(id, rho, sigma)?;
    let (m, gap) = (m.clamp(0.0, 1.0), gap.clamp(0.0, 1.0));
    let root = m.sqrt();
    Ok(match id {
        // atan2 keeps the angle accurate when m is close to 1
        MetricId::AF | MetricId::AFN => gap.sqrt().atan2(root),
        // 2 - 2 sqrt(m) = 2 (1 - m) / (1 + sqrt(m))
        MetricId::BF | MetricId::BFN => (2.0 * gap / (1.0 + root)).sqrt(),
        MetricId::CF | MetricId::CFN => gap.sqrt(),
        MetricId::ModBures => (2.0 * gap).sqrt(),
        MetricId::H => unreachable!(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `X(rho, sigma) <= X(rho, tau) + X(tau, sigma)`.
pub fn triangle_check(
    id: MetricId,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tau: &DensityMatrix,
) -> Result<TriangleCheck> {
    check_same_dim(rho, sigma)?;
    check_same_dim(rho, tau)?;
    let lhs = metric_value(id, rho, sigma)?;
    let rhs = metric_value(id, rho, tau)? + metric_value(id, tau, sigma)?;
    Ok(TriangleCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + METRIC_SLACK,
    })
}

/// Squared distances tested for conditional negative definiteness. `B2_FN` is
/// exploratory: `B[F_N]` is not a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelId {
    #[serde(rename = "C2_FN")]
    C2FN,
    #[serde(rename = "B2_F")]
    B2F,
    #[serde(rename = "C2_F")]
    C2F,
    H2,
    #[serde(rename = "modBures2")]
    ModBures2,
    #[serde(rename = "B2_FN")]
    B2FN,
}

impl KernelId {
    pub const ALL: [KernelId; 6] = [Self::C2FN, Self::B2F, Self::C2F, Self::H2, Self::ModBures2, Self::B2FN];

    /// The kernels whose square roots are claimed to be metrics.
    pub const METRIC: [KernelId; 5] = [Self::C2FN, Self::B2F, Self::C2F, Self::H2, Self::ModBures2];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::C2FN => "C2_FN",
            Self::B2F => "B2_F",
            Self::C2F => "C2_F",
            Self::H2 => "H2",
            Self::ModBures2 => "modBures2",
            Self::B2FN => "B2_FN",
        }
    }

    pub fn metric(self) -> MetricId {
        match self {
            Self::C2FN => MetricId::CFN,
            Self::B2F => MetricId::BF,
            Self::C2F => MetricId::CF,
            Self::H2 => MetricId::H,
            Self::ModBures2 => MetricId::ModBures,
            Self::B2FN => MetricId::BFN,
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

pub fn kernel_value(id: KernelId, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    match id {
        KernelId::H2 => hellinger_sq(rho, sigma),
        KernelId::C2FN => one_minus_fidelity_n(rho, sigma),
        KernelId::ModBures2 => Ok(2.0 * one_minus_fidelity_n(rho, sigma)?),
        _ => Ok(metric_value(id.metric(), rho, sigma)?.powi(2)),
    }
}

/// Symmetric Gram matrix `K(rho_i, rho_j)`.
pub fn kernel_matrix(id: KernelId, states: &[DensityMatrix]) -> Result<Vec<Vec<f64>>> {
    let n = states.len();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = kernel_value(id, &states[i], &states[j])?;
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    Ok(k)
}

fn quadratic_form(k: &[Vec<f64>], c: &[f64]) -> f64 {
    k.iter()
        .zip(c)
        .map(|(row, ci)| ci * row.iter().zip(c).map(|(kij, cj)| kij * cj).sum::<f64>())
        .sum()
}

/// Orthonormal basis of the zero-sum subspace of R^n (Helmert contrasts), as columns.
fn zero_sum_basis(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n - 1, |i, j| {
        let m = (j + 1) as f64;
        let scale = 1.0 / (m * (m + 1.0)).sqrt();
        if i <= j {
            scale
        } else if i == j + 1 {
            -m * scale
        } else {
            0.0
        }
    })
}

/// Exact maximum of `c^T K c` over unit zero-sum `c`, with its maximizer.
fn zero_sum_maximum(k: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let n = k.len();
    let km = DMatrix::from_fn(n, n, |i, j| k[i][j]);
    let basis = zero_sum_basis(n);
    let reduced = basis.transpose() * &km * &basis;
    let eig = SymmetricEigen::new(reduced);
    let (best, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("n >= 2");
    let c = &basis * eig.eigenvectors.column(best);
    (value, c.iter().copied().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub states: Vec<MatrixJson>,
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelTestReport {
    pub kernel: KernelId,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Largest quadratic form over the random zero-sum draws.
    pub max_quadratic_form: f64,
    /// Largest quadratic form over all unit zero-sum vectors.
    pub stress_max: f64,
    pub stress_coefficients: Vec<f64>,
    /// `max_quadratic_form <= 1e-9`.
    pub passed: bool,
    pub worst_case_inputs: WorstCase,
}

impl KernelTestReport {
    pub fn stress_passed(&self) -> bool {
        self.stress_max <= METRIC_SLACK
    }
}

/// Draws `trials` unit zero-sum coefficient vectors and reports the largest
/// `sum_ij K(rho_i, rho_j) c_i c_j`, plus the exact maximum over the subspace.
pub fn schoenberg_kernel_test(
    id: KernelId,
    states: &[DensityMatrix],
    trials: usize,
    seed: u64,
) -> Result<KernelTestReport> {
    let n = states.len();
    if n < 2 {
        return Err(Error::TooFewStates(n));
    }
    for s in &states[1..] {
        check_same_dim(&states[0], s)?;
    }
    let k = kernel_matrix(id, states)?;
    let mut rng = seeded(seed);
    let mut max_q = f64::NEG_INFINITY;
    let mut worst = vec![0.0; n];
    for _ in 0..trials {
        let mut c: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let mean = c.iter().sum::<f64>() / n as f64;
        c.iter_mut().for_each(|x| *x -= mean);
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        c.iter_mut().for_each(|x| *x /= norm);
        let q = quadratic_form(&k, &c);
        if q > max_q {
            max_q = q;
            worst = c;
        }
    }
    let (stress_max, stress_coefficients) = zero_sum_maximum(&k);
    Ok(KernelTestReport {
        kernel: id,
        n,
        trials,
        seed,
        max_quadratic_form: max_q,
        stress_max,
        stress_coefficients,
        passed: max_q <= METRIC_SLACK,
        worst_case_inputs: WorstCase {
            states: states.iter().map(|s| MatrixJson::from_matrix(s.matrix())).collect(),
            coefficients: worst,
        },
    })
}
