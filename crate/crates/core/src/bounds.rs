//! Trace-distance bounds in terms of F and F_N.
//!
//! Checked on every pair:
//! - `1 - sqrt(F) <= D <= sqrt(1 - F)`
//! - `D <= sqrt(r / 2) sqrt(1 - F_N)` with `r = rank(rho - sigma)`
//! - `D >= 1 - sqrt(F_N)`
//! - `D >= 1 - F` when d = 2 or either state is pure
//!
//! `D >= 1 - F_N` is an open conjecture; its failures are counted apart from
//! violations of the proven bounds and never treated as errors.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, rank_from_spectrum};
use crate::measures::{fidelity_uj, one_minus_fidelity_n, trace_distance};
use crate::rng::{seeded, trial_rng};
use crate::states::{
    check_same_dim, random_mixed_with, random_pure_with, saturating_pair, DensityMatrix, SaturatingPairSpec,
};

/// A bound counts as violated only beyond this absolute slack.
pub const BOUND_SLACK: f64 = 1e-9;
/// Purity above `1 - PURE_TOL` counts as a pure state.
pub const PURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    /// `1 - sqrt(F) <= D`
    FuchsLower,
    /// `D <= sqrt(1 - F)`
    FuchsUpper,
    /// `D <= sqrt(r / 2) sqrt(1 - F_N)`
    RankUpper,
    /// `1 - sqrt(F_N) <= D`
    WeakLower,
    /// `1 - F <= D` on qubits or with a pure argument
    StrongLower,
    /// `1 - F_N <= D`, conjectured
    Conjecture,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct BoundReport {
    pub pair_id: u64,
    pub D: f64,
    pub FN: f64,
    pub F: f64,
    pub rank_diff: usize,
    pub upper_FN: f64,
    pub upper_F: f64,
    pub lower_F: f64,
    pub lower_FN_conj: f64,
    pub lower_FN_weak: f64,
    /// `1 - F`, present only where the strengthened bound applies.
    pub lower_F_strong: Option<f64>,
    pub violations: Vec<BoundId>,
    pub conjecture_violations: Vec<BoundId>,
}

impl BoundReport {
    /// Smallest slack `upper - D` or `D - lower` over the proven bounds.
    pub fn worst_margin(&self) -> f64 {
        let mut m = (self.upper_FN - self.D)
            .min(self.upper_F - self.D)
            .min(self.D - self.lower_F)
            .min(self.D - self.lower_FN_weak);
        if let Some(s) = self.lower_F_strong {
            m = m.min(self.D - s);
        }
        m
    }

    pub fn conjecture_margin(&self) -> f64 {
        self.D - self.lower_FN_conj
    }
}

/// rank(rho - sigma) with the default relative threshold.
pub fn rank_difference(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<usize> {
    check_same_dim(rho, sigma)?;
    Ok(rank_from_spectrum(&eigvalsh(&(rho.matrix() - sigma.matrix()))?))
}

pub fn bound_report_with_id(pair_id: u64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    check_same_dim(rho, sigma)?;
    let diff = eigvalsh(&(rho.matrix() - sigma.matrix()))?;
    let d = trace_distance(rho, sigma)?.value;
    let f = fidelity_uj(rho, sigma)?.value;
    let gap_n = one_minus_fidelity_n(rho, sigma)?;
    let fnv = 1.0 - gap_n;
    let rank = rank_from_spectrum(&diff);

    let upper_fn = (rank as f64 / 2.0).sqrt() * gap_n.sqrt();
    let upper_f = (1.0 - f).sqrt();
    let lower_f = 1.0 - f.sqrt();
    let lower_weak = 1.0 - fnv.sqrt();
    let strong_applies = rho.dim() == 2 || rho.purity() >= 1.0 - PURE_TOL || sigma.purity() >= 1.0 - PURE_TOL;
    let lower_strong = strong_applies.then_some(1.0 - f);

    let mut violations = Vec::new();
    let checks = [
        (BoundId::FuchsLower, lower_f - d),
        (BoundId::FuchsUpper, d - upper_f),
        (BoundId::RankUpper, d - upper_fn),
        (BoundId::WeakLower, lower_weak - d),
    ];
    for (id, excess) in checks {
        if excess > BOUND_SLACK {
            violations.push(id);
        }
    }
    if let Some(s) = lower_strong {
        if s - d > BOUND_SLACK {
            violations.push(BoundId::StrongLower);
        }
    }
    let mut conjecture_violations = Vec::new();
    if gap_n - d > BOUND_SLACK {
        conjecture_violations.push(BoundId::Conjecture);
    }

    Ok(BoundReport {
        pair_id,
        D: d,
        FN: fnv,
        F: f,
        rank_diff: rank,
        upper_FN: upper_fn,
        upper_F: upper_f,
        lower_F: lower_f,
        lower_FN_conj: gap_n,
        lower_FN_weak: lower_weak,
        lower_F_strong: lower_strong,
        violations,
        conjecture_violations,
    })
}

pub fn bound_report(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    bound_report_with_id(0, rho, sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScanMode {
    #[serde(rename = "mixed-mixed")]
    MixedMixed,
    #[serde(rename = "pure-mixed")]
    PureMixed,
    #[serde(rename = "pure-pure")]
    PurePure,
    /// Appended isospectral pairs; never drawn at random.
    #[serde(rename = "saturating")]
    Saturating,
}

impl ScanMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MixedMixed => "mixed-mixed",
            Self::PureMixed => "pure-mixed",
            Self::PurePure => "pure-pure",
            Self::Saturating => "saturating",
        }
    }

    /// Draws one pair from the per-trial generator.
    pub fn sample<R: Rng + ?Sized>(self, d: usize, rng: &mut R) -> (DensityMatrix, DensityMatrix) {
        match self {
            Self::MixedMixed => (random_mixed_with(d, rng), random_mixed_with(d, rng)),
            Self::PureMixed => (random_pure_with(d, rng), random_mixed_with(d, rng)),
            Self::PurePure => (random_pure_with(d, rng), random_pure_with(d, rng)),
            Self::Saturating => {
                let spec = SaturatingPairSpec::pair_swap(d, rng.random(), rng.random(), Some(rng.random()));
                saturating_pair(&spec).expect("positive spectrum")
            }
        }
    }
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Self::MixedMixed, Self::PureMixed, Self::PurePure, Self::Saturating]
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

/// One point of the `(1 - F_N, D)` scatter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRecord {
    pub pair_id: u64,
    pub d: usize,
    pub one_minus_fn: f64,
    pub trace_distance: f64,
    pub rank_diff: usize,
    pub purity_rho: f64,
    pub purity_sigma: f64,
    pub mode: ScanMode,
}

impl ScatterRecord {
    pub fn from_pair(pair_id: u64, mode: ScanMode, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        let diff = eigvalsh(&(rho.matrix() - sigma.matrix()))?;
        Ok(Self {
            pair_id,
            d: rho.dim(),
            one_minus_fn: one_minus_fidelity_n(rho, sigma)?,
            trace_distance: (0.5 * diff.iter().map(|l| l.abs()).sum::<f64>()).min(1.0),
            rank_diff: rank_from_spectrum(&diff),
            purity_rho: rho.purity(),
            purity_sigma: sigma.purity(),
            mode,
        })
    }

    /// `D / (sqrt(d / 2) sqrt(1 - F_N))`; 0 for identical states.
    pub fn absolute_ratio(&self) -> f64 {
        let bound = (self.d as f64 / 2.0).sqrt() * self.one_minus_fn.sqrt();
        if bound == 0.0 {
            0.0
        } else {
            self.trace_distance / bound
        }
    }

    /// `D - (1 - F_N)`.
    pub fn conjecture_margin(&self) -> f64 {
        self.trace_distance - self.one_minus_fn
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub d: usize,
    pub n_pairs: usize,
    pub seed: u64,
    pub mode: ScanMode,
    pub n_saturating: usize,
    pub conjecture_violations: usize,
    pub absolute_bound_violations: usize,
    pub rank_bound_violations: usize,
    pub min_conjecture_margin: f64,
    pub worst_conjecture_pair: Option<u64>,
    pub max_absolute_ratio: f64,
    pub max_ratio_pair: Option<u64>,
}

impl ScanSummary {
    fn tally(
        d: usize,
        n_pairs: usize,
        seed: u64,
        mode: ScanMode,
        n_saturating: usize,
        records: &[ScatterRecord],
    ) -> Self {
        let mut s = Self {
            d,
            n_pairs,
            seed,
            mode,
            n_saturating,
            conjecture_violations: 0,
            absolute_bound_violations: 0,
            rank_bound_violations: 0,
            min_conjecture_margin: f64::INFINITY,
            worst_conjecture_pair: None,
            max_absolute_ratio: 0.0,
            max_ratio_pair: None,
        };
        for r in records {
            let margin = r.conjecture_margin();
            if margin < -BOUND_SLACK {
                s.conjecture_violations += 1;
            }
            if margin < s.min_conjecture_margin {
                s.min_conjecture_margin = margin;
                s.worst_conjecture_pair = Some(r.pair_id);
            }
            let abs_bound = (d as f64 / 2.0).sqrt() * r.one_minus_fn.sqrt();
            if r.trace_distance > abs_bound + BOUND_SLACK {
                s.absolute_bound_violations += 1;
            }
            let rank_bound = (r.rank_diff as f64 / 2.0).sqrt() * r.one_minus_fn.sqrt();
            if r.trace_distance > rank_bound + BOUND_SLACK {
                s.rank_bound_violations += 1;
            }
            let ratio = r.absolute_ratio();
            if ratio > s.max_absolute_ratio {
                s.max_absolute_ratio = ratio;
                s.max_ratio_pair = Some(r.pair_id);
            }
        }
        s
    }
}

/// Scatter of `n_pairs` random pairs; pair `i` uses the stream `(seed, i)`.
pub fn conjecture_scan(
    d: usize,
    n_pairs: usize,
    seed: u64,
    mode: ScanMode,
) -> Result<(ScanSummary, Vec<ScatterRecord>)> {
    scan_with_saturating(d, n_pairs, seed, mode, 0)
}

/// As [`conjecture_scan`], then appends `n_saturating` pair-swap isospectral
/// pairs with random spectra and Haar rotations (ids continue after the random ones).
pub fn scan_with_saturating(
    d: usize,
    n_pairs: usize,
    seed: u64,
    mode: ScanMode,
    n_saturating: usize,
) -> Result<(ScanSummary, Vec<ScatterRecord>)> {
    if d < 2 {
        return Err(Error::DimTooSmall { dim: d, min: 2 });
    }
    let mut records: Vec<ScatterRecord> = (0..n_pairs as u64)
        .into_par_iter()
        .map(|i| {
            let (rho, sigma) = mode.sample(d, &mut trial_rng(seed, i));
            ScatterRecord::from_pair(i, mode, &rho, &sigma)
        })
        .collect::<Result<_>>()?;
    let mut sat_rng = seeded(seed ^ 0x5a7u64.rotate_left(40));
    for k in 0..n_saturating as u64 {
        let (rho, sigma) = ScanMode::Saturating.sample(d, &mut sat_rng);
        records.push(ScatterRecord::from_pair(
            n_pairs as u64 + k,
            ScanMode::Saturating,
            &rho,
            &sigma,
        )?);
    }
    let summary = ScanSummary::tally(d, n_pairs, seed, mode, n_saturating, &records);
    Ok((summary, records))
}

pub const SCATTER_HEADER: [&str; 8] = [
    "pair_id",
    "d",
    "one_minus_fn",
    "trace_distance",
    "rank_diff",
    "purity_rho",
    "purity_sigma",
    "mode",
];
