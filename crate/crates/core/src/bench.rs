//! Evaluation-time benchmark for the measures and log-log scaling fits.
//!
//! The timed region is single-threaded and contains only measure calls on
//! pre-generated pairs. Each sample covers enough repetitions to sit well
//! above timer resolution.

use std::collections::BTreeSet;
use std::hint::black_box;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{evaluate, MeasureId};
use crate::rng::trial_rng;
use crate::states::{random_mixed_with, DensityMatrix};

pub const DEFAULT_DIMS: [usize; 8] = [2, 4, 8, 16, 32, 64, 128, 256];
pub const DEFAULT_MIN_TIME_MS: u64 = 50;
pub const WARMUP_EVALS: usize = 3;
/// Target duration of one timing sample.
const SAMPLE_TARGET: Duration = Duration::from_micros(200);
const MIN_SAMPLES: usize = 5;

/// Per-evaluation timing statistics for one (measure, dimension) point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub measure: MeasureId,
    pub d: usize,
    pub n_pairs: usize,
    pub mean_ns: f64,
    pub median_ns: f64,
    pub stddev_ns: f64,
    pub total_reps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub measure: MeasureId,
    pub exponent: f64,
    pub r_squared: f64,
    pub d_min: usize,
    pub d_max: usize,
}

/// The pairs shared by every measure at dimension `d`.
pub fn bench_pairs(d: usize, n_pairs: usize, seed: u64) -> Vec<(DensityMatrix, DensityMatrix)> {
    (0..n_pairs as u64)
        .map(|i| {
            let mut rng = trial_rng(seed ^ (d as u64).rotate_left(32), i);
            (random_mixed_with(d, &mut rng), random_mixed_with(d, &mut rng))
        })
        .collect()
}

fn one_pass(id: MeasureId, pairs: &[(DensityMatrix, DensityMatrix)]) {
    for (a, b) in pairs {
        black_box(evaluate(id, black_box(a), black_box(b)).expect("same dimension"));
    }
}

fn time_point(id: MeasureId, pairs: &[(DensityMatrix, DensityMatrix)], min_time: Duration) -> BenchRecord {
    let n = pairs.len();
    for (a, b) in pairs.iter().cycle().take(WARMUP_EVALS) {
        black_box(evaluate(id, a, b).expect("same dimension"));
    }

    // passes per sample, doubled until one sample reaches the target
    let mut passes = 1usize;
    loop {
        let t = Instant::now();
        for _ in 0..passes {
            one_pass(id, pairs);
        }
        if t.elapsed() >= SAMPLE_TARGET || passes >= 1 << 20 {
            break;
        }
        passes *= 2;
    }

    let mut samples = Vec::new();
    let start = Instant::now();
    while samples.len() < MIN_SAMPLES || start.elapsed() < min_time {
        let t = Instant::now();
        for _ in 0..passes {
            one_pass(id, pairs);
        }
        samples.push(t.elapsed().as_nanos() as f64 / (passes * n) as f64);
    }

    let count = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / count;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (count - 1.0).max(1.0);
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    let median = if samples.len() % 2 == 0 {
        0.5 * (samples[mid - 1] + samples[mid])
    } else {
        samples[mid]
    };
    BenchRecord {
        measure: id,
        d: pairs[0].0.dim(),
        n_pairs: n,
        mean_ns: mean,
        median_ns: median,
        stddev_ns: var.sqrt(),
        total_reps: (samples.len() * passes * n) as u64,
    }
}

/// One record per (measure, dimension), dimensions outermost.
pub fn run_bench(
    measures: &[MeasureId],
    dims: &[usize],
    n_pairs: usize,
    seed: u64,
    min_time_per_point: Duration,
) -> Result<Vec<BenchRecord>> {
    if dims.is_empty() || measures.is_empty() {
        return Err(Error::InsufficientData {
            measure: "bench".into(),
            reason: "no measures or dimensions requested".into(),
        });
    }
    if n_pairs == 0 {
        return Err(Error::InsufficientData {
            measure: "bench".into(),
            reason: "n_pairs must be at least 1".into(),
        });
    }
    if let Some(&d) = dims
        .iter()
        .find(|&&d| d < 1 || (d < 2 && measures.contains(&MeasureId::FC)))
    {
        return Err(Error::DimTooSmall { dim: d, min: 2 });
    }
    let mut records = Vec::with_capacity(measures.len() * dims.len());
    for &d in dims {
        let pairs = bench_pairs(d, n_pairs, seed);
        for &id in measures {
            let rec = time_point(id, &pairs, min_time_per_point);
            log::info!(
                "{id} d={d}: median {:.0} ns over {} evaluations",
                rec.median_ns,
                rec.total_reps
            );
            records.push(rec);
        }
    }
    Ok(records)
}

/// Least-squares slope and R^2 of `ln y` against `ln x`.
fn loglog_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}

/// Exponent of `median_ns ~ d^k` per measure, fitted over the largest
/// `max(4, ceil(n / 2))` of its `n` dimensions. Needs at least four dimensions
/// and a largest dimension of at least 32.
pub fn fit_scaling(records: &[BenchRecord]) -> Result<Vec<ScalingFit>> {
    let mut order: Vec<MeasureId> = Vec::new();
    for r in records {
        if !order.contains(&r.measure) {
            order.push(r.measure);
        }
    }
    order
        .into_iter()
        .map(|id| {
            let mine: Vec<&BenchRecord> = records.iter().filter(|r| r.measure == id).collect();
            let dims: BTreeSet<usize> = mine.iter().map(|r| r.d).collect();
            let insufficient = |reason: String| Error::InsufficientData {
                measure: id.to_string(),
                reason,
            };
            if dims.len() < 4 {
                return Err(insufficient(format!("{} distinct dimensions, need 4", dims.len())));
            }
            let d_max = *dims.last().expect("nonempty");
            if d_max < 32 {
                return Err(insufficient(format!("largest dimension {d_max}, need at least 32")));
            }
            let keep = 4.max(dims.len().div_ceil(2));
            let used: Vec<usize> = dims.iter().copied().skip(dims.len() - keep).collect();
            let points: Vec<(f64, f64)> = used
                .iter()
                .map(|&d| {
                    let at_d: Vec<f64> = mine.iter().filter(|r| r.d == d).map(|r| r.median_ns).collect();
                    (d as f64, at_d.iter().sum::<f64>() / at_d.len() as f64)
                })
                .collect();
            let (exponent, r_squared) = loglog_fit(&points);
            Ok(ScalingFit {
                measure: id,
                exponent,
                r_squared,
                d_min: used[0],
                d_max,
            })
        })
        .collect()
}
