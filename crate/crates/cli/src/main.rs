//! `fidkit`: compute measures between state files, run the property suites,
//! scan the trace-distance scatter and time the measures.
//!
//! Exit codes: 0 pass, 1 invariant violation, 2 parse or I/O error,
//! 3 state validation failure, 4 dimension mismatch, 5 unknown id.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use fidkit::bench::{fit_scaling, run_bench, DEFAULT_DIMS, DEFAULT_MIN_TIME_MS};
use fidkit::bounds::{scan_with_saturating, ScanMode};
use fidkit::io::{parse_state, to_json};
use fidkit::metrics::{metric_value, triangle_check, MetricId};
use fidkit::states::{ozawa_pair, qutrit_triple};
use fidkit::suites;
use fidkit::{DensityMatrix, Error, MeasureId};

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io { path: PathBuf, source: std::io::Error },
    Csv(String),
    Usage(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Violation(_) => 1,
            Self::Io { .. } | Self::Csv(_) | Self::Usage(_) => 2,
            Self::Lib(e) => match e {
                Error::Parse(_) | Error::Shape(_) => 2,
                Error::NotHermitian { .. } | Error::TraceNotOne { .. } | Error::NotPsd { .. } => 3,
                Error::DimMismatch { .. } | Error::DimTooSmall { .. } => 4,
                Error::UnknownMeasure(_) => 5,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Lib(e) => write!(f, "{e}"),
            Self::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Self::Csv(m) | Self::Usage(m) | Self::Violation(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(
    name = "fidkit",
    version,
    about = "Fidelity and trace-distance toolkit for quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a measure or metric on two states, or a triangle check on three.
    Compute {
        /// F, sqrtF, FN, FC, Q, D or a metric: A_F, B_F, C_F, A_FN, B_FN, C_FN, H, modBures
        id: String,
        a: PathBuf,
        b: PathBuf,
        /// Third state: prints `lhs rhs holds` for X(a,b) <= X(a,c) + X(c,b)
        c: Option<PathBuf>,
    },
    /// Run a property suite and print its JSON report.
    Verify {
        /// axioms, concavity, supermult, metrics, kernels, bounds, pinching, monotonicity or saturation
        suite: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "FIDKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Also write the report to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scatter of (1 - F_N, D) over random pairs, as CSV.
    Scan {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, env = "FIDKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// mixed-mixed, pure-mixed or pure-pure
        #[arg(long, default_value = "mixed-mixed")]
        mode: String,
        /// Append this many isospectral pair-swap pairs
        #[arg(long, default_value_t = 0)]
        saturating: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the measures over a dimension schedule and fit scaling exponents.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "F,FN,Q,D")]
        measures: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, env = "FIDKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Minimum accumulated wall time per (measure, d) point, in milliseconds
        #[arg(long, default_value_t = DEFAULT_MIN_TIME_MS)]
        min_time: u64,
        #[arg(long)]
        out: PathBuf,
        /// Scaling-fit JSON; defaults to the CSV path with extension `fit.json`
        #[arg(long)]
        fit_out: Option<PathBuf>,
    },
    /// Write the named states as matrix JSON files.
    Export {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn read_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state(&text).map_err(|e| match e {
        Error::Parse(m) => Failure::Lib(Error::Parse(format!("{}: {m}", path.display()))),
        other => Failure::Lib(other),
    })
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

enum Quantity {
    Measure(MeasureId),
    Metric(MetricId),
}

fn parse_quantity(id: &str) -> CliResult<Quantity> {
    if let Ok(m) = id.parse::<MeasureId>() {
        return Ok(Quantity::Measure(m));
    }
    Ok(Quantity::Metric(id.parse::<MetricId>()?))
}

fn compute(id: &str, a: &Path, b: &Path, c: Option<&Path>) -> CliResult<()> {
    let quantity = parse_quantity(id)?;
    let rho = read_state(a)?;
    let sigma = read_state(b)?;
    match (quantity, c) {
        (Quantity::Measure(m), None) => println!("{:.10}", fidkit::evaluate(m, &rho, &sigma)?.value),
        (Quantity::Metric(m), None) => println!("{:.10}", metric_value(m, &rho, &sigma)?),
        (Quantity::Metric(m), Some(c)) => {
            let tau = read_state(c)?;
            let t = triangle_check(m, &rho, &sigma, &tau)?;
            println!("{:.10} {:.10} {}", t.lhs, t.rhs, t.holds);
        }
        (Quantity::Measure(m), Some(_)) => {
            return Err(Failure::Usage(format!(
                "{m} is a measure; triangle checks need a metric id"
            )));
        }
    }
    Ok(())
}

fn to_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s
}

fn verify(suite: &str, d: usize, trials: usize, seed: u64, out: Option<&Path>) -> CliResult<()> {
    if d < 2 && suite != "monotonicity" {
        return Err(Error::DimTooSmall { dim: d, min: 2 }.into());
    }
    let (passed, json) = match suite {
        "axioms" => {
            let r = suites::axiom_suite(d, trials, seed);
            (r.passed, to_pretty(&r))
        }
        "concavity" => {
            let r = suites::concavity_suite(d, trials, seed);
            (r.passed, to_pretty(&r))
        }
        "supermult" => {
            let r = suites::supermult_suite(d, d, trials, 10 * trials, seed);
            (r.passed, to_pretty(&r))
        }
        "metrics" => {
            let r = suites::metrics_suite(d, trials, seed)?;
            (r.passed, to_pretty(&r))
        }
        "kernels" => {
            let sets = trials.div_ceil(1000).max(1);
            let (r, _) = suites::kernels_suite(d, sets, trials, seed)?;
            (r.passed, to_pretty(&r))
        }
        "bounds" => {
            let r = suites::bounds_suite(d, trials, seed);
            (r.passed, to_pretty(&r))
        }
        "pinching" => {
            let r = suites::pinching_search(d, trials, seed);
            (r.passed, to_pretty(&r))
        }
        "saturation" => {
            let r = suites::saturation_suite(d, trials, seed);
            (r.passed, to_pretty(&r))
        }
        "monotonicity" => {
            let r = suites::monotonicity_report()?;
            (r.passed, to_pretty(&r))
        }
        other => return Err(Error::UnknownMeasure(other.to_string()).into()),
    };
    print!("{json}");
    if let Some(path) = out {
        write_file(path, &json)?;
    }
    eprintln!("{suite}: {}", if passed { "PASS" } else { "FAIL" });
    if passed {
        Ok(())
    } else {
        Err(Failure::Violation(format!("suite {suite} found invariant violations")))
    }
}

fn scan(d: usize, pairs: usize, seed: u64, mode: &str, saturating: usize, out: &Path) -> CliResult<()> {
    let mode: ScanMode = mode.parse()?;
    if mode == ScanMode::Saturating {
        return Err(Error::UnknownMeasure("saturating is not a sampling mode; use --saturating".into()).into());
    }
    let (summary, records) = scan_with_saturating(d, pairs, seed, mode, saturating)?;
    let file = fs::File::create(out).map_err(|source| Failure::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| Failure::Csv(format!("{}: {e}", out.display()));
    for r in &records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Failure::Io {
        path: out.to_path_buf(),
        source,
    })?;
    print!("{}", to_pretty(&summary));
    if summary.conjecture_violations > 0 {
        log::warn!(
            "CONJECTURE: D >= 1 - F_N failed on {} pairs",
            summary.conjecture_violations
        );
    }
    eprintln!(
        "conjecture violations: {}, absolute-bound violations: {}, max ratio to absolute bound: {:.10}",
        summary.conjecture_violations, summary.absolute_bound_violations, summary.max_absolute_ratio
    );
    if summary.absolute_bound_violations > 0 || summary.rank_bound_violations > 0 {
        return Err(Failure::Violation("trace-distance upper bound violated".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    measures: &[String],
    dims: Option<&[usize]>,
    pairs: usize,
    seed: u64,
    min_time: u64,
    out: &Path,
    fit_out: Option<&Path>,
) -> CliResult<()> {
    let ids = measures
        .iter()
        .map(|m| m.trim().parse::<MeasureId>())
        .collect::<Result<Vec<_>, _>>()?;
    let dims = dims.unwrap_or(&DEFAULT_DIMS);
    let records = run_bench(&ids, dims, pairs, seed, Duration::from_millis(min_time))?;
    let file = fs::File::create(out).map_err(|source| Failure::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let mut w = csv::Writer::from_writer(file);
    for r in &records {
        w.serialize(r)
            .map_err(|e| Failure::Csv(format!("{}: {e}", out.display())))?;
    }
    w.flush().map_err(|source| Failure::Io {
        path: out.to_path_buf(),
        source,
    })?;

    let fits = match fit_scaling(&records) {
        Ok(f) => f,
        Err(e @ Error::InsufficientData { .. }) => {
            log::warn!("no scaling fit: {e}");
            Vec::new()
        }
        Err(e) => return Err(e.into()),
    };
    let fit_path = fit_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| out.with_extension("fit.json"));
    write_file(&fit_path, &to_pretty(&fits))?;
    for f in &fits {
        eprintln!(
            "{}: exponent {:.3} (r^2 {:.4}, d {}..{})",
            f.measure, f.exponent, f.r_squared, f.d_min, f.d_max
        );
    }
    Ok(())
}

/// File names and states shipped as fixtures.
fn named_states() -> Vec<(&'static str, DensityMatrix)> {
    let (oz_rho, oz_sigma) = ozawa_pair();
    let (rho, sigma, tau) = qutrit_triple();
    vec![
        ("ozawa_rho.json", oz_rho),
        ("ozawa_sigma.json", oz_sigma),
        ("rho_mm3.json", rho),
        ("sigma_pure3.json", sigma),
        ("tau3.json", tau),
    ]
}

fn export(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| Failure::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for (name, state) in named_states() {
        let path = dir.join(name);
        write_file(&path, &to_json(state.matrix()))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Compute { id, a, b, c } => compute(&id, &a, &b, c.as_deref()),
        Command::Verify {
            suite,
            d,
            trials,
            seed,
            out,
        } => verify(&suite, d, trials, seed, out.as_deref()),
        Command::Scan {
            d,
            pairs,
            seed,
            mode,
            saturating,
            out,
        } => scan(d, pairs, seed, &mode, saturating, &out),
        Command::Bench {
            measures,
            dims,
            pairs,
            seed,
            min_time,
            out,
            fit_out,
        } => bench(
            &measures,
            dims.as_deref(),
            pairs,
            seed,
            min_time,
            &out,
            fit_out.as_deref(),
        ),
        Command::Export { dir } => export(&dir),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
