//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification or calibration failure, 2 input
//! error, 3 family without an explicit chart.

mod manifest;
mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{
    invariants, mean_sigma_sq, scan, second_gap_check, CatalogError, FamilyFilter, PolarizedPair,
};
use crate::numgeo::{self, embed, mean_sigma_numeric, NumericsError, DEFAULT_STEP, KAPPA};

pub use manifest::{entry_json, parse_manifest, serialize_manifest, ManifestError};
pub use output::{write_csv, write_json, write_table, OutputRecord, Verification, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "POLRIG_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "polrig",
    version,
    about = "Exact invariants and curvature checks for polarized projective manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact invariants for every entry of a JSON manifest.
    Invariants {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Enumerate catalog pairs of one dimension up to a degree bound.
    Scan {
        /// all, projective_space, hypersurface, complete_intersection, scroll, product
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_degree: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Monte Carlo check of the mean of |σ|² against the exact value.
    Verify {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 3.0)]
        tolerance_sigma: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Scalar curvature of the Fubini–Study metric on P^n against n(n+1).
    Calibrate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// Metric normalization; anything but 2 should fail.
        #[arg(long, default_value_t = KAPPA)]
        kappa: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Unsupported(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<NumericsError> for Failure {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::Unsupported(_) => Failure::Unsupported(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_INPUT;
    }
    let result = match cli.command {
        Command::Invariants { manifest, format } => cmd_invariants(&manifest, format, out),
        Command::Scan {
            family,
            n,
            max_degree,
            out: path,
            format,
        } => cmd_scan(&family, n, max_degree, path.as_deref(), format, out, err),
        Command::Verify {
            manifest,
            samples,
            seed,
            tolerance_sigma,
            format,
        } => cmd_verify(&manifest, samples, seed, tolerance_sigma, format, out),
        Command::Calibrate {
            n,
            step,
            kappa,
            format,
        } => cmd_calibrate(n, step, kappa, format, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Unsupported(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_UNSUPPORTED
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let k: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global();
    Ok(())
}

fn read_manifest(path: &Path) -> Result<Vec<PolarizedPair>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read manifest {}: {e}", path.display())))?;
    parse_manifest(&text).map_err(|e| Failure::Input(e.to_string()))
}

fn records_for(pairs: &[PolarizedPair]) -> Result<Vec<OutputRecord>, Failure> {
    pairs
        .iter()
        .map(|p| Ok(OutputRecord::new(p, &invariants(p)?)?))
        .collect()
}

fn write_records(
    records: &[OutputRecord],
    format: Format,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        Format::Table => write_table(records, out),
        Format::Json => write_json(records, out),
        Format::Csv => write_csv(records, out),
    }
}

fn cmd_invariants(path: &Path, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let pairs = read_manifest(path)?;
    let records = records_for(&pairs)?;
    write_records(&records, format, out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct GapSummary {
    checked: bool,
    interval: Option<(u32, u32)>,
    empty: Option<bool>,
    least_above_n: Option<String>,
    note: String,
}

fn gap_summary(n: u32, max_degree: u64) -> Result<GapSummary, Failure> {
    if n < 3 {
        return Ok(GapSummary {
            checked: false,
            interval: None,
            empty: None,
            least_above_n: None,
            note: "gap check skipped (requires n ≥ 3)".into(),
        });
    }
    if max_degree < n as u64 {
        return Ok(GapSummary {
            checked: false,
            interval: None,
            empty: None,
            least_above_n: None,
            note: format!("gap check skipped (requires max degree ≥ n = {n})"),
        });
    }
    let g = second_gap_check(n, max_degree)?;
    Ok(GapSummary {
        checked: true,
        interval: Some((n, 2 * n - 2)),
        empty: Some(g.holds),
        least_above_n: Some(g.min_above_n.to_string()),
        note: format!(
            "gap ({n}, {}) empty: {}; least value above {n}: {} (full catalog, d ≤ {max_degree})",
            2 * n - 2,
            g.holds,
            g.min_above_n
        ),
    })
}

fn cmd_scan(
    family: &str,
    n: u32,
    max_degree: u64,
    path: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let filter: FamilyFilter = family.parse().map_err(Failure::Input)?;
    if n == 0 {
        return Err(Failure::Input("n must be ≥ 1".into()));
    }
    if max_degree == 0 {
        return Err(Failure::Input("max-degree must be ≥ 1".into()));
    }
    let rows = scan(filter, n, max_degree)?;
    let records: Vec<OutputRecord> = rows
        .iter()
        .map(|(p, r)| OutputRecord::new(p, r))
        .collect::<Result<_, _>>()?;
    let gap = gap_summary(n, max_degree)?;

    let mut buf = Vec::new();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct ScanJson<'a> {
                family: String,
                n: u32,
                max_degree: u64,
                rows: &'a [OutputRecord],
                gap: &'a GapSummary,
            }
            write_json(
                &ScanJson {
                    family: filter.to_string(),
                    n,
                    max_degree,
                    rows: &records,
                    gap: &gap,
                },
                &mut buf,
            )?;
        }
        Format::Csv => write_csv(&records, &mut buf)?,
        Format::Table => {
            write_table(&records, &mut buf)?;
            writeln!(buf, "{}", gap.note)?;
        }
    }
    match path {
        Some(p) => {
            fs::write(p, &buf)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?;
            writeln!(out, "{} rows written to {}", records.len(), p.display())?;
            if format != Format::Table {
                writeln!(out, "{}", gap.note)?;
            }
        }
        None => {
            out.write_all(&buf)?;
            // keep machine-readable stdout clean
            if format == Format::Csv {
                writeln!(err, "{}", gap.note)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(
    path: &Path,
    samples: usize,
    seed: u64,
    tolerance_sigma: f64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if !(tolerance_sigma.is_finite() && tolerance_sigma > 0.0) {
        return Err(Failure::Input("tolerance-sigma must be positive".into()));
    }
    if samples < numgeo::MIN_SAMPLES {
        return Err(Failure::Input(format!(
            "samples must be at least {}",
            numgeo::MIN_SAMPLES
        )));
    }
    let pairs = read_manifest(path)?;
    let charts = pairs.iter().map(embed).collect::<Result<Vec<_>, _>>()?;
    let mut records = records_for(&pairs)?;
    for ((pair, chart), record) in pairs.iter().zip(&charts).zip(records.iter_mut()) {
        let exact = mean_sigma_sq(pair)?;
        let result = mean_sigma_numeric(chart, samples, seed)?;
        record.verification = Some(Verification::new(&result, &exact, tolerance_sigma));
    }
    match format {
        Format::Json => write_json(&records, out)?,
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::CRLF)
                .from_writer(&mut *out);
            w.write_record([
                "family",
                "params",
                "sigma_bar_sq_exact",
                "estimate",
                "stderr",
                "z",
                "samples",
                "seed",
                "volume_ratio",
                "volume_ratio_stderr",
                "d",
                "result",
            ])
            .map_err(std::io::Error::other)?;
            for r in &records {
                let v = r.verification.as_ref().expect("filled above");
                w.write_record([
                    r.family.clone(),
                    r.params.clone(),
                    r.sigma_bar_sq_exact.clone(),
                    v.estimate.to_string(),
                    v.stderr.to_string(),
                    v.z.to_string(),
                    v.samples.to_string(),
                    v.seed.to_string(),
                    v.volume_ratio.to_string(),
                    v.volume_ratio_stderr.to_string(),
                    r.d.to_string(),
                    if v.pass { "PASS" } else { "FAIL" }.to_string(),
                ])
                .map_err(std::io::Error::other)?;
            }
            w.flush()?;
        }
        Format::Table => {
            for r in &records {
                let v = r.verification.as_ref().expect("filled above");
                writeln!(out, "{}({})", r.family, r.params)?;
                writeln!(
                    out,
                    "  exact     {} ({:.6})",
                    r.sigma_bar_sq_exact, r.sigma_bar_sq_decimal
                )?;
                writeln!(
                    out,
                    "  estimate  {:.6} ± {:.6} (discretization {:.1e}; {} samples, seed {})",
                    v.estimate, v.stderr, v.discretization_error, v.samples, v.seed
                )?;
                writeln!(
                    out,
                    "  volume    {:.4} ± {:.4} (degree {})",
                    v.volume_ratio, v.volume_ratio_stderr, r.d
                )?;
                writeln!(out, "  z         {:+.3}", v.z)?;
                writeln!(
                    out,
                    "  {} (|z| ≤ {})",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.tolerance_sigma
                )?;
            }
        }
    }
    let all_pass = records
        .iter()
        .all(|r| r.verification.as_ref().is_some_and(|v| v.pass));
    Ok(if all_pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_calibrate(
    n: usize,
    step: f64,
    kappa: f64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if n == 0 {
        return Err(Failure::Input("n must be ≥ 1".into()));
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Failure::Input("kappa must be positive".into()));
    }
    let report = numgeo::calibrate_with_kappa(n, step, kappa)?;
    match format {
        Format::Json => write_json(&report, out)?,
        Format::Table | Format::Csv => {
            writeln!(
                out,
                "calibration on P^{n}: κ = {kappa}, step {step:e}, {} points",
                report.points
            )?;
            writeln!(out, "  target S = n(n+1) = {}", report.target)?;
            writeln!(out, "  mean S                {:.9}", report.mean_scalar)?;
            writeln!(
                out,
                "  max |S − n(n+1)|      {:.3e} at step {step:e}",
                report.max_deviation
            )?;
            writeln!(
                out,
                "  max |S − n(n+1)|      {:.3e} at step {:e}",
                report.max_deviation_half_step,
                step / 2.0
            )?;
            writeln!(
                out,
                "  convergence: error ratio {:.3} under step halving (observed order {:.2})",
                report.convergence_ratio,
                report.convergence_ratio.log2() + 0.0
            )?;
            writeln!(
                out,
                "  {} (tolerance {:.0e})",
                if report.passed { "PASS" } else { "FAIL" },
                report.tolerance
            )?;
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}
