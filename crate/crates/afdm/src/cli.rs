//! Command-line front end.
//!
//! One thin binary with five subcommands: `selftest`, `heff-inspect`,
//! `rank-analysis`, `ber-sweep`, and `guard-count`. Subcommands read the
//! JSON experiment config, apply `--set dotted.key=value` overrides (CLI
//! beats file beats defaults; unknown keys are rejected), and embed the
//! fully resolved config in their JSON outputs so results are
//! self-describing.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 config error, 3 runtime or
//! solver error.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::channel::{ChannelPath, ChannelRealization};
use crate::diversity::{
    min_rank_sweep_budgeted, min_rank_sweep_sampled, DiversityReport, DEFAULT_DELTA_BUDGET,
};
use crate::effchan::effective_channel;
use crate::error::{AfdmError, Result};
use crate::harness::{ber_csv, run_sweep, BerPoint, ExperimentConfig};
use crate::params::{guard_symbol_count, ChannelProfile, GuardScheme, Scheme};
use crate::selftest;

fn version_string() -> String {
    format!("afdm-{}", env!("CARGO_PKG_VERSION"))
}

#[derive(Parser)]
#[command(
    name = "afdm",
    version,
    about = "AFDM transceiver simulation over doubly dispersive channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the fast invariant suites and print a pass/fail table.
    Selftest {
        /// Only run suites whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Dump the effective-channel support pattern and per-path placements.
    HeffInspect {
        /// JSON experiment config (single scheme, explicit path list).
        #[arg(long)]
        config: PathBuf,
        /// Override config values, e.g. --set profile.alpha_max=3
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        /// Include the full complex matrix in the JSON output.
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Sweep codeword differences and report the diversity order.
    RankAnalysis {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Cap on exhaustive enumeration size.
        #[arg(long)]
        budget: Option<u128>,
        /// Use randomized sampling with this many draws instead of
        /// exhaustive enumeration (reported as an estimate).
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Run the Monte Carlo BER sweep and emit CSV (plus optional JSON).
    BerSweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// CSV destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write a JSON summary (CSV content plus config echo).
        #[arg(long)]
        json_output: Option<PathBuf>,
        /// Worker threads (0 = machine parallelism).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Print the pilot guard-symbol count for a waveform and profile.
    GuardCount {
        /// afdm or otfs
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        l_max: usize,
        #[arg(long)]
        alpha_max: u32,
    },
}

fn apply_override(root: &mut serde_json::Value, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| AfdmError::Config(format!("override '{spec}' is not KEY=VALUE")))?;
    let value: serde_json::Value =
        serde_json::from_str(raw).unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    let mut cursor = root;
    for (i, part) in parts.iter().enumerate() {
        let obj = cursor.as_object_mut().ok_or_else(|| {
            AfdmError::Config(format!("override '{key}': '{part}' does not address an object"))
        })?;
        if i == parts.len() - 1 {
            obj.insert(part.to_string(), value);
            break;
        }
        cursor = obj
            .entry(part.to_string())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
    }
    Ok(())
}

/// Loads a config file and applies dotted-key overrides. Unknown keys fail
/// deserialization rather than being ignored.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| AfdmError::Config(format!("reading {}: {e}", path.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| AfdmError::Config(format!("parsing {}: {e}", path.display())))?;
    for spec in overrides {
        apply_override(&mut value, spec)?;
    }
    serde_json::from_value(value).map_err(|e| AfdmError::Config(e.to_string()))
}

fn single_scheme(cfg: &ExperimentConfig) -> Result<Scheme> {
    match cfg.schemes.as_slice() {
        [one] => Ok(*one),
        other => Err(AfdmError::Config(format!(
            "this subcommand needs exactly one scheme in the config, got {}",
            other.len()
        ))),
    }
}

fn write_or_print(output: Option<&PathBuf>, content: &str) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, content)?;
            Ok(())
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

/// Channel built from the layout with unit gains where none are pinned;
/// placement structure does not depend on the gain values.
fn layout_channel(cfg: &ExperimentConfig) -> Result<ChannelRealization> {
    let paths = cfg
        .path_layout
        .positions()
        .into_iter()
        .map(|(delay, doppler, gain)| ChannelPath {
            gain: gain.unwrap_or(Complex64::new(1.0, 0.0)),
            doppler_norm: doppler,
            delay,
        })
        .collect();
    ChannelRealization::new(paths, cfg.n)
}

#[derive(Serialize)]
struct PathReport {
    delay: usize,
    doppler: f64,
    gain: [f64; 2],
    loc: Option<i64>,
    position_row0: Option<usize>,
}

#[derive(Serialize)]
struct HeffReport {
    version: String,
    config: ExperimentConfig,
    scheme: String,
    c1: f64,
    c2: f64,
    paths: Vec<PathReport>,
    support: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

fn cmd_heff_inspect(
    cfg: ExperimentConfig,
    output: Option<PathBuf>,
    format: OutputFormat,
    dump_matrix: bool,
) -> Result<()> {
    cfg.validate()?;
    let scheme = single_scheme(&cfg)?;
    let params = cfg.modem_params(scheme);
    let ch = layout_channel(&cfg)?;
    let e = effective_channel(&ch, &params);
    match format {
        OutputFormat::Json => {
            let report = HeffReport {
                version: version_string(),
                scheme: scheme.to_string(),
                c1: params.c1,
                c2: params.c2,
                paths: e
                    .per_path
                    .iter()
                    .map(|pl| PathReport {
                        delay: pl.path.delay,
                        doppler: pl.path.doppler_norm,
                        gain: [pl.path.gain.re, pl.path.gain.im],
                        loc: pl.loc,
                        position_row0: pl.position_row0,
                    })
                    .collect(),
                support: e.support(),
                matrix: dump_matrix.then(|| {
                    (0..e.n())
                        .map(|r| {
                            (0..e.n())
                                .map(|c| [e.h_eff[(r, c)].re, e.h_eff[(r, c)].im])
                                .collect()
                        })
                        .collect()
                }),
                config: cfg,
            };
            write_or_print(output.as_ref(), &serde_json::to_string_pretty(&report).unwrap())
        }
        OutputFormat::Csv => {
            let mut csv = String::from("row,col,re,im\n");
            for (row, cols) in e.support().iter().enumerate() {
                for &col in cols {
                    let z = e.h_eff[(row, col)];
                    csv.push_str(&format!("{row},{col},{},{}\n", z.re, z.im));
                }
            }
            write_or_print(output.as_ref(), &csv)
        }
    }
}

#[derive(Serialize)]
struct RankReport {
    version: String,
    config: ExperimentConfig,
    scheme: String,
    n: usize,
    profile: ChannelProfile,
    p: usize,
    min_rank: usize,
    full_diversity: bool,
    mode: crate::diversity::SweepMode,
    rank_histogram: BTreeMap<usize, u64>,
    arg_min_delta: Vec<[f64; 2]>,
    min_rank_smallest_sv: f64,
}

fn cmd_rank_analysis(
    cfg: ExperimentConfig,
    output: Option<PathBuf>,
    budget: Option<u128>,
    samples: Option<u64>,
) -> Result<()> {
    cfg.validate()?;
    let scheme = single_scheme(&cfg)?;
    let params = cfg.modem_params(scheme);
    let ch = layout_channel(&cfg)?;
    let report: DiversityReport = match samples {
        Some(s) => min_rank_sweep_sampled(&ch, &params, cfg.constellation, s, cfg.seed)?,
        None => min_rank_sweep_budgeted(
            &ch,
            &params,
            cfg.constellation,
            budget.unwrap_or(DEFAULT_DELTA_BUDGET),
        )?,
    };
    let out = RankReport {
        version: version_string(),
        scheme: scheme.to_string(),
        n: cfg.n,
        profile: cfg.profile,
        p: report.p,
        min_rank: report.min_rank,
        full_diversity: report.full_diversity,
        mode: report.mode,
        rank_histogram: report.rank_histogram,
        arg_min_delta: report
            .arg_min_delta
            .iter()
            .map(|z| [z.re, z.im])
            .collect(),
        min_rank_smallest_sv: report.min_rank_smallest_sv,
        config: cfg,
    };
    write_or_print(output.as_ref(), &serde_json::to_string_pretty(&out).unwrap())
}

#[derive(Serialize)]
struct SweepSummary {
    version: String,
    config: ExperimentConfig,
    points: Vec<BerPoint>,
}

fn cmd_ber_sweep(
    cfg: ExperimentConfig,
    output: Option<PathBuf>,
    json_output: Option<PathBuf>,
    workers: usize,
) -> Result<()> {
    let points = run_sweep(&cfg, workers)?;
    let csv = ber_csv(&points);
    match &output {
        Some(path) => fs::write(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = json_output {
        let summary = SweepSummary {
            version: version_string(),
            config: cfg,
            points,
        };
        fs::write(path, serde_json::to_string_pretty(&summary).unwrap())?;
    }
    Ok(())
}

fn cmd_selftest(filter: Option<&str>) -> i32 {
    let results = selftest::run(filter);
    if results.is_empty() {
        eprintln!("no selftest suite matches the filter");
        return 1;
    }
    let mut all_ok = true;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {:24} {}", r.name, r.detail);
        all_ok &= r.passed;
    }
    if all_ok {
        0
    } else {
        1
    }
}

fn exit_code(err: &AfdmError) -> i32 {
    match err {
        AfdmError::Config(_) => 2,
        _ => 3,
    }
}

fn dispatch(cli: Cli) -> i32 {
    let outcome: Result<()> = match cli.command {
        Command::Selftest { filter } => return cmd_selftest(filter.as_deref()),
        Command::HeffInspect {
            config,
            overrides,
            output,
            format,
            dump_matrix,
        } => load_config(&config, &overrides)
            .and_then(|cfg| cmd_heff_inspect(cfg, output, format, dump_matrix)),
        Command::RankAnalysis {
            config,
            overrides,
            output,
            budget,
            samples,
        } => load_config(&config, &overrides)
            .and_then(|cfg| cmd_rank_analysis(cfg, output, budget, samples)),
        Command::BerSweep {
            config,
            overrides,
            output,
            json_output,
            workers,
        } => load_config(&config, &overrides)
            .and_then(|cfg| cmd_ber_sweep(cfg, output, json_output, workers)),
        Command::GuardCount {
            scheme,
            l_max,
            alpha_max,
        } => scheme.parse::<GuardScheme>().map(|s| {
            println!(
                "{}",
                guard_symbol_count(s, &ChannelProfile::new(l_max, alpha_max))
            );
        }),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `std::env::args` and runs the requested subcommand, returning the
/// process exit code.
pub fn main() -> i32 {
    dispatch(Cli::parse())
}

/// Same as [`main`] but on explicit arguments; used by integration tests.
pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli),
        Err(e) => {
            eprint!("{e}");
            2
        }
    }
}
