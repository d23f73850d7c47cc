//! Monte Carlo BER engine.
//!
//! Sweeps SNR across schemes with per-trial channel regeneration (gains
//! i.i.d. `CN(0,1/P)`, layout fixed) and perfect receiver CSI. Every trial
//! derives its randomness from `(seed, scheme, SNR, trial index)` through
//! the counter-based generator, and trials are accumulated in fixed-size
//! batches with integer counters, so the output is byte-identical for any
//! worker count. SNR is `1/N₀` in dB with unit-energy symbols.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{add_awgn, apply_timedomain, random_channel, PathLayout};
use crate::detect::{detect_ml, detect_mmse};
use crate::effchan::effective_channel;
use crate::error::{AfdmError, Result};
use crate::modem::{demap_bits, demodulate, discard_cpp, map_bits, modulate};
use crate::params::{scheme_params_tuned, ChannelProfile, Constellation, ModemParams, Scheme};
use crate::rng::DetRng;

/// Trials per early-stopping batch. Accumulation is batch-synchronous: the
/// stop condition is evaluated between whole batches only, which keeps the
/// executed trial set independent of the worker count.
const BATCH: u64 = 1024;

// Substream tags for per-trial randomness.
const STREAM_GAINS: u64 = 1;
const STREAM_BITS: u64 = 2;
const STREAM_NOISE: u64 = 3;

/// Which detector a sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detector {
    Ml,
    Mmse,
}

fn default_schemes() -> Vec<Scheme> {
    vec![Scheme::Afdm]
}
fn default_constellation() -> Constellation {
    Constellation::Bpsk
}
fn default_detector() -> Detector {
    Detector::Ml
}
fn default_trials() -> u64 {
    10_000
}
fn default_seed() -> u64 {
    1
}
fn default_min_errors() -> u64 {
    200
}

/// One experiment: everything a sweep needs, JSON-(de)serializable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    pub profile: ChannelProfile,
    pub path_layout: PathLayout,
    #[serde(default = "default_constellation")]
    pub constellation: Constellation,
    #[serde(default = "default_detector")]
    pub detector: Detector,
    #[serde(default)]
    pub snr_db_grid: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_min_errors")]
    pub min_errors: u64,
}

impl ExperimentConfig {
    /// Structural validation shared by every subcommand.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(AfdmError::Config(format!("n must be >= 2, got {}", self.n)));
        }
        if self.trials < 1 {
            return Err(AfdmError::Config("trials must be >= 1".into()));
        }
        if self.min_errors < 1 {
            return Err(AfdmError::Config("min_errors must be >= 1".into()));
        }
        self.path_layout.validate(&self.profile, self.n)?;
        // CPP length defaults to l_max, which must absorb every delay.
        if self.profile.l_max >= self.n {
            return Err(AfdmError::Config(format!(
                "profile l_max = {} must be < n = {}",
                self.profile.l_max, self.n
            )));
        }
        Ok(())
    }

    /// Additional checks for BER sweeps.
    pub fn validate_for_sweep(&self) -> Result<()> {
        self.validate()?;
        if self.snr_db_grid.is_empty() {
            return Err(AfdmError::Config("snr_db_grid must be nonempty".into()));
        }
        if self.snr_db_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(AfdmError::Config(
                "snr_db_grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Modem parameters for one scheme, DAFT-OFDM tuned to the layout.
    pub fn modem_params(&self, scheme: Scheme) -> ModemParams {
        let pairs: Vec<(usize, i64)> = self
            .path_layout
            .positions()
            .iter()
            .map(|&(l, nu, _)| (l, nu.round() as i64))
            .collect();
        scheme_params_tuned(scheme, &self.profile, &pairs, self.n, self.constellation)
    }
}

/// One measured BER point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerPoint {
    pub scheme: String,
    pub snr_db: f64,
    pub trials_run: u64,
    pub bit_errors: u64,
    pub bits_total: u64,
    pub ber: f64,
    pub ci95_halfwidth: f64,
}

impl BerPoint {
    /// Wilson 95% score interval for the error probability.
    pub fn wilson_interval(errors: u64, total: u64) -> (f64, f64) {
        if total == 0 {
            return (0.0, 1.0);
        }
        let z = 1.959963984540054f64;
        let n = total as f64;
        let p = errors as f64 / n;
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        (center - half, center + half)
    }

    fn new(scheme: Scheme, snr_db: f64, trials_run: u64, bit_errors: u64, bits_total: u64) -> Self {
        let (lo, hi) = Self::wilson_interval(bit_errors, bits_total);
        Self {
            scheme: scheme.to_string(),
            snr_db,
            trials_run,
            bit_errors,
            bits_total,
            ber: bit_errors as f64 / bits_total as f64,
            ci95_halfwidth: (hi - lo) / 2.0,
        }
    }

    /// Wilson interval bounds of this point.
    pub fn ci_bounds(&self) -> (f64, f64) {
        Self::wilson_interval(self.bit_errors, self.bits_total)
    }
}

fn scheme_tag(scheme: Scheme) -> u64 {
    match scheme {
        Scheme::Afdm => 0,
        Scheme::Ocdm => 1,
        Scheme::DaftOfdm => 2,
        Scheme::Ofdm => 3,
    }
}

fn run_trial_with(
    cfg: &ExperimentConfig,
    params: &ModemParams,
    scheme: Scheme,
    snr_db: f64,
    trial_index: u64,
) -> Result<(u64, u64)> {
    let n0 = 10f64.powf(-snr_db / 10.0);
    let labels = [scheme_tag(scheme), snr_db.to_bits(), trial_index];
    let mut gains_rng = DetRng::from_parts(cfg.seed, &[STREAM_GAINS, labels[0], labels[1], labels[2]]);
    let mut bits_rng = DetRng::from_parts(cfg.seed, &[STREAM_BITS, labels[0], labels[1], labels[2]]);
    let mut noise_rng = DetRng::from_parts(cfg.seed, &[STREAM_NOISE, labels[0], labels[1], labels[2]]);

    let ch = random_channel(&cfg.profile, &cfg.path_layout, cfg.n, &mut gains_rng)?;
    let bps = cfg.constellation.bits_per_symbol();
    let bits: Vec<bool> = (0..cfg.n * bps).map(|_| bits_rng.next_bool()).collect();

    let symbols = map_bits(&bits, cfg.constellation, cfg.n)?;
    let frame = modulate(&symbols, params)?;
    let received = apply_timedomain(&frame, &ch)?;
    let noisy = add_awgn(&received, n0, &mut noise_rng)?;
    let body = discard_cpp(&noisy, params.cpp_len)?;
    let y = demodulate(&body, params)?;

    let e = effective_channel(&ch, params);
    let detected = match cfg.detector {
        Detector::Ml => detect_ml(&y, &e, cfg.constellation)?,
        Detector::Mmse => detect_mmse(&y, &e, n0, cfg.constellation)?,
    };
    let decided = demap_bits(&detected.symbols.symbols, cfg.constellation);
    let bit_errors = bits
        .iter()
        .zip(&decided)
        .filter(|(a, b)| a != b)
        .count() as u64;
    Ok((bit_errors, bits.len() as u64))
}

/// Runs one Monte Carlo trial: draw channel and bits, push them through the
/// whole chain (map, modulate, time-domain channel, AWGN, CPP removal,
/// demodulation, detection with the exact per-realization effective channel,
/// demapping) and count bit errors. Deterministic in
/// `(seed, scheme, snr_db, trial_index)`.
pub fn run_trial(
    cfg: &ExperimentConfig,
    scheme: Scheme,
    snr_db: f64,
    trial_index: u64,
) -> Result<(u64, u64)> {
    let params = cfg.modem_params(scheme);
    run_trial_with(cfg, &params, scheme, snr_db, trial_index)
}

fn sweep_point(
    cfg: &ExperimentConfig,
    params: &ModemParams,
    scheme: Scheme,
    snr_db: f64,
) -> Result<BerPoint> {
    let mut errors = 0u64;
    let mut bits = 0u64;
    let mut done = 0u64;
    while done < cfg.trials && errors < cfg.min_errors {
        let batch = BATCH.min(cfg.trials - done);
        let (e, b) = (done..done + batch)
            .into_par_iter()
            .map(|t| run_trial_with(cfg, params, scheme, snr_db, t))
            .try_reduce(
                || (0u64, 0u64),
                |a, b| Ok((a.0 + b.0, a.1 + b.1)),
            )?;
        errors += e;
        bits += b;
        done += batch;
    }
    Ok(BerPoint::new(scheme, snr_db, done, errors, bits))
}

/// Runs the configured sweep on `workers` threads (0 = machine default).
///
/// Each (scheme, SNR) point early-stops once `min_errors` bit errors have
/// accumulated, never exceeding `trials`. Identical configs produce
/// byte-identical results for any worker count.
pub fn run_sweep(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<BerPoint>> {
    cfg.validate_for_sweep()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| AfdmError::Config(format!("worker pool: {e}")))?;
    pool.install(|| {
        let mut points = Vec::new();
        for &scheme in &cfg.schemes {
            let params = cfg.modem_params(scheme);
            for &snr_db in &cfg.snr_db_grid {
                points.push(sweep_point(cfg, &params, scheme, snr_db)?);
            }
        }
        Ok(points)
    })
}

/// CSV rendering of sweep results:
/// `scheme,snr_db,trials,bit_errors,bits_total,ber,ci95`.
pub fn ber_csv(points: &[BerPoint]) -> String {
    let mut out = String::from("scheme,snr_db,trials,bit_errors,bits_total,ber,ci95\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            p.scheme, p.snr_db, p.trials_run, p.bit_errors, p.bits_total, p.ber, p.ci95_halfwidth
        ));
    }
    out
}

/// Empirical diversity slope between two SNR grid points (single-scheme
/// points): `-(log10 BER_hi - log10 BER_lo) / ((snr_hi - snr_lo)/10)`.
///
/// Both points must carry at least `min_errors` bit errors for the slope to
/// mean anything.
pub fn estimate_diversity_slope(
    points: &[BerPoint],
    snr_lo_db: f64,
    snr_hi_db: f64,
    min_errors: u64,
) -> Result<f64> {
    let find = |snr: f64| -> Result<&BerPoint> {
        let matches: Vec<&BerPoint> = points
            .iter()
            .filter(|p| (p.snr_db - snr).abs() < 1e-9)
            .collect();
        match matches.len() {
            0 => Err(AfdmError::Config(format!("no point at {snr} dB"))),
            1 => Ok(matches[0]),
            _ => Err(AfdmError::Config(format!(
                "multiple points at {snr} dB; filter to a single scheme first"
            ))),
        }
    };
    let lo = find(snr_lo_db)?;
    let hi = find(snr_hi_db)?;
    for p in [lo, hi] {
        if p.bit_errors < min_errors {
            return Err(AfdmError::InsufficientErrors {
                snr_db: p.snr_db,
                errors: p.bit_errors,
                required: min_errors,
            });
        }
    }
    Ok(-(hi.ber.log10() - lo.ber.log10()) / ((snr_hi_db - snr_lo_db) / 10.0))
}
