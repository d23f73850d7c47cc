//! Doubly dispersive (linear time-varying) channel simulation.
//!
//! Two interchangeable formulations are provided and tested against each
//! other:
//!
//! - sample-domain convolution with a per-path Doppler phasor,
//!   `r_n = Σ_i h_i e^{-j2πf_i n} s_{n-l_i}`, acting on the whole frame
//!   (prefix plus body, with time index 0 at the first body sample);
//! - the N×N matrix model `H = Σ_i h_i Γ_i Δ_i Π^{l_i}` acting on the body
//!   alone after CPP removal, where `Π` is the forward cyclic shift, `Δ_i =
//!   diag(e^{-j2πf_i n})` and `Γ_i` the prefix phase correction.
//!
//! Whenever `2Nc1` is an integer and N is even, every `Γ_i` collapses to the
//! identity; the builder detects that case and emits exact ±1 factors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{AfdmError, Result};
use crate::modem::Frame;
use crate::params::ChannelProfile;
use crate::rng::DetRng;
use crate::{CMatrix, CVector};

/// One propagation path: complex gain, normalized Doppler `ν = N·f`, and
/// integer delay in samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPath {
    pub gain: Complex64,
    /// Doppler shift normalized to the subcarrier spacing (integer part plus
    /// an optional fractional part).
    pub doppler_norm: f64,
    /// Delay in samples.
    pub delay: usize,
}

impl ChannelPath {
    /// Doppler in digital frequency, `f = ν/N`.
    pub fn digital_freq(&self, n: usize) -> f64 {
        self.doppler_norm / n as f64
    }
}

/// A set of paths for a system of size N.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub paths: Vec<ChannelPath>,
    pub n: usize,
}

impl ChannelRealization {
    /// Validates delays and rejects duplicate (delay, Doppler) pairs, which
    /// would silently merge two nominal paths into one.
    pub fn new(paths: Vec<ChannelPath>, n: usize) -> Result<Self> {
        if paths.is_empty() {
            return Err(AfdmError::Config("channel needs at least one path".into()));
        }
        for (i, p) in paths.iter().enumerate() {
            if p.delay >= n {
                return Err(AfdmError::Config(format!(
                    "path {i} delay {} must be < n = {n}",
                    p.delay
                )));
            }
            for q in &paths[..i] {
                if q.delay == p.delay && q.doppler_norm == p.doppler_norm {
                    return Err(AfdmError::DuplicatePath {
                        delay: p.delay,
                        doppler: p.doppler_norm,
                    });
                }
            }
        }
        Ok(Self { paths, n })
    }

    pub fn num_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn max_delay(&self) -> usize {
        self.paths.iter().map(|p| p.delay).max().unwrap_or(0)
    }

    /// `(delay, rounded Doppler)` pairs, e.g. for DAFT-OFDM tuning.
    pub fn integer_pairs(&self) -> Vec<(usize, i64)> {
        self.paths
            .iter()
            .map(|p| (p.delay, p.doppler_norm.round() as i64))
            .collect()
    }
}

/// One path position in a layout: fixed `(delay, doppler)`, optionally a
/// fixed complex gain `[re, im]`. Paths without a fixed gain get an i.i.d.
/// `CN(0, 1/P)` draw per realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub delay: usize,
    pub doppler: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain: Option<[f64; 2]>,
}

/// Where the paths of a channel sit: an explicit list, or the full grid of
/// every listed delay carrying every listed Doppler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathLayout {
    Explicit(Vec<PathSpec>),
    Grid { delays: Vec<usize>, dopplers: Vec<i64> },
}

impl PathLayout {
    /// Expands the layout to `(delay, doppler, fixed gain)` triples.
    pub fn positions(&self) -> Vec<(usize, f64, Option<Complex64>)> {
        match self {
            PathLayout::Explicit(paths) => paths
                .iter()
                .map(|p| {
                    (
                        p.delay,
                        p.doppler,
                        p.gain.map(|g| Complex64::new(g[0], g[1])),
                    )
                })
                .collect(),
            PathLayout::Grid { delays, dopplers } => delays
                .iter()
                .flat_map(|&l| dopplers.iter().map(move |&a| (l, a as f64, None)))
                .collect(),
        }
    }

    pub fn num_paths(&self) -> usize {
        self.positions().len()
    }

    /// Checks the layout against a profile and system size.
    pub fn validate(&self, profile: &ChannelProfile, n: usize) -> Result<()> {
        let positions = self.positions();
        if positions.is_empty() {
            return Err(AfdmError::Config("path layout is empty".into()));
        }
        for &(delay, doppler, _) in &positions {
            if delay >= n {
                return Err(AfdmError::Config(format!(
                    "layout delay {delay} must be < n = {n}"
                )));
            }
            if delay > profile.l_max {
                return Err(AfdmError::Config(format!(
                    "layout delay {delay} exceeds profile l_max = {}",
                    profile.l_max
                )));
            }
            if doppler.abs() > profile.alpha_max as f64 + 0.5 {
                return Err(AfdmError::Config(format!(
                    "layout doppler {doppler} exceeds profile alpha_max = {} (+0.5 fractional)",
                    profile.alpha_max
                )));
            }
        }
        Ok(())
    }
}

/// Draws a channel realization: layout-fixed positions, gains i.i.d.
/// `CN(0, 1/P)` unless pinned by the layout.
pub fn random_channel(
    profile: &ChannelProfile,
    layout: &PathLayout,
    n: usize,
    rng: &mut DetRng,
) -> Result<ChannelRealization> {
    layout.validate(profile, n)?;
    let positions = layout.positions();
    let p = positions.len();
    let paths = positions
        .into_iter()
        .map(|(delay, doppler, gain)| ChannelPath {
            gain: gain.unwrap_or_else(|| rng.next_complex_gaussian(1.0 / p as f64)),
            doppler_norm: doppler,
            delay,
        })
        .collect();
    ChannelRealization::new(paths, n)
}

/// Applies the channel in the sample domain to a whole frame.
///
/// The output covers time indices n = -L..N-1 (prefix first). Taps reaching
/// before the prefix would need unknown samples, so every path delay must be
/// at most the prefix length.
pub fn apply_timedomain(frame: &Frame, ch: &ChannelRealization) -> Result<CVector> {
    let n = frame.body.len();
    let l = frame.prefix.len();
    for p in &ch.paths {
        if p.delay > l {
            return Err(AfdmError::DelayExceedsPrefix {
                delay: p.delay,
                prefix_len: l,
            });
        }
    }
    // s at time index m (m = 0 at the first body sample)
    let sample = |m: i64| -> Complex64 {
        if m >= 0 {
            frame.body[m as usize]
        } else if m >= -(l as i64) {
            frame.prefix[(m + l as i64) as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let mut out = CVector::zeros(l + n);
    for path in &ch.paths {
        let f = path.digital_freq(n);
        for k in 0..l + n {
            let t = k as i64 - l as i64;
            let phasor = Complex64::cis(-TAU * f * t as f64);
            out[k] += path.gain * phasor * sample(t - path.delay as i64);
        }
    }
    Ok(out)
}

/// `2Nc1` as an integer when it is one (within 1e-9), else `None`.
pub fn integral_two_nc1(c1: f64, n: usize) -> Option<i64> {
    let v = 2.0 * n as f64 * c1;
    let r = v.round();
    if (v - r).abs() < 1e-9 && r.abs() < 9e15 {
        Some(r as i64)
    } else {
        None
    }
}

/// Prefix phase-correction factor `Γ_i(r)`: `exp(-j2πc1(N² - 2N(l-r)))` for
/// r < l, else 1. When `2Nc1` is an integer the factor is exactly ±1 (and
/// exactly 1 for even N).
fn gamma_factor(c1: f64, n: usize, delay: usize, row: usize) -> Complex64 {
    if row >= delay {
        return Complex64::new(1.0, 0.0);
    }
    if let Some(k) = integral_two_nc1(c1, n) {
        // c1(N² - 2N(l-r)) = k(N - 2(l-r))/2
        let m = k * (n as i64 - 2 * (delay as i64 - row as i64));
        if m % 2 == 0 {
            return Complex64::new(1.0, 0.0);
        }
        return Complex64::new(-1.0, 0.0);
    }
    let nn = n as f64;
    Complex64::cis(-TAU * c1 * (nn * nn - 2.0 * nn * (delay as f64 - row as f64)))
}

/// Dense matrix model `H = Σ_i h_i Γ_i Δ_i Π^{l_i}` for the body samples.
///
/// Row r of path i has its single entry at column `(r - l_i) mod N`, valued
/// `h_i Γ_i(r) e^{-j2πf_i r}`.
pub fn channel_matrix(ch: &ChannelRealization, c1: f64) -> CMatrix {
    let n = ch.n;
    let mut h = CMatrix::zeros(n, n);
    for path in &ch.paths {
        let f = path.digital_freq(n);
        for r in 0..n {
            let col = (r + n - path.delay % n) % n;
            let v = path.gain * gamma_factor(c1, n, path.delay, r) * Complex64::cis(-TAU * f * r as f64);
            h[(r, col)] += v;
        }
    }
    h
}

/// Adds i.i.d. circularly symmetric complex Gaussian noise with total
/// variance `n0` per sample.
pub fn add_awgn(v: &CVector, n0: f64, rng: &mut DetRng) -> Result<CVector> {
    if n0 <= 0.0 || !n0.is_finite() {
        return Err(AfdmError::NonPositiveNoise(n0));
    }
    Ok(CVector::from_fn(v.len(), |i, _| {
        v[i] + rng.next_complex_gaussian(n0)
    }))
}
