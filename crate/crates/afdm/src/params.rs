//! System parameterization for DAFT-based multicarrier schemes.
//!
//! The chirp rates decide everything about how channel paths land in the
//! DAFT domain:
//!
//! - AFDM sets `c1 = (2α_max + 1)/(2N)` so that paths with distinct delays
//!   or Dopplers occupy distinct positions, and `c2` to a small irrational
//!   value (here `√2/(2N²)`).
//! - OCDM is the Fresnel special case `c1 = c2 = 1/(2N)`.
//! - DAFT-OFDM uses `c2 = 0` and tunes `c1` to the delay-Doppler profile so
//!   the effective channel is as close to diagonal as possible.
//! - OFDM is `c1 = c2 = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::AfdmError;

/// Worst-case channel geometry: maximum delay (samples) and maximum integer
/// normalized Doppler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelProfile {
    /// Maximum path delay in samples.
    pub l_max: usize,
    /// Maximum integer part of the normalized Doppler shift.
    pub alpha_max: u32,
}

impl ChannelProfile {
    pub fn new(l_max: usize, alpha_max: u32) -> Self {
        Self { l_max, alpha_max }
    }
}

/// Unit-average-energy symbol alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constellation {
    /// {+1, -1}
    Bpsk,
    /// {(±1 ± j)/√2}, Gray coded.
    Qpsk,
}

impl Constellation {
    pub fn bits_per_symbol(&self) -> usize {
        match self {
            Constellation::Bpsk => 1,
            Constellation::Qpsk => 2,
        }
    }

    /// Constellation points in index order. The index is the integer value
    /// of the symbol's bits (first bit most significant); Gray labeling puts
    /// neighbors one bit apart.
    pub fn points(&self) -> &'static [Complex64] {
        const BPSK: [Complex64; 2] = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        const QPSK: [Complex64; 4] = [
            Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),   // 00
            Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),  // 01
            Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),  // 10
            Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2), // 11
        ];
        match self {
            Constellation::Bpsk => &BPSK,
            Constellation::Qpsk => &QPSK,
        }
    }

    pub fn order(&self) -> usize {
        self.points().len()
    }
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constellation::Bpsk => write!(f, "bpsk"),
            Constellation::Qpsk => write!(f, "qpsk"),
        }
    }
}

impl FromStr for Constellation {
    type Err = AfdmError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Constellation::Bpsk),
            "qpsk" => Ok(Constellation::Qpsk),
            other => Err(AfdmError::Config(format!("unknown constellation '{other}'"))),
        }
    }
}

/// Multicarrier scheme presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "afdm")]
    Afdm,
    #[serde(rename = "ocdm")]
    Ocdm,
    #[serde(rename = "daft-ofdm")]
    DaftOfdm,
    #[serde(rename = "ofdm")]
    Ofdm,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Afdm => write!(f, "afdm"),
            Scheme::Ocdm => write!(f, "ocdm"),
            Scheme::DaftOfdm => write!(f, "daft-ofdm"),
            Scheme::Ofdm => write!(f, "ofdm"),
        }
    }
}

impl FromStr for Scheme {
    type Err = AfdmError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "afdm" => Ok(Scheme::Afdm),
            "ocdm" => Ok(Scheme::Ocdm),
            "daft-ofdm" | "daftofdm" => Ok(Scheme::DaftOfdm),
            "ofdm" => Ok(Scheme::Ofdm),
            other => Err(AfdmError::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Full configuration of one modem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModemParams {
    /// Number of subcarriers / samples per symbol.
    pub n: usize,
    /// First chirp rate.
    pub c1: f64,
    /// Second chirp rate.
    pub c2: f64,
    /// Chirp-periodic prefix length L.
    pub cpp_len: usize,
    /// Active symbol alphabet.
    pub constellation: Constellation,
    /// Free-form tag identifying where the parameters came from.
    pub scheme_label: String,
}

impl ModemParams {
    pub fn daft_params(&self) -> crate::transforms::DaftParams {
        crate::transforms::DaftParams {
            n: self.n,
            c1: self.c1,
            c2: self.c2,
        }
    }
}

/// The AFDM chirp-rate rule: `c1 = (2α_max + 1)/(2N)`.
///
/// `2N·c1` is then the odd integer `2α_max + 1`, so `2N·c1·l` is an integer
/// for every integer delay, which the sparse closed form of the effective
/// channel relies on.
pub fn afdm_c1(profile: &ChannelProfile, n: usize) -> f64 {
    assert!(n >= 2);
    (2.0 * profile.alpha_max as f64 + 1.0) / (2.0 * n as f64)
}

/// Deterministic irrational-valued `c2`, fixed as `√2/(2N²)`.
///
/// Anything irrational (or rational but much smaller than `1/(2N)`) works;
/// this choice is reproducible and decays with N so it stays well below
/// `1/(2N)` for every `n >= 2`.
pub fn default_c2(n: usize) -> f64 {
    assert!(n >= 2);
    std::f64::consts::SQRT_2 / (2.0 * (n * n) as f64)
}

/// DAFT-OFDM chirp-rate tuning for a known delay-Doppler profile.
///
/// Fits the affine trend `α ≈ a + κ·l` over the `(delay, doppler)` pairs by
/// least squares and sets `2N·c1 = round(-κ)`. All paths then land on (or
/// near) the single DAFT-domain position `a`, the closest-to-diagonal
/// effective channel this scheme can reach. Pairs exactly on a line through
/// the origin collapse onto position 0.
pub fn daft_ofdm_c1(pairs: &[(usize, i64)], n: usize) -> f64 {
    assert!(n >= 2);
    if pairs.len() < 2 {
        return 0.0;
    }
    let m = pairs.len() as f64;
    let l_mean = pairs.iter().map(|&(l, _)| l as f64).sum::<f64>() / m;
    let a_mean = pairs.iter().map(|&(_, a)| a as f64).sum::<f64>() / m;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &(l, a) in pairs {
        let dl = l as f64 - l_mean;
        cov += dl * (a as f64 - a_mean);
        var += dl * dl;
    }
    if var == 0.0 {
        // Single delay tap: no slope to compensate.
        return 0.0;
    }
    let kappa = cov / var;
    (-kappa).round() / (2.0 * n as f64)
}

/// Parameter presets per scheme.
///
/// DAFT-OFDM here falls back to the profile's full symmetric delay-Doppler
/// grid, whose fitted slope is zero; when the actual path list is known, use
/// [`scheme_params_tuned`] so its `c1` tracks the channel.
pub fn scheme_params(
    scheme: Scheme,
    profile: &ChannelProfile,
    n: usize,
    constellation: Constellation,
) -> ModemParams {
    let grid: Vec<(usize, i64)> = (0..=profile.l_max)
        .flat_map(|l| {
            (-(profile.alpha_max as i64)..=profile.alpha_max as i64).map(move |a| (l, a))
        })
        .collect();
    scheme_params_tuned(scheme, profile, &grid, n, constellation)
}

/// Parameter presets per scheme with the concrete `(delay, doppler)` pairs
/// available for DAFT-OFDM tuning.
pub fn scheme_params_tuned(
    scheme: Scheme,
    profile: &ChannelProfile,
    pairs: &[(usize, i64)],
    n: usize,
    constellation: Constellation,
) -> ModemParams {
    let (c1, c2) = match scheme {
        Scheme::Afdm => (afdm_c1(profile, n), default_c2(n)),
        Scheme::Ocdm => (1.0 / (2.0 * n as f64), 1.0 / (2.0 * n as f64)),
        Scheme::DaftOfdm => (daft_ofdm_c1(pairs, n), 0.0),
        Scheme::Ofdm => (0.0, 0.0),
    };
    ModemParams {
        n,
        c1,
        c2,
        cpp_len: profile.l_max,
        constellation,
        scheme_label: scheme.to_string(),
    }
}

/// True iff the non-overlap condition `2α_max·l_max + 2α_max + l_max < N`
/// holds, i.e. modular wraparound can never make two admissible paths
/// collide in the DAFT domain.
pub fn validate_separability(profile: &ChannelProfile, n: usize) -> bool {
    let a = profile.alpha_max as usize;
    let l = profile.l_max;
    2 * a * l + 2 * a + l < n
}

/// Which waveform a guard-symbol count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardScheme {
    Afdm,
    Otfs,
}

impl FromStr for GuardScheme {
    type Err = AfdmError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "afdm" => Ok(GuardScheme::Afdm),
            "otfs" => Ok(GuardScheme::Otfs),
            other => Err(AfdmError::Config(format!("unknown guard scheme '{other}'"))),
        }
    }
}

/// Guard symbols needed around one pilot to keep it clear of data:
/// `(2l_max+2)(2α_max+1) - 2` for AFDM, `(2l_max+1)(4α_max+1) - 1` for OTFS.
pub fn guard_symbol_count(scheme: GuardScheme, profile: &ChannelProfile) -> u64 {
    let l = profile.l_max as u64;
    let a = profile.alpha_max as u64;
    match scheme {
        GuardScheme::Afdm => (2 * l + 2) * (2 * a + 1) - 2,
        GuardScheme::Otfs => (2 * l + 1) * (4 * a + 1) - 1,
    }
}
