//! Effective channel in the DAFT domain.
//!
//! Conjugating the time-domain channel by the transform, `H_eff = A H Aᴴ`,
//! turns each path into a (phased) shift: with integer Doppler `α_i` and
//! integral `2Nc1·l_i`, the gain-free per-path matrix `H_i` has exactly one
//! nonzero per row, in row p at column `(p + loc_i) mod N` with
//!
//! ```text
//! loc_i = α_i + 2Nc1·l_i,
//! H_i(p, q) = exp(j·2π/N·(N·c1·l_i² - q·l_i + N·c2·(q² - p²))).
//! ```
//!
//! Under the AFDM `c1` rule and the non-overlap condition, distinct paths
//! occupy distinct positions, so the delay-Doppler profile can be read back
//! off any row; [`recover_profile`] does exactly that. For fractional
//! Doppler the single nonzero smears into a Dirichlet kernel, handled by
//! [`heff_general_row`].

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::TAU;

use crate::channel::{channel_matrix, integral_two_nc1, ChannelPath, ChannelRealization};
use crate::error::{AfdmError, Result};
use crate::params::{validate_separability, ChannelProfile, ModemParams};
use crate::transforms::{daft, daft_matrix, idaft};
use crate::{CMatrix, CVector};

/// Entries whose modulus falls below this fraction of the row maximum are
/// treated as structural zeros (conjugation noise sits around 1e-10).
pub const STRUCTURAL_THRESHOLD_REL: f64 = 1e-6;

/// DAFT-domain placement of one path. `loc` is kept pre-modulo (the
/// non-overlap ranges are stated that way); `position_row0` is the wrapped
/// column of row 0. Both are `None` when `2Nc1·l` is not an integer.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPlacement {
    pub path: ChannelPath,
    pub loc: Option<i64>,
    pub position_row0: Option<usize>,
}

/// The effective channel matrix plus per-path placement metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannel {
    pub h_eff: CMatrix,
    pub per_path: Vec<PathPlacement>,
}

impl EffectiveChannel {
    pub fn n(&self) -> usize {
        self.h_eff.nrows()
    }

    /// Column indices per row whose modulus exceeds
    /// [`STRUCTURAL_THRESHOLD_REL`] times the row maximum.
    pub fn support(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        (0..n)
            .map(|r| {
                let row_max = (0..n)
                    .map(|c| self.h_eff[(r, c)].norm())
                    .fold(0.0, f64::max);
                let thresh = STRUCTURAL_THRESHOLD_REL * row_max;
                (0..n)
                    .filter(|&c| self.h_eff[(r, c)].norm() > thresh)
                    .collect()
            })
            .collect()
    }
}

/// DAFT-domain placement `(loc, row-0 column)` of a path, when `2Nc1·l` is
/// integral: `loc = round(ν) + 2Nc1·l`, column `loc mod N`.
pub fn integral_placement(path: &ChannelPath, p: &ModemParams) -> Option<(i64, usize)> {
    let v = 2.0 * p.n as f64 * p.c1 * path.delay as f64;
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        let loc = path.doppler_norm.round() as i64 + r as i64;
        let pos = loc.rem_euclid(p.n as i64) as usize;
        Some((loc, pos))
    } else {
        None
    }
}

fn placements(ch: &ChannelRealization, p: &ModemParams) -> Vec<PathPlacement> {
    ch.paths
        .iter()
        .map(|path| {
            let placement = integral_placement(path, p);
            PathPlacement {
                path: *path,
                loc: placement.map(|(loc, _)| loc),
                position_row0: placement.map(|(_, pos)| pos),
            }
        })
        .collect()
}

/// Effective channel by numeric conjugation, `A H Aᴴ`. Works for any
/// Doppler, fractional included.
pub fn build_heff_matrix(ch: &ChannelRealization, p: &ModemParams) -> EffectiveChannel {
    let a = daft_matrix(&p.daft_params());
    let h = channel_matrix(ch, p.c1);
    EffectiveChannel {
        h_eff: &a * h * a.adjoint(),
        per_path: placements(ch, p),
    }
}

fn require_integral(ch: &ChannelRealization, p: &ModemParams) -> Result<()> {
    for path in &ch.paths {
        let alpha = path.doppler_norm.round();
        if (path.doppler_norm - alpha).abs() > 1e-9 {
            return Err(AfdmError::ClosedFormNotApplicable {
                reason: format!("fractional Doppler {}", path.doppler_norm),
            });
        }
        let v = 2.0 * p.n as f64 * p.c1 * path.delay as f64;
        if (v - v.round()).abs() > 1e-9 {
            return Err(AfdmError::ClosedFormNotApplicable {
                reason: format!("2*N*c1*l = {v} is not an integer for delay {}", path.delay),
            });
        }
    }
    Ok(())
}

/// Per-path sparse phase, `H_i(p, (p+loc)_N)` without the gain.
fn closed_form_phase(p: &ModemParams, delay: usize, row: usize, col: usize) -> Complex64 {
    let n = p.n as f64;
    let l = delay as f64;
    let q = col as f64;
    let pp = row as f64;
    Complex64::cis(TAU / n * (n * p.c1 * l * l - q * l + n * p.c2 * (q * q - pp * pp)))
}

/// Effective channel assembled entry-by-entry from the sparse closed form,
/// with no matrix multiplication. Requires integer Doppler on every path and
/// integral `2Nc1·l_i`; otherwise errors, directing the caller to
/// [`build_heff_matrix`].
pub fn heff_closed_form(ch: &ChannelRealization, p: &ModemParams) -> Result<EffectiveChannel> {
    require_integral(ch, p)?;
    let n = p.n;
    let mut h_eff = CMatrix::zeros(n, n);
    let per_path = placements(ch, p);
    for pl in &per_path {
        let loc = pl.loc.expect("integrality checked above");
        for row in 0..n {
            let col = (row as i64 + loc).rem_euclid(n as i64) as usize;
            h_eff[(row, col)] += pl.path.gain * closed_form_phase(p, pl.path.delay, row, col);
        }
    }
    Ok(EffectiveChannel { h_eff, per_path })
}

/// Builds the effective channel via the closed form when admissible, else by
/// conjugation.
pub fn effective_channel(ch: &ChannelRealization, p: &ModemParams) -> EffectiveChannel {
    heff_closed_form(ch, p).unwrap_or_else(|_| build_heff_matrix(ch, p))
}

/// Geometric sum `Σ_{t=0}^{N-1} exp(-j·2π/N·g·t)` in closed form: N when g
/// is a multiple of N, else the Dirichlet ratio.
fn geometric_sum(g: f64, n: usize) -> Complex64 {
    let g_mod = g.rem_euclid(n as f64);
    if g_mod.min(n as f64 - g_mod) < 1e-9 {
        return Complex64::new(n as f64, 0.0);
    }
    let num = Complex64::new(1.0, 0.0) - Complex64::cis(-TAU * g);
    let den = Complex64::new(1.0, 0.0) - Complex64::cis(-TAU * g / n as f64);
    num / den
}

/// One row of the effective channel from the general (fractional-Doppler)
/// expression. Each entry costs O(1) via the analytic geometric-sum ratio.
pub fn heff_general_row(ch: &ChannelRealization, p: &ModemParams, row: usize) -> CVector {
    let n = p.n;
    let mut out = CVector::zeros(n);
    for path in &ch.paths {
        let shift = path.doppler_norm + 2.0 * n as f64 * p.c1 * path.delay as f64;
        for col in 0..n {
            let g = row as f64 - col as f64 + shift;
            let phase = closed_form_phase(p, path.delay, row, col);
            out[col] += path.gain * phase * geometric_sum(g, n) / n as f64;
        }
    }
    out
}

/// Reads the delay-Doppler profile back off row 0 of the effective channel.
///
/// Requires AFDM parameters (`2Nc1 = 2α_max + 1`) and the non-overlap
/// condition, under which `position = (α + (2α_max+1)·l) mod N` is injective
/// over the admissible grid. Returns `(delay, doppler, gain estimate)`
/// sorted by `(delay, doppler)`; the gain estimate is the row-0 entry
/// de-rotated by the known closed-form phase.
pub fn recover_profile(
    e: &EffectiveChannel,
    p: &ModemParams,
    profile: &ChannelProfile,
) -> Result<Vec<(usize, i64, Complex64)>> {
    let n = e.n();
    if !validate_separability(profile, n) {
        let a = profile.alpha_max as usize;
        let l = profile.l_max;
        return Err(AfdmError::SeparabilityViolated {
            lhs: 2 * a * l + 2 * a + l,
            n,
        });
    }
    let stride = 2 * profile.alpha_max as i64 + 1;
    match integral_two_nc1(p.c1, n) {
        Some(k) if k == stride => {}
        _ => {
            return Err(AfdmError::Config(format!(
                "recover_profile needs the AFDM c1 rule (2Nc1 = {stride}), got 2Nc1 = {}",
                2.0 * n as f64 * p.c1
            )))
        }
    }

    // Placement table over the admissible grid; injective by separability.
    let mut table: HashMap<usize, (usize, i64)> = HashMap::new();
    for l in 0..=profile.l_max {
        for alpha in -(profile.alpha_max as i64)..=profile.alpha_max as i64 {
            let pos = (alpha + stride * l as i64).rem_euclid(n as i64) as usize;
            if table.insert(pos, (l, alpha)).is_some() {
                return Err(AfdmError::AmbiguousInversion { position: pos });
            }
        }
    }

    let row_max = (0..n).map(|c| e.h_eff[(0, c)].norm()).fold(0.0, f64::max);
    if row_max == 0.0 {
        return Err(AfdmError::NoSupportFound);
    }
    let thresh = STRUCTURAL_THRESHOLD_REL * row_max;
    let mut recovered = Vec::new();
    for col in 0..n {
        let entry = e.h_eff[(0, col)];
        if entry.norm() <= thresh {
            continue;
        }
        let &(l, alpha) = table
            .get(&col)
            .ok_or(AfdmError::AmbiguousInversion { position: col })?;
        let gain = entry * closed_form_phase(p, l, 0, col).conj();
        recovered.push((l, alpha, gain));
    }
    if recovered.is_empty() {
        return Err(AfdmError::NoSupportFound);
    }
    recovered.sort_by_key(|&(l, alpha, _)| (l, alpha));
    Ok(recovered)
}

/// Applies the gain-free path operator `H_i` to a vector: sparse closed form
/// when admissible, else exact conjugation (`daft ∘ (Γ Δ Π^l) ∘ idaft`).
pub fn apply_path_gain_free(
    delay: usize,
    doppler_norm: f64,
    p: &ModemParams,
    x: &CVector,
) -> Result<CVector> {
    let n = p.n;
    if x.len() != n {
        return Err(AfdmError::DimensionMismatch {
            context: "apply_path_gain_free",
            expected: n,
            actual: x.len(),
        });
    }
    let v = 2.0 * n as f64 * p.c1 * delay as f64;
    let alpha = doppler_norm.round();
    if (v - v.round()).abs() < 1e-9 && (doppler_norm - alpha).abs() < 1e-9 {
        let loc = alpha as i64 + v.round() as i64;
        let out = CVector::from_fn(n, |row, _| {
            let col = (row as i64 + loc).rem_euclid(n as i64) as usize;
            closed_form_phase(p, delay, row, col) * x[col]
        });
        return Ok(out);
    }
    // General route: conjugate the time-domain factor by the transform.
    let dp = p.daft_params();
    let t = idaft(x, &dp)?;
    let unit = ChannelPath {
        gain: Complex64::new(1.0, 0.0),
        doppler_norm,
        delay,
    };
    let ch = ChannelRealization::new(vec![unit], n)?;
    let shifted = channel_matrix(&ch, p.c1) * t;
    daft(&shifted, &dp)
}
