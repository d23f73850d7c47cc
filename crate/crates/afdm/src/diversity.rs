//! Diversity-order analysis.
//!
//! Writing `y = Φ(x)·h + w` with `Φ(x) = [H₁x | … | H_Px]` (gain-free
//! per-path matrices), the achievable diversity order is the minimum rank of
//! `Φ(δ)` over all nonzero codeword differences `δ = x_m - x_n`. Full
//! diversity means that minimum equals the number of paths P.
//!
//! The sweep enumerates the difference set exhaustively when it fits the
//! budget (δ and -δ have equal rank, so only one of each pair is evaluated)
//! and otherwise samples it, clearly labeled as an estimate.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::channel::ChannelRealization;
use crate::effchan::{apply_path_gain_free, integral_placement};
use crate::error::{AfdmError, Result};
use crate::params::{Constellation, ModemParams};
use crate::rng::DetRng;
use crate::{CMatrix, CVector};

/// Default cap on the number of difference vectors enumerated exhaustively
/// (3^12 for BPSK at N = 12, 9^6 for QPSK at N = 6 both fit).
pub const DEFAULT_DELTA_BUDGET: u128 = 1_000_000;

/// How a diversity report was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepMode {
    /// Every admissible difference vector was evaluated (proof-grade).
    #[serde(rename = "exhaustive")]
    Exhaustive,
    /// A random subset was evaluated (lower-confidence estimate).
    #[serde(rename = "estimate")]
    Sampled,
}

/// Result of a rank sweep over the difference set.
#[derive(Debug, Clone)]
pub struct DiversityReport {
    /// Minimum numerical rank of Φ(δ) over the evaluated δ.
    pub min_rank: usize,
    /// Number of channel paths P.
    pub p: usize,
    /// A δ achieving the minimum (the enumeration-first one).
    pub arg_min_delta: CVector,
    /// rank -> count over evaluated δ (one representative per ±δ pair when
    /// exhaustive).
    pub rank_histogram: BTreeMap<usize, u64>,
    /// True iff `min_rank == P`.
    pub full_diversity: bool,
    /// Smallest retained singular value at the arg-min δ, for auditing
    /// borderline rank decisions.
    pub min_rank_smallest_sv: f64,
    /// Exhaustive sweep or sampled estimate.
    pub mode: SweepMode,
}

/// The N×P matrix `Φ(δ) = [H₁δ | … | H_Pδ]` built from the gain-free
/// per-path operators.
pub fn build_phi(delta: &CVector, ch: &ChannelRealization, p: &ModemParams) -> Result<CMatrix> {
    if delta.len() != p.n {
        return Err(AfdmError::DimensionMismatch {
            context: "build_phi",
            expected: p.n,
            actual: delta.len(),
        });
    }
    let mut phi = CMatrix::zeros(p.n, ch.num_paths());
    for (i, path) in ch.paths.iter().enumerate() {
        let col = apply_path_gain_free(path.delay, path.doppler_norm, p, delta)?;
        phi.set_column(i, &col);
    }
    Ok(phi)
}

/// Numerical rank: singular values above `max(rows, cols)·ε·σ_max`, plus the
/// smallest retained value.
pub fn numerical_rank(phi: &CMatrix) -> (usize, f64) {
    let svd = phi.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let s_max = sv.first().copied().unwrap_or(0.0);
    let tol = phi.nrows().max(phi.ncols()) as f64 * f64::EPSILON * s_max;
    let retained: Vec<f64> = sv.into_iter().filter(|&s| s > tol).collect();
    let smallest = retained.last().copied().unwrap_or(0.0);
    (retained.len(), smallest)
}

/// Per-coordinate difference values for a constellation, zero first. Entries
/// whose index is in the first half of `canonical` are the kept
/// representatives of each ±pair.
fn difference_values(c: Constellation) -> (Vec<Complex64>, Vec<bool>) {
    match c {
        Constellation::Bpsk => {
            let values = vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(-2.0, 0.0),
            ];
            (values, vec![false, true, false])
        }
        Constellation::Qpsk => {
            let s = std::f64::consts::SQRT_2;
            let values = vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(0.0, s),
                Complex64::new(0.0, -s),
                Complex64::new(s, s),
                Complex64::new(-s, -s),
                Complex64::new(s, -s),
                Complex64::new(-s, s),
            ];
            (
                values,
                vec![false, true, false, true, false, true, false, true, false],
            )
        }
    }
}

fn decode_delta(index: u128, values: &[Complex64], n: usize) -> CVector {
    let v = values.len() as u128;
    let mut idx = index;
    CVector::from_fn(n, |_, _| {
        let d = (idx % v) as usize;
        idx /= v;
        values[d]
    })
}

/// First nonzero digit, if any, scanning coordinate 0 upward.
fn first_nonzero_digit(index: u128, v: u128, n: usize) -> Option<usize> {
    let mut idx = index;
    for _ in 0..n {
        let d = (idx % v) as usize;
        if d != 0 {
            return Some(d);
        }
        idx /= v;
    }
    None
}

struct SweepAccumulator {
    min_rank: usize,
    arg_min_index: u128,
    smallest_sv: f64,
    histogram: BTreeMap<usize, u64>,
}

impl SweepAccumulator {
    fn new() -> Self {
        Self {
            min_rank: usize::MAX,
            arg_min_index: u128::MAX,
            smallest_sv: f64::NAN,
            histogram: BTreeMap::new(),
        }
    }

    fn record(&mut self, index: u128, rank: usize, smallest_sv: f64) {
        *self.histogram.entry(rank).or_insert(0) += 1;
        if rank < self.min_rank || (rank == self.min_rank && index < self.arg_min_index) {
            self.min_rank = rank;
            self.arg_min_index = index;
            self.smallest_sv = smallest_sv;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (rank, count) in other.histogram {
            *self.histogram.entry(rank).or_insert(0) += count;
        }
        if other.min_rank < self.min_rank
            || (other.min_rank == self.min_rank && other.arg_min_index < self.arg_min_index)
        {
            self.min_rank = other.min_rank;
            self.arg_min_index = other.arg_min_index;
            self.smallest_sv = other.smallest_sv;
        }
        self
    }
}

/// Exhaustive rank sweep over the difference set with the default budget.
pub fn min_rank_sweep(
    ch: &ChannelRealization,
    p: &ModemParams,
    constellation: Constellation,
) -> Result<DiversityReport> {
    min_rank_sweep_budgeted(ch, p, constellation, DEFAULT_DELTA_BUDGET)
}

/// Exhaustive rank sweep over every nonzero codeword difference.
///
/// Evaluates one representative per ±δ pair (equal ranks). Errors with
/// [`AfdmError::BudgetExceeded`] when the difference set is too large;
/// [`min_rank_sweep_sampled`] covers that regime.
pub fn min_rank_sweep_budgeted(
    ch: &ChannelRealization,
    p: &ModemParams,
    constellation: Constellation,
    budget: u128,
) -> Result<DiversityReport> {
    let n = p.n;
    let (values, canonical) = difference_values(constellation);
    let v = values.len() as u128;
    let total = v
        .checked_pow(n as u32)
        .ok_or(AfdmError::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    if total > budget {
        return Err(AfdmError::BudgetExceeded {
            required: total,
            budget,
        });
    }

    const CHUNK: u128 = 8192;
    let num_chunks = total.div_ceil(CHUNK);
    let acc = (0..num_chunks as u64)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk as u128 * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut local = SweepAccumulator::new();
            for index in start..end {
                let first = match first_nonzero_digit(index, v, n) {
                    None => continue, // δ = 0 excluded
                    Some(d) => d,
                };
                if !canonical[first] {
                    continue; // -δ representative, equal rank
                }
                let delta = decode_delta(index, &values, n);
                let phi = build_phi(&delta, ch, p).expect("dimensions fixed by sweep");
                let (rank, sv) = numerical_rank(&phi);
                local.record(index, rank, sv);
            }
            local
        })
        .reduce(SweepAccumulator::new, SweepAccumulator::merge);

    let arg_min_delta = decode_delta(acc.arg_min_index, &values, n);
    Ok(DiversityReport {
        min_rank: acc.min_rank,
        p: ch.num_paths(),
        arg_min_delta,
        full_diversity: acc.min_rank == ch.num_paths(),
        rank_histogram: acc.histogram,
        min_rank_smallest_sv: acc.smallest_sv,
        mode: SweepMode::Exhaustive,
    })
}

/// Randomized rank sweep: evaluates `samples` random nonzero difference
/// vectors. The result is an estimate (an upper bound on the true minimum
/// rank that may miss rare rank-deficient directions), labeled as such.
pub fn min_rank_sweep_sampled(
    ch: &ChannelRealization,
    p: &ModemParams,
    constellation: Constellation,
    samples: u64,
    seed: u64,
) -> Result<DiversityReport> {
    let n = p.n;
    let (values, _) = difference_values(constellation);
    let v = values.len();

    let acc = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = DetRng::from_parts(seed, &[s]);
            let mut local = SweepAccumulator::new();
            // rejection-sample a nonzero δ
            let delta = loop {
                let digits: Vec<usize> = (0..n).map(|_| rng.next_index(v)).collect();
                if digits.iter().any(|&d| d != 0) {
                    break CVector::from_iterator(n, digits.iter().map(|&d| values[d]));
                }
            };
            let phi = build_phi(&delta, ch, p).expect("dimensions fixed by sweep");
            let (rank, sv) = numerical_rank(&phi);
            local.record(s as u128, rank, sv);
            (local, delta)
        })
        .reduce(
            || (SweepAccumulator::new(), CVector::zeros(n)),
            |(a, da), (b, db)| {
                let keep_b = b.min_rank < a.min_rank
                    || (b.min_rank == a.min_rank && b.arg_min_index < a.arg_min_index);
                if keep_b {
                    (a.merge(b), db)
                } else {
                    (a.merge(b), da)
                }
            },
        );

    let (acc, arg_min_delta) = acc;
    Ok(DiversityReport {
        min_rank: acc.min_rank,
        p: ch.num_paths(),
        arg_min_delta,
        full_diversity: acc.min_rank == ch.num_paths(),
        rank_histogram: acc.histogram,
        min_rank_smallest_sv: acc.smallest_sv,
        mode: SweepMode::Sampled,
    })
}

/// Pairwise-error-probability upper bound `Π_l 1/(1 + λ_l²/(4P·N₀))` over
/// the nonzero singular values of Φ(δ).
///
/// δ = 0 yields the degenerate empty product, 1.
pub fn pep_upper_bound(
    delta: &CVector,
    ch: &ChannelRealization,
    p: &ModemParams,
    n0: f64,
) -> Result<f64> {
    if n0 <= 0.0 || !n0.is_finite() {
        return Err(AfdmError::NonPositiveNoise(n0));
    }
    let phi = build_phi(delta, ch, p)?;
    let svd = phi.clone().svd(false, false);
    let s_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let tol = phi.nrows().max(phi.ncols()) as f64 * f64::EPSILON * s_max;
    let num_paths = ch.num_paths() as f64;
    let bound = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol)
        .map(|&s| 1.0 / (1.0 + s * s / (4.0 * num_paths * n0)))
        .product();
    Ok(bound)
}

/// Two-path full-rank criterion on the 2×2 submatrix of Φ(δ) picked around a
/// nonzero entry `δ_z`:
///
/// ```text
/// δ_z² ≠ exp(-j·2π/N·(l₂-l₁)·loc_d) · exp(j·4π·c₂·loc_d²) · δ_{z-loc_d} · δ_{z+loc_d}
/// ```
///
/// with `loc_d = loc₂ - loc₁`. Returns whether the inequality holds (the
/// submatrix, hence Φ, has rank two). Requires the no-wraparound index range
/// of the criterion; out-of-range inputs error.
pub fn two_path_pair_criterion(
    delta: &CVector,
    z: usize,
    ch: &ChannelRealization,
    p: &ModemParams,
) -> Result<bool> {
    if ch.num_paths() != 2 {
        return Err(AfdmError::Config(format!(
            "pair check needs exactly two paths, got {}",
            ch.num_paths()
        )));
    }
    if delta.len() != p.n {
        return Err(AfdmError::DimensionMismatch {
            context: "two_path_pair_criterion",
            expected: p.n,
            actual: delta.len(),
        });
    }
    let n = p.n as i64;
    let (loc1, _) = integral_placement(&ch.paths[0], p).ok_or_else(|| {
        AfdmError::ClosedFormNotApplicable {
            reason: "path 1 has no integral DAFT-domain placement".into(),
        }
    })?;
    let (loc2, _) = integral_placement(&ch.paths[1], p).ok_or_else(|| {
        AfdmError::ClosedFormNotApplicable {
            reason: "path 2 has no integral DAFT-domain placement".into(),
        }
    })?;
    let loc_d = loc2 - loc1;
    if loc_d == 0 {
        return Err(AfdmError::Config(
            "pair check needs distinct placements (loc_d != 0)".into(),
        ));
    }
    let z = z as i64;
    if delta[z as usize].norm() == 0.0 {
        return Err(AfdmError::Config(format!("delta[{z}] must be nonzero")));
    }
    // No-wraparound range: both submatrix rows and all three δ indices must
    // be genuine (unwrapped) indices.
    for idx in [z - loc1, z - loc2, z - loc_d, z + loc_d] {
        if idx < 0 || idx >= n {
            return Err(AfdmError::Config(format!(
                "index {idx} out of range for the pair criterion (z = {z}, loc1 = {loc1}, loc2 = {loc2})"
            )));
        }
    }

    let l1 = ch.paths[0].delay as f64;
    let l2 = ch.paths[1].delay as f64;
    let d = loc_d as f64;
    let lhs = delta[z as usize] * delta[z as usize];
    let phase = Complex64::cis(-TAU / n as f64 * (l2 - l1) * d + 2.0 * TAU * p.c2 * d * d);
    let rhs = phase * delta[(z - loc_d) as usize] * delta[(z + loc_d) as usize];
    Ok((lhs - rhs).norm() > 1e-9)
}
