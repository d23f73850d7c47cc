//! Symbol detection on `y = H_eff x + w`.
//!
//! Two detectors: exact maximum likelihood by exhaustive enumeration
//! (affordable at the small N used for diversity studies) and linear MMSE
//! with per-symbol hard decisions. Both are pure functions and assume
//! perfect channel knowledge.

use num_complex::Complex64;

use crate::effchan::EffectiveChannel;
use crate::error::{AfdmError, Result};
use crate::modem::{nearest_point_index, SymbolVector};
use crate::params::Constellation;
use crate::{CMatrix, CVector};

/// Default cap on the number of ML hypotheses (`Q^N`).
pub const DEFAULT_ML_BUDGET: u128 = 1 << 20;

/// Hard decisions plus the detector's final metric: the minimal squared
/// distance for ML, the hard-decision residual norm for MMSE.
#[derive(Debug, Clone)]
pub struct DetectionResult {
    pub symbols: SymbolVector,
    pub metric: f64,
}

/// Exact ML detection with the default hypothesis budget.
pub fn detect_ml(
    y: &CVector,
    e: &EffectiveChannel,
    constellation: Constellation,
) -> Result<DetectionResult> {
    detect_ml_budgeted(y, e, constellation, DEFAULT_ML_BUDGET)
}

/// Exact ML detection: `argmin_x ||y - H_eff x||²` over all symbol vectors.
///
/// Candidates are enumerated in lexicographic symbol-index order with an
/// incrementally updated residual (only changed coordinates touch the
/// residual); ties keep the first, i.e. lexicographically smallest, vector.
pub fn detect_ml_budgeted(
    y: &CVector,
    e: &EffectiveChannel,
    constellation: Constellation,
    budget: u128,
) -> Result<DetectionResult> {
    let n = e.n();
    if y.len() != n {
        return Err(AfdmError::DimensionMismatch {
            context: "detect_ml",
            expected: n,
            actual: y.len(),
        });
    }
    let q = constellation.order();
    let hypotheses = (q as u128)
        .checked_pow(n as u32)
        .ok_or(AfdmError::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    if hypotheses > budget {
        return Err(AfdmError::BudgetExceeded {
            required: hypotheses,
            budget,
        });
    }
    let pts = constellation.points();
    let columns: Vec<CVector> = (0..n).map(|j| CVector::from(e.h_eff.column(j))).collect();

    // Start at the all-zeros index vector.
    let mut digits = vec![0usize; n];
    let mut residual = y.clone();
    for col in &columns {
        residual -= col * pts[0];
    }
    let mut best_digits = digits.clone();
    let mut best_metric = residual.norm_squared();

    // Odometer with the last digit fastest = lexicographic ascending order.
    'outer: loop {
        let mut pos = n;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            let old = digits[pos];
            if old + 1 < q {
                digits[pos] = old + 1;
                residual -= &columns[pos] * (pts[old + 1] - pts[old]);
                break;
            }
            digits[pos] = 0;
            residual -= &columns[pos] * (pts[0] - pts[old]);
        }
        let metric = residual.norm_squared();
        if metric < best_metric {
            best_metric = metric;
            best_digits.copy_from_slice(&digits);
        }
    }

    Ok(DetectionResult {
        symbols: SymbolVector::from_indices(&best_digits, constellation),
        metric: best_metric,
    })
}

/// Soft LMMSE estimate `x̃ = Hᴴ (H Hᴴ + N₀ I)⁻¹ y` for unit-energy symbols.
///
/// The solve goes through a Cholesky factorization of the Hermitian
/// positive-definite Gram matrix, never an explicit inverse.
pub fn mmse_soft_estimate(y: &CVector, e: &EffectiveChannel, n0: f64) -> Result<CVector> {
    if n0 <= 0.0 || !n0.is_finite() {
        return Err(AfdmError::NonPositiveNoise(n0));
    }
    let n = e.n();
    if y.len() != n {
        return Err(AfdmError::DimensionMismatch {
            context: "detect_mmse",
            expected: n,
            actual: y.len(),
        });
    }
    let h = &e.h_eff;
    let mut gram: CMatrix = h * h.adjoint();
    for i in 0..n {
        gram[(i, i)] += Complex64::new(n0, 0.0);
    }
    let min_diag = (0..n).map(|i| gram[(i, i)].re).fold(f64::INFINITY, f64::min);
    let chol = gram.cholesky().ok_or_else(|| {
        AfdmError::SolverFailure(format!(
            "Cholesky failed on H·Hᴴ + N₀I (min diagonal {min_diag:.3e}, N₀ = {n0:.3e})"
        ))
    })?;
    Ok(h.adjoint() * chol.solve(y))
}

/// Linear MMSE detection with hard decisions.
pub fn detect_mmse(
    y: &CVector,
    e: &EffectiveChannel,
    n0: f64,
    constellation: Constellation,
) -> Result<DetectionResult> {
    let soft = mmse_soft_estimate(y, e, n0)?;
    let indices: Vec<usize> = soft
        .iter()
        .map(|&z| nearest_point_index(z, constellation))
        .collect();
    let symbols = SymbolVector::from_indices(&indices, constellation);
    let residual = y - &e.h_eff * &symbols.symbols;
    Ok(DetectionResult {
        metric: residual.norm(),
        symbols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelPath, ChannelRealization};
    use crate::effchan::build_heff_matrix;
    use crate::params::{scheme_params, ChannelProfile, Scheme};
    use crate::rng::DetRng;

    fn identity_channel(n: usize) -> EffectiveChannel {
        EffectiveChannel {
            h_eff: CMatrix::identity(n, n),
            per_path: vec![],
        }
    }

    fn fig4_heff(seed: u64) -> EffectiveChannel {
        let profile = ChannelProfile::new(1, 1);
        let p = scheme_params(Scheme::Afdm, &profile, 8, Constellation::Bpsk);
        let mut rng = DetRng::new(seed);
        let ch = ChannelRealization::new(
            vec![
                ChannelPath {
                    gain: rng.next_complex_gaussian(0.5),
                    doppler_norm: -1.0,
                    delay: 0,
                },
                ChannelPath {
                    gain: rng.next_complex_gaussian(0.5),
                    doppler_norm: 1.0,
                    delay: 1,
                },
            ],
            8,
        )
        .unwrap();
        build_heff_matrix(&ch, &p)
    }

    fn random_symbols(n: usize, c: Constellation, rng: &mut DetRng) -> SymbolVector {
        let indices: Vec<usize> = (0..n).map(|_| rng.next_index(c.order())).collect();
        SymbolVector::from_indices(&indices, c)
    }

    /// Independent brute-force ML: full metric per candidate, iterating in
    /// reverse enumeration order.
    fn ml_oracle(y: &CVector, h: &CMatrix, c: Constellation) -> CVector {
        let n = h.nrows();
        let q = c.order();
        let pts = c.points();
        let total = q.pow(n as u32);
        let mut best = CVector::zeros(n);
        let mut best_metric = f64::INFINITY;
        for idx in (0..total).rev() {
            let x = CVector::from_fn(n, |i, _| {
                pts[(idx / q.pow((n - 1 - i) as u32)) % q]
            });
            let metric = (y - h * &x).norm_squared();
            // strict <= so the earlier (lexicographically smaller) candidate
            // wins exactly as in the implementation
            if metric <= best_metric {
                best_metric = metric;
                best = x;
            }
        }
        best
    }

    #[test]
    fn ml_recovers_noiseless_transmission() {
        let e = fig4_heff(1);
        let mut rng = DetRng::new(2);
        let x = random_symbols(8, Constellation::Bpsk, &mut rng);
        let y = &e.h_eff * &x.symbols;
        let det = detect_ml(&y, &e, Constellation::Bpsk).unwrap();
        assert_eq!(det.symbols.symbols, x.symbols);
        assert!(det.metric < 1e-18);
    }

    #[test]
    fn ml_per_symbol_threshold_case() {
        let e = identity_channel(2);
        let y = CVector::from_vec(vec![Complex64::new(0.9, 0.0), Complex64::new(-1.1, 0.0)]);
        let det = detect_ml(&y, &e, Constellation::Bpsk).unwrap();
        assert_eq!(det.symbols.symbols[0], Complex64::new(1.0, 0.0));
        assert_eq!(det.symbols.symbols[1], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn ml_matches_reverse_order_oracle() {
        let mut rng = DetRng::new(3);
        for trial in 0..20 {
            let n = 4;
            let h = CMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian(1.0));
            let e = EffectiveChannel {
                h_eff: h.clone(),
                per_path: vec![],
            };
            let x = random_symbols(n, Constellation::Qpsk, &mut rng);
            let noise = CVector::from_fn(n, |_, _| rng.next_complex_gaussian(0.2));
            let y = &h * &x.symbols + noise;
            let det = detect_ml(&y, &e, Constellation::Qpsk).unwrap();
            let want = ml_oracle(&y, &h, Constellation::Qpsk);
            assert_eq!(det.symbols.symbols, want, "trial {trial}");
        }
    }

    #[test]
    fn ml_budget_is_enforced() {
        let e = identity_channel(11);
        let y = CVector::zeros(11);
        // 4^11 > 2^20
        assert!(matches!(
            detect_ml(&y, &e, Constellation::Qpsk),
            Err(AfdmError::BudgetExceeded { .. })
        ));
        assert!(detect_ml(&y, &e, Constellation::Bpsk).is_ok());
    }

    #[test]
    fn mmse_identity_channel_low_noise() {
        let e = identity_channel(4);
        let mut rng = DetRng::new(5);
        let x = random_symbols(4, Constellation::Qpsk, &mut rng);
        let y = x.symbols.clone();
        let n0 = 1e-9;
        let soft = mmse_soft_estimate(&y, &e, n0).unwrap();
        assert!((&soft - &y).norm() < 1e-6);
        let det = detect_mmse(&y, &e, n0, Constellation::Qpsk).unwrap();
        assert_eq!(det.symbols.symbols, x.symbols);
    }

    #[test]
    fn mmse_unitary_channel_is_scaled_matched_filter() {
        // For unitary H the MMSE filter is Hᴴ/(1+N₀).
        let p = crate::transforms::DaftParams::new(6, 0.11, -0.23).unwrap();
        let h = crate::transforms::daft_matrix(&p);
        let e = EffectiveChannel {
            h_eff: h.clone(),
            per_path: vec![],
        };
        let mut rng = DetRng::new(6);
        let y = CVector::from_fn(6, |_, _| rng.next_complex_gaussian(1.0));
        let n0 = 0.3;
        let soft = mmse_soft_estimate(&y, &e, n0).unwrap();
        let matched = h.adjoint() * &y / Complex64::new(1.0 + n0, 0.0);
        assert!((&soft - &matched).norm() < 1e-10);
    }

    #[test]
    fn mmse_matches_explicit_inverse_oracle() {
        // Hand-rolled Gauss-Jordan inverse as the independent reference.
        fn invert(m: &CMatrix) -> CMatrix {
            let n = m.nrows();
            let mut a = m.clone();
            let mut inv = CMatrix::identity(n, n);
            for col in 0..n {
                let pivot = (col..n)
                    .max_by(|&i, &j| {
                        a[(i, col)]
                            .norm()
                            .partial_cmp(&a[(j, col)].norm())
                            .unwrap()
                    })
                    .unwrap();
                if pivot != col {
                    a.swap_rows(pivot, col);
                    inv.swap_rows(pivot, col);
                }
                let d = a[(col, col)];
                for j in 0..n {
                    a[(col, j)] /= d;
                    inv[(col, j)] /= d;
                }
                for i in 0..n {
                    if i != col {
                        let f = a[(i, col)];
                        for j in 0..n {
                            let ac = a[(col, j)];
                            let ic = inv[(col, j)];
                            a[(i, j)] -= f * ac;
                            inv[(i, j)] -= f * ic;
                        }
                    }
                }
            }
            inv
        }

        let mut rng = DetRng::new(7);
        for trial in 0..10 {
            let n = 8;
            let h = CMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian(1.0));
            let e = EffectiveChannel {
                h_eff: h.clone(),
                per_path: vec![],
            };
            let y = CVector::from_fn(n, |_, _| rng.next_complex_gaussian(1.0));
            let n0 = 0.05;
            let soft = mmse_soft_estimate(&y, &e, n0).unwrap();

            let mut gram = &h * h.adjoint();
            for i in 0..n {
                gram[(i, i)] += Complex64::new(n0, 0.0);
            }
            let reference = h.adjoint() * invert(&gram) * &y;
            assert!(
                (&soft - &reference).norm() < 1e-8,
                "trial {trial}: {}",
                (&soft - &reference).norm()
            );
        }
    }

    #[test]
    fn ml_never_loses_to_mmse_statistically() {
        let mut ml_errors = 0usize;
        let mut mmse_errors = 0usize;
        let trials = 1000;
        for t in 0..trials {
            let e = fig4_heff(100 + t);
            let mut rng = DetRng::from_parts(9, &[t]);
            let x = random_symbols(8, Constellation::Bpsk, &mut rng);
            let n0 = 0.25;
            let noise = CVector::from_fn(8, |_, _| rng.next_complex_gaussian(n0));
            let y = &e.h_eff * &x.symbols + noise;
            let ml = detect_ml(&y, &e, Constellation::Bpsk).unwrap();
            let mmse = detect_mmse(&y, &e, n0, Constellation::Bpsk).unwrap();
            ml_errors += ml
                .symbols
                .symbols
                .iter()
                .zip(x.symbols.iter())
                .filter(|(a, b)| a != b)
                .count();
            mmse_errors += mmse
                .symbols
                .symbols
                .iter()
                .zip(x.symbols.iter())
                .filter(|(a, b)| a != b)
                .count();
        }
        let slack = 3.0 * (trials as f64).sqrt();
        assert!(
            (ml_errors as f64) <= mmse_errors as f64 + slack,
            "ml {ml_errors} vs mmse {mmse_errors}"
        );
    }

    #[test]
    fn ml_is_invariant_to_enumeration_order() {
        // Enumerating candidates in any other order must find the same
        // minimizer when noise makes ties measure-zero.
        let mut rng = DetRng::new(11);
        for trial in 0..10 {
            let e = fig4_heff(200 + trial);
            let x = random_symbols(8, Constellation::Bpsk, &mut rng);
            let noise = CVector::from_fn(8, |_, _| rng.next_complex_gaussian(0.05));
            let y = &e.h_eff * &x.symbols + noise;
            let det = detect_ml(&y, &e, Constellation::Bpsk).unwrap();
            let reversed = ml_oracle(&y, &e.h_eff, Constellation::Bpsk);
            assert_eq!(det.symbols.symbols, reversed, "trial {trial}");
        }
    }
}
