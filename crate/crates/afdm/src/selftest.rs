//! Fast self-check suites behind `afdm selftest`.
//!
//! Each suite exercises one cross-cutting invariant of the chain end to end
//! (unitarity, round trips, the two channel formulations, the closed form)
//! in a few seconds total, so a broken build or a flipped sign convention
//! surfaces immediately without running the full test suite.

use num_complex::Complex64;

use crate::channel::{apply_timedomain, channel_matrix, ChannelPath, ChannelRealization};
use crate::effchan::{build_heff_matrix, heff_closed_form};
use crate::modem::{demodulate, discard_cpp, map_bits, modulate};
use crate::params::{scheme_params, ChannelProfile, Constellation, Scheme};
use crate::rng::DetRng;
use crate::transforms::{daft, daft_matrix, daft_naive, idaft, DaftParams};
use crate::{CMatrix, CVector};

/// Outcome of one named suite.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = (&'static str, fn() -> Result<String, String>);

fn random_vector(n: usize, rng: &mut DetRng) -> CVector {
    CVector::from_fn(n, |_, _| rng.next_complex_gaussian(1.0))
}

fn check_unitarity() -> Result<String, String> {
    let mut rng = DetRng::new(1);
    let mut worst = 0.0f64;
    for &n in &[2usize, 8, 64, 128] {
        for _ in 0..3 {
            let p = DaftParams::new(n, rng.next_f64() - 0.5, rng.next_f64() - 0.5)
                .map_err(|e| e.to_string())?;
            let a = daft_matrix(&p);
            let dev = (&a * a.adjoint() - CMatrix::identity(n, n)).norm();
            worst = worst.max(dev);
            if dev >= 1e-10 {
                return Err(format!("‖AAᴴ−I‖ = {dev:.3e} at n = {n}"));
            }
        }
    }
    Ok(format!("worst ‖AAᴴ−I‖ = {worst:.3e}"))
}

fn check_round_trip() -> Result<String, String> {
    let profile = ChannelProfile::new(1, 1);
    let mut rng = DetRng::new(2);
    let mut worst = 0.0f64;
    for scheme in [Scheme::Afdm, Scheme::Ocdm, Scheme::DaftOfdm, Scheme::Ofdm] {
        for &n in &[8usize, 64] {
            let p = scheme_params(scheme, &profile, n, Constellation::Qpsk);
            let bits: Vec<bool> = (0..2 * n).map(|_| rng.next_bool()).collect();
            let sv = map_bits(&bits, Constellation::Qpsk, n).map_err(|e| e.to_string())?;
            let frame = modulate(&sv, &p).map_err(|e| e.to_string())?;
            let body = discard_cpp(&frame.to_samples(), p.cpp_len).map_err(|e| e.to_string())?;
            let y = demodulate(&body, &p).map_err(|e| e.to_string())?;
            let rel = (&y - &sv.symbols).norm() / sv.symbols.norm();
            worst = worst.max(rel);
            if rel >= 1e-10 {
                return Err(format!("{scheme} n={n}: relative error {rel:.3e}"));
            }
        }
    }
    Ok(format!("worst relative error = {worst:.3e}"))
}

fn check_channel_equivalence() -> Result<String, String> {
    let mut rng = DetRng::new(3);
    let mut worst = 0.0f64;
    for trial in 0..40 {
        let n = 8;
        let c1 = 3.0 / 16.0;
        let profile = ChannelProfile::new(2, 1);
        let p = scheme_params(Scheme::Afdm, &profile, n, Constellation::Bpsk);
        let bits: Vec<bool> = (0..n).map(|_| rng.next_bool()).collect();
        let sv = map_bits(&bits, Constellation::Bpsk, n).map_err(|e| e.to_string())?;
        let frame = modulate(&sv, &p).map_err(|e| e.to_string())?;
        let fractional = trial % 2 == 1;
        let ch = ChannelRealization::new(
            vec![
                ChannelPath {
                    gain: rng.next_complex_gaussian(0.5),
                    doppler_norm: if fractional { 0.6 } else { 1.0 },
                    delay: 0,
                },
                ChannelPath {
                    gain: rng.next_complex_gaussian(0.5),
                    doppler_norm: if fractional { -1.3 } else { -1.0 },
                    delay: 2,
                },
            ],
            n,
        )
        .map_err(|e| e.to_string())?;
        let time = apply_timedomain(&frame, &ch).map_err(|e| e.to_string())?;
        let body = discard_cpp(&time, p.cpp_len).map_err(|e| e.to_string())?;
        let matrix = channel_matrix(&ch, c1) * &frame.body;
        let dev = (&body - &matrix).norm();
        worst = worst.max(dev);
        if dev >= 1e-9 {
            return Err(format!("trial {trial}: time/matrix deviation {dev:.3e}"));
        }
    }
    Ok(format!("worst time/matrix deviation = {worst:.3e}"))
}

fn check_closed_form() -> Result<String, String> {
    let mut rng = DetRng::new(4);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let n = 8;
        let profile = ChannelProfile::new(1, 1);
        let p = scheme_params(Scheme::Afdm, &profile, n, Constellation::Bpsk);
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
            n,
        )
        .map_err(|e| e.to_string())?;
        let direct = heff_closed_form(&ch, &p).map_err(|e| e.to_string())?;
        let conj = build_heff_matrix(&ch, &p);
        let dev = (&direct.h_eff - &conj.h_eff).norm();
        worst = worst.max(dev);
        if dev >= 1e-9 {
            return Err(format!("trial {trial}: closed-form deviation {dev:.3e}"));
        }
    }
    Ok(format!("worst closed-form deviation = {worst:.3e}"))
}

fn check_cpp_law() -> Result<String, String> {
    let mut rng = DetRng::new(5);
    for _ in 0..20 {
        let n = 8 + 2 * rng.next_index(5);
        let profile = ChannelProfile::new(3.min(n - 1), 1);
        let mut p = scheme_params(Scheme::Afdm, &profile, n, Constellation::Bpsk);
        p.c1 = rng.next_f64() - 0.5; // arbitrary chirp rate
        let bits: Vec<bool> = (0..n).map(|_| rng.next_bool()).collect();
        let sv = map_bits(&bits, Constellation::Bpsk, n).map_err(|e| e.to_string())?;
        let frame = modulate(&sv, &p).map_err(|e| e.to_string())?;
        for i in 0..p.cpp_len {
            let t = i as i64 - p.cpp_len as i64;
            let nn = n as f64;
            let undo = Complex64::cis(
                std::f64::consts::TAU * p.c1 * (nn * nn + 2.0 * nn * t as f64),
            );
            let dev = (frame.prefix[i] * undo - frame.body[(n as i64 + t) as usize]).norm();
            if dev >= 1e-12 {
                return Err(format!("prefix index {i}: phase-law deviation {dev:.3e}"));
            }
        }
    }
    Ok("prefix phase law holds to 1e-12".into())
}

fn check_fast_vs_naive() -> Result<String, String> {
    let mut rng = DetRng::new(6);
    let mut worst = 0.0f64;
    for &n in &[12usize, 64, 257] {
        let p = DaftParams::new(n, rng.next_f64() - 0.5, rng.next_f64() - 0.5)
            .map_err(|e| e.to_string())?;
        let x = random_vector(n, &mut rng);
        let fast = daft(&x, &p).map_err(|e| e.to_string())?;
        let slow = daft_naive(&x, &p).map_err(|e| e.to_string())?;
        let dev = (&fast - &slow).norm();
        worst = worst.max(dev);
        if dev >= 1e-9 {
            return Err(format!("n={n}: fast/naive deviation {dev:.3e}"));
        }
        let back = idaft(&fast, &p).map_err(|e| e.to_string())?;
        let rel = (&back - &x).norm() / x.norm();
        if rel >= 1e-10 {
            return Err(format!("n={n}: round-trip error {rel:.3e}"));
        }
    }
    Ok(format!("worst fast/naive deviation = {worst:.3e}"))
}

const CHECKS: &[Check] = &[
    ("unitarity", check_unitarity),
    ("round-trip", check_round_trip),
    ("channel-equivalence", check_channel_equivalence),
    ("closed-form-agreement", check_closed_form),
    ("cpp-phase-law", check_cpp_law),
    ("fast-vs-naive", check_fast_vs_naive),
];

/// Runs every suite whose name contains `filter` (all when `None`).
pub fn run(filter: Option<&str>) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .filter(|(name, _)| filter.is_none_or(|f| name.contains(f)))
        .map(|(name, f)| match f() {
            Ok(detail) => CheckResult {
                name,
                passed: true,
                detail,
            },
            Err(detail) => CheckResult {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}
