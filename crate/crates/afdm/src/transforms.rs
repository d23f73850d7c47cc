//! Discrete affine Fourier transform (DAFT).
//!
//! The DAFT generalizes the unitary DFT with two chirp rates: `A = Λ_c2 F
//! Λ_c1`, where `F` is the unitary DFT matrix with entries
//! `exp(-j2πmn/N)/√N` and `Λ_c = diag(exp(-j2πcn²))`. Since every factor is
//! unitary, `A⁻¹ = Aᴴ = Λ_c1ᴴ Fᴴ Λ_c2ᴴ`.
//!
//! The fast path evaluates the factorization directly (diagonal multiply,
//! mixed-radix FFT, diagonal multiply) in O(N log N) for any N, not just
//! powers of two. A dense O(N²) slow path ([`daft_naive`] / [`idaft_naive`])
//! is retained so the fast path can be checked against it.

use std::cell::RefCell;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{AfdmError, Result};
use crate::{CMatrix, CVector};

/// Parameters of one DAFT: size `n` and the two chirp rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DaftParams {
    /// Number of samples N.
    pub n: usize,
    /// First chirp rate (applied in the time domain).
    pub c1: f64,
    /// Second chirp rate (applied in the transform domain).
    pub c2: f64,
}

impl DaftParams {
    pub fn new(n: usize, c1: f64, c2: f64) -> Result<Self> {
        if n < 2 {
            return Err(AfdmError::Config(format!("DAFT size must be >= 2, got {n}")));
        }
        if !c1.is_finite() || !c2.is_finite() {
            return Err(AfdmError::Config(format!(
                "chirp rates must be finite, got c1={c1}, c2={c2}"
            )));
        }
        Ok(Self { n, c1, c2 })
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan_fft(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        }
    })
}

/// Diagonal chirp phasors `exp(-j2πck²)`, k = 0..n-1.
///
/// Shared by the fast path, the dense matrix builder, and [`chirp_diag`] so
/// all routes see bit-identical factors.
pub fn chirp_phasors(n: usize, c: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::cis(-TAU * c * (k * k) as f64))
        .collect()
}

/// The n×n diagonal matrix `Λ_c = diag(exp(-j2πck²))`.
pub fn chirp_diag(n: usize, c: f64) -> CMatrix {
    assert!(n >= 1, "chirp_diag needs n >= 1");
    CMatrix::from_diagonal(&CVector::from_vec(chirp_phasors(n, c)))
}

fn check_len(x: &CVector, p: &DaftParams, context: &'static str) -> Result<()> {
    if x.len() != p.n {
        return Err(AfdmError::DimensionMismatch {
            context,
            expected: p.n,
            actual: x.len(),
        });
    }
    Ok(())
}

/// Forward DAFT: `Λ_c2 F Λ_c1 x`, unitary (norm preserving).
pub fn daft(x: &CVector, p: &DaftParams) -> Result<CVector> {
    check_len(x, p, "daft")?;
    let chirp1 = chirp_phasors(p.n, p.c1);
    let chirp2 = chirp_phasors(p.n, p.c2);
    let mut buf: Vec<Complex64> = x.iter().zip(&chirp1).map(|(v, c)| v * c).collect();
    plan_fft(p.n, false).process(&mut buf);
    let scale = 1.0 / (p.n as f64).sqrt();
    for (b, c) in buf.iter_mut().zip(&chirp2) {
        *b *= scale * c;
    }
    Ok(CVector::from_vec(buf))
}

/// Inverse DAFT: `Λ_c1ᴴ Fᴴ Λ_c2ᴴ y`, so that `idaft(daft(x)) = x`.
pub fn idaft(y: &CVector, p: &DaftParams) -> Result<CVector> {
    check_len(y, p, "idaft")?;
    let chirp1 = chirp_phasors(p.n, p.c1);
    let chirp2 = chirp_phasors(p.n, p.c2);
    let mut buf: Vec<Complex64> = y.iter().zip(&chirp2).map(|(v, c)| v * c.conj()).collect();
    plan_fft(p.n, true).process(&mut buf);
    let scale = 1.0 / (p.n as f64).sqrt();
    for (b, c) in buf.iter_mut().zip(&chirp1) {
        *b *= scale * c.conj();
    }
    Ok(CVector::from_vec(buf))
}

/// Dense N×N DAFT matrix `A = Λ_c2 F Λ_c1`.
///
/// The DFT kernel exponent is reduced modulo N in integer arithmetic before
/// scaling, which keeps entries accurate for large N.
pub fn daft_matrix(p: &DaftParams) -> CMatrix {
    let n = p.n;
    let chirp1 = chirp_phasors(n, p.c1);
    let chirp2 = chirp_phasors(n, p.c2);
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |m, k| {
        let f = Complex64::cis(-TAU * ((m * k) % n) as f64 / n as f64);
        chirp2[m] * f * chirp1[k] * scale
    })
}

/// Slow-path forward DAFT: dense matrix times vector, O(N²).
pub fn daft_naive(x: &CVector, p: &DaftParams) -> Result<CVector> {
    check_len(x, p, "daft_naive")?;
    Ok(daft_matrix(p) * x)
}

/// Slow-path inverse DAFT: dense adjoint times vector, O(N²).
pub fn idaft_naive(y: &CVector, p: &DaftParams) -> Result<CVector> {
    check_len(y, p, "idaft_naive")?;
    Ok(daft_matrix(p).adjoint() * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::DetRng;
    use proptest::prelude::*;

    fn random_vector(n: usize, rng: &mut DetRng) -> CVector {
        CVector::from_fn(n, |_, _| {
            let (a, b) = rng.next_gaussian_pair();
            Complex64::new(a, b)
        })
    }

    /// Independent double-sum oracle: exponents are summed before a single
    /// cis evaluation, a different grouping than the implementation's
    /// factor-by-factor product.
    fn daft_oracle(x: &CVector, p: &DaftParams) -> CVector {
        let n = p.n;
        let scale = 1.0 / (n as f64).sqrt();
        CVector::from_fn(n, |m, _| {
            (0..n)
                .map(|k| {
                    let phase = -TAU
                        * (p.c2 * (m * m) as f64
                            + (m * k) as f64 / n as f64
                            + p.c1 * (k * k) as f64);
                    Complex64::cis(phase) * x[k] * scale
                })
                .sum()
        })
    }

    fn idaft_oracle(y: &CVector, p: &DaftParams) -> CVector {
        let n = p.n;
        let scale = 1.0 / (n as f64).sqrt();
        CVector::from_fn(n, |k, _| {
            (0..n)
                .map(|m| {
                    let phase = TAU
                        * (p.c2 * (m * m) as f64
                            + (m * k) as f64 / n as f64
                            + p.c1 * (k * k) as f64);
                    Complex64::cis(phase) * y[m] * scale
                })
                .sum()
        })
    }

    fn max_abs_diff(a: &CVector, b: &CVector) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn chirp_diag_zero_rate_is_identity() {
        let d = chirp_diag(4, 0.0);
        assert!((d - CMatrix::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn chirp_diag_quarter_rate() {
        // exp(-j2π·0.25·1) = -j at k = 1
        let d = chirp_diag(2, 0.25);
        assert!((d[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((d[(1, 1)] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn chirp_diag_matches_scalar_loop() {
        let c = 3.0 / 16.0;
        let d = chirp_diag(8, c);
        for k in 0..8 {
            let theta = -TAU * c * (k * k) as f64;
            let expect = Complex64::new(theta.cos(), theta.sin());
            assert!((d[(k, k)] - expect).norm() < 1e-14, "k={k}");
            assert!((d[(k, k)].norm() - 1.0).abs() < 1e-14, "unit modulus k={k}");
        }
    }

    #[test]
    fn daft_of_delta_reduces_to_dft() {
        let p = DaftParams::new(4, 0.0, 0.0).unwrap();
        let mut x = CVector::zeros(4);
        x[0] = Complex64::new(1.0, 0.0);
        let y = daft(&x, &p).unwrap();
        for m in 0..4 {
            assert!((y[m] - Complex64::new(0.5, 0.0)).norm() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn daft_delta_matches_double_sum() {
        let p = DaftParams::new(4, 1.0 / 8.0, 0.3).unwrap();
        let mut x = CVector::zeros(4);
        x[0] = Complex64::new(1.0, 0.0);
        let y = daft(&x, &p).unwrap();
        let want = daft_oracle(&x, &p);
        assert!(max_abs_diff(&y, &want) < 1e-10);
    }

    #[test]
    fn daft_fresnel_case_matches_double_sum() {
        // c1 = c2 = 1/(2N) is the Fresnel/OCDM transform.
        let n = 8;
        let c = 1.0 / (2.0 * n as f64);
        let p = DaftParams::new(n, c, c).unwrap();
        let mut rng = DetRng::new(101);
        let x = random_vector(n, &mut rng);
        let y = daft(&x, &p).unwrap();
        let want = daft_oracle(&x, &p);
        assert!(max_abs_diff(&y, &want) < 1e-10);
    }

    #[test]
    fn idaft_inverts_daft() {
        let mut rng = DetRng::new(5);
        for &n in &[2usize, 5, 8, 64] {
            let p = DaftParams::new(n, rng.next_f64() - 0.5, rng.next_f64() - 0.5).unwrap();
            let x = random_vector(n, &mut rng);
            let back = idaft(&daft(&x, &p).unwrap(), &p).unwrap();
            let rel = max_abs_diff(&back, &x) / x.norm();
            assert!(rel < 1e-10, "n={n} rel={rel}");
        }
    }

    #[test]
    fn idaft_of_constant_is_delta() {
        let p = DaftParams::new(4, 0.0, 0.0).unwrap();
        let y = CVector::from_element(4, Complex64::new(0.5, 0.0));
        let x = idaft(&y, &p).unwrap();
        assert!((x[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for k in 1..4 {
            assert!(x[k].norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn idaft_matches_adjoint_double_sum() {
        let p = DaftParams::new(8, 3.0 / 16.0, 2f64.sqrt() / 128.0).unwrap();
        let mut rng = DetRng::new(77);
        let y = random_vector(8, &mut rng);
        let x = idaft(&y, &p).unwrap();
        let want = idaft_oracle(&y, &p);
        assert!(max_abs_diff(&x, &want) < 1e-10);
    }

    #[test]
    fn daft_matrix_is_unitary() {
        let mut rng = DetRng::new(9);
        for &n in &[2usize, 8, 64] {
            let p = DaftParams::new(n, rng.next_f64() - 0.5, rng.next_f64() - 0.5).unwrap();
            let a = daft_matrix(&p);
            let dev = &a * a.adjoint() - CMatrix::identity(n, n);
            assert!(dev.norm() < 1e-10, "n={n} dev={}", dev.norm());
        }
    }

    #[test]
    fn daft_matrix_zero_rates_is_dft() {
        let n = 8;
        let p = DaftParams::new(n, 0.0, 0.0).unwrap();
        let a = daft_matrix(&p);
        // Independently coded unitary DFT.
        let scale = 1.0 / (n as f64).sqrt();
        for m in 0..n {
            for k in 0..n {
                let w = Complex64::cis(-TAU * (m * k) as f64 / n as f64) * scale;
                assert!((a[(m, k)] - w).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn daft_matrix_column_equals_daft_of_delta() {
        let p = DaftParams::new(6, 0.1, -0.07).unwrap();
        let a = daft_matrix(&p);
        for j in 0..6 {
            let mut e = CVector::zeros(6);
            e[j] = Complex64::new(1.0, 0.0);
            let col = daft(&e, &p).unwrap();
            assert!(max_abs_diff(&col, &CVector::from(a.column(j))) < 1e-12);
        }
    }

    #[test]
    fn fast_path_matches_slow_path_up_to_1024() {
        let mut rng = DetRng::new(21);
        for &n in &[12usize, 100, 256, 1024] {
            let p = DaftParams::new(n, rng.next_f64() - 0.5, rng.next_f64() - 0.5).unwrap();
            let x = random_vector(n, &mut rng);
            let fast = daft(&x, &p).unwrap();
            let slow = daft_naive(&x, &p).unwrap();
            assert!(max_abs_diff(&fast, &slow) < 1e-9, "n={n}");
            let ifast = idaft(&x, &p).unwrap();
            let islow = idaft_naive(&x, &p).unwrap();
            assert!(max_abs_diff(&ifast, &islow) < 1e-9, "inverse n={n}");
        }
    }

    #[test]
    fn length_mismatch_is_reported() {
        let p = DaftParams::new(8, 0.0, 0.0).unwrap();
        let x = CVector::zeros(7);
        assert!(matches!(
            daft(&x, &p),
            Err(AfdmError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            idaft(&x, &p),
            Err(AfdmError::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn energy_is_preserved(
            n in 2usize..48,
            c1 in -1.0f64..1.0,
            c2 in -1.0f64..1.0,
            seed in 0u64..u64::MAX,
        ) {
            let p = DaftParams::new(n, c1, c2).unwrap();
            let mut rng = DetRng::new(seed);
            let x = random_vector(n, &mut rng);
            let y = daft(&x, &p).unwrap();
            let rel = (y.norm() - x.norm()).abs() / x.norm();
            prop_assert!(rel < 1e-10);
        }

        #[test]
        fn round_trip_recovers_input(
            n in 2usize..48,
            c1 in -1.0f64..1.0,
            c2 in -1.0f64..1.0,
            seed in 0u64..u64::MAX,
        ) {
            let p = DaftParams::new(n, c1, c2).unwrap();
            let mut rng = DetRng::new(seed);
            let x = random_vector(n, &mut rng);
            let back = idaft(&daft(&x, &p).unwrap(), &p).unwrap();
            let rel = (&back - &x).norm() / x.norm();
            prop_assert!(rel < 1e-10);
        }
    }
}
