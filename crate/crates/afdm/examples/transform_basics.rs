//! The DAFT and its parameters: unitarity, the OFDM/OCDM special cases, and
//! the fast path vs the dense slow path.
//!
//! Run with: `cargo run --release --example transform_basics`

use afdm::rng::DetRng;
use afdm::transforms::{daft, daft_matrix, daft_naive, idaft, DaftParams};
use afdm::{CMatrix, CVector};

fn main() {
    let mut rng = DetRng::new(1);

    println!("DAFT A = Λ_c2 F Λ_c1 — unitarity over sizes and chirp rates");
    for &n in &[8usize, 64, 100, 256] {
        let p = DaftParams::new(n, rng.next_f64() - 0.5, rng.next_f64() - 0.5).unwrap();
        let a = daft_matrix(&p);
        let dev = (&a * a.adjoint() - CMatrix::identity(n, n)).norm();
        println!("  n = {n:>4}, c1 = {:+.4}, c2 = {:+.4}: ‖AAᴴ − I‖_F = {dev:.2e}", p.c1, p.c2);
    }

    // c1 = c2 = 0 reduces the DAFT to the unitary DFT
    let n = 8;
    let ofdm = DaftParams::new(n, 0.0, 0.0).unwrap();
    let mut delta = CVector::zeros(n);
    delta[0] = 1.0.into();
    let spectrum = daft(&delta, &ofdm).unwrap();
    println!("\nzero chirp rates: DAFT(δ) = flat DFT spectrum");
    println!("  first entries: {:.4}, {:.4} (expect 1/√8 ≈ 0.3536)", spectrum[0].re, spectrum[1].re);

    // c1 = c2 = 1/(2N) is the discrete Fresnel transform (OCDM)
    let fresnel = DaftParams::new(n, 1.0 / 16.0, 1.0 / 16.0).unwrap();
    let x = CVector::from_fn(n, |_, _| rng.next_complex_gaussian(1.0));
    let y = daft(&x, &fresnel).unwrap();
    println!("\nFresnel case c1 = c2 = 1/(2N): ‖y‖/‖x‖ = {:.12}", y.norm() / x.norm());

    // fast O(N log N) path vs dense O(N²) path
    let p = DaftParams::new(1024, 0.137, -0.271).unwrap();
    let x = CVector::from_fn(1024, |_, _| rng.next_complex_gaussian(1.0));
    let fast = daft(&x, &p).unwrap();
    let slow = daft_naive(&x, &p).unwrap();
    let max_dev = (&fast - &slow).iter().map(|z| z.norm()).fold(0.0, f64::max);
    println!("\nn = 1024 fast vs dense path: max |Δ| = {max_dev:.2e}");

    let back = idaft(&fast, &p).unwrap();
    println!("round trip idaft(daft(x)): relative error = {:.2e}", (&back - &x).norm() / x.norm());
}
