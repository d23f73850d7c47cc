//! Sanity anchor: a single fixed unit-gain path turns the chain into plain
//! BPSK over AWGN, whose BER is Q(√(2·SNR)) in closed form. The Monte Carlo
//! estimate must track it.
//!
//! Run with: `cargo run --release --example awgn_baseline`

use afdm::channel::{PathLayout, PathSpec};
use afdm::harness::{run_sweep, Detector, ExperimentConfig};
use afdm::params::{ChannelProfile, Constellation, Scheme};

fn q_function(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

fn main() {
    let cfg = ExperimentConfig {
        n: 8,
        schemes: vec![Scheme::Afdm],
        profile: ChannelProfile::new(0, 0),
        path_layout: PathLayout::Explicit(vec![PathSpec {
            delay: 0,
            doppler: 0.0,
            gain: Some([1.0, 0.0]), // fixed gain: no fading
        }]),
        constellation: Constellation::Bpsk,
        detector: Detector::Ml,
        snr_db_grid: vec![1.0, 3.0, 5.0, 7.0, 9.0],
        trials: 50_000,
        seed: 7,
        min_errors: u64::MAX,
    };

    let points = run_sweep(&cfg, 0).unwrap();
    println!("snr_db   measured     theory Q(√(2·SNR))   |z-score|");
    for p in &points {
        let snr = 10f64.powf(p.snr_db / 10.0);
        let theory = q_function((2.0 * snr).sqrt());
        let sigma = (theory * (1.0 - theory) / p.bits_total as f64).sqrt();
        println!(
            "{:>6}   {:.4e}   {:.4e}           {:.2}",
            p.snr_db,
            p.ber,
            theory,
            (p.ber - theory).abs() / sigma
        );
    }
}
