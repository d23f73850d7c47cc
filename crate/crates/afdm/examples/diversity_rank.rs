//! Diversity order as the minimum rank of Φ(δ) = [H₁δ | H₂δ] over every
//! BPSK codeword difference: AFDM reaches rank 2 on every two-path profile,
//! the tuned DAFT-OFDM and colliding OCDM stay at rank 1. Also shows the
//! PEP upper bound decaying with slope 2 for a full-rank pair.
//!
//! Run with: `cargo run --release --example diversity_rank`

use afdm::channel::{ChannelPath, ChannelRealization};
use afdm::diversity::{min_rank_sweep, pep_upper_bound, two_path_pair_criterion};
use afdm::params::{scheme_params, scheme_params_tuned, ChannelProfile, Constellation, Scheme};
use afdm::CVector;
use num_complex::Complex64;

fn main() {
    let n = 8;
    let profile = ChannelProfile::new(1, 1);
    let ch = ChannelRealization::new(
        vec![
            ChannelPath {
                gain: Complex64::new(1.0, 0.0),
                doppler_norm: -1.0,
                delay: 0,
            },
            ChannelPath {
                gain: Complex64::new(1.0, 0.0),
                doppler_norm: 1.0,
                delay: 1,
            },
        ],
        n,
    )
    .unwrap();

    println!("exhaustive BPSK δ-sweep (3^8 − 1 differences, ±δ deduplicated):");
    let afdm = scheme_params(Scheme::Afdm, &profile, n, Constellation::Bpsk);
    let daft_ofdm = scheme_params_tuned(
        Scheme::DaftOfdm,
        &profile,
        &ch.integer_pairs(),
        n,
        Constellation::Bpsk,
    );
    let ocdm = scheme_params(Scheme::Ocdm, &profile, n, Constellation::Bpsk);

    for (label, params, channel) in [
        ("afdm", &afdm, &ch),
        ("daft-ofdm", &daft_ofdm, &ch),
        (
            "ocdm (diff=0 profile)",
            &ocdm,
            &ChannelRealization::new(
                vec![
                    ChannelPath {
                        gain: Complex64::new(1.0, 0.0),
                        doppler_norm: 1.0,
                        delay: 0,
                    },
                    ChannelPath {
                        gain: Complex64::new(1.0, 0.0),
                        doppler_norm: 0.0,
                        delay: 1,
                    },
                ],
                n,
            )
            .unwrap(),
        ),
    ] {
        let report = min_rank_sweep(channel, params, Constellation::Bpsk).unwrap();
        println!(
            "  {label:<22} min rank = {} (P = {}), full diversity: {}, histogram: {:?}",
            report.min_rank, report.p, report.full_diversity, report.rank_histogram
        );
    }

    // PEP bound for a single-entry difference under AFDM: slope -> rank = 2
    let mut delta = CVector::zeros(n);
    delta[3] = Complex64::new(2.0, 0.0);
    println!("\nPEP upper bound for a single-entry δ under AFDM:");
    let mut prev: Option<f64> = None;
    for snr_db in [10.0f64, 20.0, 30.0, 40.0] {
        let bound = pep_upper_bound(&delta, &ch, &afdm, 10f64.powf(-snr_db / 10.0)).unwrap();
        let slope = prev.map(|p| -(bound.log10() - p.log10()));
        prev = Some(bound);
        match slope {
            Some(s) => println!("  {snr_db:>4} dB: {bound:.3e}  (local slope {s:.2})"),
            None => println!("  {snr_db:>4} dB: {bound:.3e}"),
        }
    }

    // the two-path pair criterion on a same-delay channel
    let same_delay = ChannelRealization::new(
        vec![
            ChannelPath {
                gain: Complex64::new(1.0, 0.0),
                doppler_norm: -1.0,
                delay: 0,
            },
            ChannelPath {
                gain: Complex64::new(1.0, 0.0),
                doppler_norm: 1.0,
                delay: 0,
            },
        ],
        n,
    )
    .unwrap();
    let mut d = CVector::zeros(n);
    for i in [2usize, 4, 6] {
        d[i] = Complex64::new(2.0, 0.0);
    }
    let with_irrational_c2 = two_path_pair_criterion(&d, 4, &same_delay, &afdm).unwrap();
    let mut c2_zero = afdm.clone();
    c2_zero.c2 = 0.0;
    let with_zero_c2 = two_path_pair_criterion(&d, 4, &same_delay, &c2_zero).unwrap();
    println!("\n2×2 pair criterion for δ = (0,0,2,0,2,0,2,0), z = 4:");
    println!("  c2 = √2/128 (irrational): full rank guaranteed = {with_irrational_c2}");
    println!("  c2 = 0 (rational):        full rank guaranteed = {with_zero_c2}");
}
