//! Structure of the DAFT-domain effective channel H_eff = A H Aᴴ.
//!
//! With the AFDM c1 rule, each path lands on its own cyclic diagonal at
//! offset loc = α + 2Nc1·l, so every row shows one nonzero per path. OCDM
//! (c1 = 1/(2N)) can make two paths collide; the banded mask below makes
//! the difference visible.
//!
//! Run with: `cargo run --release --example effective_channel`

use afdm::channel::{ChannelPath, ChannelRealization};
use afdm::effchan::{build_heff_matrix, heff_closed_form, heff_general_row, EffectiveChannel};
use afdm::params::{scheme_params, ChannelProfile, Constellation, Scheme};
use num_complex::Complex64;

fn print_mask(label: &str, e: &EffectiveChannel) {
    println!("{label}");
    for row in e.support() {
        let mut line = vec!['·'; e.n()];
        for col in row {
            line[col] = '#';
        }
        println!("    {}", line.iter().collect::<String>());
    }
}

fn main() {
    let n = 8;
    let profile = ChannelProfile::new(1, 1);
    let two_path = |a1: f64, a2: f64| {
        ChannelRealization::new(
            vec![
                ChannelPath {
                    gain: Complex64::new(0.8, 0.3),
                    doppler_norm: a1,
                    delay: 0,
                },
                ChannelPath {
                    gain: Complex64::new(-0.2, 0.6),
                    doppler_norm: a2,
                    delay: 1,
                },
            ],
            n,
        )
        .unwrap()
    };

    // AFDM separates the two paths
    let ch = two_path(-1.0, 1.0);
    let afdm = scheme_params(Scheme::Afdm, &profile, n, Constellation::Bpsk);
    let e = heff_closed_form(&ch, &afdm).unwrap();
    println!("AFDM, paths (l=0, α=-1) and (l=1, α=+1), 2Nc1 = 3:");
    for pl in &e.per_path {
        println!(
            "  path (l={}, α={:+}): loc = {:+}, row-0 column = {}",
            pl.path.delay,
            pl.path.doppler_norm,
            pl.loc.unwrap(),
            pl.position_row0.unwrap()
        );
    }
    print_mask("  support mask (# = nonzero):", &e);

    // the closed form agrees with numeric conjugation
    let conj = build_heff_matrix(&ch, &afdm);
    println!(
        "  closed form vs A·H·Aᴴ: ‖Δ‖_F = {:.2e}",
        (&e.h_eff - &conj.h_eff).norm()
    );

    // OCDM collides the diff = 0 profile
    let colliding = two_path(1.0, 0.0);
    let ocdm = scheme_params(Scheme::Ocdm, &profile, n, Constellation::Bpsk);
    let e = heff_closed_form(&colliding, &ocdm).unwrap();
    println!("\nOCDM, paths (l=0, α=+1) and (l=1, α=0), 2Nc1 = 1:");
    for pl in &e.per_path {
        println!(
            "  path (l={}, α={:+}): loc = {:+}",
            pl.path.delay, pl.path.doppler_norm, pl.loc.unwrap()
        );
    }
    print_mask("  both paths on one diagonal (destructive addition):", &e);

    // fractional Doppler smears a path into a Dirichlet kernel
    let frac = ChannelRealization::new(
        vec![ChannelPath {
            gain: Complex64::new(1.0, 0.0),
            doppler_norm: 0.5,
            delay: 1,
        }],
        n,
    )
    .unwrap();
    let row = heff_general_row(&frac, &afdm, 0);
    println!("\nfractional Doppler ν = 0.5 (l = 1): |row 0| of H_eff");
    let moduli: Vec<String> = row.iter().map(|z| format!("{:.3}", z.norm())).collect();
    println!("  [{}]", moduli.join(", "));
}
