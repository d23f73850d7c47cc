//! Pilot guard-symbol overhead: AFDM needs (2l+2)(2α+1) − 2 guard symbols
//! per pilot versus (2l+1)(4α+1) − 1 for OTFS; the gap widens with the
//! channel spread.
//!
//! Run with: `cargo run --release --example guard_overhead`

use afdm::params::{guard_symbol_count, ChannelProfile, GuardScheme};

fn main() {
    println!("guard symbols per pilot (AFDM / OTFS):");
    print!("  l_max\\α_max ");
    for a in 0..=4u32 {
        print!("{a:>12}");
    }
    println!();
    for l in 0..=4usize {
        print!("  {l:>11} ");
        for a in 0..=4u32 {
            let p = ChannelProfile::new(l, a);
            let afdm = guard_symbol_count(GuardScheme::Afdm, &p);
            let otfs = guard_symbol_count(GuardScheme::Otfs, &p);
            print!("{:>12}", format!("{afdm}/{otfs}"));
        }
        println!();
    }

    let p = ChannelProfile::new(2, 3);
    println!(
        "\ndense-grid channel (l_max = 2, α_max = 3): AFDM {} vs OTFS {} guard symbols",
        guard_symbol_count(GuardScheme::Afdm, &p),
        guard_symbol_count(GuardScheme::Otfs, &p),
    );
}
