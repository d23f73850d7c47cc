//! AFDM (affine frequency division multiplexing) transceiver simulation over
//! linear time-varying channels.
//!
//! The crate covers the whole chain needed to study chirp-based multicarrier
//! waveforms on doubly dispersive (delay-Doppler) channels:
//!
//! - [`transforms`] — the discrete affine Fourier transform (DAFT) and its
//!   inverse, parameterized by the two chirp rates `(c1, c2)`.
//! - [`params`] — system parameterization: the AFDM `c1` rule, scheme presets
//!   (AFDM / OCDM / DAFT-OFDM / OFDM), separability checks, guard-symbol
//!   accounting.
//! - [`modem`] — bit mapping, IDAFT modulation, chirp-periodic prefix
//!   handling, DAFT demodulation.
//! - [`channel`] — doubly dispersive channel simulation in time-domain and
//!   matrix form, AWGN, random channel generation.
//! - [`effchan`] — the DAFT-domain effective channel: numeric conjugation,
//!   the sparse closed form, fractional-Doppler rows, delay-Doppler profile
//!   recovery.
//! - [`detect`] — ML (exhaustive) and linear MMSE detection.
//! - [`diversity`] — diversity-order analysis: codeword-difference rank
//!   sweeps, PEP bounds, the two-path pair criterion.
//! - [`harness`] — seeded Monte Carlo BER sweeps with CSV/JSON output.
//! - [`cli`] — the `afdm` command-line front end.
//!
//! Every operation is a pure function of its inputs and all randomness flows
//! through the counter-based [`rng::DetRng`], so any experiment is exactly
//! reproducible from its config (including across thread counts).
//!
//! See the crate examples (`cargo run --release --example <name>`) for one
//! runnable walkthrough per capability.

pub mod channel;
pub mod cli;
pub mod detect;
pub mod diversity;
pub mod effchan;
pub mod error;
pub mod harness;
pub mod modem;
pub mod params;
pub mod rng;
pub mod selftest;
pub mod transforms;

pub use error::{AfdmError, Result};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex column vector, the carrier for signals in all domains.
pub type CVector = DVector<Complex64>;
/// Dense complex matrix, the carrier for transform and channel matrices.
pub type CMatrix = DMatrix<Complex64>;
