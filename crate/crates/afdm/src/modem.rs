//! Transmitter and receiver front-end: bit mapping, IDAFT modulation,
//! chirp-periodic prefix, DAFT demodulation.
//!
//! The chirp-periodic prefix (CPP) generalizes the cyclic prefix: prefix
//! samples at negative time indices obey
//! `s_n = s_{N+n} · exp(-j2πc1(N² + 2Nn))`, n = -L..-1, which is exactly the
//! periodicity the DAFT assumes. Whenever `2Nc1` is an integer and `N` is
//! even the phase factor is 1 and the CPP is a plain CP.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{AfdmError, Result};
use crate::params::{Constellation, ModemParams};
use crate::transforms::{daft, idaft};
use crate::CVector;

/// A block of constellation symbols in the DAFT domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolVector {
    pub symbols: CVector,
    pub constellation: Constellation,
}

impl SymbolVector {
    /// Wraps a vector whose entries must all be exact constellation points.
    pub fn new(symbols: CVector, constellation: Constellation) -> Result<Self> {
        let pts = constellation.points();
        for (i, s) in symbols.iter().enumerate() {
            if !pts.contains(s) {
                return Err(AfdmError::Config(format!(
                    "entry {i} ({s}) is not a {constellation} point"
                )));
            }
        }
        Ok(Self {
            symbols,
            constellation,
        })
    }

    /// Builds the symbol vector from per-symbol constellation indices.
    pub fn from_indices(indices: &[usize], constellation: Constellation) -> Self {
        let pts = constellation.points();
        Self {
            symbols: CVector::from_iterator(indices.len(), indices.iter().map(|&i| pts[i])),
            constellation,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.len() == 0
    }
}

/// One modulated symbol: N body samples plus the L-sample prefix that is
/// transmitted first.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// Samples s_0 .. s_{N-1}.
    pub body: CVector,
    /// Samples s_{-L} .. s_{-1}.
    pub prefix: CVector,
}

impl Frame {
    /// Wire order: prefix first, then body.
    pub fn to_samples(&self) -> CVector {
        let l = self.prefix.len();
        let n = self.body.len();
        CVector::from_fn(l + n, |i, _| {
            if i < l {
                self.prefix[i]
            } else {
                self.body[i - l]
            }
        })
    }
}

/// Index of the nearest constellation point, ties broken toward the lowest
/// index.
pub fn nearest_point_index(z: Complex64, constellation: Constellation) -> usize {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, p) in constellation.points().iter().enumerate() {
        let d = (z - p).norm_sqr();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Gray-maps a bit block onto `n` constellation symbols.
pub fn map_bits(bits: &[bool], constellation: Constellation, n: usize) -> Result<SymbolVector> {
    let bps = constellation.bits_per_symbol();
    if bits.len() != n * bps {
        return Err(AfdmError::DimensionMismatch {
            context: "map_bits",
            expected: n * bps,
            actual: bits.len(),
        });
    }
    let pts = constellation.points();
    let symbols = CVector::from_iterator(
        n,
        bits.chunks(bps).map(|chunk| {
            let idx = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            pts[idx]
        }),
    );
    Ok(SymbolVector {
        symbols,
        constellation,
    })
}

/// Hard-decision demapper: nearest constellation point per entry, then the
/// point's bit label.
pub fn demap_bits(symbols: &CVector, constellation: Constellation) -> Vec<bool> {
    let bps = constellation.bits_per_symbol();
    let mut bits = Vec::with_capacity(symbols.len() * bps);
    for &z in symbols.iter() {
        let idx = nearest_point_index(z, constellation);
        for k in (0..bps).rev() {
            bits.push((idx >> k) & 1 == 1);
        }
    }
    bits
}

/// CPP phase factor `exp(-j2πc1(N² + 2Nn))` for prefix index n in -L..-1.
fn cpp_phase(c1: f64, n_samples: usize, n: i64) -> Complex64 {
    let nn = n_samples as f64;
    Complex64::cis(-TAU * c1 * (nn * nn + 2.0 * nn * n as f64))
}

/// IDAFT-modulates one symbol block and prepends the chirp-periodic prefix.
pub fn modulate(x: &SymbolVector, p: &ModemParams) -> Result<Frame> {
    if x.len() != p.n {
        return Err(AfdmError::DimensionMismatch {
            context: "modulate",
            expected: p.n,
            actual: x.len(),
        });
    }
    let body = idaft(&x.symbols, &p.daft_params())?;
    let l = p.cpp_len;
    let prefix = CVector::from_fn(l, |i, _| {
        let n = i as i64 - l as i64; // n in -L..-1
        body[(p.n as i64 + n) as usize] * cpp_phase(p.c1, p.n, n)
    });
    Ok(Frame { body, prefix })
}

/// DAFT-demodulates the received body samples (CPP already discarded).
///
/// No equalization happens here; the output is the raw DAFT-domain vector
/// that detection consumes. The transform is unitary, so white noise stays
/// white.
pub fn demodulate(r: &CVector, p: &ModemParams) -> Result<CVector> {
    daft(r, &p.daft_params())
}

/// Drops the first `cpp_len` samples of a received sequence of length
/// `N + cpp_len`.
pub fn discard_cpp(received: &CVector, cpp_len: usize) -> Result<CVector> {
    if received.len() < cpp_len {
        return Err(AfdmError::DimensionMismatch {
            context: "discard_cpp",
            expected: cpp_len,
            actual: received.len(),
        });
    }
    let n = received.len() - cpp_len;
    Ok(CVector::from_fn(n, |i, _| received[cpp_len + i]))
}
