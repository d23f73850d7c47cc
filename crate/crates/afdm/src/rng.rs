//! Counter-based deterministic random number generation.
//!
//! Monte Carlo trials must be reproducible from `(seed, trial index)` alone
//! and independent of how trials are partitioned across worker threads. The
//! generator here is splitmix64 used as a pure counter stream: the state is a
//! counter advanced by a fixed odd constant and each output is a finalizer of
//! the counter, so a stream can be constructed at any point from its key
//! without replaying prior draws.
//!
//! Keys are derived by folding labeled parts (seed, scheme, SNR index, trial
//! index, substream tag) through the same mixing function, giving independent
//! substreams per trial without shared state.

use num_complex::Complex64;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic splitmix64 stream.
#[derive(Debug, Clone)]
pub struct DetRng {
    state: u64,
}

impl DetRng {
    /// Stream keyed by a bare seed.
    pub fn new(seed: u64) -> Self {
        Self { state: mix64(seed) }
    }

    /// Stream keyed by a seed plus labeled parts (substream tags, trial
    /// indices). Distinct part sequences give statistically independent
    /// streams.
    pub fn from_parts(seed: u64, parts: &[u64]) -> Self {
        let mut key = mix64(seed);
        for &p in parts {
            key = mix64(key.wrapping_add(GOLDEN_GAMMA).wrapping_add(mix64(p)));
        }
        Self { state: key }
    }

    /// Next 64 uniform bits.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`, safe as a `ln` argument.
    #[inline]
    fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`.
    #[inline]
    pub fn next_index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "bound must be positive");
        (self.next_u64() % bound as u64) as usize
    }

    /// Fair coin.
    #[inline]
    pub fn next_bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// Pair of independent standard normal variates (Box-Muller).
    #[inline]
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_f64_open();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Circularly symmetric complex Gaussian with total variance `variance`
    /// (`variance / 2` per real dimension).
    #[inline]
    pub fn next_complex_gaussian(&mut self, variance: f64) -> Complex64 {
        let (re, im) = self.next_gaussian_pair();
        let s = (variance / 2.0).sqrt();
        Complex64::new(s * re, s * im)
    }
}
