//! Portable counter-based pseudo-random numbers.
//!
//! Everything that draws randomness in this crate (instance generators,
//! sampling estimators, property checkers) goes through SplitMix64 so that a
//! seed produces bit-identical streams on every platform.

/// SplitMix64 generator. 64-bit state, 64-bit output per step.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream keyed by (seed, stream index).
    pub fn stream(seed: u64, stream: u64) -> Self {
        Self {
            state: mix(seed
                ^ mix(stream
                    .wrapping_mul(GOLDEN)
                    .wrapping_add(0x1234_5678_9abc_def0))),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in [0, 1).
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_f64() * n as f64) as usize % n.max(1)
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.next_f64().max(f64::MIN_POSITIVE);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Stateless counter hash mapped to [0, 1). Used by the sampling estimator so
/// that the j-th draw of the i-th coordinate depends only on (seed, j, i).
#[inline]
pub fn counter_f64(seed: u64, hi: u64, lo: u64) -> f64 {
    let z = mix(seed ^ mix(hi.wrapping_mul(GOLDEN)) ^ mix(lo.wrapping_mul(0xc2b2_ae3d_27d4_eb4f)));
    (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
