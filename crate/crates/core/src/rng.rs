//! Counter-based pseudo-random generator for the parameter scans.
//!
//! SplitMix64 (Steele, Lea, Flood 2014): state advances by the golden-ratio
//! increment 0x9E3779B97F4A7C15 and each output is the finalizer
//! xor-shift-multiply with 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB. Streams
//! are keyed by (seed, counter), so every scan record owns an independent
//! generator regardless of how the work is scheduled.

/// Golden-ratio increment of the SplitMix64 state.
const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_2: u64 = 0x94D0_49BB_1331_11EB;

/// Finalizer: bijective scramble of a 64-bit word.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_2);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Stream keyed by (seed, index): the state is the scrambled combination
    /// of both words, so neighbouring indices are decorrelated.
    pub fn stream(seed: u64, index: u64) -> Self {
        SplitMix64 {
            state: mix64(seed ^ mix64(index.wrapping_mul(GAMMA).wrapping_add(GAMMA))),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = SplitMix64::stream(42, 7);
        let mut b = SplitMix64::stream(42, 7);
        let mut c = SplitMix64::stream(42, 8);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..1000 {
            let x = rng.uniform(2.0, 3.0);
            assert!((2.0..3.0).contains(&x));
        }
    }

    #[test]
    fn next_f64_covers_unit_interval() {
        let mut rng = SplitMix64::new(9);
        let xs: Vec<f64> = (0..2000).map(|_| rng.next_f64()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean = {mean}");
        assert!(xs.iter().all(|&x| (0.0..1.0).contains(&x)));
    }
}
