//! Small deterministic PRNG used by all seeded generators.
//!
//! SplitMix64 (Steele, Lea, Vigna): a fixed, portable algorithm, so that the
//! same seed reproduces the same arrangement, point placement, and
//! construction on every run. Not cryptographic; not meant to be.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[lo, hi]` (inclusive). Modulo bias is irrelevant at
    /// the range sizes used here (a few thousand values out of 2^64).
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    /// Derives an independent child generator; used to give sub-tasks their
    /// own deterministic streams.
    pub fn fork(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64())
    }
}
