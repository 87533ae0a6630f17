/// Minimal deterministic PRNG (splitmix64).
///
/// All randomized constructions in this crate (liftings, retry shifts,
/// factor-recovery lines) draw from this generator so that a run is fully
/// reproducible from its seed, independent of platform and dependency
/// versions.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, bound)`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Modulo bias is irrelevant here: bounds are tiny relative to 2^64.
        self.next_u64() % bound
    }

    /// Current internal state, reported in retry diagnostics.
    pub fn state(&self) -> u64 {
        self.state
    }

    /// Derive an independent stream for a named stage. Streams derived from
    /// the same (seed, label, index) triple are identical across runs.
    pub fn derive(seed: u64, label: &str, index: u64) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Rng::new(seed ^ h ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}
