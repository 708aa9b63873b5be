//! Deterministic PRNG for simulation runs.
//!
//! One stream per run, seeded from the config. The algorithm is xorshift64*
//! (Vigna 2016) with the seed passed through one round of SplitMix64 so that
//! seed 0 does not hit the xorshift lock-up state:
//!
//! ```text
//! init:  z = seed + 0x9E3779B97F4A7C15
//!        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!        state = z ^ (z >> 31)           (if 0, remap to 0x9E3779B97F4A7C15)
//! next:  x ^= x >> 12; x ^= x << 25; x ^= x >> 27
//!        output = x * 0x2545F4914F6CDD1D
//! ```
//!
//! Derived draws:
//! * `uniform01` = top 53 bits of `next` scaled by 2^-53, in `[0, 1)`.
//! * `range(n)`  = `next % n`.
//! * `shuffle`   = Fisher-Yates from the back using `range`.
//!
//! Any implementation following these rules reproduces a run bit-exactly.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRng {
    state: u64,
}

impl RunRng {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        if z == 0 {
            z = 0x9E37_79B9_7F4A_7C15;
        }
        Self { state: z }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    #[inline]
    pub fn range(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// In-place Fisher-Yates shuffle, iterating from the last index down.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.range(i + 1);
            items.swap(i, j);
        }
    }
}

/// Stateless 64-bit mixer (one SplitMix64 finalization round).
///
/// Used to derive independent per-cell seeds in parameter sweeps:
/// `mix(mix(mix(mix(base) ^ c_idx) ^ p_idx) ^ rep_idx)`.
pub fn mix64(v: u64) -> u64 {
    let mut z = v.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one replicate of one sweep cell, recomputable in isolation.
pub fn cell_seed(base_seed: u64, c_idx: u64, p_idx: u64, rep_idx: u64) -> u64 {
    mix64(mix64(mix64(mix64(base_seed) ^ c_idx) ^ p_idx) ^ rep_idx)
}
