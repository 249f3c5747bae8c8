//! SplitMix64 and an unbiased Fisher-Yates shuffle on top of it.
//!
//! SplitMix64 (Steele, Lea and Flood, 2014) advances its state by the
//! constant `0x9e3779b97f4a7c15` and mixes it with two multiply-xorshift
//! rounds (`0xbf58476d1ce4e5b9`, `0x94d049bb133111eb`). It is trivial to port,
//! so a permutation produced here can be reproduced in any language.

#[derive(Debug, Clone)]
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

    /// Uniform integer in `[0, bound)`. Draws below `2^64 mod bound` are
    /// rejected so every residue is equally likely.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let reject_under = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= reject_under {
                return x % bound;
            }
        }
    }
}

/// Shuffles in place: for `i` from `len - 1` down to 1, swap `i` with a
/// uniform `j` in `[0, i]`.
pub fn shuffle<T>(items: &mut [T], seed: u64) {
    let mut rng = SplitMix64::new(seed);
    for i in (1..items.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}
