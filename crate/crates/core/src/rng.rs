//! Deterministic pseudo-randomness for audits, sampling and search.
//!
//! Everything in this crate that consumes randomness goes through
//! [`SplitMix64`], so the same seed gives the same answer on every platform
//! and at every thread count. Parallel trials derive one independent stream
//! per `(master seed, trial index)` pair and are therefore
//! scheduling-independent.

/// SplitMix64 generator (Steele–Lea–Flood finalizer over a Weyl sequence).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for trial `index` under `master`.
    pub fn derived(master: u64, index: u64) -> Self {
        let mut r = SplitMix64::new(master ^ index.wrapping_mul(GOLDEN).rotate_left(17));
        r.next_u64();
        r
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound`; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// In-place Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}

/// Uniform `k`-subset of `0..n` by seeded shuffle + prefix, returned sorted.
pub fn sample_subset(n: usize, k: usize, seed: u64) -> Vec<usize> {
    assert!(k <= n, "cannot sample {k} of {n} elements");
    let mut xs: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut xs);
    xs.truncate(k);
    xs.sort_unstable();
    xs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<u64> = (0..16).map({
            let mut r = SplitMix64::new(7);
            move |_| r.next_u64()
        }).collect();
        let b: Vec<u64> = (0..16).map({
            let mut r = SplitMix64::new(7);
            move |_| r.next_u64()
        }).collect();
        assert_eq!(a, b);
        let mut r = SplitMix64::new(8);
        assert_ne!(a[0], r.next_u64());
    }

    #[test]
    fn subsets_are_sorted_and_sized() {
        for k in 0..=10 {
            let s = sample_subset(10, k, 3);
            assert_eq!(s.len(), k);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&x| x < 10));
        }
        assert_eq!(sample_subset(6, 3, 11), sample_subset(6, 3, 11));
    }

    #[test]
    fn derived_streams_differ() {
        let mut a = SplitMix64::derived(0, 0);
        let mut b = SplitMix64::derived(0, 1);
        assert_ne!(a.next_u64(), b.next_u64());
    }
}
