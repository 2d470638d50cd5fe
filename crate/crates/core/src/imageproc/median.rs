//! Sliding-window median over a clamped 3D box.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Median of a multiset under insertions and removals: a max-heap of the
/// lower half, a min-heap of the upper half, and lazy deletion.
#[derive(Debug, Default)]
pub(crate) struct SlidingMedian {
    lo: BinaryHeap<Key>,
    hi: BinaryHeap<Reverse<Key>>,
    pending: HashMap<u64, usize>,
    lo_len: usize,
    hi_len: usize,
}

impl SlidingMedian {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.lo_len + self.hi_len
    }

    pub(crate) fn insert(&mut self, v: f64) {
        match self.lo.peek() {
            Some(top) if v > top.0 => {
                self.hi.push(Reverse(Key(v)));
                self.hi_len += 1;
            }
            _ => {
                self.lo.push(Key(v));
                self.lo_len += 1;
            }
        }
        self.rebalance();
    }

    /// Removes one copy of `v`, which must be present.
    pub(crate) fn remove(&mut self, v: f64) {
        *self.pending.entry(v.to_bits()).or_insert(0) += 1;
        let in_lo = self.lo.peek().is_some_and(|top| v <= top.0);
        if in_lo {
            self.lo_len -= 1;
            if self
                .lo
                .peek()
                .is_some_and(|top| top.0.to_bits() == v.to_bits())
            {
                self.prune_lo();
            }
        } else {
            self.hi_len -= 1;
            if self
                .hi
                .peek()
                .is_some_and(|top| top.0 .0.to_bits() == v.to_bits())
            {
                self.prune_hi();
            }
        }
        self.rebalance();
    }

    /// Mean of the two middle values for even counts.
    pub(crate) fn median(&self) -> f64 {
        let lo = self.lo.peek().map_or(f64::NAN, |k| k.0);
        if self.lo_len > self.hi_len {
            lo
        } else {
            let hi = self.hi.peek().map_or(f64::NAN, |k| k.0 .0);
            0.5 * (lo + hi)
        }
    }

    fn take_pending(&mut self, bits: u64) -> bool {
        match self.pending.get_mut(&bits) {
            Some(n) => {
                *n -= 1;
                if *n == 0 {
                    self.pending.remove(&bits);
                }
                true
            }
            None => false,
        }
    }

    fn prune_lo(&mut self) {
        while let Some(top) = self.lo.peek() {
            let bits = top.0.to_bits();
            if !self.take_pending(bits) {
                break;
            }
            self.lo.pop();
        }
    }

    fn prune_hi(&mut self) {
        while let Some(top) = self.hi.peek() {
            let bits = top.0 .0.to_bits();
            if !self.take_pending(bits) {
                break;
            }
            self.hi.pop();
        }
    }

    /// Keeps `lo_len == hi_len` or `lo_len == hi_len + 1`.
    fn rebalance(&mut self) {
        if self.lo_len > self.hi_len + 1 {
            if let Some(k) = self.lo.pop() {
                self.hi.push(Reverse(k));
                self.lo_len -= 1;
                self.hi_len += 1;
                self.prune_lo();
            }
        } else if self.lo_len < self.hi_len {
            if let Some(Reverse(k)) = self.hi.pop() {
                self.lo.push(k);
                self.hi_len -= 1;
                self.lo_len += 1;
                self.prune_hi();
            }
        }
    }
}

/// Clamped window `[i - before, i + after]` of a kernel of `n` samples.
#[inline]
pub(crate) fn window(i: usize, n: usize, dim: usize) -> (usize, usize) {
    let before = n / 2;
    let after = n - 1 - before;
    (i.saturating_sub(before), (i + after).min(dim - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(v: &[f64]) -> f64 {
        let mut s = v.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        if n % 2 == 1 {
            s[n / 2]
        } else {
            0.5 * (s[n / 2 - 1] + s[n / 2])
        }
    }

    #[test]
    fn matches_sorting_under_random_updates() {
        for (seed, levels) in [(5, 40), (6, 4), (7, 2)] {
            check_random_updates(seed, levels);
        }
    }

    fn check_random_updates(seed: u64, levels: u32) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = SlidingMedian::new();
        let mut live: Vec<f64> = Vec::new();
        for step in 0..20000 {
            // Repeated values exercise lazy deletion of duplicates.
            if live.is_empty() || rng.random_bool(0.55) {
                let v = (rng.random_range(0..levels) as f64) * 0.5;
                m.insert(v);
                live.push(v);
            } else {
                let i = rng.random_range(0..live.len());
                let v = live.swap_remove(i);
                m.remove(v);
            }
            assert_eq!(m.len(), live.len());
            if !live.is_empty() {
                assert_eq!(m.median(), brute(&live), "step {step}");
            }
        }
    }

    #[test]
    fn windows_clamp_at_edges() {
        assert_eq!(window(0, 10, 100), (0, 4));
        assert_eq!(window(50, 10, 100), (45, 54));
        assert_eq!(window(99, 10, 100), (94, 99));
        assert_eq!(window(3, 5, 4), (1, 3));
    }
}
