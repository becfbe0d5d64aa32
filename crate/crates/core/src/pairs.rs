//! Fixed-width bit set over unordered pairs of small indices.

/// Largest index count a [`PairSet`] can hold: C(16, 2) = 120 pairs fit in 128 bits.
pub const MAX_ELEMENTS: usize = 16;

#[inline]
fn slot(i: usize, j: usize) -> u32 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(lo != hi && hi < MAX_ELEMENTS);
    (hi * (hi - 1) / 2 + lo) as u32
}

/// Set of unordered pairs `{i, j}` with `i != j < 16`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PairSet(u128);

impl PairSet {
    pub const fn new() -> Self {
        PairSet(0)
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.0 >> slot(i, j) & 1 == 1
    }

    /// Inserts `{i, j}`; returns `false` when it was already present.
    #[inline]
    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        let bit = 1u128 << slot(i, j);
        let fresh = self.0 & bit == 0;
        self.0 |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize, j: usize) {
        self.0 &= !(1u128 << slot(i, j));
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..MAX_ELEMENTS)
            .flat_map(|hi| (0..hi).map(move |lo| (lo, hi)))
            .filter(move |&(lo, hi)| self.contains(lo, hi))
    }
}
