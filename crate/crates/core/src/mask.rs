use std::fmt;

/// Fixed-width bitset over item ids (vertices or edges, depending on context).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    len: usize,
    words: Vec<u64>,
}

impl SubsetMask {
    pub fn empty(len: usize) -> Self {
        SubsetMask {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut mask = Self::empty(len);
        for i in 0..len {
            mask.insert(i);
        }
        mask
    }

    /// Mask whose low `len` bits are taken from `bits`. Used by the enumerators,
    /// which walk masks as integers.
    pub fn from_bits(len: usize, bits: u64) -> Self {
        assert!(len <= 64, "from_bits supports at most 64 items");
        let mut mask = Self::empty(len);
        if len > 0 {
            let keep = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            mask.words[0] = bits & keep;
        }
        mask
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = Self::empty(len);
        for i in indices {
            mask.insert(i);
        }
        mask
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for mask of width {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn with(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.insert(i);
        m
    }

    pub fn without(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.remove(i);
        m
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complement(&self) -> Self {
        let mut m = Self::empty(self.len);
        for i in 0..self.len {
            if !self.contains(i) {
                m.insert(i);
            }
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
