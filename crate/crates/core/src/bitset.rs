//! Fixed-width bit sets used for node sets and cut flags.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits<const W: usize>(pub [u64; W]);

/// Set of node indices (up to 256 nodes).
pub type NodeSet = Bits<4>;
/// Set of cut indices (up to 512 cuts).
pub type CutBits = Bits<8>;

impl<const W: usize> Default for Bits<W> {
    fn default() -> Self {
        Self([0; W])
    }
}

impl<const W: usize> Bits<W> {
    pub const CAPACITY: usize = 64 * W;

    pub fn empty() -> Self {
        Self([0; W])
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::empty();
        s.insert(i);
        s
    }

    pub fn from_iter_idx<I: IntoIterator<Item = usize>>(items: I) -> Self {
        let mut s = Self::empty();
        for i in items {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, on: bool) {
        if on {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    #[inline]
    pub fn union(&self, o: &Self) -> Self {
        let mut r = *self;
        for k in 0..W {
            r.0[k] |= o.0[k];
        }
        r
    }

    #[inline]
    pub fn intersect(&self, o: &Self) -> Self {
        let mut r = *self;
        for k in 0..W {
            r.0[k] &= o.0[k];
        }
        r
    }

    #[inline]
    pub fn minus(&self, o: &Self) -> Self {
        let mut r = *self;
        for k in 0..W {
            r.0[k] &= !o.0[k];
        }
        r
    }

    #[inline]
    pub fn is_subset(&self, o: &Self) -> bool {
        (0..W).all(|k| self.0[k] & !o.0[k] == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, o: &Self) -> bool {
        (0..W).all(|k| self.0[k] & o.0[k] == 0)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..W).flat_map(move |k| {
            let mut w = self.0[k];
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

impl<const W: usize> fmt::Debug for Bits<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<const W: usize> serde::Serialize for Bits<W> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de, const W: usize> serde::Deserialize<'de> for Bits<W> {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        let items = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = items.iter().find(|&&i| i >= Self::CAPACITY) {
            return Err(serde::de::Error::custom(format!(
                "index {bad} out of range"
            )));
        }
        Ok(Self::from_iter_idx(items))
    }
}
