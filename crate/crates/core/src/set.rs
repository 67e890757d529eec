//! Bitset-backed element sets.
//!
//! Elements are small integer indices. The default representation is two
//! machine words, which caps every universe at 128 elements; building with the
//! `wide` feature switches to four words (256 elements).

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, BitXor, Sub, SubAssign};

/// Index of an element inside a universe.
pub type Element = usize;

#[cfg(not(feature = "wide"))]
const WORDS: usize = 2;
#[cfg(feature = "wide")]
const WORDS: usize = 4;

/// Largest number of distinct element indices a set can hold.
pub const MAX_ELEMENTS: usize = 64 * WORDS;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ElementSet {
    words: [u64; WORDS],
}

impl ElementSet {
    pub const fn empty() -> Self {
        ElementSet { words: [0; WORDS] }
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Self {
        assert!(
            n <= MAX_ELEMENTS,
            "range {n} exceeds element cap {MAX_ELEMENTS}"
        );
        let mut s = Self::empty();
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn singleton(e: Element) -> Self {
        let mut s = Self::empty();
        s.insert(e);
        s
    }

    #[inline]
    pub fn contains(&self, e: Element) -> bool {
        e < MAX_ELEMENTS && self.words[e / 64] >> (e % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: Element) {
        assert!(
            e < MAX_ELEMENTS,
            "element {e} exceeds element cap {MAX_ELEMENTS}"
        );
        self.words[e / 64] |= 1 << (e % 64);
    }

    #[inline]
    pub fn remove(&mut self, e: Element) {
        if e < MAX_ELEMENTS {
            self.words[e / 64] &= !(1 << (e % 64));
        }
    }

    #[inline]
    #[must_use]
    pub fn with(mut self, e: Element) -> Self {
        self.insert(e);
        self
    }

    #[inline]
    #[must_use]
    pub fn without(mut self, e: Element) -> Self {
        self.remove(e);
        self
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<Element> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// One past the largest element (0 for the empty set).
    pub fn bound(&self) -> usize {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 64 - w.leading_zeros() as usize)
            .unwrap_or(0)
    }

    /// Elements in ascending (canonical) order.
    pub fn iter(&self) -> Iter {
        Iter {
            words: self.words,
            word: 0,
        }
    }

    /// All subsets of `self`, in binary-counting order over its elements.
    ///
    /// Panics if `self` has more than 30 elements.
    pub fn subsets(&self) -> impl Iterator<Item = ElementSet> {
        let elems: Vec<Element> = self.iter().collect();
        assert!(
            elems.len() <= 30,
            "refusing to enumerate 2^{} subsets",
            elems.len()
        );
        (0u32..(1u32 << elems.len())).map(move |mask| {
            let mut s = ElementSet::empty();
            for (bit, &e) in elems.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    s.insert(e);
                }
            }
            s
        })
    }
}

pub struct Iter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Iter {
    type Item = Element;

    #[inline]
    fn next(&mut self) -> Option<Element> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] = w & (w - 1);
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

impl IntoIterator for ElementSet {
    type Item = Element;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl IntoIterator for &ElementSet {
    type Item = Element;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<T: IntoIterator<Item = Element>>(iter: T) -> Self {
        let mut s = ElementSet::empty();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl<'a> FromIterator<&'a Element> for ElementSet {
    fn from_iter<T: IntoIterator<Item = &'a Element>>(iter: T) -> Self {
        iter.into_iter().copied().collect()
    }
}

macro_rules! word_op {
    ($trait:ident, $method:ident, $op_assign:tt) => {
        impl $trait for ElementSet {
            type Output = ElementSet;
            #[inline]
            fn $method(self, rhs: ElementSet) -> ElementSet {
                let mut out = self;
                for (a, b) in out.words.iter_mut().zip(rhs.words.iter()) {
                    *a $op_assign *b;
                }
                out
            }
        }
    };
}

word_op!(BitOr, bitor, |=);
word_op!(BitAnd, bitand, &=);
word_op!(BitXor, bitxor, ^=);

impl Sub for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn sub(self, rhs: ElementSet) -> ElementSet {
        let mut out = self;
        for (a, b) in out.words.iter_mut().zip(rhs.words.iter()) {
            *a &= !*b;
        }
        out
    }
}

impl BitOrAssign for ElementSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: ElementSet) {
        *self = *self | rhs;
    }
}

impl BitAndAssign for ElementSet {
    #[inline]
    fn bitand_assign(&mut self, rhs: ElementSet) {
        *self = *self & rhs;
    }
}

impl SubAssign for ElementSet {
    #[inline]
    fn sub_assign(&mut self, rhs: ElementSet) {
        *self = *self - rhs;
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Builds an [`ElementSet`] from a list of indices.
#[macro_export]
macro_rules! set {
    () => { $crate::ElementSet::empty() };
    ($($e:expr),+ $(,)?) => {{
        let mut s = $crate::ElementSet::empty();
        $( s.insert($e); )+
        s
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_and_len() {
        assert_eq!(ElementSet::range(0).len(), 0);
        assert_eq!(ElementSet::range(5).len(), 5);
        assert_eq!(ElementSet::range(64).len(), 64);
        assert_eq!(
            ElementSet::range(5).iter().collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn set_algebra() {
        let a = set![1, 2, 3];
        let b = set![3, 4];
        assert_eq!(a | b, set![1, 2, 3, 4]);
        assert_eq!(a & b, set![3]);
        assert_eq!(a - b, set![1, 2]);
        assert_eq!(a ^ b, set![1, 2, 4]);
        assert!(set![1, 2].is_subset(&a));
        assert!(!a.is_subset(&b));
        assert!(set![1].is_disjoint(&b));
        assert_eq!(a.first(), Some(1));
        assert_eq!(a.bound(), 4);
        assert_eq!(ElementSet::empty().first(), None);
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s = set![0, 3, 5];
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|x| x.is_subset(&s)));
        assert_eq!(all[0], ElementSet::empty());
        assert_eq!(all[7], s);
    }
}
