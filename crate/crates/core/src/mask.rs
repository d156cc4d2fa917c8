//! Dense bit masks over a ground set `{0, .., n-1}`.

use std::fmt;

/// Characteristic vector of a subset of the ground set.
///
/// Ordering is lexicographic on the sorted element list, so `{0,3} < {1,2}`.
/// This is the canonical order used by basis enumeration and tie-breaks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    n: usize,
    words: Vec<u64>,
}

impl Mask {
    pub fn empty(n: usize) -> Self {
        Mask {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut m = Mask::empty(n);
        for i in 0..n {
            m.insert(i);
        }
        m
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, elems: I) -> Self {
        let mut m = Mask::empty(n);
        for e in elems {
            m.insert(e);
        }
        m
    }

    /// Ground-set size this mask ranges over (not the subset cardinality).
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.n);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Mask) -> Mask {
        debug_assert_eq!(self.n, other.n);
        Mask {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        debug_assert_eq!(self.n, other.n);
        Mask {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &Mask) -> Mask {
        debug_assert_eq!(self.n, other.n);
        Mask {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn symmetric_difference(&self, other: &Mask) -> Mask {
        debug_assert_eq!(self.n, other.n);
        Mask {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Mask) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn with(&self, i: usize) -> Mask {
        let mut m = self.clone();
        m.insert(i);
        m
    }

    pub fn without(&self, i: usize) -> Mask {
        let mut m = self.clone();
        m.remove(i);
        m
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Build from the low `n` bits of an integer; only valid for `n <= 64`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= 64);
        let mut m = Mask::empty(n);
        if n > 0 {
            m.words[0] = bits & (u64::MAX >> (64 - n as u32));
        }
        m
    }

    /// Low-word view for subsets of small ground sets (`n <= 64`).
    pub fn bits(&self) -> u64 {
        assert!(self.n <= 64);
        self.words.first().copied().unwrap_or(0)
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mask {
    /// Lexicographic on sorted element lists: the mask owning the lowest
    /// differing element is the smaller one.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if a & low != 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let a = Mask::from_elements(10, [0, 3, 7]);
        let b = Mask::from_elements(10, [3, 4]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.union(&b).elements(), vec![0, 3, 4, 7]);
        assert_eq!(a.intersection(&b).elements(), vec![3]);
        assert_eq!(a.difference(&b).elements(), vec![0, 7]);
        assert_eq!(a.symmetric_difference(&b).elements(), vec![0, 4, 7]);
        assert!(Mask::from_elements(10, [3]).is_subset_of(&b));
        assert!(!a.is_disjoint_from(&b));
    }

    #[test]
    fn order_is_sorted_list_lex() {
        let n = 6;
        let a = Mask::from_elements(n, [0, 3]);
        let b = Mask::from_elements(n, [1, 2]);
        assert!(a < b);
        assert!(Mask::from_elements(n, [0, 1]) < Mask::from_elements(n, [0, 2]));
        assert!(Mask::from_elements(n, [2]) > Mask::from_elements(n, [1, 5]));
    }

    #[test]
    fn multiword() {
        let mut m = Mask::empty(130);
        m.insert(0);
        m.insert(64);
        m.insert(129);
        assert_eq!(m.elements(), vec![0, 64, 129]);
        assert_eq!(m.len(), 3);
        assert!(m.contains(64));
        m.remove(64);
        assert!(!m.contains(64));
    }
}
