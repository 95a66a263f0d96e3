//! Fixed-length bit vectors.
//!
//! Bit `i` is stored most-significant-first inside word `i / 64`, so the
//! derived word order agrees with the order of the bitstrings written as
//! `"0110…"`. The same type serves as a hypercube point and as a subset of
//! carrier indices.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

#[inline]
fn mask(i: usize) -> u64 {
    1u64 << (63 - (i % 64))
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        b.clear_tail();
        b
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        let mut b = Bits::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => b.set(i, true),
                _ => return None,
            }
        }
        Some(b)
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bits::zeros(len);
        for i in indices {
            b.set(i, true);
        }
        b
    }

    pub fn from_bools(bools: impl IntoIterator<Item = bool>) -> Self {
        let v: Vec<bool> = bools.into_iter().collect();
        let mut b = Bits::zeros(v.len());
        for (i, x) in v.into_iter().enumerate() {
            if x {
                b.set(i, true);
            }
        }
        b
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !(u64::MAX >> r);
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & mask(i) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        if v {
            self.words[i / 64] |= mask(i);
        } else {
            self.words[i / 64] &= !mask(i);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn all(&self) -> bool {
        self.count_ones() == self.len
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let lz = w.leading_zeros() as usize;
                    w &= !(1u64 << (63 - lz));
                    Some(wi * 64 + lz)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones_iter().next()
    }

    /// Coordinatewise majority of three vectors of equal length.
    pub fn majority(a: &Bits, b: &Bits, c: &Bits) -> Bits {
        debug_assert!(a.len == b.len && b.len == c.len);
        let words = a
            .words
            .iter()
            .zip(&b.words)
            .zip(&c.words)
            .map(|((&x, &y), &z)| (x & y) | (x & z) | (y & z))
            .collect();
        Bits { len: a.len, words }
    }

    pub fn and(&self, other: &Bits) -> Bits {
        self.zip_with(other, |x, y| x & y)
    }

    pub fn or(&self, other: &Bits) -> Bits {
        self.zip_with(other, |x, y| x | y)
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        self.zip_with(other, |x, y| x ^ y)
    }

    pub fn and_not(&self, other: &Bits) -> Bits {
        self.zip_with(other, |x, y| x & !y)
    }

    pub fn not(&self) -> Bits {
        let mut b = Bits {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        b.clear_tail();
        b
    }

    fn zip_with(&self, other: &Bits, f: impl Fn(u64, u64) -> u64) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&x, &y)| x & !y == 0)
    }

    pub fn intersects(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(&x, &y)| x & y != 0)
    }

    /// True when `self` and `other` agree on every position set in `positions`.
    pub fn agrees_on(&self, other: &Bits, positions: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .zip(&positions.words)
            .all(|((&x, &y), &m)| (x ^ y) & m == 0)
    }

    /// Appends one bit.
    pub fn push(&mut self, v: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, v);
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        for i in 0..other.len {
            out.push(other.get(i));
        }
        out
    }

    /// Keeps the listed positions, in the listed order.
    pub fn select(&self, positions: &[usize]) -> Bits {
        Bits::from_bools(positions.iter().map(|&p| self.get(p)))
    }

    pub fn truncate(&self, len: usize) -> Bits {
        let mut b = Bits {
            len,
            words: self.words[..word_count(len)].to_vec(),
        };
        b.clear_tail();
        b
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.cmp(&other.words))
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bitstring())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.to_bitstring())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        let b = Bits::parse("0110").unwrap();
        assert_eq!(b.to_bitstring(), "0110");
        assert_eq!(b.ones_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert!(Bits::parse("01x").is_none());
        assert_eq!(Bits::parse("").unwrap().len(), 0);
    }

    #[test]
    fn majority_of_three() {
        let a = Bits::parse("011").unwrap();
        let b = Bits::parse("101").unwrap();
        let c = Bits::parse("110").unwrap();
        assert_eq!(Bits::majority(&a, &b, &c).to_bitstring(), "111");
    }

    #[test]
    fn push_crosses_word_boundary() {
        let mut b = Bits::zeros(63);
        b.push(true);
        b.push(true);
        assert_eq!(b.len(), 65);
        assert!(b.get(63) && b.get(64));
        assert_eq!(b.count_ones(), 2);
        assert_eq!(b.truncate(64).count_ones(), 1);
    }

    proptest! {
        #[test]
        fn order_matches_string_order(a in "[01]{0,130}", b in "[01]{0,130}") {
            let (x, y) = (Bits::parse(&a).unwrap(), Bits::parse(&b).unwrap());
            if a.len() == b.len() {
                prop_assert_eq!(x.cmp(&y), a.cmp(&b));
            }
            prop_assert_eq!(x.to_bitstring(), a);
        }

        #[test]
        fn not_is_involutive(a in "[01]{0,130}") {
            let x = Bits::parse(&a).unwrap();
            prop_assert_eq!(x.not().not(), x.clone());
            prop_assert_eq!(x.not().count_ones() + x.count_ones(), x.len());
        }
    }
}
