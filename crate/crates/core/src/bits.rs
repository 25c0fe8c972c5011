//! Fixed-length binary strings.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error};

/// A finite binary string `s_0 s_1 … s_{n-1}`.
///
/// Bit `i` lives in word `i / 64` at position `i % 64`; bits past `len`
/// are always zero so that derived equality and hashing are structural.
/// Ordering is lexicographic with `0 < 1`, a proper prefix sorting first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::zeros(len);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.clear_tail();
        s
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = BitString::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    /// The low `len` bits of `value`, most significant first, so that the
    /// numeric order of values agrees with the lexicographic order.
    pub fn from_int(value: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        BitString::from_bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1))
    }

    /// Inverse of [`BitString::from_int`]; `None` above 64 bits.
    pub fn to_int(&self) -> Option<u64> {
        if self.len > 64 {
            return None;
        }
        Some(self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64))
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
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        if bit {
            self.words[(self.len - 1) / 64] |= 1u64 << ((self.len - 1) % 64);
        }
    }

    pub fn extend_from(&mut self, other: &BitString) {
        for b in other.iter() {
            self.push(b);
        }
    }

    /// Appends `count` zero bits.
    pub fn push_zeros(&mut self, count: usize) {
        self.len += count;
        self.words.resize(words_for(self.len), 0);
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> BitString {
        assert!(len <= self.len);
        let mut words = self.words[..words_for(len)].to_vec();
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        BitString { len, words }
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        prefix.len <= self.len && self.prefix(prefix.len) == *prefix
    }

    /// The bits at the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> BitString {
        BitString::from_bits(positions.iter().map(|&p| self.get(p)))
    }

    /// The string with `bit` appended.
    pub fn with(&self, bit: bool) -> BitString {
        let mut s = self.clone();
        s.push(bit);
        s
    }

    pub fn complement(&self) -> BitString {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.clear_tail();
        s
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn clear_tail(&mut self) {
        if !self.len.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (self.len % 64)) - 1;
            }
        }
    }

    /// Renders as a string of `0`/`1` characters.
    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len.min(other.len);
        for (i, (a, b)) in self.words.iter().zip(other.words.iter()).enumerate() {
            let diff = a ^ b;
            if diff != 0 {
                let pos = i * 64 + diff.trailing_zeros() as usize;
                if pos < common {
                    return if (a >> (pos % 64)) & 1 == 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
                break;
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = BitString::new();
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                other => return Err(invalid!("character {other:?} at offset {i} is not 0 or 1")),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::string::ToString;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn lexicographic_order() {
        assert!(bs("0") < bs("1"));
        assert!(bs("0") < bs("00"));
        assert!(bs("01") < bs("1"));
        assert!(bs("") < bs("0"));
        assert_eq!(bs("0110").cmp(&bs("0110")), Ordering::Equal);
    }

    #[test]
    fn int_round_trip_is_big_endian() {
        assert_eq!(BitString::from_int(0b011, 3).to_string(), "011");
        assert_eq!(bs("110").to_int(), Some(6));
    }

    #[test]
    fn rejects_other_characters() {
        assert!("01x".parse::<BitString>().is_err());
    }

    proptest! {
        #[test]
        fn order_matches_string_order(a in "[01]{0,150}", b in "[01]{0,150}") {
            prop_assert_eq!(bs(&a).cmp(&bs(&b)), a.cmp(&b));
        }

        #[test]
        fn prefix_and_complement(a in "[01]{0,150}", cut in 0usize..150) {
            let s = bs(&a);
            let cut = cut.min(a.len());
            prop_assert_eq!(s.prefix(cut).to_string(), &a[..cut]);
            prop_assert!(s.starts_with(&s.prefix(cut)));
            prop_assert_eq!(s.complement().complement(), s.clone());
            prop_assert_eq!(s.complement().count_ones(), a.len() - s.count_ones());
        }
    }
}
