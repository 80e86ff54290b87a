//! Finite binary words.
//!
//! A [`Block`] is a non-empty word over `{0, 1}` stored as a packed bit
//! vector. Bits are laid out most-significant-first inside each `u64`, so two
//! blocks of the same length compare lexicographically by comparing their
//! storage words. The textual form is the plain `0`/`1` string.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Longest block that can be addressed by a `u64` code and enumerated.
pub const MAX_CODE_LEN: usize = 63;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Block {
    len: usize,
    words: Vec<u64>,
}

impl Block {
    /// Builds a block from a slice of symbols, each of which must be 0 or 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyBlock);
        }
        let mut block = Block::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => block.set_raw(i),
                other => {
                    return Err(Error::InvalidSymbol {
                        symbol: char::from_digit(u32::from(other) % 36, 36).unwrap_or('?'),
                        position: i,
                    })
                }
            }
        }
        Ok(block)
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Result<Self> {
        let bits: Vec<u8> = bits.into_iter().map(u8::from).collect();
        Block::from_bits(&bits)
    }

    /// The all-zero block of length `len`. Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "empty words are not allowed");
        Block {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    /// The all-ones block of length `len`. Panics if `len == 0`.
    pub fn ones(len: usize) -> Self {
        let mut b = Block::zeros(len);
        for i in 0..len {
            b.set_raw(i);
        }
        b
    }

    /// Decodes the `len` low bits of `code`, most significant first.
    ///
    /// With this encoding numeric order of codes is lexicographic order of
    /// blocks of equal length.
    pub fn from_code(code: u64, len: usize) -> Self {
        assert!(len > 0 && len <= MAX_CODE_LEN, "code length out of range");
        debug_assert!(code >> len == 0, "code wider than block");
        Block {
            len,
            words: vec![code << (WORD_BITS - len)],
        }
    }

    /// Inverse of [`Block::from_code`], available for blocks of length ≤ 63.
    pub fn code(&self) -> Option<u64> {
        (self.len <= MAX_CODE_LEN).then(|| self.words[0] >> (WORD_BITS - self.len))
    }

    pub(crate) fn code_or_err(&self) -> Result<u64> {
        self.code().ok_or(Error::TooLong(self.len))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; blocks are never empty. Present for API symmetry.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symbol at position `i` (0-based). Panics when out of range.
    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len, "index {i} out of range for block of length {}", self.len);
        ((self.words[i / WORD_BITS] >> (WORD_BITS - 1 - i % WORD_BITS)) & 1) as u8
    }

    fn set_raw(&mut self, i: usize) {
        self.words[i / WORD_BITS] |= 1 << (WORD_BITS - 1 - i % WORD_BITS);
    }

    fn clear_raw(&mut self, i: usize) {
        self.words[i / WORD_BITS] &= !(1 << (WORD_BITS - 1 - i % WORD_BITS));
    }

    /// Returns a copy with position `i` set to `bit`.
    pub fn with_bit(&self, i: usize, bit: bool) -> Self {
        assert!(i < self.len);
        let mut b = self.clone();
        if bit {
            b.set_raw(i);
        } else {
            b.clear_raw(i);
        }
        b
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().collect()
    }

    /// Number of ones, `#₁W`.
    pub fn ones_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `self ≥ other` coordinatewise.
    pub fn dominates(&self, other: &Block) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| b & !a == 0))
    }

    /// The slice `W[start..=end]`.
    pub fn subword(&self, start: usize, end: usize) -> Result<Block> {
        if start > end || end >= self.len {
            return Err(Error::IndexOutOfRange {
                start,
                end,
                len: self.len,
            });
        }
        let mut out = Block::zeros(end - start + 1);
        for i in start..=end {
            if self.get(i) == 1 {
                out.set_raw(i - start);
            }
        }
        Ok(out)
    }

    /// True if `pattern` occurs as a contiguous factor of `self`.
    pub fn contains(&self, pattern: &Block) -> bool {
        if pattern.len > self.len {
            return false;
        }
        (0..=self.len - pattern.len)
            .any(|start| (0..pattern.len).all(|k| self.get(start + k) == pattern.get(k)))
    }

    pub fn concat(&self, other: &Block) -> Block {
        let mut out = Block::zeros(self.len + other.len);
        for (i, b) in self.iter().chain(other.iter()).enumerate() {
            if b == 1 {
                out.set_raw(i);
            }
        }
        out
    }

    /// Coordinatewise product (logical and).
    pub fn and(&self, other: &Block) -> Result<Block> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(Block {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        })
    }

    /// All blocks `W′ ≤ self`, in increasing code order.
    pub fn below(&self) -> Result<impl Iterator<Item = Block>> {
        let top = self.code_or_err()?;
        let len = self.len;
        Ok(submasks(top).map(move |c| Block::from_code(c, len)))
    }
}

/// Enumerates every submask of `mask` in increasing numeric order.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    // Walk submasks downward from `mask`, then reverse via collection.
    let mut out = Vec::with_capacity(1usize << mask.count_ones().min(30));
    let mut sub = mask;
    loop {
        out.push(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    out.into_iter().rev()
}

/// All `2ⁿ` words of length `n`, lexicographically.
pub fn all_words(n: usize) -> Result<impl Iterator<Item = Block>> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if n > MAX_CODE_LEN {
        return Err(Error::TooLong(n));
    }
    Ok((0..1u64 << n).map(move |c| Block::from_code(c, n)))
}

/// Candidates `C′` with `C′ ≥ w`.
pub fn dominating_set<'a>(
    w: &Block,
    candidates: impl IntoIterator<Item = &'a Block>,
) -> Result<BTreeSet<Block>> {
    let mut out = BTreeSet::new();
    for c in candidates {
        if c.dominates(w)? {
            out.insert(c.clone());
        }
    }
    Ok(out)
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.len == other.len {
            return self.words.cmp(&other.words);
        }
        let common = self.len.min(other.len);
        for i in 0..common {
            match self.get(i).cmp(&other.get(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b == 1 { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block({self})")
    }
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(position, symbol)| match symbol {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidSymbol { symbol, position }),
            })
            .collect::<Result<Vec<u8>>>()?;
        Block::from_bits(&bits)
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout tests and examples. Panics on malformed input.
pub fn block(s: &str) -> Block {
    s.parse().unwrap_or_else(|e| panic!("bad block literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ones_count_examples() {
        assert_eq!(block("0110").ones_count(), 2);
        assert_eq!(block("0000").ones_count(), 0);
        assert_eq!(block("1111").ones_count(), 4);
    }

    #[test]
    fn dominates_examples() {
        assert!(block("110").dominates(&block("100")).unwrap());
        assert!(!block("100").dominates(&block("110")).unwrap());
        let w = block("10110");
        assert!(w.dominates(&w).unwrap());
        assert!(matches!(
            block("10").dominates(&block("100")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn subword_examples() {
        assert_eq!(block("01101").subword(1, 3).unwrap(), block("110"));
        let w = block("1001101");
        assert_eq!(w.subword(0, w.len() - 1).unwrap(), w);
        assert_eq!(block("10").subword(1, 1).unwrap(), block("0"));
        assert!(block("10").subword(1, 2).is_err());
        assert!(block("10").subword(1, 0).is_err());
    }

    #[test]
    fn dominating_set_examples() {
        let all: Vec<Block> = all_words(2).unwrap().collect();
        assert_eq!(dominating_set(&block("00"), &all).unwrap().len(), 4);
        assert_eq!(
            dominating_set(&block("11"), &all).unwrap(),
            BTreeSet::from([block("11")])
        );
        let cands = [block("00"), block("01"), block("11")];
        assert_eq!(
            dominating_set(&block("01"), &cands).unwrap(),
            BTreeSet::from([block("01"), block("11")])
        );
        assert!(dominating_set(&block("01"), &[block("011")]).is_err());
    }

    #[test]
    fn rejects_empty_and_bad_symbols() {
        assert_eq!("".parse::<Block>(), Err(Error::EmptyBlock));
        assert!(matches!(
            "0120".parse::<Block>(),
            Err(Error::InvalidSymbol { symbol: '2', position: 2 })
        ));
        assert!(Block::from_bits(&[0, 2]).is_err());
    }

    #[test]
    fn long_blocks_span_words() {
        let s: String = (0..150).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
        let b: Block = s.parse().unwrap();
        assert_eq!(b.to_string(), s);
        assert_eq!(b.ones_count(), 50);
        assert_eq!(b.subword(60, 70).unwrap().to_string(), &s[60..=70]);
        assert!(b.code().is_none());
    }

    #[test]
    fn order_is_lexicographic() {
        let mut v = vec![block("10"), block("0"), block("01"), block("1"), block("00")];
        v.sort();
        let s: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(s, ["0", "00", "01", "1", "10"]);
    }

    #[test]
    fn dominance_is_a_partial_order_exhaustively() {
        for n in 1..=6 {
            let words: Vec<Block> = all_words(n).unwrap().collect();
            for a in &words {
                for b in &words {
                    let ab = a.dominates(b).unwrap();
                    let ba = b.dominates(a).unwrap();
                    if ab && ba {
                        assert_eq!(a, b);
                    }
                    if ab {
                        assert!(a.ones_count() >= b.ones_count());
                    }
                    for c in &words {
                        if ab && b.dominates(c).unwrap() {
                            assert!(a.dominates(c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dominating_set_size_over_all_words() {
        for n in 1..=8 {
            let words: Vec<Block> = all_words(n).unwrap().collect();
            for w in &words {
                let size = dominating_set(w, &words).unwrap().len();
                assert_eq!(size, 1 << (n - w.ones_count()));
            }
        }
    }

    proptest! {
        #[test]
        fn text_round_trip(bits in proptest::collection::vec(0u8..2, 1..200)) {
            let b = Block::from_bits(&bits).unwrap();
            let back: Block = b.to_string().parse().unwrap();
            prop_assert_eq!(&back, &b);
            prop_assert_eq!(back.to_bits(), bits);
        }

        #[test]
        fn below_matches_filter(code in 0u64..1024) {
            let w = Block::from_code(code, 10);
            let fast: Vec<Block> = w.below().unwrap().collect();
            let slow: Vec<Block> = all_words(10)
                .unwrap()
                .filter(|c| w.dominates(c).unwrap())
                .collect();
            prop_assert_eq!(fast, slow);
        }
    }
}
