use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::words::{submasks, Block, MAX_CODE_LEN};

/// A set of words of one length `n ≤ 63`, stored as sorted codes.
///
/// Iteration yields blocks in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Language {
    n: usize,
    codes: Vec<u64>,
}

impl Language {
    pub(crate) fn from_sorted_codes(n: usize, codes: Vec<u64>) -> Self {
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        Language { n, codes }
    }

    pub fn from_codes(n: usize, mut codes: Vec<u64>) -> Self {
        codes.sort_unstable();
        codes.dedup();
        Language { n, codes }
    }

    /// Builds a language from blocks that must all share one length.
    pub fn from_blocks<'a>(blocks: impl IntoIterator<Item = &'a Block>) -> Result<Self> {
        let mut n = None;
        let mut codes = Vec::new();
        for b in blocks {
            match n {
                None => n = Some(b.len()),
                Some(len) if len != b.len() => {
                    return Err(Error::LengthMismatch {
                        left: len,
                        right: b.len(),
                    })
                }
                _ => {}
            }
            codes.push(b.code_or_err()?);
        }
        let n = n.ok_or_else(|| Error::InvalidInput("empty block set has no length".into()))?;
        Ok(Language::from_codes(n, codes))
    }

    pub fn word_len(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains(&self, w: &Block) -> bool {
        w.len() == self.n && w.code().is_some_and(|c| self.codes.binary_search(&c).is_ok())
    }

    pub fn iter(&self) -> impl Iterator<Item = Block> + '_ {
        self.codes.iter().map(move |&c| Block::from_code(c, self.n))
    }

    pub fn to_blocks(&self) -> BTreeSet<Block> {
        self.iter().collect()
    }

    /// Length-`m` prefixes of the words, `m ≤ n`.
    pub fn prefixes(&self, m: usize) -> Language {
        assert!(m >= 1 && m <= self.n);
        Language::from_codes(m, self.codes.iter().map(|c| c >> (self.n - m)).collect())
    }

    pub fn is_subset(&self, other: &Language) -> bool {
        self.n == other.n && self.codes.iter().all(|c| other.codes.binary_search(c).is_ok())
    }

    /// Downward closure `{W′ : W′ ≤ W for some W}`.
    pub fn hereditary_closure(&self) -> Language {
        let mut codes: Vec<u64> = self.codes.iter().flat_map(|&c| submasks(c)).collect();
        codes.sort_unstable();
        codes.dedup();
        Language { n: self.n, codes }
    }

    /// Maximum ones count over the words and the lexicographically smallest
    /// word attaining it.
    pub fn max_ones(&self) -> Option<(usize, Block)> {
        let mut best: Option<(u32, u64)> = None;
        for &c in &self.codes {
            let ones = c.count_ones();
            if best.is_none_or(|(b, _)| ones > b) {
                best = Some((ones, c));
            }
        }
        best.map(|(ones, c)| (ones as usize, Block::from_code(c, self.n)))
    }
}

/// Downward closure of a set of equal-length blocks.
pub fn hereditary_closure_language(blocks: &BTreeSet<Block>) -> Result<BTreeSet<Block>> {
    if blocks.is_empty() {
        return Ok(BTreeSet::new());
    }
    if let Some(b) = blocks.iter().find(|b| b.len() > MAX_CODE_LEN) {
        return Err(Error::TooLong(b.len()));
    }
    Ok(Language::from_blocks(blocks)?.hereditary_closure().to_blocks())
}
