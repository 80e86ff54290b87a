use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subshifts::graph::{Edge, LabeledGraph};
use crate::words::{all_words, Block, MAX_CODE_LEN};

/// A finite list of forbidden words `𝓕`, presenting the SFT `X_𝓕`.
///
/// The empty set is the full shift.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ForbiddenSet {
    words: BTreeSet<Block>,
}

impl ForbiddenSet {
    pub fn new(words: impl IntoIterator<Item = Block>) -> Self {
        ForbiddenSet {
            words: words.into_iter().collect(),
        }
    }

    pub fn parse<'a>(words: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let words = words
            .into_iter()
            .map(str::parse)
            .collect::<Result<BTreeSet<Block>>>()?;
        Ok(ForbiddenSet { words })
    }

    pub fn full_shift() -> Self {
        ForbiddenSet::default()
    }

    pub fn words(&self) -> &BTreeSet<Block> {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Block::len).max().unwrap_or(0)
    }

    /// True if some forbidden word occurs in `w`.
    pub fn occurs_in(&self, w: &Block) -> bool {
        self.words.iter().any(|f| w.contains(f))
    }

    /// Drops every word that contains another forbidden word. The presented
    /// subshift is unchanged.
    pub fn normalize(&self) -> ForbiddenSet {
        let words = self
            .words
            .iter()
            .filter(|w| {
                !self
                    .words
                    .iter()
                    .any(|other| other != *w && other.len() <= w.len() && w.contains(other))
            })
            .cloned()
            .collect();
        ForbiddenSet { words }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalize() == *self
    }

    /// Sufficient condition for heredity: every `C′ ≥ C` with `C ∈ 𝓕` still
    /// contains a forbidden word.
    pub fn is_hereditary_sufficient(&self) -> bool {
        self.words
            .iter()
            .all(|c| c.code().is_some() && upward(c).all(|up| self.occurs_in(&up)))
    }

    /// Higher-block presentation on admissible `(m−1)`-blocks, `m = max_len`.
    ///
    /// Vertices are sorted lexicographically and carry their block as name.
    /// An edge `u → v` labelled `b` exists when `u·b` avoids `𝓕` and has `v`
    /// as suffix. Dead vertices are pruned.
    pub fn to_graph(&self) -> Result<LabeledGraph> {
        let forbidden = self.normalize();
        let m = forbidden.max_len();
        if m > MAX_CODE_LEN {
            return Err(Error::TooLong(m));
        }
        if m <= 1 {
            let edges: Vec<Edge> = [0u8, 1]
                .into_iter()
                .filter(|&b| !forbidden.occurs_in(&Block::from_code(u64::from(b), 1)))
                .map(|label| Edge::new(0, 0, label))
                .collect();
            return LabeledGraph::new(1, edges)?.prune();
        }
        let k = m - 1;
        let vertices: Vec<Block> = all_words(k)?.filter(|w| !forbidden.occurs_in(w)).collect();
        if vertices.is_empty() {
            return Err(Error::EmptySubshift(format!("no admissible blocks of length {k}")));
        }
        let index_of = |b: &Block| vertices.binary_search(b).ok();
        let mut edges = Vec::new();
        for (u, word) in vertices.iter().enumerate() {
            let code = word.code_or_err()?;
            for label in [0u8, 1] {
                let extended = Block::from_code((code << 1) | u64::from(label), m);
                if forbidden.occurs_in(&extended) {
                    continue;
                }
                let suffix = extended.subword(1, m - 1)?;
                if let Some(v) = index_of(&suffix) {
                    edges.push(Edge::new(u, v, label));
                }
            }
        }
        LabeledGraph::new(vertices.len(), edges)?
            .with_names(vertices)?
            .prune()
    }
}

/// Every same-length word `C′ ≥ c`.
fn upward(c: &Block) -> impl Iterator<Item = Block> + '_ {
    let len = c.len();
    let base = c.code().expect("caller checked length");
    let free = !base & ((1u64 << len) - 1);
    crate::words::submasks(free).map(move |extra| Block::from_code(base | extra, len))
}
