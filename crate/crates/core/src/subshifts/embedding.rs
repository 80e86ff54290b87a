//! Gap filling that embeds `Y = X_{111,1001}` into the hereditary closure of
//! `X_{00,111}`.
//!
//! Every word of `Y` is dominated by a word avoiding `00` and `111`. Zero runs
//! between two ones are rewritten as follows (run length `ℓ`):
//!
//! | ℓ            | filling                      |
//! |--------------|------------------------------|
//! | 1            | `0` (unchanged)              |
//! | even, ≥ 4    | `0110` then `10` repeated    |
//! | odd, ≥ 3     | `0` then `10` repeated       |
//!
//! Zero runs touching the ends of the word are filled with alternating
//! symbols, with a `0` next to the neighbouring one; an all-zero word becomes
//! `1010…`.

use crate::error::{invalid, Result};
use crate::words::Block;

/// True if `y` avoids `111` and `1001`.
pub fn in_y_language(y: &Block) -> bool {
    let bits = y.to_bits();
    !bits.windows(3).any(|w| w == [1, 1, 1]) && !bits.windows(4).any(|w| w == [1, 0, 0, 1])
}

/// True if `x` avoids `00` and `111`.
pub fn avoids_00_111(x: &Block) -> bool {
    let bits = x.to_bits();
    !bits.windows(2).any(|w| w == [0, 0]) && !bits.windows(3).any(|w| w == [1, 1, 1])
}

fn interior_fill(len: usize) -> Vec<u8> {
    match len {
        1 => vec![0],
        l if l % 2 == 0 => {
            let mut v = vec![0, 1, 1, 0];
            while v.len() < l {
                v.extend([1, 0]);
            }
            v
        }
        l => {
            let mut v = vec![0];
            while v.len() < l {
                v.extend([1, 0]);
            }
            v
        }
    }
}

/// Alternating run of length `len` whose last symbol (adjacent to a one on
/// the right) is `0`.
fn leading_fill(len: usize) -> Vec<u8> {
    (0..len).map(|i| ((len - 1 - i) % 2) as u8).collect()
}

/// Alternating run of length `len` whose first symbol (adjacent to a one on
/// the left) is `0`.
fn trailing_fill(len: usize) -> Vec<u8> {
    (0..len).map(|i| (i % 2) as u8).collect()
}

/// Returns `x ≥ y` of the same length with no `00` and no `111`.
pub fn upgrade_embedding(y: &Block) -> Result<Block> {
    if !in_y_language(y) {
        return invalid(format!("{y} contains 111 or 1001"));
    }
    let bits = y.to_bits();
    let ones: Vec<usize> = (0..bits.len()).filter(|&i| bits[i] == 1).collect();
    let Some((&first, &last)) = ones.first().zip(ones.last()) else {
        return Block::from_bits(&(0..bits.len()).map(|i| ((i + 1) % 2) as u8).collect::<Vec<_>>());
    };

    let mut out = Vec::with_capacity(bits.len());
    out.extend(leading_fill(first));
    for pair in ones.windows(2) {
        out.push(1);
        let gap = pair[1] - pair[0] - 1;
        if gap > 0 {
            out.extend(interior_fill(gap));
        }
    }
    out.push(1);
    out.extend(trailing_fill(bits.len() - 1 - last));
    Block::from_bits(&out)
}
