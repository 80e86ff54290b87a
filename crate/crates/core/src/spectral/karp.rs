//! Maximum mean cycle by Karp's dynamic program.
//!
//! With edge weight = label, the maximum mean cycle of a presentation is the
//! largest frequency of ones over invariant measures, which equals the
//! limiting maximal ones-fraction over the language.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::subshifts::LabeledGraph;

/// Exact maximum over directed cycles of `(sum of labels) / (cycle length)`.
pub fn max_mean_cycle(g: &LabeledGraph) -> Result<Ratio<i64>> {
    let n = g.vertex_count();
    // Parallel edges collapse to their best label.
    let mut best: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n];
    for e in g.edges() {
        let w = i64::from(e.label);
        let slot = &mut best[e.source][e.target];
        *slot = Some(slot.map_or(w, |old| old.max(w)));
    }
    let mut arcs = Vec::new();
    for (u, row) in best.iter().enumerate() {
        for (v, w) in row.iter().enumerate() {
            if let Some(w) = *w {
                arcs.push((u, v, w));
            }
        }
    }

    // walks[k][v]: heaviest walk with exactly k edges ending at v, starting
    // anywhere. Equivalent to a zero-weight super source.
    let mut walks: Vec<Vec<Option<i64>>> = Vec::with_capacity(n + 1);
    walks.push(vec![Some(0); n]);
    for k in 1..=n {
        let prev = &walks[k - 1];
        let mut cur = vec![None; n];
        for &(u, v, w) in &arcs {
            if let Some(d) = prev[u] {
                let cand = d + w;
                if cur[v].is_none_or(|c| cand > c) {
                    cur[v] = Some(cand);
                }
            }
        }
        walks.push(cur);
    }

    let mut answer: Option<Ratio<i64>> = None;
    for v in 0..n {
        let Some(dn) = walks[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| walks[k][v].map(|dk| Ratio::new(dn - dk, (n - k) as i64)))
            .min()
            .expect("k = 0 is always finite");
        if answer.is_none_or(|a| worst > a) {
            answer = Some(worst);
        }
    }
    answer.ok_or(Error::NoCycle)
}
