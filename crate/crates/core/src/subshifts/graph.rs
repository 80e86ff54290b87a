//! Labelled graphs presenting sofic shifts.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::AdjacencyMatrix;
use crate::subshifts::language::Language;
use crate::words::{Block, MAX_CODE_LEN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: u8,
}

impl Edge {
    pub fn new(source: usize, target: usize, label: u8) -> Self {
        Edge { source, target, label }
    }
}

/// A finite directed multigraph with edges labelled by `0` or `1`.
///
/// Vertices may carry names (used by higher-block presentations, where the
/// vertex is an admissible block).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct LabeledGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    names: Option<Vec<Block>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<(usize, usize, u8)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<Block>>,
}

impl TryFrom<GraphRepr> for LabeledGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        let g = LabeledGraph::new(
            r.vertices,
            r.edges.into_iter().map(|(s, t, l)| Edge::new(s, t, l)).collect(),
        )?;
        match r.names {
            Some(names) => g.with_names(names),
            None => Ok(g),
        }
    }
}

impl From<LabeledGraph> for GraphRepr {
    fn from(g: LabeledGraph) -> Self {
        GraphRepr {
            vertices: g.vertex_count,
            edges: g.edges.iter().map(|e| (e.source, e.target, e.label)).collect(),
            names: g.names,
        }
    }
}

impl LabeledGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count == 0 {
            return invalid("graph needs at least one vertex");
        }
        for e in &edges {
            if e.source >= vertex_count || e.target >= vertex_count {
                return invalid(format!(
                    "edge ({}, {}) references a vertex outside 0..{vertex_count}",
                    e.source, e.target
                ));
            }
            if e.label > 1 {
                return invalid(format!("edge label {} is not 0 or 1", e.label));
            }
        }
        Ok(LabeledGraph {
            vertex_count,
            edges,
            names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<Block>) -> Result<Self> {
        if names.len() != self.vertex_count {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: self.vertex_count,
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    /// The cycle `0 → 1 → … → k−1 → 0` reading `pattern` (a periodic orbit).
    pub fn cycle(pattern: &Block) -> Self {
        let k = pattern.len();
        let edges = (0..k).map(|i| Edge::new(i, (i + 1) % k, pattern.get(i))).collect();
        LabeledGraph {
            vertex_count: k,
            edges,
            names: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn names(&self) -> Option<&[Block]> {
        self.names.as_deref()
    }

    /// Removes vertices that cannot lie on a bi-infinite path, repeatedly,
    /// until every vertex has an incoming and an outgoing edge.
    pub fn prune(&self) -> Result<LabeledGraph> {
        let mut alive = vec![true; self.vertex_count];
        loop {
            let mut indeg = vec![0usize; self.vertex_count];
            let mut outdeg = vec![0usize; self.vertex_count];
            for e in &self.edges {
                if alive[e.source] && alive[e.target] {
                    outdeg[e.source] += 1;
                    indeg[e.target] += 1;
                }
            }
            let mut changed = false;
            for v in 0..self.vertex_count {
                if alive[v] && (indeg[v] == 0 || outdeg[v] == 0) {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            if alive[v] {
                remap[v] = next;
                next += 1;
            }
        }
        if next == 0 {
            return Err(Error::EmptySubshift("presentation has no bi-infinite path".into()));
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| alive[e.source] && alive[e.target])
            .map(|e| Edge::new(remap[e.source], remap[e.target], e.label))
            .collect();
        let names = self.names.as_ref().map(|names| {
            names
                .iter()
                .enumerate()
                .filter(|(v, _)| alive[*v])
                .map(|(_, b)| b.clone())
                .collect()
        });
        Ok(LabeledGraph {
            vertex_count: next,
            edges,
            names,
        })
    }

    pub fn is_essential(&self) -> bool {
        self.prune()
            .map(|p| p.vertex_count == self.vertex_count)
            .unwrap_or(false)
    }

    /// No vertex has two outgoing edges with the same label.
    pub fn is_right_resolving(&self) -> bool {
        let mut seen = vec![[false; 2]; self.vertex_count];
        for e in &self.edges {
            let slot = &mut seen[e.source][e.label as usize];
            if *slot {
                return false;
            }
            *slot = true;
        }
        true
    }

    /// Edge-count adjacency matrix in vertex-index order.
    pub fn adjacency(&self) -> AdjacencyMatrix {
        let mut a = AdjacencyMatrix::zeros(self.vertex_count);
        for e in &self.edges {
            a.add(e.source, e.target, 1);
        }
        a
    }

    /// Adjacency matrix with rows and columns ordered by the given vertex
    /// names, which must be a permutation of this graph's names.
    pub fn adjacency_in_order(&self, order: &[Block]) -> Result<AdjacencyMatrix> {
        let names = match &self.names {
            Some(n) => n,
            None => return invalid("graph vertices are unnamed"),
        };
        if order.len() != names.len() {
            return Err(Error::LengthMismatch {
                left: order.len(),
                right: names.len(),
            });
        }
        let position: HashMap<&Block, usize> =
            order.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let perm = names
            .iter()
            .map(|n| {
                position
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("vertex {n} missing from order")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut a = AdjacencyMatrix::zeros(self.vertex_count);
        for e in &self.edges {
            a.add(perm[e.source], perm[e.target], 1);
        }
        Ok(a)
    }

    /// Adds a `0`-labelled twin of every `1`-labelled edge. The result
    /// presents the hereditary closure of the presented shift.
    pub fn hereditary_closure(&self) -> LabeledGraph {
        let mut edges = self.edges.clone();
        edges.extend(
            self.edges
                .iter()
                .filter(|e| e.label == 1)
                .map(|e| Edge::new(e.source, e.target, 0)),
        );
        LabeledGraph {
            vertex_count: self.vertex_count,
            edges,
            names: self.names.clone(),
        }
    }

    /// Subset construction started from the set of all vertices.
    pub fn subset_automaton(&self) -> SubsetAutomaton {
        SubsetAutomaton::build(self)
    }

    /// Labels of length-`n` paths, i.e. `𝓛_n` of the presented shift when the
    /// graph is essential.
    pub fn language(&self, n: usize) -> Result<Language> {
        self.prune()?.subset_automaton().words(n)
    }

    pub fn language_size(&self, n: usize) -> Result<u128> {
        self.prune()?.subset_automaton().count(n)
    }

    /// Follows a single labelled path from some vertex; returns the labels
    /// read along the walk chosen by `pick`.
    pub fn walk(&self, start: usize, steps: usize, mut pick: impl FnMut(usize) -> usize) -> Vec<u8> {
        let mut out_edges: Vec<Vec<&Edge>> = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            out_edges[e.source].push(e);
        }
        let mut v = start;
        let mut labels = Vec::with_capacity(steps);
        for _ in 0..steps {
            let choices = &out_edges[v];
            assert!(!choices.is_empty(), "walk reached a dead vertex; prune first");
            let e = choices[pick(choices.len()) % choices.len()];
            labels.push(e.label);
            v = e.target;
        }
        labels
    }
}

/// Bitset of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct VertexSet(Vec<u64>);

impl VertexSet {
    fn empty(n: usize) -> Self {
        VertexSet(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| (w >> b) & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

/// Deterministic automaton over vertex subsets. State 0 is the set of all
/// vertices; a word is in the language iff it can be read from state 0.
#[derive(Clone, Debug)]
pub struct SubsetAutomaton {
    next: Vec<[Option<usize>; 2]>,
}

impl SubsetAutomaton {
    fn build(g: &LabeledGraph) -> Self {
        let n = g.vertex_count;
        let mut step = vec![[VertexSet::empty(n), VertexSet::empty(n)]; n];
        for e in &g.edges {
            step[e.source][e.label as usize].insert(e.target);
        }
        let mut start = VertexSet::empty(n);
        (0..n).for_each(|v| start.insert(v));

        let mut index: HashMap<VertexSet, usize> = HashMap::new();
        let mut states = vec![start.clone()];
        index.insert(start, 0);
        let mut next: Vec<[Option<usize>; 2]> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            if next.len() <= s {
                next.resize(s + 1, [None, None]);
            }
            for label in 0..2 {
                let mut target = VertexSet::empty(n);
                for v in states[s].iter() {
                    target.union_with(&step[v][label]);
                }
                if target.is_empty() {
                    continue;
                }
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        states.push(target.clone());
                        index.insert(target, id);
                        queue.push_back(id);
                        id
                    }
                };
                next[s][label] = Some(id);
            }
        }
        next.resize(states.len(), [None, None]);
        SubsetAutomaton { next }
    }

    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    /// The automaton as a right-resolving labelled graph (state 0 first).
    pub fn to_graph(&self) -> LabeledGraph {
        let edges = self
            .next
            .iter()
            .enumerate()
            .flat_map(|(s, row)| {
                row.iter()
                    .enumerate()
                    .filter_map(move |(l, t)| t.map(|t| Edge::new(s, t, l as u8)))
            })
            .collect();
        LabeledGraph {
            vertex_count: self.next.len(),
            edges,
            names: None,
        }
    }

    pub fn accepts(&self, w: &Block) -> bool {
        let mut s = 0;
        for b in w.iter() {
            match self.next[s][b as usize] {
                Some(t) => s = t,
                None => return false,
            }
        }
        true
    }

    /// Number of words of length `n` readable from the start state.
    pub fn count(&self, n: usize) -> Result<u128> {
        if n == 0 {
            return Err(Error::EmptyBlock);
        }
        if n > 120 {
            return Err(Error::TooLong(n));
        }
        let mut counts = vec![1u128; self.next.len()];
        for _ in 0..n {
            counts = self
                .next
                .iter()
                .map(|row| row.iter().flatten().map(|&t| counts[t]).sum())
                .collect();
        }
        Ok(counts[0])
    }

    /// All words of length `n`, in lexicographic order.
    pub fn words(&self, n: usize) -> Result<Language> {
        if n == 0 {
            return Err(Error::EmptyBlock);
        }
        if n > MAX_CODE_LEN {
            return Err(Error::TooLong(n));
        }
        let mut codes = Vec::new();
        let mut stack = vec![(0usize, 0u64, 0usize)];
        while let Some((s, code, depth)) = stack.pop() {
            if depth == n {
                codes.push(code);
                continue;
            }
            // Push label 1 first so label 0 is explored first.
            for label in [1usize, 0] {
                if let Some(t) = self.next[s][label] {
                    stack.push((t, (code << 1) | label as u64, depth + 1));
                }
            }
        }
        Ok(Language::from_sorted_codes(n, codes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshifts::ForbiddenSet;
    use crate::words::{all_words, block};

    fn golden() -> LabeledGraph {
        ForbiddenSet::parse(["11"]).unwrap().to_graph().unwrap()
    }

    #[test]
    fn prune_removes_transient_vertices() {
        // 0 -> 1 -> 1 (loop), 2 is a sink.
        let g = LabeledGraph::new(
            3,
            vec![Edge::new(0, 1, 1), Edge::new(1, 1, 0), Edge::new(1, 2, 1)],
        )
        .unwrap();
        let p = g.prune().unwrap();
        assert_eq!(p.vertex_count(), 1);
        assert_eq!(p.edges(), &[Edge::new(0, 0, 0)]);
        assert!(!g.is_essential());
        assert!(p.is_essential());
    }

    #[test]
    fn acyclic_graph_is_empty() {
        let g = LabeledGraph::new(2, vec![Edge::new(0, 1, 1)]).unwrap();
        assert!(matches!(g.prune(), Err(Error::EmptySubshift(_))));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(LabeledGraph::new(2, vec![Edge::new(0, 2, 0)]).is_err());
        assert!(LabeledGraph::new(2, vec![Edge::new(0, 1, 2)]).is_err());
        assert!(LabeledGraph::new(0, vec![]).is_err());
    }

    #[test]
    fn golden_mean_closure_adds_one_edge() {
        let g = golden();
        assert_eq!(g.edges().len(), 3);
        let c = g.hereditary_closure();
        assert_eq!(c.edges().len(), 4);
        assert!(!c.is_right_resolving());
        for n in 1..=8 {
            assert_eq!(c.language(n).unwrap(), g.language(n).unwrap());
        }
    }

    #[test]
    fn full_shift_closure_keeps_language() {
        let g = ForbiddenSet::full_shift().to_graph().unwrap();
        let c = g.hereditary_closure();
        for n in 1..=8 {
            assert_eq!(c.language(n).unwrap().len(), 1 << n);
        }
    }

    #[test]
    fn golden_mean_language() {
        let g = golden();
        let l2: Vec<String> = g.language(2).unwrap().iter().map(|b| b.to_string()).collect();
        assert_eq!(l2, ["00", "01", "10"]);
        // Oracle: brute-force filter of all 2ⁿ words.
        for n in 1..=8 {
            let brute = all_words(n).unwrap().filter(|w| !w.contains(&block("11"))).count();
            assert_eq!(g.language(n).unwrap().len(), brute);
            assert_eq!(g.language_size(n).unwrap(), brute as u128);
        }
        let sizes: Vec<usize> = (1..=8).map(|n| g.language(n).unwrap().len()).collect();
        assert_eq!(sizes, [2, 3, 5, 8, 13, 21, 34, 55]);
    }

    #[test]
    fn cycle_language_is_rotations() {
        let g = LabeledGraph::cycle(&block("011"));
        let l: Vec<String> = g.language(3).unwrap().iter().map(|b| b.to_string()).collect();
        assert_eq!(l, ["011", "101", "110"]);
        assert_eq!(g.language(7).unwrap().len(), 3);
    }

    #[test]
    fn subset_automaton_accepts_language() {
        let g = golden().hereditary_closure();
        let aut = g.subset_automaton();
        assert!(aut.accepts(&block("10100")));
        assert!(!aut.accepts(&block("0110")));
        assert!(aut.to_graph().is_right_resolving());
    }

    #[test]
    fn serde_graph_round_trip() {
        let g = golden();
        let text = serde_json::to_string(&g).unwrap();
        let back: LabeledGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.vertex_count(), g.vertex_count());
    }
}
