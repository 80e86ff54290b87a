use std::fmt;

use crate::error::{Error, Result};

/// Default tolerance for Perron–Frobenius iteration.
pub const DEFAULT_PF_TOL: f64 = 1e-12;
/// Default iteration budget for Perron–Frobenius iteration.
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

/// Square matrix of non-negative edge counts.
#[derive(Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    dim: usize,
    entries: Vec<u64>,
}

impl AdjacencyMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        AdjacencyMatrix {
            dim,
            entries: vec![0; dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("matrix must be non-empty".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::LengthMismatch {
                left: r.len(),
                right: dim,
            });
        }
        Ok(AdjacencyMatrix {
            dim,
            entries: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub(crate) fn add(&mut self, i: usize, j: usize, count: u64) {
        self.entries[i * self.dim + j] += count;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim).map(<[u64]>::to_vec).collect()
    }

    fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            *o = row.iter().zip(v).map(|(&a, &x)| a as f64 * x).sum();
        }
    }

    fn reachable(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.dim];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for v in 0..self.dim {
                let edge = if forward { self.get(u, v) } else { self.get(v, u) };
                if edge > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_irreducible(&self) -> bool {
        self.reachable(0, true).iter().all(|&s| s) && self.reachable(0, false).iter().all(|&s| s)
    }

    /// Checks that some power `A^k` is strictly positive, squaring until the
    /// exponent reaches `dim²` (Wielandt's bound is `(dim−1)² + 1`).
    pub fn check_primitive(&self) -> Result<()> {
        if let Some(v) = self.reachable(0, true).iter().position(|&s| !s) {
            return Err(Error::NotPrimitive(format!(
                "reducible: vertex {v} is not reachable from vertex 0"
            )));
        }
        if let Some(v) = self.reachable(0, false).iter().position(|&s| !s) {
            return Err(Error::NotPrimitive(format!(
                "reducible: vertex 0 is not reachable from vertex {v}"
            )));
        }
        let n = self.dim;
        let mut power: Vec<bool> = self.entries.iter().map(|&a| a > 0).collect();
        let mut exponent = 1usize;
        loop {
            if power.iter().all(|&p| p) {
                return Ok(());
            }
            if exponent >= n * n {
                let zero = power.iter().position(|&p| !p).expect("some zero entry");
                return Err(Error::NotPrimitive(format!(
                    "periodic: A^{exponent} still has a zero entry at ({}, {})",
                    zero / n,
                    zero % n
                )));
            }
            let mut next = vec![false; n * n];
            for i in 0..n {
                for k in 0..n {
                    if power[i * n + k] {
                        for j in 0..n {
                            next[i * n + j] |= power[k * n + j];
                        }
                    }
                }
            }
            power = next;
            exponent *= 2;
        }
    }

    fn submatrix(&self, vertices: &[usize]) -> AdjacencyMatrix {
        let mut m = AdjacencyMatrix::zeros(vertices.len());
        for (a, &i) in vertices.iter().enumerate() {
            for (b, &j) in vertices.iter().enumerate() {
                m.entries[a * vertices.len() + b] = self.get(i, j);
            }
        }
        m
    }

    fn plus_identity(&self) -> AdjacencyMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.entries[i * self.dim + i] += 1;
        }
        m
    }

    /// Strongly connected components (Kosaraju).
    pub fn strong_components(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            // Iterative post-order DFS.
            let mut stack = vec![(s, 0usize)];
            seen[s] = true;
            while let Some(top) = stack.last_mut() {
                let u = top.0;
                if top.1 < n {
                    let v = top.1;
                    top.1 += 1;
                    if self.get(u, v) > 0 && !seen[v] {
                        seen[v] = true;
                        stack.push((v, 0));
                    }
                } else {
                    order.push(u);
                    stack.pop();
                }
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut components = Vec::new();
        for &s in order.iter().rev() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                for v in 0..n {
                    if self.get(v, u) > 0 && comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }
}

impl fmt::Debug for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Perron–Frobenius eigenpair estimate.
#[derive(Clone, Debug)]
pub struct PfEigen {
    pub lambda: f64,
    pub iterations: usize,
    /// Positive eigenvector estimate, normalised to `‖v‖∞ = 1`.
    pub vector: Vec<f64>,
}

/// Power iteration from the all-ones vector on a primitive matrix.
///
/// Stops when the Collatz–Wielandt bracket `min (Av)_i/v_i ≤ λ ≤ max (Av)_i/v_i`
/// is narrower than `tol`, so the returned `λ` is within `tol / 2` of the
/// spectral radius.
pub fn pf_eigenvalue(a: &AdjacencyMatrix, tol: f64) -> Result<PfEigen> {
    pf_eigenvalue_with(a, tol, DEFAULT_MAX_ITERATIONS)
}

pub fn pf_eigenvalue_with(a: &AdjacencyMatrix, tol: f64, max_iterations: usize) -> Result<PfEigen> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    a.check_primitive()?;
    let n = a.dim();
    let mut v = vec![1.0f64; n];
    let mut w = vec![0.0f64; n];
    for iteration in 1..=max_iterations {
        a.mul_vec(&v, &mut w);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (wi, vi) in w.iter().zip(&v) {
            let r = wi / vi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo <= tol {
            return Ok(PfEigen {
                lambda: 0.5 * (lo + hi),
                iterations: iteration,
                vector: v,
            });
        }
        let norm = w.iter().copied().fold(0.0, f64::max);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    Err(Error::NoConvergence(max_iterations))
}

/// Spectral radius of an arbitrary non-negative matrix: the largest
/// Perron root over its strongly connected components. An irreducible but
/// periodic block `B` is handled through the primitive matrix `B + I`.
pub fn spectral_radius(a: &AdjacencyMatrix, tol: f64) -> Result<f64> {
    let mut best = 0.0f64;
    for comp in a.strong_components() {
        let sub = a.submatrix(&comp);
        let lambda = if comp.len() == 1 {
            sub.get(0, 0) as f64
        } else if sub.check_primitive().is_ok() {
            pf_eigenvalue(&sub, tol)?.lambda
        } else {
            pf_eigenvalue(&sub.plus_identity(), tol)?.lambda - 1.0
        };
        best = best.max(lambda);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> AdjacencyMatrix {
        AdjacencyMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn residual_ok(a: &AdjacencyMatrix, pf: &PfEigen, tol: f64) {
        let mut av = vec![0.0; a.dim()];
        a.mul_vec(&pf.vector, &mut av);
        let norm = pf.vector.iter().copied().fold(0.0, f64::max);
        let res = av
            .iter()
            .zip(&pf.vector)
            .map(|(x, v)| (x - pf.lambda * v).abs())
            .fold(0.0, f64::max);
        assert!(res <= tol * norm, "residual {res}");
    }

    #[test]
    fn golden_mean_eigenvalue() {
        let a = m(&[&[1, 1], &[1, 0]]);
        let pf = pf_eigenvalue(&a, 1e-12).unwrap();
        assert!((pf.lambda - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        residual_ok(&a, &pf, 1e-12);
    }

    #[test]
    fn plastic_number() {
        let a = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let pf = pf_eigenvalue(&a, 1e-12).unwrap();
        // Real root of t³ − t − 1 by bisection, independent of the iteration.
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid - mid - 1.0 > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((pf.lambda - lo).abs() < 1e-9);
        assert!((pf.lambda - 1.324_717_957_2).abs() < 1e-9);
        residual_ok(&a, &pf, 1e-12);
    }

    #[test]
    fn single_loop() {
        let pf = pf_eigenvalue(&m(&[&[1]]), 1e-12).unwrap();
        assert_eq!(pf.lambda, 1.0);
    }

    #[test]
    fn not_primitive_errors_name_the_check() {
        let periodic = m(&[&[0, 1], &[1, 0]]);
        match pf_eigenvalue(&periodic, 1e-12) {
            Err(Error::NotPrimitive(msg)) => assert!(msg.starts_with("periodic"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let reducible = m(&[&[1, 1], &[0, 1]]);
        match pf_eigenvalue(&reducible, 1e-12) {
            Err(Error::NotPrimitive(msg)) => assert!(msg.starts_with("reducible"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(pf_eigenvalue(&m(&[&[1]]), 0.0).is_err());
    }

    #[test]
    fn spectral_radius_of_reducible_and_periodic() {
        assert!((spectral_radius(&m(&[&[0, 1], &[1, 0]]), 1e-12).unwrap() - 1.0).abs() < 1e-9);
        let a = m(&[&[1, 1, 0], &[1, 0, 1], &[0, 0, 2]]);
        assert!((spectral_radius(&a, 1e-12).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(spectral_radius(&m(&[&[0, 1], &[0, 0]]), 1e-12).unwrap(), 0.0);
        // Cycle of length 3 with a chord: period 1 after the chord.
        let b = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let pf = pf_eigenvalue(&b, 1e-12).unwrap().lambda;
        assert!((spectral_radius(&b, 1e-12).unwrap() - pf).abs() < 1e-9);
    }

    #[test]
    fn components() {
        let a = m(&[&[1, 1, 0], &[1, 0, 1], &[0, 0, 2]]);
        let mut c = a.strong_components();
        c.sort();
        assert_eq!(c, vec![vec![0, 1], vec![2]]);
    }
}
