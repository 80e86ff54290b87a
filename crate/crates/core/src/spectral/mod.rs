//! Entropy and density of subshifts.
//!
//! All logarithms are base 2. Topological entropy of a finite presentation
//! is `log₂ λ` with `λ` the Perron root of a right-resolving presentation;
//! the density `d = D` is the maximum mean cycle of any presentation.

mod karp;
mod matrix;

pub use karp::max_mean_cycle;
pub use matrix::{
    pf_eigenvalue, pf_eigenvalue_with, spectral_radius, AdjacencyMatrix, PfEigen,
    DEFAULT_MAX_ITERATIONS, DEFAULT_PF_TOL,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::Series;
use crate::subshifts::{LabeledGraph, SubshiftSpec};

/// `log₂` of the growth rate of the language presented by `g`.
///
/// Right-resolving presentations are used as given; others are first
/// determinised by the subset construction. Primitive matrices go through
/// [`pf_eigenvalue`], anything else through [`spectral_radius`].
pub fn topological_entropy_exact(g: &LabeledGraph, tol: f64) -> Result<f64> {
    let g = g.prune()?;
    let presentation = if g.is_right_resolving() {
        g
    } else {
        g.subset_automaton().to_graph()
    };
    let a = presentation.adjacency();
    let lambda = match a.check_primitive() {
        Ok(()) => pf_eigenvalue(&a, tol)?.lambda,
        Err(_) => spectral_radius(&a, tol)?,
    };
    Ok(lambda.log2())
}

/// `log₂` of the Perron root of a primitive matrix.
pub fn entropy_of_matrix(a: &AdjacencyMatrix, tol: f64) -> Result<f64> {
    Ok(pf_eigenvalue(a, tol)?.lambda.log2())
}

/// `(1/n) log₂ |𝓛_n|` for `n = 1..=n_max`.
pub fn entropy_series(spec: &SubshiftSpec, n_max: usize, cap: usize) -> Result<Series> {
    let mut s = Series::new("entropy");
    for n in 1..=n_max {
        let size = spec.language_size(n, cap)?;
        s.push(n, (size as f64).log2() / n as f64, None);
    }
    Ok(s)
}

/// `max_{W ∈ 𝓛_n} #₁W / n` with the lexicographically smallest maximiser.
pub fn ones_density_series(spec: &SubshiftSpec, n_max: usize, cap: usize) -> Result<Series> {
    let mut s = Series::new("ones_density");
    for n in 1..=n_max {
        let lang = spec.language(n, cap)?;
        let (ones, witness) = lang
            .max_ones()
            .ok_or_else(|| Error::EmptySubshift(format!("empty language at length {n}")))?;
        s.push(n, ones as f64 / n as f64, Some(witness));
    }
    Ok(s)
}

/// Tolerance on the probability-vector sum.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Shannon entropy in bits, with `0 · log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(x) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidInput(format!("probability {x} is not a finite non-negative number")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(Error::InvalidInput(format!("probabilities sum to {sum}, not 1")));
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum())
}

/// Binary entropy `H(d) = −d log₂ d − (1−d) log₂ (1−d)`.
pub fn binary_entropy(d: f64) -> f64 {
    [d, 1.0 - d]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundVerdict {
    pub holds: bool,
    /// `H(d) − h`.
    pub slack: f64,
}

/// Checks `h ≤ H(d) + tol`, valid whenever `d ≤ 1/2`.
pub fn entropy_density_bound_check(h: f64, d: f64, tol: f64) -> Result<BoundVerdict> {
    if h < 0.0 || d < 0.0 {
        return Err(Error::InvalidInput(format!("h = {h} and d = {d} must be non-negative")));
    }
    if d > 0.5 {
        return Err(Error::NotApplicable(format!("d = {d} exceeds 1/2")));
    }
    let slack = binary_entropy(d) - h;
    Ok(BoundVerdict {
        holds: slack >= -tol,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshifts::ForbiddenSet;
    use num_rational::Ratio;

    fn graph(words: &[&str]) -> LabeledGraph {
        ForbiddenSet::parse(words.iter().copied()).unwrap().to_graph().unwrap()
    }

    #[test]
    fn entropy_examples() {
        let golden = topological_entropy_exact(&graph(&["11"]), 1e-12).unwrap();
        assert!((golden - 0.694_241_913_6).abs() < 1e-9);
        let x = topological_entropy_exact(&graph(&["00", "111"]), 1e-12).unwrap();
        assert!((x - 0.4057).abs() < 1e-4);
        let y = AdjacencyMatrix::from_rows(&[
            vec![1, 0, 0, 1, 0, 0, 0],
            vec![1, 0, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 1, 0],
            vec![0, 0, 1, 0, 0, 0, 1],
            vec![0, 1, 0, 0, 0, 1, 0],
            vec![0, 0, 1, 0, 0, 0, 1],
            vec![0, 0, 0, 0, 1, 0, 0],
        ])
        .unwrap();
        assert!((entropy_of_matrix(&y, 1e-12).unwrap() - 0.76).abs() < 0.01);
    }

    #[test]
    fn entropy_of_non_right_resolving_closure() {
        // Edge doubling of the full shift must not inflate the entropy.
        let full = graph(&[]).hereditary_closure();
        assert!((topological_entropy_exact(&full, 1e-12).unwrap() - 1.0).abs() < 1e-9);
        // Closure of the 01 orbit: |𝓛_n| = 2^⌈n/2⌉ + 2^⌊n/2⌋ − 1, so h = 1/2.
        let orbit = LabeledGraph::cycle(&crate::words::block("01")).hereditary_closure();
        assert!((topological_entropy_exact(&orbit, 1e-12).unwrap() - 0.5).abs() < 1e-9);
        // Periodic orbit itself has zero entropy.
        let cyc = LabeledGraph::cycle(&crate::words::block("0011"));
        assert!(topological_entropy_exact(&cyc, 1e-12).unwrap().abs() < 1e-9);
    }

    #[test]
    fn series_examples() {
        let full = entropy_series(&SubshiftSpec::Full, 10, 24).unwrap();
        assert!(full.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let golden = SubshiftSpec::sft(["11"]).unwrap();
        let s = entropy_series(&golden, 4, 24).unwrap();
        assert_eq!(s.get(4), Some(0.75));
        let periodic = SubshiftSpec::periodic("00101").unwrap();
        let s = entropy_series(&periodic, 20, 24).unwrap();
        assert!((s.get(20).unwrap() - 5f64.log2() / 20.0).abs() < 1e-15);

        let x = SubshiftSpec::sft(["00", "111"]).unwrap();
        let d = ones_density_series(&x, 3, 24).unwrap();
        assert!((d.get(3).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.last().unwrap().witness.as_ref().unwrap().to_string(), "011");
        let d = ones_density_series(&golden, 4, 24).unwrap();
        assert_eq!(d.get(4), Some(0.5));
        let d = ones_density_series(&SubshiftSpec::Full, 5, 24).unwrap();
        assert!(d.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn density_and_entropy_series_bounds() {
        let cases: &[&[&str]] = &[&["11"], &["00", "111"], &["11", "101"], &["1001", "111"], &["000", "11"]];
        for forbidden in cases {
            let spec = SubshiftSpec::sft(forbidden.iter().copied()).unwrap();
            let g = spec.presentation().unwrap().unwrap();
            let v = g.vertex_count() as f64;
            let d = max_mean_cycle(&g).unwrap();
            let d = *d.numer() as f64 / *d.denom() as f64;
            let h = topological_entropy_exact(&g, 1e-12).unwrap();
            let dens = ones_density_series(&spec, 12, 24).unwrap();
            let ent = entropy_series(&spec, 12, 24).unwrap();
            for n in 1..=12 {
                let gap = dens.get(n).unwrap() - d;
                assert!(gap >= -1e-12 && gap <= v / n as f64, "{forbidden:?} n={n} gap={gap}");
                assert!(ent.get(n).unwrap() >= h - 1e-9, "{forbidden:?} n={n}");
            }
            assert!(ent.get(12).unwrap() - h <= v.log2() / 12.0 + 1e-9, "{forbidden:?}");
        }
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let closed_form = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((shannon_entropy(&[0.25, 0.75]).unwrap() - closed_form).abs() < 1e-15);
        assert!((closed_form - 0.811_278_124_5).abs() < 1e-10);
        assert!(shannon_entropy(&[0.5, 0.6]).is_err());
        assert!(shannon_entropy(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn bound_examples() {
        let h = topological_entropy_exact(&graph(&["11"]), 1e-12).unwrap();
        let v = entropy_density_bound_check(h, 0.5, 1e-12).unwrap();
        assert!(v.holds);
        assert!((v.slack - 0.305_758).abs() < 1e-5);
        let v = entropy_density_bound_check(0.0, 0.0, 1e-12).unwrap();
        assert!(v.holds && v.slack == 0.0);
        assert!(matches!(entropy_density_bound_check(0.1, 0.6, 1e-12), Err(Error::NotApplicable(_))));

        let g = graph(&["11", "101"]);
        let d = max_mean_cycle(&g).unwrap();
        assert_eq!(d, Ratio::new(1, 3));
        let h = topological_entropy_exact(&g, 1e-12).unwrap();
        let v = entropy_density_bound_check(h, 1.0 / 3.0, 1e-12).unwrap();
        assert!(v.holds && v.slack > 0.0);
        assert!((binary_entropy(1.0 / 3.0) - 0.918_295_834).abs() < 1e-9);
    }
}
