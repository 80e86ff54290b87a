use std::collections::BTreeMap;

use num_rational::BigRational;
use super::{convolve_half, empirical_measure, ones_maximal_block, periodic_measure, BlockDistribution, Probability, Provenance};
use crate::error::{invalid, Error, Result};
use crate::series::Series;
use crate::words::Block;

/// Distributions of one measure on the blocks of lengths `1..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSeries<P = f64> {
    dists: Vec<BlockDistribution<P>>,
}

impl<P: Probability> MeasureSeries<P> {
    /// `dists[i]` must have length `i + 1`.
    pub fn new(dists: Vec<BlockDistribution<P>>) -> Result<Self> {
        if dists.is_empty() {
            return invalid("measure series needs at least the length-1 distribution");
        }
        if let Some((i, d)) = dists.iter().enumerate().find(|(i, d)| d.len() != i + 1) {
            return Err(Error::LengthMismatch { left: d.len(), right: i + 1 });
        }
        Ok(MeasureSeries { dists })
    }

    pub fn n_max(&self) -> usize {
        self.dists.len()
    }

    /// Distribution at block length `n`.
    pub fn get(&self, n: usize) -> Option<&BlockDistribution<P>> {
        n.checked_sub(1).and_then(|i| self.dists.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = &BlockDistribution<P>> + '_ {
        self.dists.iter()
    }

    pub fn is_exact(&self) -> bool {
        self.dists[0].provenance().is_exact()
    }

    /// Term-wise `κ = ν ∗ B(1/2, 1/2)`.
    pub fn convolution(&self) -> MeasureSeries<P> {
        MeasureSeries {
            dists: self.dists.iter().map(convolve_half).collect(),
        }
    }

    pub fn to_f64(&self) -> MeasureSeries<f64> {
        MeasureSeries {
            dists: self.dists.iter().map(BlockDistribution::to_f64).collect(),
        }
    }

    /// Largest deviation between each length-`n` distribution and both
    /// one-symbol marginals of the length-`(n+1)` one.
    pub fn marginal_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for pair in self.dists.windows(2) {
            let (short, long) = (&pair[0], &pair[1]);
            for marginal in [long.prefix_marginal()?, long.suffix_marginal()?] {
                let codes: std::collections::BTreeSet<u64> =
                    short.entries().chain(marginal.entries()).map(|(c, _)| c).collect();
                for c in codes {
                    let d = (short.prob_of_code(c).to_f64() - marginal.prob_of_code(c).to_f64()).abs();
                    worst = worst.max(d);
                }
            }
        }
        Ok(worst)
    }

    /// Exact equality of marginals, for exact sources.
    pub fn marginals_agree_exactly(&self) -> Result<bool> {
        for pair in self.dists.windows(2) {
            let (short, long) = (&pair[0], &pair[1]);
            for marginal in [long.prefix_marginal()?, long.suffix_marginal()?] {
                let codes: std::collections::BTreeSet<u64> =
                    short.entries().chain(marginal.entries()).map(|(c, _)| c).collect();
                if codes.into_iter().any(|c| short.prob_of_code(c) != marginal.prob_of_code(c)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Dumps every distribution in the distribution CSV layout.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,block,probability,provenance\n");
        for d in &self.dists {
            d.write_csv_rows(&mut out);
        }
        out
    }
}

impl MeasureSeries<f64> {
    /// Frequencies in the finite window `x` for `n = 1..=n_max`.
    pub fn empirical(x: &Block, n_max: usize) -> Result<Self> {
        Self::new((1..=n_max).map(|n| empirical_measure(x, n)).collect::<Result<_>>()?)
    }
}

impl MeasureSeries<BigRational> {
    /// Exact orbit measure of `pattern^∞`.
    pub fn periodic(pattern: &Block, n_max: usize) -> Result<Self> {
        Self::new((1..=n_max).map(|n| periodic_measure(pattern, n)).collect::<Result<_>>()?)
    }

    /// The uniform product measure, stored exactly. Support grows as `2ⁿ`.
    pub fn bernoulli_half(n_max: usize) -> Result<Self> {
        if n_max > 24 {
            return Err(Error::CapExceeded { n: n_max, cap: 24 });
        }
        let dists = (1..=n_max)
            .map(|n| {
                let p = <BigRational as Probability>::ratio(1, 1 << n);
                let probs: BTreeMap<u64, BigRational> = (0..1u64 << n).map(|c| (c, p.clone())).collect();
                BlockDistribution::new(n, probs, Provenance::Explicit)
            })
            .collect::<Result<_>>()?;
        Self::new(dists)
    }
}

/// `d_ν = ν([1])`.
pub fn d_nu<P: Probability>(series: &MeasureSeries<P>) -> f64 {
    let one = series.dists[0].prob_of_code(1);
    one.to_f64()
}

/// `max{#₁W : ν(W) > 0} / n` with the ones-maximal witness, for each `n`.
pub fn upper_density_series<P: Probability>(series: &MeasureSeries<P>) -> Result<Series> {
    let mut s = Series::new("upper_measure_density");
    for d in series.iter() {
        let c = ones_maximal_block(d)?;
        s.push(d.len(), c.ones_count() as f64 / d.len() as f64, Some(c));
    }
    Ok(s)
}

/// `(1/n)·H(ν on 𝓛_n)` for each `n`.
pub fn measure_entropy_series<P: Probability>(series: &MeasureSeries<P>) -> Result<Series> {
    let mut s = Series::new("measure_entropy");
    for d in series.iter() {
        s.push(d.len(), d.entropy()? / d.len() as f64, None);
    }
    Ok(s)
}

/// Largest block probability at each length. A positive limit points to an
/// atom, decay to zero to a non-atomic measure.
pub fn atom_bound_series<P: Probability>(series: &MeasureSeries<P>) -> Series {
    let mut s = Series::new("atom_bound");
    for d in series.iter() {
        s.push(d.len(), d.max_probability().to_f64(), None);
    }
    s
}
