//! Block distributions of invariant measures and the half-thinning
//! convolution `κ = ν ∗ B(1/2, 1/2)`.
//!
//! A [`BlockDistribution`] is the restriction of a measure to the cylinders of
//! one length. Probabilities are generic over [`Probability`] so periodic
//! sources can be handled with exact rationals.

mod distribution;
mod gibbs;
mod series;

pub use distribution::{
    convolve_half, empirical_measure, maximal_block_formula_check, monotonicity_check,
    ones_maximal_block, periodic_measure, BlockDistribution, FormulaVerdict, MonotonicityVerdict,
    Provenance,
};
pub use gibbs::{
    entropy_gibbs_bound_check, gibbs_lower_bound_check, gibbs_lower_bound_check_exact,
    gibbs_ratio_series, rate_of_convergence_check, EntropyGibbsRow, EntropyGibbsVerdict,
    GibbsBoundRow, GibbsBoundVerdict, GibbsEntry, GibbsReport, GibbsTrend, RateRow, RateVerdict,
    ERGODICITY_ASSUMPTION,
};
pub use series::{
    atom_bound_series, d_nu, measure_entropy_series, upper_density_series, MeasureSeries,
};

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Tolerance on total mass for floating-point distributions.
pub const MASS_TOL: f64 = 1e-12;

/// Scalar used for probabilities: `f64` or exact `BigRational`.
pub trait Probability: Clone + Debug + PartialEq + PartialOrd {
    fn zero() -> Self;
    fn one() -> Self;
    /// `num / den`.
    fn ratio(num: u64, den: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `self · 2^{−k}`.
    fn halve(&self, k: u32) -> Self;
    fn to_f64(&self) -> f64;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
    /// Total-mass test: within [`MASS_TOL`] for floats, exact for rationals.
    fn is_unit_mass(&self) -> bool;
}

impl Probability for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn halve(&self, k: u32) -> Self {
        self * 2f64.powi(-(k as i32))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negative(&self) -> bool {
        *self < 0.0 || self.is_nan()
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn is_unit_mass(&self) -> bool {
        (self - 1.0).abs() <= MASS_TOL
    }
}

impl Probability for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn halve(&self, k: u32) -> Self {
        self / BigRational::from_integer(BigInt::one() << k)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_unit_mass(&self) -> bool {
        One::is_one(self)
    }
}
