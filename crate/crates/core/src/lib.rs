//! Binary subshifts: languages, entropy, density of ones and Gibbs-type
//! bounds for invariant measures.

pub mod error;
pub mod generators;
pub mod measures;
pub mod series;
pub mod spectral;
pub mod subshifts;
pub mod words;

pub use error::{Error, Result};
pub use measures::{BlockDistribution, MeasureSeries};
pub use series::{Series, SeriesEntry};
pub use subshifts::{ForbiddenSet, LabeledGraph, Language, SubshiftSpec};
pub use words::Block;
