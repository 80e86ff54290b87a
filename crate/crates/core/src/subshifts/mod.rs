//! Subshift presentations, languages and hereditary closures.

mod embedding;
mod forbidden;
mod graph;
mod language;
mod spec;

pub use embedding::{avoids_00_111, in_y_language, upgrade_embedding};
pub use forbidden::ForbiddenSet;
pub use graph::{Edge, LabeledGraph, SubsetAutomaton};
pub use language::{hereditary_closure_language, Language};
pub use spec::{factor_codes, window_language, SubshiftSpec, DEFAULT_ENUMERATION_CAP};
