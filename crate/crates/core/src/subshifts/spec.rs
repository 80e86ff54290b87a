//! Declarative subshift descriptions and their TOML file format.
//!
//! ```toml
//! kind = "sft"
//! forbidden = ["00", "111"]
//! ```
//!
//! Other kinds: `sofic` (`[graph]` with `vertices` and `edges = [[s, t, label], …]`),
//! `bfree` (`b = [4, 9]` or `b = "prime-squares:10000"`, `window`),
//! `sturmian` (`alpha`, `rho`, `window`), `periodic` (`pattern`) and `full`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    eta, sturmian_point, AlphaRepr, BFreeRepr, BFreeSpec, BRepr, SturmianRepr, SturmianSpec,
};
use crate::subshifts::{ForbiddenSet, Language, LabeledGraph};
use crate::words::{Block, MAX_CODE_LEN};

/// Default bound on the word length for language enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "SpecFile")]
pub enum SubshiftSpec {
    Sft { forbidden: ForbiddenSet },
    Sofic { graph: LabeledGraph },
    Bfree(BFreeSpec),
    Sturmian(SturmianSpec),
    Periodic { pattern: Block },
    Full,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Sft,
    Sofic,
    Bfree,
    Sturmian,
    Periodic,
    Full,
}

/// Flat on-disk form. Deserialising fields directly (rather than through a
/// tagged enum) keeps line information in value errors.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    kind: Kind,
    forbidden: Option<ForbiddenSet>,
    graph: Option<LabeledGraph>,
    b: Option<BRepr>,
    window: Option<usize>,
    alpha: Option<AlphaRepr>,
    rho: Option<f64>,
    pattern: Option<Block>,
}

fn required<T>(value: Option<T>, kind: &str, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidInput(format!("missing field `{field}` for kind \"{kind}\"")))
}

impl TryFrom<SpecFile> for SubshiftSpec {
    type Error = Error;

    fn try_from(f: SpecFile) -> Result<Self> {
        let stray = |names: &[(&str, bool)], kind: &str| -> Result<()> {
            match names.iter().find(|(_, present)| *present) {
                Some((name, _)) => Err(Error::InvalidInput(format!(
                    "field `{name}` does not apply to kind \"{kind}\""
                ))),
                None => Ok(()),
            }
        };
        let fields = [
            ("forbidden", f.forbidden.is_some()),
            ("graph", f.graph.is_some()),
            ("b", f.b.is_some()),
            ("window", f.window.is_some()),
            ("alpha", f.alpha.is_some()),
            ("rho", f.rho.is_some()),
            ("pattern", f.pattern.is_some()),
        ];
        let others = |keep: &[&str]| -> Vec<(&str, bool)> {
            fields.iter().copied().filter(|(n, _)| !keep.contains(n)).collect()
        };
        match f.kind {
            Kind::Sft => {
                stray(&others(&["forbidden"]), "sft")?;
                Ok(SubshiftSpec::Sft {
                    forbidden: required(f.forbidden, "sft", "forbidden")?,
                })
            }
            Kind::Sofic => {
                stray(&others(&["graph"]), "sofic")?;
                Ok(SubshiftSpec::Sofic {
                    graph: required(f.graph, "sofic", "graph")?,
                })
            }
            Kind::Bfree => {
                stray(&others(&["b", "window"]), "bfree")?;
                let repr = BFreeRepr {
                    b: required(f.b, "bfree", "b")?,
                    window: required(f.window, "bfree", "window")?,
                };
                Ok(SubshiftSpec::Bfree(BFreeSpec::try_from(repr)?))
            }
            Kind::Sturmian => {
                stray(&others(&["alpha", "rho", "window"]), "sturmian")?;
                let repr = SturmianRepr {
                    alpha: required(f.alpha, "sturmian", "alpha")?,
                    rho: f.rho.unwrap_or(0.0),
                    window: required(f.window, "sturmian", "window")?,
                };
                Ok(SubshiftSpec::Sturmian(SturmianSpec::try_from(repr)?))
            }
            Kind::Periodic => {
                stray(&others(&["pattern"]), "periodic")?;
                Ok(SubshiftSpec::Periodic {
                    pattern: required(f.pattern, "periodic", "pattern")?,
                })
            }
            Kind::Full => {
                stray(&others(&[]), "full")?;
                Ok(SubshiftSpec::Full)
            }
        }
    }
}

impl SubshiftSpec {
    pub fn sft<'a>(forbidden: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        Ok(SubshiftSpec::Sft {
            forbidden: ForbiddenSet::parse(forbidden)?,
        })
    }

    pub fn periodic(pattern: &str) -> Result<Self> {
        Ok(SubshiftSpec::Periodic {
            pattern: pattern.parse()?,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SubshiftSpec::Sft { .. } => "sft",
            SubshiftSpec::Sofic { .. } => "sofic",
            SubshiftSpec::Bfree(_) => "bfree",
            SubshiftSpec::Sturmian(_) => "sturmian",
            SubshiftSpec::Periodic { .. } => "periodic",
            SubshiftSpec::Full => "full",
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("spec parse error: {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidInput(format!("spec encode error: {e}")))
    }

    /// True when the language is known exactly (finite presentation).
    pub fn is_exact(&self) -> bool {
        !matches!(self, SubshiftSpec::Bfree(_) | SubshiftSpec::Sturmian(_))
    }

    /// Essential labelled-graph presentation, for the kinds that have one.
    pub fn presentation(&self) -> Result<Option<LabeledGraph>> {
        let g = match self {
            SubshiftSpec::Sft { forbidden } => forbidden.to_graph()?,
            SubshiftSpec::Sofic { graph } => graph.prune()?,
            SubshiftSpec::Periodic { pattern } => LabeledGraph::cycle(pattern),
            SubshiftSpec::Full => ForbiddenSet::full_shift().to_graph()?,
            SubshiftSpec::Bfree(_) | SubshiftSpec::Sturmian(_) => return Ok(None),
        };
        Ok(Some(g))
    }

    /// Generated finite segment for point-based kinds: `η` on `[1, N]`, the
    /// Sturmian coding on `[1, N]`, or one period of a periodic point.
    pub fn generated_window(&self) -> Option<Block> {
        match self {
            SubshiftSpec::Bfree(b) => Some(eta(b)),
            SubshiftSpec::Sturmian(s) => Some(sturmian_point(s)),
            SubshiftSpec::Periodic { pattern } => Some(pattern.clone()),
            _ => None,
        }
    }

    /// `𝓛_n` for presented kinds; the observed length-`n` windows for
    /// point-based kinds.
    pub fn language(&self, n: usize, cap: usize) -> Result<Language> {
        check_cap(n, cap)?;
        match self.presentation()? {
            Some(g) => g.subset_automaton().words(n),
            None => {
                let x = self.generated_window().expect("point-based kind");
                window_language(&x, n)
            }
        }
    }

    pub fn language_size(&self, n: usize, cap: usize) -> Result<u128> {
        check_cap(n, cap)?;
        match self.presentation()? {
            Some(g) => g.subset_automaton().count(n),
            None => Ok(self.language(n, cap)?.len() as u128),
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

/// Codes of the length-`n` factors of `x`, one per window position.
pub fn factor_codes(x: &Block, n: usize) -> Result<impl Iterator<Item = u64> + '_> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if n > MAX_CODE_LEN {
        return Err(Error::TooLong(n));
    }
    if x.len() < n {
        return Err(Error::InvalidInput(format!(
            "window of length {} is shorter than {n}",
            x.len()
        )));
    }
    let mask = (1u64 << n) - 1;
    let mut code = 0u64;
    Ok((0..x.len()).filter_map(move |i| {
        code = ((code << 1) | u64::from(x.get(i))) & mask;
        (i + 1 >= n).then_some(code)
    }))
}

/// Distinct length-`n` factors of a finite word.
pub fn window_language(x: &Block, n: usize) -> Result<Language> {
    Ok(Language::from_codes(n, factor_codes(x, n)?.collect()))
}
