use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use num_rational::Ratio;
use subshift_core::generators::{DEFAULT_BEHREND_THRESHOLD, DEFAULT_TAUT_MARGIN};
use subshift_core::spectral::DEFAULT_PF_TOL;
use subshift_core::subshifts::DEFAULT_ENUMERATION_CAP;
use subshift_core::SubshiftSpec;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

/// Named numeric tolerances, overridable with `--tol NAME=VALUE`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    values: BTreeMap<&'static str, f64>,
}

const TOLERANCE_DEFAULTS: [(&str, f64); 4] = [
    ("pf", DEFAULT_PF_TOL),
    ("bound", 1e-12),
    ("margin", DEFAULT_TAUT_MARGIN),
    ("threshold", DEFAULT_BEHREND_THRESHOLD),
];

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            values: TOLERANCE_DEFAULTS.into_iter().collect(),
        }
    }
}

impl Tolerances {
    pub fn from_overrides(overrides: &[String]) -> Result<Self, CliError> {
        let mut t = Tolerances::default();
        for o in overrides {
            let (name, value) = o
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--tol expects NAME=VALUE, got {o:?}")))?;
            let key = TOLERANCE_DEFAULTS
                .iter()
                .map(|(k, _)| *k)
                .find(|k| *k == name.trim())
                .ok_or_else(|| {
                    let known: Vec<&str> = TOLERANCE_DEFAULTS.iter().map(|(k, _)| *k).collect();
                    CliError::Usage(format!("unknown tolerance {name:?}; known: {}", known.join(", ")))
                })?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("tolerance {key} has bad value {value:?}")))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("tolerance {key} must be positive, got {v}")));
            }
            t.values.insert(key, v);
        }
        Ok(t)
    }

    pub fn get(&self, name: &str) -> f64 {
        self.values[name]
    }
}

/// How the exponent `h` of a Gibbs bound is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum HRecipe {
    /// A literal value; rational literals are kept exact.
    Value { value: f64, exact: Option<Ratio<i64>> },
    /// Topological entropy of the hereditary closure of the source.
    Exact,
    /// `h = d_ν`, the frequency of ones.
    DEqualsHtilde,
}

impl FromStr for HRecipe {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("--h expects a number, p/q, exact or d-equals-htilde; got {s:?}"));
        match s.trim() {
            "exact" => Ok(HRecipe::Exact),
            "d-equals-htilde" => Ok(HRecipe::DEqualsHtilde),
            t => {
                let (value, exact) = match t.split_once('/') {
                    Some((p, q)) => {
                        let p: i64 = p.trim().parse().map_err(|_| bad())?;
                        let q: i64 = q.trim().parse().map_err(|_| bad())?;
                        if q <= 0 {
                            return Err(bad());
                        }
                        (p as f64 / q as f64, Some(Ratio::new(p, q)))
                    }
                    None => (t.parse::<f64>().map_err(|_| bad())?, None),
                };
                if !(value >= 0.0 && value.is_finite()) {
                    return Err(CliError::Usage(format!("h = {value} must be non-negative")));
                }
                Ok(HRecipe::Value { value, exact })
            }
        }
    }
}

/// Everything one command invocation needs.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub spec: Option<SubshiftSpec>,
    pub n_max: usize,
    pub window: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn new(
        spec_path: Option<&PathBuf>,
        n_max: usize,
        window: Option<usize>,
        out: Option<PathBuf>,
        format: Format,
        tol: &[String],
    ) -> Result<Self, CliError> {
        if n_max == 0 || n_max > DEFAULT_ENUMERATION_CAP {
            return Err(CliError::Usage(format!(
                "--n-max must lie in 1..={DEFAULT_ENUMERATION_CAP}, got {n_max}"
            )));
        }
        if window == Some(0) {
            return Err(CliError::Usage("--window must be positive".into()));
        }
        let spec = spec_path.map(load_spec).transpose()?;
        Ok(ExperimentConfig {
            spec,
            n_max,
            window,
            out,
            format,
            tolerances: Tolerances::from_overrides(tol)?,
        })
    }

    pub fn spec(&self) -> Result<&SubshiftSpec, CliError> {
        self.spec
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs --spec FILE".into()))
    }
}

pub fn load_spec(path: &PathBuf) -> Result<SubshiftSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    SubshiftSpec::from_toml(&text).map_err(|e| CliError::Spec(path.display().to_string(), e))
}
