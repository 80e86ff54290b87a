//! One function per subcommand. Each returns what to write and whether a
//! checked property failed.

use num_rational::{BigRational, Ratio};
use serde_json::{json, Value};
use subshift_core::generators::{
    behrend_check, eta, parse_b, sturmian_point, taut_check, Alpha, BFreeSpec, SturmianSpec,
};
use subshift_core::measures::{
    d_nu, entropy_gibbs_bound_check, gibbs_lower_bound_check, gibbs_lower_bound_check_exact,
    gibbs_ratio_series, GibbsBoundVerdict, GibbsReport,
};
use subshift_core::spectral::{
    binary_entropy, entropy_density_bound_check, entropy_series, max_mean_cycle, ones_density_series,
    topological_entropy_exact,
};
use subshift_core::subshifts::{avoids_00_111, upgrade_embedding, DEFAULT_ENUMERATION_CAP};
use subshift_core::{Block, Error, LabeledGraph, Language, MeasureSeries, Series, SubshiftSpec};

use crate::config::{ExperimentConfig, HRecipe};
use crate::report::Report;
use crate::CliError;

pub enum Output {
    Report(Report),
    Text(String),
    Bytes(Vec<u8>),
}

pub struct Outcome {
    pub output: Output,
    pub violated: bool,
}

impl Outcome {
    fn report(report: Report, violated: bool) -> Self {
        Outcome { output: Output::Report(report), violated }
    }
}

fn ratio_text(r: Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn presented(spec: &SubshiftSpec) -> Result<LabeledGraph, CliError> {
    spec.presentation()?.ok_or_else(|| {
        CliError::Usage(format!(
            "kind \"{}\" has no finite presentation; use sft, sofic, periodic or full",
            spec.kind()
        ))
    })
}

fn series_table(report: &mut Report, series: &Series) {
    report.table(&["n", "value", "witness_block"]);
    for e in &series.entries {
        let witness = e.witness.as_ref().map_or(Value::Null, |w| json!(w.to_string()));
        report.row(vec![json!(e.n), json!(e.value), witness]);
    }
}

pub fn entropy(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spec = cfg.spec()?;
    let mut report = Report::default();
    report.meta("kind", spec.kind());
    if let Some(g) = spec.presentation()? {
        report.meta("entropy", topological_entropy_exact(&g, cfg.tolerances.get("pf"))?);
    } else {
        report.meta("entropy", "not exact; see the series of observed windows");
    }
    series_table(&mut report, &entropy_series(spec, cfg.n_max, DEFAULT_ENUMERATION_CAP)?);
    Ok(Outcome::report(report, false))
}

pub fn density(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spec = cfg.spec()?;
    let mut report = Report::default();
    report.meta("kind", spec.kind());
    if let Some(g) = spec.presentation()? {
        let d = max_mean_cycle(&g)?;
        report.meta("d", ratio_text(d)).meta("d_decimal", ratio_f64(d));
    }
    series_table(&mut report, &ones_density_series(spec, cfg.n_max, DEFAULT_ENUMERATION_CAP)?);
    Ok(Outcome::report(report, false))
}

/// Source measure of a Gibbs experiment, exact when the source is periodic.
enum Source {
    Exact { pattern: Block, nu: MeasureSeries<BigRational> },
    Empirical(MeasureSeries<f64>),
}

fn source(spec: &SubshiftSpec, n_max: usize) -> Result<Source, CliError> {
    match spec {
        SubshiftSpec::Periodic { pattern } => Ok(Source::Exact {
            pattern: pattern.clone(),
            nu: MeasureSeries::periodic(pattern, n_max)?,
        }),
        SubshiftSpec::Bfree(_) | SubshiftSpec::Sturmian(_) => {
            let x = spec.generated_window().expect("point-based kind");
            Ok(Source::Empirical(MeasureSeries::empirical(&x, n_max)?))
        }
        other => Err(CliError::Usage(format!(
            "gibbs needs a point source (bfree, sturmian or periodic), not \"{}\"",
            other.kind()
        ))),
    }
}

/// Resolves `h`, keeping an exact rational when one is available.
fn resolve_h(recipe: &HRecipe, src: &Source, tol: f64) -> Result<(f64, Option<Ratio<i64>>), CliError> {
    match (recipe, src) {
        (HRecipe::Value { value, exact }, _) => Ok((*value, *exact)),
        (HRecipe::DEqualsHtilde, Source::Exact { pattern, .. }) => {
            let d = Ratio::new(pattern.ones_count() as i64, pattern.len() as i64);
            Ok((ratio_f64(d), Some(d)))
        }
        (HRecipe::DEqualsHtilde, Source::Empirical(nu)) => Ok((d_nu(nu), None)),
        (HRecipe::Exact, Source::Exact { pattern, .. }) => {
            let closure = LabeledGraph::cycle(pattern).hereditary_closure();
            Ok((topological_entropy_exact(&closure, tol)?, None))
        }
        (HRecipe::Exact, Source::Empirical(_)) => Err(CliError::Usage(
            "--h exact needs a periodic source; use d-equals-htilde or a value".into(),
        )),
    }
}

fn parse_a(a: &str) -> Result<(f64, BigRational), CliError> {
    let bad = || CliError::Usage(format!("--a expects a positive number or p/q, got {a:?}"));
    let (f, exact) = match a.trim().split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q <= 0 {
                return Err(bad());
            }
            (p as f64 / q as f64, BigRational::new(p.into(), q.into()))
        }
        None => {
            let f: f64 = a.trim().parse().map_err(|_| bad())?;
            (f, BigRational::from_float(f).ok_or_else(bad)?)
        }
    };
    if !(f > 0.0) {
        return Err(bad());
    }
    Ok((f, exact))
}

fn gibbs_report_rows(report: &mut Report, g: &GibbsReport) {
    report.table(&["n", "witness", "ones", "nu", "kappa", "ratio", "certified_bound"]);
    for e in &g.entries {
        report.row(vec![
            json!(e.n),
            json!(e.witness.to_string()),
            json!(e.ones),
            json!(e.nu),
            json!(e.kappa),
            json!(e.ratio),
            json!(e.certified_bound),
        ]);
    }
}

fn bound_meta(report: &mut Report, v: &GibbsBoundVerdict, exact: bool) {
    let w = v.worst();
    report
        .meta("a", v.a)
        .meta("bound_arithmetic", if exact { "exact" } else { "floating" })
        .meta("bound_min_a_star", w.a_star)
        .meta("bound_worst_n", w.n)
        .meta("bound_worst_block", w.witness.to_string())
        .meta("bound_holds", v.holds);
}

pub fn gibbs(cfg: &ExperimentConfig, h: Option<&str>, a: Option<&str>) -> Result<Outcome, CliError> {
    let spec = cfg.spec()?;
    let recipe: HRecipe = h
        .ok_or_else(|| CliError::Usage("gibbs needs --h VALUE|exact|d-equals-htilde".into()))?
        .parse()?;
    let src = source(spec, cfg.n_max)?;
    let (h, h_exact) = resolve_h(&recipe, &src, cfg.tolerances.get("pf"))?;
    let g = match &src {
        Source::Exact { nu, .. } => gibbs_ratio_series(nu, h)?,
        Source::Empirical(nu) => gibbs_ratio_series(nu, h)?,
    };
    let mut report = Report::default();
    report.meta("kind", spec.kind()).meta("h", h);
    for assumption in &g.assumptions {
        report.meta("assumption", assumption.as_str());
    }
    report.meta("verdict", g.verdict_line());
    let mut violated = false;
    if let Some(a) = a {
        let (a_f, a_exact) = parse_a(a)?;
        let (v, exact) = match (&src, h_exact) {
            (Source::Exact { nu, .. }, Some(hq)) => {
                (gibbs_lower_bound_check_exact(&nu.convolution(), hq, &a_exact)?, true)
            }
            (Source::Exact { nu, .. }, None) => (gibbs_lower_bound_check(&nu.convolution(), h, a_f)?, false),
            (Source::Empirical(nu), _) => (gibbs_lower_bound_check(&nu.convolution(), h, a_f)?, false),
        };
        bound_meta(&mut report, &v, exact);
        violated = !v.holds;
    }
    gibbs_report_rows(&mut report, &g);
    Ok(Outcome::report(report, violated))
}

pub fn taut(cfg: &ExperimentConfig, b: &str) -> Result<Outcome, CliError> {
    let members = parse_b(b)?;
    let window = cfg.window.unwrap_or(1_000_000);
    let r = taut_check(&members, window, cfg.tolerances.get("margin"))?;
    let mut report = Report::default();
    report
        .meta("window", r.window)
        .meta("margin", r.margin)
        .meta("taut", r.taut)
        .meta("label", r.label)
        .table(&["b", "gap", "passes"]);
    for g in &r.gaps {
        report.row(vec![json!(g.b), json!(g.gap), json!(g.passes)]);
    }
    Ok(Outcome::report(report, !r.taut))
}

pub fn behrend(cfg: &ExperimentConfig, b: &str) -> Result<Outcome, CliError> {
    let members = parse_b(b)?;
    let window = cfg.window.unwrap_or(1_000_000);
    let r = behrend_check(&members, window, cfg.tolerances.get("threshold"))?;
    let mut report = Report::default();
    report
        .meta("window", r.window)
        .meta("threshold", r.threshold)
        .meta("free_log_density", r.free_density)
        .meta("behrend", r.behrend)
        .meta("label", r.label);
    Ok(Outcome::report(report, !r.behrend))
}

/// Bits packed eight per byte, most significant first, last byte zero-padded.
pub fn pack(x: &Block) -> Vec<u8> {
    x.to_bits()
        .chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (i, &bit)| acc | (bit << (7 - i))))
        .collect()
}

fn window_output(x: Block, packed: bool) -> Outcome {
    let output = if packed {
        Output::Bytes(pack(&x))
    } else {
        Output::Text(format!("{x}\n"))
    };
    Outcome { output, violated: false }
}

fn required_window(cfg: &ExperimentConfig) -> Result<usize, CliError> {
    cfg.window.ok_or_else(|| CliError::Usage("this command needs --window N".into()))
}

pub fn eta_cmd(cfg: &ExperimentConfig, b: &str, packed: bool) -> Result<Outcome, CliError> {
    let spec = BFreeSpec::new(&parse_b(b)?, required_window(cfg)?)?;
    Ok(window_output(eta(&spec), packed))
}

pub fn sturmian(cfg: &ExperimentConfig, alpha: &str, rho: f64, packed: bool) -> Result<Outcome, CliError> {
    let alpha: Alpha = alpha.parse()?;
    let spec = SturmianSpec::new(alpha, rho, required_window(cfg)?)?;
    Ok(window_output(sturmian_point(&spec), packed))
}

/// The hereditary closure, written as a `sofic` spec file.
pub fn closure(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spec = cfg.spec()?;
    let closure = presented(spec)?.hereditary_closure();
    let h = topological_entropy_exact(&closure, cfg.tolerances.get("pf"))?;
    let text = SubshiftSpec::Sofic { graph: closure }.to_toml()?;
    Ok(Outcome {
        output: Output::Text(format!("# hereditary closure of a {} spec; entropy = {h}\n{text}", spec.kind())),
        violated: false,
    })
}

/// Canonical form of a spec file.
pub fn spec(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    Ok(Outcome {
        output: Output::Text(cfg.spec()?.to_toml()?),
        violated: false,
    })
}

pub fn embed(word: &str) -> Result<Outcome, CliError> {
    let y: Block = word.parse()?;
    let x = upgrade_embedding(&y)?;
    let dominates = x.dominates(&y)?;
    let avoids = avoids_00_111(&x);
    let mut report = Report::default();
    report
        .meta("input", y.to_string())
        .meta("output", x.to_string())
        .meta("dominates", dominates)
        .meta("avoids_00_111", avoids);
    Ok(Outcome::report(report, !(dominates && avoids)))
}

/// Entropy/density and Gibbs-constant inequalities on a presented subshift.
pub fn bound(
    cfg: &ExperimentConfig,
    h: Option<&str>,
    a: &str,
    kappa_of: Option<&str>,
) -> Result<Outcome, CliError> {
    let spec = cfg.spec()?;
    let g = presented(spec)?;
    let tol = cfg.tolerances.get("bound");
    let h_top = topological_entropy_exact(&g, cfg.tolerances.get("pf"))?;
    let d = ratio_f64(max_mean_cycle(&g)?);
    let h = match h.map(str::parse::<HRecipe>).transpose()? {
        None | Some(HRecipe::Exact) => h_top,
        Some(HRecipe::DEqualsHtilde) => d,
        Some(HRecipe::Value { value, .. }) => value,
    };
    let (a, _) = parse_a(a)?;
    let mut report = Report::default();
    report
        .meta("kind", spec.kind())
        .meta("h", h)
        .meta("a", a)
        .meta("d", d)
        .meta("binary_entropy_of_d", binary_entropy(d));
    let mut violated = false;

    match entropy_density_bound_check(h_top, d, tol) {
        Ok(v) => {
            report.meta("entropy_density_bound", v.holds).meta("entropy_density_slack", v.slack);
            violated |= !v.holds;
        }
        Err(Error::NotApplicable(why)) => {
            report.meta("entropy_density_bound", format!("not applicable: {why}"));
        }
        Err(e) => return Err(e.into()),
    }

    let langs: Vec<Language> = (1..=cfg.n_max)
        .map(|n| spec.language(n, DEFAULT_ENUMERATION_CAP))
        .collect::<Result<_, _>>()?;
    let ell: Vec<(usize, u128)> = langs.iter().map(|l| (l.word_len(), l.len() as u128)).collect();
    let rate = subshift_core::measures::rate_of_convergence_check(&ell, h, a, tol)?;
    report.meta("rate_of_convergence", rate.holds);
    violated |= !rate.holds;

    if let Some(pattern) = kappa_of {
        let kappa = MeasureSeries::periodic(&pattern.parse()?, cfg.n_max)?.convolution();
        match entropy_gibbs_bound_check(&kappa, h, a, Some(&langs), tol) {
            Ok(v) => {
                report.meta("entropy_gibbs_bound", v.holds);
                violated |= !v.holds;
            }
            Err(Error::NotApplicable(why)) => {
                report.meta("entropy_gibbs_bound", format!("not applicable: {why}"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    report.table(&["n", "words", "lower_slack", "upper_slack", "holds"]);
    for r in &rate.rows {
        report.row(vec![
            json!(r.n),
            json!(r.words.to_string()),
            json!(r.lower_slack),
            json!(r.upper_slack),
            json!(r.holds),
        ]);
    }
    Ok(Outcome::report(report, violated))
}
