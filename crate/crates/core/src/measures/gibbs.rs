//! Gibbs-type lower bounds `κ(C) ≥ a·2^{−|C|h}` and their consequences.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed};
use serde::Serialize;

use super::{ones_maximal_block, MeasureSeries, Probability};
use crate::error::{invalid, Error, Result};
use crate::subshifts::Language;
use crate::words::Block;

/// Recorded in every report: invariance is observable, ergodicity is not.
pub const ERGODICITY_ASSUMPTION: &str = "source measure assumed ergodic (not finitely checkable)";

#[derive(Clone, Debug, Serialize)]
pub struct GibbsEntry {
    pub n: usize,
    pub witness: Block,
    pub ones: usize,
    pub nu: f64,
    pub kappa: f64,
    pub ratio: f64,
    /// `n·h ≤ oₙ`, hence `rₙ ≤ ν(Cₙ)`.
    pub certified_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "trend", rename_all = "kebab-case")]
pub enum GibbsTrend {
    /// `r` at the last length is at most half its value at a third of it.
    Decays { from_n: usize, to_n: usize, from_ratio: f64, to_ratio: f64 },
    /// No decay seen; the smallest ratio is the best Gibbs constant.
    Bounded { a_star: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct GibbsReport {
    pub h: f64,
    pub entries: Vec<GibbsEntry>,
    pub assumptions: Vec<String>,
    pub trend: GibbsTrend,
}

impl GibbsReport {
    pub fn get(&self, n: usize) -> Option<&GibbsEntry> {
        self.entries.iter().find(|e| e.n == n)
    }

    pub fn a_star(&self) -> f64 {
        self.entries.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min)
    }

    pub fn all_certified(&self) -> bool {
        self.entries.iter().all(|e| e.certified_bound)
    }

    pub fn verdict_line(&self) -> String {
        match self.trend {
            GibbsTrend::Decays { .. } => "ratio decays; no Gibbs at desk scale".to_string(),
            GibbsTrend::Bounded { a_star } => format!("Gibbs evidence: holds with a* >= {a_star:.6}"),
        }
    }

    /// CSV with header `n,witness,ones,nu,kappa,ratio,certified_bound`,
    /// preceded by `#` metadata lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# h = {}", self.h).expect("write to string");
        for a in &self.assumptions {
            writeln!(out, "# assumption: {a}").expect("write to string");
        }
        writeln!(out, "# verdict: {}", self.verdict_line()).expect("write to string");
        out.push_str("n,witness,ones,nu,kappa,ratio,certified_bound\n");
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                e.n, e.witness, e.ones, e.nu, e.kappa, e.ratio, e.certified_bound
            )
            .expect("write to string");
        }
        out
    }
}

/// `rₙ = κ(Cₙ)·2^{nh}` on the ones-maximal blocks `Cₙ` of `ν`, with
/// `κ(Cₙ) = ν(Cₙ)·2^{−oₙ}` from the maximal-block formula.
pub fn gibbs_ratio_series<P: Probability>(nu: &MeasureSeries<P>, h: f64) -> Result<GibbsReport> {
    if !(h >= 0.0) {
        return invalid(format!("h = {h} must be non-negative"));
    }
    let mut entries = Vec::with_capacity(nu.n_max());
    for d in nu.iter() {
        let n = d.len();
        let witness = ones_maximal_block(d)?;
        let ones = witness.ones_count();
        let p = d.prob(&witness)?.to_f64();
        let kappa = p * 2f64.powi(-(ones as i32));
        let ratio = kappa * (n as f64 * h).exp2();
        let certified_bound = n as f64 * h <= ones as f64 * (1.0 + 1e-12);
        entries.push(GibbsEntry { n, witness, ones, nu: p, kappa, ratio, certified_bound });
    }
    let to = entries.last().expect("series is non-empty");
    let from_n = to.n.div_ceil(3);
    let from = &entries[from_n - 1];
    let trend = if to.n > from_n && to.ratio <= 0.5 * from.ratio {
        GibbsTrend::Decays { from_n, to_n: to.n, from_ratio: from.ratio, to_ratio: to.ratio }
    } else {
        GibbsTrend::Bounded {
            a_star: entries.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min),
        }
    };
    let mut assumptions = vec![ERGODICITY_ASSUMPTION.to_string()];
    if !nu.is_exact() {
        assumptions.push("block frequencies estimated from a finite window".to_string());
    }
    Ok(GibbsReport { h, entries, assumptions, trend })
}

#[derive(Clone, Debug, Serialize)]
pub struct GibbsBoundRow {
    pub n: usize,
    /// Smallest positive `κ(C)` at this length and the block attaining it.
    pub min_kappa: f64,
    pub witness: Block,
    /// `min κ(C)·2^{nh}`.
    pub a_star: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GibbsBoundVerdict {
    pub a: f64,
    pub h: f64,
    pub rows: Vec<GibbsBoundRow>,
    pub holds: bool,
}

impl GibbsBoundVerdict {
    pub fn a_star(&self) -> f64 {
        self.rows.iter().map(|r| r.a_star).fold(f64::INFINITY, f64::min)
    }

    /// Row with the smallest `a*`.
    pub fn worst(&self) -> &GibbsBoundRow {
        self.rows
            .iter()
            .min_by(|x, y| x.a_star.total_cmp(&y.a_star))
            .expect("at least one row")
    }
}

fn min_positive<P: Probability>(d: &super::BlockDistribution<P>) -> Result<(Block, P)> {
    let mut best: Option<(Block, &P)> = None;
    for (b, p) in d.support() {
        if best.as_ref().is_none_or(|(_, q)| p < *q) {
            best = Some((b, p));
        }
    }
    best.map(|(b, p)| (b, p.clone()))
        .ok_or_else(|| Error::EmptySubshift("distribution has empty support".into()))
}

fn check_a_h(a: f64, h: f64) -> Result<()> {
    if !(a > 0.0) {
        return invalid(format!("a = {a} must be positive"));
    }
    if !(h >= 0.0) {
        return invalid(format!("h = {h} must be non-negative"));
    }
    Ok(())
}

/// Scans every positive-`κ` block for `n ≤ n_max` and reports the smallest
/// witnessed constant `a* = min κ(C)·2^{nh}` against `a`.
pub fn gibbs_lower_bound_check<P: Probability>(
    kappa: &MeasureSeries<P>,
    h: f64,
    a: f64,
) -> Result<GibbsBoundVerdict> {
    check_a_h(a, h)?;
    let mut rows = Vec::new();
    for d in kappa.iter() {
        let (witness, p) = min_positive(d)?;
        let min_kappa = p.to_f64();
        let a_star = min_kappa * (d.len() as f64 * h).exp2();
        rows.push(GibbsBoundRow {
            n: d.len(),
            min_kappa,
            witness,
            a_star,
            holds: a_star >= a * (1.0 - 1e-12),
        });
    }
    let holds = rows.iter().all(|r| r.holds);
    Ok(GibbsBoundVerdict { a, h, rows, holds })
}

/// Exact form of [`gibbs_lower_bound_check`] for rational `h = p/q`:
/// `κ·2^{np/q} ≥ a` is decided as `κ^q·2^{np} ≥ a^q`.
pub fn gibbs_lower_bound_check_exact(
    kappa: &MeasureSeries<BigRational>,
    h: Ratio<i64>,
    a: &BigRational,
) -> Result<GibbsBoundVerdict> {
    if !Signed::is_positive(a) {
        return invalid("a must be positive");
    }
    if Signed::is_negative(&h) {
        return invalid(format!("h = {h} must be non-negative"));
    }
    let (p, q) = (*h.numer() as u64, *h.denom() as u64);
    let hf = p as f64 / q as f64;
    let a_pow = pow(a, q);
    let mut rows = Vec::new();
    for d in kappa.iter() {
        let n = d.len() as u64;
        let (witness, min_kappa) = min_positive(d)?;
        let lhs = pow(&min_kappa, q) * BigRational::from_integer(BigInt::one() << (n * p));
        let min_f = Probability::to_f64(&min_kappa);
        rows.push(GibbsBoundRow {
            n: d.len(),
            min_kappa: min_f,
            witness,
            a_star: min_f * (n as f64 * hf).exp2(),
            holds: lhs >= a_pow,
        });
    }
    let holds = rows.iter().all(|r| r.holds);
    Ok(GibbsBoundVerdict { a: Probability::to_f64(a), h: hf, rows, holds })
}

fn pow(x: &BigRational, e: u64) -> BigRational {
    let e = usize::try_from(e).expect("exponent fits usize");
    num_traits::pow(x.clone(), e)
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyGibbsRow {
    pub n: usize,
    /// `(1/n)·H(κ on 𝓛_n)`.
    pub entropy_rate: f64,
    /// `a(1 − 2^{−nh})(h − log₂(a)/n)`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyGibbsVerdict {
    pub rows: Vec<EntropyGibbsRow>,
    pub holds: bool,
    pub assumptions: Vec<String>,
}

/// Checks `(1/n)H_n(κ) ≥ a(1 − 2^{−nh})(h − log₂(a)/n) − tol`.
///
/// Requires `κ` to pass the Gibbs bound with constant `a`. Full support is
/// verified against `languages[n−1] = 𝓛_n` when given, and recorded as an
/// assumption otherwise. Unmet preconditions give [`Error::NotApplicable`].
pub fn entropy_gibbs_bound_check<P: Probability>(
    kappa: &MeasureSeries<P>,
    h: f64,
    a: f64,
    languages: Option<&[Language]>,
    tol: f64,
) -> Result<EntropyGibbsVerdict> {
    let gibbs = gibbs_lower_bound_check(kappa, h, a)?;
    if !gibbs.holds {
        let w = gibbs.worst();
        return Err(Error::NotApplicable(format!(
            "Gibbs bound fails for a = {a}: a* = {} at n = {} on {}",
            w.a_star, w.n, w.witness
        )));
    }
    let mut assumptions = vec![ERGODICITY_ASSUMPTION.to_string()];
    match languages {
        Some(langs) => {
            for d in kappa.iter() {
                let lang = langs.get(d.len() - 1).ok_or_else(|| {
                    Error::NotApplicable(format!("no language supplied for n = {}", d.len()))
                })?;
                if lang.word_len() != d.len() || !d.support_codes().eq(lang.codes().iter().copied()) {
                    return Err(Error::NotApplicable(format!(
                        "support of κ differs from the language at n = {}",
                        d.len()
                    )));
                }
            }
        }
        None => assumptions.push("full support of κ assumed".to_string()),
    }
    let mut rows = Vec::new();
    for d in kappa.iter() {
        let n = d.len() as f64;
        let entropy_rate = d.entropy()? / n;
        let bound = a * (1.0 - (-n * h).exp2()) * (h - a.log2() / n);
        rows.push(EntropyGibbsRow {
            n: d.len(),
            entropy_rate,
            bound,
            holds: entropy_rate >= bound - tol,
        });
    }
    let holds = rows.iter().all(|r| r.holds);
    Ok(EntropyGibbsVerdict { rows, holds, assumptions })
}

#[derive(Clone, Debug, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub words: u128,
    /// `log₂(ℓₙ)/n − h`, required `≥ 0`.
    pub lower_slack: f64,
    /// `log₂(1/a)/n − (log₂(ℓₙ)/n − h)`, required `≥ 0`.
    pub upper_slack: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateVerdict {
    pub rows: Vec<RateRow>,
    pub holds: bool,
}

/// Checks `0 ≤ log₂(ℓₙ)/n − h ≤ log₂(1/a)/n` for each `(n, ℓₙ)`.
pub fn rate_of_convergence_check(ell: &[(usize, u128)], h: f64, a: f64, tol: f64) -> Result<RateVerdict> {
    check_a_h(a, h)?;
    if a > 1.0 {
        return invalid(format!("a = {a} must lie in (0, 1]"));
    }
    let mut rows = Vec::with_capacity(ell.len());
    for &(n, words) in ell {
        if n == 0 || words == 0 {
            return invalid(format!("need n ≥ 1 and a non-empty language, got ({n}, {words})"));
        }
        let excess = (words as f64).log2() / n as f64 - h;
        let upper_slack = -a.log2() / n as f64 - excess;
        rows.push(RateRow {
            n,
            words,
            lower_slack: excess,
            upper_slack,
            holds: excess >= -tol && upper_slack >= -tol,
        });
    }
    let holds = rows.iter().all(|r| r.holds);
    Ok(RateVerdict { rows, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{convolve_half, BlockDistribution, Provenance};
    use crate::spectral::{max_mean_cycle, topological_entropy_exact};
    use crate::subshifts::{LabeledGraph, SubshiftSpec};
    use crate::words::block;
    use std::collections::BTreeMap;

    fn rat(p: u64, q: u64) -> BigRational {
        <BigRational as Probability>::ratio(p, q)
    }

    /// Measure of maximal entropy of the golden mean shift, built from its
    /// Markov chain: stationary (φ²/(1+φ²), 1/(1+φ²)), 0→0 w.p. 1/φ.
    fn golden_parry(n_max: usize) -> MeasureSeries<f64> {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let pi0 = phi * phi / (1.0 + phi * phi);
        let step = |from: u64, to: u64| match (from, to) {
            (0, 0) => 1.0 / phi,
            (0, 1) => 1.0 / (phi * phi),
            (1, 0) => 1.0,
            _ => 0.0,
        };
        let dists = (1..=n_max)
            .map(|n| {
                let mut probs = BTreeMap::new();
                for code in 0..1u64 << n {
                    let b = Block::from_code(code, n);
                    let mut p = if b.get(0) == 0 { pi0 } else { 1.0 - pi0 };
                    for i in 1..n {
                        p *= step(u64::from(b.get(i - 1)), u64::from(b.get(i)));
                    }
                    if p > 0.0 {
                        probs.insert(code, p);
                    }
                }
                BlockDistribution::new(n, probs, Provenance::Explicit).unwrap()
            })
            .collect();
        MeasureSeries::new(dists).unwrap()
    }

    #[test]
    fn ratio_series_examples() {
        let nu = MeasureSeries::periodic(&block("01"), 12).unwrap();
        let r = gibbs_ratio_series(&nu, 0.5).unwrap();
        for e in &r.entries {
            let expected = 0.5 * (e.n as f64 / 2.0 - e.n.div_ceil(2) as f64).exp2();
            assert!((e.ratio - expected).abs() < 1e-15, "n={}", e.n);
            assert!(e.ratio >= 0.25 && e.certified_bound);
        }
        assert!(matches!(r.trend, GibbsTrend::Bounded { .. }));
        assert!(r.verdict_line().starts_with("Gibbs evidence: holds"));

        let zeros = MeasureSeries::periodic(&block("0"), 6).unwrap();
        let r = gibbs_ratio_series(&zeros, 0.0).unwrap();
        assert!(r.entries.iter().all(|e| e.ratio == 1.0));
    }

    #[test]
    fn ratio_matches_convolution() {
        for pattern in ["01", "011", "0011", "00101", "0110111"] {
            let nu = MeasureSeries::periodic(&block(pattern), 10).unwrap();
            let kappa = nu.convolution();
            let h = 0.37;
            let r = gibbs_ratio_series(&nu, h).unwrap();
            for e in &r.entries {
                let k = Probability::to_f64(&kappa.get(e.n).unwrap().prob(&e.witness).unwrap());
                assert!((e.ratio - k * (e.n as f64 * h).exp2()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sturmian_ratio_decays() {
        use crate::generators::{sturmian_point, Alpha, SturmianSpec};
        let s = SturmianSpec::new(Alpha::InverseGolden, 0.0, 200_000).unwrap();
        let nu = MeasureSeries::empirical(&sturmian_point(&s), 20).unwrap();
        let h = Alpha::InverseGolden.value();
        let r = gibbs_ratio_series(&nu, h).unwrap();
        assert!(r.all_certified());
        for e in &r.entries {
            assert!(e.ratio <= e.nu * (1.0 + 1e-12));
        }
        assert!(r.get(20).unwrap().ratio < r.get(5).unwrap().ratio);
    }

    #[test]
    fn lower_bound_examples() {
        let b = MeasureSeries::bernoulli_half(8).unwrap();
        let v = gibbs_lower_bound_check(&b, 1.0, 1.0).unwrap();
        assert!(v.holds);
        assert!((v.a_star() - 1.0).abs() < 1e-12);
        let v = gibbs_lower_bound_check_exact(&b, Ratio::from_integer(1), &rat(1, 1)).unwrap();
        assert!(v.holds);
        assert!(!gibbs_lower_bound_check(&b, 1.0, 1.01).unwrap().holds);
        assert!(gibbs_lower_bound_check(&b, 1.0, 0.0).is_err());
    }

    #[test]
    fn periodic_gibbs_constant() {
        // For an orbit of period k with density d, every positive κ(C) has
        // κ(C)·2^{nd} ≥ (1/k)·2^{nd − #₁B} for the block B above C, and the
        // ones-maximal B attains the minimum excess.
        for pattern in ["01", "011", "0011"] {
            let p = block(pattern);
            let k = p.len() as u64;
            let d = Ratio::new(p.ones_count() as i64, k as i64);
            let kappa = MeasureSeries::periodic(&p, 12).unwrap().convolution();
            for n in 1..=12usize {
                let max_ones = (0..p.len())
                    .map(|s| (0..n).filter(|&j| p.get((s + j) % p.len()) == 1).count())
                    .max()
                    .unwrap();
                let excess = max_ones as f64 - n as f64 * *d.numer() as f64 / *d.denom() as f64;
                let dist = kappa.get(n).unwrap();
                let (_, m) = min_positive(dist).unwrap();
                let a_star = Probability::to_f64(&m) * (n as f64 * *d.numer() as f64 / *d.denom() as f64).exp2();
                assert!(a_star >= (1.0 / k as f64) * (-excess).exp2() * (1.0 - 1e-12), "{pattern} n={n}");
            }
            // Exactly 1/k is met whenever k divides n.
            let v = gibbs_lower_bound_check_exact(&kappa, d, &rat(1, k)).unwrap();
            for row in &v.rows {
                if row.n % p.len() == 0 {
                    assert!(row.holds, "{pattern} n={}", row.n);
                }
            }
        }
    }

    #[test]
    fn exact_check_decides_irrational_powers() {
        // κ = 1/4 at n = 1 with h = 1/2: κ·√2 ≈ 0.354.
        let nu = BlockDistribution::new(1, [(1u64, rat(1, 2)), (0, rat(1, 2))].into_iter().collect(), Provenance::Explicit)
            .unwrap();
        let kappa = MeasureSeries::new(vec![convolve_half(&nu)]).unwrap();
        let half = Ratio::new(1, 2);
        assert!(gibbs_lower_bound_check_exact(&kappa, half, &rat(35, 100)).unwrap().holds);
        assert!(!gibbs_lower_bound_check_exact(&kappa, half, &rat(36, 100)).unwrap().holds);
    }

    #[test]
    fn entropy_bound_examples() {
        let b = MeasureSeries::bernoulli_half(10).unwrap();
        let langs: Vec<Language> = (1..=10).map(|n| SubshiftSpec::Full.language(n, 24).unwrap()).collect();
        let v = entropy_gibbs_bound_check(&b, 1.0, 1.0, Some(&langs), 1e-12).unwrap();
        assert!(v.holds);
        for r in &v.rows {
            assert!((r.bound - (1.0 - (-(r.n as f64)).exp2())).abs() < 1e-12);
        }

        let closure = LabeledGraph::cycle(&block("01")).hereditary_closure();
        let langs: Vec<Language> = (1..=12).map(|n| closure.language(n).unwrap()).collect();
        let kappa = MeasureSeries::periodic(&block("01"), 12).unwrap().convolution();
        let v = entropy_gibbs_bound_check(&kappa, 0.5, 0.25, Some(&langs), 1e-12).unwrap();
        assert!(v.holds);

        let zeros = MeasureSeries::periodic(&block("0"), 6).unwrap().convolution();
        let v = entropy_gibbs_bound_check(&zeros, 0.0, 1.0, None, 1e-12).unwrap();
        assert!(v.holds && v.rows.iter().all(|r| r.bound == 0.0 && r.entropy_rate == 0.0));
        assert!(v.assumptions.iter().any(|a| a.contains("full support")));

        let err = entropy_gibbs_bound_check(&kappa, 0.5, 0.9, None, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotApplicable(_)));
        let short: Vec<Language> = (1..=12).map(|n| SubshiftSpec::Full.language(n, 24).unwrap()).collect();
        assert!(matches!(
            entropy_gibbs_bound_check(&kappa, 0.5, 0.25, Some(&short), 1e-12),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn rate_examples() {
        let full: Vec<(usize, u128)> = (1..=12).map(|n| (n, 1u128 << n)).collect();
        let v = rate_of_convergence_check(&full, 1.0, 1.0, 1e-12).unwrap();
        assert!(v.holds);
        assert!(v.rows.iter().all(|r| r.lower_slack.abs() < 1e-12 && r.upper_slack.abs() < 1e-12));

        let closure = LabeledGraph::cycle(&block("01")).hereditary_closure();
        let ell: Vec<(usize, u128)> = (1..=12).map(|n| (n, closure.language_size(n).unwrap())).collect();
        for &(n, l) in &ell {
            assert_eq!(l, (1u128 << n.div_ceil(2)) + (1u128 << (n / 2)) - 1);
        }
        let v = rate_of_convergence_check(&ell, 0.5, 0.25, 1e-12).unwrap();
        assert!(v.holds);
        assert!(v.rows.iter().all(|r| 2.0 / r.n as f64 - r.upper_slack >= 0.0));
    }

    #[test]
    fn golden_mean_rate_negative_control() {
        let g = SubshiftSpec::sft(["11"]).unwrap();
        let graph = g.presentation().unwrap().unwrap();
        let h = topological_entropy_exact(&graph, 1e-14).unwrap();
        assert_eq!(max_mean_cycle(&graph).unwrap(), Ratio::new(1, 2));
        let parry = golden_parry(12);
        let gibbs = gibbs_lower_bound_check(&parry, h, 0.1).unwrap();
        let a_star = gibbs.a_star();
        assert!(gibbs.holds && a_star > 0.1);
        let ell: Vec<(usize, u128)> = (1..=12).map(|n| (n, g.language_size(n, 24).unwrap())).collect();
        assert!(rate_of_convergence_check(&ell, h, 0.9 * a_star, 1e-12).unwrap().holds);
        assert!(!rate_of_convergence_check(&ell, h, 1.0, 1e-12).unwrap().holds);
    }

    #[test]
    fn report_csv_layout() {
        let nu = MeasureSeries::periodic(&block("01"), 2).unwrap();
        let csv = gibbs_ratio_series(&nu, 0.5).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# h = 0.5");
        assert!(lines[1].starts_with("# assumption: source measure assumed ergodic"));
        assert_eq!(lines[3], "n,witness,ones,nu,kappa,ratio,certified_bound");
        assert!(lines[4].starts_with("1,1,1,0.5,0.25,"));
    }
}
