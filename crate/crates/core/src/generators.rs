//! Generic points of B-free and Sturmian systems, and number-theoretic
//! diagnostics for sets `𝓑 ⊂ ℕ∖{1}`.
//!
//! Densities here are logarithmic, `δ̂_N(A) = (1/ln N) Σ_{a ≤ N, a ∈ A} 1/a`,
//! with the natural logarithm in the normaliser so that the full set has
//! density close to one. Finite-window verdicts (taut, Behrend) are numeric
//! evidence only.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::words::Block;

/// Label attached to every finite-window verdict.
pub const EVIDENCE_LABEL: &str = "numeric evidence, not a proof";

pub const DEFAULT_TAUT_MARGIN: f64 = 0.01;
pub const DEFAULT_BEHREND_THRESHOLD: f64 = 0.05;

const SIEVE_LIMIT: u64 = 1 << 26;

/// Removes every element that is a multiple of another; sorts ascending.
pub fn primitivize(b: &[u64]) -> Result<Vec<u64>> {
    if let Some(&bad) = b.iter().find(|&&x| x <= 1) {
        return invalid(format!("element {bad} of B must be at least 2"));
    }
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: Vec<u64> = Vec::with_capacity(sorted.len());
    let max = sorted.last().copied().unwrap_or(0);
    if max <= SIEVE_LIMIT {
        let mut covered = vec![false; max as usize + 1];
        for x in sorted {
            if covered[x as usize] {
                continue;
            }
            out.push(x);
            for m in (x..=max).step_by(x as usize) {
                covered[m as usize] = true;
            }
        }
        return Ok(out);
    }
    for x in sorted {
        if !out.iter().any(|d| x % d == 0) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Primes `≤ cutoff` by the sieve of Eratosthenes.
pub fn primes_up_to(cutoff: u64) -> Vec<u64> {
    if cutoff < 2 {
        return Vec::new();
    }
    let n = cutoff as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Named families of `𝓑`. Every cutoff bounds the *values* in the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// All primes `≤ cutoff`.
    Primes { cutoff: u64 },
    /// `p²` for primes `p` with `p² ≤ cutoff`.
    PrimeSquares { cutoff: u64 },
    /// `2p` for odd primes `p` with `2p ≤ cutoff`.
    TwiceOddPrimes { cutoff: u64 },
    /// `{ak + r ≥ 2 : k ≥ 0, ak + r ≤ cutoff}`.
    Progression { a: u64, r: u64, cutoff: u64 },
}

impl Family {
    pub fn members(&self) -> Vec<u64> {
        match *self {
            Family::Primes { cutoff } => primes_up_to(cutoff),
            Family::PrimeSquares { cutoff } => primes_up_to(isqrt(cutoff))
                .into_iter()
                .map(|p| p * p)
                .collect(),
            Family::TwiceOddPrimes { cutoff } => primes_up_to(cutoff / 2)
                .into_iter()
                .filter(|&p| p > 2)
                .map(|p| 2 * p)
                .collect(),
            Family::Progression { a, r, cutoff } => (0..)
                .map(|k| a * k + r)
                .take_while(|&v| v <= cutoff)
                .filter(|&v| v >= 2)
                .collect(),
        }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad integer {t:?} in family {s:?}")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["primes", c] => Ok(Family::Primes { cutoff: parse(c)? }),
            ["prime-squares", c] => Ok(Family::PrimeSquares { cutoff: parse(c)? }),
            ["twice-odd-primes", c] => Ok(Family::TwiceOddPrimes { cutoff: parse(c)? }),
            ["progression", ar, c] => {
                let (a, r) = ar
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidInput(format!("expected a,r in {s:?}")))?;
                let (a, r) = (parse(a)?, parse(r)?);
                if a == 0 {
                    return invalid("progression step must be positive");
                }
                Ok(Family::Progression { a, r, cutoff: parse(c)? })
            }
            _ => invalid(format!(
                "unknown family {s:?}; expected primes:C, prime-squares:C, \
                 twice-odd-primes:C or progression:a,r:C"
            )),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Primes { cutoff } => write!(f, "primes:{cutoff}"),
            Family::PrimeSquares { cutoff } => write!(f, "prime-squares:{cutoff}"),
            Family::TwiceOddPrimes { cutoff } => write!(f, "twice-odd-primes:{cutoff}"),
            Family::Progression { a, r, cutoff } => write!(f, "progression:{a},{r}:{cutoff}"),
        }
    }
}

/// Parses `𝓑` given either as a comma separated list or a named family.
pub fn parse_b(s: &str) -> Result<Vec<u64>> {
    if s.contains(':') {
        return Ok(s.parse::<Family>()?.members());
    }
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad element {t:?} in B")))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum BRepr {
    List(Vec<u64>),
    Family(String),
}

#[derive(Serialize, Deserialize)]
pub(crate) struct BFreeRepr {
    pub(crate) b: BRepr,
    pub(crate) window: usize,
}

/// A primitive set `𝓑` together with an observation window `[1, N]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BFreeRepr", into = "BFreeRepr")]
pub struct BFreeSpec {
    b: Vec<u64>,
    window: usize,
    family: Option<Family>,
}

impl TryFrom<BFreeRepr> for BFreeSpec {
    type Error = Error;

    fn try_from(r: BFreeRepr) -> Result<Self> {
        match r.b {
            BRepr::List(b) => BFreeSpec::new(&b, r.window),
            BRepr::Family(f) => BFreeSpec::from_family(f.parse()?, r.window),
        }
    }
}

impl From<BFreeSpec> for BFreeRepr {
    fn from(s: BFreeSpec) -> Self {
        BFreeRepr {
            b: match s.family {
                Some(f) => BRepr::Family(f.to_string()),
                None => BRepr::List(s.b),
            },
            window: s.window,
        }
    }
}

impl BFreeSpec {
    /// Primitivizes `b`; requires `window ≥ max(b)`.
    pub fn new(b: &[u64], window: usize) -> Result<Self> {
        let b = primitivize(b)?;
        if b.is_empty() {
            return invalid("B must be non-empty");
        }
        let max = *b.last().expect("non-empty");
        if (window as u64) < max {
            return invalid(format!("window {window} is smaller than max(B) = {max}"));
        }
        Ok(BFreeSpec { b, window, family: None })
    }

    pub fn from_family(family: Family, window: usize) -> Result<Self> {
        let mut spec = BFreeSpec::new(&family.members(), window)?;
        spec.family = Some(family);
        Ok(spec)
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

/// Number of elements of `b` dividing each `i ∈ [0, n]`, saturated at 2,
/// together with the divisor when it is unique.
fn divisor_profile(b: &[u64], n: usize) -> (Vec<u8>, Vec<u32>) {
    let mut count = vec![0u8; n + 1];
    let mut which = vec![u32::MAX; n + 1];
    for (idx, &d) in b.iter().enumerate() {
        let d = d as usize;
        if d > n {
            continue;
        }
        let mut m = d;
        while m <= n {
            if count[m] < 2 {
                count[m] += 1;
            }
            which[m] = idx as u32;
            m += d;
        }
    }
    (count, which)
}

/// `𝓑`-free indicator: one bit for each position `i ∈ [1, N]`.
pub fn eta_bits(b: &[u64], n: usize) -> Vec<bool> {
    let mut free = vec![true; n + 1];
    for &d in b {
        let d = d as usize;
        let mut m = d;
        while m <= n {
            free[m] = false;
            m += d;
        }
    }
    free.split_off(1)
}

/// `η = 𝟙_{𝓕_𝓑}` on `[1, N]` as a block (position `i` is index `i − 1`).
pub fn eta(spec: &BFreeSpec) -> Block {
    Block::from_bools(eta_bits(&spec.b, spec.window)).expect("window is positive")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleVerdict {
    pub b: u64,
    pub residues_hit: usize,
    /// `None` when the window is shorter than `b`.
    pub admissible: Option<bool>,
}

/// For each `b`, whether the support of `x` (read at positions `1..=N`)
/// misses at least one residue class mod `b`.
pub fn admissible_check(x: &Block, b: &[u64]) -> Vec<AdmissibleVerdict> {
    let n = x.len();
    b.iter()
        .map(|&b| {
            let mut hit = vec![false; b as usize];
            for i in 0..n {
                if x.get(i) == 1 {
                    hit[((i as u64 + 1) % b) as usize] = true;
                }
            }
            let residues_hit = hit.iter().filter(|h| **h).count();
            let admissible = if residues_hit < b as usize {
                Some(true)
            } else if (n as u64) < b {
                None
            } else {
                Some(false)
            };
            AdmissibleVerdict { b, residues_hit, admissible }
        })
        .collect()
}

/// `(1/ln N) Σ_{a ≤ N, member(a)} 1/a`.
pub fn logarithmic_density(member: impl Fn(u64) -> bool, n: u64) -> f64 {
    assert!(n >= 2, "logarithmic density needs N ≥ 2");
    let sum: f64 = (1..=n).filter(|&a| member(a)).map(|a| 1.0 / a as f64).sum();
    sum / (n as f64).ln()
}

fn log_density_of_mask(mask: impl Iterator<Item = (usize, bool)>, n: usize) -> f64 {
    let sum: f64 = mask.filter(|(_, m)| *m).map(|(a, _)| 1.0 / a as f64).sum();
    sum / (n as f64).ln()
}

/// `δ̂_N(𝓕_𝓑)` and `δ̂_N(𝓜_𝓑)`.
pub fn bfree_log_densities(b: &[u64], n: usize) -> (f64, f64) {
    let free = eta_bits(b, n);
    let f = log_density_of_mask(free.iter().enumerate().map(|(i, &x)| (i + 1, x)), n);
    let m = log_density_of_mask(free.iter().enumerate().map(|(i, &x)| (i + 1, !x)), n);
    (f, m)
}

#[derive(Clone, Debug, Serialize)]
pub struct TautGap {
    pub b: u64,
    pub gap: f64,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TautReport {
    pub window: usize,
    pub margin: f64,
    pub gaps: Vec<TautGap>,
    pub taut: bool,
    pub label: &'static str,
}

/// Per-element gaps `δ̂(𝓜_𝓑) − δ̂(𝓜_{𝓑∖{b}})` at window `N`.
///
/// An integer leaves `𝓜` when `b` is removed exactly when `b` is its only
/// divisor in `𝓑`, so each gap is the reciprocal sum over those integers.
pub fn taut_check(b: &[u64], n: usize, margin: f64) -> Result<TautReport> {
    let b = primitivize(b)?;
    if n < 2 {
        return invalid("window must be at least 2");
    }
    let (count, which) = divisor_profile(&b, n);
    let mut sums = vec![0.0f64; b.len()];
    for a in 1..=n {
        if count[a] == 1 {
            sums[which[a] as usize] += 1.0 / a as f64;
        }
    }
    let ln_n = (n as f64).ln();
    let gaps: Vec<TautGap> = b
        .iter()
        .zip(sums)
        .map(|(&b, s)| {
            let gap = s / ln_n;
            TautGap { b, gap, passes: gap > margin }
        })
        .collect();
    let taut = gaps.iter().all(|g| g.passes);
    Ok(TautReport {
        window: n,
        margin,
        gaps,
        taut,
        label: EVIDENCE_LABEL,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BehrendReport {
    pub window: usize,
    pub threshold: f64,
    pub free_density: f64,
    pub behrend: bool,
    pub label: &'static str,
}

/// `δ̂_N(𝓕_𝓑)`, flagged Behrend when below `threshold`.
pub fn behrend_check(b: &[u64], n: usize, threshold: f64) -> Result<BehrendReport> {
    let b = primitivize(b)?;
    if n < 2 {
        return invalid("window must be at least 2");
    }
    let (free_density, _) = bfree_log_densities(&b, n);
    Ok(BehrendReport {
        window: n,
        threshold,
        free_density,
        behrend: free_density < threshold,
        label: EVIDENCE_LABEL,
    })
}

/// Denominators at or below this value are rejected as periodic.
pub const MIN_DENOMINATOR: u64 = 1000;

/// Rotation number of a Sturmian coding.
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    Rational { p: u64, q: u64 },
    Real(f64),
    /// `1/φ = (√5 − 1)/2`.
    InverseGolden,
    /// `1/φ² = (3 − √5)/2`.
    InverseGoldenSquared,
}

impl Alpha {
    pub fn value(&self) -> f64 {
        match *self {
            Alpha::Rational { p, q } => p as f64 / q as f64,
            Alpha::Real(x) => x,
            Alpha::InverseGolden => (5f64.sqrt() - 1.0) / 2.0,
            Alpha::InverseGoldenSquared => (3.0 - 5f64.sqrt()) / 2.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let v = self.value();
        if !(v > 0.0 && v < 1.0) {
            return invalid(format!("alpha = {v} must lie in (0, 1)"));
        }
        match *self {
            Alpha::Rational { p, q } => {
                let g = num_integer::gcd(p, q);
                if q / g <= MIN_DENOMINATOR {
                    return invalid(format!(
                        "alpha = {p}/{q} has reduced denominator {} ≤ {MIN_DENOMINATOR}; \
                         the coding would be periodic",
                        q / g
                    ));
                }
            }
            Alpha::Real(x) => {
                if let Some(q) = (1..=MIN_DENOMINATOR).find(|&q| {
                    let t = x * q as f64;
                    (t - t.round()).abs() < 1e-9
                }) {
                    return invalid(format!(
                        "alpha = {x} is a rational with denominator {q}; the coding would be periodic"
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "1/phi" => return Ok(Alpha::InverseGolden),
            "1/phi^2" => return Ok(Alpha::InverseGoldenSquared),
            _ => {}
        }
        if let Some((p, q)) = t.split_once('/') {
            let p = p.trim().parse().map_err(|_| Error::InvalidInput(format!("bad alpha {s:?}")))?;
            let q: u64 = q.trim().parse().map_err(|_| Error::InvalidInput(format!("bad alpha {s:?}")))?;
            if q == 0 {
                return invalid("alpha denominator is zero");
            }
            return Ok(Alpha::Rational { p, q });
        }
        t.parse::<f64>()
            .map(Alpha::Real)
            .map_err(|_| Error::InvalidInput(format!("bad alpha {s:?}")))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Rational { p, q } => write!(f, "{p}/{q}"),
            Alpha::Real(x) => write!(f, "{x}"),
            Alpha::InverseGolden => f.write_str("1/phi"),
            Alpha::InverseGoldenSquared => f.write_str("1/phi^2"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum AlphaRepr {
    Real(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
pub(crate) struct SturmianRepr {
    pub(crate) alpha: AlphaRepr,
    #[serde(default)]
    pub(crate) rho: f64,
    pub(crate) window: usize,
}

/// Rotation coding `x_n = ⌊(n+1)α + ρ⌋ − ⌊nα + ρ⌋` observed on `n ∈ [1, N]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SturmianRepr", into = "SturmianRepr")]
pub struct SturmianSpec {
    alpha: Alpha,
    rho: f64,
    window: usize,
}

impl TryFrom<SturmianRepr> for SturmianSpec {
    type Error = Error;

    fn try_from(r: SturmianRepr) -> Result<Self> {
        let alpha = match r.alpha {
            AlphaRepr::Real(x) => Alpha::Real(x),
            AlphaRepr::Text(s) => s.parse()?,
        };
        SturmianSpec::new(alpha, r.rho, r.window)
    }
}

impl From<SturmianSpec> for SturmianRepr {
    fn from(s: SturmianSpec) -> Self {
        SturmianRepr {
            alpha: match s.alpha {
                Alpha::Real(x) => AlphaRepr::Real(x),
                other => AlphaRepr::Text(other.to_string()),
            },
            rho: s.rho,
            window: s.window,
        }
    }
}

impl SturmianSpec {
    pub fn new(alpha: Alpha, rho: f64, window: usize) -> Result<Self> {
        alpha.validate()?;
        if !(0.0..1.0).contains(&rho) {
            return invalid(format!("rho = {rho} must lie in [0, 1)"));
        }
        if window == 0 {
            return invalid("window must be positive");
        }
        Ok(SturmianSpec { alpha, rho, window })
    }

    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

pub fn sturmian_point(spec: &SturmianSpec) -> Block {
    let rho = spec.rho;
    let bits: Vec<u8> = match spec.alpha {
        Alpha::Rational { p, q } => {
            // ⌊np/q + ρ⌋ = ⌊np/q⌋ + ⌊(np mod q)/q + ρ⌋, all in integers but the last term.
            let floor = |n: u64| -> u64 {
                let np = u128::from(n) * u128::from(p);
                let whole = (np / u128::from(q)) as u64;
                let frac = (np % u128::from(q)) as f64 / q as f64;
                whole + (frac + rho).floor() as u64
            };
            (1..=spec.window as u64)
                .map(|n| (floor(n + 1) - floor(n)) as u8)
                .collect()
        }
        _ => {
            let a = spec.alpha.value();
            let floor = |n: u64| (n as f64 * a + rho).floor() as i64;
            (1..=spec.window as u64)
                .map(|n| (floor(n + 1) - floor(n)) as u8)
                .collect()
        }
    };
    Block::from_bits(&bits).expect("rotation coding yields 0/1 symbols")
}
