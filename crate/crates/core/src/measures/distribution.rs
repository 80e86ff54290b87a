use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use num_rational::BigRational;
use serde::Serialize;

use super::Probability;
use crate::error::{invalid, Error, Result};
use crate::spectral::shannon_entropy;
use crate::subshifts::factor_codes;
use crate::words::{Block, MAX_CODE_LEN};

/// Where a distribution came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Sliding-window frequencies in a finite window of the given length.
    Empirical { window: usize },
    /// Uniform measure on the orbit of a periodic point.
    Periodic { orbit: Block },
    Explicit,
}

impl Provenance {
    pub fn is_exact(&self) -> bool {
        !matches!(self, Provenance::Empirical { .. })
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Empirical { window } => write!(f, "empirical({window})"),
            Provenance::Periodic { orbit } => write!(f, "periodic({orbit})"),
            Provenance::Explicit => f.write_str("explicit"),
        }
    }
}

/// A probability vector on the blocks of one length.
///
/// Blocks are stored by code, so iteration is in lexicographic order.
/// Blocks absent from the map have probability zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDistribution<P = f64> {
    len: usize,
    probs: BTreeMap<u64, P>,
    provenance: Provenance,
}

impl<P: Probability> BlockDistribution<P> {
    pub fn new(len: usize, probs: BTreeMap<u64, P>, provenance: Provenance) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyBlock);
        }
        if len > MAX_CODE_LEN {
            return Err(Error::TooLong(len));
        }
        if let Some(code) = probs.keys().find(|&&c| c >> len != 0) {
            return invalid(format!("code {code} does not fit length {len}"));
        }
        if let Some((code, p)) = probs.iter().find(|(_, p)| p.is_negative()) {
            return invalid(format!(
                "negative probability {p:?} on {}",
                Block::from_code(*code, len)
            ));
        }
        let total = probs.values().fold(P::zero(), |acc, p| acc.add(p));
        if !total.is_unit_mass() {
            return invalid(format!("total mass {} is not 1", total.to_f64()));
        }
        Ok(BlockDistribution { len, probs, provenance })
    }

    /// From explicit `(block, probability)` pairs; repeated blocks add up.
    pub fn from_blocks(pairs: impl IntoIterator<Item = (Block, P)>) -> Result<Self> {
        let mut len = None;
        let mut probs: BTreeMap<u64, P> = BTreeMap::new();
        for (b, p) in pairs {
            match len {
                None => len = Some(b.len()),
                Some(l) if l != b.len() => {
                    return Err(Error::LengthMismatch { left: l, right: b.len() })
                }
                _ => {}
            }
            let entry = probs.entry(b.code_or_err()?).or_insert_with(P::zero);
            *entry = entry.add(&p);
        }
        let len = len.ok_or_else(|| Error::InvalidInput("no blocks given".into()))?;
        Self::new(len, probs, Provenance::Explicit)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `ν(C)`; zero outside the stored blocks.
    pub fn prob(&self, c: &Block) -> Result<P> {
        if c.len() != self.len {
            return Err(Error::LengthMismatch { left: c.len(), right: self.len });
        }
        Ok(self.prob_of_code(c.code_or_err()?))
    }

    pub fn prob_of_code(&self, code: u64) -> P {
        self.probs.get(&code).cloned().unwrap_or_else(P::zero)
    }

    /// Stored entries, including any explicit zeros.
    pub fn entries(&self) -> impl Iterator<Item = (u64, &P)> + '_ {
        self.probs.iter().map(|(c, p)| (*c, p))
    }

    /// Blocks of positive probability with their mass, lexicographically.
    pub fn support(&self) -> impl Iterator<Item = (Block, &P)> + '_ {
        self.probs
            .iter()
            .filter(|(_, p)| p.is_positive())
            .map(|(c, p)| (Block::from_code(*c, self.len), p))
    }

    pub fn support_codes(&self) -> impl Iterator<Item = u64> + '_ {
        self.probs.iter().filter(|(_, p)| p.is_positive()).map(|(c, _)| *c)
    }

    pub fn support_size(&self) -> usize {
        self.support_codes().count()
    }

    pub fn max_probability(&self) -> P {
        self.probs
            .values()
            .fold(P::zero(), |m, p| if *p > m { p.clone() } else { m })
    }

    /// Shannon entropy `−Σ ν(W) log₂ ν(W)` of this partition.
    pub fn entropy(&self) -> Result<f64> {
        let p: Vec<f64> = self.probs.values().map(P::to_f64).collect();
        shannon_entropy(&p)
    }

    /// Distribution of the first `len − 1` symbols.
    pub fn prefix_marginal(&self) -> Result<Self> {
        self.marginal(|code| code >> 1)
    }

    /// Distribution of the last `len − 1` symbols.
    pub fn suffix_marginal(&self) -> Result<Self> {
        let mask = (1u64 << (self.len - 1)) - 1;
        self.marginal(|code| code & mask)
    }

    fn marginal(&self, project: impl Fn(u64) -> u64) -> Result<Self> {
        if self.len < 2 {
            return invalid("marginal of a length-1 distribution");
        }
        let mut probs: BTreeMap<u64, P> = BTreeMap::new();
        for (&code, p) in &self.probs {
            let entry = probs.entry(project(code)).or_insert_with(P::zero);
            *entry = entry.add(p);
        }
        Ok(BlockDistribution {
            len: self.len - 1,
            probs,
            provenance: self.provenance.clone(),
        })
    }

    pub fn to_f64(&self) -> BlockDistribution<f64> {
        BlockDistribution {
            len: self.len,
            probs: self.probs.iter().map(|(c, p)| (*c, p.to_f64())).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// CSV with header `length,block,probability,provenance`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,block,probability,provenance\n");
        self.write_csv_rows(&mut out);
        out
    }

    pub fn write_csv_rows(&self, out: &mut String) {
        for (b, p) in self.support() {
            writeln!(out, "{},{},{},{}", self.len, b, p.to_f64(), self.provenance)
                .expect("write to string");
        }
    }
}

/// Sliding-window frequencies of the length-`n` factors of `x`.
pub fn empirical_measure(x: &Block, n: usize) -> Result<BlockDistribution<f64>> {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for code in factor_codes(x, n)? {
        *counts.entry(code).or_default() += 1;
    }
    let total = (x.len() - n + 1) as u64;
    let probs = counts.into_iter().map(|(c, k)| (c, f64::ratio(k, total))).collect();
    BlockDistribution::new(n, probs, Provenance::Empirical { window: x.len() })
}

/// Exact orbit measure `(1/k) Σ δ_{Sⁱx}` of the periodic point `pattern^∞`.
pub fn periodic_measure(pattern: &Block, n: usize) -> Result<BlockDistribution<BigRational>> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if n > MAX_CODE_LEN {
        return Err(Error::TooLong(n));
    }
    let k = pattern.len();
    let mut probs: BTreeMap<u64, BigRational> = BTreeMap::new();
    let weight = <BigRational as Probability>::ratio(1, k as u64);
    for start in 0..k {
        let code = (0..n).fold(0u64, |acc, j| (acc << 1) | u64::from(pattern.get((start + j) % k)));
        let entry = probs.entry(code).or_insert_with(<BigRational as Probability>::zero);
        *entry = Probability::add(entry, &weight);
    }
    BlockDistribution::new(
        n,
        probs,
        Provenance::Periodic { orbit: pattern.clone() },
    )
}

/// `κ(C) = Σ_{C′ ≥ C} ν(C′)·2^{−#₁C′}`, pushing each support block's mass
/// onto its `2^{#₁C′}` submasks.
pub fn convolve_half<P: Probability>(nu: &BlockDistribution<P>) -> BlockDistribution<P> {
    let mut acc: HashMap<u64, P> = HashMap::new();
    for (code, p) in nu.probs.iter().filter(|(_, p)| p.is_positive()) {
        let share = p.halve(code.count_ones());
        let mut sub = *code;
        loop {
            let entry = acc.entry(sub).or_insert_with(P::zero);
            *entry = entry.add(&share);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & code;
        }
    }
    BlockDistribution {
        len: nu.len,
        probs: acc.into_iter().collect(),
        provenance: Provenance::Explicit,
    }
}

/// Positive-mass block with the most ones; ties go to the lexicographically
/// smallest.
pub fn ones_maximal_block<P: Probability>(nu: &BlockDistribution<P>) -> Result<Block> {
    let mut best: Option<u64> = None;
    for code in nu.support_codes() {
        if best.is_none_or(|b| code.count_ones() > b.count_ones()) {
            best = Some(code);
        }
    }
    best.map(|c| Block::from_code(c, nu.len))
        .ok_or_else(|| Error::EmptySubshift("distribution has empty support".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaVerdict {
    pub holds: bool,
    pub checked: usize,
    pub max_error: f64,
    pub worst: Option<Block>,
}

/// Checks `κ(C) = ν(C)·2^{−#₁C}` on every ones-maximal block and every
/// coordinatewise-maximal block of the support of `nu`.
pub fn maximal_block_formula_check<P: Probability>(
    nu: &BlockDistribution<P>,
    kappa: &BlockDistribution<P>,
    tol: f64,
) -> Result<FormulaVerdict> {
    if nu.len != kappa.len {
        return Err(Error::LengthMismatch { left: nu.len, right: kappa.len });
    }
    let support: Vec<u64> = nu.support_codes().collect();
    let top = support.iter().map(|c| c.count_ones()).max().unwrap_or(0);
    let maximal = |c: u64| !support.iter().any(|&d| d != c && d & c == c);
    let mut verdict = FormulaVerdict { holds: true, checked: 0, max_error: 0.0, worst: None };
    for &c in support.iter().filter(|&&c| c.count_ones() == top || maximal(c)) {
        let expected = nu.prob_of_code(c).halve(c.count_ones());
        let got = kappa.prob_of_code(c);
        let err = (expected.to_f64() - got.to_f64()).abs();
        verdict.checked += 1;
        if err > verdict.max_error {
            verdict.max_error = err;
            verdict.worst = Some(Block::from_code(c, nu.len));
        }
        if err > tol || (tol == 0.0 && expected != got) {
            verdict.holds = false;
        }
    }
    Ok(verdict)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityVerdict {
    pub holds: bool,
    pub pairs_checked: u64,
    pub violations: u64,
    /// `(W₁, W₂)` with `W₁ ≤ W₂` and the largest excess `κ(W₂) − κ(W₁)`.
    pub worst: Option<(Block, Block)>,
}

/// Checks `κ(W₁) ≥ κ(W₂) − tol` whenever `W₁ ≤ W₂` coordinatewise.
///
/// Pairs with `κ(W₂) = 0` hold trivially, so only submasks of stored blocks
/// are scanned.
pub fn monotonicity_check<P: Probability>(kappa: &BlockDistribution<P>, tol: f64) -> MonotonicityVerdict {
    let mut v = MonotonicityVerdict { holds: true, pairs_checked: 0, violations: 0, worst: None };
    let mut worst_excess = 0.0;
    for (&upper, p_upper) in kappa.probs.iter().filter(|(_, p)| p.is_positive()) {
        let hi = p_upper.to_f64();
        let mut sub = upper;
        loop {
            v.pairs_checked += 1;
            let excess = hi - kappa.prob_of_code(sub).to_f64();
            if excess > tol {
                v.holds = false;
                v.violations += 1;
                if excess > worst_excess {
                    worst_excess = excess;
                    v.worst = Some((Block::from_code(sub, kappa.len), Block::from_code(upper, kappa.len)));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & upper;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{eta, BFreeSpec};
    use crate::words::{all_words, block};
    use proptest::prelude::*;

    fn rat(p: u64, q: u64) -> BigRational {
        <BigRational as Probability>::ratio(p, q)
    }

    fn explicit(pairs: &[(&str, f64)]) -> BlockDistribution<f64> {
        BlockDistribution::from_blocks(pairs.iter().map(|(b, p)| (block(b), *p))).unwrap()
    }

    /// Oracle: every pair `(C′, D)` with `C′` in the support and `D` any block
    /// sends `ν(C′)·2^{−n}` to the coordinatewise product.
    fn push_forward(nu: &BlockDistribution<f64>) -> BTreeMap<u64, f64> {
        let n = nu.len();
        let mut out = BTreeMap::new();
        for (c, p) in nu.support() {
            for d in all_words(n).unwrap() {
                let prod = c.and(&d).unwrap().code().unwrap();
                *out.entry(prod).or_insert(0.0) += p * 2f64.powi(-(n as i32));
            }
        }
        out
    }

    #[test]
    fn empirical_examples() {
        let d = empirical_measure(&block("101010"), 1).unwrap();
        assert_eq!(d.prob(&block("1")).unwrap(), 0.5);
        assert_eq!(d.prob(&block("0")).unwrap(), 0.5);
        let d = empirical_measure(&block("111111"), 3).unwrap();
        assert_eq!(d.prob(&block("111")).unwrap(), 1.0);
        assert_eq!(d.support_size(), 1);
        let x = eta(&BFreeSpec::new(&[2], 10_000).unwrap());
        let d = empirical_measure(&x, 2).unwrap();
        assert!((d.prob(&block("10")).unwrap() - 0.5).abs() < 1e-3);
        assert!((d.prob(&block("01")).unwrap() - 0.5).abs() < 1e-3);
        assert!(empirical_measure(&block("10"), 3).is_err());
        assert_eq!(d.provenance().to_string(), "empirical(10000)");
    }

    #[test]
    fn periodic_examples() {
        let d = periodic_measure(&block("01"), 2).unwrap();
        assert_eq!(d.prob(&block("01")).unwrap(), rat(1, 2));
        assert_eq!(d.prob(&block("10")).unwrap(), rat(1, 2));
        let d = periodic_measure(&block("0"), 3).unwrap();
        assert_eq!(d.prob(&block("000")).unwrap(), rat(1, 1));
        let d = periodic_measure(&block("011"), 3).unwrap();
        for w in ["011", "110", "101"] {
            assert_eq!(d.prob(&block(w)).unwrap(), rat(1, 3));
        }
        // Windows longer than the period wrap around.
        let d = periodic_measure(&block("01"), 5).unwrap();
        assert_eq!(d.prob(&block("01010")).unwrap(), rat(1, 2));
    }

    #[test]
    fn validation() {
        assert!(BlockDistribution::from_blocks([(block("0"), 0.5)]).is_err());
        assert!(BlockDistribution::from_blocks([(block("0"), 1.5), (block("1"), -0.5)]).is_err());
        assert!(BlockDistribution::from_blocks([(block("0"), 0.5), (block("11"), 0.5)]).is_err());
        let mut m = BTreeMap::new();
        m.insert(4u64, 1.0);
        assert!(BlockDistribution::new(2, m, Provenance::Explicit).is_err());
    }

    #[test]
    fn convolution_examples() {
        for n in 1..=6 {
            let ones = explicit(&[(&"1".repeat(n), 1.0)]);
            let k = convolve_half(&ones);
            assert_eq!(k.support_size(), 1 << n);
            assert!(k.support().all(|(_, p)| *p == 2f64.powi(-(n as i32))));
            let zeros = explicit(&[(&"0".repeat(n), 1.0)]);
            let k = convolve_half(&zeros);
            assert_eq!(k.support_size(), 1);
            assert_eq!(k.prob(&Block::zeros(n)).unwrap(), 1.0);
        }
        let k = convolve_half(&periodic_measure(&block("01"), 2).unwrap());
        assert_eq!(k.prob(&block("00")).unwrap(), rat(1, 2));
        assert_eq!(k.prob(&block("01")).unwrap(), rat(1, 4));
        assert_eq!(k.prob(&block("10")).unwrap(), rat(1, 4));
        assert_eq!(k.prob(&block("11")).unwrap(), rat(0, 1));
    }

    #[test]
    fn convolution_matches_push_forward_exhaustively_on_small_supports() {
        // Every non-empty support at n = 3 with uniform weights.
        for mask in 1u32..256 {
            let codes: Vec<u64> = (0..8).filter(|c| mask >> c & 1 == 1).collect();
            let w = 1.0 / codes.len() as f64;
            let nu = BlockDistribution::new(3, codes.iter().map(|&c| (c, w)).collect(), Provenance::Explicit)
                .unwrap();
            let k = convolve_half(&nu);
            let oracle = push_forward(&nu);
            for code in 0..8u64 {
                let want = oracle.get(&code).copied().unwrap_or(0.0);
                assert!((k.prob_of_code(code) - want).abs() < 1e-15, "mask {mask:b} code {code}");
            }
        }
    }

    #[test]
    fn ones_maximal_examples() {
        let d = explicit(&[("00", 0.5), ("01", 0.25), ("10", 0.25)]);
        assert_eq!(ones_maximal_block(&d).unwrap(), block("01"));
        assert_eq!(ones_maximal_block(&explicit(&[("11", 1.0)])).unwrap(), block("11"));
        let p = periodic_measure(&block("011"), 3).unwrap();
        assert_eq!(ones_maximal_block(&p).unwrap(), block("011"));
        let with_zero = BlockDistribution::new(
            2,
            [(3u64, 0.0), (1, 1.0)].into_iter().collect(),
            Provenance::Explicit,
        )
        .unwrap();
        assert_eq!(ones_maximal_block(&with_zero).unwrap(), block("01"));
    }

    #[test]
    fn formula_examples() {
        let nu = explicit(&[("11", 1.0)]);
        let k = convolve_half(&nu);
        assert_eq!(k.prob(&block("11")).unwrap(), 0.25);
        assert!(maximal_block_formula_check(&nu, &k, 1e-12).unwrap().holds);

        let nu = periodic_measure(&block("011"), 3).unwrap();
        let k = convolve_half(&nu);
        assert_eq!(k.prob(&block("011")).unwrap(), rat(1, 12));
        let v = maximal_block_formula_check(&nu, &k, 0.0).unwrap();
        assert!(v.holds && v.checked == 3);

        let nu = explicit(&[("0000", 1.0)]);
        let k = convolve_half(&nu);
        assert_eq!(k.prob(&block("0000")).unwrap(), 1.0);
        assert!(maximal_block_formula_check(&nu, &k, 1e-12).unwrap().holds);

        // Non-maximal blocks pick up mass from above.
        let nu = explicit(&[("10", 0.5), ("11", 0.5)]);
        let k = convolve_half(&nu);
        assert_eq!(k.prob(&block("10")).unwrap(), 0.25 + 0.125);
        assert!(maximal_block_formula_check(&nu, &k, 1e-12).unwrap().holds);
        assert!(!maximal_block_formula_check(&nu, &nu, 1e-12).unwrap().holds);
    }

    #[test]
    fn monotonicity_examples() {
        let bad = explicit(&[("00", 0.0), ("11", 1.0)]);
        let v = monotonicity_check(&bad, 1e-12);
        assert!(!v.holds);
        assert_eq!(v.violations, 3);
        assert_eq!(v.worst.unwrap().1, block("11"));
        let k = convolve_half(&periodic_measure(&block("0011"), 4).unwrap());
        let v = monotonicity_check(&k, 0.0);
        assert!(v.holds);
        assert_eq!(k.max_probability(), k.prob(&Block::zeros(4)).unwrap());
    }

    #[test]
    fn marginals_of_periodic_are_exact() {
        let p5 = periodic_measure(&block("00101"), 5).unwrap();
        let p4 = periodic_measure(&block("00101"), 4).unwrap();
        assert_eq!(p5.prefix_marginal().unwrap().probs, p4.probs);
        assert_eq!(p5.suffix_marginal().unwrap().probs, p4.probs);
    }

    #[test]
    fn csv_dump() {
        let d = periodic_measure(&block("01"), 2).unwrap();
        assert_eq!(
            d.to_csv(),
            "length,block,probability,provenance\n2,01,0.5,periodic(01)\n2,10,0.5,periodic(01)\n"
        );
    }

    proptest! {
        #[test]
        fn convolution_is_monotone_with_unit_mass(
            n in 1usize..=8,
            weights in prop::collection::vec((0u64..256, 1u32..10), 1..12),
        ) {
            let total: u32 = weights.iter().map(|w| w.1).sum();
            let pairs = weights.iter().map(|&(c, w)| {
                (Block::from_code(c & ((1 << n) - 1), n), f64::from(w) / f64::from(total))
            });
            let nu = BlockDistribution::from_blocks(pairs).unwrap();
            let k = convolve_half(&nu);
            let mass: f64 = k.entries().map(|(_, p)| p).sum();
            prop_assert!((mass - 1.0).abs() < 1e-12);
            prop_assert!(monotonicity_check(&k, 1e-12).holds);
            prop_assert!(k.prob(&Block::zeros(n)).unwrap() >= 2f64.powi(-(n as i32)));
            let oracle = push_forward(&nu);
            for (code, want) in oracle {
                prop_assert!((k.prob_of_code(code) - want).abs() < 1e-12);
            }
        }
    }
}
