//! The language oracle: certified factor sets of a subshift, and the
//! quantities derived from them (complexity, unique extensions, k_n,
//! doubling times, growth diagnostics).
//!
//! Certification discipline: every public accessor is clipped to
//! `stabilized_to`, the largest length for which the builder could
//! certify, per variant, that the cached sets equal the true factor
//! sets. Queries past that depth fail with the achieved depth instead
//! of returning guesses.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::subshift::{standard_word, SubshiftSpec, SubshiftVariant};
use crate::words::{Alphabet, Symbol, Word};

/// Guard for ceilings of transcendental expressions: nudge by 1e-12 so a
/// value that is an integer up to rounding noise does not jump up a step.
pub(crate) fn ceil_guard(x: f64) -> f64 {
    (x - 1e-12).ceil()
}

/// Comparison tolerance for real-valued bound checks.
pub(crate) const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Longest sample prefix the builder may generate.
    pub sample_cap: usize,
    /// The sample must exceed this multiple of the repetitivity estimate.
    pub stability_margin: usize,
    /// Rough budget for cached factor bytes (sum of n * P(n)).
    pub factor_budget: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { sample_cap: 1 << 20, stability_margin: 4, factor_budget: 256 << 20 }
    }
}

/// Certified factor sets of a subshift up to a depth.
#[derive(Debug, Clone)]
pub struct LanguageOracle {
    spec: SubshiftSpec,
    spec_hash: String,
    factors: Vec<BTreeSet<Word>>, // factors[i] = L_{i+1}
    stabilized_to: usize,
    target: usize,
    sample: Option<Word>,
    sample_len: usize,
    unstable: bool,
}

struct Level {
    set: BTreeSet<Word>,
    right_extendable: bool,
    left_extendable: bool,
    /// Max over factors of the largest gap between consecutive occurrence
    /// starts; `sample_len` when some factor occurs only once.
    max_gap: usize,
}

struct Extraction {
    levels: Vec<Level>,
}

/// Level-by-level factor extraction: positions of each length-n factor
/// are bucketed by the following symbol to produce length n+1. Linear in
/// sample length per level.
fn extract(sample: &Word, max_len: usize, budget: u64) -> Result<Extraction> {
    let s = sample.symbols();
    let len = s.len();
    let max_len = max_len.min(len);
    let mut levels = Vec::with_capacity(max_len);
    let mut current: BTreeMap<Word, Vec<u32>> = BTreeMap::new();
    for (i, &sym) in s.iter().enumerate() {
        current.entry(Word::single(sym)).or_default().push(i as u32);
    }
    let mut used: u64 = 0;
    for n in 1..=max_len {
        used += (n as u64) * (current.len() as u64);
        if used > budget {
            return Err(Error::FactorBudgetExceeded { budget, at_length: n });
        }
        let mut right_extendable = true;
        let mut left_extendable = true;
        let mut max_gap = 0usize;
        for ps in current.values() {
            if !ps.iter().any(|&p| (p as usize) + n < len) {
                right_extendable = false;
            }
            if !ps.iter().any(|&p| p > 0) {
                left_extendable = false;
            }
            if ps.len() == 1 {
                max_gap = max_gap.max(len);
            } else {
                for w in ps.windows(2) {
                    max_gap = max_gap.max((w[1] - w[0]) as usize);
                }
            }
        }
        let set: BTreeSet<Word> = current.keys().cloned().collect();
        levels.push(Level { set, right_extendable, left_extendable, max_gap });
        if n == max_len {
            break;
        }
        let mut next: BTreeMap<Word, Vec<u32>> = BTreeMap::new();
        for (w, ps) in current {
            for p in ps {
                let q = p as usize;
                if q + n < len {
                    next.entry(w.pushed(s[q + n])).or_default().push(p);
                }
            }
        }
        current = next;
    }
    Ok(Extraction { levels })
}

/// Depth up to which every shorter factor is extendable on both sides.
fn extendability_depth(levels: &[Level], target: usize) -> usize {
    let mut depth = target.min(levels.len());
    for (i, level) in levels.iter().enumerate() {
        let n = i + 1;
        if n >= depth {
            break;
        }
        if !level.right_extendable || !level.left_extendable {
            depth = n;
            break;
        }
    }
    depth
}

/// Deepest length at which all snapshots agree (contiguously from 1).
fn agreement_depth(snapshots: &[&Extraction], target: usize) -> usize {
    let min_levels = snapshots.iter().map(|e| e.levels.len()).min().unwrap_or(0);
    let mut depth = 0;
    for i in 0..min_levels.min(target) {
        let first = &snapshots[0].levels[i].set;
        if snapshots[1..].iter().all(|e| &e.levels[i].set == first) {
            depth = i + 1;
        } else {
            break;
        }
    }
    depth
}

pub fn build_oracle(spec: &SubshiftSpec, target_length: usize) -> Result<LanguageOracle> {
    build_oracle_with(spec, target_length, &BuildOptions::default())
}

pub fn build_oracle_with(
    spec: &SubshiftSpec,
    target_length: usize,
    opts: &BuildOptions,
) -> Result<LanguageOracle> {
    if target_length == 0 {
        return Err(Error::Precondition("target length must be at least 1".into()));
    }
    spec.validate()?;
    match &spec.variant {
        SubshiftVariant::Periodic { word } => build_periodic(spec, word, target_length, opts),
        SubshiftVariant::Explicit { sample, trust_depth } => {
            build_explicit(spec, sample, *trust_depth, target_length, opts)
        }
        SubshiftVariant::Substitution { rules } => {
            let rules = rules.clone();
            let start = choose_start_symbol(&rules);
            let grower = move |w: &Word| SubshiftSpec::apply_substitution(&rules, w);
            build_generated(spec, Word::single(start), grower, target_length, opts, false)
        }
        SubshiftVariant::Sturmian { coefficients } => {
            build_sturmian(spec, coefficients, target_length, opts)
        }
    }
}

/// Prefer a symbol whose image starts with itself, so iteration converges
/// to a genuine one-sided fixed point.
fn choose_start_symbol(rules: &[Word]) -> Symbol {
    for (i, image) in rules.iter().enumerate() {
        if image.len() >= 2 && image.at(0) == i as Symbol {
            return i as Symbol;
        }
    }
    0
}

fn build_periodic(
    spec: &SubshiftSpec,
    word: &Word,
    target: usize,
    opts: &BuildOptions,
) -> Result<LanguageOracle> {
    let p = word.len();
    let reps = (target + 2 * p).div_ceil(p) + 1;
    let mut sample = Word::empty();
    for _ in 0..reps {
        sample = sample.concat(word);
    }
    let extraction = extract(&sample, target, opts.factor_budget)?;
    // Factor sets of a periodic sequence are exact once the sample holds a
    // full period of windows; the construction above guarantees it.
    let stabilized_to = extendability_depth(&extraction.levels, target);
    let sample_len = sample.len();
    finish(spec, extraction, stabilized_to, target, Some(sample), sample_len)
}

fn build_explicit(
    spec: &SubshiftSpec,
    sample: &Word,
    trust_depth: usize,
    target: usize,
    opts: &BuildOptions,
) -> Result<LanguageOracle> {
    let depth_wanted = target.min(trust_depth);
    let extraction = extract(sample, depth_wanted, opts.factor_budget)?;
    let stabilized_to = extendability_depth(&extraction.levels, depth_wanted);
    finish(spec, extraction, stabilized_to, target, Some(sample.clone()), sample.len())
}

fn build_generated(
    spec: &SubshiftSpec,
    seed: Word,
    grow: impl Fn(&Word) -> Word,
    target: usize,
    opts: &BuildOptions,
    _seed_is_prefix: bool,
) -> Result<LanguageOracle> {
    let mut word = seed;
    let mut snapshots: Vec<(usize, Extraction)> = Vec::new();
    let mut last_snap_len = 0usize;
    loop {
        let grown = grow(&word);
        if grown.len() == word.len() {
            return Err(Error::InvalidSpec("generator does not grow the sample".into()));
        }
        word = grown;
        let capped = word.len() >= opts.sample_cap;
        if capped {
            word = word.prefix(opts.sample_cap);
        }
        let long_enough = word.len() >= target + 2;
        if long_enough && (word.len() >= 2 * last_snap_len.max(1) || capped) {
            let extraction = extract(&word, target, opts.factor_budget)?;
            last_snap_len = word.len();
            snapshots.push((word.len(), extraction));
            if let Some(depth) = certified_depth(&snapshots, target, opts) {
                if depth >= target || capped {
                    let extraction = snapshots.pop().unwrap().1;
                    let depth = depth.min(extendability_depth(&extraction.levels, target));
                    let sample_len = word.len();
                    return finish(spec, extraction, depth, target, Some(word), sample_len);
                }
            } else if capped {
                let extraction = snapshots.pop().unwrap().1;
                let sample_len = word.len();
                return finish(spec, extraction, 0, target, Some(word), sample_len);
            }
        }
        if capped && snapshots.is_empty() {
            // Sample cap below target: certify nothing.
            let extraction = extract(&word, target, opts.factor_budget)?;
            let sample_len = word.len();
            return finish(spec, extraction, 0, target, Some(word), sample_len);
        }
    }
}

/// Stability rule: the last three snapshots (each at least double the
/// previous sample length) must agree on the factor sets, and the sample
/// must exceed `stability_margin` times the repetitivity estimate
/// (max return gap plus word length) at the certified depth.
fn certified_depth(
    snapshots: &[(usize, Extraction)],
    target: usize,
    opts: &BuildOptions,
) -> Option<usize> {
    if snapshots.len() < 3 {
        return None;
    }
    let last3: Vec<&Extraction> = snapshots[snapshots.len() - 3..].iter().map(|(_, e)| e).collect();
    let agree = agreement_depth(&last3, target);
    if agree == 0 {
        return None;
    }
    let (sample_len, extraction) = &snapshots[snapshots.len() - 1];
    let mut depth = agree;
    while depth > 0 {
        let rep = extraction.levels[depth - 1].max_gap.saturating_add(depth);
        if *sample_len >= opts.stability_margin.saturating_mul(rep) {
            break;
        }
        depth -= 1;
    }
    if depth == 0 {
        None
    } else {
        Some(depth)
    }
}

fn build_sturmian(
    spec: &SubshiftSpec,
    coefficients: &[u32],
    target: usize,
    opts: &BuildOptions,
) -> Result<LanguageOracle> {
    let mut snapshots: Vec<(usize, Extraction)> = Vec::new();
    let mut last_snap_len = 0usize;
    let mut used = 1usize;
    let mut result: Option<LanguageOracle> = None;
    while used <= coefficients.len() {
        let word = standard_word(&coefficients[..used], opts.sample_cap);
        let exhausted = used == coefficients.len() || word.len() >= opts.sample_cap;
        if word.len() >= target + 2 && (word.len() >= 2 * last_snap_len.max(1) || exhausted) {
            let extraction = extract(&word, target, opts.factor_budget)?;
            last_snap_len = word.len();
            snapshots.push((word.len(), extraction));
            if let Some(depth) = certified_depth(&snapshots, target, opts) {
                if depth >= target || exhausted {
                    let extraction = snapshots.pop().unwrap().1;
                    let depth = depth.min(extendability_depth(&extraction.levels, target));
                    let sample_len = word.len();
                    result =
                        Some(finish(spec, extraction, depth, target, Some(word), sample_len)?);
                    break;
                }
            } else if exhausted {
                let extraction = snapshots.pop().unwrap().1;
                let sample_len = word.len();
                result = Some(finish(spec, extraction, 0, target, Some(word), sample_len)?);
                break;
            }
        }
        if exhausted && result.is_none() {
            let extraction = extract(&word, target, opts.factor_budget)?;
            let sample_len = word.len();
            result = Some(finish(spec, extraction, 0, target, Some(word), sample_len)?);
            break;
        }
        used += 1;
    }
    let oracle = result.expect("sturmian build always produces an oracle");
    // Independent cross-check of the Sturmian complexity law on every
    // certified length.
    for n in 1..=oracle.stabilized_to() {
        let p = oracle.complexity(n)?;
        if p != (n as u64) + 1 {
            return Err(Error::Certification(format!(
                "sturmian oracle has P({n}) = {p}, expected {}",
                n + 1
            )));
        }
    }
    Ok(oracle)
}

fn finish(
    spec: &SubshiftSpec,
    extraction: Extraction,
    stabilized_to: usize,
    target: usize,
    sample: Option<Word>,
    sample_len: usize,
) -> Result<LanguageOracle> {
    let factors: Vec<BTreeSet<Word>> = extraction.levels.into_iter().map(|l| l.set).collect();
    let oracle = LanguageOracle {
        spec: spec.clone(),
        spec_hash: spec.content_hash(),
        factors,
        stabilized_to,
        target,
        sample,
        sample_len,
        unstable: stabilized_to < target,
    };
    oracle.check_monotone()?;
    Ok(oracle)
}

impl LanguageOracle {
    /// Reassembles an oracle from cached factor sets. The cache is trusted
    /// to the recorded depth; basic shape checks still run.
    pub fn from_parts(
        spec: SubshiftSpec,
        factors: Vec<BTreeSet<Word>>,
        stabilized_to: usize,
        target: usize,
        sample_len: usize,
    ) -> Result<LanguageOracle> {
        if factors.len() < stabilized_to {
            return Err(Error::Certification(format!(
                "cache holds {} lengths but claims depth {}",
                factors.len(),
                stabilized_to
            )));
        }
        let oracle = LanguageOracle {
            spec_hash: spec.content_hash(),
            spec,
            factors,
            stabilized_to,
            target,
            sample: None,
            sample_len,
            unstable: stabilized_to < target,
        };
        oracle.check_monotone()?;
        Ok(oracle)
    }

    fn check_monotone(&self) -> Result<()> {
        for n in 1..self.stabilized_to {
            if self.factors[n].len() < self.factors[n - 1].len() {
                return Err(Error::Certification(format!(
                    "complexity decreases from length {n} to {}",
                    n + 1
                )));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &SubshiftSpec {
        &self.spec
    }

    pub fn spec_hash(&self) -> &str {
        &self.spec_hash
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.spec.alphabet
    }

    pub fn stabilized_to(&self) -> usize {
        self.stabilized_to
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn is_unstable(&self) -> bool {
        self.unstable
    }

    pub fn sample(&self) -> Option<&Word> {
        self.sample.as_ref()
    }

    pub fn sample_len(&self) -> usize {
        self.sample_len
    }

    pub fn require_length(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Precondition("factor length must be at least 1".into()));
        }
        if n > self.stabilized_to {
            return Err(Error::OutOfCertifiedRange { requested: n, achieved: self.stabilized_to });
        }
        Ok(())
    }

    /// The certified factor set L_n.
    pub fn factors(&self, n: usize) -> Result<&BTreeSet<Word>> {
        self.require_length(n)?;
        Ok(&self.factors[n - 1])
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        self.require_length(w.len())?;
        Ok(self.factors[w.len() - 1].contains(w))
    }

    pub fn format(&self, w: &Word) -> String {
        self.alphabet().format_word(w)
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        self.alphabet().parse_word(text)
    }

    /// P(n) = |L_n|.
    pub fn complexity(&self, n: usize) -> Result<u64> {
        Ok(self.factors(n)?.len() as u64)
    }

    pub fn complexity_series(&self, max_n: usize) -> Result<ComplexityProfile> {
        self.require_length(max_n)?;
        let values = (1..=max_n).map(|n| self.factors[n - 1].len() as u64).collect();
        Ok(ComplexityProfile {
            values,
            alphabet_size: self.alphabet().len() as u64,
            spec_hash: self.spec_hash.clone(),
        })
    }

    /// Symbols `s` with `w·s` certified.
    pub fn right_extensions(&self, w: &Word) -> Result<Vec<Symbol>> {
        self.require_length(w.len() + 1)?;
        let set = &self.factors[w.len()];
        Ok(self
            .alphabet()
            .symbols()
            .filter(|&s| set.contains(&w.pushed(s)))
            .collect())
    }

    /// Symbols `s` with `s·w` certified.
    pub fn left_extensions(&self, w: &Word) -> Result<Vec<Symbol>> {
        self.require_length(w.len() + 1)?;
        let set = &self.factors[w.len()];
        Ok(self
            .alphabet()
            .symbols()
            .filter(|&s| set.contains(&w.prepended(s)))
            .collect())
    }
}

/// A complexity sequence P(1..=N) with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityProfile {
    values: Vec<u64>,
    alphabet_size: u64,
    spec_hash: String,
}

impl ComplexityProfile {
    pub fn new(values: Vec<u64>, alphabet_size: u64, spec_hash: String) -> Result<Self> {
        if values.iter().any(|&p| p == 0) {
            return Err(Error::Precondition("complexity values must be positive".into()));
        }
        for w in values.windows(2) {
            if w[1] > w[0].saturating_mul(alphabet_size) {
                return Err(Error::Precondition(format!(
                    "complexity jumps from {} to {} over alphabet of size {alphabet_size}",
                    w[0], w[1]
                )));
            }
        }
        Ok(ComplexityProfile { values, alphabet_size, spec_hash })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// P(n), 1-based.
    pub fn get(&self, n: usize) -> u64 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn spec_hash(&self) -> &str {
        &self.spec_hash
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet_size
    }
}

/// Least n with P(n+1) = P(n), the Morse-Hedlund periodicity witness.
pub fn detect_eventual_periodicity(profile: &ComplexityProfile) -> Option<usize> {
    profile
        .values
        .windows(2)
        .position(|w| w[1] == w[0])
        .map(|i| i + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionSide {
    /// Max N such that the word extends uniquely N times on this side
    /// (a lower bound when `capped`).
    pub steps: usize,
    /// The certified horizon bound before a branch was seen.
    pub capped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionCounts {
    pub right: ExtensionSide,
    pub left: ExtensionSide,
}

fn walk_unique(
    oracle: &LanguageOracle,
    w: &Word,
    cap: usize,
    to_right: bool,
) -> Result<ExtensionSide> {
    let mut cur = w.clone();
    let mut steps = 0usize;
    loop {
        if steps >= cap {
            return Ok(ExtensionSide { steps, capped: true });
        }
        if cur.len() + 1 > oracle.stabilized_to() {
            return Ok(ExtensionSide { steps, capped: true });
        }
        let exts =
            if to_right { oracle.right_extensions(&cur)? } else { oracle.left_extensions(&cur)? };
        match exts.len() {
            1 => {
                cur = if to_right { cur.pushed(exts[0]) } else { cur.prepended(exts[0]) };
                steps += 1;
            }
            0 => {
                // Unreachable within the certified, extendable range.
                return Err(Error::Certification(format!(
                    "factor {} has no extension inside the certified range",
                    oracle.format(&cur)
                )));
            }
            _ => return Ok(ExtensionSide { steps, capped: false }),
        }
    }
}

/// Maximal unique-extension counts of a certified factor, each side
/// searched to the certified horizon.
pub fn unique_extension_count(oracle: &LanguageOracle, w: &Word) -> Result<ExtensionCounts> {
    if !oracle.contains(w)? {
        return Err(Error::NotInLanguage { word: oracle.format(w) });
    }
    Ok(ExtensionCounts {
        right: walk_unique(oracle, w, usize::MAX, true)?,
        left: walk_unique(oracle, w, usize::MAX, false)?,
    })
}

/// k_n: least k such that no length-n word extends uniquely k times on
/// both sides; equivalently 1 + max over w of min(u_right, u_left).
///
/// The search is capped at floor((stabilized_to - n)/2) so the doubling
/// inequality P(n + 2 k_n) >= 2 P(n) stays inside the certified range;
/// capped outcomes are reported as lower bounds, never as values.
pub fn k_n(oracle: &LanguageOracle, n: usize) -> Result<usize> {
    oracle.require_length(n)?;
    let profile = oracle.complexity_series(oracle.stabilized_to())?;
    if let Some(flagged_at) = detect_eventual_periodicity(&profile) {
        return Err(Error::PeriodicUndefined { flagged_at });
    }
    let cap = (oracle.stabilized_to() - n) / 2;
    if cap == 0 {
        return Err(Error::HorizonCapped { lower_bound: 1 });
    }
    let mut best = 0usize;
    let mut any_capped = false;
    for w in oracle.factors(n)?.iter() {
        let right = walk_unique(oracle, w, cap, true)?;
        let left = walk_unique(oracle, w, cap, false)?;
        if right.capped && left.capped {
            any_capped = true;
            break;
        }
        best = best.max(right.steps.min(left.steps));
    }
    if any_capped {
        return Err(Error::HorizonCapped { lower_bound: cap + 1 });
    }
    Ok(best + 1)
}

/// Outcome of the k_n search for one length, as recorded in profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnOutcome {
    Value(usize),
    AtLeast(usize),
    Periodic,
}

#[derive(Debug, Clone)]
pub struct LengthExtension {
    pub n: usize,
    pub k_n: KnOutcome,
    /// A word attaining the maximal two-sided unique extension, when the
    /// value is exact.
    pub witness: Option<Word>,
    pub witness_counts: Option<(usize, usize)>,
}

/// Per-length unique-extension records with the k_n column and the
/// empirical sup of k_n / n over exact values.
#[derive(Debug, Clone)]
pub struct ExtensionProfile {
    pub rows: Vec<LengthExtension>,
    pub sup_kn_over_n: Option<f64>,
}

pub fn extension_profile(oracle: &LanguageOracle, max_n: usize) -> Result<ExtensionProfile> {
    oracle.require_length(max_n)?;
    let profile = oracle.complexity_series(oracle.stabilized_to())?;
    let periodic = detect_eventual_periodicity(&profile).is_some();
    let mut rows = Vec::with_capacity(max_n);
    let mut sup: Option<f64> = None;
    for n in 1..=max_n {
        if periodic {
            rows.push(LengthExtension {
                n,
                k_n: KnOutcome::Periodic,
                witness: None,
                witness_counts: None,
            });
            continue;
        }
        let cap = (oracle.stabilized_to() - n) / 2;
        if cap == 0 {
            rows.push(LengthExtension {
                n,
                k_n: KnOutcome::AtLeast(1),
                witness: None,
                witness_counts: None,
            });
            continue;
        }
        let mut best = 0usize;
        let mut best_word: Option<(Word, usize, usize)> = None;
        let mut capped = false;
        for w in oracle.factors(n)?.iter() {
            let right = walk_unique(oracle, w, cap, true)?;
            let left = walk_unique(oracle, w, cap, false)?;
            if right.capped && left.capped {
                capped = true;
                break;
            }
            let u = right.steps.min(left.steps);
            if u >= best {
                if u > best || best_word.is_none() {
                    best_word = Some((w.clone(), right.steps, left.steps));
                }
                best = u;
            }
        }
        if capped {
            rows.push(LengthExtension {
                n,
                k_n: KnOutcome::AtLeast(cap + 1),
                witness: None,
                witness_counts: None,
            });
        } else {
            let value = best + 1;
            let ratio = value as f64 / n as f64;
            sup = Some(sup.map_or(ratio, |s: f64| s.max(ratio)));
            let (witness, witness_counts) = match best_word {
                Some((w, r, l)) => (Some(w), Some((r, l))),
                None => (None, None),
            };
            rows.push(LengthExtension { n, k_n: KnOutcome::Value(value), witness, witness_counts });
        }
    }
    Ok(ExtensionProfile { rows, sup_kn_over_n: sup })
}

/// d_n: least m with P(n+m) >= 2 P(n).
pub fn doubling_time(profile: &ComplexityProfile, n: usize) -> Result<usize> {
    if n == 0 || n > profile.len() {
        return Err(Error::Precondition(format!(
            "doubling time needs 1 <= n <= {}, got {n}",
            profile.len()
        )));
    }
    let want = 2 * profile.get(n);
    for m in 1..=(profile.len() - n) {
        if profile.get(n + m) >= want {
            return Ok(m);
        }
    }
    Err(Error::HorizonCapped { lower_bound: profile.len() - n + 1 })
}

/// Closed-form doubling time of n -> lambda^(n^beta):
/// ceil(n (1 + log 2 / (n^beta log lambda))^(1/beta) - n), at least 1.
pub fn reference_doubling_time(n: u64, beta: f64, lambda: f64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Precondition(format!("beta must lie in (0, 1], got {beta}")));
    }
    if lambda <= 1.0 {
        return Err(Error::Precondition(format!("lambda must exceed 1, got {lambda}")));
    }
    let nf = n as f64;
    let c = std::f64::consts::LN_2 / (nf.powf(beta) * lambda.ln());
    let x = nf * (1.0 + c).powf(1.0 / beta) - nf;
    Ok((ceil_guard(x).max(1.0)) as u64)
}

/// Ratio of the exact doubling time to its first-order asymptotic term
/// (log 2 / (beta log lambda)) n^(1-beta); tends to 1.
pub fn reference_doubling_ratio(n: u64, beta: f64, lambda: f64) -> Result<f64> {
    let d = reference_doubling_time(n, beta, lambda)? as f64;
    let lead = std::f64::consts::LN_2 / (beta * lambda.ln()) * (n as f64).powf(1.0 - beta);
    Ok(d / lead)
}

#[derive(Debug, Clone)]
pub struct GrowthRow {
    pub n: usize,
    pub log_p_over_n_beta: f64,
    pub p_over_n_d: f64,
    /// sup over m >= n of the stretched-exponential statistic.
    pub stretched_tail_sup: f64,
    /// sup over m >= n of the polynomial statistic.
    pub poly_tail_sup: f64,
}

/// Finite-range growth diagnostics for the stretched-exponential and
/// polynomial hypotheses: the raw statistics and their tail suprema.
/// These describe the computed range only; no limit is claimed.
#[derive(Debug, Clone)]
pub struct GrowthDiagnostics {
    pub beta: f64,
    pub d: u32,
    pub rows: Vec<GrowthRow>,
}

pub fn growth_diagnostics(
    profile: &ComplexityProfile,
    beta: f64,
    d: u32,
) -> Result<GrowthDiagnostics> {
    if profile.len() < 3 {
        return Err(Error::Precondition("profile must cover at least 3 lengths".into()));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Precondition(format!("beta must lie in (0, 1], got {beta}")));
    }
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    let n_max = profile.len();
    let mut rows: Vec<GrowthRow> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let p = profile.get(n) as f64;
        let nf = n as f64;
        rows.push(GrowthRow {
            n,
            log_p_over_n_beta: p.ln() / nf.powf(beta),
            p_over_n_d: p / nf.powi(d as i32),
            stretched_tail_sup: 0.0,
            poly_tail_sup: 0.0,
        });
    }
    let mut sup_b = f64::NEG_INFINITY;
    let mut sup_d = f64::NEG_INFINITY;
    for row in rows.iter_mut().rev() {
        sup_b = sup_b.max(row.log_p_over_n_beta);
        sup_d = sup_d.max(row.p_over_n_d);
        row.stretched_tail_sup = sup_b;
        row.poly_tail_sup = sup_d;
    }
    Ok(GrowthDiagnostics { beta, d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::SubshiftSpec;

    pub(crate) fn fibonacci(target: usize) -> LanguageOracle {
        let spec = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "0")]).unwrap();
        build_oracle(&spec, target).unwrap()
    }

    pub(crate) fn thue_morse(target: usize) -> LanguageOracle {
        let spec = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "10")]).unwrap();
        build_oracle(&spec, target).unwrap()
    }

    fn periodic01(target: usize) -> LanguageOracle {
        let spec = SubshiftSpec::periodic("01").unwrap();
        build_oracle(&spec, target).unwrap()
    }

    /// Linear sample containing every window of length <= order.
    fn de_bruijn_sample(order: u32) -> String {
        let n = order as usize;
        let mut seq = Vec::<u8>::new();
        let mut a = vec![0u8; 2 * n];
        fn db(t: usize, p: usize, n: usize, a: &mut Vec<u8>, seq: &mut Vec<u8>) {
            if t > n {
                if n % p == 0 {
                    seq.extend_from_slice(&a[1..=p]);
                }
            } else {
                a[t] = a[t - p];
                db(t + 1, p, n, a, seq);
                for c in a[t - p] + 1..2 {
                    a[t] = c;
                    db(t + 1, t, n, a, seq);
                }
            }
        }
        db(1, 1, n, &mut a, &mut seq);
        let mut s: String = seq.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect();
        let head: String = s.chars().take(n - 1).collect();
        s.push_str(&head);
        s
    }

    pub(crate) fn full_shift(order: u32) -> LanguageOracle {
        let sample = de_bruijn_sample(order);
        let spec = SubshiftSpec::explicit(&sample, order as usize).unwrap();
        build_oracle(&spec, order as usize).unwrap()
    }

    fn words(oracle: &LanguageOracle, n: usize) -> Vec<String> {
        oracle.factors(n).unwrap().iter().map(|w| oracle.format(w)).collect()
    }

    #[test]
    fn fibonacci_small_factor_sets() {
        let o = fibonacci(10);
        assert!(!o.is_unstable());
        assert_eq!(o.complexity(1).unwrap(), 2);
        assert_eq!(o.complexity(2).unwrap(), 3);
        assert_eq!(words(&o, 2), vec!["00", "01", "10"]);
        assert_eq!(o.complexity(5).unwrap(), 6);
    }

    #[test]
    fn periodic_factor_sets() {
        let o = periodic01(10);
        assert_eq!(words(&o, 2), vec!["01", "10"]);
        assert_eq!(words(&o, 3), vec!["010", "101"]);
        assert_eq!(o.complexity(7).unwrap(), 2);
    }

    #[test]
    fn thue_morse_l3() {
        let o = thue_morse(10);
        assert_eq!(o.complexity(3).unwrap(), 6);
        assert!(!words(&o, 3).contains(&"000".to_string()));
        assert!(!words(&o, 3).contains(&"111".to_string()));
    }

    #[test]
    fn full_shift_counts() {
        let o = full_shift(8);
        assert_eq!(o.complexity(2).unwrap(), 4);
        assert_eq!(o.complexity(3).unwrap(), 8);
        assert_eq!(o.stabilized_to(), 8);
    }

    #[test]
    fn out_of_range_reports_achieved_depth() {
        let o = fibonacci(10);
        match o.factors(o.stabilized_to() + 1) {
            Err(Error::OutOfCertifiedRange { requested, achieved }) => {
                assert_eq!(requested, o.stabilized_to() + 1);
                assert_eq!(achieved, o.stabilized_to());
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn periodicity_detection() {
        let o = periodic01(10);
        let p = o.complexity_series(8).unwrap();
        assert_eq!(detect_eventual_periodicity(&p), Some(1));

        let f = fibonacci(20);
        let pf = f.complexity_series(20).unwrap();
        assert_eq!(detect_eventual_periodicity(&pf), None);

        let t = thue_morse(20);
        let pt = t.complexity_series(16).unwrap();
        assert_eq!(detect_eventual_periodicity(&pt), None);
    }

    #[test]
    fn unique_extensions_fibonacci() {
        let o = fibonacci(20);
        let one = o.parse("1").unwrap();
        let c = unique_extension_count(&o, &one).unwrap();
        assert_eq!((c.right.steps, c.left.steps), (1, 1));
        assert!(!c.right.capped && !c.left.capped);

        let zero = o.parse("0").unwrap();
        let c0 = unique_extension_count(&o, &zero).unwrap();
        assert_eq!((c0.right.steps, c0.left.steps), (0, 0));
    }

    #[test]
    fn unique_extensions_periodic_are_capped() {
        let o = periodic01(12);
        let w = o.parse("0").unwrap();
        let c = unique_extension_count(&o, &w).unwrap();
        assert!(c.right.capped);
        assert!(c.left.capped);
    }

    #[test]
    fn unique_extension_rejects_non_factor() {
        let o = fibonacci(12);
        let bad = o.parse("11").unwrap();
        assert!(matches!(
            unique_extension_count(&o, &bad),
            Err(Error::NotInLanguage { .. })
        ));
    }

    #[test]
    fn k_n_examples() {
        let fib = fibonacci(30);
        assert_eq!(k_n(&fib, 1).unwrap(), 2);

        let tm = thue_morse(30);
        // Both letters branch immediately on both sides.
        assert_eq!(k_n(&tm, 1).unwrap(), 1);

        let per = periodic01(30);
        assert!(matches!(k_n(&per, 1), Err(Error::PeriodicUndefined { .. })));
    }

    #[test]
    fn doubling_time_examples() {
        let fib = fibonacci(30);
        let p = fib.complexity_series(30).unwrap();
        assert_eq!(doubling_time(&p, 3).unwrap(), 4);

        let full = full_shift(10);
        let pf = full.complexity_series(10).unwrap();
        assert_eq!(doubling_time(&pf, 5).unwrap(), 1);

        let per = periodic01(30);
        let pp = per.complexity_series(20).unwrap();
        assert!(matches!(doubling_time(&pp, 3), Err(Error::HorizonCapped { .. })));
    }

    #[test]
    fn reference_doubling_examples() {
        assert_eq!(reference_doubling_time(100, 0.5, 2.0).unwrap(), 21);
        assert_eq!(reference_doubling_time(1, 1.0, 2.0).unwrap(), 1);
        let ratio = reference_doubling_ratio(10_000, 0.5, 2.0).unwrap();
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio} not within 5%");
    }

    #[test]
    fn growth_diagnostics_trends() {
        let fib = fibonacci(20);
        let p = fib.complexity_series(20).unwrap();
        let g = growth_diagnostics(&p, 0.5, 2).unwrap();
        // (n+1)/n^2 decreases over the computed range.
        for w in g.rows.windows(2) {
            assert!(w[1].p_over_n_d < w[0].p_over_n_d);
        }

        let full = full_shift(10);
        let pf = full.complexity_series(10).unwrap();
        let gf = growth_diagnostics(&pf, 0.5, 2).unwrap();
        // log(2^n)/sqrt(n) increases: the hypothesis correctly fails.
        for w in gf.rows.windows(2) {
            assert!(w[1].log_p_over_n_beta > w[0].log_p_over_n_beta);
        }
        // Tail sup of an increasing sequence sits at the far end.
        assert_eq!(gf.rows[0].stretched_tail_sup, gf.rows.last().unwrap().log_p_over_n_beta);
    }

    #[test]
    fn extension_profile_rows() {
        let fib = fibonacci(40);
        let prof = extension_profile(&fib, 8).unwrap();
        assert_eq!(prof.rows.len(), 8);
        match &prof.rows[0].k_n {
            KnOutcome::Value(v) => assert_eq!(*v, 2),
            other => panic!("expected exact k_1, got {other:?}"),
        }
        let (r, l) = prof.rows[0].witness_counts.unwrap();
        assert!(r >= 1 && l >= 1);
        assert!(prof.sup_kn_over_n.unwrap() >= 2.0);

        let per = periodic01(20);
        let pp = extension_profile(&per, 4).unwrap();
        assert!(pp.rows.iter().all(|r| matches!(r.k_n, KnOutcome::Periodic)));
    }

    #[test]
    fn sturmian_matches_substitution_fibonacci() {
        let st = SubshiftSpec::sturmian(vec![1; 20]).unwrap();
        let o = build_oracle(&st, 25).unwrap();
        assert!(!o.is_unstable());
        let fib = fibonacci(25);
        for n in 1..=25 {
            assert_eq!(o.factors(n).unwrap(), fib.factors(n).unwrap(), "length {n}");
        }
    }

    #[test]
    fn explicit_trust_depth_clips() {
        let spec = SubshiftSpec::explicit("01001010010010100101", 4).unwrap();
        let o = build_oracle(&spec, 10).unwrap();
        assert!(o.is_unstable());
        assert_eq!(o.stabilized_to(), 4);
        assert!(o.factors(5).is_err());
    }

    #[test]
    fn counting_identity_small() {
        let o = thue_morse(20);
        for n in 1..o.stabilized_to() {
            let total: usize = o
                .factors(n)
                .unwrap()
                .iter()
                .map(|w| o.right_extensions(w).unwrap().len())
                .sum();
            assert_eq!(total as u64, o.complexity(n + 1).unwrap());
        }
    }
}
