//! Folner candidates over an automorphism slice, boundary ratios, slow
//! growth windows, subgroup growth series, and the nilpotency step bound.
//!
//! Strict mode follows the coset-growth construction with its literal
//! constants, walking each stage against the oracle until a resource
//! wall; at desk scale the constants are astronomically large, so the
//! expected outcome is a structured infeasibility report naming the stage
//! that failed. Empirical mode takes operator-supplied small (r, M) and
//! measures the same quantities on a real instance.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::codes::{
    compose, enumerate_automorphisms, equals, Automorphism, EnumerationMode, EnumerationOptions,
};
use crate::error::{Error, Result};
use crate::groups::{
    automorphism_closure, coset_count_f, cylinder_action, group_closure, marked_word_for,
    max_return_gap, stabilizer_generators, MarkedMode, MarkedWord,
};
use crate::language::{ceil_guard, LanguageOracle, REAL_TOL};
use crate::words::Word;

/// Parameter bundle for the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub beta: f64,
    pub c: f64,
    pub d: u64,
    pub lambda: f64,
}

impl BoundParams {
    pub fn new(beta: f64, c: f64, d: u64, lambda: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::Precondition(format!("beta must lie in (0, 1), got {beta}")));
        }
        if c <= 0.0 {
            return Err(Error::Precondition(format!("C must be positive, got {c}")));
        }
        if d == 0 {
            return Err(Error::Precondition("d must be at least 1".into()));
        }
        if lambda <= 1.0 {
            return Err(Error::Precondition(format!("lambda must exceed 1, got {lambda}")));
        }
        Ok(BoundParams { beta, c, d, lambda })
    }

    pub fn with_beta(beta: f64) -> Result<Self> {
        BoundParams::new(beta, 1.0, 2, 2.0)
    }

    fn require_folner_beta(&self) -> Result<()> {
        if self.beta >= 0.5 {
            return Err(Error::Precondition(format!(
                "Folner constructions need beta < 1/2, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

/// The slow-growth exponent (2 beta - 1) / (2 - 2 beta); negative for
/// beta < 1/2, so exp(M^e) tends to 1.
fn slow_exponent(beta: f64) -> f64 {
    (2.0 * beta - 1.0) / (2.0 - 2.0 * beta)
}

/// Least M in [ceil(N/3), N-k] with f(M+k) <= f(M) exp(M^((2b-1)/(2-2b))),
/// for a nondecreasing f on {1..N} with f(N) <= exp(N^(b/(1-b))).
/// Absence within the window is a reported outcome, never silent.
pub fn find_slow_window(f: &[u128], k: usize, beta: f64) -> Result<Option<usize>> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::Precondition(format!("beta must lie in (0, 1/2), got {beta}")));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let n = f.len();
    if n == 0 {
        return Err(Error::Precondition("empty sequence".into()));
    }
    if let Some(i) = f.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::Precondition(format!(
            "sequence decreases at index {}: {} -> {}",
            i + 1,
            f[i],
            f[i + 1]
        )));
    }
    if f[0] == 0 {
        return Err(Error::Precondition("sequence values must be positive".into()));
    }
    let bound = (n as f64).powf(beta / (1.0 - beta));
    let log_last = (f[n - 1] as f64).ln();
    if log_last > bound + REAL_TOL {
        return Err(Error::Precondition(format!(
            "growth precondition fails: log f(N) = {log_last:.6} > N^(b/(1-b)) = {bound:.6}"
        )));
    }
    let lo = n.div_ceil(3);
    let Some(hi) = n.checked_sub(k) else {
        return Err(Error::Precondition(format!("window empty: k = {k} exceeds N = {n}")));
    };
    if hi < lo {
        return Err(Error::Precondition(format!(
            "window empty: ceil(N/3) = {lo} exceeds N - k = {hi}"
        )));
    }
    let e = slow_exponent(beta);
    for m in lo..=hi {
        let lhs = (f[m + k - 1] as f64).ln();
        let rhs = (f[m - 1] as f64).ln() + (m as f64).powf(e);
        if lhs <= rhs + REAL_TOL {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FolnerMode {
    /// Literal constants from the coset-growth construction.
    Strict,
    /// Operator-supplied range and coset level.
    Empirical { r: usize, m: usize },
}

#[derive(Debug, Clone)]
pub struct FolnerOptions {
    pub enumeration: EnumerationOptions,
    pub closure_cap: usize,
}

impl Default for FolnerOptions {
    fn default() -> Self {
        FolnerOptions {
            enumeration: EnumerationOptions {
                mode: EnumerationMode::ConstraintPropagation,
                ..EnumerationOptions::default()
            },
            closure_cap: 10_000,
        }
    }
}

/// A coset union F_k = phi_1 G ∪ ... ∪ phi_f(M) G over the marked word's
/// stabilizer group, with the measurements taken along the way.
#[derive(Debug, Clone)]
pub struct FolnerCandidate {
    pub k: usize,
    pub m: usize,
    pub marked: MarkedWord,
    /// f(1..=3R): distinct images of the marked word per embedded slice.
    pub f_values: Vec<usize>,
    /// Canonical coset representatives, one per image class of Aut_M.
    pub reps: Vec<Automorphism>,
    /// The stabilizer group G as block codes.
    pub group_elements: Vec<Automorphism>,
    /// The union set, deduplicated by canonical key, sorted by it.
    pub elements: Vec<Automorphism>,
    element_keys: BTreeSet<String>,
    /// In strict mode, 2 exp(M^((2b-1)/(2-2b))) - 2.
    pub strict_ratio_bound: Option<f64>,
    pub mode: FolnerMode,
}

impl FolnerCandidate {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn f_at(&self, j: usize) -> usize {
        self.f_values[j - 1]
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.element_keys.contains(key)
    }
}

/// Why a strict-mode construction could not be carried out on this
/// oracle; the expected desk-scale outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InfeasibilityReport {
    pub stage: String,
    pub detail: String,
    pub required: Option<u64>,
    pub available: Option<u64>,
}

#[derive(Debug, Clone)]
pub enum FolnerOutcome {
    Built(Box<FolnerCandidate>),
    Infeasible(InfeasibilityReport),
}

pub fn folner_candidate(
    oracle: &LanguageOracle,
    k: usize,
    params: &BoundParams,
    mode: FolnerMode,
    opts: &FolnerOptions,
) -> Result<FolnerOutcome> {
    params.require_folner_beta()?;
    match mode {
        FolnerMode::Empirical { r, m } => {
            validate_levels(k, r, m)?;
            let marked = crate::groups::build_marked_word(oracle, r, MarkedMode::Step2)?;
            let c = assemble_candidate(oracle, k, m, marked, None, opts, mode)?;
            Ok(FolnerOutcome::Built(Box::new(c)))
        }
        FolnerMode::Strict => strict_candidate(oracle, k, params, opts),
    }
}

fn validate_levels(k: usize, r: usize, m: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::Precondition("range r must be at least 1".into()));
    }
    if m == 0 || m + k > 3 * r {
        return Err(Error::Precondition(format!(
            "need 1 <= M and M + k <= 3R; got M = {m}, k = {k}, R = {r}"
        )));
    }
    Ok(())
}

fn infeasible(stage: &str, detail: String, required: Option<u64>, available: Option<u64>) -> FolnerOutcome {
    FolnerOutcome::Infeasible(InfeasibilityReport {
        stage: stage.to_string(),
        detail,
        required,
        available,
    })
}

fn strict_candidate(
    oracle: &LanguageOracle,
    k: usize,
    params: &BoundParams,
    opts: &FolnerOptions,
) -> Result<FolnerOutcome> {
    let beta = params.beta;
    let top = oracle.stabilized_to();
    let profile = oracle.complexity_series(top)?;

    // Stage 1: N > k with P(n) <= exp(n^b / 4^(b/(1-b))) on the certified
    // tail. Only the certified range can witness this.
    let shrink = 4f64.powf(beta / (1.0 - beta));
    let tail_ok: Vec<bool> = (1..=top)
        .map(|n| (profile.get(n) as f64).ln() <= (n as f64).powf(beta) / shrink + REAL_TOL)
        .collect();
    let mut n_start = None;
    for n in (k + 1)..=top {
        if (n..=top).all(|j| tail_ok[j - 1]) {
            n_start = Some(n);
            break;
        }
    }
    let Some(n_start) = n_start else {
        return Ok(infeasible(
            "tail-bound",
            format!(
                "no N <= {top} has P(n) <= exp(n^{beta:.3}/{shrink:.3}) for all certified n >= N"
            ),
            None,
            Some(top as u64),
        ));
    };

    // Stage 2: n >= N with a word extending uniquely at least n^(1-b)
    // times both ways, and R = floor(n^(1-b)/9) >= 1.
    let mut found: Option<(usize, Word, usize)> = None;
    for n in n_start..=top {
        let ext = ceil_guard((n as f64).powf(1.0 - beta)).max(1.0) as usize;
        let r = ((n as f64).powf(1.0 - beta) / 9.0).floor() as usize;
        if n + 2 * ext > top {
            return Ok(infeasible(
                "extendable-word-horizon",
                format!(
                    "certifying a word of length {n} extending uniquely {ext} times per side \
                     needs factors of length {}",
                    n + 2 * ext
                ),
                Some((n + 2 * ext) as u64),
                Some(top as u64),
            ));
        }
        if r == 0 {
            continue;
        }
        let mut qualifying = None;
        for w in oracle.factors(n)? {
            let c = crate::language::unique_extension_count(oracle, w)?;
            if c.right.steps >= ext && c.left.steps >= ext {
                qualifying = Some(w.clone());
                break;
            }
        }
        if let Some(w) = qualifying {
            if n + 12 * r > top {
                return Ok(infeasible(
                    "marked-word-horizon",
                    format!("extending the word 6R = {} per side needs length {}", 6 * r, n + 12 * r),
                    Some((n + 12 * r) as u64),
                    Some(top as u64),
                ));
            }
            found = Some((n, w, r));
            break;
        }
    }
    let Some((_n, w, r)) = found else {
        return Ok(infeasible(
            "extendable-word",
            format!(
                "no certified word of length in [{n_start}, {top}] extends uniquely n^(1-beta) \
                 times on both sides with R >= 1"
            ),
            None,
            Some(top as u64),
        ));
    };

    // Stage 3: marked word and the f series on {1..3R}.
    let marked = match marked_word_for(oracle, &w, r, MarkedMode::Step2) {
        Ok(m) => m,
        Err(e) => {
            return Ok(infeasible("marked-word", e.to_string(), None, Some(top as u64)));
        }
    };
    let f_values = match f_series(oracle, &marked, opts) {
        Ok(f) => f,
        Err(e @ (Error::CandidateCapExceeded { .. } | Error::RangeCapExceeded { .. })) => {
            return Ok(infeasible("enumeration", e.to_string(), None, Some(top as u64)));
        }
        Err(e) => return Err(e),
    };

    // Stage 4: slow window on {1..3R}.
    let f_u128: Vec<u128> = f_values.iter().map(|&v| v as u128).collect();
    let m = match find_slow_window(&f_u128, k, beta) {
        Ok(Some(m)) => m,
        Ok(None) => {
            return Ok(infeasible(
                "slow-window",
                format!("no M in [{}, {}] satisfies the coset-growth inequality", r, 3 * r - k),
                None,
                None,
            ));
        }
        Err(e) => {
            return Ok(infeasible("slow-window-precondition", e.to_string(), None, None));
        }
    };

    let bound = 2.0 * ((m as f64).powf(slow_exponent(beta))).exp() - 2.0;
    validate_levels(k, r, m)?;
    let c = assemble_candidate(oracle, k, m, marked, Some(bound), opts, FolnerMode::Strict)?;
    Ok(FolnerOutcome::Built(Box::new(c)))
}

fn f_series(
    oracle: &LanguageOracle,
    marked: &MarkedWord,
    opts: &FolnerOptions,
) -> Result<Vec<usize>> {
    let three_r = 3 * marked.r;
    let mut f_values = Vec::with_capacity(three_r);
    for j in 1..=three_r {
        let auts_j = enumerate_automorphisms(oracle, j, &opts.enumeration)?;
        f_values.push(coset_count_f(oracle, marked, &auts_j)?);
    }
    for w in f_values.windows(2) {
        if w[1] < w[0] {
            return Err(Error::Falsified(
                "coset count f is not nondecreasing under range embedding".into(),
            ));
        }
    }
    Ok(f_values)
}

fn assemble_candidate(
    oracle: &LanguageOracle,
    k: usize,
    m: usize,
    marked: MarkedWord,
    strict_ratio_bound: Option<f64>,
    opts: &FolnerOptions,
    mode: FolnerMode,
) -> Result<FolnerCandidate> {
    let f_values = f_series(oracle, &marked, opts)?;

    // Stabilizer group of the marked word, both as block codes and as
    // return-word actions; the two routes must agree on the order.
    let rho = marked.extended.len() / 2;
    let universe = enumerate_automorphisms(oracle, rho, &opts.enumeration)?;
    let stab = stabilizer_generators(oracle, &marked.extended, &universe)?;
    let group_elements = automorphism_closure(&stab, oracle, opts.closure_cap)?;
    let rd = max_return_gap(oracle, &marked.extended)?;
    let actions: Vec<_> = stab
        .iter()
        .map(|a| cylinder_action(a, &rd, oracle))
        .collect::<Result<Vec<_>>>()?;
    let fg = group_closure(&marked.extended, &actions, opts.closure_cap)?;
    if !actions.is_empty() && fg.order() != group_elements.len() {
        return Err(Error::Falsified(format!(
            "stabilizer group order differs between routes: {} actions vs {} codes",
            fg.order(),
            group_elements.len()
        )));
    }

    // Coset representatives: canonical least element of each image class
    // of Aut_M under the 3R embedding.
    let auts_m = enumerate_automorphisms(oracle, m, &opts.enumeration)?;
    let three_r = 3 * marked.r;
    let mut classes: BTreeMap<Word, Automorphism> = BTreeMap::new();
    for a in &auts_m {
        let img = crate::codes::promote_range(a, three_r, oracle)?.apply_raw(&marked.extended)?;
        classes.entry(img).or_insert_with(|| a.clone());
    }
    if classes.len() != f_values[m - 1] {
        return Err(Error::Falsified(format!(
            "image classes of Aut_{m} ({}) disagree with f({m}) = {}",
            classes.len(),
            f_values[m - 1]
        )));
    }
    let reps: Vec<Automorphism> = classes.into_values().collect();

    // F_k: union of rep * G over all representatives.
    let mut element_keys: BTreeSet<String> = BTreeSet::new();
    let mut by_key: BTreeMap<String, Automorphism> = BTreeMap::new();
    for rep in &reps {
        for g in &group_elements {
            let el = compose(rep, g, oracle)?;
            let key = el.canonical_key(oracle)?;
            if element_keys.insert(key.clone()) {
                by_key.insert(key, el);
            }
        }
    }

    // Aut_k is contained in Aut_M is contained in F_k.
    let auts_k = enumerate_automorphisms(oracle, k.min(m), &opts.enumeration)?;
    for a in auts_m.iter().chain(auts_k.iter()) {
        let key = a.canonical_key(oracle)?;
        if !element_keys.contains(&key) {
            return Err(Error::Falsified(format!(
                "Aut_M is not covered by the coset union: missing element of range {}",
                a.range()
            )));
        }
    }

    let elements: Vec<Automorphism> = by_key.into_values().collect();
    Ok(FolnerCandidate {
        k,
        m,
        marked,
        f_values,
        reps,
        group_elements,
        elements,
        element_keys,
        strict_ratio_bound,
        mode,
    })
}

/// An exact symmetric-difference ratio |F ^ phi F| / |F|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub sym_diff: u64,
    pub size: u64,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        self.sym_diff as f64 / self.size as f64
    }

    /// (numerator, denominator) in lowest terms.
    pub fn reduced(&self) -> (u64, u64) {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(self.sym_diff, self.size).max(1);
        (self.sym_diff / g, self.size / g)
    }
}

/// |F ^ phi F| / |F| by exact set comparison on canonical keys. In strict
/// mode the displayed bound must hold, and a violation is an instance
/// falsification.
pub fn folner_ratio(
    candidate: &FolnerCandidate,
    phi: &Automorphism,
    oracle: &LanguageOracle,
) -> Result<Ratio> {
    if phi.range() > candidate.k {
        return Err(Error::Precondition(format!(
            "phi has range {}, beyond the slice Aut_{}",
            phi.range(),
            candidate.k
        )));
    }
    let size = candidate.size() as u64;
    let mut intersection = 0u64;
    for g in &candidate.elements {
        let moved = compose(phi, g, oracle)?;
        if candidate.contains_key(&moved.canonical_key(oracle)?) {
            intersection += 1;
        }
    }
    let ratio = Ratio { sym_diff: 2 * (size - intersection), size };
    if let Some(bound) = candidate.strict_ratio_bound {
        if ratio.value() > bound + REAL_TOL {
            return Err(Error::Falsified(format!(
                "strict-mode ratio {} exceeds the displayed bound {bound}",
                ratio.value()
            )));
        }
    }
    Ok(ratio)
}

/// Ball sizes of the subgroup generated by a symmetric set: gamma(n)
/// counts distinct products of at most n generators (the empty product
/// included).
#[derive(Debug, Clone)]
pub struct GrowthSeries {
    gamma: Vec<u64>,
    pub generator_count: usize,
}

impl GrowthSeries {
    /// gamma(n), 1-based; gamma(0) = 1 implicitly.
    pub fn gamma(&self, n: usize) -> u64 {
        if n == 0 {
            1
        } else {
            self.gamma[n - 1]
        }
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.gamma
    }

    /// log gamma(n) / n. The subexponential-growth statement concerns
    /// this log-scale quantity; the raw-scale variant appearing alongside
    /// it in the source material is not asserted, only this diagnostic is
    /// reported.
    pub fn log_diagnostic(&self) -> Vec<f64> {
        self.gamma
            .iter()
            .enumerate()
            .map(|(i, &g)| (g as f64).ln() / (i + 1) as f64)
            .collect()
    }
}

/// Breadth-first ball growth with canonical-key deduplication. The
/// generating set must be symmetric; composite ranges add up, so the
/// certified depth caps how far the series can run.
pub fn subgroup_growth(
    generators: &[Automorphism],
    n_max: usize,
    oracle: &LanguageOracle,
) -> Result<GrowthSeries> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    for g in generators {
        let inv = g.inverted();
        let mut ok = false;
        for h in generators {
            if equals(&inv, h, oracle)? {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Precondition(
                "generating set is not closed under inverses".into(),
            ));
        }
    }
    let id = crate::codes::identity(oracle)?;
    let mut seen: BTreeSet<String> = BTreeSet::new();
    seen.insert(id.canonical_key(oracle)?);
    let mut frontier: Vec<Automorphism> = vec![id];
    let mut gamma: Vec<u64> = Vec::with_capacity(n_max);
    for _n in 1..=n_max {
        let mut next: Vec<Automorphism> = Vec::new();
        for cur in &frontier {
            for g in generators {
                let prod = compose(g, cur, oracle)?;
                let key = prod.canonical_key(oracle)?;
                if seen.insert(key) {
                    next.push(prod);
                }
            }
        }
        gamma.push(seen.len() as u64);
        frontier = next;
    }
    let series = GrowthSeries { gamma, generator_count: generators.len() };
    for w in series.gamma.windows(2) {
        if w[1] < w[0] {
            return Err(Error::Falsified("growth series decreases".into()));
        }
    }
    for m in 0..=series.len() {
        for n in 0..=series.len() - m {
            if m + n >= 1 && series.gamma(m + n) > series.gamma(m).saturating_mul(series.gamma(n))
            {
                return Err(Error::Falsified(format!(
                    "submultiplicativity fails: gamma({}) > gamma({m}) * gamma({n})",
                    m + n
                )));
            }
        }
    }
    Ok(series)
}

/// Step bound floor((-1 + sqrt(8d - 7)) / 2) for polynomial degree d;
/// equivalently the largest s with s(s+1)/2 + 1 <= d.
pub fn nilpotent_step_bound(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    let x = ((8.0 * d as f64 - 7.0).sqrt() - 1.0) / 2.0;
    Ok((x + 1e-12).floor() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{identity, shift_power};
    use crate::language::build_oracle;
    use crate::subshift::SubshiftSpec;

    fn fibonacci(target: usize) -> LanguageOracle {
        let spec = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "0")]).unwrap();
        build_oracle(&spec, target).unwrap()
    }

    #[test]
    fn slow_window_constant_sequence() {
        let f = vec![5u128; 300];
        assert_eq!(find_slow_window(&f, 3, 0.4).unwrap(), Some(100));
        assert_eq!(find_slow_window(&f, 1, 0.4).unwrap(), Some(100));
    }

    #[test]
    fn slow_window_rejects_fast_growth() {
        // 2^n violates f(N) <= exp(N^(2/3)) at N = 100.
        let f: Vec<u128> = (0..100).map(|i| 1u128 << i).collect();
        assert!(matches!(find_slow_window(&f, 3, 0.4), Err(Error::Precondition(_))));
    }

    #[test]
    fn slow_window_rejects_decreasing() {
        let f = vec![3u128, 2, 5];
        assert!(matches!(find_slow_window(&f, 1, 0.4), Err(Error::Precondition(_))));
    }

    #[test]
    fn step_bound_values() {
        assert_eq!(nilpotent_step_bound(1).unwrap(), 0);
        assert_eq!(nilpotent_step_bound(2).unwrap(), 1);
        assert_eq!(nilpotent_step_bound(3).unwrap(), 1);
        assert_eq!(nilpotent_step_bound(7).unwrap(), 3);
        assert!(nilpotent_step_bound(0).is_err());
    }

    #[test]
    fn growth_of_shift_powers_is_linear() {
        let fib = fibonacci(40);
        let gens = vec![shift_power(&fib, 1).unwrap(), shift_power(&fib, -1).unwrap()];
        let series = subgroup_growth(&gens, 8, &fib).unwrap();
        for n in 1..=8 {
            assert_eq!(series.gamma(n), 2 * n as u64 + 1);
        }
    }

    #[test]
    fn growth_of_identity_is_constant() {
        let fib = fibonacci(20);
        let gens = vec![identity(&fib).unwrap()];
        let series = subgroup_growth(&gens, 5, &fib).unwrap();
        for n in 1..=5 {
            assert_eq!(series.gamma(n), 1);
        }
    }

    #[test]
    fn growth_rejects_asymmetric_generators() {
        let fib = fibonacci(30);
        let gens = vec![shift_power(&fib, 1).unwrap()];
        assert!(matches!(
            subgroup_growth(&gens, 3, &fib),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn growth_range_cap() {
        let fib = fibonacci(12);
        let gens = vec![shift_power(&fib, 1).unwrap(), shift_power(&fib, -1).unwrap()];
        let err = subgroup_growth(&gens, 10, &fib).unwrap_err();
        assert!(matches!(err, Error::RangeCapExceeded { .. }));
    }

    #[test]
    fn beta_validation() {
        assert!(BoundParams::with_beta(0.7).is_ok());
        assert!(BoundParams::with_beta(0.7).unwrap().require_folner_beta().is_err());
        assert!(BoundParams::new(0.4, 1.0, 2, 2.0).is_ok());
        assert!(BoundParams::new(0.0, 1.0, 2, 2.0).is_err());
    }
}
