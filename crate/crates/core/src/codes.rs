//! Range-R sliding block codes over a certified language, and the
//! enumeration of the automorphism slices Aut_R(X).
//!
//! A rule's table is defined on the occurring windows only (the certified
//! L_{2R+1}), never on all |A|^(2R+1) words; on low-complexity shifts this
//! is what makes exhaustive enumeration viable. Because membership of a
//! code image in an oracle-presented language is only checkable to the
//! certified depth, every accepted code carries the depth it was verified
//! to, and that depth is surfaced in reports.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::max_return_gap;
use crate::language::LanguageOracle;
use crate::words::{Symbol, Word};

/// A block code of range R: a total map from the certified windows of
/// length 2R+1 to symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LocalRule {
    range: usize,
    table: BTreeMap<Word, Symbol>,
}

impl LocalRule {
    /// Requires the table to be total on, and confined to, the certified
    /// window set.
    pub fn new(range: usize, table: BTreeMap<Word, Symbol>, oracle: &LanguageOracle) -> Result<Self> {
        let windows = oracle.factors(2 * range + 1)?;
        let missing = windows.iter().filter(|w| !table.contains_key(*w)).count();
        if missing > 0 {
            return Err(Error::TableNotTotal { missing, total: windows.len() });
        }
        if table.len() != windows.len() {
            return Err(Error::Precondition(
                "rule table has entries outside the certified window set".into(),
            ));
        }
        Ok(LocalRule { range, table })
    }

    fn new_unchecked(range: usize, table: BTreeMap<Word, Symbol>) -> Self {
        LocalRule { range, table }
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn window_len(&self) -> usize {
        2 * self.range + 1
    }

    pub fn table(&self) -> &BTreeMap<Word, Symbol> {
        &self.table
    }

    pub fn output(&self, window: &[Symbol]) -> Option<Symbol> {
        self.table.get(window).copied()
    }

    /// Slides the window over `w`; the image has length |w| - 2R.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let wl = self.window_len();
        if w.len() < wl {
            return Err(Error::WordTooShort { range: self.range, needed: wl, got: w.len() });
        }
        let mut out = Vec::with_capacity(w.len() - wl + 1);
        for i in 0..=w.len() - wl {
            match self.table.get(w.slice(i, wl)) {
                Some(&s) => out.push(s),
                None => {
                    return Err(Error::WindowNotInTable {
                        window: Word::from_symbols(w.slice(i, wl).to_vec()).to_string(),
                    })
                }
            }
        }
        Ok(Word::from_symbols(out))
    }
}

/// A rule together with the depth to which image containment in the
/// language has been verified.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Endomorphism {
    rule: LocalRule,
    verified_depth: usize,
}

impl Endomorphism {
    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn range(&self) -> usize {
        self.rule.range
    }

    pub fn verified_depth(&self) -> usize {
        self.verified_depth
    }

    pub fn apply_to_word(&self, w: &Word, oracle: &LanguageOracle) -> Result<Word> {
        apply_checked(&self.rule, w, oracle)
    }
}

/// An invertible block code: forward and inverse rules of the same range,
/// verified to a shared depth.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Automorphism {
    forward: LocalRule,
    inverse: LocalRule,
    verified_depth: usize,
}

impl Automorphism {
    /// Checked constructor: both compositions must act as the identity on
    /// every certified window of the composite range.
    pub fn from_parts(
        forward: LocalRule,
        inverse: LocalRule,
        verified_depth: usize,
        oracle: &LanguageOracle,
    ) -> Result<Self> {
        if forward.range != inverse.range {
            return Err(Error::Precondition(format!(
                "forward range {} differs from inverse range {}",
                forward.range, inverse.range
            )));
        }
        if verified_depth < forward.window_len() {
            return Err(Error::Precondition(format!(
                "verified depth {} below window length {}",
                verified_depth,
                forward.window_len()
            )));
        }
        let fi = compose_rules(&forward, &inverse, oracle)?;
        let if_ = compose_rules(&inverse, &forward, oracle)?;
        if !rule_is_identity(&fi) || !rule_is_identity(&if_) {
            return Err(Error::Precondition(
                "rules do not compose to the identity on certified windows".into(),
            ));
        }
        Ok(Automorphism { forward, inverse, verified_depth })
    }

    fn new_unchecked(forward: LocalRule, inverse: LocalRule, verified_depth: usize) -> Self {
        Automorphism { forward, inverse, verified_depth }
    }

    pub fn range(&self) -> usize {
        self.forward.range
    }

    pub fn forward(&self) -> &LocalRule {
        &self.forward
    }

    pub fn inverse(&self) -> &LocalRule {
        &self.inverse
    }

    pub fn verified_depth(&self) -> usize {
        self.verified_depth
    }

    /// The inverse automorphism.
    pub fn inverted(&self) -> Automorphism {
        Automorphism {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
            verified_depth: self.verified_depth,
        }
    }

    /// Image of a certified word; length shrinks by 2R.
    pub fn apply_to_word(&self, w: &Word, oracle: &LanguageOracle) -> Result<Word> {
        apply_checked(&self.forward, w, oracle)
    }

    /// Table-level application without the membership precheck.
    pub fn apply_raw(&self, w: &Word) -> Result<Word> {
        self.forward.apply(w)
    }

    pub fn doc(&self, oracle: &LanguageOracle) -> AutomorphismDoc {
        let render = |rule: &LocalRule| {
            rule.table
                .iter()
                .map(|(w, &s)| {
                    (oracle.format(w), oracle.alphabet().char_at(s).to_string())
                })
                .collect()
        };
        AutomorphismDoc {
            range: self.range(),
            verified_depth: self.verified_depth,
            forward: render(&self.forward),
            inverse: render(&self.inverse),
        }
    }

    /// Canonical key: minimal range plus the reduced forward table.
    /// Distinct automorphisms of X get distinct keys regardless of the
    /// range they are presented at.
    pub fn canonical_key(&self, oracle: &LanguageOracle) -> Result<String> {
        let (range, table) = reduce_to_minimal(&self.forward, oracle)?;
        let mut key = format!("r{range}");
        for (w, s) in table {
            key.push(';');
            key.push_str(&w.to_string());
            key.push('>');
            key.push_str(&s.to_string());
        }
        Ok(key)
    }
}

/// Serialized form: ordered window-to-symbol pairs for both directions.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AutomorphismDoc {
    pub range: usize,
    pub verified_depth: usize,
    pub forward: Vec<(String, String)>,
    pub inverse: Vec<(String, String)>,
}

fn apply_checked(rule: &LocalRule, w: &Word, oracle: &LanguageOracle) -> Result<Word> {
    if w.len() < rule.window_len() {
        return Err(Error::WordTooShort { range: rule.range, needed: rule.window_len(), got: w.len() });
    }
    if !oracle.contains(w)? {
        return Err(Error::NotInLanguage { word: oracle.format(w) });
    }
    rule.apply(w)
}

/// The identity as a range-0 code.
pub fn identity(oracle: &LanguageOracle) -> Result<Automorphism> {
    let table: BTreeMap<Word, Symbol> =
        oracle.factors(1)?.iter().map(|w| (w.clone(), w.at(0))).collect();
    let rule = LocalRule::new_unchecked(0, table);
    Ok(Automorphism::new_unchecked(rule.clone(), rule, oracle.stabilized_to()))
}

/// The shift power sigma^j as a block code of range |j| (range 0 for
/// j = 0); its inverse is sigma^(-j).
pub fn shift_power(oracle: &LanguageOracle, j: i64) -> Result<Automorphism> {
    let r = j.unsigned_abs() as usize;
    let build = |offset: i64| -> Result<LocalRule> {
        let idx = (r as i64 + offset) as usize;
        let table: BTreeMap<Word, Symbol> =
            oracle.factors(2 * r + 1)?.iter().map(|w| (w.clone(), w.at(idx))).collect();
        Ok(LocalRule::new_unchecked(r, table))
    };
    Ok(Automorphism::new_unchecked(build(j)?, build(-j)?, oracle.stabilized_to()))
}

/// Re-expresses a rule on the windows of a larger range.
pub fn promote_rule(rule: &LocalRule, s: usize, oracle: &LanguageOracle) -> Result<LocalRule> {
    if s < rule.range {
        return Err(Error::Precondition(format!(
            "cannot promote range {} down to {s}",
            rule.range
        )));
    }
    if s == rule.range {
        return Ok(rule.clone());
    }
    let pad = s - rule.range;
    let mut table = BTreeMap::new();
    for w in oracle.factors(2 * s + 1)? {
        let inner = w.slice(pad, rule.window_len());
        match rule.table.get(inner) {
            Some(&sym) => {
                table.insert(w.clone(), sym);
            }
            None => {
                return Err(Error::WindowNotInTable {
                    window: Word::from_symbols(inner.to_vec()).to_string(),
                })
            }
        }
    }
    Ok(LocalRule::new_unchecked(s, table))
}

/// The same automorphism presented at range S >= R.
pub fn promote_range(a: &Automorphism, s: usize, oracle: &LanguageOracle) -> Result<Automorphism> {
    Ok(Automorphism::new_unchecked(
        promote_rule(&a.forward, s, oracle)?,
        promote_rule(&a.inverse, s, oracle)?,
        a.verified_depth,
    ))
}

/// Table of a composite a(b(x)); range adds per the composition bookkeeping.
pub fn compose_rules(a: &LocalRule, b: &LocalRule, oracle: &LanguageOracle) -> Result<LocalRule> {
    let range = a.range + b.range;
    let needed = 2 * range + 1;
    if needed > oracle.stabilized_to() {
        return Err(Error::RangeCapExceeded {
            range,
            needed,
            available: oracle.stabilized_to(),
        });
    }
    let mut table = BTreeMap::new();
    for w in oracle.factors(needed)? {
        let mid = b.apply(w)?;
        match a.table.get(mid.symbols()) {
            Some(&s) => {
                table.insert(w.clone(), s);
            }
            None => {
                // b maps a certified window outside the language; the
                // composite is not defined as a code on X.
                return Err(Error::NotInLanguage { word: oracle.format(&mid) });
            }
        }
    }
    Ok(LocalRule::new_unchecked(range, table))
}

/// a after b, i.e. (a o b)(x) = a(b(x)), of range R_a + R_b.
pub fn compose(a: &Automorphism, b: &Automorphism, oracle: &LanguageOracle) -> Result<Automorphism> {
    let forward = compose_rules(&a.forward, &b.forward, oracle)?;
    let inverse = compose_rules(&b.inverse, &a.inverse, oracle)?;
    let depth = a.verified_depth.min(b.verified_depth);
    Ok(Automorphism::new_unchecked(forward, inverse, depth))
}

fn rule_is_identity(rule: &LocalRule) -> bool {
    rule.table.iter().all(|(w, &s)| w.at(rule.range) == s)
}

/// Whether two presentations define the same map, decided on the common
/// promoted range: sliding codes agree on X iff their tables agree on
/// every occurring window.
pub fn equals(a: &Automorphism, b: &Automorphism, oracle: &LanguageOracle) -> Result<bool> {
    let s = a.range().max(b.range());
    let ta = promote_rule(&a.forward, s, oracle)?;
    let tb = promote_rule(&b.forward, s, oracle)?;
    Ok(ta.table == tb.table)
}

/// Least range the table factors through, with the reduced table.
pub fn reduce_to_minimal(
    rule: &LocalRule,
    oracle: &LanguageOracle,
) -> Result<(usize, BTreeMap<Word, Symbol>)> {
    'outer: for s in 0..rule.range {
        let pad = rule.range - s;
        let mut reduced: BTreeMap<Word, Symbol> = BTreeMap::new();
        for (w, &sym) in &rule.table {
            let center = Word::from_symbols(w.slice(pad, 2 * s + 1).to_vec());
            if let Some(&prev) = reduced.get(&center) {
                if prev != sym {
                    continue 'outer;
                }
            } else {
                reduced.insert(center, sym);
            }
        }
        // Every window of the reduced length occurs as a center, because
        // table keys are exactly the certified windows.
        debug_assert_eq!(reduced.len(), oracle.factors(2 * s + 1)?.len());
        return Ok((s, reduced));
    }
    Ok((rule.range, rule.table.clone()))
}

/// Least range of the automorphism's forward rule.
pub fn minimal_range(a: &Automorphism, oracle: &LanguageOracle) -> Result<usize> {
    Ok(reduce_to_minimal(&a.forward, oracle)?.0)
}

/// Outcome of the image-containment check.
#[derive(Debug, Clone)]
pub enum EndoVerdict {
    Accepted(Endomorphism),
    /// The shortest certified word whose image leaves the language.
    Rejected { witness: Word },
}

/// Verifies that rule images of every certified word of length <= depth
/// land in the language, recording the depth on acceptance.
///
/// Images of subwords are subwords of images, and every certified word
/// extends to length `depth`, so the check at the single length `depth`
/// covers all shorter lengths; the upward scan only runs to locate the
/// shortest witness after a failure.
pub fn is_endomorphism(
    rule: &LocalRule,
    oracle: &LanguageOracle,
    depth: usize,
) -> Result<EndoVerdict> {
    let wl = rule.window_len();
    if depth < wl {
        return Err(Error::Precondition(format!(
            "verification depth {depth} below window length {wl}"
        )));
    }
    oracle.require_length(depth)?;
    let ok_at = |n: usize| -> Result<Option<Word>> {
        let image_set = oracle.factors(n - 2 * rule.range)?;
        for w in oracle.factors(n)? {
            let image = rule.apply(w)?;
            if !image_set.contains(&image) {
                return Ok(Some(w.clone()));
            }
        }
        Ok(None)
    };
    if ok_at(depth)?.is_none() {
        return Ok(EndoVerdict::Accepted(Endomorphism { rule: rule.clone(), verified_depth: depth }));
    }
    for n in wl + 1..=depth {
        if let Some(witness) = ok_at(n)? {
            return Ok(EndoVerdict::Rejected { witness });
        }
    }
    unreachable!("failure at full depth implies a witness at some length");
}

/// Searches for an inverse of range at most `r_inv`.
///
/// The candidate table at each range r is forced: g(e(w)) must return the
/// center of w for every certified w, so entries are read off rather than
/// enumerated; a conflict, a gap, or a failed verification rules the
/// range out.
pub fn find_inverse(
    e: &Endomorphism,
    oracle: &LanguageOracle,
    r_inv: usize,
) -> Result<Option<Automorphism>> {
    let big_r = e.range();
    let depth_limit = oracle.stabilized_to();
    let mut searched_all = true;
    for r in 0..=r_inv {
        let needed = 2 * r + 2 * big_r + 1;
        if needed > depth_limit {
            searched_all = false;
            break;
        }
        let mut table: BTreeMap<Word, Symbol> = BTreeMap::new();
        let mut conflict = false;
        for w in oracle.factors(needed)? {
            let image = e.rule.apply(w)?;
            let center = w.at(r + big_r);
            match table.get(image.symbols()) {
                Some(&prev) if prev != center => {
                    conflict = true;
                    break;
                }
                Some(_) => {}
                None => {
                    table.insert(image, center);
                }
            }
        }
        if conflict {
            continue;
        }
        if table.len() != oracle.factors(2 * r + 1)?.len() {
            continue;
        }
        let g = LocalRule::new_unchecked(r, table);
        let m_check = e.verified_depth.max(2 * r + 1).min(depth_limit);
        let EndoVerdict::Accepted(_) = is_endomorphism(&g, oracle, m_check)? else {
            continue;
        };
        let ge = compose_rules(&g, &e.rule, oracle)?;
        let eg = compose_rules(&e.rule, &g, oracle)?;
        if !rule_is_identity(&ge) || !rule_is_identity(&eg) {
            continue;
        }
        let inverse = promote_rule(&g, big_r, oracle)?;
        let depth = e.verified_depth.min(m_check);
        return Ok(Some(Automorphism::new_unchecked(e.rule.clone(), inverse, depth)));
    }
    if searched_all {
        Ok(None)
    } else {
        Err(Error::RangeCapExceeded {
            range: r_inv,
            needed: 2 * r_inv + 2 * big_r + 1,
            available: depth_limit,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationMode {
    /// All |A|^P(2R+1) total tables, subject to the candidate cap.
    Exhaustive,
    /// Candidates are read off from the possible images of one long
    /// certified factor containing every window, so language constraints
    /// prune the table space before verification.
    ConstraintPropagation,
}

#[derive(Debug, Clone)]
pub struct EnumerationOptions {
    /// Verification depth; defaults to max(4R+2, 2R+1 + 2 * K) with K the
    /// worst single-letter return gap.
    pub depth: Option<usize>,
    pub mode: EnumerationMode,
    pub candidate_cap: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { depth: None, mode: EnumerationMode::Exhaustive, candidate_cap: 1 << 20 }
    }
}

/// Default verification depth for range r codes; errors if the certified
/// range cannot host it.
pub fn default_verification_depth(oracle: &LanguageOracle, r: usize) -> Result<usize> {
    let mut kappa = 1usize;
    for letter in oracle.factors(1)? {
        kappa = kappa.max(max_return_gap(oracle, letter)?.k_w);
    }
    let depth = (4 * r + 2).max(2 * r + 1 + 2 * kappa);
    oracle.require_length(depth)?;
    Ok(depth)
}

/// All of Aut_R(X) to the verification depth: every total rule on the
/// certified windows that maps the language into itself and admits an
/// inverse of range at most R. Returned in canonical table order.
pub fn enumerate_automorphisms(
    oracle: &LanguageOracle,
    r: usize,
    opts: &EnumerationOptions,
) -> Result<Vec<Automorphism>> {
    let depth = match opts.depth {
        Some(d) => {
            if d < 2 * r + 1 {
                return Err(Error::Precondition(format!(
                    "depth {d} below window length {}",
                    2 * r + 1
                )));
            }
            oracle.require_length(d)?;
            d
        }
        None => default_verification_depth(oracle, r)?,
    };
    let candidates = match opts.mode {
        EnumerationMode::Exhaustive => exhaustive_candidates(oracle, r, opts.candidate_cap)?,
        EnumerationMode::ConstraintPropagation => anchored_candidates(oracle, r)?,
    };
    let mut found = Vec::new();
    for rule in candidates {
        let EndoVerdict::Accepted(endo) = is_endomorphism(&rule, oracle, depth)? else {
            continue;
        };
        if let Some(aut) = find_inverse(&endo, oracle, r)? {
            found.push(aut);
        }
    }
    found.sort();
    debug_assert!(enumeration_sane(oracle, r, &found));
    Ok(found)
}

fn exhaustive_candidates(
    oracle: &LanguageOracle,
    r: usize,
    cap: u64,
) -> Result<Vec<LocalRule>> {
    let windows: Vec<Word> = oracle.factors(2 * r + 1)?.iter().cloned().collect();
    let k = oracle.alphabet().len() as u64;
    let p = windows.len() as u32;
    let estimate = (k as f64).powi(p as i32);
    let total = k.checked_pow(p).filter(|&t| t <= cap);
    let Some(total) = total else {
        return Err(Error::CandidateCapExceeded { estimate, cap });
    };
    let mut out = Vec::with_capacity(total as usize);
    let mut assignment = vec![0u8; windows.len()];
    loop {
        let table: BTreeMap<Word, Symbol> =
            windows.iter().cloned().zip(assignment.iter().copied()).collect();
        out.push(LocalRule::new_unchecked(r, table));
        let mut i = 0;
        loop {
            if i == assignment.len() {
                return Ok(out);
            }
            assignment[i] += 1;
            if u64::from(assignment[i]) < k {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

fn anchored_candidates(oracle: &LanguageOracle, r: usize) -> Result<Vec<LocalRule>> {
    let wl = 2 * r + 1;
    let windows = oracle.factors(wl)?;
    let top = oracle.stabilized_to();
    if top < wl + 2 * r {
        return Err(Error::RangeCapExceeded { range: r, needed: wl + 2 * r, available: top });
    }
    let anchor = oracle
        .factors(top)?
        .iter()
        .find(|w| {
            let seen: BTreeSet<&[Symbol]> = (0..=w.len() - wl).map(|i| w.slice(i, wl)).collect();
            seen.len() == windows.len()
        })
        .cloned()
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no certified factor of length {top} contains every window of length {wl}; \
                 deepen the oracle"
            ))
        })?;
    let mut out = Vec::new();
    'image: for u in oracle.factors(top - 2 * r)? {
        let mut table: BTreeMap<Word, Symbol> = BTreeMap::new();
        for i in 0..=anchor.len() - wl {
            let window = anchor.slice(i, wl);
            let sym = u.at(i);
            match table.get(window) {
                Some(&prev) if prev != sym => continue 'image,
                Some(_) => {}
                None => {
                    table.insert(Word::from_symbols(window.to_vec()), sym);
                }
            }
        }
        debug_assert_eq!(table.len(), windows.len());
        out.push(LocalRule::new_unchecked(r, table));
    }
    Ok(out)
}

#[cfg(debug_assertions)]
fn enumeration_sane(oracle: &LanguageOracle, r: usize, found: &[Automorphism]) -> bool {
    let tables: BTreeSet<&BTreeMap<Word, Symbol>> =
        found.iter().map(|a| &a.forward.table).collect();
    if tables.len() != found.len() {
        return false;
    }
    // Closed under inverse, and contains every shift power |j| <= r.
    for a in found {
        if !tables.contains(&a.inverse.table) {
            return false;
        }
    }
    for j in -(r as i64)..=r as i64 {
        let Ok(s) = shift_power(oracle, j) else { return false };
        let Ok(p) = promote_rule(&s.forward, r, oracle) else { return false };
        if !tables.contains(&p.table) {
            return false;
        }
    }
    true
}

#[cfg(not(debug_assertions))]
fn enumeration_sane(_oracle: &LanguageOracle, _r: usize, _found: &[Automorphism]) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::build_oracle;
    use crate::subshift::SubshiftSpec;

    fn fibonacci(target: usize) -> LanguageOracle {
        let spec = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "0")]).unwrap();
        build_oracle(&spec, target).unwrap()
    }

    fn thue_morse(target: usize) -> LanguageOracle {
        let spec = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "10")]).unwrap();
        build_oracle(&spec, target).unwrap()
    }

    /// The letter exchange 0 <-> 1 as a range-0 rule.
    fn exchange_rule(oracle: &LanguageOracle) -> LocalRule {
        let table = oracle
            .factors(1)
            .unwrap()
            .iter()
            .map(|w| (w.clone(), 1 - w.at(0)))
            .collect();
        LocalRule::new(0, table, oracle).unwrap()
    }

    #[test]
    fn shift_acts_on_words() {
        let o = thue_morse(20);
        let sigma = shift_power(&o, 1).unwrap();
        let w = o.parse("0110").unwrap();
        assert_eq!(o.format(&sigma.apply_to_word(&w, &o).unwrap()), "10");

        let id = identity(&o).unwrap();
        assert_eq!(o.format(&id.apply_to_word(&w, &o).unwrap()), "0110");
    }

    #[test]
    fn exchange_is_thue_morse_automorphism() {
        let o = thue_morse(20);
        let rule = exchange_rule(&o);
        let EndoVerdict::Accepted(endo) = is_endomorphism(&rule, &o, 12).unwrap() else {
            panic!("exchange rejected");
        };
        let aut = find_inverse(&endo, &o, 0).unwrap().expect("exchange is self-inverse");
        assert_eq!(aut.range(), 0);
        assert_eq!(aut.forward(), aut.inverse());
        let w = o.parse("0110").unwrap();
        assert_eq!(o.format(&aut.apply_to_word(&w, &o).unwrap()), "1001");
    }

    #[test]
    fn constant_rule_rejected_with_shortest_witness() {
        let o = fibonacci(20);
        let table = o.factors(1).unwrap().iter().map(|w| (w.clone(), 1u8)).collect();
        let rule = LocalRule::new(0, table, &o).unwrap();
        match is_endomorphism(&rule, &o, 10).unwrap() {
            EndoVerdict::Rejected { witness } => {
                // Shortest violation: any 2-letter factor maps to 11.
                assert_eq!(witness.len(), 2);
                assert_eq!(o.format(&witness), "00");
            }
            EndoVerdict::Accepted(_) => panic!("constant rule accepted"),
        }
    }

    #[test]
    fn promotion_preserves_the_map() {
        let o = fibonacci(20);
        let id = identity(&o).unwrap();
        let promoted = promote_range(&id, 2, &o).unwrap();
        let w = o.parse("01001").unwrap();
        assert_eq!(o.format(&promoted.apply_to_word(&w, &o).unwrap()), "0");
        assert!(equals(&id, &promoted, &o).unwrap());

        let sigma = shift_power(&o, 1).unwrap();
        let sigma2 = promote_range(&sigma, 2, &o).unwrap();
        assert!(equals(&sigma, &sigma2, &o).unwrap());
        let double = promote_range(&promote_range(&id, 1, &o).unwrap(), 2, &o).unwrap();
        assert_eq!(double.forward(), promoted.forward());
    }

    #[test]
    fn composition_bookkeeping() {
        let o = fibonacci(30);
        let sigma = shift_power(&o, 1).unwrap();
        let sigma_inv = shift_power(&o, -1).unwrap();

        let two = compose(&sigma, &sigma, &o).unwrap();
        assert_eq!(two.range(), 2);
        assert!(equals(&two, &shift_power(&o, 2).unwrap(), &o).unwrap());

        let back = compose(&sigma, &sigma_inv, &o).unwrap();
        assert_eq!(back.range(), 2);
        assert!(equals(&back, &identity(&o).unwrap(), &o).unwrap());

        // n-fold composition keeps range nR exactly.
        let mut acc = sigma.clone();
        for _ in 0..3 {
            acc = compose(&acc, &sigma, &o).unwrap();
        }
        assert_eq!(acc.range(), 4);
    }

    #[test]
    fn composition_application_homomorphism() {
        let o = thue_morse(30);
        let sigma = shift_power(&o, 1).unwrap();
        let exch = {
            let rule = exchange_rule(&o);
            let EndoVerdict::Accepted(e) = is_endomorphism(&rule, &o, 12).unwrap() else {
                panic!()
            };
            find_inverse(&e, &o, 0).unwrap().unwrap()
        };
        let comp = compose(&sigma, &exch, &o).unwrap();
        for w in o.factors(9).unwrap() {
            let direct = comp.apply_to_word(w, &o).unwrap();
            let stepwise =
                sigma.apply_to_word(&exch.apply_to_word(w, &o).unwrap(), &o).unwrap();
            assert_eq!(direct, stepwise);
        }
    }

    #[test]
    fn minimal_range_reduction() {
        let o = fibonacci(20);
        let sigma = shift_power(&o, 1).unwrap();
        let promoted = promote_range(&sigma, 3, &o).unwrap();
        assert_eq!(minimal_range(&promoted, &o).unwrap(), 1);
        assert_eq!(minimal_range(&identity(&o).unwrap(), &o).unwrap(), 0);
    }

    #[test]
    fn enumerate_fibonacci_r1() {
        let o = fibonacci(40);
        let auts = enumerate_automorphisms(&o, 1, &EnumerationOptions::default()).unwrap();
        assert_eq!(auts.len(), 3);
        let sigma = shift_power(&o, 1).unwrap();
        let sigma_inv = shift_power(&o, -1).unwrap();
        let id = identity(&o).unwrap();
        for expected in [&sigma, &sigma_inv, &id] {
            assert!(auts.iter().any(|a| equals(a, expected, &o).unwrap()));
        }
    }

    #[test]
    fn enumerate_thue_morse_r0_and_r1() {
        let o = thue_morse(40);
        let auts0 = enumerate_automorphisms(&o, 0, &EnumerationOptions::default()).unwrap();
        assert_eq!(auts0.len(), 2);
        let auts1 = enumerate_automorphisms(&o, 1, &EnumerationOptions::default()).unwrap();
        assert_eq!(auts1.len(), 6);
    }

    #[test]
    fn enumeration_modes_agree() {
        let o = thue_morse(40);
        let ex = enumerate_automorphisms(&o, 1, &EnumerationOptions::default()).unwrap();
        let cp = enumerate_automorphisms(
            &o,
            1,
            &EnumerationOptions {
                mode: EnumerationMode::ConstraintPropagation,
                ..EnumerationOptions::default()
            },
        )
        .unwrap();
        assert_eq!(ex, cp);
    }

    #[test]
    fn candidate_cap_reports_estimate() {
        let o = thue_morse(40);
        let err = enumerate_automorphisms(
            &o,
            1,
            &EnumerationOptions { candidate_cap: 10, ..EnumerationOptions::default() },
        )
        .unwrap_err();
        match err {
            Error::CandidateCapExceeded { estimate, cap } => {
                assert_eq!(cap, 10);
                assert_eq!(estimate, 64.0); // 2^P(3) = 2^6
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_injective_endomorphism_has_no_inverse() {
        // XOR of adjacent cells on the full 2-shift: a 2-to-1 code.
        let mut sample = String::new();
        for i in 0u32..1 << 10 {
            sample.push(if (i.count_ones() + (i >> 1).count_ones()) % 2 == 0 { '0' } else { '1' });
        }
        // Use a de Bruijn-free explicit full-shift sample instead: all
        // windows of length <= 8 occur in a long enough random-ish string;
        // simplest is to concatenate all 8-bit patterns.
        let mut full = String::new();
        for i in 0u32..256 {
            for b in (0..8).rev() {
                full.push(if (i >> b) & 1 == 1 { '1' } else { '0' });
            }
        }
        drop(sample);
        let spec = SubshiftSpec::explicit(&full, 8).unwrap();
        let o = build_oracle(&spec, 8).unwrap();
        assert_eq!(o.complexity(8).unwrap(), 256);
        let table = o
            .factors(3)
            .unwrap()
            .iter()
            .map(|w| (w.clone(), w.at(0) ^ w.at(1)))
            .collect();
        let rule = LocalRule::new(1, table, &o).unwrap();
        let EndoVerdict::Accepted(endo) = is_endomorphism(&rule, &o, 8).unwrap() else {
            panic!("xor rule maps the full shift into itself");
        };
        assert!(find_inverse(&endo, &o, 2).unwrap().is_none());
    }

    #[test]
    fn embedding_into_next_range() {
        let o = thue_morse(40);
        let auts0 = enumerate_automorphisms(&o, 0, &EnumerationOptions::default()).unwrap();
        let auts1 = enumerate_automorphisms(&o, 1, &EnumerationOptions::default()).unwrap();
        for a in &auts0 {
            let promoted = promote_range(a, 1, &o).unwrap();
            assert!(auts1.iter().any(|b| b.forward() == promoted.forward()));
        }
    }
}
