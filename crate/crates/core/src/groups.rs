//! Return words, cylinder actions, and the finite groups they generate;
//! marked (uniquely extendable) words and the coset partition they induce
//! on an automorphism slice.
//!
//! The finite group attached to a word w is represented by the faithful
//! action of its elements on the return-word set U_w = { u : wuw occurs,
//! |u| <= K_w }: composition is mapping composition, which keeps every
//! computation finite and exact.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::codes::{compose, equals, promote_range, Automorphism};
use crate::error::{Error, Result};
use crate::language::{detect_eventual_periodicity, LanguageOracle};
use crate::words::Word;

/// Return-word data of a factor w: the maximal gap K_w between
/// consecutive occurrences, and the set U_w.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnData {
    pub word: Word,
    pub k_w: usize,
    pub return_words: BTreeSet<Word>,
}

/// K_w and U_w, certified from the factor sets: K_w is read off from the
/// longest certified factor avoiding w (a window avoiding w fits strictly
/// between two consecutive occurrences, so the maximal avoiding length is
/// exactly K_w + |w| - 2). If a factor of the deepest certified length
/// still avoids w, the gap statistics are not certified and an error
/// reports the achieved depth.
pub fn max_return_gap(oracle: &LanguageOracle, w: &Word) -> Result<ReturnData> {
    if !oracle.contains(w)? {
        return Err(Error::NotInLanguage { word: oracle.format(w) });
    }
    let top = oracle.stabilized_to();
    let mut all_contain_at: Option<usize> = None;
    for len in w.len()..=top {
        let avoider = oracle.factors(len)?.iter().any(|f| !f.contains_word(w));
        if !avoider {
            all_contain_at = Some(len);
            break;
        }
    }
    let Some(first_full) = all_contain_at else {
        return Err(Error::ReturnGapUncertified { word: oracle.format(w), achieved: top });
    };
    // Max avoiding length is first_full - 1 (lengths below |w| avoid
    // trivially and correspond to K_w = 1).
    let max_avoid = first_full - 1;
    let k_w = (max_avoid + 2).saturating_sub(w.len()).max(1);

    let mut return_words = BTreeSet::new();
    for k in 0..=k_w {
        let total = 2 * w.len() + k;
        if total > top {
            return Err(Error::OutOfCertifiedRange { requested: total, achieved: top });
        }
        for f in oracle.factors(total)? {
            if f.starts_with(w) && f.ends_with(w) {
                return_words.insert(f.subword(w.len(), k));
            }
        }
    }
    Ok(ReturnData { word: w.clone(), k_w, return_words })
}

/// The action of a stabilizing automorphism on the return words of w:
/// u maps to the v with phi[wuw] contained in [wvw].
#[derive(Debug, Clone)]
pub struct CylinderAction {
    pub mapping: BTreeMap<Word, Word>,
    /// Index of the source automorphism in the list it was computed from.
    pub source: Option<usize>,
}

impl PartialEq for CylinderAction {
    fn eq(&self, other: &Self) -> bool {
        self.mapping == other.mapping
    }
}

impl Eq for CylinderAction {}

impl PartialOrd for CylinderAction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CylinderAction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mapping.cmp(&other.mapping)
    }
}

impl CylinderAction {
    pub fn identity(rd: &ReturnData) -> CylinderAction {
        CylinderAction {
            mapping: rd.return_words.iter().map(|u| (u.clone(), u.clone())).collect(),
            source: None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().all(|(u, v)| u == v)
    }

    pub fn is_bijective(&self) -> bool {
        let values: BTreeSet<&Word> = self.mapping.values().collect();
        values.len() == self.mapping.len()
            && self.mapping.values().all(|v| self.mapping.contains_key(v))
    }

    /// (self after other)(u) = self(other(u)).
    pub fn compose(&self, other: &CylinderAction) -> Result<CylinderAction> {
        let mut mapping = BTreeMap::new();
        for (u, mid) in &other.mapping {
            let v = self.mapping.get(mid).ok_or_else(|| {
                Error::Falsified(format!("cylinder action image {mid} left the return-word set"))
            })?;
            mapping.insert(u.clone(), v.clone());
        }
        Ok(CylinderAction { mapping, source: None })
    }

    pub fn inverse(&self) -> Result<CylinderAction> {
        if !self.is_bijective() {
            return Err(Error::Falsified("cylinder action is not a bijection".into()));
        }
        Ok(CylinderAction {
            mapping: self.mapping.iter().map(|(u, v)| (v.clone(), u.clone())).collect(),
            source: None,
        })
    }

    /// Multiplicative order as a permutation of the return words.
    pub fn order(&self) -> Result<u64> {
        if !self.is_bijective() {
            return Err(Error::Falsified("cylinder action is not a bijection".into()));
        }
        let keys: Vec<&Word> = self.mapping.keys().collect();
        let index: BTreeMap<&Word, usize> = keys.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let perm: Vec<usize> = keys.iter().map(|k| index[&self.mapping[*k]]).collect();
        let mut seen = vec![false; perm.len()];
        let mut order: u64 = 1;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            order = lcm(order, len);
        }
        Ok(order)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Computes the action of phi on the return words of `rd`, checking that
/// the result does not depend on the ambient padding: every certified
/// context of wuw must produce the same v.
pub fn cylinder_action(
    phi: &Automorphism,
    rd: &ReturnData,
    oracle: &LanguageOracle,
) -> Result<CylinderAction> {
    let w = &rd.word;
    let rho = phi.range();
    if rho > w.len() / 2 {
        return Err(Error::Precondition(format!(
            "stabilizer range {rho} exceeds floor(|w|/2) = {}",
            w.len() / 2
        )));
    }
    let mut mapping = BTreeMap::new();
    for u in &rd.return_words {
        let target = w.concat(u).concat(w);
        let ctx_len = target.len() + 2 * rho;
        let mut image_v: Option<Word> = None;
        for ctx in oracle.factors(ctx_len)? {
            if ctx.slice(rho, target.len()) != target.symbols() {
                continue;
            }
            let image = phi.apply_raw(ctx)?;
            if !(image.starts_with(w) && image.ends_with(w)) {
                return Err(Error::Precondition(format!(
                    "automorphism does not stabilize [{}]: image of a {} context is {}",
                    oracle.format(w),
                    oracle.format(&target),
                    oracle.format(&image),
                )));
            }
            let v = image.subword(w.len(), u.len());
            match &image_v {
                None => image_v = Some(v),
                Some(prev) if *prev != v => {
                    return Err(Error::PaddingDependence {
                        word: oracle.format(u),
                        first: oracle.format(prev),
                        second: oracle.format(&v),
                    });
                }
                Some(_) => {}
            }
        }
        let v = image_v.ok_or_else(|| {
            Error::Certification(format!(
                "no certified context of length {ctx_len} around {}",
                oracle.format(&target)
            ))
        })?;
        if !rd.return_words.contains(&v) {
            return Err(Error::Falsified(format!(
                "image return word {} is not in the return-word set",
                oracle.format(&v)
            )));
        }
        mapping.insert(u.clone(), v);
    }
    let action = CylinderAction { mapping, source: None };
    if !action.is_bijective() {
        return Err(Error::Falsified(
            "cylinder action of a stabilizing automorphism is not a bijection".into(),
        ));
    }
    Ok(action)
}

/// A finite group of cylinder actions on a common return-word set,
/// closed under composition and inverse.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub word: Word,
    pub elements: Vec<CylinderAction>,
    pub generators: Vec<CylinderAction>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Closure of the generated group, by breadth-first products; termination
/// is guaranteed by finiteness of the action space, the cap only guards
/// against uncertified inputs.
pub fn group_closure(
    word: &Word,
    generators: &[CylinderAction],
    cap: usize,
) -> Result<FiniteGroup> {
    let mut domain: Option<BTreeSet<&Word>> = None;
    for g in generators {
        let keys: BTreeSet<&Word> = g.mapping.keys().collect();
        match &domain {
            None => domain = Some(keys),
            Some(d) if *d != keys => {
                return Err(Error::Precondition(
                    "generator actions act on different return-word sets".into(),
                ))
            }
            Some(_) => {}
        }
        if !g.is_bijective() {
            return Err(Error::Falsified("generator action is not a bijection".into()));
        }
    }
    let identity = match generators.first() {
        Some(g) => CylinderAction {
            mapping: g.mapping.keys().map(|u| (u.clone(), u.clone())).collect(),
            source: None,
        },
        None => CylinderAction { mapping: BTreeMap::new(), source: None },
    };
    let mut step: Vec<CylinderAction> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        step.push(g.clone());
        step.push(g.inverse()?);
    }
    let mut elements: BTreeSet<CylinderAction> = BTreeSet::new();
    elements.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(cur) = frontier.pop() {
        for g in &step {
            let next = g.compose(&cur)?;
            if elements.insert(next.clone()) {
                if elements.len() > cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                frontier.push(next);
            }
        }
    }
    Ok(FiniteGroup {
        word: word.clone(),
        elements: elements.into_iter().collect(),
        generators: generators.to_vec(),
    })
}

/// Exponent of prime p in m! (Legendre's formula).
fn legendre(m: u64, p: u64) -> u64 {
    let mut total = 0u64;
    let mut q = p;
    while q <= m {
        total += m / q;
        if q > m / p {
            break;
        }
        q *= p;
    }
    total
}

/// Whether `order` divides m!, via the factorization of the order against
/// prime multiplicities of the factorial; m! itself is never materialized.
pub fn order_divides_factorial(order: u64, m: u64) -> bool {
    let mut rest = order;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0u64;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if legendre(m, p) < e {
                return false;
            }
        }
        p += 1;
    }
    if rest > 1 && legendre(m, rest) < 1 {
        return false;
    }
    true
}

/// The order-divisibility law: the cylinder action of a stabilizing
/// automorphism, raised to P(K_w)!, is the identity; checked through the
/// order of the finite action.
pub fn order_divisibility_check(
    phi: &Automorphism,
    rd: &ReturnData,
    oracle: &LanguageOracle,
) -> Result<bool> {
    let action = cylinder_action(phi, rd, oracle)?;
    let p_kw = oracle.complexity(rd.k_w)?;
    Ok(order_divides_factorial(action.order()?, p_kw))
}

/// The automorphisms among `auts` that map the cylinder [w] into itself.
/// The result is closed under inverse (a falsification otherwise).
pub fn stabilizer_generators(
    oracle: &LanguageOracle,
    w: &Word,
    auts: &[Automorphism],
) -> Result<Vec<Automorphism>> {
    for a in auts {
        if a.range() > w.len() / 2 {
            return Err(Error::Precondition(format!(
                "automorphism of range {} offered for stabilizer of a length-{} word",
                a.range(),
                w.len()
            )));
        }
    }
    let mut sel = Vec::new();
    for a in auts {
        if fixes_cylinder(a, w, oracle)? {
            sel.push(a.clone());
        }
    }
    for a in &sel {
        let inv = a.inverted();
        let mut found = false;
        for b in &sel {
            if equals(&inv, b, oracle)? {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Falsified(format!(
                "stabilizer of {} is not closed under inverse",
                oracle.format(w)
            )));
        }
    }
    Ok(sel)
}

/// phi[w] is contained in [w]: every certified context with w centered
/// maps onto w again.
pub fn fixes_cylinder(phi: &Automorphism, w: &Word, oracle: &LanguageOracle) -> Result<bool> {
    let rho = phi.range();
    let ctx_len = w.len() + 2 * rho;
    oracle.require_length(ctx_len)?;
    let mut seen = false;
    for ctx in oracle.factors(ctx_len)? {
        if ctx.slice(rho, w.len()) != w.symbols() {
            continue;
        }
        seen = true;
        if phi.apply_raw(ctx)? != *w {
            return Ok(false);
        }
    }
    if !seen {
        return Err(Error::NotInLanguage { word: oracle.format(w) });
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkedMode {
    /// Extend 2R letters per side.
    Step1,
    /// Extend 6R letters per side.
    Step2,
}

impl MarkedMode {
    pub fn per_side(self, r: usize) -> usize {
        match self {
            MarkedMode::Step1 => 2 * r,
            MarkedMode::Step2 => 6 * r,
        }
    }
}

/// A word with certified unique two-sided extensions, together with the
/// extended word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedWord {
    pub core: Word,
    pub r: usize,
    pub per_side: usize,
    pub extended: Word,
}

/// Finds the shortlex-least word that extends uniquely `per_side` times
/// on both sides and extends it; excluded on eventually periodic
/// languages, where every word extends uniquely forever.
pub fn build_marked_word(
    oracle: &LanguageOracle,
    r: usize,
    mode: MarkedMode,
) -> Result<MarkedWord> {
    if r == 0 {
        return Err(Error::Precondition("marked words need range r >= 1".into()));
    }
    let profile = oracle.complexity_series(oracle.stabilized_to())?;
    if let Some(flagged_at) = detect_eventual_periodicity(&profile) {
        return Err(Error::PeriodicUndefined { flagged_at });
    }
    let e = mode.per_side(r);
    let mut best = 0usize;
    for n in 1..=oracle.stabilized_to() {
        if n + 2 * e > oracle.stabilized_to() {
            break;
        }
        for w in oracle.factors(n)? {
            let (okr, right) = walk_exact(oracle, w, e, true)?;
            if !okr {
                best = best.max(right.len() - n);
                continue;
            }
            let (okl, both) = walk_exact(oracle, &right, e, false)?;
            if !okl {
                best = best.max(e.min(both.len() - right.len()));
                continue;
            }
            let extended = both;
            debug_assert_eq!(extended.len(), n + 2 * e);
            certify_center_uniqueness(oracle, w, &extended)?;
            return Ok(MarkedWord { core: w.clone(), r, per_side: e, extended });
        }
    }
    Err(Error::MarkedWordNotFound { best, needed: e })
}

/// Extends a given core word by the mode's forced letters on both sides,
/// with the same certification as the scanning constructor.
pub fn marked_word_for(
    oracle: &LanguageOracle,
    core: &Word,
    r: usize,
    mode: MarkedMode,
) -> Result<MarkedWord> {
    if r == 0 {
        return Err(Error::Precondition("marked words need range r >= 1".into()));
    }
    if !oracle.contains(core)? {
        return Err(Error::NotInLanguage { word: oracle.format(core) });
    }
    let e = mode.per_side(r);
    oracle.require_length(core.len() + 2 * e)?;
    let (okr, right) = walk_exact(oracle, core, e, true)?;
    if !okr {
        return Err(Error::MarkedWordNotFound { best: right.len() - core.len(), needed: e });
    }
    let (okl, extended) = walk_exact(oracle, &right, e, false)?;
    if !okl {
        return Err(Error::MarkedWordNotFound {
            best: e.min(extended.len() - right.len()),
            needed: e,
        });
    }
    certify_center_uniqueness(oracle, core, &extended)?;
    Ok(MarkedWord { core: core.clone(), r, per_side: e, extended })
}

/// Extends `w` by exactly `steps` forced letters; fails early at a branch.
fn walk_exact(
    oracle: &LanguageOracle,
    w: &Word,
    steps: usize,
    to_right: bool,
) -> Result<(bool, Word)> {
    let mut cur = w.clone();
    for _ in 0..steps {
        let exts =
            if to_right { oracle.right_extensions(&cur)? } else { oracle.left_extensions(&cur)? };
        if exts.len() != 1 {
            return Ok((false, cur));
        }
        cur = if to_right { cur.pushed(exts[0]) } else { cur.prepended(exts[0]) };
    }
    Ok((true, cur))
}

/// The certificate behind the marked word: among certified words of the
/// extended length, exactly one has the core centered.
fn certify_center_uniqueness(
    oracle: &LanguageOracle,
    core: &Word,
    extended: &Word,
) -> Result<()> {
    let pad = (extended.len() - core.len()) / 2;
    let mut count = 0usize;
    for f in oracle.factors(extended.len())? {
        if f.slice(pad, core.len()) == core.symbols() {
            count += 1;
            if f != extended {
                return Err(Error::Falsified(format!(
                    "two distinct extensions center {}: {} and {}",
                    oracle.format(core),
                    oracle.format(extended),
                    oracle.format(f),
                )));
            }
        }
    }
    if count != 1 {
        return Err(Error::Falsified(format!(
            "expected exactly one centered extension of {}, found {count}",
            oracle.format(core)
        )));
    }
    Ok(())
}

/// Both partitions of an automorphism slice: by image of the marked word
/// and by left coset of the stabilizer group. Classes hold indices into
/// the input list.
#[derive(Debug, Clone)]
pub struct PartitionReport {
    pub by_image: Vec<Vec<usize>>,
    pub by_coset: Vec<Vec<usize>>,
    pub image_words: Vec<Word>,
    pub equal: bool,
    pub aut_count: usize,
    pub group_order: usize,
    /// |Aut_R| <= (number of image classes) * |G|.
    pub product_bound_ok: bool,
}

/// The coset condition: two automorphisms lie in the same left coset of
/// the marked word's stabilizer group exactly when their images of the
/// marked word agree.
///
/// Same-coset is decided computationally: phi1^{-1} phi2 has range 2R <=
/// floor(|w~|/2), so membership in the generating set of the stabilizer
/// group (hence in the group) reduces to the cylinder-fixing check.
pub fn coset_condition_check(
    auts: &[Automorphism],
    marked: &MarkedWord,
    group: &FiniteGroup,
    oracle: &LanguageOracle,
) -> Result<PartitionReport> {
    if auts.is_empty() {
        return Err(Error::Precondition("empty automorphism list".into()));
    }
    let r = auts.iter().map(|a| a.range()).max().unwrap();
    if r > marked.extended.len() / 4 {
        return Err(Error::Precondition(format!(
            "range {r} exceeds floor(|w~|/4) = {}",
            marked.extended.len() / 4
        )));
    }
    let promoted: Vec<Automorphism> =
        auts.iter().map(|a| promote_range(a, r, oracle)).collect::<Result<Vec<_>>>()?;

    let mut by_image: Vec<Vec<usize>> = Vec::new();
    let mut image_words: Vec<Word> = Vec::new();
    for (i, a) in promoted.iter().enumerate() {
        let img = a.apply_raw(&marked.extended)?;
        match image_words.iter().position(|w| *w == img) {
            Some(c) => by_image[c].push(i),
            None => {
                image_words.push(img);
                by_image.push(vec![i]);
            }
        }
    }

    let mut by_coset: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for (i, a) in promoted.iter().enumerate() {
        let mut placed = false;
        for (c, &rep) in reps.iter().enumerate() {
            let psi = compose(&promoted[rep].inverted(), a, oracle)?;
            if fixes_cylinder(&psi, &marked.extended, oracle)? {
                by_coset[c].push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            reps.push(i);
            by_coset.push(vec![i]);
        }
    }

    let norm = |classes: &[Vec<usize>]| {
        let mut v: Vec<Vec<usize>> = classes.to_vec();
        for c in &mut v {
            c.sort_unstable();
        }
        v.sort();
        v
    };
    let equal = norm(&by_image) == norm(&by_coset);
    let product_bound_ok = auts.len() <= by_image.len() * group.order().max(1);
    Ok(PartitionReport {
        by_image,
        by_coset,
        image_words,
        equal,
        aut_count: auts.len(),
        group_order: group.order(),
        product_bound_ok,
    })
}

/// f(n) of the coset-growth estimate: the number of distinct images of
/// the (step-2) marked word under Aut_n embedded at range 3R.
pub fn coset_count_f(
    oracle: &LanguageOracle,
    marked: &MarkedWord,
    auts_n: &[Automorphism],
) -> Result<usize> {
    let three_r = 3 * marked.r;
    let mut images: BTreeSet<Word> = BTreeSet::new();
    for a in auts_n {
        if a.range() > three_r {
            return Err(Error::Precondition(format!(
                "automorphism of range {} beyond the 3R = {three_r} embedding",
                a.range()
            )));
        }
        let p = promote_range(a, three_r, oracle)?;
        images.insert(p.apply_raw(&marked.extended)?);
    }
    Ok(images.len())
}

#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub injective: bool,
    pub witness: Option<(usize, usize)>,
    pub count: usize,
    pub complexity_bound: u64,
    pub bound_ok: bool,
}

/// On a torsion-free subgroup the coset condition collapses: the map
/// phi -> phi(w~) is injective, so the slice size is bounded by the
/// complexity at the image length.
pub fn torsion_free_injectivity_check(
    elements: &[Automorphism],
    marked: &MarkedWord,
    oracle: &LanguageOracle,
) -> Result<InjectivityReport> {
    if elements.is_empty() {
        return Err(Error::Precondition("empty element list".into()));
    }
    let r = elements.iter().map(|a| a.range()).max().unwrap();
    if marked.per_side < 2 * r {
        return Err(Error::Precondition(format!(
            "marked word extended {} per side cannot host elements of range {r}; need >= {}",
            marked.per_side,
            2 * r
        )));
    }
    let mut images: Vec<Word> = Vec::with_capacity(elements.len());
    let mut witness = None;
    'outer: for a in elements {
        let p = promote_range(a, r, oracle)?;
        let img = p.apply_raw(&marked.extended)?;
        for (j, prev) in images.iter().enumerate() {
            if *prev == img {
                witness = Some((j, images.len()));
                images.push(img);
                break 'outer;
            }
        }
        images.push(img);
    }
    let injective = witness.is_none();
    let image_len = marked.extended.len() - 2 * r;
    let complexity_bound = oracle.complexity(image_len)?;
    let bound_ok = !injective || (elements.len() as u64) <= complexity_bound;
    Ok(InjectivityReport {
        injective,
        witness,
        count: elements.len(),
        complexity_bound,
        bound_ok,
    })
}

/// Closure of a set of automorphisms under composition, deduplicated by
/// canonical (minimal-range) keys. Used to materialize the stabilizer
/// group as block codes; ranges grow with each product, so the certified
/// depth bounds how far the closure can run.
pub fn automorphism_closure(
    generators: &[Automorphism],
    oracle: &LanguageOracle,
    cap: usize,
) -> Result<Vec<Automorphism>> {
    let id = crate::codes::identity(oracle)?;
    let mut seen: HashMap<String, Automorphism> = HashMap::new();
    seen.insert(id.canonical_key(oracle)?, id.clone());
    let mut step: Vec<Automorphism> = Vec::new();
    for g in generators {
        step.push(g.clone());
        step.push(g.inverted());
    }
    let mut frontier = vec![id];
    while let Some(cur) = frontier.pop() {
        for g in &step {
            let next = compose(g, &cur, oracle)?;
            let key = next.canonical_key(oracle)?;
            if !seen.contains_key(&key) {
                if seen.len() >= cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                seen.insert(key, next.clone());
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<Automorphism> = seen.into_values().collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{
        enumerate_automorphisms, identity, is_endomorphism, shift_power, EndoVerdict,
        EnumerationOptions, LocalRule,
    };
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

    fn periodic01(target: usize) -> LanguageOracle {
        let spec = SubshiftSpec::periodic("01").unwrap();
        build_oracle(&spec, target).unwrap()
    }

    #[test]
    fn return_gaps_match_hand_counts() {
        let tm = thue_morse(30);
        let zero = tm.parse("0").unwrap();
        let rd = max_return_gap(&tm, &zero).unwrap();
        assert_eq!(rd.k_w, 3, "gaps between 0s in Thue-Morse are at most 3");

        let per = periodic01(20);
        let rd_p = max_return_gap(&per, &per.parse("0").unwrap()).unwrap();
        assert_eq!(rd_p.k_w, 2);
        let rendered: Vec<String> =
            rd_p.return_words.iter().map(|u| per.format(u)).collect();
        assert_eq!(rendered, vec!["1"]);

        let fib = fibonacci(30);
        let rd_f = max_return_gap(&fib, &fib.parse("1").unwrap()).unwrap();
        assert_eq!(rd_f.k_w, 3, "no 000 in the Fibonacci word");
    }

    #[test]
    fn return_words_decompose_the_sample() {
        let tm = thue_morse(40);
        let zero = tm.parse("0").unwrap();
        let rd = max_return_gap(&tm, &zero).unwrap();
        let sample = tm.sample().unwrap();
        let occ = sample.occurrences(&zero);
        assert!(occ.len() > 10);
        for pair in occ.windows(2) {
            let gap = pair[1] - pair[0];
            assert!(gap <= rd.k_w);
            if gap >= zero.len() {
                let u = sample.subword(pair[0] + zero.len(), gap - zero.len());
                assert!(rd.return_words.contains(&u));
            }
        }
    }

    #[test]
    fn identity_action_and_closure_of_identity() {
        let per = periodic01(20);
        let w = per.parse("0").unwrap();
        let rd = max_return_gap(&per, &w).unwrap();
        let id = identity(&per).unwrap();
        let act = cylinder_action(&id, &rd, &per).unwrap();
        assert!(act.is_identity());
        let g = group_closure(&w, &[act], 100).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn synthetic_involution_closes_to_order_two() {
        let a = crate::words::Alphabet::new(vec!['a', 'b']).unwrap();
        let u1 = a.parse_word("a").unwrap();
        let u2 = a.parse_word("b").unwrap();
        let mut mapping = BTreeMap::new();
        mapping.insert(u1.clone(), u2.clone());
        mapping.insert(u2.clone(), u1.clone());
        let swap = CylinderAction { mapping, source: None };
        let g = group_closure(&u1, &[swap.clone()], 10).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(swap.order().unwrap(), 2);
        assert!(order_divides_factorial(2, 2));
        assert!(!order_divides_factorial(3, 2));
    }

    #[test]
    fn legendre_divisibility() {
        // 720 = 6!; orders dividing it.
        assert!(order_divides_factorial(6, 6));
        assert!(order_divides_factorial(16, 6)); // v2(6!) = 4
        assert!(!order_divides_factorial(32, 6));
        assert!(order_divides_factorial(9, 6)); // v3(6!) = 2
        assert!(!order_divides_factorial(27, 6));
        assert!(!order_divides_factorial(7, 6));
    }

    #[test]
    fn stabilizer_contains_identity_never_exchange() {
        let tm = thue_morse(40);
        let auts = enumerate_automorphisms(&tm, 1, &EnumerationOptions::default()).unwrap();
        let w = tm.parse("011").unwrap();
        let s = stabilizer_generators(&tm, &w, &auts).unwrap();
        // Identity fixes every cylinder.
        let id = identity(&tm).unwrap();
        assert!(s.iter().any(|a| equals(a, &id, &tm).unwrap()));
        // The letter exchange fixes no nonempty word.
        for a in &s {
            let img = promote_range(a, 1, &tm)
                .unwrap()
                .apply_raw(&tm.parse("01100").unwrap())
                .unwrap();
            assert_eq!(tm.format(&img), "110");
        }
    }

    #[test]
    fn marked_word_fibonacci_step1() {
        let fib = fibonacci(60);
        let m = build_marked_word(&fib, 1, MarkedMode::Step1).unwrap();
        assert_eq!(m.per_side, 2);
        assert_eq!(m.extended.len(), m.core.len() + 4);
        assert_eq!(fib.format(&m.core), "00");
        assert_eq!(fib.format(&m.extended), "010010");
    }

    #[test]
    fn marked_word_periodic_errors() {
        let per = periodic01(30);
        assert!(matches!(
            build_marked_word(&per, 1, MarkedMode::Step1),
            Err(Error::PeriodicUndefined { .. })
        ));
    }

    #[test]
    fn coset_condition_fibonacci_r1() {
        let fib = fibonacci(80);
        let auts = enumerate_automorphisms(&fib, 1, &EnumerationOptions::default()).unwrap();
        assert_eq!(auts.len(), 3);
        let marked = build_marked_word(&fib, 1, MarkedMode::Step1).unwrap();
        let rho = marked.extended.len() / 2;
        let stab_universe = enumerate_automorphisms(
            &fib,
            rho,
            &EnumerationOptions {
                mode: crate::codes::EnumerationMode::ConstraintPropagation,
                ..EnumerationOptions::default()
            },
        )
        .unwrap();
        let s = stabilizer_generators(&fib, &marked.extended, &stab_universe).unwrap();
        let rd = max_return_gap(&fib, &marked.extended).unwrap();
        let actions: Vec<CylinderAction> = s
            .iter()
            .map(|a| cylinder_action(a, &rd, &fib).unwrap())
            .collect();
        let g = group_closure(&marked.extended, &actions, 1000).unwrap();
        assert_eq!(g.order(), 1, "stabilizer group of the Fibonacci marked word is trivial");
        let report = coset_condition_check(&auts, &marked, &g, &fib).unwrap();
        assert!(report.equal);
        assert_eq!(report.by_image.len(), 3, "three singleton classes");
        assert!(report.product_bound_ok);
    }

    #[test]
    fn coset_condition_singleton() {
        let fib = fibonacci(60);
        let marked = build_marked_word(&fib, 1, MarkedMode::Step1).unwrap();
        let id = identity(&fib).unwrap();
        let g = FiniteGroup { word: marked.extended.clone(), elements: vec![], generators: vec![] };
        let report = coset_condition_check(&[id], &marked, &g, &fib).unwrap();
        assert!(report.equal);
        assert_eq!(report.by_image.len(), 1);
    }

    #[test]
    fn torsion_free_injectivity_on_shift_powers() {
        let fib = fibonacci(80);
        // Elements of range up to 2 need a word extended at least 4 per side.
        let marked = build_marked_word(&fib, 2, MarkedMode::Step1).unwrap();
        let elems: Vec<Automorphism> =
            (-2..=2).map(|j| shift_power(&fib, j).unwrap()).collect();
        let rep = torsion_free_injectivity_check(&elems, &marked, &fib).unwrap();
        assert!(rep.injective);
        assert!(rep.bound_ok);
        assert!(5 <= rep.complexity_bound);

        let dup = vec![elems[0].clone(), elems[0].clone()];
        let rep2 = torsion_free_injectivity_check(&dup, &marked, &fib).unwrap();
        assert!(!rep2.injective);
        assert_eq!(rep2.witness, Some((0, 1)));
    }

    #[test]
    fn automorphism_closure_of_identity_is_trivial() {
        let fib = fibonacci(40);
        let id = identity(&fib).unwrap();
        let closure = automorphism_closure(&[id], &fib, 10).unwrap();
        assert_eq!(closure.len(), 1);
    }

    #[test]
    fn cylinder_action_on_thue_morse_marked_word() {
        let tm = thue_morse(80);
        let marked = build_marked_word(&tm, 1, MarkedMode::Step1).unwrap();
        let rd = max_return_gap(&tm, &marked.extended).unwrap();
        let id = identity(&tm).unwrap();
        let act = cylinder_action(&id, &rd, &tm).unwrap();
        assert!(act.is_identity());
        for (u, v) in &act.mapping {
            assert_eq!(u.len(), v.len());
        }
    }

    #[test]
    fn endomorphism_witness_is_needed_for_stabilizers() {
        // A rule that is not an endomorphism cannot enter stabilizer
        // machinery; keep the rejection path covered here.
        let fib = fibonacci(30);
        let table = fib.factors(1).unwrap().iter().map(|w| (w.clone(), 1u8)).collect();
        let rule = LocalRule::new(0, table, &fib).unwrap();
        assert!(matches!(
            is_endomorphism(&rule, &fib, 10).unwrap(),
            EndoVerdict::Rejected { .. }
        ));
    }
}
