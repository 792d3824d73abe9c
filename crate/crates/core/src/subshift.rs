//! Finite descriptions of subshifts.
//!
//! A [`SubshiftSpec`] is the data from which the language oracle generates
//! and certifies factor sets: a primitive substitution, a Sturmian
//! directive sequence, a periodic word, or an explicit sample with a
//! declared trust depth.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubshiftVariant {
    /// A primitive substitution, one image word per symbol.
    Substitution { rules: Vec<Word> },
    /// Characteristic Sturmian word built by the standard-word recursion
    /// from a finite directive sequence (continued-fraction prefix), every
    /// coefficient >= 1. The all-ones sequence yields the Fibonacci word.
    Sturmian { coefficients: Vec<u32> },
    /// The two-sided orbit closure of `word` repeated bi-infinitely.
    Periodic { word: Word },
    /// A raw sample whose factors are trusted up to `trust_depth` only.
    Explicit { sample: Word, trust_depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubshiftSpec {
    pub alphabet: Alphabet,
    pub variant: SubshiftVariant,
}

impl SubshiftSpec {
    pub fn substitution(alphabet: Alphabet, rules: Vec<Word>) -> Result<Self> {
        let spec = SubshiftSpec { alphabet, variant: SubshiftVariant::Substitution { rules } };
        spec.validate()?;
        Ok(spec)
    }

    /// Substitution over the sorted characters appearing in the rule map.
    pub fn substitution_from_strs(rules: &[(&str, &str)]) -> Result<Self> {
        let mut text = String::new();
        for (k, v) in rules {
            text.push_str(k);
            text.push_str(v);
        }
        let alphabet = Alphabet::from_text(&text)?;
        let mut images: Vec<Option<Word>> = vec![None; alphabet.len()];
        for (k, v) in rules {
            let mut chars = k.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::InvalidSpec(format!("substitution key {k:?} must be a single symbol")));
            };
            let idx = alphabet.index_of(c).ok_or(Error::UnknownSymbol(c))?;
            if images[usize::from(idx)].is_some() {
                return Err(Error::InvalidSpec(format!("duplicate substitution rule for {k:?}")));
            }
            images[usize::from(idx)] = Some(alphabet.parse_word(v)?);
        }
        let rules = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| {
                    Error::InvalidSpec(format!("no substitution rule for symbol index {i}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SubshiftSpec::substitution(alphabet, rules)
    }

    pub fn sturmian(coefficients: Vec<u32>) -> Result<Self> {
        let spec = SubshiftSpec {
            alphabet: Alphabet::new(vec!['0', '1'])?,
            variant: SubshiftVariant::Sturmian { coefficients },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn periodic(word_text: &str) -> Result<Self> {
        let alphabet = Alphabet::from_text(word_text)?;
        let word = alphabet.parse_word(word_text)?;
        let spec = SubshiftSpec { alphabet, variant: SubshiftVariant::Periodic { word } };
        spec.validate()?;
        Ok(spec)
    }

    pub fn explicit(sample_text: &str, trust_depth: usize) -> Result<Self> {
        let alphabet = Alphabet::from_text(sample_text)?;
        let sample = alphabet.parse_word(sample_text)?;
        let spec =
            SubshiftSpec { alphabet, variant: SubshiftVariant::Explicit { sample, trust_depth } };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.variant {
            SubshiftVariant::Substitution { rules } => {
                if rules.len() != self.alphabet.len() {
                    return Err(Error::InvalidSpec(format!(
                        "substitution needs {} rules, got {}",
                        self.alphabet.len(),
                        rules.len()
                    )));
                }
                if rules.iter().any(|r| r.is_empty()) {
                    return Err(Error::InvalidSpec("substitution image is empty".into()));
                }
                if !rules.iter().any(|r| r.len() >= 2) {
                    return Err(Error::InvalidSpec(
                        "substitution never grows: every image has length 1".into(),
                    ));
                }
                self.check_primitive(rules)?;
                Ok(())
            }
            SubshiftVariant::Sturmian { coefficients } => {
                if coefficients.is_empty() {
                    return Err(Error::InvalidSpec("empty directive sequence".into()));
                }
                if coefficients.iter().any(|&c| c == 0) {
                    return Err(Error::InvalidSpec(
                        "directive coefficients must be positive".into(),
                    ));
                }
                Ok(())
            }
            SubshiftVariant::Periodic { word } => {
                if word.is_empty() {
                    return Err(Error::InvalidSpec("periodic word is empty".into()));
                }
                Ok(())
            }
            SubshiftVariant::Explicit { sample, trust_depth } => {
                if sample.is_empty() {
                    return Err(Error::InvalidSpec("explicit sample is empty".into()));
                }
                if *trust_depth == 0 {
                    return Err(Error::InvalidSpec("trust depth must be at least 1".into()));
                }
                if *trust_depth > sample.len() {
                    return Err(Error::InvalidSpec(format!(
                        "trust depth {} exceeds sample length {}",
                        trust_depth,
                        sample.len()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Primitivity of the substitution matrix: some power of the boolean
    /// incidence matrix is strictly positive (Wielandt exponent bound).
    fn check_primitive(&self, rules: &[Word]) -> Result<()> {
        let k = self.alphabet.len();
        let mut m = vec![vec![false; k]; k];
        for (a, image) in rules.iter().enumerate() {
            for &b in image.symbols() {
                m[a][usize::from(b)] = true;
            }
        }
        let max_t = if k == 1 { 1 } else { (k - 1) * (k - 1) + 1 };
        let mut power = m.clone();
        for _ in 0..max_t {
            if power.iter().all(|row| row.iter().all(|&x| x)) {
                return Ok(());
            }
            let mut next = vec![vec![false; k]; k];
            for a in 0..k {
                for c in 0..k {
                    if power[a][c] {
                        for b in 0..k {
                            if m[c][b] {
                                next[a][b] = true;
                            }
                        }
                    }
                }
            }
            power = next;
        }
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return Ok(());
        }
        for a in 0..k {
            if let Some(b) = (0..k).find(|&b| !power[a][b]) {
                return Err(Error::NotPrimitive {
                    symbol: self.alphabet.char_at(a as Symbol),
                    missing: self.alphabet.char_at(b as Symbol),
                });
            }
        }
        unreachable!("non-primitive matrix must have a zero entry");
    }

    /// Expands `word` symbol-wise through the substitution rules.
    pub(crate) fn apply_substitution(rules: &[Word], word: &Word) -> Word {
        let mut out = Vec::new();
        for &s in word.symbols() {
            out.extend_from_slice(rules[usize::from(s)].symbols());
        }
        Word::from_symbols(out)
    }

    /// Canonical single-line rendering, used for content hashing and
    /// report headers.
    pub fn canonical_string(&self) -> String {
        let a = &self.alphabet;
        let alphabet: String = a.chars().iter().collect();
        match &self.variant {
            SubshiftVariant::Substitution { rules } => {
                let body: Vec<String> = rules
                    .iter()
                    .enumerate()
                    .map(|(i, w)| format!("{}>{}", a.char_at(i as Symbol), a.format_word(w)))
                    .collect();
                format!("substitution[{alphabet}]{{{}}}", body.join(","))
            }
            SubshiftVariant::Sturmian { coefficients } => {
                let body: Vec<String> = coefficients.iter().map(|c| c.to_string()).collect();
                format!("sturmian[{}]", body.join(","))
            }
            SubshiftVariant::Periodic { word } => {
                format!("periodic[{alphabet}]{{{}}}", a.format_word(word))
            }
            SubshiftVariant::Explicit { sample, trust_depth } => {
                format!("explicit[{alphabet}]{{trust={},{}}}", trust_depth, a.format_word(sample))
            }
        }
    }

    /// Hex digest of the canonical rendering; the factor-cache key.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_string().as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn doc(&self) -> SpecDoc {
        let a = &self.alphabet;
        let mut doc = SpecDoc {
            kind: String::new(),
            alphabet: a.chars().iter().collect(),
            rules: BTreeMap::new(),
            coefficients: Vec::new(),
            word: String::new(),
            sample: String::new(),
            trust_depth: 0,
        };
        match &self.variant {
            SubshiftVariant::Substitution { rules } => {
                doc.kind = "substitution".into();
                for (i, w) in rules.iter().enumerate() {
                    doc.rules.insert(a.char_at(i as Symbol).to_string(), a.format_word(w));
                }
            }
            SubshiftVariant::Sturmian { coefficients } => {
                doc.kind = "sturmian".into();
                doc.coefficients = coefficients.clone();
            }
            SubshiftVariant::Periodic { word } => {
                doc.kind = "periodic".into();
                doc.word = a.format_word(word);
            }
            SubshiftVariant::Explicit { sample, trust_depth } => {
                doc.kind = "explicit".into();
                doc.sample = a.format_word(sample);
                doc.trust_depth = *trust_depth;
            }
        }
        doc
    }
}

/// String-based mirror of a spec, the shape used in reports and configs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpecDoc {
    pub kind: String,
    #[serde(default)]
    pub alphabet: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rules: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<u32>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub word: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub sample: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub trust_depth: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl SpecDoc {
    pub fn into_spec(self) -> Result<SubshiftSpec> {
        match self.kind.as_str() {
            "substitution" => {
                let pairs: Vec<(&str, &str)> =
                    self.rules.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
                let spec = SubshiftSpec::substitution_from_strs(&pairs)?;
                self.check_alphabet(&spec)?;
                Ok(spec)
            }
            "sturmian" => SubshiftSpec::sturmian(self.coefficients),
            "periodic" => {
                let spec = SubshiftSpec::periodic(&self.word)?;
                self.check_alphabet(&spec)?;
                Ok(spec)
            }
            "explicit" => {
                if self.trust_depth == 0 {
                    return Err(Error::Config("explicit spec needs trust_depth >= 1".into()));
                }
                let spec = SubshiftSpec::explicit(&self.sample, self.trust_depth)?;
                self.check_alphabet(&spec)?;
                Ok(spec)
            }
            other => Err(Error::Config(format!("unknown subshift kind {other:?}"))),
        }
    }

    /// An explicitly declared alphabet overrides the derived (sorted) one,
    /// so the symbol order stays under operator control.
    fn check_alphabet(&self, spec: &SubshiftSpec) -> Result<()> {
        if self.alphabet.is_empty() {
            return Ok(());
        }
        let declared = Alphabet::from_text(&self.alphabet)?;
        let derived: std::collections::BTreeSet<char> =
            spec.alphabet.chars().iter().copied().collect();
        let declared_set: std::collections::BTreeSet<char> =
            declared.chars().iter().copied().collect();
        if !derived.is_subset(&declared_set) {
            return Err(Error::Config(format!(
                "declared alphabet {:?} does not cover the symbols used",
                self.alphabet
            )));
        }
        Ok(())
    }
}

/// Standard-word recursion: s_{-1} = 1, s_0 = 0, s_n = s_{n-1}^{a_n} s_{n-2}.
/// Returns the longest standard word obtainable from the directive prefix
/// without exceeding `max_len` (but always at least s_1).
pub(crate) fn standard_word(coefficients: &[u32], max_len: usize) -> Word {
    let mut prev = Word::single(1); // s_{-1}
    let mut cur = Word::single(0); // s_0
    for &a in coefficients {
        let mut next = Word::empty();
        for _ in 0..a {
            next = next.concat(&cur);
        }
        next = next.concat(&prev);
        prev = cur;
        cur = next;
        if cur.len() >= max_len {
            break;
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_substitution_is_primitive() {
        let spec = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "0")]).unwrap();
        assert_eq!(spec.alphabet.len(), 2);
    }

    #[test]
    fn non_primitive_substitution_rejected_with_witness() {
        // 0 -> 00, 1 -> 11: each letter only ever reaches itself.
        let err = SubshiftSpec::substitution_from_strs(&[("0", "00"), ("1", "11")]).unwrap_err();
        match err {
            Error::NotPrimitive { symbol, missing } => {
                assert_eq!(symbol, '0');
                assert_eq!(missing, '1');
            }
            other => panic!("expected NotPrimitive, got {other:?}"),
        }
    }

    #[test]
    fn length_one_images_rejected() {
        let err = SubshiftSpec::substitution_from_strs(&[("0", "1"), ("1", "0")]).unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn sturmian_rejects_zero_coefficients() {
        assert!(SubshiftSpec::sturmian(vec![1, 0, 1]).is_err());
        assert!(SubshiftSpec::sturmian(vec![]).is_err());
    }

    #[test]
    fn standard_word_all_ones_is_fibonacci() {
        let a = Alphabet::new(vec!['0', '1']).unwrap();
        let w = standard_word(&[1; 6], usize::MAX);
        // s_6 = s_5 s_4 with s_5 = 0100101001001
        assert_eq!(a.format_word(&w), "010010100100101001010");
        assert!(a.format_word(&w).starts_with("0100101001001"));
    }

    #[test]
    fn canonical_string_and_hash_are_stable() {
        let spec = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "0")]).unwrap();
        assert_eq!(spec.canonical_string(), "substitution[01]{0>01,1>0}");
        assert_eq!(spec.content_hash().len(), 64);
        let again = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "0")]).unwrap();
        assert_eq!(spec.content_hash(), again.content_hash());
    }

    #[test]
    fn doc_round_trip() {
        let spec = SubshiftSpec::periodic("01").unwrap();
        let doc = spec.doc();
        assert_eq!(doc.kind, "periodic");
        let back = doc.into_spec().unwrap();
        assert_eq!(back, spec);
    }
}
