//! Experiment configuration files: nested key-value (TOML) with a
//! `[subshift]` table and optional `[oracle]` and `[params]` tables.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::language::BuildOptions;
use crate::subshift::{SpecDoc, SubshiftSpec};

pub const DEFAULT_TARGET_LENGTH: usize = 60;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    subshift: RawSubshift,
    #[serde(default)]
    oracle: RawOracle,
    #[serde(default)]
    params: RawParams,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubshift {
    kind: String,
    #[serde(default)]
    alphabet: Option<String>,
    #[serde(default)]
    rules: Option<BTreeMap<String, String>>,
    #[serde(default)]
    coefficients: Option<Vec<u32>>,
    #[serde(default)]
    word: Option<String>,
    #[serde(default)]
    sample: Option<String>,
    #[serde(default)]
    trust_depth: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    #[serde(default)]
    target_length: Option<usize>,
    #[serde(default)]
    sample_cap: Option<usize>,
    #[serde(default)]
    stability_margin: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(default)]
    range: Option<usize>,
    #[serde(default)]
    depth: Option<usize>,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    m: Option<usize>,
    #[serde(default)]
    beta: Option<f64>,
    #[serde(default)]
    d: Option<u64>,
    #[serde(default)]
    lambda: Option<f64>,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    cap: Option<u64>,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    generators: Option<String>,
}

/// Operation parameters from the config file; command-line flags override
/// each field individually.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamSet {
    pub range: Option<usize>,
    pub depth: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub beta: Option<f64>,
    pub d: Option<u64>,
    pub lambda: Option<f64>,
    pub n: Option<usize>,
    pub cap: Option<u64>,
    pub mode: Option<String>,
    pub generators: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub spec: SubshiftSpec,
    pub target_length: usize,
    pub build: BuildOptions,
    pub params: ParamSet,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
    let doc = SpecDoc {
        kind: raw.subshift.kind,
        alphabet: raw.subshift.alphabet.unwrap_or_default(),
        rules: raw.subshift.rules.unwrap_or_default(),
        coefficients: raw.subshift.coefficients.unwrap_or_default(),
        word: raw.subshift.word.unwrap_or_default(),
        sample: raw.subshift.sample.unwrap_or_default(),
        trust_depth: raw.subshift.trust_depth.unwrap_or_default(),
    };
    let spec = doc.into_spec()?;
    let mut build = BuildOptions::default();
    if let Some(cap) = raw.oracle.sample_cap {
        build.sample_cap = cap;
    }
    if let Some(margin) = raw.oracle.stability_margin {
        if margin < 1 {
            return Err(Error::Config("stability_margin must be at least 1".into()));
        }
        build.stability_margin = margin;
    }
    let target_length = raw.oracle.target_length.unwrap_or(DEFAULT_TARGET_LENGTH);
    if target_length == 0 {
        return Err(Error::Config("target_length must be at least 1".into()));
    }
    Ok(ExperimentConfig {
        spec,
        target_length,
        build,
        params: ParamSet {
            range: raw.params.range,
            depth: raw.params.depth,
            k: raw.params.k,
            m: raw.params.m,
            beta: raw.params.beta,
            d: raw.params.d,
            lambda: raw.params.lambda,
            n: raw.params.n,
            cap: raw.params.cap,
            mode: raw.params.mode,
            generators: raw.params.generators,
        },
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {path:?}: {e}")))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::SubshiftVariant;

    #[test]
    fn parses_substitution_config() {
        let cfg = parse_config(
            r#"
[subshift]
kind = "substitution"

[subshift.rules]
"0" = "01"
"1" = "0"

[oracle]
target_length = 40

[params]
range = 1
beta = 0.4
"#,
        )
        .unwrap();
        assert!(matches!(cfg.spec.variant, SubshiftVariant::Substitution { .. }));
        assert_eq!(cfg.target_length, 40);
        assert_eq!(cfg.params.range, Some(1));
        assert_eq!(cfg.params.beta, Some(0.4));
    }

    #[test]
    fn parses_other_kinds() {
        let p = parse_config("[subshift]\nkind = \"periodic\"\nword = \"01\"\n").unwrap();
        assert!(matches!(p.spec.variant, SubshiftVariant::Periodic { .. }));
        assert_eq!(p.target_length, DEFAULT_TARGET_LENGTH);

        let s =
            parse_config("[subshift]\nkind = \"sturmian\"\ncoefficients = [1, 1, 1, 1]\n").unwrap();
        assert!(matches!(s.spec.variant, SubshiftVariant::Sturmian { .. }));

        let e = parse_config(
            "[subshift]\nkind = \"explicit\"\nsample = \"0110100110010110\"\ntrust_depth = 3\n",
        )
        .unwrap();
        assert!(matches!(e.spec.variant, SubshiftVariant::Explicit { .. }));
    }

    #[test]
    fn rejects_malformed_and_unknown() {
        assert!(parse_config("not toml at all [").is_err());
        assert!(parse_config("[subshift]\nkind = \"nope\"\n").is_err());
        assert!(parse_config("[subshift]\nkind = \"periodic\"\nword = \"01\"\ntypo = 1\n").is_err());
        assert!(parse_config("[subshift]\nkind = \"periodic\"\nword = \"\"\n").is_err());
    }
}
