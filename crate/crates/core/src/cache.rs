//! Append-only factor cache keyed by (spec content hash, length).
//!
//! One text file per spec hash. Lines are either a `meta` record with the
//! certified depth and sample length, or a length record listing the
//! factor set of that length. Later records supersede earlier ones, so a
//! deeper rebuild appends its new lengths and a new meta line without
//! rewriting history.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::language::LanguageOracle;
use crate::subshift::SubshiftSpec;
use crate::words::Word;

pub const CACHE_DIR_ENV: &str = "SHIFTLAB_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".shiftlab-cache";

#[derive(Debug, Clone)]
pub struct FactorCache {
    dir: PathBuf,
}

#[derive(Debug, Clone)]
pub struct CacheStatus {
    pub path: PathBuf,
    pub stabilized_to: usize,
    pub lengths: usize,
    pub sample_len: usize,
}

struct CachedFile {
    stabilized_to: usize,
    sample_len: usize,
    factors: BTreeMap<usize, BTreeSet<Word>>,
}

impl FactorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FactorCache { dir: dir.into() }
    }

    /// Location from the environment override, or the default directory.
    pub fn from_env() -> Self {
        let dir = std::env::var(CACHE_DIR_ENV).unwrap_or_else(|_| DEFAULT_CACHE_DIR.to_string());
        FactorCache::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, spec: &SubshiftSpec) -> PathBuf {
        self.dir.join(format!("{}.factors", spec.content_hash()))
    }

    fn read(&self, spec: &SubshiftSpec) -> Result<Option<CachedFile>> {
        let path = self.path_for(spec);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        let alphabet = &spec.alphabet;
        let mut meta: Option<(usize, usize)> = None;
        let mut factors: BTreeMap<usize, BTreeSet<Word>> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad = || Error::Config(format!("corrupt cache line {} in {path:?}", lineno + 1));
            match fields[0] {
                "meta" => {
                    if fields.len() < 3 {
                        return Err(bad());
                    }
                    let s: usize = fields[1].parse().map_err(|_| bad())?;
                    let l: usize = fields[2].parse().map_err(|_| bad())?;
                    meta = Some((s, l));
                }
                n_text => {
                    if fields.len() != 2 {
                        return Err(bad());
                    }
                    let n: usize = n_text.parse().map_err(|_| bad())?;
                    let mut set = BTreeSet::new();
                    for token in fields[1].split(' ').filter(|t| !t.is_empty()) {
                        set.insert(alphabet.parse_word(token)?);
                    }
                    factors.insert(n, set);
                }
            }
        }
        let Some((stabilized_to, sample_len)) = meta else {
            return Ok(None);
        };
        Ok(Some(CachedFile { stabilized_to, sample_len, factors }))
    }

    /// Rebuilds an oracle from the cache when the recorded depth covers
    /// the target and every length record is present.
    pub fn load(&self, spec: &SubshiftSpec, target: usize) -> Result<Option<LanguageOracle>> {
        let Some(file) = self.read(spec)? else {
            return Ok(None);
        };
        if file.stabilized_to < target {
            return Ok(None);
        }
        let mut factors = Vec::with_capacity(file.stabilized_to);
        for n in 1..=file.stabilized_to {
            match file.factors.get(&n) {
                Some(set) if !set.is_empty() => factors.push(set.clone()),
                _ => return Ok(None),
            }
        }
        let oracle = LanguageOracle::from_parts(
            spec.clone(),
            factors,
            file.stabilized_to,
            target,
            file.sample_len,
        )?;
        Ok(Some(oracle))
    }

    /// Appends any lengths deeper than what the file already records,
    /// then a superseding meta line.
    pub fn store(&self, oracle: &LanguageOracle) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let spec = oracle.spec();
        let existing_depth = self.read(spec)?.map_or(0, |f| f.stabilized_to);
        if existing_depth >= oracle.stabilized_to() {
            return Ok(());
        }
        let path = self.path_for(spec);
        let mut file = fs::OpenOptions::new().create(true).append(true).open(&path)?;
        for n in existing_depth + 1..=oracle.stabilized_to() {
            let words: Vec<String> =
                oracle.factors(n)?.iter().map(|w| oracle.format(w)).collect();
            writeln!(file, "{n}\t{}", words.join(" "))?;
        }
        writeln!(file, "meta\t{}\t{}", oracle.stabilized_to(), oracle.sample_len())?;
        Ok(())
    }

    pub fn status(&self, spec: &SubshiftSpec) -> Result<Option<CacheStatus>> {
        let Some(file) = self.read(spec)? else {
            return Ok(None);
        };
        Ok(Some(CacheStatus {
            path: self.path_for(spec),
            stabilized_to: file.stabilized_to,
            lengths: file.factors.len(),
            sample_len: file.sample_len,
        }))
    }

    /// Removes the cache file for this spec; returns whether one existed.
    pub fn clear(&self, spec: &SubshiftSpec) -> Result<bool> {
        let path = self.path_for(spec);
        if path.exists() {
            fs::remove_file(&path)?;
            Ok(true)
        } else {
            Ok(false)
        }
    }
}

/// Builds through the cache: a deep-enough cached factor table is reused,
/// otherwise the oracle is built from the spec and persisted. Returns the
/// oracle and whether it was a cache hit.
pub fn build_oracle_cached(
    spec: &SubshiftSpec,
    target: usize,
    opts: &crate::language::BuildOptions,
    cache: &FactorCache,
) -> Result<(LanguageOracle, bool)> {
    if let Some(oracle) = cache.load(spec, target)? {
        return Ok((oracle, true));
    }
    let oracle = crate::language::build_oracle_with(spec, target, opts)?;
    cache.store(&oracle)?;
    Ok((oracle, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::build_oracle;

    fn tempdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("shiftlab-cache-test-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn cache_round_trip_preserves_factors() {
        let dir = tempdir("roundtrip");
        let cache = FactorCache::new(&dir);
        let spec = SubshiftSpec::substitution_from_strs(&[("0", "01"), ("1", "0")]).unwrap();
        let oracle = build_oracle(&spec, 25).unwrap();
        cache.store(&oracle).unwrap();

        let loaded = cache.load(&spec, 25).unwrap().expect("cache hit");
        assert_eq!(loaded.stabilized_to(), oracle.stabilized_to());
        for n in 1..=25 {
            assert_eq!(loaded.factors(n).unwrap(), oracle.factors(n).unwrap());
        }
        // A deeper request misses.
        assert!(cache.load(&spec, oracle.stabilized_to() + 1).unwrap().is_none());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn deeper_rebuild_appends() {
        let dir = tempdir("append");
        let cache = FactorCache::new(&dir);
        let spec = SubshiftSpec::periodic("011").unwrap();
        let shallow = build_oracle(&spec, 6).unwrap();
        cache.store(&shallow).unwrap();
        let deep = build_oracle(&spec, 12).unwrap();
        cache.store(&deep).unwrap();
        let status = cache.status(&spec).unwrap().unwrap();
        assert_eq!(status.stabilized_to, 12);
        let loaded = cache.load(&spec, 12).unwrap().unwrap();
        for n in 1..=12 {
            assert_eq!(loaded.factors(n).unwrap(), deep.factors(n).unwrap());
        }
        // Append-only: the shallow records are still in the file.
        let text = fs::read_to_string(cache.path_for(&spec)).unwrap();
        assert!(text.lines().filter(|l| l.starts_with("meta\t")).count() == 2);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn cached_build_reports_hit() {
        let dir = tempdir("hit");
        let cache = FactorCache::new(&dir);
        let spec = SubshiftSpec::periodic("01").unwrap();
        let opts = crate::language::BuildOptions::default();
        let (_o1, hit1) = build_oracle_cached(&spec, 10, &opts, &cache).unwrap();
        assert!(!hit1);
        let (_o2, hit2) = build_oracle_cached(&spec, 10, &opts, &cache).unwrap();
        assert!(hit2);
        let (_o3, hit3) = build_oracle_cached(&spec, 8, &opts, &cache).unwrap();
        assert!(hit3, "shallower target is served by the deeper cache");
        fs::remove_dir_all(&dir).unwrap();
    }
}
