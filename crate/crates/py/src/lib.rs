//! Python extension module exposing the workbench's main types and
//! operations: subshift specs, language oracles, automorphism
//! enumeration, return-word groups, Folner candidates, growth series,
//! and the bound formulas.

use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use shiftlab_core as core;
use shiftlab_core::codes::EnumerationMode;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite description of a subshift.
#[pyclass(frozen)]
struct Subshift {
    spec: core::SubshiftSpec,
}

#[pymethods]
impl Subshift {
    /// Primitive substitution from a symbol -> word mapping.
    #[staticmethod]
    fn substitution(rules: BTreeMap<String, String>) -> PyResult<Self> {
        let pairs: Vec<(&str, &str)> =
            rules.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        let spec = core::SubshiftSpec::substitution_from_strs(&pairs).map_err(err)?;
        Ok(Subshift { spec })
    }

    /// Characteristic Sturmian shift from a directive sequence (each
    /// coefficient >= 1); all ones gives the Fibonacci word.
    #[staticmethod]
    fn sturmian(coefficients: Vec<u32>) -> PyResult<Self> {
        Ok(Subshift { spec: core::SubshiftSpec::sturmian(coefficients).map_err(err)? })
    }

    #[staticmethod]
    fn periodic(word: &str) -> PyResult<Self> {
        Ok(Subshift { spec: core::SubshiftSpec::periodic(word).map_err(err)? })
    }

    #[staticmethod]
    fn explicit(sample: &str, trust_depth: usize) -> PyResult<Self> {
        Ok(Subshift { spec: core::SubshiftSpec::explicit(sample, trust_depth).map_err(err)? })
    }

    fn canonical_string(&self) -> String {
        self.spec.canonical_string()
    }

    fn content_hash(&self) -> String {
        self.spec.content_hash()
    }

    /// Builds the language oracle with certified factor sets up to
    /// `target` (or as deep as certification allows, flagged unstable).
    fn oracle(&self, target: usize) -> PyResult<Oracle> {
        let oracle = core::build_oracle(&self.spec, target).map_err(err)?;
        Ok(Oracle { inner: Arc::new(oracle) })
    }

    fn __repr__(&self) -> String {
        format!("Subshift({})", self.spec.canonical_string())
    }
}

/// Certified factor sets of a subshift and the quantities derived from
/// them.
#[pyclass(frozen)]
struct Oracle {
    inner: Arc<core::LanguageOracle>,
}

impl Oracle {
    fn parse(&self, word: &str) -> PyResult<core::Word> {
        self.inner.parse(word).map_err(err)
    }
}

#[pymethods]
impl Oracle {
    fn stabilized_to(&self) -> usize {
        self.inner.stabilized_to()
    }

    fn is_unstable(&self) -> bool {
        self.inner.is_unstable()
    }

    /// P(n) = number of certified factors of length n.
    fn complexity(&self, n: usize) -> PyResult<u64> {
        self.inner.complexity(n).map_err(err)
    }

    fn complexity_series(&self, max_n: usize) -> PyResult<Vec<u64>> {
        Ok(self.inner.complexity_series(max_n).map_err(err)?.values().to_vec())
    }

    fn factors(&self, n: usize) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .factors(n)
            .map_err(err)?
            .iter()
            .map(|w| self.inner.format(w))
            .collect())
    }

    /// Least n with P(n+1) = P(n), if any (Morse-Hedlund periodicity).
    fn detect_periodicity(&self) -> PyResult<Option<usize>> {
        let profile =
            self.inner.complexity_series(self.inner.stabilized_to()).map_err(err)?;
        Ok(core::detect_eventual_periodicity(&profile))
    }

    /// (right_steps, left_steps, right_capped, left_capped) of the
    /// maximal unique extensions of a factor.
    fn unique_extensions(&self, word: &str) -> PyResult<(usize, usize, bool, bool)> {
        let w = self.parse(word)?;
        let c = core::unique_extension_count(&self.inner, &w).map_err(err)?;
        Ok((c.right.steps, c.left.steps, c.right.capped, c.left.capped))
    }

    /// Least k such that no length-n word extends uniquely k times on
    /// both sides.
    fn k_n(&self, n: usize) -> PyResult<usize> {
        core::k_n(&self.inner, n).map_err(err)
    }

    /// Least m with P(n+m) >= 2 P(n).
    fn doubling_time(&self, n: usize) -> PyResult<usize> {
        let profile =
            self.inner.complexity_series(self.inner.stabilized_to()).map_err(err)?;
        core::doubling_time(&profile, n).map_err(err)
    }

    /// (K_w, return words): the max gap between occurrences of `word`
    /// and the set of u with word-u-word in the language, |u| <= K_w.
    fn max_return_gap(&self, word: &str) -> PyResult<(usize, Vec<String>)> {
        let w = self.parse(word)?;
        let rd = core::max_return_gap(&self.inner, &w).map_err(err)?;
        let words = rd.return_words.iter().map(|u| self.inner.format(u)).collect();
        Ok((rd.k_w, words))
    }

    /// All of Aut_R(X), verified to `depth` (a certified default when
    /// omitted). `propagate` switches to constraint-propagation
    /// enumeration for larger ranges.
    #[pyo3(signature = (range, depth=None, propagate=false))]
    fn automorphisms(
        &self,
        range: usize,
        depth: Option<usize>,
        propagate: bool,
    ) -> PyResult<Vec<PyAutomorphism>> {
        let opts = core::EnumerationOptions {
            depth,
            mode: if propagate {
                EnumerationMode::ConstraintPropagation
            } else {
                EnumerationMode::Exhaustive
            },
            ..core::EnumerationOptions::default()
        };
        let auts = core::enumerate_automorphisms(&self.inner, range, &opts).map_err(err)?;
        Ok(auts
            .into_iter()
            .map(|a| PyAutomorphism { inner: a, oracle: Arc::clone(&self.inner) })
            .collect())
    }

    #[pyo3(signature = (range, depth=None, propagate=false))]
    fn automorphism_count(
        &self,
        range: usize,
        depth: Option<usize>,
        propagate: bool,
    ) -> PyResult<usize> {
        Ok(self.automorphisms(range, depth, propagate)?.len())
    }

    fn shift_power(&self, j: i64) -> PyResult<PyAutomorphism> {
        let a = core::shift_power(&self.inner, j).map_err(err)?;
        Ok(PyAutomorphism { inner: a, oracle: Arc::clone(&self.inner) })
    }

    /// Ball sizes gamma(1..=n) of the subgroup generated by the shift
    /// and its inverse.
    fn growth_sigma(&self, n: usize) -> PyResult<Vec<u64>> {
        let gens = vec![
            core::shift_power(&self.inner, 1).map_err(err)?,
            core::shift_power(&self.inner, -1).map_err(err)?,
        ];
        let series = core::subgroup_growth(&gens, n, &self.inner).map_err(err)?;
        Ok(series.values().to_vec())
    }

    /// Empirical Folner candidate F_k from operator-chosen (r, m).
    fn folner_empirical(&self, k: usize, r: usize, m: usize) -> PyResult<PyFolner> {
        let params = core::BoundParams::with_beta(0.4).map_err(err)?;
        let outcome = core::folner_candidate(
            &self.inner,
            k,
            &params,
            core::FolnerMode::Empirical { r, m },
            &core::FolnerOptions::default(),
        )
        .map_err(err)?;
        match outcome {
            core::FolnerOutcome::Built(c) => {
                Ok(PyFolner { inner: *c, oracle: Arc::clone(&self.inner) })
            }
            core::FolnerOutcome::Infeasible(rep) => Err(PyValueError::new_err(format!(
                "infeasible at stage {}: {}",
                rep.stage, rep.detail
            ))),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Oracle({}, stabilized_to={})",
            self.inner.spec().canonical_string(),
            self.inner.stabilized_to()
        )
    }
}

/// A range-R sliding block code with a verified inverse.
#[pyclass(frozen, name = "Automorphism")]
struct PyAutomorphism {
    inner: core::Automorphism,
    oracle: Arc<core::LanguageOracle>,
}

#[pymethods]
impl PyAutomorphism {
    fn range(&self) -> usize {
        self.inner.range()
    }

    fn verified_depth(&self) -> usize {
        self.inner.verified_depth()
    }

    fn minimal_range(&self) -> PyResult<usize> {
        core::minimal_range(&self.inner, &self.oracle).map_err(err)
    }

    /// Image of a certified word; output is 2R shorter.
    fn apply(&self, word: &str) -> PyResult<String> {
        let w = self.oracle.parse(word).map_err(err)?;
        let out = self.inner.apply_to_word(&w, &self.oracle).map_err(err)?;
        Ok(self.oracle.format(&out))
    }

    fn inverse(&self) -> PyAutomorphism {
        PyAutomorphism { inner: self.inner.inverted(), oracle: Arc::clone(&self.oracle) }
    }

    fn equals(&self, other: &PyAutomorphism) -> PyResult<bool> {
        core::equals(&self.inner, &other.inner, &self.oracle).map_err(err)
    }

    /// JSON document: range, window table, inverse table, verified depth.
    fn serialize(&self) -> String {
        serde_json::to_string(&self.inner.doc(&self.oracle)).expect("doc serialization")
    }

    fn __repr__(&self) -> String {
        format!("Automorphism(range={})", self.inner.range())
    }
}

/// A built Folner candidate: a union of stabilizer-group cosets.
#[pyclass(frozen, name = "FolnerCandidate")]
struct PyFolner {
    inner: core::FolnerCandidate,
    oracle: Arc<core::LanguageOracle>,
}

#[pymethods]
impl PyFolner {
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn f_values(&self) -> Vec<usize> {
        self.inner.f_values.clone()
    }

    fn group_order(&self) -> usize {
        self.inner.group_elements.len()
    }

    fn marked_word(&self) -> String {
        self.oracle.format(&self.inner.marked.extended)
    }

    /// Exact |F ^ phi F| / |F| as an unreduced (numerator, denominator)
    /// pair of integers.
    fn ratio(&self, phi: &PyAutomorphism) -> PyResult<(u64, u64)> {
        let r = core::folner_ratio(&self.inner, &phi.inner, &self.oracle).map_err(err)?;
        Ok((r.sym_diff, r.size))
    }

    fn __repr__(&self) -> String {
        format!("FolnerCandidate(k={}, m={}, size={})", self.inner.k, self.inner.m, self.inner.size())
    }
}

/// Closed-form doubling time of n -> lambda^(n^beta).
#[pyfunction]
fn reference_doubling_time(n: u64, beta: f64, lam: f64) -> PyResult<u64> {
    core::reference_doubling_time(n, beta, lam).map_err(err)
}

/// Ratio of the doubling time to its leading asymptotic term.
#[pyfunction]
fn reference_doubling_ratio(n: u64, beta: f64, lam: f64) -> PyResult<f64> {
    core::reference_doubling_ratio(n, beta, lam).map_err(err)
}

/// Step bound floor((-1 + sqrt(8d - 7)) / 2).
#[pyfunction]
fn nilpotent_step_bound(d: u64) -> PyResult<u64> {
    core::nilpotent_step_bound(d).map_err(err)
}

/// Least M in [ceil(N/3), N-k] with
/// f(M+k) <= f(M) exp(M^((2b-1)/(2-2b))), or None.
#[pyfunction]
fn find_slow_window(f: Vec<u128>, k: usize, beta: f64) -> PyResult<Option<usize>> {
    core::find_slow_window(&f, k, beta).map_err(err)
}

#[pymodule]
fn shiftlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Subshift>()?;
    m.add_class::<Oracle>()?;
    m.add_class::<PyAutomorphism>()?;
    m.add_class::<PyFolner>()?;
    m.add_function(wrap_pyfunction!(reference_doubling_time, m)?)?;
    m.add_function(wrap_pyfunction!(reference_doubling_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(nilpotent_step_bound, m)?)?;
    m.add_function(wrap_pyfunction!(find_slow_window, m)?)?;
    Ok(())
}
