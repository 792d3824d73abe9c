//! Report documents and their renderings.
//!
//! Every report serializes to a versioned JSON document and to TSV with a
//! commented metadata header. Field order, map order, and row order are
//! all canonical, so identical inputs produce byte-identical reports.

use serde::{Deserialize, Serialize};

use crate::codes::{Automorphism, AutomorphismDoc};
use crate::error::Result;
use crate::folner::{FolnerCandidate, FolnerOutcome, GrowthSeries, InfeasibilityReport, Ratio};
use crate::groups::{MarkedWord, PartitionReport, ReturnData};
use crate::language::{
    detect_eventual_periodicity, growth_diagnostics, ComplexityProfile, ExtensionProfile,
    KnOutcome, LanguageOracle,
};
use crate::subshift::SpecDoc;

pub const SCHEMA_COMPLEXITY: &str = "shiftlab/complexity/v1";
pub const SCHEMA_EXTENSIONS: &str = "shiftlab/extensions/v1";
pub const SCHEMA_AUTOMORPHISMS: &str = "shiftlab/automorphisms/v1";
pub const SCHEMA_GROUP: &str = "shiftlab/group/v1";
pub const SCHEMA_FOLNER: &str = "shiftlab/folner/v1";
pub const SCHEMA_GROWTH: &str = "shiftlab/growth/v1";
pub const SCHEMA_BOUNDS: &str = "shiftlab/bounds/v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleMeta {
    pub spec: SpecDoc,
    pub spec_hash: String,
    pub stabilized_to: usize,
    pub target: usize,
    pub unstable: bool,
}

impl OracleMeta {
    pub fn of(oracle: &LanguageOracle) -> Self {
        OracleMeta {
            spec: oracle.spec().doc(),
            spec_hash: oracle.spec_hash().to_string(),
            stabilized_to: oracle.stabilized_to(),
            target: oracle.target(),
            unstable: oracle.is_unstable(),
        }
    }

    fn tsv_header(&self, out: &mut String) {
        out.push_str(&format!("# spec\t{}\n", self.spec.kind));
        out.push_str(&format!("# spec_hash\t{}\n", self.spec_hash));
        out.push_str(&format!("# stabilized_to\t{}\n", self.stabilized_to));
        if self.unstable {
            out.push_str("# flag\tunstable\n");
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub n: usize,
    pub p: u64,
    pub log_p_over_n_beta: f64,
    pub p_over_n_d: f64,
    pub stretched_tail_sup: f64,
    pub poly_tail_sup: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub schema: String,
    #[serde(flatten)]
    pub meta: OracleMeta,
    pub beta: f64,
    pub d: u32,
    pub periodic_at: Option<usize>,
    pub rows: Vec<ComplexityRow>,
}

impl ComplexityReport {
    pub fn build(
        oracle: &LanguageOracle,
        profile: &ComplexityProfile,
        beta: f64,
        d: u32,
    ) -> Result<Self> {
        let diag = growth_diagnostics(profile, beta, d)?;
        let rows = diag
            .rows
            .iter()
            .map(|r| ComplexityRow {
                n: r.n,
                p: profile.get(r.n),
                log_p_over_n_beta: r.log_p_over_n_beta,
                p_over_n_d: r.p_over_n_d,
                stretched_tail_sup: r.stretched_tail_sup,
                poly_tail_sup: r.poly_tail_sup,
            })
            .collect();
        Ok(ComplexityReport {
            schema: SCHEMA_COMPLEXITY.into(),
            meta: OracleMeta::of(oracle),
            beta,
            d,
            periodic_at: detect_eventual_periodicity(profile),
            rows,
        })
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        self.meta.tsv_header(&mut out);
        if let Some(n) = self.periodic_at {
            out.push_str(&format!("# flag\tperiodic_at {n}\n"));
        }
        out.push_str("n\tP\tlogP_over_n^beta\tP_over_n^d\tstretched_tail_sup\tpoly_tail_sup\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{:.9}\t{:.9}\t{:.9}\t{:.9}\n",
                r.n, r.p, r.log_p_over_n_beta, r.p_over_n_d, r.stretched_tail_sup, r.poly_tail_sup
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionRow {
    pub n: usize,
    pub p: u64,
    /// Exact value when certified.
    pub k_n: Option<usize>,
    /// Lower bound when the horizon binds.
    pub k_n_at_least: Option<usize>,
    pub d_n: Option<usize>,
    pub witness: Option<String>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionsReport {
    pub schema: String,
    #[serde(flatten)]
    pub meta: OracleMeta,
    pub rows: Vec<ExtensionRow>,
    pub sup_kn_over_n: Option<f64>,
}

impl ExtensionsReport {
    pub fn build(
        oracle: &LanguageOracle,
        profile: &ComplexityProfile,
        ext: &ExtensionProfile,
    ) -> Result<Self> {
        let mut rows = Vec::with_capacity(ext.rows.len());
        for row in &ext.rows {
            let mut flags = Vec::new();
            let (k_n, k_n_at_least) = match row.k_n {
                KnOutcome::Value(v) => (Some(v), None),
                KnOutcome::AtLeast(v) => {
                    flags.push("horizon-capped".to_string());
                    (None, Some(v))
                }
                KnOutcome::Periodic => {
                    flags.push("periodic".to_string());
                    (None, None)
                }
            };
            let d_n = crate::language::doubling_time(profile, row.n).ok();
            if d_n.is_none() && !flags.contains(&"periodic".to_string()) {
                flags.push("doubling-beyond-horizon".to_string());
            }
            rows.push(ExtensionRow {
                n: row.n,
                p: profile.get(row.n),
                k_n,
                k_n_at_least,
                d_n,
                witness: row.witness.as_ref().map(|w| oracle.format(w)),
                flags,
            });
        }
        Ok(ExtensionsReport {
            schema: SCHEMA_EXTENSIONS.into(),
            meta: OracleMeta::of(oracle),
            rows,
            sup_kn_over_n: ext.sup_kn_over_n,
        })
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        self.meta.tsv_header(&mut out);
        if let Some(s) = self.sup_kn_over_n {
            out.push_str(&format!("# sup_kn_over_n\t{s:.9}\n"));
        }
        out.push_str("n\tP\tk_n\td_n\twitness\tflags\n");
        for r in &self.rows {
            let k = match (r.k_n, r.k_n_at_least) {
                (Some(v), _) => v.to_string(),
                (None, Some(v)) => format!(">={v}"),
                (None, None) => "-".to_string(),
            };
            let d = r.d_n.map_or("-".to_string(), |v| v.to_string());
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.n,
                r.p,
                k,
                d,
                r.witness.as_deref().unwrap_or("-"),
                if r.flags.is_empty() { "-".to_string() } else { r.flags.join(",") }
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutomorphismsReport {
    pub schema: String,
    #[serde(flatten)]
    pub meta: OracleMeta,
    pub range: usize,
    pub verified_depth: usize,
    pub count: usize,
    pub items: Vec<AutomorphismDoc>,
}

impl AutomorphismsReport {
    pub fn build(oracle: &LanguageOracle, range: usize, auts: &[Automorphism]) -> Self {
        let verified_depth = auts.iter().map(|a| a.verified_depth()).min().unwrap_or(0);
        AutomorphismsReport {
            schema: SCHEMA_AUTOMORPHISMS.into(),
            meta: OracleMeta::of(oracle),
            range,
            verified_depth,
            count: auts.len(),
            items: auts.iter().map(|a| a.doc(oracle)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        self.meta.tsv_header(&mut out);
        out.push_str(&format!("# range\t{}\n# count\t{}\n", self.range, self.count));
        out.push_str("index\trange\tverified_depth\tforward\tinverse\n");
        for (i, a) in self.items.iter().enumerate() {
            let fwd: Vec<String> =
                a.forward.iter().map(|(w, s)| format!("{w}>{s}")).collect();
            let inv: Vec<String> =
                a.inverse.iter().map(|(w, s)| format!("{w}>{s}")).collect();
            out.push_str(&format!(
                "{i}\t{}\t{}\t{}\t{}\n",
                a.range,
                a.verified_depth,
                fwd.join(";"),
                inv.join(";")
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub equal: bool,
    pub class_count: usize,
    pub by_image: Vec<Vec<usize>>,
    pub by_coset: Vec<Vec<usize>>,
    pub image_words: Vec<String>,
    pub product_bound_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderCheckRow {
    pub index: usize,
    pub order: u64,
    pub divides_factorial: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupReport {
    pub schema: String,
    #[serde(flatten)]
    pub meta: OracleMeta,
    pub range: usize,
    pub core: String,
    pub extended: String,
    pub k_w: usize,
    pub return_word_count: usize,
    pub p_of_kw: u64,
    pub stabilizer_count: usize,
    pub group_order: usize,
    pub group_order_by_codes: usize,
    pub order_checks: Vec<OrderCheckRow>,
    pub all_orders_divide: bool,
    pub aut_count: usize,
    pub partition: PartitionDoc,
}

impl GroupReport {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        oracle: &LanguageOracle,
        range: usize,
        marked: &MarkedWord,
        rd: &ReturnData,
        stabilizer_count: usize,
        group_order: usize,
        group_order_by_codes: usize,
        order_checks: Vec<OrderCheckRow>,
        partition: &PartitionReport,
    ) -> Result<Self> {
        let all_orders_divide = order_checks.iter().all(|r| r.divides_factorial);
        Ok(GroupReport {
            schema: SCHEMA_GROUP.into(),
            meta: OracleMeta::of(oracle),
            range,
            core: oracle.format(&marked.core),
            extended: oracle.format(&marked.extended),
            k_w: rd.k_w,
            return_word_count: rd.return_words.len(),
            p_of_kw: oracle.complexity(rd.k_w)?,
            stabilizer_count,
            group_order,
            group_order_by_codes,
            order_checks,
            all_orders_divide,
            aut_count: partition.aut_count,
            partition: PartitionDoc {
                equal: partition.equal,
                class_count: partition.by_image.len(),
                by_image: partition.by_image.clone(),
                by_coset: partition.by_coset.clone(),
                image_words: partition
                    .image_words
                    .iter()
                    .map(|w| oracle.format(w))
                    .collect(),
                product_bound_ok: partition.product_bound_ok,
            },
        })
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        self.meta.tsv_header(&mut out);
        out.push_str("key\tvalue\n");
        out.push_str(&format!("range\t{}\n", self.range));
        out.push_str(&format!("core\t{}\n", self.core));
        out.push_str(&format!("extended\t{}\n", self.extended));
        out.push_str(&format!("K_w\t{}\n", self.k_w));
        out.push_str(&format!("return_words\t{}\n", self.return_word_count));
        out.push_str(&format!("P(K_w)\t{}\n", self.p_of_kw));
        out.push_str(&format!("stabilizer\t{}\n", self.stabilizer_count));
        out.push_str(&format!("group_order\t{}\n", self.group_order));
        out.push_str(&format!("group_order_by_codes\t{}\n", self.group_order_by_codes));
        out.push_str(&format!("all_orders_divide\t{}\n", self.all_orders_divide));
        out.push_str(&format!("aut_count\t{}\n", self.aut_count));
        out.push_str(&format!("partition_equal\t{}\n", self.partition.equal));
        out.push_str(&format!("partition_classes\t{}\n", self.partition.class_count));
        out.push_str(&format!("product_bound_ok\t{}\n", self.partition.product_bound_ok));
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioRow {
    pub phi: String,
    pub sym_diff: u64,
    pub size: u64,
    pub value: f64,
    pub strict_bound: Option<f64>,
    pub within_bound: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FolnerSummary {
    pub k: usize,
    pub m: usize,
    pub r: usize,
    pub core: String,
    pub extended: String,
    pub f_values: Vec<usize>,
    pub f_at_m: usize,
    pub f_at_m_plus_k: usize,
    pub group_order: usize,
    pub rep_count: usize,
    pub size: usize,
    /// f(3R) <= P(|w| + 3R), checked on every run.
    pub f3r: usize,
    pub f3r_bound: u64,
    pub f3r_bound_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FolnerReport {
    pub schema: String,
    #[serde(flatten)]
    pub meta: OracleMeta,
    pub k: usize,
    pub mode: String,
    pub outcome: String,
    pub infeasibility: Option<InfeasibilityReport>,
    pub candidate: Option<FolnerSummary>,
    pub ratios: Vec<RatioRow>,
}

impl FolnerReport {
    pub fn summarize(
        oracle: &LanguageOracle,
        c: &FolnerCandidate,
    ) -> Result<FolnerSummary> {
        let three_r = 3 * c.marked.r;
        let f3r = c.f_at(three_r);
        let bound_len = c.marked.core.len() + three_r;
        let f3r_bound = oracle.complexity(bound_len)?;
        Ok(FolnerSummary {
            k: c.k,
            m: c.m,
            r: c.marked.r,
            core: oracle.format(&c.marked.core),
            extended: oracle.format(&c.marked.extended),
            f_values: c.f_values.clone(),
            f_at_m: c.f_at(c.m),
            f_at_m_plus_k: c.f_at(c.m + c.k),
            group_order: c.group_elements.len(),
            rep_count: c.reps.len(),
            size: c.size(),
            f3r,
            f3r_bound,
            f3r_bound_ok: (f3r as u64) <= f3r_bound,
        })
    }

    pub fn build(
        oracle: &LanguageOracle,
        k: usize,
        mode: &str,
        outcome: &FolnerOutcome,
        ratios: Vec<RatioRow>,
    ) -> Result<Self> {
        let (outcome_str, infeasibility, candidate) = match outcome {
            FolnerOutcome::Built(c) => {
                ("built".to_string(), None, Some(Self::summarize(oracle, c)?))
            }
            FolnerOutcome::Infeasible(rep) => {
                ("infeasible".to_string(), Some(rep.clone()), None)
            }
        };
        Ok(FolnerReport {
            schema: SCHEMA_FOLNER.into(),
            meta: OracleMeta::of(oracle),
            k,
            mode: mode.to_string(),
            outcome: outcome_str,
            infeasibility,
            candidate,
            ratios,
        })
    }

    pub fn ratio_row(phi: &str, ratio: Ratio, strict_bound: Option<f64>) -> RatioRow {
        RatioRow {
            phi: phi.to_string(),
            sym_diff: ratio.sym_diff,
            size: ratio.size,
            value: ratio.value(),
            strict_bound,
            within_bound: strict_bound.map(|b| ratio.value() <= b + 1e-9),
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        self.meta.tsv_header(&mut out);
        out.push_str(&format!("# mode\t{}\n# outcome\t{}\n", self.mode, self.outcome));
        if let Some(inf) = &self.infeasibility {
            out.push_str(&format!("# infeasible_stage\t{}\n# detail\t{}\n", inf.stage, inf.detail));
        }
        if let Some(c) = &self.candidate {
            out.push_str(&format!(
                "# k\t{}\n# M\t{}\n# R\t{}\n# extended\t{}\n# f_values\t{}\n# group_order\t{}\n# size\t{}\n# f3r_bound_ok\t{}\n",
                c.k,
                c.m,
                c.r,
                c.extended,
                c.f_values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                c.group_order,
                c.size,
                c.f3r_bound_ok
            ));
        }
        out.push_str("phi\tsym_diff\tsize\tvalue\tstrict_bound\twithin\n");
        for r in &self.ratios {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.9}\t{}\t{}\n",
                r.phi,
                r.sym_diff,
                r.size,
                r.value,
                r.strict_bound.map_or("-".to_string(), |b| format!("{b:.9}")),
                r.within_bound.map_or("-".to_string(), |b| b.to_string())
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthReportRow {
    pub n: usize,
    pub gamma: u64,
    pub log_gamma_over_n: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthReport {
    pub schema: String,
    #[serde(flatten)]
    pub meta: OracleMeta,
    pub generators: String,
    pub generator_count: usize,
    pub rows: Vec<GrowthReportRow>,
    pub submultiplicative: bool,
    /// The asserted diagnostic is log gamma(n) / n; the raw-scale variant
    /// seen alongside it in the source material is reported, not claimed.
    pub note: String,
}

impl GrowthReport {
    pub fn build(oracle: &LanguageOracle, generators: &str, series: &GrowthSeries) -> Self {
        let logs = series.log_diagnostic();
        let rows = (1..=series.len())
            .map(|n| GrowthReportRow {
                n,
                gamma: series.gamma(n),
                log_gamma_over_n: logs[n - 1],
            })
            .collect();
        GrowthReport {
            schema: SCHEMA_GROWTH.into(),
            meta: OracleMeta::of(oracle),
            generators: generators.to_string(),
            generator_count: series.generator_count,
            rows,
            submultiplicative: true,
            note: "subexponential-growth diagnostic is log gamma(n)/n".into(),
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        self.meta.tsv_header(&mut out);
        out.push_str(&format!("# generators\t{}\n", self.generators));
        out.push_str("n\tgamma\tlog_gamma_over_n\n");
        for r in &self.rows {
            out.push_str(&format!("{}\t{}\t{:.9}\n", r.n, r.gamma, r.log_gamma_over_n));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoublingRow {
    pub n: u64,
    pub beta: f64,
    pub lambda: f64,
    pub d_n: u64,
    pub asymptotic_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsReport {
    pub schema: String,
    pub step_bounds: Vec<(u64, u64)>,
    pub doubling: Vec<DoublingRow>,
}

impl BoundsReport {
    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str("section\tkey\tvalue\n");
        for (d, s) in &self.step_bounds {
            out.push_str(&format!("step_bound\td={d}\t{s}\n"));
        }
        for r in &self.doubling {
            out.push_str(&format!(
                "doubling\tn={} beta={} lambda={}\tD={} ratio={:.9}\n",
                r.n, r.beta, r.lambda, r.d_n, r.asymptotic_ratio
            ));
        }
        out
    }
}
