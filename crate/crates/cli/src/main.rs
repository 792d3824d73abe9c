//! Workbench driver.
//!
//! Exit statuses: 0 success, 1 instance falsification (a checked
//! invariant failed on certified data), 2 usage or configuration error,
//! 3 resource cap.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shiftlab_core::codes::{
    enumerate_automorphisms, identity, shift_power, EnumerationMode, EnumerationOptions,
};
use shiftlab_core::folner::{
    folner_candidate, folner_ratio, nilpotent_step_bound, subgroup_growth, BoundParams,
    FolnerMode, FolnerOptions, FolnerOutcome,
};
use shiftlab_core::groups::{
    build_marked_word, coset_condition_check, cylinder_action, group_closure, max_return_gap,
    order_divides_factorial, stabilizer_generators, MarkedMode,
};
use shiftlab_core::language::{
    extension_profile, reference_doubling_ratio, reference_doubling_time,
};
use shiftlab_core::report::{
    AutomorphismsReport, BoundsReport, ComplexityReport, DoublingRow, ExtensionsReport,
    FolnerReport, GroupReport, GrowthReport, OrderCheckRow,
};
use shiftlab_core::{
    build_oracle_cached, groups, load_config, Automorphism, Error, ExperimentConfig, FactorCache,
    LanguageOracle, ParamSet, Result,
};

#[derive(Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "Symbolic-dynamics workbench: complexity, block codes, automorphism groups, \
             Folner candidates, and growth diagnostics for minimal subshifts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complexity profile P(n) with growth diagnostics
    Complexity(OpArgs),
    /// Unique-extension profile: k_n, doubling times, witnesses
    Extensions(OpArgs),
    /// Enumerate the automorphism slice Aut_R(X)
    Automorphisms(OpArgs),
    /// Return words, stabilizer group, and the coset partition
    Group(OpArgs),
    /// Folner candidate construction and boundary ratios
    Folner(OpArgs),
    /// Subgroup growth series for a symmetric generating set
    Growth(OpArgs),
    /// Bound formulas: nilpotency step and reference doubling times
    Bounds(BoundsArgs),
    /// Factor cache management
    Cache(CacheArgs),
}

#[derive(Args)]
struct OpArgs {
    /// Subshift configuration file (TOML)
    #[arg(long)]
    spec: PathBuf,
    /// Block-code range R
    #[arg(long)]
    range: Option<usize>,
    /// Verification depth M
    #[arg(long)]
    depth: Option<usize>,
    /// Folner index k
    #[arg(long)]
    k: Option<usize>,
    /// Coset level M for empirical Folner runs
    #[arg(long)]
    m: Option<usize>,
    /// Stretched-exponential exponent
    #[arg(long)]
    beta: Option<f64>,
    /// Polynomial degree
    #[arg(long)]
    d: Option<u64>,
    /// Base for reference doubling times
    #[arg(long)]
    lambda: Option<f64>,
    /// Row count / ball radius, operation dependent
    #[arg(long)]
    n: Option<usize>,
    /// Candidate or closure cap
    #[arg(long)]
    cap: Option<u64>,
    /// Folner mode: strict | empirical
    #[arg(long)]
    mode: Option<String>,
    /// Enumeration strategy: exhaustive | propagate
    #[arg(long = "enum")]
    enumeration: Option<String>,
    /// Growth generators: sigma | sigma+aut0
    #[arg(long)]
    gens: Option<String>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: tsv | json
    #[arg(long, default_value = "tsv")]
    format: String,
    /// Skip the factor cache
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct BoundsArgs {
    /// Polynomial degree for the step bound
    #[arg(long)]
    d: Option<u64>,
    /// n for the reference doubling time
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "tsv")]
    format: String,
}

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Show cached depth for a spec
    Status {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Drop the cache file for a spec
    Clear {
        #[arg(long)]
        spec: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(falsified) => {
            if falsified {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("shiftlab: error: {e}");
            ExitCode::from(e.exit_class() as u8)
        }
    }
}

/// Ok(true) means the run completed but a paper-backed invariant failed
/// on the instance.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Complexity(args) => with_oracle(args, run_complexity),
        Command::Extensions(args) => with_oracle(args, run_extensions),
        Command::Automorphisms(args) => with_oracle(args, run_automorphisms),
        Command::Group(args) => with_oracle(args, run_group),
        Command::Folner(args) => with_oracle(args, run_folner),
        Command::Growth(args) => with_oracle(args, run_growth),
        Command::Bounds(args) => run_bounds(args),
        Command::Cache(args) => run_cache(args),
    }
}

struct RunContext {
    oracle: LanguageOracle,
    params: ParamSet,
    format: Format,
    cap: Option<u64>,
    enumeration: EnumerationOptions,
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Tsv,
    Json,
}

fn parse_format(s: &str) -> Result<Format> {
    match s {
        "tsv" => Ok(Format::Tsv),
        "json" => Ok(Format::Json),
        other => Err(Error::Config(format!("unknown format {other:?}; use tsv or json"))),
    }
}

fn with_oracle(
    args: OpArgs,
    body: fn(&RunContext, &OpArgs) -> Result<(String, String, bool)>,
) -> Result<bool> {
    let config = load_config(&args.spec)?;
    let format = parse_format(&args.format)?;
    let oracle = build_from_config(&config, args.no_cache)?;
    let mut enumeration = EnumerationOptions::default();
    if let Some(cap) = args.cap.or(config.params.cap) {
        enumeration.candidate_cap = cap;
    }
    if let Some(mode) = args.enumeration.as_deref() {
        enumeration.mode = match mode {
            "exhaustive" => EnumerationMode::Exhaustive,
            "propagate" => EnumerationMode::ConstraintPropagation,
            other => {
                return Err(Error::Config(format!(
                    "unknown enumeration strategy {other:?}; use exhaustive or propagate"
                )))
            }
        };
    }
    if let Some(depth) = args.depth.or(config.params.depth) {
        enumeration.depth = Some(depth);
    }
    let ctx = RunContext {
        oracle,
        params: config.params.clone(),
        format,
        cap: args.cap.or(config.params.cap),
        enumeration,
    };
    let (tsv, json, falsified) = body(&ctx, &args)?;
    let rendered = match ctx.format {
        Format::Tsv => tsv,
        Format::Json => json,
    };
    emit(&args.out, &rendered)?;
    Ok(falsified)
}

fn build_from_config(config: &ExperimentConfig, no_cache: bool) -> Result<LanguageOracle> {
    if no_cache {
        return shiftlab_core::language::build_oracle_with(
            &config.spec,
            config.target_length,
            &config.build,
        );
    }
    let cache = FactorCache::from_env();
    let (oracle, hit) =
        build_oracle_cached(&config.spec, config.target_length, &config.build, &cache)?;
    if hit {
        eprintln!(
            "shiftlab: cache hit {} depth {}",
            &oracle.spec_hash()[..16],
            oracle.stabilized_to()
        );
    }
    Ok(oracle)
}

fn emit(out: &Option<PathBuf>, rendered: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, rendered)?;
            Ok(())
        }
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run_complexity(ctx: &RunContext, args: &OpArgs) -> Result<(String, String, bool)> {
    let o = &ctx.oracle;
    let rows = args.n.or(ctx.params.n).unwrap_or(o.stabilized_to()).min(o.stabilized_to());
    let beta = args.beta.or(ctx.params.beta).unwrap_or(0.5);
    let d = args.d.or(ctx.params.d).unwrap_or(2) as u32;
    let profile = o.complexity_series(rows)?;
    let report = ComplexityReport::build(o, &profile, beta, d)?;
    Ok((report.to_tsv(), report.to_json(), false))
}

fn run_extensions(ctx: &RunContext, args: &OpArgs) -> Result<(String, String, bool)> {
    let o = &ctx.oracle;
    let default_rows = (o.stabilized_to() / 3).max(1);
    let rows = args.n.or(ctx.params.n).unwrap_or(default_rows).min(o.stabilized_to());
    let profile = o.complexity_series(o.stabilized_to())?;
    let ext = extension_profile(o, rows)?;
    let report = ExtensionsReport::build(o, &profile, &ext)?;
    Ok((report.to_tsv(), report.to_json(), false))
}

fn run_automorphisms(ctx: &RunContext, args: &OpArgs) -> Result<(String, String, bool)> {
    let o = &ctx.oracle;
    let range = args
        .range
        .or(ctx.params.range)
        .ok_or_else(|| Error::Config("automorphisms needs --range".into()))?;
    let auts = enumerate_automorphisms(o, range, &ctx.enumeration)?;
    let report = AutomorphismsReport::build(o, range, &auts);
    Ok((report.to_tsv(), report.to_json(), false))
}

fn run_group(ctx: &RunContext, args: &OpArgs) -> Result<(String, String, bool)> {
    let o = &ctx.oracle;
    let range = args.range.or(ctx.params.range).unwrap_or(1);
    let marked = build_marked_word(o, range, MarkedMode::Step1)?;
    let rd = max_return_gap(o, &marked.extended)?;

    let rho = marked.extended.len() / 2;
    let mut stab_opts = ctx.enumeration.clone();
    stab_opts.mode = EnumerationMode::ConstraintPropagation;
    stab_opts.depth = None;
    let universe = enumerate_automorphisms(o, rho, &stab_opts)?;
    let stab = stabilizer_generators(o, &marked.extended, &universe)?;

    let p_kw = o.complexity(rd.k_w)?;
    let mut order_checks = Vec::new();
    let mut actions = Vec::new();
    for (index, a) in stab.iter().enumerate() {
        let action = cylinder_action(a, &rd, o)?;
        let order = action.order()?;
        order_checks.push(OrderCheckRow {
            index,
            order,
            divides_factorial: order_divides_factorial(order, p_kw),
        });
        actions.push(action);
    }
    let fg = group_closure(&marked.extended, &actions, closure_cap(ctx))?;
    let codes_closure = groups::automorphism_closure(&stab, o, closure_cap(ctx))?;

    let auts = enumerate_automorphisms(o, range, &ctx.enumeration)?;
    let partition = coset_condition_check(&auts, &marked, &fg, o)?;

    let report = GroupReport::build(
        o,
        range,
        &marked,
        &rd,
        stab.len(),
        fg.order(),
        codes_closure.len(),
        order_checks,
        &partition,
    )?;
    let falsified = !report.partition.equal
        || !report.partition.product_bound_ok
        || !report.all_orders_divide
        || report.group_order != report.group_order_by_codes;
    Ok((report.to_tsv(), report.to_json(), falsified))
}

fn closure_cap(ctx: &RunContext) -> usize {
    ctx.cap.map(|c| c as usize).unwrap_or(10_000)
}

fn run_folner(ctx: &RunContext, args: &OpArgs) -> Result<(String, String, bool)> {
    let o = &ctx.oracle;
    let k = args.k.or(ctx.params.k).unwrap_or(1);
    let beta = args.beta.or(ctx.params.beta).unwrap_or(0.4);
    let params = BoundParams::new(
        beta,
        1.0,
        args.d.or(ctx.params.d).unwrap_or(2),
        args.lambda.or(ctx.params.lambda).unwrap_or(2.0),
    )?;
    let mode_name = args
        .mode
        .clone()
        .or(ctx.params.mode.clone())
        .unwrap_or_else(|| "empirical".to_string());
    let mode = match mode_name.as_str() {
        "strict" => FolnerMode::Strict,
        "empirical" => {
            let r = args
                .range
                .or(ctx.params.range)
                .ok_or_else(|| Error::Config("empirical mode needs --range".into()))?;
            let m = args
                .m
                .or(ctx.params.m)
                .ok_or_else(|| Error::Config("empirical mode needs --m".into()))?;
            FolnerMode::Empirical { r, m }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown mode {other:?}; use strict or empirical"
            )))
        }
    };
    let mut opts = FolnerOptions::default();
    opts.enumeration.candidate_cap = ctx.enumeration.candidate_cap;
    opts.closure_cap = closure_cap(ctx);

    let outcome = folner_candidate(o, k, &params, mode, &opts)?;
    let mut ratios = Vec::new();
    let mut falsified = false;
    if let FolnerOutcome::Built(c) = &outcome {
        let auts_k = enumerate_automorphisms(o, k.min(c.m), &opts.enumeration)?;
        for (i, phi) in auts_k.iter().enumerate() {
            let ratio = folner_ratio(c, phi, o)?;
            let label = if shiftlab_core::codes::equals(phi, &identity(o)?, o)? {
                "id".to_string()
            } else {
                format!("aut{i}")
            };
            ratios.push(FolnerReport::ratio_row(&label, ratio, c.strict_ratio_bound));
        }
    }
    let report = FolnerReport::build(o, k, &mode_name, &outcome, ratios)?;
    if let Some(c) = &report.candidate {
        falsified |= !c.f3r_bound_ok;
    }
    falsified |= report.ratios.iter().any(|r| r.within_bound == Some(false));
    Ok((report.to_tsv(), report.to_json(), falsified))
}

fn run_growth(ctx: &RunContext, args: &OpArgs) -> Result<(String, String, bool)> {
    let o = &ctx.oracle;
    let n = args.n.or(ctx.params.n).unwrap_or(10);
    let gens_name = args
        .gens
        .clone()
        .or(ctx.params.generators.clone())
        .unwrap_or_else(|| "sigma".to_string());
    let mut gens: Vec<Automorphism> =
        vec![shift_power(o, 1)?, shift_power(o, -1)?];
    match gens_name.as_str() {
        "sigma" => {}
        "sigma+aut0" => {
            let auts0 = enumerate_automorphisms(o, 0, &ctx.enumeration)?;
            gens.extend(auts0);
        }
        other => {
            return Err(Error::Config(format!(
                "unknown generator set {other:?}; use sigma or sigma+aut0"
            )))
        }
    }
    let series = subgroup_growth(&gens, n, o)?;
    let report = GrowthReport::build(o, &gens_name, &series);
    Ok((report.to_tsv(), report.to_json(), false))
}

fn run_bounds(args: BoundsArgs) -> Result<bool> {
    let format = parse_format(&args.format)?;
    if args.d.is_none() && args.n.is_none() {
        return Err(Error::Config("bounds needs --d and/or --n".into()));
    }
    let mut step_bounds = Vec::new();
    if let Some(d) = args.d {
        step_bounds.push((d, nilpotent_step_bound(d)?));
    }
    let mut doubling = Vec::new();
    if let Some(n) = args.n {
        let beta = args.beta.unwrap_or(0.5);
        let lambda = args.lambda.unwrap_or(2.0);
        doubling.push(DoublingRow {
            n,
            beta,
            lambda,
            d_n: reference_doubling_time(n, beta, lambda)?,
            asymptotic_ratio: reference_doubling_ratio(n, beta, lambda)?,
        });
    }
    let report = BoundsReport {
        schema: shiftlab_core::report::SCHEMA_BOUNDS.into(),
        step_bounds,
        doubling,
    };
    let rendered = match format {
        Format::Tsv => report.to_tsv(),
        Format::Json => report.to_json(),
    };
    emit(&args.out, &rendered)?;
    Ok(false)
}

fn run_cache(args: CacheArgs) -> Result<bool> {
    let cache = FactorCache::from_env();
    match args.action {
        CacheAction::Status { spec } => {
            let config = load_config(&spec)?;
            match cache.status(&config.spec)? {
                Some(s) => println!(
                    "cached\t{}\tdepth\t{}\tlengths\t{}\tsample\t{}",
                    s.path.display(),
                    s.stabilized_to,
                    s.lengths,
                    s.sample_len
                ),
                None => println!("uncached"),
            }
        }
        CacheAction::Clear { spec } => {
            let config = load_config(&spec)?;
            let removed = cache.clear(&config.spec)?;
            println!("{}", if removed { "cleared" } else { "uncached" });
        }
    }
    Ok(false)
}
