//! Symbolic-dynamics workbench core.
//!
//! Computes, on concrete minimal subshifts given by finite descriptions,
//! the finite objects of low-complexity automorphism-group analysis:
//! certified factor sets and complexity profiles, unique-extension data
//! and doubling times, range-R sliding block codes and automorphism
//! enumeration, return-word actions and their finite closures, coset
//! partitions and Folner candidates with exact boundary ratios, subgroup
//! growth series, and the associated bound formulas.

pub mod cache;
pub mod codes;
pub mod config;
pub mod error;
pub mod folner;
pub mod groups;
pub mod language;
pub mod report;
pub mod subshift;
pub mod words;

pub use cache::{build_oracle_cached, CacheStatus, FactorCache, CACHE_DIR_ENV, DEFAULT_CACHE_DIR};
pub use config::{load_config, parse_config, ExperimentConfig, ParamSet};

pub use folner::{
    find_slow_window, folner_candidate, folner_ratio, nilpotent_step_bound, subgroup_growth,
    BoundParams, FolnerCandidate, FolnerMode, FolnerOptions, FolnerOutcome, GrowthSeries,
    InfeasibilityReport, Ratio,
};

pub use codes::{
    compose, enumerate_automorphisms, equals, find_inverse, identity, is_endomorphism,
    minimal_range, promote_range, shift_power, Automorphism, AutomorphismDoc, Endomorphism,
    EndoVerdict, EnumerationMode, EnumerationOptions, LocalRule,
};
pub use error::{Error, Result};
pub use groups::{
    automorphism_closure, build_marked_word, coset_condition_check, coset_count_f,
    cylinder_action, fixes_cylinder, group_closure, max_return_gap, order_divides_factorial,
    order_divisibility_check, stabilizer_generators, torsion_free_injectivity_check,
    CylinderAction, FiniteGroup, InjectivityReport, MarkedMode, MarkedWord, PartitionReport,
    ReturnData,
};
pub use language::{
    build_oracle, build_oracle_with, detect_eventual_periodicity, doubling_time,
    extension_profile, growth_diagnostics, k_n, reference_doubling_ratio,
    reference_doubling_time, unique_extension_count, BuildOptions, ComplexityProfile,
    ExtensionCounts, ExtensionProfile, ExtensionSide, GrowthDiagnostics, GrowthRow, KnOutcome,
    LanguageOracle, LengthExtension,
};
pub use subshift::{SpecDoc, SubshiftSpec, SubshiftVariant};
pub use words::{Alphabet, Symbol, Word};
