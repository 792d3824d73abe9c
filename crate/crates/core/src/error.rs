use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors across the workbench.
///
/// Variants carry enough structure for a driver to map them onto exit
/// statuses: configuration/usage problems, resource caps, and instance
/// falsifications (a checked mathematical invariant failing on certified
/// data, which should never happen) are kept distinct.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("invalid subshift description: {0}")]
    InvalidSpec(String),

    #[error("substitution is not primitive: no power of the image of '{symbol}' contains '{missing}'")]
    NotPrimitive { symbol: char, missing: char },

    #[error("length {requested} is beyond the certified range (stabilized to {achieved})")]
    OutOfCertifiedRange { requested: usize, achieved: usize },

    #[error("word {word} is not a certified factor")]
    NotInLanguage { word: String },

    #[error("undefined on an eventually periodic language (complexity stalls at n = {flagged_at})")]
    PeriodicUndefined { flagged_at: usize },

    #[error("search horizon binds: value is at least {lower_bound}")]
    HorizonCapped { lower_bound: usize },

    #[error("word of length {got} too short for range {range} (need at least {needed})")]
    WordTooShort { range: usize, needed: usize, got: usize },

    #[error("window {window} is missing from the rule table")]
    WindowNotInTable { window: String },

    #[error("rule table is not total on the certified windows: {missing} of {total} missing")]
    TableNotTotal { missing: usize, total: usize },

    #[error("candidate table count {estimate:.3e} exceeds the cap {cap}")]
    CandidateCapExceeded { estimate: f64, cap: u64 },

    #[error("composite range {range} needs windows of length {needed}, certified only to {available}")]
    RangeCapExceeded { range: usize, needed: usize, available: usize },

    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },

    #[error("return gap for {word} not certified: a factor of the longest certified length still avoids it")]
    ReturnGapUncertified { word: String, achieved: usize },

    #[error("no qualifying word found: best certified two-sided unique extension is {best}, need {needed}")]
    MarkedWordNotFound { best: usize, needed: usize },

    #[error("factor storage budget of {budget} bytes exceeded while extracting length {at_length}")]
    FactorBudgetExceeded { budget: u64, at_length: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cylinder action of {word} depends on the ambient padding: {first} vs {second}")]
    PaddingDependence { word: String, first: String, second: String },

    #[error("instance falsification: {0}")]
    Falsified(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit-status class for the command-line driver: 1 = instance
    /// falsification, 2 = usage/config, 3 = resource cap.
    pub fn exit_class(&self) -> i32 {
        use Error::*;
        match self {
            Falsified(_) | PaddingDependence { .. } | Certification(_) => 1,
            CandidateCapExceeded { .. }
            | RangeCapExceeded { .. }
            | ClosureCapExceeded { .. }
            | OutOfCertifiedRange { .. }
            | HorizonCapped { .. }
            | FactorBudgetExceeded { .. }
            | ReturnGapUncertified { .. } => 3,
            _ => 2,
        }
    }
}
