use std::path::PathBuf;

/// Errors produced anywhere in the workbench.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid puncturing distribution: {0}")]
    InvalidPuncturing(String),

    #[error("infeasible rate set: {0}")]
    InfeasibleRates(String),

    #[error("graph construction failed: {0}")]
    Construction(String),

    #[error("parity-check matrix is rank deficient by {gap} rows out of {rows}")]
    RankDeficient { gap: usize, rows: usize },

    #[error("infeasible puncture pattern: {0}")]
    InfeasiblePattern(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical error: {0}")]
    Numeric(String),

    #[error("bisection bracket does not contain a sign change: [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("curve does not bracket the target on the {side} side: {detail}")]
    Range { side: &'static str, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error in {path}: {detail}")]
    Parse { path: PathBuf, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
