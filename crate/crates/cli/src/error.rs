use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("unknown config key `{key}` (this command accepts: {allowed})")]
    UnknownKey { key: String, allowed: String },
    #[error("missing config key `{0}`")]
    MissingKey(String),
    #[error("bad value `{value}` for `{key}`: {why}")]
    BadValue { key: String, value: String, why: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] ckl_core::Error),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("{0} integrals did not converge (pass --allow-nonconverged to keep the output)")]
    NonConverged(usize),
    #[error("worker pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
