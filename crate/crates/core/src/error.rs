use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: &'static str, reason: String },

    #[error(
        "photon-number truncation n_max = {n_max} leaves tail mass {tail:.3e} >= 1e-12; \
         smallest admissible n_max is {minimal}"
    )]
    Truncation { n_max: usize, tail: f64, minimal: usize },

    #[error("reduced density matrix failed `{check}` (offending value {value:.3e})")]
    Inconsistent { check: &'static str, value: f64 },

    #[error("mode bath: {0}")]
    Bath(String),

    #[error("integration norm drift {drift:.3e} exceeds 1e-6 at t = {t}")]
    NormDrift { drift: f64, t: f64 },
}
