use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("length {length} lies outside the isotherm window starting at {base}")]
    OutsideIsotherm { length: f64, base: f64 },

    #[error("invalid cycle geometry: {0}")]
    Geometry(String),

    #[error("quadrature did not converge within {intervals} intervals (estimate {estimate}, error {error_estimate})")]
    Quadrature { estimate: f64, error_estimate: f64, intervals: usize },

    #[error("truncation needs {needed} terms, budget is {budget}")]
    Truncation { needed: u64, budget: u64 },

    #[error("identity not certified: sum {achieved_sum} after {terms_used} terms, tail bound {tail_bound}, residual {residual}")]
    IdentityNotCertified { achieved_sum: f64, tail_bound: f64, terms_used: u64, residual: f64 },

    #[error("cosine series pole: u = {u} is within 1e-9 of an integer")]
    Pole { u: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: impl num_traits::ToPrimitive) -> Self {
        Error::Domain { what, value: value.to_f64().unwrap_or(f64::NAN) }
    }
}
