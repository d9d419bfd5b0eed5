use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "{what} did not converge: order {coarse_order} gave {coarse:e}, \
         order {fine_order} gave {fine:e} (tolerance {tolerance:e})"
    )]
    NonConvergence {
        what: &'static str,
        coarse_order: usize,
        fine_order: usize,
        coarse: f64,
        fine: f64,
        tolerance: f64,
    },

    #[error("matrix is not positive definite ({0})")]
    NotPositiveDefinite(&'static str),

    #[error("eigenvalues of JΣ do not form ±iλ pairs: {0}")]
    SpectrumPairing(String),

    #[error("covariance matrix violates the Robertson–Schrödinger bound (margin {margin:e})")]
    NonPhysical { margin: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}
