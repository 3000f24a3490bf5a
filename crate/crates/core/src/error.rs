use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid drive parameters: {0}")]
    InvalidParams(String),

    #[error("invalid propagation config: {0}")]
    InvalidConfig(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis mismatch between state and Hamiltonian")]
    BasisMismatch,

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("norm drifted to {norm} during propagation")]
    NormDrift { norm: f64 },

    #[error("not in adiabatic regime: {0}")]
    NotAdiabatic(String),

    #[error("eliminated block not invertible")]
    SingularBlock,

    #[error("cannot adiabatically track dressed state: {0}")]
    CannotTrack(String),

    #[error("n_atoms = {n_atoms} exceeds the brute-force cap of {cap}")]
    TooManyAtoms { n_atoms: usize, cap: usize },

    #[error("collective state {label} needs at least {needed} atoms, got {n_atoms}")]
    IncompatibleLabel {
        label: &'static str,
        needed: usize,
        n_atoms: usize,
    },

    #[error("trajectory carries no amplitudes")]
    MissingAmplitudes,

    #[error("time {t} outside trajectory range [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("empty parameter grid")]
    EmptyGrid,
}

impl Error {
    /// Errors caused by the physics leaving the regime where a computation
    /// is meaningful, as opposed to malformed input.
    pub fn is_numeric_regime(&self) -> bool {
        matches!(
            self,
            Error::NotAdiabatic(_)
                | Error::SingularBlock
                | Error::CannotTrack(_)
                | Error::NormDrift { .. }
        )
    }
}
