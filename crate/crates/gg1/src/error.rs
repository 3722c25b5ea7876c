use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidSpec(String),
    #[error("unstable queue: traffic intensity {0} >= 1")]
    Unstable(f64),
    #[error("transform evaluated at its pole")]
    PoleEvaluation,
    #[error("transform evaluated at an essential singularity")]
    NonAnalytic,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("Newton iteration did not converge (index {index:?}, residual {residual:e})")]
    NoConvergence { index: Option<i64>, residual: f64 },
    #[error("derivative vanished during Newton iteration")]
    DerivativeVanished,
    #[error("no bracket for the real root system: {0}")]
    NoBracket(String),
    #[error("root count mismatch: winding number {winding}, polished roots {found}")]
    CountMismatch { winding: i64, found: usize },
    #[error("helper mismatch at index {index}: relative difference {rel:e}")]
    HelperMismatch { index: usize, rel: f64 },
    #[error("repeated root near {0}")]
    RepeatedRoot(String),
    #[error("imaginary leakage {0:e} in a real output")]
    ImaginaryLeak(f64),
    #[error("value {0} is not a probability")]
    NonProbability(f64),
    #[error("stationary iteration did not converge: L1 change {0:e}")]
    NoStationaryConvergence(f64),
    #[error("not enough roots: need {need}, have {have}")]
    NotEnoughRoots { need: usize, have: usize },
    #[error("model file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
