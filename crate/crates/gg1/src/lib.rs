//! Waiting-time distributions of the G/G/1 queue by spectral factorization:
//! zeros of `F(θ) = B(θ)A(-θ) - 1` are located with a closed-form helper
//! function, and ψ, the transform of the stationary workload, is expanded
//! over them.
//!
//! Generic code takes any [`Real`] scalar; the aliases below fix `f64`.

pub mod error;
pub mod gated_mm1;
pub mod oracles;
pub mod rootfinder;
pub mod scalar;
pub mod spectral;
pub mod sum;
pub mod transforms;

pub use error::{Error, Result};
pub use gated_mm1::MeanMethod;
pub use spectral::Coefficients;
pub use scalar::Real;

pub type Complex = num_complex::Complex<f64>;
pub type Spec = transforms::TransformSpec<f64>;
pub type Model = transforms::QueueModel<f64>;
pub type ExpSum = transforms::ExpSum<f64>;
pub type CoreTerm = rootfinder::CoreTerm<f64>;
pub type RootLadder = rootfinder::RootLadder<f64>;
pub type Helper = spectral::HelperFunction<f64>;
pub type Analysis = spectral::HelperAnalysis<f64>;
pub type Expansion = spectral::SpectralExpansion<f64>;
pub type ErlangDeterministic = spectral::ErlangDeterministic<f64>;
pub type GatedModel = gated_mm1::GatedModel<f64>;
pub type Solver = spectral::Solver<f64>;
