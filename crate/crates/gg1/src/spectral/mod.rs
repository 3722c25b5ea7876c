//! Spectral expansion of the waiting-time transform ψ: coefficients, tails,
//! idle probability, cumulants and moments.

pub mod coefficients;
pub mod cumulants;
pub mod erlang;
pub mod euler;
pub mod expansion;
pub mod helper;
pub mod solve;

pub use coefficients::{
    coefficients_naive, coefficients_telescoped, expansion_naive, expansion_telescoped, naive_product, pole_list,
};
pub use cumulants::{cumulant, cumulants_from_moments, idle_probability, moments_from_cumulants, IdleEstimate};
pub use erlang::ErlangDeterministic;
pub use euler::{big_omega, euler_tools, omega, sinh_tail_product, tail_product, EulerTools};
pub use expansion::{Pole, SpectralExpansion, Truncation};
pub use helper::HelperFunction;
pub use solve::{real_left_zero, Coefficients, HelperAnalysis, Solver};
