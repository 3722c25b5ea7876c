//! Independent reference computations: Takács' M/D/1 formula, a truncated
//! Markov chain for the gated queue, and Lindley-recursion simulation.

pub mod lindley;
pub mod markov;
pub mod takacs;

pub use lindley::{lindley_simulate, Sampler, SimulationResult};
pub use markov::{gated_markov, MarkovResult};
pub use takacs::takacs_md1_tail;
