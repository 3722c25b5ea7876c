//! Zeros of `F`: core-term seeds, the Newton root ladder, zeros near the
//! origin, and the closed-form zeros of the gated M/M/1 queue.

pub mod core;
pub mod gated;
pub mod ladder;
pub mod newton;
pub mod origin;

pub use self::core::{Branch, CoreTerm, SigmaSystem};
pub use gated::gated_roots;
pub use ladder::{residual, LadderProblem, LadderWalker, RootLadder};
pub use newton::{newton_refine, FnTarget, NewtonOutcome, Target};
pub use origin::{full_multiset, winding_count, zeros_in_rect, Analytic, OriginRoot, Rect};

use crate::error::Result;
use crate::scalar::{Real, C};

/// Upper-half-plane zeros `u_n` of the core term for `n_from ≤ n ≤ n_to`.
pub fn core_roots<T: Real>(core: &CoreTerm<T>, n_from: i64, n_to: i64) -> Result<Vec<C<T>>> {
    core.roots(n_from, n_to)
}

/// Appends `count` entries to `ladder`.
pub fn extend_ladder<T: Real>(ladder: &mut RootLadder<T>, problem: &LadderProblem<T>, count: usize) -> Result<()> {
    ladder.extend(problem, count, true)
}
