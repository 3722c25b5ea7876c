//! Distributions, their Laplace transforms, and the exponential-term
//! structure of `F(θ) = B(θ)A(-θ) - 1`.

pub mod decompose;
pub mod exppoly;
pub mod file;
pub mod model;
pub mod spec;

pub use decompose::{decompose_f, DecompTerm, ExponentDecomposition};
pub use exppoly::{EntireExpPoly, ExpSum, ExpTerm};
pub use model::QueueModel;
pub use spec::TransformSpec;

use crate::error::Result;
use crate::scalar::{Real, C};

/// `E exp(-θX)` for the law `spec`.
pub fn eval_transform<T: Real>(spec: &TransformSpec<T>, z: C<T>) -> Result<C<T>> {
    spec.laplace(z)
}

/// `F` (`order = 0`) or `F'` (`order = 1`) of the queue.
pub fn eval_f<T: Real>(model: &QueueModel<T>, z: C<T>, order: u8) -> Result<C<T>> {
    model.eval_f(z, order)
}
