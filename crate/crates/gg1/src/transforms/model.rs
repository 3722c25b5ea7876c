use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::transforms::exppoly::ExpSum;
use crate::transforms::spec::TransformSpec;

/// Interarrival law `A` and service law `B` of a G/G/1 queue.
#[derive(Clone, Debug, PartialEq)]
pub struct QueueModel<T> {
    pub interarrival: TransformSpec<T>,
    pub service: TransformSpec<T>,
    pub rho: T,
}

impl<T: Real> QueueModel<T> {
    pub fn new(interarrival: TransformSpec<T>, service: TransformSpec<T>) -> Result<Self> {
        interarrival.validate()?;
        service.validate()?;
        let ma = interarrival.mean();
        if ma <= T::zero() {
            return Err(Error::InvalidSpec("mean interarrival time must be positive".into()));
        }
        let rho = service.mean() / ma;
        if !(rho < T::one()) {
            return Err(Error::Unstable(rho.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            interarrival,
            service,
            rho,
        })
    }

    /// `F(θ) = B(θ)A(-θ) - 1` (`order = 0`) or `F'(θ)` (`order = 1`).
    pub fn eval_f(&self, z: C<T>, order: u8) -> Result<C<T>> {
        let (b, db) = self.service.laplace_with_deriv(z)?;
        let (a, da) = self.interarrival.laplace_with_deriv(-z)?;
        Ok(match order {
            0 => b * a - T::one(),
            _ => db * a - b * da,
        })
    }

    /// `F` as an exponential sum about θ = ∞ (exact unless a law is rational).
    pub fn f_expansion(&self, len: usize) -> Result<(ExpSum<T>, bool)> {
        let unsupported = || Error::Unsupported("transform has no exponential-sum expansion".into());
        let (b, eb) = self.service.expansion_at_infinity(len).ok_or_else(unsupported)?;
        let (a, ea) = self.interarrival.expansion_at_infinity(len).ok_or_else(unsupported)?;
        let mut f = b.times(&a.reflected());
        f.constant -= T::one();
        f.normalize(T::lit(1e-14));
        Ok((f, eb && ea))
    }
}
