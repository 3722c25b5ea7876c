use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::transforms::EntireExpPoly;

/// Something Newton's method can be run on.
pub trait Target<T: Real> {
    /// Value and first derivative.
    fn value_deriv(&self, z: C<T>) -> (C<T>, C<T>);

    /// Magnitude the residual is measured against.
    fn scale(&self, _z: C<T>) -> T {
        T::one()
    }
}

/// Adapts a closure returning `(f, f')`.
pub struct FnTarget<F>(pub F);

impl<T: Real, F: Fn(C<T>) -> (C<T>, C<T>)> Target<T> for FnTarget<F> {
    fn value_deriv(&self, z: C<T>) -> (C<T>, C<T>) {
        (self.0)(z)
    }
}

impl<T: Real> Target<T> for EntireExpPoly<T> {
    fn value_deriv(&self, z: C<T>) -> (C<T>, C<T>) {
        let d = self.eval_derivs(z, 1);
        (d[0], d[1])
    }

    fn scale(&self, z: C<T>) -> T {
        EntireExpPoly::scale(self, z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOutcome<T> {
    pub z: C<T>,
    /// Number of `z ← z - f/f'` updates performed.
    pub steps: usize,
    /// `|f(z)| / scale(z)` at the returned point.
    pub residual: T,
}

/// Plain Newton–Raphson. Stops once `|f(z)| < eps * scale(z)`, or when the
/// update stalls at rounding level with the residual already below `eps`
/// relative to the conditioning seen along the way.
pub fn newton_refine<T: Real, G: Target<T> + ?Sized>(
    g: &G,
    z0: C<T>,
    eps: T,
    max_iter: usize,
) -> Result<NewtonOutcome<T>> {
    let mut z = z0;
    let mut steps = 0;
    loop {
        let (f, df) = g.value_deriv(z);
        let residual = f.norm() / g.scale(z);
        if !residual.is_finite() {
            return Err(Error::NoConvergence {
                index: None,
                residual: f64::INFINITY,
            });
        }
        if residual < eps {
            return Ok(NewtonOutcome { z, steps, residual });
        }
        if steps >= max_iter {
            return Err(Error::NoConvergence {
                index: None,
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        if df.norm() < T::min_positive_value().max(T::lit(1e-300)) {
            return Err(Error::DerivativeVanished);
        }
        let step = f / df;
        z = z - step;
        steps += 1;
        if step.norm() <= T::epsilon() * T::lit(4.0) * (T::one() + z.norm()) {
            // stalled at rounding level: accept if the attainable accuracy is reached
            let (f, df) = g.value_deriv(z);
            let residual = f.norm() / g.scale(z);
            let floor = T::epsilon() * T::lit(64.0) * df.norm() * (T::one() + z.norm()) / g.scale(z);
            if residual < eps || residual <= floor {
                return Ok(NewtonOutcome { z, steps, residual });
            }
        }
    }
}
