use crate::error::{Error, Result};
use crate::rootfinder::origin::is_real;
use crate::scalar::{factorial, Real, C};
use crate::sum::CompensatedC;

/// A pole of ψ in the left half plane (upper-half representative) with its
/// partial-fraction coefficients `a[j-1]` for `(1 - θ/z)^(-j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pole<T> {
    pub z: C<T>,
    pub multiplicity: u8,
    pub a: [C<T>; 2],
}

impl<T: Real> Pole<T> {
    pub fn simple(z: C<T>, a: C<T>) -> Self {
        Self {
            z,
            multiplicity: 1,
            a: [a, C::new(T::zero(), T::zero())],
        }
    }

    pub fn is_real(&self) -> bool {
        is_real(self.z)
    }
}

/// Truncation settings an expansion was built with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    /// Poles stored.
    pub k_roots: usize,
    /// Product length used per coefficient.
    pub k_tailproduct: usize,
}

/// Partial-fraction form `ψ(θ) = 1 + Σ a_{n,j} ((1 - θ/z_n)^(-j) - 1)`,
/// summed over the stored poles and their conjugates.
#[derive(Clone, Debug)]
pub struct SpectralExpansion<T> {
    pub alpha: T,
    /// Origin poles first, then the ladder in increasing order.
    pub poles: Vec<Pole<T>>,
    pub truncation: Truncation,
}

/// Imaginary residue above which a real output is rejected.
pub const LEAK_ERROR: f64 = 1e-7;

impl<T: Real> SpectralExpansion<T> {
    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    fn take(&self, n: usize) -> Result<&[Pole<T>]> {
        if n > self.poles.len() {
            return Err(Error::NotEnoughRoots {
                need: n,
                have: self.poles.len(),
            });
        }
        Ok(&self.poles[..n])
    }

    /// Sum of `term(pole)` over the first `n` poles, conjugates included.
    fn real_sum(&self, n: usize, term: impl Fn(&Pole<T>) -> C<T>) -> Result<T> {
        let mut acc = CompensatedC::new();
        let mut scale = T::zero();
        for p in self.take(n)? {
            let c = term(p);
            scale = scale.max(c.norm());
            if p.is_real() {
                acc.add(c);
            } else {
                acc.add(C::new(c.re * T::lit(2.0), T::zero()));
            }
        }
        let v = acc.value();
        let leak = v.im.abs();
        if leak > T::lit(LEAK_ERROR) * T::one().max(scale) {
            return Err(Error::ImaginaryLeak(leak.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(v.re)
    }

    /// `P(W > t)` from the first `n` poles.
    pub fn tail(&self, t: T, n: usize) -> Result<T> {
        self.real_sum(n, |p| {
            let e = (p.z * t).exp();
            let mut s = e * p.a[0];
            if p.multiplicity == 2 {
                s += e * p.a[1] * (-(p.z * t) + T::one());
            }
            s
        })
    }

    /// `E W^ν` from the first `n` poles.
    pub fn moment(&self, nu: u32, n: usize) -> Result<T> {
        let nu_ = nu as usize;
        let sign = if nu % 2 == 0 { T::one() } else { -T::one() };
        let v = self.real_sum(n, |p| {
            let zi = p.z.powi(-(nu as i32));
            let mut s = zi * p.a[0] * factorial::<T>(nu_);
            if p.multiplicity == 2 {
                s += zi * p.a[1] * factorial::<T>(nu_ + 1);
            }
            s
        })?;
        Ok(sign * v)
    }

    /// ψ at real `θ` from the first `n` poles.
    pub fn psi(&self, theta: T, n: usize) -> Result<T> {
        let v = self.real_sum(n, |p| {
            let r = (-(C::new(theta, T::zero()) / p.z) + T::one()).inv();
            let mut s = p.a[0] * (r - T::one());
            if p.multiplicity == 2 {
                s += p.a[1] * (r * r - T::one());
            }
            s
        })?;
        Ok(T::one() + v)
    }
}
