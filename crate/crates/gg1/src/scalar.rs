use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the numerical core is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the type cannot hold finite doubles at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer not representable")
    }

    /// Default Newton residual tolerance for this precision.
    fn default_eps() -> Self;
}

impl Real for f64 {
    fn default_eps() -> Self {
        1e-11
    }
}

impl Real for f32 {
    fn default_eps() -> Self {
        2e-4
    }
}

pub type C<T> = Complex<T>;

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `z^(-k)` for small non-negative `k`.
#[inline]
pub fn inv_powi<T: Real>(z: C<T>, k: usize) -> C<T> {
    z.inv().powi(k as i32)
}

/// Natural log of `n!` for moderate `n` (exact summation of logs).
pub fn ln_factorial<T: Real>(n: usize) -> T {
    let mut s = T::zero();
    for i in 2..=n {
        s += T::from_usize_lossy(i).ln();
    }
    s
}

pub fn factorial<T: Real>(n: usize) -> T {
    let mut s = T::one();
    for i in 2..=n {
        s *= T::from_usize_lossy(i);
    }
    s
}
