//! Closed forms for `Σ 1/(b² + j²)`-type series and the matching products.

use crate::scalar::Real;

/// `Σ_{j≥1} 1/(b² + j²) = (bπ coth(bπ) - 1) / (2b²)`.
pub fn omega<T: Real>(b: T) -> T {
    let x = b * T::PI();
    if x < T::lit(1e-4) {
        // small-b limit π²/6 - b² π⁴/90
        let p2 = T::PI() * T::PI();
        return p2 / T::lit(6.0) - b * b * p2 * p2 / T::lit(90.0);
    }
    (x / x.tanh() - T::one()) / (T::lit(2.0) * b * b)
}

/// `Ω(b) = Σ_{j≥1} 1/(b² + (2πj)²) = (b coth(b/2)/2 - 1) / (2b²)`.
pub fn big_omega<T: Real>(b: T) -> T {
    let two = T::lit(2.0);
    if b < T::lit(1e-4) {
        return T::one() / T::lit(24.0) - b * b / T::lit(1440.0);
    }
    (b / (two * (b / two).tanh()) - T::one()) / (two * b * b)
}

/// `Σ_{j≥n} 1/(b² + (2πj)²)`, `n ≥ 1`.
pub fn big_omega_tail<T: Real>(b: T, n: usize) -> T {
    let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
    let mut s = big_omega(b);
    for j in 1..n {
        let jf = T::from_usize_lossy(j);
        s -= T::one() / (b * b + four_pi2 * jf * jf);
    }
    s
}

/// `Π_{j≥1} (1 + b²/(4π²j²)) = sinh(b/2) / (b/2)`.
fn sinh_ratio<T: Real>(b: T) -> T {
    let h = b / T::lit(2.0);
    if h.abs() < T::lit(1e-8) {
        T::one()
    } else {
        h.sinh() / h
    }
}

/// `Π_{j≥n} (1 + 2λμ/(λ² + 4π²j²))` evaluated exactly through
/// `(a + 4π²j²)/(λ² + 4π²j²)` with `a = λ² + 2λμ` and the sinh product.
pub fn tail_product<T: Real>(lambda: T, mu: T, n: usize) -> T {
    let a = lambda * lambda + T::lit(2.0) * lambda * mu;
    let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
    let mut log_p = (sinh_ratio(a.sqrt()) / sinh_ratio(lambda)).ln();
    for j in 1..n {
        let jf = T::from_usize_lossy(j);
        log_p -= (T::one() + T::lit(2.0) * lambda * mu / (lambda * lambda + four_pi2 * jf * jf)).ln();
    }
    log_p.exp()
}

/// `Π_{j≥n} (1 + b²/(4π²j²))` from the sinh product.
pub fn sinh_tail_product<T: Real>(b: T, n: usize) -> T {
    let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
    let mut log_p = sinh_ratio(b).ln();
    for j in 1..n {
        let jf = T::from_usize_lossy(j);
        log_p -= (T::one() + b * b / (four_pi2 * jf * jf)).ln();
    }
    log_p.exp()
}

/// First-order version of [`tail_product`]: `exp(2λμ Σ_{j≥n} 1/(λ²+4π²j²))`,
/// with error `O(n^-3)`.
pub fn tail_product_approx<T: Real>(lambda: T, mu: T, n: usize) -> T {
    (T::lit(2.0) * lambda * mu * big_omega_tail(lambda, n)).exp()
}

/// Both quantities the gated model needs, bundled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerTools<T> {
    pub omega: T,
    pub tail_product: T,
}

pub fn euler_tools<T: Real>(b: T, mu: T, n: usize) -> EulerTools<T> {
    EulerTools {
        omega: big_omega(b),
        tail_product: tail_product(b, mu, n),
    }
}
