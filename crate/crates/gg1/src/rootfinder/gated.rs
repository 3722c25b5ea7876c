use crate::scalar::{Real, C};

/// Principal square root of `x + iy`, arranged to avoid cancellation.
pub fn stable_sqrt<T: Real>(x: T, y: T) -> C<T> {
    let r = x.hypot(y);
    if r == T::zero() {
        return C::new(T::zero(), T::zero());
    }
    let two = T::lit(2.0);
    if x >= T::zero() {
        let c = ((r + x) / two).sqrt();
        C::new(c, y / (two * c))
    } else {
        let d = ((r - x) / two).sqrt();
        let d = if y < T::zero() { -d } else { d };
        C::new(y / (two * d), d)
    }
}

/// Zeros `(r_n, s_n)` of `θ² + θ(μ - λ - 2πin) - 2πinμ` for the gated M/M/1
/// queue: `Re r_n ≥ 0 ≥ Re s_n`, `r_0 = 0`, `s_0 = λ - μ`.
pub fn gated_roots<T: Real>(lambda: T, mu: T, n: i64) -> (C<T>, C<T>) {
    let two = T::lit(2.0);
    let nf = T::lit(n as f64);
    let a = (lambda - mu) / two;
    let b = nf * T::PI();
    if n == 0 {
        return (C::new(T::zero(), T::zero()), C::new(lambda - mu, T::zero()));
    }
    let x = a * a - b * b;
    let y = (mu + lambda) * b;
    let s = stable_sqrt(x, y);
    let base = C::new(a, b);
    let (p, q) = (base + s, base - s);
    if p.re >= q.re {
        (p, q)
    } else {
        (q, p)
    }
}
