use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::transforms::exppoly::{ExpSum, ExpTerm};

/// Interarrival or service time distribution, described symbolically.
#[derive(Clone, Debug, PartialEq)]
pub enum TransformSpec<T> {
    Deterministic { d: T },
    Exponential { rate: T },
    Erlang { shape: u32, rate: T },
    Uniform { lo: T, hi: T },
    /// Density `Σ coeffs[i] x^i` on `[lo, hi]`.
    PolynomialDensity { lo: T, hi: T, coeffs: Vec<T> },
    /// Finite mixture with weights summing to one.
    Mixture(Vec<(T, TransformSpec<T>)>),
    /// Poisson(`rate`) many customers per gate epoch, each needing a
    /// `per_customer` service time.
    GatedPoissonBatch { rate: T, per_customer: Box<TransformSpec<T>> },
}

/// A bounded polynomial density rewritten on `[0, 1]`:
/// `X = lo + w V`, `V` with density `Σ q[i] v^i`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Piece<T> {
    pub lo: T,
    pub w: T,
    pub q: Vec<T>,
}

impl<T: Real> Piece<T> {
    pub fn from_poly(lo: T, hi: T, coeffs: &[T]) -> Self {
        let w = hi - lo;
        let n = coeffs.len();
        let mut q = vec![T::zero(); n];
        for (k, ck) in coeffs.iter().enumerate() {
            // (lo + w v)^k = Σ_i C(k,i) lo^{k-i} w^i v^i
            let mut binom = T::one();
            for (i, qi) in q.iter_mut().enumerate().take(k + 1) {
                if i > 0 {
                    binom = binom * T::from_usize_lossy(k - i + 1) / T::from_usize_lossy(i);
                }
                *qi += *ck * binom * lo.powi((k - i) as i32) * w.powi(i as i32 + 1);
            }
        }
        Self { lo, w, q }
    }

    /// `E V^j`.
    pub fn v_moment(&self, j: usize) -> T {
        self.q
            .iter()
            .enumerate()
            .fold(T::zero(), |s, (i, qi)| s + *qi / T::from_usize_lossy(i + j + 1))
    }

    pub fn moment(&self, j: usize) -> T {
        let mut s = T::zero();
        let mut binom = T::one();
        for i in 0..=j {
            if i > 0 {
                binom = binom * T::from_usize_lossy(j - i + 1) / T::from_usize_lossy(i);
            }
            s += binom * self.lo.powi((j - i) as i32) * self.w.powi(i as i32) * self.v_moment(i);
        }
        s
    }

    /// `g^{(n)}(v)` for the `[0,1]` density `g`.
    fn g_deriv(&self, n: usize, v: T) -> T {
        let mut s = T::zero();
        for (i, qi) in self.q.iter().enumerate().skip(n) {
            let mut f = T::one();
            for r in 0..n {
                f *= T::from_usize_lossy(i - r);
            }
            s += *qi * f * v.powi((i - n) as i32);
        }
        s
    }

    /// `G(s) = E exp(-sV)` and `G'(s)`.
    fn g_transform(&self, s: C<T>) -> (C<T>, C<T>) {
        let zero = C::new(T::zero(), T::zero());
        if s.norm() < T::one() {
            let mut g = zero;
            let mut gp = zero;
            let mut pw = C::new(T::one(), T::zero());
            let mut fact = T::one();
            for j in 0..60 {
                if j > 0 {
                    pw = pw * (-s);
                    fact *= T::from_usize_lossy(j);
                }
                let tg = pw * (self.v_moment(j) / fact);
                g += tg;
                gp -= pw * (self.v_moment(j + 1) / fact);
                if j > 4 && tg.norm() < T::epsilon() * T::lit(1e-3) * g.norm() {
                    break;
                }
            }
            (g, gp)
        } else {
            let e = (-s).exp();
            let inv = s.inv();
            let mut g = zero;
            let mut gp = zero;
            let mut invp = inv;
            for n in 0..self.q.len() {
                let a = self.g_deriv(n, T::zero());
                let b = self.g_deriv(n, T::one());
                let num = -(e * b) + a;
                g += num * invp;
                gp += (e * b) * invp - num * invp * inv * T::from_usize_lossy(n + 1);
                invp = invp * inv;
            }
            (g, gp)
        }
    }

    pub fn transform(&self, z: C<T>) -> (C<T>, C<T>) {
        let e = (-z * self.lo).exp();
        let (g, gp) = self.g_transform(z * self.w);
        let v = e * g;
        (v, -v * self.lo + e * gp * self.w)
    }

    pub fn exp_form(&self) -> ExpSum<T> {
        let n = self.q.len();
        let mut a = vec![T::zero(); n + 1];
        let mut b = vec![T::zero(); n + 1];
        let mut wp = self.w;
        for k in 0..n {
            a[k + 1] = self.g_deriv(k, T::zero()) / wp;
            b[k + 1] = -self.g_deriv(k, T::one()) / wp;
            wp *= self.w;
        }
        ExpSum::new(
            vec![
                ExpTerm::new(-self.lo, a),
                ExpTerm::new(-(self.lo + self.w), b),
            ],
            T::zero(),
        )
    }
}

impl<T: Real> TransformSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        match self {
            Self::Deterministic { d } => {
                if !(d.is_finite() && *d >= T::zero()) {
                    return bad("deterministic time must be >= 0");
                }
            }
            Self::Exponential { rate } => {
                if !(rate.is_finite() && *rate > T::zero()) {
                    return bad("rate must be > 0");
                }
            }
            Self::Erlang { shape, rate } => {
                if *shape < 1 || !(rate.is_finite() && *rate > T::zero()) {
                    return bad("erlang needs shape >= 1 and rate > 0");
                }
            }
            Self::Uniform { lo, hi } => {
                if !(*lo >= T::zero() && hi > lo && hi.is_finite()) {
                    return bad("uniform needs 0 <= lo < hi");
                }
            }
            Self::PolynomialDensity { lo, hi, coeffs } => {
                if !(*lo >= T::zero() && hi > lo && hi.is_finite()) || coeffs.is_empty() {
                    return bad("polynomial density needs 0 <= lo < hi and coefficients");
                }
                let piece = Piece::from_poly(*lo, *hi, coeffs);
                let mass = piece.v_moment(0);
                if (mass - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
                    return Err(Error::InvalidSpec(format!(
                        "polynomial density integrates to {mass}"
                    )));
                }
                let scale = coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()));
                for i in 0..=1000 {
                    let x = *lo + (*hi - *lo) * T::from_usize_lossy(i) / T::lit(1000.0);
                    let v = coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x + *c);
                    if v < -T::lit(1e-12) * scale {
                        return bad("polynomial density is negative on its support");
                    }
                }
            }
            Self::Mixture(parts) => {
                if parts.is_empty() {
                    return bad("empty mixture");
                }
                let mut total = T::zero();
                for (w, s) in parts {
                    if *w < T::zero() {
                        return bad("negative mixture weight");
                    }
                    if matches!(s, Self::GatedPoissonBatch { .. }) {
                        return bad("gated batches cannot be mixed");
                    }
                    s.validate()?;
                    total += *w;
                }
                if (total - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
                    return bad("mixture weights must sum to 1");
                }
            }
            Self::GatedPoissonBatch { rate, per_customer } => {
                if !(rate.is_finite() && *rate >= T::zero()) {
                    return bad("batch arrival rate must be >= 0");
                }
                per_customer.validate()?;
            }
        }
        Ok(())
    }

    /// Raw moment `E X^j`.
    pub fn moment(&self, j: usize) -> T {
        match self {
            Self::Deterministic { d } => d.powi(j as i32),
            Self::Exponential { rate } => crate::scalar::factorial::<T>(j) / rate.powi(j as i32),
            Self::Erlang { shape, rate } => {
                let mut s = T::one();
                for i in 0..j {
                    s = s * T::from_usize_lossy(*shape as usize + i) / *rate;
                }
                s
            }
            Self::Uniform { lo, hi } => Piece::from_poly(*lo, *hi, &[T::one() / (*hi - *lo)]).moment(j),
            Self::PolynomialDensity { lo, hi, coeffs } => Piece::from_poly(*lo, *hi, coeffs).moment(j),
            Self::Mixture(parts) => parts.iter().fold(T::zero(), |s, (w, p)| s + *w * p.moment(j)),
            Self::GatedPoissonBatch { rate, per_customer } => {
                // compound Poisson: cumulants are rate * E R^j
                let kappa: Vec<T> = (0..=j).map(|i| *rate * per_customer.moment(i)).collect();
                let mut m = vec![T::one(); j + 1];
                for n in 1..=j {
                    let mut s = T::zero();
                    let mut binom = T::one();
                    for i in 1..=n {
                        if i > 1 {
                            binom = binom * T::from_usize_lossy(n - i + 1) / T::from_usize_lossy(i - 1);
                        }
                        s += binom * kappa[i] * m[n - i];
                    }
                    m[n] = s;
                }
                m[j]
            }
        }
    }

    pub fn mean(&self) -> T {
        self.moment(1)
    }

    /// Largest point of the support (for finite kinds).
    pub fn support_max(&self) -> Option<T> {
        match self {
            Self::Deterministic { d } => Some(*d),
            Self::Uniform { hi, .. } | Self::PolynomialDensity { hi, .. } => Some(*hi),
            Self::Mixture(parts) => parts
                .iter()
                .map(|(_, p)| p.support_max())
                .try_fold(T::zero(), |m, x| x.map(|x| m.max(x))),
            _ => None,
        }
    }

    /// `E exp(-θX)`.
    pub fn laplace(&self, z: C<T>) -> Result<C<T>> {
        Ok(self.laplace_with_deriv(z)?.0)
    }

    /// `E exp(-θX)` together with its derivative in θ.
    pub fn laplace_with_deriv(&self, z: C<T>) -> Result<(C<T>, C<T>)> {
        match self {
            Self::Deterministic { d } => {
                let v = (-z * *d).exp();
                Ok((v, -v * *d))
            }
            Self::Exponential { rate } => rational(*rate, 1, z),
            Self::Erlang { shape, rate } => rational(*rate, *shape, z),
            Self::Uniform { lo, hi } => Ok(Piece::from_poly(*lo, *hi, &[T::one() / (*hi - *lo)]).transform(z)),
            Self::PolynomialDensity { lo, hi, coeffs } => Ok(Piece::from_poly(*lo, *hi, coeffs).transform(z)),
            Self::Mixture(parts) => {
                let mut v = C::new(T::zero(), T::zero());
                let mut dv = v;
                for (w, p) in parts {
                    let (a, b) = p.laplace_with_deriv(z)?;
                    v += a * *w;
                    dv += b * *w;
                }
                Ok((v, dv))
            }
            Self::GatedPoissonBatch { rate, per_customer } => {
                let (r, dr) = per_customer.laplace_with_deriv(z).map_err(|e| match e {
                    Error::PoleEvaluation => Error::NonAnalytic,
                    e => e,
                })?;
                let v = ((r - T::one()) * *rate).exp();
                Ok((v, v * dr * *rate))
            }
        }
    }

    /// Exact exponential-sum form, available for bounded piecewise polynomial laws.
    pub fn exp_form(&self) -> Option<ExpSum<T>> {
        match self {
            Self::Deterministic { d } => Some(ExpSum::single(-*d, vec![T::one()])),
            Self::Uniform { lo, hi } => Some(Piece::from_poly(*lo, *hi, &[T::one() / (*hi - *lo)]).exp_form()),
            Self::PolynomialDensity { lo, hi, coeffs } => Some(Piece::from_poly(*lo, *hi, coeffs).exp_form()),
            Self::Mixture(parts) => {
                let mut acc = ExpSum::constant(T::zero());
                for (w, p) in parts {
                    acc = acc.plus(&p.exp_form()?.scaled(*w));
                }
                Some(acc)
            }
            _ => None,
        }
    }

    /// Expansion about θ = ∞ as an exponential sum; rational laws are
    /// truncated after `len` coefficients of their series in `1/θ`.
    /// The flag reports whether the result is exact.
    pub fn expansion_at_infinity(&self, len: usize) -> Option<(ExpSum<T>, bool)> {
        if let Some(e) = self.exp_form() {
            return Some((e, true));
        }
        let (k, r) = match self {
            Self::Exponential { rate } => (1usize, *rate),
            Self::Erlang { shape, rate } => (*shape as usize, *rate),
            _ => return None,
        };
        // (r/(r+θ))^k = Σ_n (-1)^n C(k+n-1, n) r^{k+n} θ^{-(k+n)}
        let mut c = vec![T::zero(); k + len];
        let mut binom = T::one();
        for n in 0..len {
            if n > 0 {
                binom = binom * T::from_usize_lossy(k + n - 1) / T::from_usize_lossy(n);
            }
            let sign = if n % 2 == 0 { T::one() } else { -T::one() };
            c[k + n] = sign * binom * r.powi((k + n) as i32);
        }
        Some((ExpSum::single(T::zero(), c), false))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Self::Exponential { .. } | Self::Erlang { .. })
    }
}

fn rational<T: Real>(rate: T, k: u32, z: C<T>) -> Result<(C<T>, C<T>)> {
    let den = z + rate;
    if den.norm() <= T::epsilon() * rate {
        return Err(Error::PoleEvaluation);
    }
    let base = den.inv() * rate;
    let v = base.powi(k as i32);
    let dv = -v * base * (T::from_usize_lossy(k as usize) / rate);
    Ok((v, dv))
}
