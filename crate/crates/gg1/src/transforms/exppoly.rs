use crate::scalar::{factorial, Real, C};

/// One exponential term `exp(alpha*θ) * Σ_k coeffs[k] θ^(-k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm<T> {
    pub alpha: T,
    pub coeffs: Vec<T>,
}

impl<T: Real> ExpTerm<T> {
    pub fn new(alpha: T, coeffs: Vec<T>) -> Self {
        Self { alpha, coeffs }
    }

    /// Index of the first nonzero coefficient, i.e. the pole order `k_j`.
    pub fn leading_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != T::zero())
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        let w = z.inv();
        let mut acc = C::new(T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * w + *c;
        }
        (z * self.alpha).exp() * acc
    }
}

/// Finite sum of exponential terms plus a constant.
/// Transforms of distributions with bounded, piecewise polynomial densities
/// are exactly of this shape.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum<T> {
    pub terms: Vec<ExpTerm<T>>,
    pub constant: T,
}

impl<T: Real> ExpSum<T> {
    pub fn new(terms: Vec<ExpTerm<T>>, constant: T) -> Self {
        let mut s = Self { terms, constant };
        s.normalize(T::zero());
        s
    }

    pub fn constant(c: T) -> Self {
        Self {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn single(alpha: T, coeffs: Vec<T>) -> Self {
        Self::new(vec![ExpTerm::new(alpha, coeffs)], T::zero())
    }

    /// Merges terms with (numerically) equal exponents, sorts by exponent and
    /// drops coefficients below `drop_tol` relative to the largest one.
    pub fn normalize(&mut self, drop_tol: T) {
        let mut terms = std::mem::take(&mut self.terms);
        terms.sort_by(|a, b| a.alpha.partial_cmp(&b.alpha).unwrap());
        let mut merged: Vec<ExpTerm<T>> = Vec::new();
        for t in terms {
            if let Some(last) = merged.last_mut() {
                let tol = T::lit(1e-12) * T::one().max(t.alpha.abs());
                if (last.alpha - t.alpha).abs() <= tol {
                    if t.coeffs.len() > last.coeffs.len() {
                        last.coeffs.resize(t.coeffs.len(), T::zero());
                    }
                    for (a, b) in last.coeffs.iter_mut().zip(t.coeffs.iter()) {
                        *a += *b;
                    }
                    continue;
                }
            }
            merged.push(t);
        }
        // the θ^0 part of an alpha = 0 term belongs to `constant`
        for t in merged.iter_mut() {
            if t.alpha.abs() <= T::lit(1e-12) {
                t.alpha = T::zero();
                if let Some(c0) = t.coeffs.first_mut() {
                    self.constant += *c0;
                    *c0 = T::zero();
                }
            }
        }
        let big = merged
            .iter()
            .flat_map(|t| t.coeffs.iter())
            .fold(T::zero(), |m, c| m.max(c.abs()));
        let cut = drop_tol * big;
        for t in merged.iter_mut() {
            for c in t.coeffs.iter_mut() {
                if c.abs() <= cut {
                    *c = T::zero();
                }
            }
            while t.coeffs.last() == Some(&T::zero()) {
                t.coeffs.pop();
            }
        }
        merged.retain(|t| !t.coeffs.is_empty());
        self.terms = merged;
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm::new(t.alpha, t.coeffs.iter().map(|c| *c * s).collect()))
                .collect(),
            constant: self.constant * s,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(terms, self.constant + other.constant)
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut a = self.terms.clone();
        if self.constant != T::zero() {
            a.push(ExpTerm::new(T::zero(), vec![self.constant]));
        }
        let mut b = other.terms.clone();
        if other.constant != T::zero() {
            b.push(ExpTerm::new(T::zero(), vec![other.constant]));
        }
        let mut out = Vec::new();
        for x in &a {
            for y in &b {
                let mut c = vec![T::zero(); x.coeffs.len() + y.coeffs.len() - 1];
                for (i, p) in x.coeffs.iter().enumerate() {
                    for (j, q) in y.coeffs.iter().enumerate() {
                        c[i + j] += *p * *q;
                    }
                }
                out.push(ExpTerm::new(x.alpha + y.alpha, c));
            }
        }
        Self::new(out, T::zero())
    }

    /// The function `θ ↦ self(-θ)`.
    pub fn reflected(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|t| {
                    let c = t
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, c)| if k % 2 == 1 { -*c } else { *c })
                        .collect();
                    ExpTerm::new(-t.alpha, c)
                })
                .collect(),
            constant: self.constant,
        }
    }

    /// Keeps only terms whose exponent satisfies `keep`, each truncated to
    /// `max_len` coefficients.
    pub fn restricted(&self, keep: impl Fn(T) -> bool, max_len: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| keep(t.alpha))
            .map(|t| ExpTerm::new(t.alpha, t.coeffs.iter().take(max_len).cloned().collect()))
            .collect();
        Self::new(terms, self.constant)
    }

    /// Highest power of `θ^(-1)` present.
    pub fn max_pole(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.coeffs.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    pub fn min_alpha(&self) -> Option<T> {
        self.terms.first().map(|t| t.alpha)
    }

    pub fn max_alpha(&self) -> Option<T> {
        self.terms.last().map(|t| t.alpha)
    }

    /// Direct evaluation; singular at 0 when any term has a pole.
    pub fn eval(&self, z: C<T>) -> C<T> {
        let mut acc = C::new(self.constant, T::zero());
        for t in &self.terms {
            acc += t.eval(z);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut c = vec![T::zero(); t.coeffs.len() + 1];
                for (k, ck) in t.coeffs.iter().enumerate() {
                    c[k] += t.alpha * *ck;
                    c[k + 1] -= T::from_usize_lossy(k) * *ck;
                }
                ExpTerm::new(t.alpha, c)
            })
            .collect();
        Self::new(terms, T::zero())
    }

    /// Laurent coefficients at 0: entry `i` multiplies `θ^(i - max_pole)`,
    /// for powers up to `pmax`.
    pub fn laurent(&self, pmax: usize) -> Vec<T> {
        let kmax = self.max_pole();
        let n = kmax + pmax + 1;
        let mut out = vec![T::zero(); n];
        for t in &self.terms {
            for (k, ck) in t.coeffs.iter().enumerate() {
                if *ck == T::zero() {
                    continue;
                }
                // e^{αθ} θ^{-k} = Σ_l α^l/l! θ^{l-k}
                let mut a_pow = T::one();
                let mut fact = T::one();
                for l in 0.. {
                    let idx = kmax + l - k;
                    if idx >= n {
                        break;
                    }
                    if l > 0 {
                        a_pow *= t.alpha;
                        fact *= T::from_usize_lossy(l);
                    }
                    out[idx] += *ck * a_pow / fact;
                }
            }
        }
        out[kmax] += self.constant;
        out
    }

    /// Magnitude scale of the Laurent contributions (for deciding what cancels).
    pub fn laurent_scale(&self, pmax: usize) -> Vec<T> {
        let kmax = self.max_pole();
        let n = kmax + pmax + 1;
        let mut out = vec![T::zero(); n];
        for t in &self.terms {
            for (k, ck) in t.coeffs.iter().enumerate() {
                for l in 0.. {
                    let idx = kmax + l - k;
                    if idx >= n {
                        break;
                    }
                    out[idx] += (*ck * t.alpha.powi(l as i32)).abs() / factorial::<T>(l);
                }
            }
        }
        out[kmax] += self.constant.abs();
        out
    }

    /// Largest `|alpha|`, the natural inverse length scale of the sum.
    pub fn width(&self) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |m, t| m.max(t.alpha.abs()))
    }

    /// Evaluation for sums known to be analytic at 0: near 0 the Taylor
    /// series is used to avoid cancellation between the terms.
    pub fn eval_regular(&self, z: C<T>) -> C<T> {
        let w = self.width();
        if z.norm() * w < T::lit(0.5) || z.norm() == T::zero() {
            self.taylor_eval(z, 0)
        } else {
            self.eval(z)
        }
    }

    /// `r`-th derivative of the regular part evaluated by Taylor series.
    fn taylor_eval(&self, z: C<T>, r: usize) -> C<T> {
        let pmax = 40 + r;
        let lau = self.laurent(pmax);
        let kmax = self.max_pole();
        let mut acc = C::new(T::zero(), T::zero());
        for p in (r..=pmax).rev() {
            let coef = lau[kmax + p] * falling(p, r);
            acc = acc * z + coef;
        }
        acc
    }

    /// First derivative for sums analytic at 0.
    pub fn eval_regular_deriv(&self, z: C<T>) -> C<T> {
        let w = self.width();
        if z.norm() * w < T::lit(0.5) || z.norm() == T::zero() {
            self.taylor_eval(z, 1)
        } else {
            self.derivative().eval(z)
        }
    }

    /// `θ^power * self(θ)` as an entire function; `power >= max_pole()`.
    pub fn cleared(&self, power: usize) -> EntireExpPoly<T> {
        assert!(power >= self.max_pole());
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut p = vec![T::zero(); power + 1];
                for (k, c) in t.coeffs.iter().enumerate() {
                    p[power - k] += *c;
                }
                (t.alpha, p)
            })
            .collect();
        EntireExpPoly {
            terms,
            monomial: self.constant,
            power,
        }
    }
}

fn falling<T: Real>(p: usize, r: usize) -> T {
    let mut f = T::one();
    for i in 0..r {
        f *= T::from_usize_lossy(p - i);
    }
    f
}

/// `Σ exp(alpha θ) p(θ) + monomial θ^power` with polynomials in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct EntireExpPoly<T> {
    pub terms: Vec<(T, Vec<T>)>,
    pub monomial: T,
    pub power: usize,
}

impl<T: Real> EntireExpPoly<T> {
    /// Value and derivatives up to `order` (inclusive) at `z`.
    pub fn eval_derivs(&self, z: C<T>, order: usize) -> Vec<C<T>> {
        let zero = C::new(T::zero(), T::zero());
        let mut out = vec![zero; order + 1];
        let mut pd = vec![zero; order + 1];
        for (alpha, poly) in &self.terms {
            poly_derivs(poly, z, &mut pd);
            let e = (z * *alpha).exp();
            for (r, o) in out.iter_mut().enumerate() {
                // Leibniz: Σ_i C(r,i) α^{r-i} p^{(i)}
                let mut s = zero;
                let mut binom = T::one();
                for i in 0..=r {
                    if i > 0 {
                        binom = binom * T::from_usize_lossy(r - i + 1) / T::from_usize_lossy(i);
                    }
                    s += pd[i] * (binom * alpha.powi((r - i) as i32));
                }
                *o += e * s;
            }
        }
        for (r, o) in out.iter_mut().enumerate() {
            if r <= self.power {
                let coef = self.monomial * falling::<T>(self.power, r);
                *o += z.powi((self.power - r) as i32) * coef;
            }
        }
        out
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        self.eval_derivs(z, 0)[0]
    }

    /// Natural residual scale `max(1, |z|)^power`.
    pub fn scale(&self, z: C<T>) -> T {
        T::one().max(z.norm()).powi(self.power as i32)
    }
}

fn poly_derivs<T: Real>(poly: &[T], z: C<T>, out: &mut [C<T>]) {
    let zero = C::new(T::zero(), T::zero());
    for o in out.iter_mut() {
        *o = zero;
    }
    let n = out.len();
    // repeated synthetic division
    for c in poly.iter().rev() {
        for j in (1..n).rev() {
            out[j] = out[j] * z + out[j - 1];
        }
        out[0] = out[0] * z + *c;
    }
    let mut f = T::one();
    for (j, o) in out.iter_mut().enumerate() {
        if j > 1 {
            f *= T::from_usize_lossy(j);
        }
        *o = *o * f;
    }
}
