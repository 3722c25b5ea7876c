//! Time-gated M/M/1: Poisson(λ) arrivals admitted at unit-spaced gate
//! instants, exponential(μ) service. All quantities come from the closed-form
//! zeros `r_n, s_n` of `θ² + θ(μ - λ - 2πin) - 2πinμ`.

use crate::error::{Error, Result};
use crate::rootfinder::gated::gated_roots;
use crate::scalar::{Real, C};
use crate::spectral::euler::{big_omega, big_omega_tail, sinh_tail_product};
use crate::sum::{Compensated, CompensatedC};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GatedModel<T> {
    pub lambda: T,
    pub mu: T,
    pub rho: T,
}

/// Which of the two mean formulas to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanMethod {
    /// Sum over the left zeros `s_n` with the `π²/6` extrapolation.
    ViaS,
    /// Sum over the right zeros `r_n` with the coth closed form.
    ViaR,
}

pub const DEFAULT_TERMS: usize = 60;
pub const DEFAULT_FACTORS: usize = 2000;

impl<T: Real> GatedModel<T> {
    pub fn new(lambda: T, mu: T) -> Result<Self> {
        if !(lambda >= T::zero() && mu > T::zero() && lambda.is_finite() && mu.is_finite()) {
            return Err(Error::InvalidSpec("gated model needs λ ≥ 0 and μ > 0".into()));
        }
        if lambda >= mu {
            return Err(Error::Unstable((lambda / mu).to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            lambda,
            mu,
            rho: lambda / mu,
        })
    }

    /// `(r_n, s_n)`.
    pub fn roots(&self, n: i64) -> (C<T>, C<T>) {
        gated_roots(self.lambda, self.mu, n)
    }

    fn a(&self) -> T {
        self.lambda * self.lambda + T::lit(2.0) * self.lambda * self.mu
    }

    /// `χ(θ) = (1-ρ) e^{θ/2} Π_{n≥1} (θ/r_n - 1)(θ/r_{-n} - 1)`, first `factors`
    /// pairs exactly and the rest through `Σ_{n>K} 1/(4π²n² + a)`.
    pub fn chi(&self, theta: C<T>, factors: usize) -> C<T> {
        let one = C::new(T::one(), T::zero());
        let mut log = CompensatedC::new();
        for n in 1..=factors as i64 {
            let (r, _) = self.roots(n);
            let (rm, _) = self.roots(-n);
            log.add(((theta / r - one) * (theta / rm - one)).ln());
        }
        let tail = big_omega_tail(self.a().sqrt(), factors + 1);
        let corr = (theta * theta - theta * (self.lambda * T::lit(2.0))) * tail;
        (log.value() + corr + theta / T::lit(2.0)).exp() * (T::one() - self.rho)
    }

    /// Residue weight `p_j` of ψ at `s_j`, so that `ψ(θ) = ψ_0 + Σ p_j (1 - θ/s_j)^{-1}`.
    pub fn residue(&self, j: i64, factors: usize) -> C<T> {
        let (_, s) = self.roots(j);
        let d = (s / self.mu + T::one()).powi(-2) * self.rho;
        -self.chi(s, factors) / (-d + T::one())
    }

    /// `P(V > t)` from `terms` poles: `s_0` and the pairs `s_{±j}`, `j < terms`.
    pub fn tail(&self, t: T, terms: usize, factors: usize) -> Result<T> {
        if terms == 0 {
            return Ok(T::zero());
        }
        let mut s = Compensated::new();
        let (_, s0) = self.roots(0);
        s.add((self.residue(0, factors) * (s0 * t).exp()).re);
        for j in 1..terms as i64 {
            let (_, sj) = self.roots(j);
            s.add((self.residue(j, factors) * (sj * t).exp()).re * T::lit(2.0));
        }
        Ok(s.value())
    }

    /// `-ψ'(0)` truncated at `m` with `O(m^-3)` tail extrapolation.
    pub fn mean(&self, m: usize, method: MeanMethod) -> T {
        let (lam, mu, rho) = (self.lambda, self.mu, self.rho);
        let base = -rho / T::lit(2.0) + rho / (mu - lam);
        let pi2 = T::PI() * T::PI();
        let mut s = Compensated::new();
        match method {
            MeanMethod::ViaS => {
                for n in 1..=m as i64 {
                    let (_, sn) = self.roots(n);
                    let nf = T::lit(n as f64);
                    s.add(-(T::lit(2.0) * (mu.recip() + sn.inv().re)) - lam / (T::lit(2.0) * pi2 * nf * nf));
                }
                base + s.value() + lam / T::lit(12.0)
            }
            MeanMethod::ViaR => {
                let a = self.a();
                for n in 1..=m as i64 {
                    let (rn, _) = self.roots(n);
                    let nf = T::lit(n as f64);
                    let qn = lam / (T::lit(4.0) * pi2 * nf * nf + a);
                    s.add(T::lit(2.0) * rn.re / rn.norm_sqr() - T::lit(2.0) * qn);
                }
                base + s.value() + T::lit(2.0) * lam * big_omega(a.sqrt())
            }
        }
    }

    /// `P(V = 0) = (1-ρ) e^{λ/2} Π 4n²π²/(r_n r_{-n})`, tail beyond `factors`
    /// through `|r_n|² = 4π²n² + a + O(n^-2)` and the sinh product.
    pub fn idle(&self, factors: usize) -> Result<T> {
        if self.lambda == T::zero() {
            return Ok(T::one());
        }
        let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
        let mut log = Compensated::new();
        for n in 1..=factors as i64 {
            let (r, _) = self.roots(n);
            let nf = T::lit(n as f64);
            log.add((four_pi2 * nf * nf / r.norm_sqr()).ln());
        }
        let w0 = (T::one() - self.rho)
            * (self.lambda / T::lit(2.0) + log.value()).exp()
            / sinh_tail_product(self.a().sqrt(), factors + 1);
        if !(w0 >= T::zero() && w0 <= T::one() + T::lit(1e-6)) {
            return Err(Error::NonProbability(w0.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(w0)
    }

    /// Partial product of the `ψ` product form at real `θ > -μ + λ`, `k` pairs.
    pub fn psi_product(&self, theta: T, k: usize) -> T {
        let (lam, mu) = (self.lambda, self.mu);
        let th = C::new(theta, T::zero());
        let h0 = (T::one() - self.rho) / (T::one() - lam / (mu + theta));
        let h1 = lam / T::lit(2.0) * (T::one() - mu / (mu + theta));
        let mut log = Compensated::new();
        for n in 1..=k as i64 {
            for m in [n, -n] {
                let (r, s) = self.roots(m);
                let i2npi = C::new(T::zero(), T::lit(2.0 * m as f64) * T::PI());
                log.add(((th + mu) / (th - s) * i2npi / r).ln().re);
            }
        }
        h0 * (h1 + log.value()).exp()
    }
}
