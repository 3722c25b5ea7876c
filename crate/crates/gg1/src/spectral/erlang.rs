//! E_m/D/1: the zeros of `F(θ) = e^{-dθ}(1 - θ/r)^{-m} - 1` map onto those of
//! `σ(ζ) = exp(ζ + β) - ζ^m` through `ζ = λ - dθ`, `λ = r d`, `β = m ln λ - λ`,
//! and ψ is known in closed form up to the `m - 1` right-half zeros.

use crate::error::{Error, Result};
use crate::rootfinder::origin::is_real;
use crate::rootfinder::{Branch, OriginRoot, RootLadder, SigmaSystem};
use crate::scalar::{factorial, Real, C};
use crate::spectral::expansion::{Pole, SpectralExpansion, Truncation};

#[derive(Clone, Debug)]
pub struct ErlangDeterministic<T> {
    pub m: u32,
    /// Phase rate of the Erlang interarrival law.
    pub rate: T,
    /// Deterministic service time.
    pub d: T,
    /// `λ = rate · d`.
    pub lambda: T,
    pub sigma: SigmaSystem<T>,
    /// Nonzero right-half zeros of the scaled `F` (full multiset).
    pub right: Vec<C<T>>,
    /// Real left zero of the scaled `F`.
    pub z0: T,
    /// First σ index whose zero lands in the left half plane as a complex pair.
    pub n1: i64,
}

impl<T: Real> ErlangDeterministic<T> {
    pub fn new(m: u32, rate: T, d: T) -> Result<Self> {
        let lambda = rate * d;
        let mf = T::from_usize_lossy(m as usize);
        if !(lambda > T::zero() && lambda < mf) {
            return Err(Error::Unstable((lambda / mf).to_f64().unwrap_or(f64::NAN)));
        }
        let sigma = SigmaSystem::new(m, mf * lambda.ln() - lambda, Branch::Even);
        let tol = T::lit(1e-9) * lambda;
        let mut right = Vec::new();
        let mut z0 = None;
        let mut n1 = None;
        let mut n = -(m as i64) / 2;
        while n1.is_none() || right.len() + 1 < m as usize {
            for th in sigma.roots(n)? {
                let u = -th + lambda;
                if u.norm() < tol {
                    continue;
                }
                if u.re > T::zero() {
                    right.push(u);
                    if !is_real(u) {
                        right.push(u.conj());
                    }
                } else if is_real(u) {
                    z0 = Some(u.re);
                } else if n1.is_none() {
                    n1 = Some(n);
                }
            }
            n += 1;
            if n > 10_000 {
                return Err(Error::NoBracket("right-half zeros not located".into()));
            }
        }
        if right.len() + 1 != m as usize {
            return Err(Error::CountMismatch {
                winding: m as i64,
                found: right.len() + 1,
            });
        }
        let z0 = z0.ok_or_else(|| Error::NoBracket("no real left zero".into()))?;
        Ok(Self {
            m,
            rate,
            d,
            lambda,
            sigma,
            right,
            z0,
            n1: n1.unwrap(),
        })
    }

    /// Right-half zeros in original time units.
    pub fn right_roots(&self) -> Vec<C<T>> {
        self.right.iter().map(|u| *u / self.d).collect()
    }

    /// Ladder of `n` left zero pairs (original units); `u` holds the σ zeros.
    pub fn ladder(&self, n: usize) -> Result<RootLadder<T>> {
        let mut sig = Vec::with_capacity(n);
        let mut z = Vec::with_capacity(n);
        for k in 0..n as i64 {
            let th = self.sigma.roots(self.n1 + k)?[0];
            sig.push(th);
            z.push((-th.conj() + self.lambda) / self.d);
        }
        let origin = vec![OriginRoot {
            z: C::new(self.z0 / self.d, T::zero()),
            multiplicity: 1,
        }];
        Ok(RootLadder::from_exact(origin, sig, z, self.n1, T::default_eps()))
    }

    /// Residue coefficient of ψ at a left zero `z` (original units).
    pub fn coefficient(&self, z: C<T>) -> C<T> {
        let zs = z * self.d;
        let lam = self.lambda;
        let mf = T::from_usize_lossy(self.m as usize);
        let mut a = zs * (mf / lam - T::one()) * (-(zs / lam) + T::one()).powi(-(self.m as i32));
        for u in &self.right {
            a *= -(zs / *u) + T::one();
        }
        let fp = C::new(-T::one(), T::zero()) + (-zs + lam).inv() * mf;
        a / fp / (-zs)
    }

    pub fn expansion(&self, ladder: &RootLadder<T>, n_poles: usize) -> Result<SpectralExpansion<T>> {
        let mut poles = Vec::with_capacity(n_poles);
        let all = ladder.origin.iter().map(|o| o.z).chain(ladder.z.iter().cloned());
        for z in all.take(n_poles) {
            poles.push(Pole::simple(z, self.coefficient(z)));
        }
        if poles.len() < n_poles {
            return Err(Error::NotEnoughRoots {
                need: n_poles,
                have: poles.len(),
            });
        }
        Ok(SpectralExpansion {
            alpha: -self.d,
            poles,
            truncation: Truncation {
                k_roots: n_poles,
                k_tailproduct: 0,
            },
        })
    }

    /// `P(W = 0) = ψ(+∞) = (m/λ - 1) λ^m / Π u`.
    pub fn idle(&self) -> T {
        let mf = T::from_usize_lossy(self.m as usize);
        let mut p = C::new((mf / self.lambda - T::one()) * self.lambda.powi(self.m as i32), T::zero());
        for u in &self.right {
            p /= *u;
        }
        p.re
    }

    /// Taylor coefficients of ψ at 0 (scaled time) up to `order`.
    fn psi_series(&self, order: usize) -> Vec<T> {
        let n = order + 1;
        let lam = self.lambda;
        let m = self.m as usize;
        // e_k = [θ^{k+1}] (e^{-θ} - (1 - θ/λ)^m)
        let mut e = vec![T::zero(); n];
        for (k, ek) in e.iter_mut().enumerate() {
            let j = k + 1;
            let sign = if j % 2 == 0 { T::one() } else { -T::one() };
            let mut binom = T::zero();
            if j <= m {
                binom = T::one();
                for i in 0..j {
                    binom = binom * T::from_usize_lossy(m - i) / T::from_usize_lossy(i + 1);
                }
            }
            *ek = sign / factorial::<T>(j) - binom * sign / lam.powi(j as i32);
        }
        let mut p = vec![C::new(T::zero(), T::zero()); n];
        p[0] = C::new(T::one(), T::zero());
        for u in &self.right {
            for k in (1..n).rev() {
                p[k] = p[k] - p[k - 1] / *u;
            }
        }
        let c = T::from_usize_lossy(m) / lam - T::one();
        // ψ = c P / E
        let mut out = vec![T::zero(); n];
        for k in 0..n {
            let mut s = p[k].re * c;
            for j in 1..=k {
                s -= e[j] * out[k - j];
            }
            out[k] = s / e[0];
        }
        out
    }

    /// Exact `E W^ν` (original units).
    pub fn moment_exact(&self, nu: u32) -> T {
        let s = self.psi_series(nu as usize);
        let sign = if nu % 2 == 0 { T::one() } else { -T::one() };
        sign * factorial::<T>(nu as usize) * s[nu as usize] * self.d.powi(nu as i32)
    }
}
