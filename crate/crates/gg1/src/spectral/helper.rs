use crate::error::{Error, Result};
use crate::rootfinder::CoreTerm;
use crate::scalar::{Real, C};
use crate::transforms::{EntireExpPoly, ExpSum, ExponentDecomposition};

/// Maximum number of `Φ_j` coefficients kept in the helper.
pub const MAX_PHI: usize = 6;

/// Closed-form helper `H`: the terms of `F` that survive as `Re θ → -∞`.
#[derive(Clone, Debug)]
pub struct HelperFunction<T> {
    pub terms: ExpSum<T>,
    /// `H'`, `H''`, `H'''`, `H''''`.
    derivs: [ExpSum<T>; 4],
    pub core: CoreTerm<T>,
    /// Clearing power: `h = H θ^mp` is entire.
    pub mp: usize,
    /// Order of the pole of `H` at 0.
    pub mq: i32,
    /// Leading Laurent coefficient of `H` at 0.
    pub q0: T,
    /// Exponent of the core term (`α₀ < 0`).
    pub alpha: T,
    /// Taylor coefficients of `G(θ) = log(θ^mq H(θ) / q0)` at 0.
    log_series: Vec<T>,
    /// Taylor coefficients of `θ^mq H(θ)` at 0.
    reduced_series: Vec<T>,
}

const SERIES_ORDER: usize = 40;

impl<T: Real> HelperFunction<T> {
    pub fn from_decomposition(dec: &ExponentDecomposition<T>) -> Result<Self> {
        let len = (dec.kappa_p() + 1).min(MAX_PHI);
        // truncate each Φ_j after `len` coefficients
        let mut terms = Vec::new();
        for t in &dec.terms[0..=dec.jp] {
            let mut c = vec![T::zero(); t.k];
            c.extend(t.phi.iter().take(len).cloned());
            terms.push(crate::transforms::ExpTerm::new(t.alpha, c));
        }
        let h = ExpSum::new(terms, -T::one());
        let t0 = &dec.terms[0];
        let core = CoreTerm::new(t0.phi[0], t0.alpha, t0.k as u32)?;
        Self::new(h, core)
    }

    /// Helper from an explicit exponential sum and core term.
    pub fn new(terms: ExpSum<T>, core: CoreTerm<T>) -> Result<Self> {
        let d1 = terms.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        let d4 = d3.derivative();
        let mp = terms.max_pole();
        let lau = terms.laurent(SERIES_ORDER + 2);
        let scale = terms.laurent_scale(SERIES_ORDER + 2);
        let lead = (0..lau.len())
            .find(|&i| lau[i].abs() > T::lit(1e-9) * scale[i].max(T::min_positive_value()))
            .ok_or_else(|| Error::Unsupported("helper vanishes identically at 0".into()))?;
        let mq = mp as i32 - lead as i32;
        let q0 = lau[lead];
        let reduced_series: Vec<T> = lau[lead..].iter().take(SERIES_ORDER).cloned().collect();
        let s: Vec<T> = reduced_series.iter().map(|c| *c / q0).collect();
        let log_series = series_log(&s);
        Ok(Self {
            alpha: core.alpha,
            terms,
            derivs: [d1, d2, d3, d4],
            core,
            mp,
            mq,
            q0,
            log_series,
            reduced_series,
        })
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        self.terms.eval(z)
    }

    /// `H^{(r)}(z)` for `1 ≤ r ≤ 4`.
    pub fn deriv(&self, r: usize, z: C<T>) -> C<T> {
        self.derivs[r - 1].eval(z)
    }

    /// `h = H θ^mp`.
    pub fn cleared(&self) -> EntireExpPoly<T> {
        self.terms.cleared(self.mp)
    }

    /// `θ^mq H(θ)` with value, first and second derivative; entire and
    /// nonzero at 0, evaluated by series near the origin.
    pub fn reduced(&self, z: C<T>) -> [C<T>; 3] {
        let w = self.terms.width().max(T::one());
        if z.norm() * w < T::lit(0.5) {
            let mut v = [C::new(T::zero(), T::zero()); 3];
            for c in self.reduced_series.iter().rev() {
                v[2] = v[2] * z + v[1];
                v[1] = v[1] * z + v[0];
                v[0] = v[0] * z + *c;
            }
            [v[0], v[1], v[2] * T::lit(2.0)]
        } else {
            let hv = self.eval(z);
            let h1 = self.deriv(1, z);
            let h2 = self.deriv(2, z);
            let m = T::lit(self.mq as f64);
            let zm = z.powi(self.mq);
            let inv = z.inv();
            // (z^m H)' = z^m (H' + m H / z), (z^m H)'' = z^m (H'' + 2m H'/z + m(m-1) H/z²)
            [
                zm * hv,
                zm * (h1 + hv * inv * m),
                zm * (h2 + h1 * inv * (m * T::lit(2.0)) + hv * inv * inv * (m * (m - T::one()))),
            ]
        }
    }

    /// `G^{(j)}(0)` for `G = log(θ^mq H / q0)`.
    pub fn log_deriv_at_zero(&self, j: usize) -> T {
        crate::scalar::factorial::<T>(j) * self.log_series[j]
    }

    /// `q(θ) = q0 θ^(-mq) Π_u (1 - θ/u)` over the full multiset `u`.
    pub fn q(&self, z: C<T>, u_full: &[C<T>]) -> C<T> {
        let mut p = z.powi(-self.mq) * self.q0;
        for u in u_full {
            p *= -(z / *u) + T::one();
        }
        p
    }

    /// `q'/q` at `z`.
    pub fn q_log_deriv(&self, z: C<T>, u_full: &[C<T>]) -> C<T> {
        let mut s = -z.inv() * T::lit(self.mq as f64);
        for u in u_full {
            s += (z - *u).inv();
        }
        s
    }

    /// `H(z) / (1 - z/w)` for a helper zero `w` near `z`, by a
    /// four-term Taylor expansion of `H` about `w`.
    pub fn reduced_at(&self, z: C<T>, w: C<T>) -> C<T> {
        let d = z - w;
        let t = self.deriv(1, w)
            + self.deriv(2, w) * d / T::lit(2.0)
            + self.deriv(3, w) * d * d / T::lit(6.0)
            + self.deriv(4, w) * d * d * d / T::lit(24.0);
        -w * t
    }
}

/// `log s(θ)` for a power series with `s_0 = 1`.
pub fn series_log<T: Real>(a: &[T]) -> Vec<T> {
    let n = a.len();
    let mut l = vec![T::zero(); n];
    for k in 1..n {
        // k L_k = k a_k - Σ_{j<k} j L_j a_{k-j}
        let mut s = T::from_usize_lossy(k) * a[k];
        for j in 1..k {
            s -= T::from_usize_lossy(j) * l[j] * a[k - j];
        }
        l[k] = s / T::from_usize_lossy(k);
    }
    l
}
