use crate::error::{Error, Result};
use crate::rootfinder::origin::full_multiset;
use crate::rootfinder::RootLadder;
use crate::scalar::{factorial, Real, C};
use crate::spectral::helper::HelperFunction;

/// `Σ p^(-j)` over the ψ poles (conjugates included) among the first
/// `n_terms` upper-half poles.
fn partial_power_sum<T: Real>(ladder: &RootLadder<T>, j: u32, n_terms: usize) -> Result<(T, usize)> {
    let mut s = T::zero();
    let mut used = 0;
    for o in &ladder.origin {
        if used == n_terms {
            return Ok((s, 0));
        }
        let v = o.z.powi(-(j as i32));
        let contrib = if o.is_real() { v.re } else { v.re * T::lit(2.0) };
        s += contrib * T::lit(o.multiplicity as f64);
        used += 1;
    }
    let k = n_terms - used;
    if k > ladder.len() {
        return Err(Error::NotEnoughRoots {
            need: n_terms,
            have: used + ladder.len(),
        });
    }
    for z in &ladder.z[..k] {
        s += z.powi(-(j as i32)).re * T::lit(2.0);
    }
    Ok((s, k))
}

/// `κ_j` from the first `n_terms` poles. With `helper` given, the ladder tail
/// beyond the split is replaced by the helper's closed-form power sums.
pub fn cumulant<T: Real>(
    ladder: &RootLadder<T>,
    helper: Option<&HelperFunction<T>>,
    alpha: T,
    j: u32,
    n_terms: usize,
) -> Result<T> {
    assert!(j >= 1);
    let (mut s, split) = partial_power_sum(ladder, j, n_terms)?;
    if let Some(h) = helper {
        s += tail_sum(ladder, h, j, split);
    }
    let sign = if j % 2 == 0 { T::one() } else { -T::one() };
    let base = sign * factorial::<T>(j as usize - 1) * s;
    Ok(if j == 1 { base + alpha / T::lit(2.0) } else { base })
}

/// `W_n^j`: estimate of `Σ_{m ≥ split} (z_m^(-j) + z̄_m^(-j))` through the
/// helper's zeros.
pub fn tail_sum<T: Real>(ladder: &RootLadder<T>, helper: &HelperFunction<T>, j: u32, split: usize) -> T {
    let jf = j as usize;
    let mut w = -helper.log_deriv_at_zero(jf) / factorial::<T>(jf - 1);
    if j == 1 {
        w += helper.alpha / T::lit(2.0);
    }
    for u in full_multiset(&ladder.helper_origin) {
        w -= u.powi(-(j as i32)).re;
    }
    for wk in &ladder.w[..split] {
        w -= wk.powi(-(j as i32)).re * T::lit(2.0);
    }
    w
}

/// `(κ1, κ2, κ3) ↦ (m1, m2, m3)`.
pub fn moments_from_cumulants<T: Real>(k1: T, k2: T, k3: T) -> (T, T, T) {
    (k1, k2 + k1 * k1, k3 + T::lit(3.0) * k1 * k2 + k1 * k1 * k1)
}

/// Inverse of [`moments_from_cumulants`].
pub fn cumulants_from_moments<T: Real>(m1: T, m2: T, m3: T) -> (T, T, T) {
    let k2 = m2 - m1 * m1;
    (m1, k2, m3 - T::lit(3.0) * m1 * k2 - m1 * m1 * m1)
}

/// Idle probability with a bound on the neglected tail of the product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdleEstimate<T> {
    pub p0: T,
    pub tail_bound: T,
}

/// `P(W = 0) = -lim_{x→∞} r(x) Π |z_k|²/|w_k|²` with
/// `r = q Π_{Z0} (1 - θ/ζ)^(-1)`, product over `k` ladder pairs.
pub fn idle_probability<T: Real>(
    ladder: &RootLadder<T>,
    helper: &HelperFunction<T>,
    k: usize,
) -> Result<IdleEstimate<T>> {
    let u_full = full_multiset(&ladder.helper_origin);
    let z_full = full_multiset(&ladder.origin);
    let deg = u_full.len() as i64 - helper.mq as i64 - z_full.len() as i64;
    if deg != 0 {
        return Err(Error::CountMismatch {
            winding: u_full.len() as i64 - helper.mq as i64,
            found: z_full.len(),
        });
    }
    // lim x^{#U - mq - #Z0} q0 Π(-1/u) / Π(-1/ζ)
    let mut lim = C::new(helper.q0, T::zero());
    for u in &u_full {
        lim /= -*u;
    }
    for z in &z_full {
        lim *= -*z;
    }
    let k = k.min(ladder.len());
    let mut log_prod = T::zero();
    for j in 0..k {
        log_prod += (ladder.z[j].norm_sqr() / ladder.w[j].norm_sqr()).ln();
    }
    let p0 = -lim.re * log_prod.exp();
    let last = if k > 0 {
        (ladder.z[k - 1].norm_sqr() / ladder.w[k - 1].norm_sqr()).ln().abs()
    } else {
        T::one()
    };
    let tail_bound = p0.abs() * last * T::from_usize_lossy(k.max(1));
    if !(p0 >= T::zero() && p0 <= T::one() + T::lit(1e-6)) {
        return Err(Error::NonProbability(p0.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(IdleEstimate { p0, tail_bound })
}
