use crate::error::{Error, Result};
use crate::rootfinder::origin::{full_multiset, is_real};
use crate::rootfinder::{OriginRoot, RootLadder};
use crate::scalar::{Real, C};
use crate::spectral::expansion::{Pole, SpectralExpansion, Truncation};
use crate::spectral::helper::HelperFunction;

fn one<T: Real>() -> C<T> {
    C::new(T::one(), T::zero())
}

/// `(1 - z/p)`.
#[inline]
fn lin<T: Real>(z: C<T>, p: C<T>) -> C<T> {
    one::<T>() - z / p
}

/// Upper-half poles of ψ in storage order: origin zeros then the ladder.
pub fn pole_list<T: Real>(ladder: &RootLadder<T>) -> Vec<(C<T>, u8)> {
    let mut v: Vec<(C<T>, u8)> = ladder.origin.iter().map(|o| (o.z, o.multiplicity)).collect();
    v.extend(ladder.z.iter().map(|z| (*z, 1)));
    v
}

/// Product-form coefficients of the pole at position `i`,
/// `a = exp(-α z/2) Π (1 - z/p)^(-1)` over the poles `p` (and conjugates)
/// with position ≤ `i + k`. Double poles get both `a_{n,2}` and `a_{n,1}`.
pub fn coefficients_naive<T: Real>(poles: &[(C<T>, u8)], alpha: T, i: usize, k: usize) -> Result<[C<T>; 2]> {
    let (z, mult) = poles[i];
    let last = (i + k).min(poles.len() - 1);
    let mut p = (-z * alpha / T::lit(2.0)).exp();
    // Υ1 = d/dθ log[ψ (1-θ/z)^mult] at z
    let mut ups = C::new(-alpha / T::lit(2.0), T::zero());
    let tol = T::lit(1e-9) * (T::one() + z.norm());
    let mut visit = |q: C<T>, times: u8, p: &mut C<T>| -> Result<()> {
        if (q - z).norm() < tol {
            return Err(Error::RepeatedRoot(format!("{z}")));
        }
        for _ in 0..times {
            *p /= lin(z, q);
            ups += (q - z).inv();
        }
        Ok(())
    };
    for (j, (q, m)) in poles[..=last].iter().enumerate() {
        if j != i {
            visit(*q, *m, &mut p)?;
        }
        if !is_real(*q) {
            visit(q.conj(), *m, &mut p)?;
        }
    }
    Ok(match mult {
        1 => [p, C::new(T::zero(), T::zero())],
        2 => [-z * ups * p, p],
        _ => return Err(Error::Unsupported("poles of order 3 or more".into())),
    })
}

/// Naive coefficient for a pole not in the list (long products: the caller
/// supplies the remaining poles through an iterator).
pub fn naive_product<T: Real>(z: C<T>, alpha: T, others: impl IntoIterator<Item = C<T>>) -> C<T> {
    let mut p = (-z * alpha / T::lit(2.0)).exp();
    for q in others {
        p /= lin(z, q);
        if !is_real(q) {
            p /= lin(z, q.conj());
        }
    }
    p
}

/// Ladder ratio `(1 - z/w)(1 - z/w̄) / ((1 - z/ζ)(1 - z/ζ̄))`.
#[inline]
fn ratio<T: Real>(z: C<T>, w: C<T>, zeta: C<T>) -> C<T> {
    lin(z, w) * lin(z, w.conj()) / (lin(z, zeta) * lin(z, zeta.conj()))
}

/// Helper-telescoped coefficient of the ladder pole at position `i`:
/// the infinite product is replaced by `q(z)/H(z)` times the ratio of
/// `F`- and `H`-zero factors up to position `i + k`.
pub fn coefficients_telescoped<T: Real>(
    ladder: &RootLadder<T>,
    helper: &HelperFunction<T>,
    i: usize,
    k: usize,
) -> Result<C<T>> {
    let need = i + k + 1;
    if ladder.len() < need {
        return Err(Error::NotEnoughRoots {
            need,
            have: ladder.len(),
        });
    }
    let z = ladder.z[i];
    let w = ladder.w[i];
    let u_full = full_multiset(&ladder.helper_origin);
    let z0_full = full_multiset(&ladder.origin);
    let mut p = helper.q(z, &u_full);
    for zeta in &z0_full {
        p /= lin(z, *zeta);
    }
    p /= helper.reduced_at(z, w);
    p *= lin(z, w.conj()) / lin(z, z.conj());
    for j in 0..need {
        if j != i {
            p *= ratio(z, ladder.w[j], ladder.z[j]);
        }
    }
    Ok(p)
}

/// Helper-telescoped coefficients of an origin pole (position `i` in
/// `ladder.origin`), using `k` ladder ratios.
pub fn origin_coefficients_telescoped<T: Real>(
    ladder: &RootLadder<T>,
    helper: &HelperFunction<T>,
    i: usize,
    k: usize,
) -> Result<[C<T>; 2]> {
    let OriginRoot { z, multiplicity } = ladder.origin[i];
    let k = k.min(ladder.len());
    let u_full = full_multiset(&ladder.helper_origin);
    let mut others = Vec::new();
    for (j, o) in ladder.origin.iter().enumerate() {
        for _ in 0..o.multiplicity {
            if j != i {
                others.push(o.z);
            }
            if !o.is_real() {
                others.push(o.z.conj());
            }
        }
    }
    let hz = helper.eval(z);
    let mut p = helper.q(z, &u_full) / hz;
    let mut ups = -helper.deriv(1, z) / hz + helper.q_log_deriv(z, &u_full);
    for q in &others {
        p /= lin(z, *q);
        ups += (*q - z).inv();
    }
    for j in 0..k {
        let (wj, zj) = (ladder.w[j], ladder.z[j]);
        p *= ratio(z, wj, zj);
        ups += (zj - z).inv() + (zj.conj() - z).inv() - (wj - z).inv() - (wj.conj() - z).inv();
    }
    Ok(match multiplicity {
        1 => [p, C::new(T::zero(), T::zero())],
        2 => [-z * ups * p, p],
        _ => return Err(Error::Unsupported("poles of order 3 or more".into())),
    })
}

/// Expansion over the first `n_poles` poles with telescoped coefficients.
pub fn expansion_telescoped<T: Real>(
    ladder: &RootLadder<T>,
    helper: &HelperFunction<T>,
    n_poles: usize,
    k: usize,
) -> Result<SpectralExpansion<T>> {
    let n_origin = ladder.origin.len();
    let mut poles = Vec::with_capacity(n_poles);
    for i in 0..n_origin.min(n_poles) {
        let a = origin_coefficients_telescoped(ladder, helper, i, k + n_poles.saturating_sub(n_origin))?;
        poles.push(Pole {
            z: ladder.origin[i].z,
            multiplicity: ladder.origin[i].multiplicity,
            a,
        });
    }
    let ladder_terms = n_poles.saturating_sub(n_origin);
    let ladder_poles: Result<Vec<Pole<T>>> = {
        use rayon::prelude::*;
        (0..ladder_terms)
            .into_par_iter()
            .map(|i| Ok(Pole::simple(ladder.z[i], coefficients_telescoped(ladder, helper, i, k)?)))
            .collect()
    };
    poles.extend(ladder_poles?);
    Ok(SpectralExpansion {
        alpha: helper.alpha,
        poles,
        truncation: Truncation {
            k_roots: n_poles,
            k_tailproduct: k,
        },
    })
}

/// Expansion over the first `n_poles` poles with product-form coefficients,
/// each product running `k` positions past its pole.
pub fn expansion_naive<T: Real>(
    ladder: &RootLadder<T>,
    alpha: T,
    n_poles: usize,
    k: usize,
) -> Result<SpectralExpansion<T>> {
    let list = pole_list(ladder);
    if list.len() < n_poles + k {
        return Err(Error::NotEnoughRoots {
            need: n_poles + k,
            have: list.len(),
        });
    }
    use rayon::prelude::*;
    let poles: Result<Vec<Pole<T>>> = (0..n_poles)
        .into_par_iter()
        .map(|i| {
            let a = coefficients_naive(&list, alpha, i, k)?;
            Ok(Pole {
                z: list[i].0,
                multiplicity: list[i].1,
                a,
            })
        })
        .collect();
    Ok(SpectralExpansion {
        alpha,
        poles: poles?,
        truncation: Truncation {
            k_roots: n_poles,
            k_tailproduct: k,
        },
    })
}
