//! Zero search in a rectangle by the argument principle, refining cells
//! until each holds one zero, then polishing with Newton.

use crate::error::{Error, Result};
use crate::rootfinder::newton::{newton_refine, FnTarget};
use crate::scalar::{Real, C};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OriginRoot<T> {
    pub z: C<T>,
    pub multiplicity: u8,
}

impl<T: Real> OriginRoot<T> {
    pub fn is_real(&self) -> bool {
        is_real(self.z)
    }
}

pub(crate) fn is_real<T: Real>(z: C<T>) -> bool {
    z.im.abs() <= T::lit(1e-10) * (T::one() + z.norm())
}

/// Expands upper-half representatives into the full conjugate-closed
/// multiset (each entry repeated by multiplicity).
pub fn full_multiset<T: Real>(roots: &[OriginRoot<T>]) -> Vec<C<T>> {
    let mut out = Vec::new();
    for r in roots {
        for _ in 0..r.multiplicity {
            out.push(r.z);
            if !r.is_real() {
                out.push(r.z.conj());
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Rect<T> {
    fn center(&self) -> C<T> {
        C::new((self.x0 + self.x1) / T::lit(2.0), (self.y0 + self.y1) / T::lit(2.0))
    }

    fn diameter(&self) -> T {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    fn contains(&self, z: C<T>, slack: T) -> bool {
        z.re >= self.x0 - slack && z.re <= self.x1 + slack && z.im >= self.y0 - slack && z.im <= self.y1 + slack
    }

    fn split(&self, frac: T) -> (Self, Self) {
        if self.x1 - self.x0 >= self.y1 - self.y0 {
            let xm = self.x0 + (self.x1 - self.x0) * frac;
            (Self { x1: xm, ..*self }, Self { x0: xm, ..*self })
        } else {
            let ym = self.y0 + (self.y1 - self.y0) * frac;
            (Self { y1: ym, ..*self }, Self { y0: ym, ..*self })
        }
    }
}

/// Analytic function with up to two derivatives.
pub trait Analytic<T: Real> {
    /// `[g, g', g'']`.
    fn derivs(&self, z: C<T>) -> [C<T>; 3];
}

impl<T: Real, F: Fn(C<T>) -> [C<T>; 3]> Analytic<T> for F {
    fn derivs(&self, z: C<T>) -> [C<T>; 3] {
        self(z)
    }
}

fn arg_change<T: Real, G: Analytic<T>>(g: &G, a: C<T>, ga: C<T>, b: C<T>, gb: C<T>, depth: u32) -> Result<T> {
    let d = (gb / ga).arg();
    if d.abs() < T::lit(0.7) || depth > 40 {
        if depth > 40 {
            return Err(Error::CountMismatch { winding: -1, found: 0 });
        }
        return Ok(d);
    }
    let mid = (a + b) / T::lit(2.0);
    let gm = g.derivs(mid)[0];
    if gm.norm() == T::zero() || !gm.norm().is_finite() {
        return Err(Error::CountMismatch { winding: -1, found: 0 });
    }
    Ok(arg_change(g, a, ga, mid, gm, depth + 1)? + arg_change(g, mid, gm, b, gb, depth + 1)?)
}

/// Number of zeros (with multiplicity) inside `r`. Fails when the boundary
/// passes too close to a zero for the count to be trusted.
pub fn winding_count<T: Real, G: Analytic<T>>(g: &G, r: &Rect<T>) -> Result<i64> {
    let corners = [
        C::new(r.x0, r.y0),
        C::new(r.x1, r.y0),
        C::new(r.x1, r.y1),
        C::new(r.x0, r.y1),
    ];
    let per_edge = 32;
    let mut total = T::zero();
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        let mut prev = a;
        let mut gprev = g.derivs(a)[0];
        for i in 1..=per_edge {
            let t = T::from_usize_lossy(i) / T::from_usize_lossy(per_edge);
            let p = a + (b - a) * t;
            let gp = g.derivs(p)[0];
            if gp.norm() == T::zero() || gprev.norm() == T::zero() || !gp.norm().is_finite() {
                return Err(Error::CountMismatch { winding: -1, found: 0 });
            }
            total += arg_change(g, prev, gprev, p, gp, 0)?;
            prev = p;
            gprev = gp;
        }
    }
    let w = total / (T::PI() * T::lit(2.0));
    let n = w.round();
    if (w - n).abs() > T::lit(0.05) {
        return Err(Error::CountMismatch {
            winding: n.to_i64().unwrap_or(-1),
            found: 0,
        });
    }
    Ok(n.to_i64().unwrap())
}

/// All zeros of `g` in `r`, polished to `eps` relative to `scale`.
pub fn zeros_in_rect<T: Real, G: Analytic<T>>(g: &G, r: Rect<T>, eps: T) -> Result<Vec<OriginRoot<T>>> {
    let total = winding_count(g, &r)?;
    let mut out = Vec::new();
    search(g, r, total, eps, 0, &mut out)?;
    let found: usize = out.iter().map(|o| o.multiplicity as usize).sum();
    if found as i64 != total {
        return Err(Error::CountMismatch { winding: total, found });
    }
    Ok(out)
}

fn newton_in<T: Real, G: Analytic<T>>(g: &G, z0: C<T>, eps: T, derivative: bool) -> Option<C<T>> {
    let t = FnTarget(|z: C<T>| {
        let d = g.derivs(z);
        if derivative {
            (d[1], d[2])
        } else {
            (d[0], d[1])
        }
    });
    newton_refine(&t, z0, eps, 60).ok().map(|o| o.z)
}

fn search<T: Real, G: Analytic<T>>(
    g: &G,
    r: Rect<T>,
    count: i64,
    eps: T,
    depth: u32,
    out: &mut Vec<OriginRoot<T>>,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    let slack = r.diameter() * T::lit(1e-9);
    if count == 1 {
        if let Some(z) = newton_in(g, r.center(), eps, false) {
            if r.contains(z, slack) {
                out.push(OriginRoot { z, multiplicity: 1 });
                return Ok(());
            }
        }
    }
    let scale = T::one().max(r.center().norm());
    if count == 2 && r.diameter() < T::lit(1e-6) * scale {
        // two zeros that cannot be separated: a double zero, g' = 0 there
        if let Some(z) = newton_in(g, r.center(), eps, true) {
            out.push(OriginRoot { z, multiplicity: 2 });
            return Ok(());
        }
    }
    if depth > 80 {
        return Err(Error::CountMismatch { winding: count, found: 0 });
    }
    // off-centre splits; retry elsewhere if the cut runs through a zero
    for frac in [0.5137, 0.4711, 0.5523, 0.4309, 0.6031] {
        let (a, b) = r.split(T::lit(frac));
        let ca = match winding_count(g, &a) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let cb = match winding_count(g, &b) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if ca + cb != count {
            continue;
        }
        search(g, a, ca, eps, depth + 1, out)?;
        search(g, b, cb, eps, depth + 1, out)?;
        return Ok(());
    }
    Err(Error::CountMismatch { winding: count, found: 0 })
}
