//! Roots of `σ(θ) = exp(θ + β) - θ^m` (and of `exp(θ + β) + θ^m`) through the
//! equivalent pair of real equations in `ρ = |θ|`:
//! `x(ρ) = m ln ρ - β`, `h(ρ) = sqrt(ρ² - x²) - m arccos(x/ρ)`,
//! with `h(ρ) = 2nπ` (respectively `(2n+1)π`) selecting the `n`-th root.

use crate::error::{Error, Result};
use crate::rootfinder::newton::{newton_refine, FnTarget};
use crate::scalar::{Real, C};

/// Which right-hand side the argument equation targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `exp(θ + β) = θ^m`: targets `2nπ`.
    Even,
    /// `-exp(θ + β) = θ^m`: targets `(2n+1)π`.
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaSystem<T> {
    pub m: u32,
    pub beta: T,
    pub branch: Branch,
}

impl<T: Real> SigmaSystem<T> {
    pub fn new(m: u32, beta: T, branch: Branch) -> Self {
        assert!(m >= 1);
        Self { m, beta, branch }
    }

    fn mf(&self) -> T {
        T::from_usize_lossy(self.m as usize)
    }

    pub fn x(&self, rho: T) -> T {
        self.mf() * rho.ln() - self.beta
    }

    pub fn h(&self, rho: T) -> T {
        let x = self.x(rho);
        let c = (x / rho).max(-T::one()).min(T::one());
        let y = (rho * rho - x * x).max(T::zero()).sqrt();
        y - self.mf() * c.acos()
    }

    fn h_prime(&self, rho: T) -> T {
        let m = self.mf();
        let x = self.x(rho);
        let y = (rho * rho - x * x).max(T::zero()).sqrt();
        ((rho - x * m / rho) + m * (m - x) / rho) / y
    }

    pub fn target(&self, n: i64) -> T {
        let k = match self.branch {
            Branch::Even => 2 * n,
            Branch::Odd => 2 * n + 1,
        };
        T::lit(k as f64) * T::PI()
    }

    /// `ρ` with `ρ + x(ρ) = 0` (left end of the admissible set).
    pub fn r0(&self) -> T {
        bisect_increasing(|r| r + self.x(r), T::one())
    }

    /// The gap `(r1, r2)` where `x(ρ) > ρ`, if any.
    pub fn gap(&self) -> Option<(T, T)> {
        let m = self.mf();
        if m - self.x(m) >= T::zero() {
            return None;
        }
        let g = |r: T| r - self.x(r);
        // g decreases on (0, m) and increases on (m, ∞)
        let r1 = bisect_on(|r| -g(r), self.r0(), m);
        let mut hi = m * T::lit(2.0);
        while g(hi) < T::zero() {
            hi = hi * T::lit(2.0);
        }
        let r2 = bisect_on(g, m, hi);
        Some((r1, r2))
    }

    /// Roots with `Im θ >= 0` for index `n`: one complex root, or the two
    /// real roots when the target is 0 and the gap exists.
    pub fn roots(&self, n: i64) -> Result<Vec<C<T>>> {
        let target = self.target(n);
        let m = self.mf();
        if target < -m * T::PI() * (T::one() + T::epsilon()) {
            return Err(Error::NoBracket(format!(
                "index {n} below the admissible range (needs 2n >= -m)"
            )));
        }
        let r0 = self.r0();
        let (lo, hi) = match self.gap() {
            Some((r1, r2)) => {
                if target == T::zero() {
                    return Ok(vec![C::new(r1, T::zero()), C::new(r2, T::zero())]);
                } else if target < T::zero() {
                    (r0, Some(r1))
                } else {
                    (r2, None)
                }
            }
            None => (r0, None),
        };
        if target <= -m * T::PI() {
            return Ok(vec![C::new(-r0, T::zero())]);
        }
        let hi = match hi {
            Some(h) => h,
            None => {
                let mut h = lo * T::lit(2.0) + target.abs() + m * T::PI() + T::one();
                let mut guard = 0;
                while self.h(h) < target {
                    h = h * T::lit(2.0);
                    guard += 1;
                    if guard > 200 {
                        return Err(Error::NoBracket("upper bracket not found".into()));
                    }
                }
                h
            }
        };
        let f = |r: T| self.h(r) - target;
        if f(lo) > T::zero() || f(hi) < T::zero() {
            return Err(Error::NoBracket(format!("h does not bracket target for n={n}")));
        }
        let mut a = lo;
        let mut b = hi;
        for _ in 0..400 {
            if b - a <= T::lit(1e-13) * b.max(T::one()) {
                break;
            }
            let mid = (a + b) / T::lit(2.0);
            if f(mid) < T::zero() {
                a = mid;
            } else {
                b = mid;
            }
        }
        let mut r = (a + b) / T::lit(2.0);
        for _ in 0..3 {
            let d = self.h_prime(r);
            if !(d.is_finite() && d > T::zero()) {
                break;
            }
            let nr = r - f(r) / d;
            if nr >= lo && nr <= hi {
                r = nr;
            }
        }
        let x = self.x(r);
        let y = (r * r - x * x).max(T::zero()).sqrt();
        let theta = self.polish(C::new(x, y));
        Ok(vec![theta])
    }

    /// Complex Newton on `±exp(θ+β)θ^(-m) - 1` to clean up the last digits.
    fn polish(&self, theta: C<T>) -> C<T> {
        let sgn = match self.branch {
            Branch::Even => T::one(),
            Branch::Odd => -T::one(),
        };
        let m = self.mf();
        let g = FnTarget(|z: C<T>| {
            let e = (z + self.beta).exp() * z.powi(-(self.m as i32)) * sgn;
            (e - T::one(), e * (-(z.inv() * m) + T::one()))
        });
        match newton_refine(&g, theta, T::epsilon() * T::lit(16.0), 8) {
            Ok(o) if (o.z - theta).norm() < T::lit(1e-3) * (T::one() + theta.norm()) => o.z,
            _ => theta,
        }
    }

    /// `|exp(θ+β) ∓ θ^m| / |θ|^m`.
    pub fn residual(&self, theta: C<T>) -> T {
        let sgn = match self.branch {
            Branch::Even => T::one(),
            Branch::Odd => -T::one(),
        };
        ((theta + self.beta).exp() * sgn * theta.powi(-(self.m as i32)) - T::one()).norm()
    }
}

/// `T(θ) = c exp(αθ) θ^(-m) - 1`, the dominant piece of a helper function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoreTerm<T> {
    pub c: T,
    pub alpha: T,
    pub m: u32,
}

impl<T: Real> CoreTerm<T> {
    pub fn new(c: T, alpha: T, m: u32) -> Result<Self> {
        if !(alpha < T::zero()) || m == 0 || c == T::zero() || !c.is_finite() {
            return Err(Error::NoBracket("core term needs alpha < 0, m >= 1, c != 0".into()));
        }
        Ok(Self { c, alpha, m })
    }

    /// `β = m ln|α| + ln|c|`.
    pub fn beta(&self) -> T {
        T::from_usize_lossy(self.m as usize) * self.alpha.abs().ln() + self.c.abs().ln()
    }

    /// Sign of `c α^m` decides the branch of the argument equation.
    pub fn sigma(&self) -> SigmaSystem<T> {
        let s = self.c * self.alpha.powi(self.m as i32);
        let branch = if s > T::zero() { Branch::Even } else { Branch::Odd };
        SigmaSystem::new(self.m, self.beta(), branch)
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        (z * self.alpha).exp() * z.powi(-(self.m as i32)) * self.c - T::one()
    }

    /// Upper-half-plane roots `u_n`, `n_from ≤ n ≤ n_to`.
    pub fn roots(&self, n_from: i64, n_to: i64) -> Result<Vec<C<T>>> {
        let sys = self.sigma();
        let mut out = Vec::new();
        for n in n_from..=n_to {
            for th in sys.roots(n)? {
                // σ is solved in w = αz; conjugating puts z in the upper half plane
                out.push(th.conj() / self.alpha);
            }
        }
        Ok(out)
    }

    pub fn root(&self, n: i64) -> Result<C<T>> {
        let r = self.roots(n, n)?;
        Ok(*r.last().unwrap())
    }
}

fn bisect_on<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T) -> T {
    // f(a) < 0 < f(b)
    for _ in 0..400 {
        let mid = (a + b) / T::lit(2.0);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < T::zero() {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a + b) / T::lit(2.0)
}

fn bisect_increasing<T: Real>(f: impl Fn(T) -> T, start: T) -> T {
    let two = T::lit(2.0);
    let (mut a, mut b) = (start, start);
    while f(a) > T::zero() {
        a = a / two;
    }
    while f(b) < T::zero() {
        b = b * two;
    }
    bisect_on(f, a, b)
}
