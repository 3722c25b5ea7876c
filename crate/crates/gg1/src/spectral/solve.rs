use crate::error::{Error, Result};
use crate::rootfinder::origin::{full_multiset, is_real, zeros_in_rect, OriginRoot, Rect};
use crate::rootfinder::{LadderProblem, RootLadder};
use crate::scalar::{Real, C};
use crate::spectral::coefficients::{expansion_naive, expansion_telescoped};
use crate::spectral::cumulants::{cumulant, idle_probability, IdleEstimate};
use crate::spectral::erlang::ErlangDeterministic;
use crate::spectral::expansion::SpectralExpansion;
use crate::spectral::helper::HelperFunction;
use crate::transforms::{decompose_f, ExpSum, ExponentDecomposition, QueueModel};

const SELF_TEST_K: usize = 5000;

/// Everything needed for the helper-based spectral method on one queue.
#[derive(Clone, Debug)]
pub struct HelperAnalysis<T> {
    pub f: ExpSum<T>,
    pub helper: HelperFunction<T>,
    pub problem: LadderProblem<T>,
    pub ladder: RootLadder<T>,
    pub decomposition: Option<ExponentDecomposition<T>>,
}

impl<T: Real> HelperAnalysis<T> {
    /// Builds the helper from the decomposition of `F` and locates the
    /// zeros below the ladder.
    pub fn new(model: &QueueModel<T>, eps: T) -> Result<Self> {
        let dec = decompose_f(model)?;
        if !dec.exact {
            return Err(Error::Unsupported(
                "helper route needs exact exponential sums (bounded piecewise-polynomial laws)".into(),
            ));
        }
        let families = dec.ladder_families();
        if families != 1 {
            return Err(Error::Unsupported(format!(
                "F has {families} families of left zeros; only a single ladder is handled"
            )));
        }
        let helper = HelperFunction::from_decomposition(&dec)?;
        let mut a = Self::from_parts(dec.reassemble(), helper, eps)?;
        a.decomposition = Some(dec);
        Ok(a)
    }

    /// Same, from an explicit `F` and helper.
    pub fn from_parts(f: ExpSum<T>, helper: HelperFunction<T>, eps: T) -> Result<Self> {
        let problem = LadderProblem {
            f: f.cleared(f.max_pole()),
            h: helper.cleared(),
            core: helper.core,
        };
        let spacing = problem.spacing();
        let mut ladder = first_ladder(&problem, eps)?;
        let u1 = ladder.u[0].unwrap();
        let y_cut = ladder.w[0].im - spacing / T::lit(2.0);
        let x_left = T::lit(1.5) * u1.norm() + spacing;
        let dy = T::lit(0.01) * spacing.min(T::one());

        // helper zeros: θ^mq H is entire and nonzero at 0
        let x_right = right_bound(&helper.terms) * T::lit(1.2) + T::one();
        let hrect = Rect {
            x0: -x_left,
            x1: x_right,
            y0: -dy,
            y1: y_cut,
        };
        let gh = |z: C<T>| helper.reduced(z);
        let u = upper_half(zeros_in_rect(&gh, hrect, eps)?);

        let z0 = real_left_zero(&f)?;
        let fd1 = f.derivative();
        let fd2 = fd1.derivative();
        let frect = Rect {
            x0: -x_left,
            x1: z0 / T::lit(2.0),
            y0: -dy,
            y1: y_cut,
        };
        let gf = |z: C<T>| [f.eval(z), fd1.eval(z), fd2.eval(z)];
        let mut zs = upper_half(zeros_in_rect(&gf, frect, eps)?);
        zs.sort_by(|a, b| b.z.re.partial_cmp(&a.z.re).unwrap());
        zs.sort_by(|a, b| (!a.is_real()).cmp(&!b.is_real()));
        if !zs.iter().any(|r| r.is_real() && (r.z.re - z0).abs() < T::lit(1e-8) * (T::one() + z0.abs())) {
            return Err(Error::CountMismatch {
                winding: full_multiset(&zs).len() as i64,
                found: 0,
            });
        }
        let nu = full_multiset(&u).len() as i64 - helper.mq as i64;
        let nz = full_multiset(&zs).len();
        if nu != nz as i64 {
            return Err(Error::CountMismatch { winding: nu, found: nz });
        }
        ladder.origin = zs;
        ladder.helper_origin = u;
        Ok(Self {
            f,
            helper,
            problem,
            ladder,
            decomposition: None,
        })
    }

    /// Extends the ladder to at least `n` entries.
    pub fn ensure_ladder(&mut self, n: usize) -> Result<()> {
        if self.ladder.len() < n {
            let k = n - self.ladder.len();
            self.ladder.extend(&self.problem, k, false)?;
        }
        Ok(())
    }

    /// Ensures the ladder also records core zeros for its first `n` entries.
    pub fn ensure_ladder_with_core(&mut self, n: usize) -> Result<()> {
        self.ensure_ladder(n)?;
        for i in 0..n {
            if self.ladder.u[i].is_none() {
                self.ladder.u[i] = Some(self.problem.core.root(self.ladder.index(i))?);
            }
        }
        Ok(())
    }

    /// Upper-half ψ poles below the ladder.
    pub fn n_origin(&self) -> usize {
        self.ladder.origin.len()
    }

    pub fn expansion_telescoped(&mut self, n_poles: usize, k: usize) -> Result<SpectralExpansion<T>> {
        let ladder_terms = n_poles.saturating_sub(self.n_origin());
        self.ensure_ladder(ladder_terms + k + 1)?;
        expansion_telescoped(&self.ladder, &self.helper, n_poles, k)
    }

    pub fn expansion_naive(&mut self, n_poles: usize, k: usize) -> Result<SpectralExpansion<T>> {
        self.ensure_ladder((n_poles + k).saturating_sub(self.n_origin()) + 1)?;
        expansion_naive(&self.ladder, self.helper.alpha, n_poles, k)
    }

    /// Checks the first `n_poles` telescoped coefficients (window `k`)
    /// against the naive product with `K = 5000`.
    pub fn self_test(&mut self, n_poles: usize, k: usize) -> Result<()> {
        let tel = self.expansion_telescoped(n_poles, k)?;
        let naive = self.expansion_naive(n_poles, SELF_TEST_K)?;
        for (i, (a, b)) in tel.poles.iter().zip(&naive.poles).enumerate() {
            let rel = (C::new(T::one(), T::zero()) - a.a[0] / b.a[0]).norm();
            if rel > T::lit(1e-3) {
                return Err(Error::HelperMismatch {
                    index: i,
                    rel: rel.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    pub fn idle(&mut self, k: usize) -> Result<IdleEstimate<T>> {
        self.ensure_ladder(k)?;
        idle_probability(&self.ladder, &self.helper, k)
    }

    /// `κ_j` from `n_terms` poles, telescoped through the helper or truncated.
    pub fn cumulant(&mut self, j: u32, n_terms: usize, telescoped: bool) -> Result<T> {
        self.ensure_ladder(n_terms.saturating_sub(self.n_origin()) + 1)?;
        let h = if telescoped { Some(&self.helper) } else { None };
        cumulant(&self.ladder, h, self.helper.alpha, j, n_terms)
    }
}

/// The smallest ladder start whose first few entries behave like the
/// asymptotic ladder (helper zeros near the core zeros, regular spacing).
fn first_ladder<T: Real>(problem: &LadderProblem<T>, eps: T) -> Result<RootLadder<T>> {
    let spacing = problem.spacing();
    let quarter = spacing / T::lit(4.0);
    let mut last_err = None;
    for n1 in 1..=25i64 {
        let attempt = (|| -> Result<Option<RootLadder<T>>> {
            let mut lad = RootLadder::start(problem, n1, eps)?;
            lad.extend(problem, 3, true)?;
            for i in 0..lad.len() {
                let u = lad.u[i].unwrap();
                if (lad.w[i] - u).norm() > quarter || (lad.z[i] - lad.w[i]).norm() > quarter {
                    return Ok(None);
                }
                if i > 0 {
                    let gap = lad.w[i].im - lad.w[i - 1].im;
                    if (gap - spacing).abs() > quarter || lad.z[i].re >= T::zero() {
                        return Ok(None);
                    }
                }
            }
            lad.u.truncate(1);
            lad.w.truncate(1);
            lad.z.truncate(1);
            lad.steps_h.truncate(1);
            lad.steps_f.truncate(1);
            lad.residual_f.truncate(1);
            Ok(Some(lad))
        })();
        match attempt {
            Ok(Some(l)) => return Ok(l),
            Ok(None) => {}
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(Error::NoConvergence {
        index: None,
        residual: f64::NAN,
    }))
}

/// Radius beyond which `H + 1` is smaller than 1 in the right half plane.
fn right_bound<T: Real>(h: &ExpSum<T>) -> T {
    let mut r = T::one();
    loop {
        let mut s = h.constant.abs() - T::one();
        for t in &h.terms {
            for (k, c) in t.coeffs.iter().enumerate() {
                s += c.abs() / r.powi(k as i32);
            }
        }
        // only alpha <= 0 terms: |e^{αθ}| <= 1 for Re θ >= 0
        if s < T::lit(0.5) || r > T::lit(1e6) {
            return r;
        }
        r = r * T::lit(1.5);
    }
}

/// Zeros with `Im ≥ 0`, snapping near-real ones onto the axis.
fn upper_half<T: Real>(roots: Vec<OriginRoot<T>>) -> Vec<OriginRoot<T>> {
    let mut out: Vec<OriginRoot<T>> = Vec::new();
    for mut r in roots {
        if is_real(r.z) {
            r.z.im = T::zero();
        } else if r.z.im < T::zero() {
            continue;
        }
        out.push(r);
    }
    out
}

/// The unique negative real zero of `F`.
pub fn real_left_zero<T: Real>(f: &ExpSum<T>) -> Result<T> {
    let w = f.width().max(T::lit(1e-12));
    let val = |x: T| f.eval_regular(C::new(x, T::zero())).re;
    let mut hi = -T::lit(1e-6) / w;
    if !(val(hi) < T::zero()) {
        return Err(Error::NoBracket("F is not negative just left of 0".into()));
    }
    let mut lo = hi;
    let mut guard = 0;
    while val(lo) < T::zero() {
        hi = lo;
        lo = lo * T::lit(2.0);
        guard += 1;
        if guard > 200 {
            return Err(Error::NoBracket("F stays negative on the negative axis".into()));
        }
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if val(mid) < T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

/// How ladder-pole coefficients are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    /// Product form, each product running `k` poles past its own.
    Naive { k: usize },
    /// Helper-telescoped with `k` ladder ratios.
    Telescoped { k: usize },
}

/// A queue together with the route used to expand its ψ.
#[derive(Clone, Debug)]
pub enum Solver<T> {
    /// Erlang (or exponential) arrivals, deterministic service.
    ErlangDeterministic {
        route: ErlangDeterministic<T>,
        ladder: RootLadder<T>,
    },
    Helper(HelperAnalysis<T>),
}

impl<T: Real> Solver<T> {
    pub fn new(model: &QueueModel<T>, eps: T) -> Result<Self> {
        use crate::transforms::TransformSpec as S;
        let erlang = match (&model.interarrival, &model.service) {
            (S::Exponential { rate }, S::Deterministic { d }) => Some((1, *rate, *d)),
            (S::Erlang { shape, rate }, S::Deterministic { d }) => Some((*shape, *rate, *d)),
            _ => None,
        };
        if let Some((m, rate, d)) = erlang {
            let route = ErlangDeterministic::new(m, rate, d)?;
            let ladder = route.ladder(0)?;
            return Ok(Self::ErlangDeterministic { route, ladder });
        }
        Ok(Self::Helper(HelperAnalysis::new(model, eps)?))
    }

    fn ensure(&mut self, ladder_len: usize) -> Result<()> {
        match self {
            Self::ErlangDeterministic { route, ladder } => {
                if ladder.len() < ladder_len {
                    *ladder = route.ladder(ladder_len)?;
                }
                Ok(())
            }
            Self::Helper(a) => a.ensure_ladder(ladder_len),
        }
    }

    pub fn ladder(&self) -> &RootLadder<T> {
        match self {
            Self::ErlangDeterministic { ladder, .. } => ladder,
            Self::Helper(a) => &a.ladder,
        }
    }

    /// The first `count` upper-half zeros of `F` in the left half plane.
    pub fn left_zeros(&mut self, count: usize) -> Result<Vec<C<T>>> {
        let n0 = self.ladder().origin.len();
        self.ensure(count.saturating_sub(n0))?;
        let l = self.ladder();
        Ok(l.origin.iter().map(|o| o.z).chain(l.z.iter().cloned()).take(count).collect())
    }

    /// The first `count` helper zeros (empty on the closed-form route).
    pub fn helper_zeros(&mut self, count: usize) -> Result<Vec<C<T>>> {
        if let Self::Helper(a) = self {
            let n0 = a.ladder.helper_origin.len();
            a.ensure_ladder(count.saturating_sub(n0))?;
            let l = &a.ladder;
            let mut origin = full_multiset(&l.helper_origin);
            origin.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
            return Ok(origin
                .into_iter()
                .chain(l.w.iter().cloned())
                .take(count)
                .collect());
        }
        Ok(Vec::new())
    }

    /// Expansion over `n_poles` poles. The closed-form route has exact
    /// coefficients and ignores `coef`.
    pub fn expansion(&mut self, n_poles: usize, coef: Coefficients) -> Result<SpectralExpansion<T>> {
        match self {
            Self::ErlangDeterministic { route, ladder } => {
                if ladder.len() + 1 < n_poles {
                    *ladder = route.ladder(n_poles)?;
                }
                route.expansion(ladder, n_poles)
            }
            Self::Helper(a) => match coef {
                Coefficients::Naive { k } => a.expansion_naive(n_poles, k),
                Coefficients::Telescoped { k } => a.expansion_telescoped(n_poles, k),
            },
        }
    }

    /// `P(W = 0)`; the helper route uses `k` ladder pairs.
    pub fn idle(&mut self, k: usize) -> Result<T> {
        match self {
            Self::ErlangDeterministic { route, .. } => Ok(route.idle()),
            Self::Helper(a) => Ok(a.idle(k)?.p0),
        }
    }

    /// `(κ1, κ2, κ3)` from `n_terms` poles.
    pub fn cumulants(&mut self, n_terms: usize, telescoped: bool) -> Result<[T; 3]> {
        match self {
            Self::ErlangDeterministic { route, .. } => {
                let (m1, m2, m3) = (route.moment_exact(1), route.moment_exact(2), route.moment_exact(3));
                let (k1, k2, k3) = crate::spectral::cumulants::cumulants_from_moments(m1, m2, m3);
                Ok([k1, k2, k3])
            }
            Self::Helper(a) => Ok([
                a.cumulant(1, n_terms, telescoped)?,
                a.cumulant(2, n_terms, telescoped)?,
                a.cumulant(3, n_terms, telescoped)?,
            ]),
        }
    }
}
