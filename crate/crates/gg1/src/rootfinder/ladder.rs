use crate::error::{Error, Result};
use crate::rootfinder::core::CoreTerm;
use crate::rootfinder::newton::{newton_refine, Target};
use crate::rootfinder::origin::OriginRoot;
use crate::scalar::{cx, Real, C};
use crate::transforms::EntireExpPoly;

/// The functions a ladder is built from: the cleared `f = F θ^P`, the cleared
/// helper `h = H θ^P'`, and the core term seeding the helper's zeros.
#[derive(Clone, Debug)]
pub struct LadderProblem<T> {
    pub f: EntireExpPoly<T>,
    pub h: EntireExpPoly<T>,
    pub core: CoreTerm<T>,
}

impl<T: Real> LadderProblem<T> {
    /// `2π/|α|`, the asymptotic gap between consecutive zeros.
    pub fn spacing(&self) -> T {
        T::TAU() / self.core.alpha.abs()
    }
}

/// Aligned zero sequences `u_n` (core), `w_n` (helper) and `z_n` (`F`) for
/// `n ≥ n1`, plus the zeros of `F` and `H` below the ladder.
#[derive(Clone, Debug)]
pub struct RootLadder<T> {
    /// Left-half-plane zeros of `F` below the ladder (upper-half representatives).
    pub origin: Vec<OriginRoot<T>>,
    /// Zeros of the helper below the ladder (upper-half representatives, any half plane).
    pub helper_origin: Vec<OriginRoot<T>>,
    pub u: Vec<Option<C<T>>>,
    pub w: Vec<C<T>>,
    pub z: Vec<C<T>>,
    pub steps_h: Vec<usize>,
    pub steps_f: Vec<usize>,
    pub residual_f: Vec<T>,
    pub epsilon: T,
    pub n1: i64,
}

pub const MAX_ITER: usize = 50;

impl<T: Real> RootLadder<T> {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Index `n` of the ladder entry at position `i`.
    pub fn index(&self, i: usize) -> i64 {
        self.n1 + i as i64
    }

    /// Starts a ladder at `n1` from the core seed `u_{n1}`.
    pub fn start(problem: &LadderProblem<T>, n1: i64, eps: T) -> Result<Self> {
        let u = problem.core.root(n1)?;
        let (wo, zo) = refine_pair(problem, u, eps, n1)?;
        Ok(Self {
            origin: Vec::new(),
            helper_origin: Vec::new(),
            u: vec![Some(u)],
            w: vec![wo.z],
            z: vec![zo.z],
            steps_h: vec![wo.steps],
            steps_f: vec![zo.steps],
            residual_f: vec![zo.residual],
            epsilon: eps,
            n1,
        })
    }

    /// Appends `count` pairs. The seed is the previous helper zero extrapolated
    /// from earlier entries, or moved up by `2πi/|α|` for the second entry.
    /// `track_core` also records the core zeros `u_n`.
    pub fn extend(&mut self, problem: &LadderProblem<T>, count: usize, track_core: bool) -> Result<()> {
        let step = cx(T::zero(), problem.spacing());
        for _ in 0..count {
            let n = self.n1 + self.w.len() as i64;
            let last_w = *self.w.last().expect("ladder has a first entry");
            let last_z = *self.z.last().unwrap();
            let k = self.w.len();
            // same-parity differences absorb a period-two wobble in the ladder
            let seed = match k {
                1 => last_w + step,
                2 | 3 => last_w * T::lit(2.0) - self.w[k - 2],
                4 | 5 => self.w[k - 2] * T::lit(2.0) - self.w[k - 4],
                _ => (self.w[k - 2] - self.w[k - 4]) * T::lit(3.0) + self.w[k - 6],
            };
            let (wo, zo) = refine_pair(problem, seed, self.epsilon, n)?;
            if !(zo.z.im > last_z.im) || !(wo.z.im > last_w.im) {
                return Err(Error::NoConvergence {
                    index: Some(n),
                    residual: f64::NAN,
                });
            }
            self.u.push(if track_core { Some(problem.core.root(n)?) } else { None });
            self.w.push(wo.z);
            self.z.push(zo.z);
            self.steps_h.push(wo.steps);
            self.steps_f.push(zo.steps);
            self.residual_f.push(zo.residual);
        }
        Ok(())
    }

    /// Ladder whose helper coincides with `F` (`w_n = z_n`).
    pub fn from_exact(origin: Vec<OriginRoot<T>>, u: Vec<C<T>>, z: Vec<C<T>>, n1: i64, eps: T) -> Self {
        let n = z.len();
        Self {
            origin: origin.clone(),
            helper_origin: Vec::new(),
            u: u.into_iter().map(Some).collect(),
            w: z.clone(),
            z,
            steps_h: vec![0; n],
            steps_f: vec![0; n],
            residual_f: vec![T::zero(); n],
            epsilon: eps,
            n1,
        }
    }
}

fn refine_pair<T: Real>(
    problem: &LadderProblem<T>,
    seed: C<T>,
    eps: T,
    n: i64,
) -> Result<(crate::rootfinder::NewtonOutcome<T>, crate::rootfinder::NewtonOutcome<T>)> {
    let tag = |e: Error| match e {
        Error::NoConvergence { residual, .. } => Error::NoConvergence {
            index: Some(n),
            residual,
        },
        e => e,
    };
    let wo = newton_refine(&problem.h, seed, eps, MAX_ITER).map_err(tag)?;
    let zo = newton_refine(&problem.f, wo.z, eps, MAX_ITER).map_err(tag)?;
    Ok((wo, zo))
}

/// Walks the ladder without storing it, for very long products.
pub struct LadderWalker<'a, T> {
    problem: &'a LadderProblem<T>,
    w: C<T>,
    eps: T,
    n: i64,
}

impl<'a, T: Real> LadderWalker<'a, T> {
    pub fn after(problem: &'a LadderProblem<T>, ladder: &RootLadder<T>) -> Self {
        Self {
            problem,
            w: *ladder.w.last().unwrap(),
            eps: ladder.epsilon,
            n: ladder.n1 + ladder.len() as i64 - 1,
        }
    }
}

impl<'a, T: Real> Iterator for LadderWalker<'a, T> {
    type Item = Result<(C<T>, C<T>)>;

    fn next(&mut self) -> Option<Self::Item> {
        self.n += 1;
        let seed = self.w + cx(T::zero(), self.problem.spacing());
        Some(refine_pair(self.problem, seed, self.eps, self.n).map(|(wo, zo)| {
            self.w = wo.z;
            (wo.z, zo.z)
        }))
    }
}

/// Residual of a stored root for the given target.
pub fn residual<T: Real, G: Target<T>>(g: &G, z: C<T>) -> T {
    g.value_deriv(z).0.norm() / g.scale(z)
}
