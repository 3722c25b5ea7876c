use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::transforms::exppoly::{ExpSum, ExpTerm};
use crate::transforms::model::QueueModel;

/// One term `exp(alpha θ) Φ(1/θ) θ^(-k)` of the decomposition of `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompTerm<T> {
    pub alpha: T,
    pub k: usize,
    pub phi: Vec<T>,
}

/// `F(θ) = -1 + Σ_j exp(α_j θ) Φ_j(1/θ) θ^(-k_j)`, sorted by ascending `α_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentDecomposition<T> {
    pub terms: Vec<DecompTerm<T>>,
    pub alpha0: T,
    /// Index of the last term with `α_j <= 0`.
    pub jp: usize,
    /// False when a rational law forced truncation of some `Φ_j`.
    pub exact: bool,
}

/// Number of series coefficients kept for rational laws.
pub const SERIES_LEN: usize = 40;

impl<T: Real> ExponentDecomposition<T> {
    pub fn from_exp_sum(f: &ExpSum<T>, exact: bool) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &f.terms {
            if let Some(k) = t.leading_order() {
                terms.push(DecompTerm {
                    alpha: t.alpha,
                    k,
                    phi: t.coeffs[k..].to_vec(),
                });
            }
        }
        if terms.iter().all(|t| t.k == 0) {
            return Err(Error::Unsupported(
                "point-mass terms only: no term with a pole at 0".into(),
            ));
        }
        let alpha0 = terms[0].alpha;
        if !(alpha0 < T::zero()) {
            return Err(Error::Unsupported("no negative exponent: waiting time is degenerate".into()));
        }
        if !(terms.last().unwrap().alpha > T::zero()) {
            return Err(Error::Unsupported("no positive exponent".into()));
        }
        let jp = terms.iter().rposition(|t| t.alpha <= T::zero()).unwrap();
        Ok(Self {
            terms,
            alpha0,
            jp,
            exact,
        })
    }

    /// `κ_p`: smallest pole order among the terms with positive exponent.
    pub fn kappa_p(&self) -> usize {
        self.terms[self.jp + 1..].iter().map(|t| t.k).min().unwrap()
    }

    /// Number of separate zero families of `F` in the left half plane.
    ///
    /// On the curves `Re θ = -s ln|θ|` the term `exp(α_j θ) θ^(-k_j)` has size
    /// `|θ|^(|α_j| s - k_j)`; every corner of the upper envelope of these lines
    /// (together with the constant, `0`) carries one family.
    pub fn ladder_families(&self) -> usize {
        let lines: Vec<(T, T)> = self.terms[..=self.jp]
            .iter()
            .filter(|t| t.alpha < T::zero())
            .map(|t| (-t.alpha, T::from_usize_lossy(t.k)))
            .collect();
        let (mut slope, mut icpt, mut at) = (T::zero(), T::zero(), T::zero());
        let mut corners = 0;
        loop {
            let mut next: Option<(T, T, T)> = None;
            for &(a, k) in &lines {
                if a <= slope {
                    continue;
                }
                let s = (k - icpt) / (a - slope);
                if s < at {
                    continue;
                }
                let better = match next {
                    None => true,
                    Some((s0, a0, _)) => s < s0 || (s == s0 && a > a0),
                };
                if better {
                    next = Some((s, a, k));
                }
            }
            match next {
                Some((s, a, k)) => {
                    corners += 1;
                    at = s;
                    slope = a;
                    icpt = k;
                }
                None => return corners,
            }
        }
    }

    pub fn reassemble(&self) -> ExpSum<T> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut c = vec![T::zero(); t.k];
                c.extend(t.phi.iter().cloned());
                ExpTerm::new(t.alpha, c)
            })
            .collect();
        ExpSum::new(terms, -T::one())
    }
}

/// Splits `F` of a queue into its exponential terms.
pub fn decompose_f<T: Real>(model: &QueueModel<T>) -> Result<ExponentDecomposition<T>> {
    if matches!(model.service, crate::transforms::TransformSpec::GatedPoissonBatch { .. })
        || matches!(model.interarrival, crate::transforms::TransformSpec::GatedPoissonBatch { .. })
    {
        return Err(Error::Unsupported(
            "gated batch service has an essential singularity; use the gated module".into(),
        ));
    }
    let (f, exact) = model.f_expansion(SERIES_LEN)?;
    if (f.constant + T::one()).abs() > T::lit(1e-12) {
        // the -1 must not be cancelled by an alpha = 0 point mass
        return Err(Error::Unsupported("lattice-type cancellation of the constant term".into()));
    }
    ExponentDecomposition::from_exp_sum(&f, exact)
}
