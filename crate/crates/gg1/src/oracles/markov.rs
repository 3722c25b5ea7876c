use crate::error::{Error, Result};
use crate::gated_mm1::GatedModel;
use statrs::distribution::{Discrete, Poisson};

/// Stationary law of the queue length just before a gate opens.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovResult {
    pub pi: Vec<f64>,
    pub mu: f64,
    pub iterations: usize,
}

impl MarkovResult {
    /// `P(V > t)`: the workload of `k` waiting customers is Erlang(k, μ).
    pub fn tail(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0 - self.pi[0];
        }
        // P(Erlang(k) > t) = P(Poisson(μt) < k), accumulated in k
        let x = self.mu * t;
        let mut pmf = (-x).exp();
        let mut cdf = 0.0;
        let mut s = 0.0;
        for (k, p) in self.pi.iter().enumerate().skip(1) {
            cdf += pmf;
            pmf *= x / k as f64;
            s += p * cdf;
        }
        s
    }

    pub fn mean(&self) -> f64 {
        self.pi.iter().enumerate().map(|(k, p)| k as f64 * p).sum::<f64>() / self.mu
    }
}

fn pmf_vec(rate: f64, len: usize) -> Vec<f64> {
    if rate == 0.0 {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        return v;
    }
    let d = Poisson::new(rate).expect("positive rate");
    (0..len as u64).map(|k| d.pmf(k)).collect()
}

/// Power iteration for the gate-epoch chain: `N' = N + A` (A ~ Poisson(λ),
/// capped at `qmax`), then one unit of exponential service.
pub fn gated_markov(model: &GatedModel<f64>, qmax: usize, tol: f64, max_iter: usize) -> Result<MarkovResult> {
    let n = qmax + 1;
    let pa = pmf_vec(model.lambda, n);
    let pd = pmf_vec(model.mu, n);
    // departures: from k present to j left
    let mut dep = vec![vec![0.0; n]; n];
    for (k, row) in dep.iter_mut().enumerate() {
        let mut served = 0.0;
        for d in 0..k {
            row[k - d] = pd[d];
            served += pd[d];
        }
        row[0] = 1.0 - served;
    }
    let mut trans = vec![vec![0.0; n]; n];
    for (i, row) in trans.iter_mut().enumerate() {
        let mut arr = vec![0.0; n];
        let mut acc = 0.0;
        for a in 0..n - i {
            arr[i + a] = pa[a];
            acc += pa[a];
        }
        arr[qmax] += 1.0 - acc;
        for (k, p) in arr.iter().enumerate() {
            if *p != 0.0 {
                for (j, q) in dep[k].iter().enumerate() {
                    row[j] += p * q;
                }
            }
        }
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    let mut change = f64::INFINITY;
    for it in 1..=max_iter {
        let mut next = vec![0.0; n];
        for (i, p) in pi.iter().enumerate() {
            if *p != 0.0 {
                for (j, t) in trans[i].iter().enumerate() {
                    next[j] += p * t;
                }
            }
        }
        change = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if change < tol {
            return Ok(MarkovResult {
                pi,
                mu: model.mu,
                iterations: it,
            });
        }
    }
    Err(Error::NoStationaryConvergence(change))
}
