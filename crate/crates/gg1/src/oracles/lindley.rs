use crate::error::{Error, Result};
use crate::transforms::spec::Piece;
use crate::transforms::{QueueModel, TransformSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

/// Draws from a [`TransformSpec`] by inversion or composition.
#[derive(Clone, Debug)]
pub enum Sampler {
    Constant(f64),
    Exponential(f64),
    Erlang(u32, f64),
    Uniform(f64, f64),
    /// Inverse CDF of a polynomial density on `[lo, lo + w]`.
    Poly { lo: f64, w: f64, cdf: Vec<f64> },
    Mixture(Vec<(f64, Sampler)>),
    Batch(f64, Box<Sampler>),
}

impl Sampler {
    pub fn new(spec: &TransformSpec<f64>) -> Self {
        match spec {
            TransformSpec::Deterministic { d } => Self::Constant(*d),
            TransformSpec::Exponential { rate } => Self::Exponential(*rate),
            TransformSpec::Erlang { shape, rate } => Self::Erlang(*shape, *rate),
            TransformSpec::Uniform { lo, hi } => Self::Uniform(*lo, *hi),
            TransformSpec::PolynomialDensity { lo, hi, coeffs } => {
                let p = Piece::from_poly(*lo, *hi, coeffs);
                let mut cdf = vec![0.0];
                cdf.extend(p.q.iter().enumerate().map(|(i, q)| q / (i + 1) as f64));
                Self::Poly { lo: p.lo, w: p.w, cdf }
            }
            TransformSpec::Mixture(parts) => {
                let mut acc = 0.0;
                Self::Mixture(
                    parts
                        .iter()
                        .map(|(w, s)| {
                            acc += w;
                            (acc, Self::new(s))
                        })
                        .collect(),
                )
            }
            TransformSpec::GatedPoissonBatch { rate, per_customer } => {
                Self::Batch(*rate, Box::new(Self::new(per_customer)))
            }
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Constant(d) => *d,
            Self::Exponential(r) => -(1.0 - rng.gen::<f64>()).ln() / r,
            Self::Erlang(k, r) => (0..*k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).sum::<f64>() / r,
            Self::Uniform(a, b) => a + (b - a) * rng.gen::<f64>(),
            Self::Poly { lo, w, cdf } => {
                let u = rng.gen::<f64>();
                let g = |v: f64| cdf.iter().rev().fold(0.0, |acc, c| acc * v + c);
                let (mut a, mut b) = (0.0, 1.0);
                for _ in 0..48 {
                    let m = 0.5 * (a + b);
                    if g(m) < u {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                lo + w * 0.5 * (a + b)
            }
            Self::Mixture(parts) => {
                let u = rng.gen::<f64>() * parts.last().map_or(1.0, |p| p.0);
                let pick = parts.iter().find(|p| u < p.0).unwrap_or(parts.last().unwrap());
                pick.1.sample(rng)
            }
            Self::Batch(rate, each) => {
                let u = rng.gen::<f64>();
                let mut p = (-rate).exp();
                let mut cdf = p;
                let mut n = 0u64;
                while u > cdf && p > 0.0 {
                    n += 1;
                    p *= rate / n as f64;
                    cdf += p;
                }
                (0..n).map(|_| each.sample(rng)).sum()
            }
        }
    }
}

/// Monte Carlo estimates with standard errors taken across independent shards.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub seed: u64,
    pub customers: u64,
    /// `(t, P(W > t), s.e.)`.
    pub tail: Vec<(f64, f64, f64)>,
    /// `(E W^ν, s.e.)` for ν = 1, 2, 3.
    pub moments: [(f64, f64); 3],
}

impl SimulationResult {
    pub fn tail_at(&self, t: f64) -> Option<(f64, f64)> {
        self.tail.iter().find(|r| (r.0 - t).abs() < 1e-12).map(|r| (r.1, r.2))
    }
}

pub const SHARDS: u64 = 32;

/// Lindley recursion `W ← max(0, W + Y - X)`, one ChaCha stream per shard,
/// with the first 10% of every shard discarded.
pub fn lindley_simulate(model: &QueueModel<f64>, customers: u64, seed: u64, grid: &[f64]) -> Result<SimulationResult> {
    if customers < SHARDS * 10 {
        return Err(Error::InvalidSpec(format!("need at least {} customers", SHARDS * 10)));
    }
    let ya = Sampler::new(&model.service);
    let xa = Sampler::new(&model.interarrival);
    let per = customers / SHARDS;
    let stats: Vec<Vec<f64>> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let warm = per / 10;
            let mut w = 0.0f64;
            let mut acc = vec![0.0; grid.len() + 3];
            for k in 0..per {
                if k >= warm {
                    for (i, t) in grid.iter().enumerate() {
                        if w > *t {
                            acc[i] += 1.0;
                        }
                    }
                    let g = grid.len();
                    acc[g] += w;
                    acc[g + 1] += w * w;
                    acc[g + 2] += w * w * w;
                }
                w = (w + ya.sample(&mut rng) - xa.sample(&mut rng)).max(0.0);
            }
            let kept = (per - warm) as f64;
            acc.iter().map(|a| a / kept).collect()
        })
        .collect();
    let ns = SHARDS as f64;
    let mean_se = |i: usize| {
        let m = stats.iter().map(|s| s[i]).sum::<f64>() / ns;
        let v = stats.iter().map(|s| (s[i] - m).powi(2)).sum::<f64>() / (ns - 1.0);
        (m, (v / ns).sqrt())
    };
    let g = grid.len();
    Ok(SimulationResult {
        seed,
        customers: per * SHARDS,
        tail: grid
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let (m, s) = mean_se(i);
                (*t, m, s)
            })
            .collect(),
        moments: [mean_se(g), mean_se(g + 1), mean_se(g + 2)],
    })
}
