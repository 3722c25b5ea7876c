//! Plain-text model files:
//!
//! ```text
//! # U/D/1
//! interarrival = uniform 0 6
//! service = deterministic 1
//! ```
//!
//! Distribution syntax: `deterministic d`, `exponential rate`,
//! `erlang k rate`, `uniform lo hi`, `polydensity lo hi : c0 c1 ...`,
//! `mixture w1 <dist> | w2 <dist> ...`, `gated rate : <dist>`.
//! Numbers may be written as rationals `p/q`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::transforms::model::QueueModel;
use crate::transforms::spec::TransformSpec;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_number(tok: &str) -> Result<f64> {
    let tok = tok.trim();
    if let Some((p, q)) = tok.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| perr(format!("bad number '{tok}'")))?;
        let q: f64 = q.trim().parse().map_err(|_| perr(format!("bad number '{tok}'")))?;
        if q == 0.0 {
            return Err(perr(format!("zero denominator in '{tok}'")));
        }
        Ok(p / q)
    } else {
        tok.parse().map_err(|_| perr(format!("bad number '{tok}'")))
    }
}

/// Parses a distribution description such as `uniform 0 6`.
pub fn parse_spec<T: Real>(text: &str) -> Result<TransformSpec<T>> {
    let text = text.trim();
    let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let nums = |s: &str| -> Result<Vec<T>> {
        s.split_whitespace().map(|t| parse_number(t).map(T::lit)).collect()
    };
    let exactly = |v: Vec<T>, n: usize| -> Result<Vec<T>> {
        if v.len() == n {
            Ok(v)
        } else {
            Err(perr(format!("'{kind}' takes {n} parameter(s)")))
        }
    };
    let spec = match kind.to_ascii_lowercase().as_str() {
        "deterministic" | "constant" => {
            let v = exactly(nums(rest)?, 1)?;
            TransformSpec::Deterministic { d: v[0] }
        }
        "exponential" => {
            let v = exactly(nums(rest)?, 1)?;
            TransformSpec::Exponential { rate: v[0] }
        }
        "erlang" => {
            let v = exactly(nums(rest)?, 2)?;
            let k = v[0].to_f64().unwrap();
            if k.fract() != 0.0 || k < 1.0 {
                return Err(perr("erlang shape must be a positive integer"));
            }
            TransformSpec::Erlang {
                shape: k as u32,
                rate: v[1],
            }
        }
        "uniform" => {
            let v = exactly(nums(rest)?, 2)?;
            TransformSpec::Uniform { lo: v[0], hi: v[1] }
        }
        "polydensity" => {
            let (sup, co) = rest
                .split_once(':')
                .ok_or_else(|| perr("polydensity needs 'lo hi : coefficients'"))?;
            let s = exactly(nums(sup)?, 2)?;
            let coeffs = nums(co)?;
            if coeffs.is_empty() {
                return Err(perr("polydensity needs coefficients"));
            }
            TransformSpec::PolynomialDensity {
                lo: s[0],
                hi: s[1],
                coeffs,
            }
        }
        "mixture" => {
            let mut parts = Vec::new();
            for comp in rest.split('|') {
                let comp = comp.trim();
                let (w, d) = comp
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| perr("mixture component needs 'weight distribution'"))?;
                parts.push((T::lit(parse_number(w)?), parse_spec(d)?));
            }
            TransformSpec::Mixture(parts)
        }
        "gated" => {
            let (r, d) = rest
                .split_once(':')
                .ok_or_else(|| perr("gated needs 'rate : distribution'"))?;
            let r = exactly(nums(r)?, 1)?;
            TransformSpec::GatedPoissonBatch {
                rate: r[0],
                per_customer: Box::new(parse_spec(d)?),
            }
        }
        other => return Err(perr(format!("unknown distribution '{other}'"))),
    };
    spec.validate()?;
    Ok(spec)
}

/// Parses a whole model file into a queue.
pub fn parse_model<T: Real>(text: &str) -> Result<QueueModel<T>> {
    let mut a = None;
    let mut b = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr(format!("line {}: expected key = value", lineno + 1)))?;
        let spec = || {
            parse_spec::<T>(value).map_err(|e| match e {
                Error::Parse(m) => perr(format!("line {}: {m}", lineno + 1)),
                e => e,
            })
        };
        match key.trim().to_ascii_lowercase().as_str() {
            "interarrival" | "arrival" | "a" => a = Some(spec()?),
            "service" | "b" => b = Some(spec()?),
            "name" => {}
            k => return Err(perr(format!("line {}: unknown key '{k}'", lineno + 1))),
        }
    }
    let a = a.ok_or_else(|| perr("missing 'interarrival'"))?;
    let b = b.ok_or_else(|| perr("missing 'service'"))?;
    QueueModel::new(a, b)
}
