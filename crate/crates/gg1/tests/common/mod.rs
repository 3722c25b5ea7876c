#![allow(dead_code)]

use gg1::transforms::{ExpTerm, TransformSpec as S};
use gg1::{CoreTerm, ExpSum, Model};

pub fn md1() -> Model {
    Model::new(S::Exponential { rate: 1.0 / 3.0 }, S::Deterministic { d: 1.0 }).unwrap()
}

pub fn e2d1() -> Model {
    Model::new(S::Erlang { shape: 2, rate: 1.0 }, S::Deterministic { d: 1.0 }).unwrap()
}

pub fn ud1() -> Model {
    Model::new(S::Uniform { lo: 0.0, hi: 6.0 }, S::Deterministic { d: 1.0 }).unwrap()
}

pub fn uu1() -> Model {
    Model::new(S::Uniform { lo: 0.0, hi: 5.0 }, S::Uniform { lo: 1.0, hi: 2.0 }).unwrap()
}

pub fn mixture() -> Model {
    let service = S::Mixture(vec![
        (0.5, S::Uniform { lo: 0.0, hi: 7.0 / 8.0 }),
        (0.5, S::PolynomialDensity { lo: 0.0, hi: 1.0, coeffs: vec![2.0, -2.0] }),
    ]);
    Model::new(S::Deterministic { d: 0.5 }, service).unwrap()
}

pub fn gated(lambda: f64, mu: f64) -> Model {
    Model::new(
        S::Deterministic { d: 1.0 },
        S::GatedPoissonBatch { rate: lambda, per_customer: Box::new(S::Exponential { rate: mu }) },
    )
    .unwrap()
}

/// Models the helper-based and closed-form solvers handle.
pub fn solvable() -> Vec<(&'static str, Model)> {
    vec![("md1", md1()), ("e2d1", e2d1()), ("ud1", ud1()), ("uu1", uu1())]
}

/// Helper `H` and remainder `G` of the two-exponential mixture example, and
/// its two core terms.
pub fn mixture_parts() -> (ExpSum, ExpSum, [CoreTerm; 2]) {
    let h = ExpSum::new(
        vec![ExpTerm::new(-0.5, vec![0.0, 0.0, 1.0]), ExpTerm::new(-3.0 / 8.0, vec![0.0, -4.0 / 7.0])],
        -1.0,
    );
    let g = ExpSum::new(vec![ExpTerm::new(0.5, vec![0.0, 4.0 / 7.0, -1.0])], 0.0);
    (
        h,
        g,
        [CoreTerm::new(7.0 / 4.0, -1.0 / 8.0, 1).unwrap(), CoreTerm::new(-4.0 / 7.0, -3.0 / 8.0, 1).unwrap()],
    )
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
