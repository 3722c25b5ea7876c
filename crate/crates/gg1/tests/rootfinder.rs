mod common;

use common::*;
use gg1::rootfinder::{gated_roots, newton_refine, residual, Branch, FnTarget, SigmaSystem};
use gg1::{Complex, CoreTerm, Error, Solver};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn helper_solver(m: &gg1::Model) -> gg1::Analysis {
    match Solver::new(m, 1e-12).unwrap() {
        Solver::Helper(a) => a,
        _ => panic!("expected the helper route"),
    }
}

const F_LISTING: [(f64, f64); 4] = [
    (-1.112636162915984, 0.0),
    (-2.362945135569372, 4.24463938127872),
    (-2.894232391480601, 7.457728791764555),
    (-3.214439899719532, 10.723473915095289),
];

const H_LISTING: [(f64, f64); 5] = [
    (-0.329175737104105, 0.0),
    (-1.107062156887795, 0.0),
    (-2.3629486802831456, 4.244641429104492),
    (-2.8942321368738169, 7.457728708110446),
    (-3.2144399507792216, 10.723473898300561),
];

const T_LISTING: [(f64, f64); 3] = [
    (-2.3782928911558301, 4.196823183937124),
    (-2.8870718848316352, 7.485890763202157),
    (-3.2185697792830807, 10.703472361378987),
];

#[test]
fn newton_on_a_quadratic() {
    let g = FnTarget(|z: Complex| (z * z - 1.0, z * 2.0));
    let o = newton_refine(&g, c(0.9, 0.0), 1e-12, 50).unwrap();
    assert!((o.z - 1.0).norm() < 1e-12);
    assert!(o.steps <= 5);
}

#[test]
fn newton_failures() {
    let flat = FnTarget(|z: Complex| (z * z + 1.0, z * 2.0));
    assert_eq!(newton_refine(&flat, c(0.0, 0.0), 1e-12, 50), Err(Error::DerivativeVanished));
    let no_zero = FnTarget(|z: Complex| (z.exp(), z.exp()));
    assert!(matches!(
        newton_refine(&no_zero, c(0.0, 0.0), 1e-12, 5),
        Err(Error::NoConvergence { .. })
    ));
}

#[test]
fn uu1_zero_listing() {
    let mut s = Solver::new(&uu1(), 1e-12).unwrap();
    let z = s.left_zeros(4).unwrap();
    for (got, (re, im)) in z.iter().zip(F_LISTING) {
        assert!((got - c(re, im)).norm() < 1e-9, "{got}");
    }
    let w = s.helper_zeros(5).unwrap();
    for (got, (re, im)) in w.iter().zip(H_LISTING) {
        assert!((got - c(re, im)).norm() < 1e-9, "{got}");
    }
}

#[test]
fn uu1_core_zeros() {
    let a = helper_solver(&uu1());
    let core = a.problem.core;
    assert_eq!((core.alpha, core.m), (-2.0, 2));
    for (n, (re, im)) in (1..).zip(T_LISTING) {
        let u = core.root(n).unwrap();
        assert!((u - c(re, im)).norm() < 1e-9, "n={n}: {u}");
        assert!(core.eval(u).norm() < 1e-9);
    }
}

#[test]
fn uu1_ladder_step_from_previous_helper_zero() {
    let a = helper_solver(&uu1());
    let (re, im) = H_LISTING[3];
    let seed = c(re, im) + c(0.0, a.problem.spacing());
    let w = newton_refine(&a.problem.h, seed, 1e-13, 50).unwrap().z;
    let (re5, im5) = H_LISTING[4];
    assert!((w - c(re5, im5)).norm() < 1e-9, "{w}");
    let z = newton_refine(&a.problem.f, w, 1e-13, 50).unwrap().z;
    let (zr, zi) = F_LISTING[3];
    assert!((z - c(zr, zi)).norm() < 1e-9, "{z}");
}

#[test]
fn zeros_below_the_ladder() {
    for m in [ud1(), uu1()] {
        let a = helper_solver(&m);
        let reals = a.ladder.origin.iter().filter(|o| o.is_real()).count();
        assert_eq!(reals, 1);
        let total: usize = a.ladder.origin.iter().map(|o| if o.is_real() { 1 } else { 2 }).sum();
        let ladder_first = a.ladder.z[0];
        assert!(a.ladder.origin.iter().all(|o| o.z.re < 0.0 && o.z.im < ladder_first.im));
        // one real zero plus conjugate pairs
        assert_eq!(total % 2, 1);
    }
}

#[test]
fn gated_roots_closed_form() {
    let (r0, s0) = gated_roots(3.0, 4.0, 0);
    assert_eq!((r0, s0), (c(0.0, 0.0), c(-1.0, 0.0)));
    for n in 1..=2000i64 {
        for k in [n, -n] {
            let (r, s) = gated_roots(3.0, 4.0, k);
            assert!(r.re > 0.0 && s.re < 0.0);
            let target = c(0.0, -2.0 * k as f64 * 4.0 * PI);
            assert!((s * r - target).norm() <= 1e-9 * target.norm(), "n={k}");
            // H(θ) = θ(θ + μ - λ)/(θ + μ) = 2nπi; s_n crowds the pole of H at -μ,
            // so the error is measured against H's conditioning there
            for z in [r, s] {
                let h = z * (z + 1.0) / (z + 4.0);
                let dh = 1.0 - 3.0 / ((z + 4.0) * (z + 4.0));
                let cond = 1.0 + dh.norm() * z.norm();
                assert!((h - c(0.0, 2.0 * PI * k as f64)).norm() < 1e-10 * cond, "n={k} {z}");
            }
        }
        let (r, _) = gated_roots(3.0, 4.0, n);
        assert!((r - c(3.0, 2.0 * PI * n as f64)).norm() <= 3.0 / n as f64);
    }
}

#[test]
fn sigma_without_real_root() {
    // e^θ = θ has no real solution: the n = 0 index gives a complex pair
    let sys = SigmaSystem::<f64>::new(1, 0.0, Branch::Even);
    assert!(sys.gap().is_none());
    let th = sys.roots(0).unwrap();
    assert_eq!(th.len(), 1);
    let t = th[0];
    assert!(t.im > 0.0);
    assert!(sys.residual(t) < 1e-10);
    let rho = t.norm();
    assert!((sys.x(rho) - t.re).abs() < 1e-10);
    assert!(sys.h(rho).abs() < 1e-10);
    for n in 1..30 {
        let t = sys.roots(n).unwrap()[0];
        assert!(sys.residual(t) < 1e-10, "n={n}");
        assert!((sys.h(t.norm()) - 2.0 * PI * n as f64).abs() < 1e-8);
    }
}

#[test]
fn sigma_with_real_roots() {
    // β < -1 leaves two real roots of e^{θ+β} = θ
    let sys = SigmaSystem::<f64>::new(1, -2.0, Branch::Even);
    let (r1, r2) = sys.gap().unwrap();
    let th = sys.roots(0).unwrap();
    assert_eq!(th.len(), 2);
    for (t, r) in th.iter().zip([r1, r2]) {
        assert_eq!(t.re, r);
        assert!(((r - 2.0).exp() - r).abs() < 1e-12);
    }
}

#[test]
fn erlang_deterministic_right_zero() {
    let e = gg1::ErlangDeterministic::new(2, 1.0, 1.0).unwrap();
    let u1 = e.right[0];
    assert!(u1.im.abs() < 1e-14);
    assert!((u1.re - 1.477670).abs() < 2e-6);
    let f = gg1::transforms::eval_f(&e2d1(), u1, 0).unwrap();
    assert!(f.norm() < 1e-13);
}

#[test]
fn ud1_core_asymptotics() {
    let a = helper_solver(&ud1());
    let core = a.problem.core;
    assert_eq!((core.alpha, core.m), (-1.0, 1));
    let mut prev = f64::INFINITY;
    for n in 10..=20 {
        let u = core.root(n).unwrap();
        let d = (u.im - (2.0 * n as f64 + 0.5) * PI).abs();
        assert!(d < 1.0);
        assert!(d < prev);
        prev = d;
        let re_est = (2.0 * n as f64 * PI).ln() / core.alpha;
        assert!((u.re - re_est).abs() < 3.0);
    }
}

#[test]
fn core_term_validation() {
    assert!(CoreTerm::new(1.0, 0.5, 1).is_err());
    assert!(CoreTerm::new(0.0, -1.0, 1).is_err());
    assert!(CoreTerm::new(1.0, -1.0, 0).is_err());
}

#[test]
fn ladder_invariants() {
    for (name, m) in [("ud1", ud1()), ("uu1", uu1())] {
        let mut a = helper_solver(&m);
        a.ensure_ladder(400).unwrap();
        let l = &a.ladder;
        let spacing = a.problem.spacing();
        for i in 0..l.len() {
            let n = l.index(i);
            assert!(residual(&a.problem.f, l.z[i]) < 1e-11, "{name} n={n}");
            assert!(residual(&a.problem.h, l.w[i]) < 1e-11, "{name} n={n}");
            assert!(l.z[i].re < 0.0);
            if i > 0 {
                assert!(l.z[i].im > l.z[i - 1].im);
                if n >= 5 {
                    let gap = l.z[i].im - l.z[i - 1].im;
                    assert!((gap - spacing).abs() < 0.2 * spacing, "{name} n={n}");
                }
            }
            if n >= 10 {
                assert!(l.steps_f[i] <= 3, "{name} n={n}: {} steps", l.steps_f[i]);
            }
            assert!(l.steps_h[i] <= 10 && l.steps_f[i] <= 10);
        }
        let i5 = (5 - l.n1) as usize;
        let d5 = (l.z[i5] - l.w[i5]).norm();
        for i in 0..l.len() {
            if l.index(i) > 10 {
                assert!((l.z[i] - l.w[i]).norm() <= d5, "{name}");
            }
        }
    }
}

#[test]
fn extending_by_zero_is_identity() {
    let mut a = helper_solver(&uu1());
    let before = a.ladder.clone();
    gg1::rootfinder::extend_ladder(&mut a.ladder, &a.problem, 0).unwrap();
    assert_eq!(before.z, a.ladder.z);
    assert_eq!(before.w, a.ladder.w);
}

#[test]
fn mixture_roots_from_both_cores() {
    let (h, g, cores) = mixture_parts();
    let f = h.plus(&g);
    let (hc, fc) = (h.cleared(2), f.cleared(2));
    let cases = [(10, 0, (-45.879369, 539.675421)), (100, 1, (-21.276224, 1679.636887))];
    for (k, which, (re, im)) in cases {
        let u = cores[which].root(k).unwrap();
        let w = newton_refine(&hc, u, 1e-13, 50).unwrap().z;
        let z = newton_refine(&fc, w, 1e-13, 50).unwrap().z;
        assert!((z.re - re).abs() < 1e-6 && (z.im - im).abs() < 1e-6, "{z}");
    }
}

#[test]
fn mixture_needs_two_ladders() {
    assert!(matches!(Solver::new(&mixture(), 1e-12), Err(Error::Unsupported(_))));
}
