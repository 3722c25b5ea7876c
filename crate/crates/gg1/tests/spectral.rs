mod common;

use common::*;
use gg1::spectral::{
    big_omega, coefficients_naive, euler_tools, moments_from_cumulants, omega, pole_list, tail_product,
    cumulants_from_moments,
};
use gg1::{Coefficients, Complex, Error, Expansion, GatedModel, Solver};
use std::f64::consts::PI;

fn expansion(m: &gg1::Model, n: usize) -> (Solver, Expansion) {
    let mut s = Solver::new(m, 1e-12).unwrap();
    let x = s.expansion(n, Coefficients::Telescoped { k: 200 }).unwrap();
    (s, x)
}

fn analysis(m: &gg1::Model) -> gg1::Analysis {
    match Solver::new(m, 1e-12).unwrap() {
        Solver::Helper(a) => a,
        _ => panic!("expected the helper route"),
    }
}

#[test]
fn psi_is_one_at_origin() {
    for (name, m) in solvable() {
        let (_, x) = expansion(&m, 1000);
        for n in [1, 10, 1000] {
            assert!((x.psi(0.0, n).unwrap() - 1.0).abs() < 1e-8, "{name} n={n}");
        }
    }
}

#[test]
fn conjugate_pairs_cancel() {
    for (name, m) in solvable() {
        let (_, x) = expansion(&m, 1000);
        for th in [0.3, 1.0, 4.0] {
            for p in &x.poles {
                let r = (Complex::new(1.0, 0.0) - th / p.z).inv();
                let pair = p.a[0] * r + p.a[0].conj() * r.conj();
                assert!(pair.im.abs() < 1e-15, "{name}");
            }
        }
        for t in [0.1, 1.0, 3.0] {
            assert!(x.tail(t, 1000).is_ok());
        }
        for nu in 1..=3 {
            assert!(x.moment(nu, 1000).is_ok());
        }
    }
}

#[test]
fn tails_decrease_and_vanish() {
    for (name, m) in solvable() {
        let (_, x) = expansion(&m, 1000);
        let ts: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64).collect();
        let p: Vec<f64> = ts.iter().map(|t| x.tail(*t, 1000).unwrap()).collect();
        for (w, t) in p.windows(2).zip(&ts) {
            assert!(w[1] < w[0], "{name} at t={t}: {} then {}", w[0], w[1]);
            assert!(w[1] > 0.0, "{name}");
        }
        let far = x.tail(30.0, 1000).unwrap();
        assert!(far.abs() < 1e-6, "{name}: {far}");
    }
}

#[test]
fn coefficients_decay_like_one_over_n() {
    for (name, m) in solvable() {
        let (_, x1) = expansion(&m, 1000);
        let (_, x4) = expansion(&m, 4000);
        let fit = |x: &Expansion| {
            x.poles.iter().enumerate().skip(10).map(|(n, p)| p.a[0].norm() * n as f64).fold(0.0, f64::max)
        };
        let (m1, m4) = (fit(&x1), fit(&x4));
        assert!(m1.is_finite() && m1 > 0.0);
        assert!((m4 - m1).abs() < 0.01 * m1, "{name}: {m1} vs {m4}");
    }
}

#[test]
fn md1_psi_matches_pollaczek_khinchine() {
    // E exp(-θW) = (1 - ρ) θ / (θ - λ(1 - e^{-θ})), unit service
    let lam = 1.0 / 3.0;
    let pk = |th: f64| (1.0 - lam) * th / (th - lam * (1.0 - (-th).exp()));
    let (_, x) = expansion(&md1(), 4000);
    for th in [0.5, 1.0, 2.0] {
        let e1 = (x.psi(th, 1000).unwrap() - pk(th)).abs();
        let e4 = (x.psi(th, 4000).unwrap() - pk(th)).abs();
        assert!(e1 < 1e-4, "θ={th}: {e1}");
        // the truncation error of the partial sums is O(1/N)
        assert!((e1 / e4 - 4.0).abs() < 0.2, "θ={th}: {e1} {e4}");
    }
}

#[test]
fn md1_tail_values() {
    let (_, x) = expansion(&md1(), 1000);
    assert!((x.tail(2.0, 1000).unwrap() - 0.011646734).abs() < 1e-9);
    assert!((x.tail(0.25, 100).unwrap() - 0.275606488).abs() < 1e-9);
}

#[test]
fn ud1_tail_at_one() {
    let mut s = Solver::new(&ud1(), 1e-12).unwrap();
    let x = s.expansion(2000, Coefficients::Naive { k: 4000 }).unwrap();
    assert!((x.tail(1.0, 2000).unwrap() - 0.018440).abs() < 5e-6);
}

#[test]
fn idle_probabilities() {
    let mut s = Solver::new(&ud1(), 1e-12).unwrap();
    assert!((1.0 - s.idle(2000).unwrap() - 0.184930).abs() < 1e-6);
    let mut s = Solver::new(&uu1(), 1e-12).unwrap();
    assert!((1.0 - s.idle(5000).unwrap() - 0.389364).abs() < 1e-6);
    let mut s = Solver::new(&md1(), 1e-12).unwrap();
    assert!((s.idle(0).unwrap() - 2.0 / 3.0).abs() < 1e-14);
}

#[test]
fn telescoped_cumulants() {
    let mut s = Solver::new(&ud1(), 1e-12).unwrap();
    let k = s.cumulants(5, true).unwrap();
    for (got, want) in k.iter().zip([0.1095808, 0.0838003, 0.0795173]) {
        assert!((got - want).abs() < 2e-6, "{got}");
    }
    let mut s = Solver::new(&uu1(), 1e-12).unwrap();
    let k = s.cumulants(4, true).unwrap();
    for (got, want) in k.iter().zip([0.4575838, 0.6797302, 1.4058925]) {
        assert!((got - want).abs() < 2e-6, "{got}");
    }
}

#[test]
fn truncated_first_cumulant() {
    let mut s = Solver::new(&ud1(), 1e-12).unwrap();
    let k1 = s.cumulants(1000, false).unwrap()[0];
    assert!((k1 - 0.1089962).abs() < 1e-7, "{k1}");
}

#[test]
fn telescoped_cumulants_converge_with_terms() {
    let mut s = Solver::new(&uu1(), 1e-12).unwrap();
    let a = s.cumulants(4, true).unwrap();
    let b = s.cumulants(400, true).unwrap();
    for j in 0..3 {
        assert!((a[j] - b[j]).abs() < 2e-6);
    }
}

#[test]
fn uu1_moments_with_ten_thousand_terms() {
    let (_, x) = expansion(&uu1(), 10000);
    let m: Vec<f64> = (1..=3).map(|nu| x.moment(nu, 10000).unwrap()).collect();
    let (k1, _, _) = cumulants_from_moments(m[0], m[1], m[2]);
    assert!((k1 - 0.4575899).abs() < 1e-7, "{k1}");
}

#[test]
fn e2d1_moments() {
    let (_, x) = expansion(&e2d1(), 1000);
    assert!((x.moment(2, 1000).unwrap() - 0.156592276251).abs() < 1e-9);
    assert!((x.moment(3, 1000).unwrap() - 0.1918526427803).abs() < 1e-9);
    let e = gg1::ErlangDeterministic::new(2, 1.0, 1.0).unwrap();
    let u1 = e.right[0].re;
    let closed = [1.0 / u1 - 0.5, 5.0 / 6.0 - 1.0 / u1, (5.0 / u1 - 3.0) / 2.0];
    for (nu, c) in (1..=3).zip(closed) {
        assert!((e.moment_exact(nu) - c).abs() < 1e-12);
    }
}

#[test]
fn spectral_mean_agrees_with_first_cumulant() {
    for (name, m) in solvable() {
        let (mut s, x) = expansion(&m, 1000);
        let k1 = s.cumulants(1000, true).unwrap()[0];
        let m1 = x.moment(1, 1000).unwrap();
        assert!((m1 - k1).abs() < 1e-3, "{name}: {m1} vs {k1}");
    }
}

#[test]
fn cumulant_moment_algebra() {
    assert_eq!(moments_from_cumulants(0.0, 0.0, 0.0), (0.0, 0.0, 0.0));
    assert_eq!(moments_from_cumulants(1.0, 0.0, 0.0), (1.0, 1.0, 1.0));
    let (a, b, c) = moments_from_cumulants(0.3f64, 0.7, 1.1);
    let (x, y, z) = cumulants_from_moments(a, b, c);
    assert!((x - 0.3).abs() < 1e-15 && (y - 0.7).abs() < 1e-15 && (z - 1.1).abs() < 1e-14);
}

#[test]
fn naive_product_converges_to_telescoped() {
    for (name, m, n) in [("ud1", ud1(), 3usize), ("uu1", uu1(), 10)] {
        let mut a = analysis(&m);
        a.ensure_ladder(80_100).unwrap();
        let tel = a.expansion_telescoped(n + 1, 50).unwrap().poles[n].a[0];
        let tel_long = a.expansion_telescoped(n + 1, 5000).unwrap().poles[n].a[0];
        assert!(((tel - tel_long) / tel).norm() < 1e-12, "{name}");
        let list = pole_list(&a.ladder);
        let rel: Vec<f64> = [1250usize, 5000, 20_000, 80_000]
            .iter()
            .map(|k| {
                let nv = coefficients_naive(&list, a.helper.alpha, n, *k).unwrap()[0];
                ((nv - tel) / tel).norm()
            })
            .collect();
        // the bilateral product converges like log(K)/K
        for w in rel.windows(2) {
            assert!(w[1] < 0.35 * w[0], "{name}: {rel:?}");
        }
        assert!(rel[3] < 2e-3, "{name}: {rel:?}");
    }
}

#[test]
fn repeated_roots_are_detected() {
    let z = Complex::new(-1.0, 2.0);
    let poles = vec![(Complex::new(-0.5, 0.0), 1), (z, 1), (z + 1e-12, 1)];
    assert!(matches!(coefficients_naive(&poles, -1.0, 1, 1), Err(Error::RepeatedRoot(_))));
    let poles = vec![(Complex::new(-0.5, 0.0), 1), (z, 3)];
    assert!(matches!(coefficients_naive(&poles, -1.0, 1, 0), Err(Error::Unsupported(_))));
}

#[test]
fn helper_tends_to_minus_one() {
    for m in [ud1(), uu1()] {
        let a = analysis(&m);
        let cmax = a.helper.terms.terms.iter().flat_map(|t| t.coeffs.iter()).fold(0.0f64, |s, c| s.max(c.abs()));
        for x in [1e3, 1e4] {
            let h = a.helper.eval(Complex::new(x, 0.0));
            assert!((h + 1.0).norm() < 10.0 * cmax / x);
        }
        let h = a.helper.cleared();
        for z in [Complex::new(1e-9, 0.0), Complex::new(0.0, 1e-7), Complex::new(-0.3, 0.2)] {
            assert!(h.eval(z).is_finite());
        }
    }
}

#[test]
fn gated_residues_match_product_form() {
    // p_j as the limit of ψ(θ)(1 - θ/s_j) in the product form of ψ
    let g = GatedModel::new(3.0, 4.0).unwrap();
    let (lam, mu) = (3.0, 4.0);
    let k = 200_000i64;
    for j in 1..=5i64 {
        let (rj, sj) = g.roots(j);
        let h0 = (1.0 - g.rho) / (1.0 - lam / (mu + sj));
        let h1 = lam / 2.0 * (1.0 - mu / (mu + sj));
        let two_pi_i = |n: i64| Complex::new(0.0, 2.0 * PI * n as f64);
        let mut log = -(sj + mu) * two_pi_i(j) / (rj * sj);
        log = log.ln() + h1;
        for n in (-k..=k).filter(|n| *n != 0 && *n != j) {
            let (rn, sn) = g.roots(n);
            log += ((sj + mu) / (sj - sn) * two_pi_i(n) / rn).ln();
        }
        let pj = h0 * log.exp();
        let closed = g.residue(j, 2000);
        assert!((pj - closed).norm() < 1e-6, "j={j}: {pj} vs {closed}");
    }
}

#[test]
fn euler_sums() {
    // Σ_{j≥0} 1/(1+j²) = 1 + ω(1); direct sum with its ∫ tail
    let n = 1_000_000;
    let direct: f64 = (0..n).rev().map(|j| 1.0 / (1.0 + (j as f64 * j as f64))).sum::<f64>() + 1.0 / (n as f64 - 0.5);
    assert!((1.0 + omega(1.0) - direct).abs() < 1e-9);
    let b: f64 = 3.0;
    let direct: f64 = (1..n)
        .rev()
        .map(|j| 1.0 / (b * b + 4.0 * PI * PI * (j as f64 * j as f64)))
        .sum::<f64>()
        + 1.0 / (4.0 * PI * PI * (n as f64 - 0.5));
    assert!((big_omega(b) - direct).abs() < 1e-12);
}

#[test]
fn euler_tail_product() {
    let (lam, mu) = (3.0, 4.0);
    let full: f64 = (1..2_000_000)
        .map(|j| (1.0 + 2.0 * lam * mu / (lam * lam + 4.0 * PI * PI * (j as f64 * j as f64))).ln())
        .sum::<f64>()
        + 2.0 * lam * mu / (4.0 * PI * PI * (2_000_000.0 - 0.5));
    let t = euler_tools(lam, mu, 1);
    assert!((t.tail_product - full.exp()).abs() < 1e-10);
    assert_eq!(t.tail_product, tail_product(lam, mu, 1));
    let mut partial = 0.0;
    for j in 1..10 {
        partial += (1.0 + 2.0 * lam * mu / (lam * lam + 4.0 * PI * PI * (j as f64 * j as f64))).ln();
    }
    assert!((tail_product(lam, mu, 10) * partial.exp() - full.exp()).abs() < 1e-10);
    assert!((t.omega - big_omega(lam)).abs() == 0.0);
}

#[test]
fn doubling_the_window_shrinks_the_error() {
    let mut a = analysis(&uu1());
    let reference = a.expansion_telescoped(12, 2000).unwrap();
    let err = |x: &Expansion, n: usize| ((x.poles[n].a[0] - reference.poles[n].a[0]) / reference.poles[n].a[0]).norm();
    for k in [1usize, 2, 4, 8] {
        let (x, y) = (a.expansion_telescoped(12, k).unwrap(), a.expansion_telescoped(12, 2 * k).unwrap());
        let mean: f64 = (1..=10).map(|n| err(&y, n) / err(&x, n)).sum::<f64>() / 10.0;
        assert!(mean <= 0.75, "k={k}: {mean}");
    }
    // for U/D/1 the helper zeros coincide with the zeros of F
    let mut a = analysis(&ud1());
    let reference = a.expansion_telescoped(12, 2000).unwrap();
    let x = a.expansion_telescoped(12, 1).unwrap();
    for n in 1..=10 {
        assert!(((x.poles[n].a[0] - reference.poles[n].a[0]) / reference.poles[n].a[0]).norm() < 1e-12);
    }
}

#[test]
fn self_test_flags_the_short_naive_product() {
    // K = 5000 leaves a log(K)/K bias of a few 1e-3 in the low coefficients
    for m in [ud1(), uu1()] {
        match analysis(&m).self_test(12, 50) {
            Err(Error::HelperMismatch { rel, .. }) => assert!(rel > 1e-3 && rel < 1e-2, "{rel}"),
            other => panic!("{other:?}"),
        }
    }
}
