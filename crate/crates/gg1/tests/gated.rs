use gg1::oracles::gated_markov;
use gg1::{Error, GatedModel, MeanMethod};

#[test]
fn tail_table() {
    let rows = [(3.0, [0.510817, 0.200318, 0.074312]), (3.5, [0.728580, 0.454497, 0.276359])];
    for (lam, want) in rows {
        let g = GatedModel::new(lam, 4.0).unwrap();
        for (t, w) in [0.0, 1.0, 2.0].into_iter().zip(want) {
            let v = g.tail(t, 60, 2000).unwrap();
            assert!((v - w).abs() < 1e-6, "λ={lam} t={t}: {v}");
        }
    }
}

#[test]
fn tail_with_more_terms_approaches_markov() {
    let g = GatedModel::new(3.0, 4.0).unwrap();
    let mk = gated_markov(&g, 200, 1e-12, 100_000).unwrap();
    for t in [0.05, 0.25, 0.5] {
        let e60 = (g.tail(t, 60, 2000).unwrap() - mk.tail(t)).abs();
        let e3000 = (g.tail(t, 3000, 4000).unwrap() - mk.tail(t)).abs();
        assert!(e3000 < e60 / 10.0, "t={t}: {e60} {e3000}");
        assert!(e3000 < 2e-5);
    }
}

#[test]
fn tail_is_monotone() {
    let g = GatedModel::new(3.5, 4.0).unwrap();
    let p: Vec<f64> = (0..=60).map(|i| g.tail(0.1 * i as f64, 60, 2000).unwrap()).collect();
    assert!(p.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
}

#[test]
fn means() {
    let g = GatedModel::new(3.0, 4.0).unwrap();
    assert!((g.mean(1000, MeanMethod::ViaR) - 0.53620286355).abs() < 1e-9);
    assert!((g.mean(1000, MeanMethod::ViaS) - 0.53620286365).abs() < 1e-9);
    let g = GatedModel::new(3.5, 4.0).unwrap();
    assert!((g.mean(1000, MeanMethod::ViaR) - 1.49447474664).abs() < 1e-9);
    assert!((g.mean(1000, MeanMethod::ViaS) - 1.49447474664).abs() < 1e-9);
}

#[test]
fn mean_formulas_agree() {
    for lam in [0.5, 2.0, 3.0, 3.5, 3.9] {
        let g = GatedModel::new(lam, 4.0).unwrap();
        let (r, s) = (g.mean(1000, MeanMethod::ViaR), g.mean(1000, MeanMethod::ViaS));
        assert!((r - s).abs() < 1e-9, "λ={lam}: {r} {s}");
    }
}

#[test]
fn mean_truncation_error_is_cubic() {
    let g = GatedModel::new(3.0, 4.0).unwrap();
    let exact = g.mean(100_000, MeanMethod::ViaS);
    let e1 = (g.mean(20, MeanMethod::ViaS) - exact).abs();
    let e2 = (g.mean(40, MeanMethod::ViaS) - exact).abs();
    assert!(e2 < e1 / 6.0, "{e1} {e2}");
}

#[test]
fn idle_matches_markov() {
    for (lam, want) in [(3.0, 0.4901367), (3.5, 0.2720073)] {
        let g = GatedModel::new(lam, 4.0).unwrap();
        let w0 = g.idle(2000).unwrap();
        let mk = gated_markov(&g, 200, 1e-12, 100_000).unwrap();
        assert!((w0 - mk.pi[0]).abs() < 1e-6, "λ={lam}: {w0} vs {}", mk.pi[0]);
        assert!((w0 - want).abs() < 1e-7);
    }
}

#[test]
fn idle_in_light_traffic() {
    assert_eq!(GatedModel::new(0.0, 4.0).unwrap().idle(100).unwrap(), 1.0);
    let w0 = GatedModel::new(1e-6, 4.0).unwrap().idle(100).unwrap();
    assert!((w0 - 1.0).abs() < 1e-5);
}

#[test]
fn product_form_is_normalized() {
    for lam in [3.0, 3.5] {
        let g = GatedModel::new(lam, 4.0).unwrap();
        assert!((g.psi_product(0.0, 2000) - 1.0).abs() < 1e-8);
        // ψ is a transform of a nonnegative variable: decreasing on θ > 0
        assert!(g.psi_product(1.0, 2000) < 1.0);
        assert!(g.psi_product(2.0, 2000) < g.psi_product(1.0, 2000));
    }
}

#[test]
fn chi_is_conjugate_symmetric() {
    let g = GatedModel::new(3.0, 4.0).unwrap();
    for j in 1..10 {
        let (_, s) = g.roots(j);
        let (_, sm) = g.roots(-j);
        assert!((sm - s.conj()).norm() < 1e-12);
        assert!((g.residue(-j, 500) - g.residue(j, 500).conj()).norm() < 1e-12);
    }
}

#[test]
fn model_validation() {
    assert!(matches!(GatedModel::new(4.0, 4.0), Err(Error::Unstable(_))));
    assert!(matches!(GatedModel::new(-1.0, 4.0), Err(Error::InvalidSpec(_))));
}
