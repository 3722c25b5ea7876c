use statrs::function::factorial::ln_factorial;

/// Exact M/D/1 waiting-time tail, arrival rate `lambda`, unit service:
/// `P(V > t) = 1 - (1-ρ) Σ_{n ≤ ⌊t⌋} e^{-λ(n-t)} (λ(n-t))^n / n!`.
/// The terms alternate and grow with `λt`, so far tails lose absolute
/// accuracy (about `1e-9` at λ = 1/3, t = 30).
pub fn takacs_md1_tail(lambda: f64, t: f64) -> f64 {
    assert!(lambda > 0.0 && lambda < 1.0, "need 0 < λ < 1");
    if t < 0.0 {
        return 1.0;
    }
    let mut s = 0.0;
    let mut c = 0.0;
    for n in 0..=(t.floor() as u64) {
        let x = lambda * (n as f64 - t);
        let term = if n == 0 {
            (-x).exp()
        } else {
            let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            sign * (n as f64 * x.abs().ln() - x - ln_factorial(n)).exp()
        };
        // Neumaier summation; the terms alternate and grow with t
        let y = s + term;
        c += if s.abs() >= term.abs() { (s - y) + term } else { (term - y) + s };
        s = y;
    }
    1.0 - (1.0 - lambda) * (s + c)
}
