//! Hermite functions and generalized Laguerre polynomials.

/// Normalized Hermite functions `ψ_0(x) ..= ψ_{n-1}(x)`, with
/// `∫ ψ_j ψ_k dx = δ_jk`, evaluated by the stable three-term recurrence.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let psi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(psi0);
    if n == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * psi0);
    for k in 2..n {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * x * out[k - 1] - ((kf - 1.0) / kf).sqrt() * out[k - 2];
        out.push(next);
    }
    out
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln(n!)` for small `n`.
pub fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}
