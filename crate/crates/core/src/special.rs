//! Gamma-function constants shared by the densities and the exact formulas.

use statrs::function::gamma::ln_gamma;

/// `Γ((d+1)/2) / (√π Γ(d/2))`, the normalising constant of the density of
/// the height `<X, e>` of a uniform point on `S^d`. Its reciprocal is the
/// Wallis integral `∫_{-π/2}^{π/2} cos^{d-1}`.
pub fn sphere_height_constant(d: usize) -> f64 {
    ln_sphere_height_constant(d).exp()
}

pub fn ln_sphere_height_constant(d: usize) -> f64 {
    let d = d as f64;
    ln_gamma((d + 1.0) / 2.0) - 0.5 * std::f64::consts::PI.ln() - ln_gamma(d / 2.0)
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    assert!(k <= n);
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Binomial coefficient as a float, exact for small arguments.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= 60 {
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as f64
    } else {
        ln_binomial(n, k).exp()
    }
}
