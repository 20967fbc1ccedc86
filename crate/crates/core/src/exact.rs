//! Exact expected f-vector of the typical cell by one-dimensional quadrature.
//!
//! For `d >= 2`, `n >= d + 1` competitors and `ℓ = 1..=d`,
//!
//! ```text
//! E f_{d-ℓ} = (1/π) c_d^{n-ℓ} Σ_m Ĩ_d(n,m) (md - 1) J̃_d(m,ℓ)
//!           = (1/π) c_d^{n-ℓ} Σ_m I_{d-1}(n,m) ((m+1)(d-1) + 1) J_{d-1}(m,ℓ)
//! ```
//!
//! with `m` running over `ℓ..=d`, `m ≡ d (mod 2)`, and
//! `c_d = Γ((d+1)/2) / (√π Γ(d/2))`. The `I` quantities integrate powers of
//! `cos x` against powers of `F(x) = ∫_{-π/2}^x cos^{d-1}` over
//! `[-π/2, π/2]`; the `J` quantities integrate powers of `1/cosh y` against
//! powers of the analytic continuation `F(iy)` over the real line. The two
//! routes come from the beta' and the beta polytope representations and are
//! computed independently as a cross-check.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_complex};
use crate::special::{binomial, ln_sphere_height_constant};

pub use crate::quadrature::QuadratureSpec;

/// Largest imaginary residue tolerated in a `J` quantity.
pub const MAX_IMAG_RESIDUE: f64 = 1e-8;

/// `G_m(z)`, an antiderivative of `cos^m`, from
/// `G_m = cos^{m-1} sin / m + (m-1)/m G_{m-2}`, `G_0 = z`, `G_1 = sin z`.
pub fn cos_power_antiderivative(m: usize, z: Complex64) -> Complex64 {
    let (s, c) = (z.sin(), z.cos());
    let mut g = if m.is_multiple_of(2) { z } else { s };
    let mut c_pow = if m.is_multiple_of(2) { c } else { c * c };
    let mut k = if m.is_multiple_of(2) { 2 } else { 3 };
    while k <= m {
        let kf = k as f64;
        g = c_pow * s / kf + g * ((kf - 1.0) / kf);
        c_pow *= c * c;
        k += 2;
    }
    g
}

/// `F_m(z) = ∫_{-π/2}^z cos^m(t) dt`, path independent since `cos^m` is entire.
pub fn cos_power_integral(m: usize, z: Complex64) -> Complex64 {
    cos_power_antiderivative(m, z) - cos_power_antiderivative(m, Complex64::new(-FRAC_PI_2, 0.0))
}

/// Real-axis specialisation of [`cos_power_integral`].
pub fn cos_power_integral_real(m: usize, x: f64) -> f64 {
    cos_power_integral(m, Complex64::new(x, 0.0)).re
}

/// A `J` quantity: real part of the integral and its relative imaginary part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JIntegral {
    pub value: f64,
    pub imag_residue: f64,
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Parameter(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    Ok(())
}

fn check_indices(d: usize, m: usize, ell: usize) -> Result<()> {
    check_d(d)?;
    if !(1 <= ell && ell <= m && m <= d) {
        return Err(Error::Parameter(format!(
            "need 1 <= ell <= m <= d, got ell={ell}, m={m}, d={d}"
        )));
    }
    Ok(())
}

fn i_integral(d: usize, n: usize, m: usize, cos_exp: i32, quad: &QuadratureSpec) -> Result<f64> {
    check_d(d)?;
    if m > n {
        return Err(Error::Parameter(format!("need m <= n, got m={m}, n={n}")));
    }
    quad.validate()?;
    let power = (n - m) as i32;
    let v = integrate(
        |x| x.cos().powi(cos_exp) * cos_power_integral_real(d - 1, x).powi(power),
        -FRAC_PI_2,
        FRAC_PI_2,
        quad,
    )?;
    Ok(binomial(n, m) * v)
}

// `decay` is the exponential rate of the integrand; since
// `sech^p(y) <= 2^p e^{-p|y|}`, the cut `|y| <= margin / decay + ln 2` leaves a
// tail of relative size about `e^{-margin}`. The integrand is evaluated as
// `sech^decay(y) * (F(iy) sech^{d-1}(y))^{m-ell}` so no factor overflows.
fn j_integral(
    d: usize,
    m: usize,
    ell: usize,
    decay: i32,
    quad: &QuadratureSpec,
) -> Result<JIntegral> {
    quad.validate()?;
    let power = (m - ell) as u32;
    let cut = quad.truncation_margin / decay as f64 + std::f64::consts::LN_2;
    let r = integrate_complex(
        |y| {
            let sech = 1.0 / y.cosh();
            let f = cos_power_integral(d - 1, Complex64::new(0.0, y)) * sech.powi(d as i32 - 1);
            f.powu(power) * sech.powi(decay)
        },
        -cut,
        cut,
        quad,
    )?;
    let scale = if r.value.re.abs() > 0.0 {
        r.value.re.abs()
    } else {
        r.abs_integral
    };
    let residue = if scale > 0.0 {
        r.value.im.abs() / scale
    } else {
        0.0
    };
    if residue > MAX_IMAG_RESIDUE {
        return Err(Error::ImaginaryResidue {
            residue,
            limit: MAX_IMAG_RESIDUE,
        });
    }
    Ok(JIntegral {
        value: binomial(m, ell) * r.value.re,
        imag_residue: residue,
    })
}

/// `Ĩ_d(n,m) = C(n,m) ∫_{-π/2}^{π/2} cos^{dm-1}(x) F_{d-1}(x)^{n-m} dx`.
pub fn tilde_i(d: usize, n: usize, m: usize, quad: &QuadratureSpec) -> Result<f64> {
    if m < 1 {
        return Err(Error::Parameter("m must be at least 1".into()));
    }
    i_integral(d, n, m, (d * m - 1) as i32, quad)
}

/// `J̃_d(m,ℓ) = C(m,ℓ) ∫_ℝ cosh^{-dm+1}(y) F_{d-1}(iy)^{m-ℓ} dy`.
pub fn tilde_j(d: usize, m: usize, ell: usize, quad: &QuadratureSpec) -> Result<JIntegral> {
    check_indices(d, m, ell)?;
    let decay = (d * ell + m - ell - 1) as i32;
    j_integral(d, m, ell, decay, quad)
}

/// `I_{d-1}(n,m) = C(n,m) ∫_{-π/2}^{π/2} cos^{(d-1)(m+1)}(x) F_{d-1}(x)^{n-m} dx`.
pub fn beta_i(d: usize, n: usize, m: usize, quad: &QuadratureSpec) -> Result<f64> {
    i_integral(d, n, m, ((d - 1) * (m + 1)) as i32, quad)
}

/// `J_{d-1}(m,ℓ) = C(m,ℓ) ∫_ℝ cosh^{-(d-1)(m+1)-2}(y) F_{d-1}(iy)^{m-ℓ} dy`.
pub fn beta_j(d: usize, m: usize, ell: usize, quad: &QuadratureSpec) -> Result<JIntegral> {
    check_indices(d, m, ell)?;
    let decay = ((d - 1) * (ell + 1) + 2) as i32;
    j_integral(d, m, ell, decay, quad)
}

/// Which assembled formula to report as the expected value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Mean of the two formulas.
    #[default]
    Auto,
    BetaPrime,
    Beta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactFVectorResult {
    pub d: usize,
    pub n: usize,
    /// `E f_k` of the typical cell, `k = 0..d`.
    pub expected: Vec<f64>,
    /// Same, from the beta' route.
    pub formula1: Vec<f64>,
    /// Same, from the beta route.
    pub formula2: Vec<f64>,
    pub max_imag_residue: f64,
    pub max_cross_discrepancy: f64,
}

/// Expected f-vector of the typical cell among `n` competitors on `S^d`
/// (a tessellation with `n + 1` cells), by both quadrature formulas.
pub fn expected_fvector_exact(
    d: usize,
    n: usize,
    quad: &QuadratureSpec,
) -> Result<ExactFVectorResult> {
    expected_fvector_exact_with(d, n, quad, Method::Auto)
}

pub fn expected_fvector_exact_with(
    d: usize,
    n: usize,
    quad: &QuadratureSpec,
    method: Method,
) -> Result<ExactFVectorResult> {
    check_d(d)?;
    if n < d + 1 {
        return Err(Error::Parameter(format!(
            "need n >= d + 1, got n={n}, d={d}"
        )));
    }
    quad.validate()?;

    // I quantities depend only on m; J on (m, ℓ). Index by m directly.
    let mut ti = vec![0.0; d + 1];
    let mut bi = vec![0.0; d + 1];
    for m in (1..=d).filter(|m| (d - m).is_multiple_of(2)) {
        ti[m] = tilde_i(d, n, m, quad)?;
        bi[m] = beta_i(d, n, m, quad)?;
    }

    let ln_c = ln_sphere_height_constant(d);
    let df = d as f64;
    let mut formula1 = vec![0.0; d];
    let mut formula2 = vec![0.0; d];
    let mut max_residue: f64 = 0.0;
    for ell in 1..=d {
        let prefactor = ((n - ell) as f64 * ln_c).exp() / PI;
        let (mut s1, mut s2) = (0.0, 0.0);
        for m in (ell..=d).filter(|m| (d - m).is_multiple_of(2)) {
            let mf = m as f64;
            let tj = tilde_j(d, m, ell, quad)?;
            let bj = beta_j(d, m, ell, quad)?;
            max_residue = max_residue.max(tj.imag_residue).max(bj.imag_residue);
            s1 += ti[m] * (mf * df - 1.0) * tj.value;
            s2 += bi[m] * ((mf + 1.0) * (df - 1.0) + 1.0) * bj.value;
        }
        formula1[d - ell] = prefactor * s1;
        formula2[d - ell] = prefactor * s2;
    }
    let max_cross_discrepancy = formula1
        .iter()
        .zip(&formula2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let expected = match method {
        Method::Auto => formula1
            .iter()
            .zip(&formula2)
            .map(|(a, b)| 0.5 * (a + b))
            .collect(),
        Method::BetaPrime => formula1.clone(),
        Method::Beta => formula2.clone(),
    };
    Ok(ExactFVectorResult {
        d,
        n,
        expected,
        formula1,
        formula2,
        max_imag_residue: max_residue,
        max_cross_discrepancy,
    })
}

/// `E f_0 = E f_1 = 6 (n-1)/(n+1)` on `S^2`.
pub fn closed_form_d2(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Parameter(format!("need n >= 3, got {n}")));
    }
    Ok(6.0 * (n as f64 - 1.0) / (n as f64 + 1.0))
}

/// `E f_0` on `S^3` from its single-integral form
/// `(256/35π) (1/2π)^{n-3} C(n,3) ∫ cos^8 x (2x + sin 2x + π)^{n-3} dx`.
pub fn closed_form_d3_f0(n: usize, quad: &QuadratureSpec) -> Result<f64> {
    if n < 4 {
        return Err(Error::Parameter(format!("need n >= 4, got {n}")));
    }
    let p = (n - 3) as i32;
    let v = integrate(
        |x| x.cos().powi(8) * ((2.0 * x + (2.0 * x).sin() + PI) / (2.0 * PI)).powi(p),
        -FRAC_PI_2,
        FRAC_PI_2,
        quad,
    )?;
    Ok(256.0 / (35.0 * PI) * binomial(n, 3) * v)
}

/// `E f_0` on `S^4` from its single-integral form
/// `(6435/2048) (1/16)^{n-4} C(n,4) ∫ cos^15 x (8 + 9 sin x + sin 3x)^{n-4} dx`.
pub fn closed_form_d4_f0(n: usize, quad: &QuadratureSpec) -> Result<f64> {
    if n < 5 {
        return Err(Error::Parameter(format!("need n >= 5, got {n}")));
    }
    let p = (n - 4) as i32;
    let v = integrate(
        |x| x.cos().powi(15) * ((8.0 + 9.0 * x.sin() + (3.0 * x).sin()) / 16.0).powi(p),
        -FRAC_PI_2,
        FRAC_PI_2,
        quad,
    )?;
    Ok(6435.0 / 2048.0 * binomial(n, 4) * v)
}

/// Full expected f-vector of the typical cell from `E f_0`, for `d = 3, 4`.
///
/// `cell_count` is the number of cells of the tessellation (competitors plus
/// one); it only enters for `d = 4`.
pub fn dehn_sommerville_complete(d: usize, f0: f64, cell_count: usize) -> Result<Vec<f64>> {
    match d {
        3 => Ok(vec![f0, 1.5 * f0, 0.5 * f0 + 2.0]),
        4 => {
            if cell_count < 2 {
                return Err(Error::Parameter(format!(
                    "cell count {cell_count} too small"
                )));
            }
            let n = (cell_count - 1) as f64;
            let base = 6.0 * (n - 1.0) / (n + 1.0);
            Ok(vec![f0, 2.0 * f0, base + 1.2 * f0, base + 0.2 * f0])
        }
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Expected number of `k`-faces of the whole tessellation of `S^d` by
/// `cells` points, `k = 0..d`: `cells / (d - k + 1)` times the typical
/// cell's value with `cells - 1` competitors.
pub fn expected_tessellation_fvector(
    d: usize,
    cells: usize,
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    check_d(d)?;
    if cells < d + 2 {
        return Err(Error::Parameter(format!(
            "need at least d + 2 cells, got {cells}"
        )));
    }
    let typical = expected_fvector_exact(d, cells - 1, quad)?;
    Ok(typical
        .expected
        .iter()
        .enumerate()
        .map(|(k, v)| cells as f64 / (d - k + 1) as f64 * v)
        .collect())
}
