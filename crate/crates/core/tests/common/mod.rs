//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Float, Signed, Zero};

/// Exact sign of the determinant of a square matrix of floats.
///
/// Every entry is an integer multiple of `2^e_min`, so after scaling the
/// matrix is integral and fraction-free Bareiss elimination is exact.
pub fn exact_det_sign(rows: &[Vec<f64>]) -> i8 {
    let n = rows.len();
    let decoded: Vec<Vec<(u64, i16, i8)>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.integer_decode()).collect())
        .collect();
    let e_min = decoded
        .iter()
        .flatten()
        .filter(|(m, _, _)| *m != 0)
        .map(|(_, e, _)| *e)
        .min()
        .unwrap_or(0);
    let mut a: Vec<Vec<BigInt>> = decoded
        .iter()
        .map(|r| {
            r.iter()
                .map(|&(m, e, s)| {
                    if m == 0 {
                        BigInt::zero()
                    } else {
                        BigInt::from(s) * (BigInt::from(m) << (e - e_min) as usize)
                    }
                })
                .collect()
        })
        .collect();
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let last = &a[n - 1][n - 1];
    if last.is_zero() {
        0
    } else if last.is_positive() {
        sign
    } else {
        -sign
    }
}

/// Exact sign of `det(p_1 - p_0, ..., p_{m-1} - p_0, q - p_0)`.
pub fn exact_orientation(hyperplane: &[Vec<f64>], query: &[f64]) -> i8 {
    let m = query.len();
    let rows: Vec<Vec<f64>> = hyperplane
        .iter()
        .map(|p| p.as_slice())
        .chain(std::iter::once(query))
        .map(|p| p.iter().copied().chain(std::iter::once(1.0)).collect())
        .collect();
    let s = exact_det_sign(&rows);
    if m.is_multiple_of(2) {
        s
    } else {
        -s
    }
}

pub struct BruteHull {
    pub facets: BTreeSet<Vec<usize>>,
    pub fvector: Vec<u64>,
}

/// Hull by testing every `dim`-subset for the supporting-hyperplane
/// property with exact arithmetic. `None` if the points are not in general
/// position (some subset's hyperplane contains another point).
pub fn brute_force_hull(points: &[Vec<f64>]) -> Option<BruteHull> {
    let dim = points[0].len();
    let mut facets = BTreeSet::new();
    for subset in (0..points.len()).combinations(dim) {
        let base: Vec<Vec<f64>> = subset.iter().map(|&i| points[i].clone()).collect();
        let mut seen = [false; 2];
        for (q, p) in points.iter().enumerate() {
            if subset.contains(&q) {
                continue;
            }
            match exact_orientation(&base, p) {
                0 => return None,
                1 => seen[0] = true,
                _ => seen[1] = true,
            }
        }
        if !(seen[0] && seen[1]) {
            facets.insert(subset);
        }
    }
    let fvector = (0..dim)
        .map(|k| {
            facets
                .iter()
                .flat_map(|f| f.iter().copied().combinations(k + 1))
                .collect::<BTreeSet<_>>()
                .len() as u64
        })
        .collect();
    Some(BruteHull { facets, fvector })
}

/// `∫_{-π/2}^z cos^m` through `cos^m t = 2^{-m} Σ_k C(m,k) e^{i(m-2k)t}`.
pub fn cos_power_integral_expanded(m: usize, z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let lo = Complex64::new(-FRAC_PI_2, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=m {
        let c = binomial(m, k);
        let freq = m as f64 - 2.0 * k as f64;
        let term = if freq == 0.0 {
            z - lo
        } else {
            ((i * freq * z).exp() - (i * freq * lo).exp()) / (i * freq)
        };
        sum += term * c;
    }
    sum / 2f64.powi(m as i32)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `c_d` from `c_1 = 1/π`, `c_2 = 1/2`, `c_{d+2} = c_d (d+1)/d`.
pub fn height_constant(d: usize) -> f64 {
    let (mut c, mut k) = if d % 2 == 1 { (1.0 / PI, 1) } else { (0.5, 2) };
    while k < d {
        c *= (k + 1) as f64 / k as f64;
        k += 2;
    }
    c
}

/// Tanh-sinh rule on `[a, b]`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (h, t_max) = (1.0 / 64.0, 4.0);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let steps = (t_max / h) as i64;
    let mut sum = 0.0;
    for j in -steps..=steps {
        let t = j as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let x = mid + half * u.tanh();
        let w = half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if w > 0.0 && x > a && x < b {
            sum += w * f(x);
        }
    }
    sum * h
}

/// Trapezoid rule in `y = sinh(s)` over the real line, for integrands that
/// decay exponentially in `|y|`.
pub fn sinh_trapezoid<F: Fn(f64) -> Complex64>(f: F) -> Complex64 {
    let (h, s_max) = (1.0 / 64.0, 5.0);
    let steps = (s_max / h) as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in -steps..=steps {
        let s = j as f64 * h;
        sum += f(s.sinh()) * s.cosh();
    }
    sum * h
}

pub fn oracle_tilde_i(d: usize, n: usize, m: usize) -> f64 {
    let v = tanh_sinh(
        |x| {
            let f = cos_power_integral_expanded(d - 1, Complex64::new(x, 0.0)).re;
            x.cos().powi((d * m - 1) as i32) * f.powi((n - m) as i32)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
    );
    binomial(n, m) * v
}

pub fn oracle_tilde_j(d: usize, m: usize, ell: usize) -> Complex64 {
    let lambda = (d * m - 1) as i32 - (d as i32 - 1) * (m - ell) as i32;
    let v = sinh_trapezoid(|y| {
        let sech = 1.0 / y.cosh();
        let f =
            cos_power_integral_expanded(d - 1, Complex64::new(0.0, y)) * sech.powi(d as i32 - 1);
        f.powu((m - ell) as u32) * sech.powi(lambda)
    });
    v * binomial(m, ell)
}

/// Expected f-vector of the typical cell among `n` competitors on `S^d`,
/// `(E f_0, ..., E f_{d-1})`, assembled from the oracle integrals.
pub fn oracle_expected_fvector(d: usize, n: usize) -> Vec<f64> {
    let c = height_constant(d);
    let mut out = vec![0.0; d];
    for ell in 1..=d {
        let mut s = 0.0;
        for m in (ell..=d).filter(|m| (d - m).is_multiple_of(2)) {
            s += oracle_tilde_i(d, n, m) * (m * d - 1) as f64 * oracle_tilde_j(d, m, ell).re;
        }
        out[d - ell] = c.powi((n - ell) as i32) * s / PI;
    }
    out
}
