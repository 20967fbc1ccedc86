mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use svoronoi::harness::{sample_radii, test_inversion_invariance};
use svoronoi::samplers::{
    beta_prime_radius_cdf, h_cdf, r_density, sample_beta_prime, sample_uniform_sphere,
    voronoi_dual_points,
};
use svoronoi::stats::{chi_square_goodness_of_fit, ks_one_sample, ks_two_sample, median};
use svoronoi::RngStream;

use common::tanh_sinh;

const LEVEL: f64 = 1e-3;

/// `P(θ <= t)` for a uniform point on `S^d`, from `sin^{d-1}`.
fn theta_cdf(d: usize, t: f64) -> f64 {
    // ∫_0^π sin^{d-1} = √π Γ(d/2) / Γ((d+1)/2), by the Wallis recursion
    let m = d - 1;
    let (mut total, mut k) = if m.is_multiple_of(2) {
        (PI, 0)
    } else {
        (2.0, 1)
    };
    while k + 2 <= m {
        k += 2;
        total *= (k - 1) as f64 / k as f64;
    }
    tanh_sinh(|x| x.sin().powi(d as i32 - 1), 0.0, t) / total
}

/// `P(R <= r)` with `R = tan(θ/2)`.
fn radius_cdf_oracle(d: usize, r: f64) -> f64 {
    theta_cdf(d, 2.0 * r.atan())
}

/// `P(h <= x)` with `h = cos θ`.
fn height_cdf_oracle(d: usize, x: f64) -> f64 {
    1.0 - theta_cdf(d, x.clamp(-1.0, 1.0).acos())
}

#[test]
fn distribution_functions_match_oracle() {
    for d in 1..=6 {
        for &r in &[0.1, 0.5, 1.0, 2.0, 7.0] {
            assert_relative_eq!(
                beta_prime_radius_cdf(d, d as f64, r),
                radius_cdf_oracle(d, r),
                epsilon = 1e-10
            );
        }
        for &h in &[-0.9, -0.3, 0.0, 0.4, 0.95] {
            assert_relative_eq!(h_cdf(d, h), height_cdf_oracle(d, h), epsilon = 1e-10);
        }
        // density is the derivative of the distribution function
        let r = 0.8;
        let eps = 1e-5;
        let slope = (radius_cdf_oracle(d, r + eps) - radius_cdf_oracle(d, r - eps)) / (2.0 * eps);
        assert_relative_eq!(r_density(d, r).unwrap(), slope, max_relative = 1e-6);
    }
}

#[test]
fn radius_follows_its_density() {
    for d in 2..=4 {
        let radii = sample_radii(d, 100_000, 31 + d as u64).unwrap();
        let r = ks_one_sample(&radii, |x| radius_cdf_oracle(d, x));
        assert!(r.p_value > LEVEL, "d={d}: {r:?}");
    }
}

#[test]
fn radius_is_inversion_invariant() {
    for d in 2..=4 {
        let r = test_inversion_invariance(d, 100_000, 77 + d as u64).unwrap();
        assert!(r.p_value > LEVEL, "d={d}: {r:?}");
    }
}

#[test]
fn median_radius_is_one() {
    let d = 3;
    let n = 40_000;
    let radii = sample_radii(d, n, 5).unwrap();
    // asymptotic standard error of the median: 1 / (2 f(1) sqrt(n))
    let se = 1.0 / (2.0 * r_density(d, 1.0).unwrap() * (n as f64).sqrt());
    assert!((median(&radii) - 1.0).abs() <= 4.0 * se);
}

#[test]
fn height_marginal_by_binned_chi_square() {
    for d in 2..=4 {
        let mut rng = RngStream::new(404, d as u64);
        let h: Vec<f64> = (0..50_000)
            .map(|_| sample_uniform_sphere(d, &mut rng).unwrap().h)
            .collect();
        let r = chi_square_goodness_of_fit(&h, |x| height_cdf_oracle(d, x), -1.0, 1.0, 20);
        assert!(r.p_value > LEVEL, "d={d}: {r:?}");
    }
}

#[test]
fn height_and_direction_are_independent() {
    let d = 3;
    let mut rng = RngStream::new(8, 0);
    let pts: Vec<_> = (0..40_000)
        .map(|_| sample_uniform_sphere(d, &mut rng).unwrap())
        .collect();
    let (north, south): (Vec<_>, Vec<_>) = pts.iter().partition(|p| p.h > 0.0);
    let first = |v: &[&svoronoi::samplers::UnitPoint]| v.iter().map(|p| p.u[0]).collect::<Vec<_>>();
    let r = ks_two_sample(&first(&north), &first(&south));
    assert!(r.p_value > LEVEL, "{r:?}");
}

#[test]
fn cauchy_special_case() {
    // d = 1, β = 1: standard Cauchy
    let cloud = sample_beta_prime(40_000, 1, 1.0, &mut RngStream::new(1, 0)).unwrap();
    let xs: Vec<f64> = cloud.iter().map(|p| p[0]).collect();
    let r = ks_one_sample(&xs, |x| 0.5 + x.atan() / PI);
    assert!(r.p_value > LEVEL, "{r:?}");
    let abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    // |X| has density 2/(π(1+x²)), so the median SE is π/(4 sqrt(n)) at x = 1
    assert!((median(&abs) - 1.0).abs() <= 4.0 * FRAC_PI_2 / 2.0 / (xs.len() as f64).sqrt());
}

#[test]
fn dual_points_are_beta_prime() {
    for d in 2..=4 {
        let dual = voronoi_dual_points(30_000, d, &mut RngStream::new(12, d as u64)).unwrap();
        let bp = sample_beta_prime(30_000, d, d as f64, &mut RngStream::new(13, d as u64)).unwrap();
        let norm = |p: &[f64]| p.iter().map(|x| x * x).sum::<f64>().sqrt();
        let a: Vec<f64> = dual.iter().map(norm).collect();
        let b: Vec<f64> = bp.iter().map(norm).collect();
        let r = ks_two_sample(&a, &b);
        assert!(r.p_value > LEVEL, "d={d}: {r:?}");
        // directions: first coordinate of the normalised point
        let a: Vec<f64> = dual.iter().map(|p| p[0] / norm(p)).collect();
        let b: Vec<f64> = bp.iter().map(|p| p[0] / norm(p)).collect();
        assert!(ks_two_sample(&a, &b).p_value > LEVEL);
    }
}

#[test]
fn beta_prime_radius_law() {
    for (d, beta) in [(2, 1.5), (3, 2.5), (3, 4.0), (5, 6.0)] {
        let cloud = sample_beta_prime(40_000, d, beta, &mut RngStream::new(3, d as u64)).unwrap();
        let radii: Vec<f64> = cloud
            .iter()
            .map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        // density ∝ r^{d-1} (1 + r²)^{-β}, integrated numerically in t = atan r
        let mass = |r: f64| {
            tanh_sinh(
                |t: f64| t.tan().powi(d as i32 - 1) * t.cos().powf(2.0 * beta - 2.0),
                0.0,
                r.atan(),
            )
        };
        let total = mass(f64::INFINITY);
        let r = ks_one_sample(&radii, |x| mass(x) / total);
        assert!(r.p_value > LEVEL, "d={d} beta={beta}: {r:?}");
    }
}
