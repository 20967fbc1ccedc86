//! Uniform points on `S^d`, their polar decomposition around the north pole,
//! and beta' points in `R^d`.
//!
//! The north pole is `e = (1, 0, ..., 0)`. A point `X` on `S^d` decomposes as
//! `X = e cos θ + (0, U) sin θ` with height `h = cos θ`, a unit vector `U` in
//! `R^d` and `R = tan(θ/2)`, so that `R² = (1 - h)/(1 + h)`.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::hull::PointCloud;
use crate::linalg::norm;
use crate::rng::RngStream;
use crate::special::{ln_sphere_height_constant, sphere_height_constant};

#[derive(Clone, Debug, PartialEq)]
pub struct UnitPoint {
    /// Coordinates in `R^{d+1}`, the 0-th one along the north pole.
    pub coords: Vec<f64>,
    pub h: f64,
    pub theta: f64,
    pub u: Vec<f64>,
    pub r: f64,
}

impl UnitPoint {
    /// Decompose a unit vector of `R^{d+1}`.
    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        let h = coords[0];
        let tail = &coords[1..];
        let s = norm(tail);
        if s <= f64::EPSILON || 1.0 + h <= f64::EPSILON {
            return Err(Error::DegenerateSample);
        }
        let u = tail.iter().map(|x| x / s).collect();
        Ok(Self {
            theta: s.atan2(h),
            // sin θ / (1 + cos θ), stable away from the south pole
            r: s / (1.0 + h),
            h,
            u,
            coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// `U / R`, the point's image in the tangent space at the south pole.
    pub fn dual_point(&self) -> Vec<f64> {
        self.u.iter().map(|x| x / self.r).collect()
    }
}

fn gaussian_vector(len: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..len)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

fn unit_vector(len: usize, rng: &mut RngStream) -> Vec<f64> {
    loop {
        let mut v = gaussian_vector(len, rng);
        let s = norm(&v);
        if s > 0.0 {
            v.iter_mut().for_each(|x| *x /= s);
            return v;
        }
    }
}

/// A uniform point on `S^d` (normalised Gaussian vector in `R^{d+1}`).
pub fn sample_uniform_sphere(d: usize, rng: &mut RngStream) -> Result<UnitPoint> {
    if d < 1 {
        return Err(Error::Parameter(
            "sphere dimension must be at least 1".into(),
        ));
    }
    UnitPoint::from_coords(unit_vector(d + 1, rng))
}

/// Density of the height `h = <X, e>` of a uniform point on `S^d`.
pub fn h_density(d: usize, h: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&h) {
        return Err(Error::Domain(format!("height {h} outside [-1, 1]")));
    }
    Ok(sphere_height_constant(d) * (1.0 - h * h).powf(d as f64 / 2.0 - 1.0))
}

/// Density of `R = tan(θ/2)` for a uniform point on `S^d`.
pub fn r_density(d: usize, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius {r} is negative")));
    }
    let d_f = d as f64;
    let ln_c = d_f * std::f64::consts::LN_2 + ln_sphere_height_constant(d);
    Ok(ln_c.exp() * r.powi(d as i32 - 1) / (1.0 + r * r).powi(d as i32))
}

/// Distribution function of `h` on `S^d`: `(1 + h)/2` is `Beta(d/2, d/2)`.
pub fn h_cdf(d: usize, h: f64) -> f64 {
    let x = ((1.0 + h) / 2.0).clamp(0.0, 1.0);
    let a = d as f64 / 2.0;
    beta_reg(a, a, x)
}

/// Distribution function of the radius of a beta' point in `R^d`:
/// `|X|² / (1 + |X|²)` is `Beta(d/2, β - d/2)`. At `β = d` this is also the
/// law of `R = tan(θ/2)` on `S^d`.
pub fn beta_prime_radius_cdf(d: usize, beta: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let r2 = r * r;
    let a = d as f64 / 2.0;
    beta_reg(a, beta - a, r2 / (1.0 + r2))
}

/// `n` i.i.d. points in `R^d` with density proportional to `(1 + |x|²)^{-β}`.
///
/// The radius is `sqrt(B / (1 - B))` with `B ~ Beta(d/2, β - d/2)`, drawn as
/// a ratio of Gamma variates; the direction is uniform.
pub fn sample_beta_prime(n: usize, d: usize, beta: f64, rng: &mut RngStream) -> Result<PointCloud> {
    let a = d as f64 / 2.0;
    if d < 1 || !(beta > a) {
        return Err(Error::Parameter(format!(
            "beta' needs beta > d/2, got beta={beta}, d={d}"
        )));
    }
    if n < 1 {
        return Err(Error::Parameter("need at least one point".into()));
    }
    let g1 = Gamma::new(a, 1.0).map_err(|e| Error::Parameter(e.to_string()))?;
    let g2 = Gamma::new(beta - a, 1.0).map_err(|e| Error::Parameter(e.to_string()))?;
    let mut coords = Vec::with_capacity(n * d);
    for _ in 0..n {
        let x: f64 = g1.sample(rng);
        let y: f64 = g2.sample(rng);
        let radius = (x / y).sqrt();
        coords.extend(unit_vector(d, rng).into_iter().map(|u| u * radius));
    }
    Ok(PointCloud::from_flat(d, coords))
}

/// `n` uniform points on `S^d` mapped to `U_i / R_i` in `R^d`.
pub fn voronoi_dual_points(n: usize, d: usize, rng: &mut RngStream) -> Result<PointCloud> {
    let (cloud, _) = voronoi_dual_points_with_sources(n, d, rng)?;
    Ok(cloud)
}

/// Like [`voronoi_dual_points`], also returning the sphere points.
pub fn voronoi_dual_points_with_sources(
    n: usize,
    d: usize,
    rng: &mut RngStream,
) -> Result<(PointCloud, Vec<UnitPoint>)> {
    if n < d + 1 {
        return Err(Error::Parameter(format!(
            "need n >= d + 1, got n={n}, d={d}"
        )));
    }
    let mut coords = Vec::with_capacity(n * d);
    let mut sources = Vec::with_capacity(n);
    for _ in 0..n {
        let p = sample_uniform_sphere(d, rng)?;
        coords.extend(p.dual_point());
        sources.push(p);
    }
    Ok((PointCloud::from_flat(d, coords), sources))
}
