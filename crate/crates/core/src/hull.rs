//! Convex hulls of points in general position, in any small dimension.
//!
//! The hull is built by incremental insertion: a starting simplex is chosen
//! greedily, then each remaining point removes the facets it sees and is
//! coned over the horizon ridges. Inputs here come from continuous
//! distributions, so the hull is simplicial almost surely; near-degenerate
//! input is reported as [`Error::DegenerateConfiguration`] and the caller
//! redraws.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cofactor_normal, dot, norm, sub};

/// Default relative tolerance of the side predicates.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A set of points in `R^dim`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("point dimension must be positive".into()));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Parameter(format!(
                    "point {i} has length {}, expected {dim}",
                    p.len()
                )));
            }
            coords.extend(p);
        }
        Ok(Self { dim, coords })
    }

    pub(crate) fn from_flat(dim: usize, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len() % dim, 0);
        Self { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// The same points in a different order: `result[i] = self[order[i]]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(self.coords.len());
        for &i in order {
            coords.extend_from_slice(self.point(i));
        }
        Self::from_flat(self.dim, coords)
    }
}

/// A facet of a simplicial hull: `dim` sorted vertex indices and the
/// supporting hyperplane `{x : <normal, x> = offset}` with unit outward normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialHull {
    dim: usize,
    facets: Vec<Facet>,
    vertex_count: usize,
}

impl SimplicialHull {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Number of input points that are vertices of the hull.
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Whether every ridge (a `dim - 1` subset of a facet) lies in exactly two
    /// facets, i.e. the boundary is a closed pseudo-manifold.
    pub fn ridges_closed(&self) -> bool {
        let mut counts: HashMap<Vec<usize>, u32> = HashMap::new();
        for f in &self.facets {
            for ridge in f.vertices.iter().copied().combinations(self.dim - 1) {
                *counts.entry(ridge).or_default() += 1;
            }
        }
        counts.values().all(|&c| c == 2)
    }

    /// Largest violation `<normal, p> - offset` over all facets and points.
    pub fn max_violation(&self, cloud: &PointCloud) -> f64 {
        self.facets
            .iter()
            .flat_map(|f| cloud.iter().map(move |p| dot(&f.normal, p) - f.offset))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pairs of facets sharing a ridge, as indices into [`Self::facets`].
    pub fn adjacent_facets(&self) -> Vec<(usize, usize)> {
        let mut owner: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut pairs = Vec::new();
        for (fi, f) in self.facets.iter().enumerate() {
            for ridge in f.vertices.iter().copied().combinations(self.dim - 1) {
                if let Some(other) = owner.remove(&ridge) {
                    pairs.push((other, fi));
                } else {
                    owner.insert(ridge, fi);
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }
}

/// Face counts `(f_0, ..., f_{d-1})` of a `d`-polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// Euler relation for the boundary of a `d`-polytope:
    /// `sum_k (-1)^k f_k = 1 - (-1)^d`.
    pub fn satisfies_euler(&self) -> bool {
        let expected = if self.dim().is_multiple_of(2) { 0 } else { 2 };
        self.alternating_sum() == expected
    }

    pub fn reversed(&self) -> FVector {
        FVector(self.0.iter().rev().copied().collect())
    }
}

impl std::ops::Index<usize> for FVector {
    type Output = u64;

    fn index(&self, k: usize) -> &u64 {
        &self.0[k]
    }
}

/// Orientation of `query` against the hyperplane through `m` points in `R^m`.
///
/// Returns the sign of `det(p_1 - p_0, ..., p_{m-1} - p_0, query - p_0)`, or
/// `0` when its magnitude is at most `tol` times the product of the row norms.
pub fn orientation(hyperplane: &[&[f64]], query: &[f64], tol: f64) -> i8 {
    let m = query.len();
    assert_eq!(hyperplane.len(), m, "need m points in R^m");
    assert!(hyperplane.iter().all(|p| p.len() == m));
    let c = cofactor_normal(hyperplane);
    let q = sub(query, hyperplane[0]);
    let value = dot(&c, &q);
    let scale: f64 = hyperplane[1..]
        .iter()
        .map(|p| norm(&sub(p, hyperplane[0])))
        .product::<f64>()
        * norm(&q);
    if value.abs() <= tol * scale {
        0
    } else if value > 0.0 {
        1
    } else {
        -1
    }
}

struct WorkFacet {
    vertices: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
    radius: f64,
    alive: bool,
}

struct Builder<'a> {
    dim: usize,
    pts: Vec<Vec<f64>>,
    radii: Vec<f64>,
    tol: f64,
    facets: Vec<WorkFacet>,
    cloud: &'a PointCloud,
}

impl Builder<'_> {
    // Facet through `vertices`, oriented away from the origin (the
    // interior reference point after shifting).
    fn make_facet(&self, mut vertices: Vec<usize>) -> Result<WorkFacet> {
        vertices.sort_unstable();
        let refs: Vec<&[f64]> = vertices.iter().map(|&i| self.pts[i].as_slice()).collect();
        let mut normal = cofactor_normal(&refs);
        let len = norm(&normal);
        let edge_scale: f64 = refs[1..].iter().map(|p| norm(&sub(p, refs[0]))).product();
        if !(len > self.tol * edge_scale) {
            return Err(Error::DegenerateConfiguration(format!(
                "facet {vertices:?} spans less than a hyperplane"
            )));
        }
        normal.iter_mut().for_each(|x| *x /= len);
        let mut offset = dot(&normal, refs[0]);
        let radius = vertices.iter().map(|&i| self.radii[i]).fold(0.0, f64::max);
        if offset.abs() <= self.tol * radius {
            return Err(Error::DegenerateConfiguration(
                "interior reference point lies on a facet".into(),
            ));
        }
        if offset < 0.0 {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        Ok(WorkFacet {
            vertices,
            normal,
            offset,
            radius,
            alive: true,
        })
    }

    // Every input point that is not a vertex of a facet must lie strictly
    // below its hyperplane; otherwise some face is not a simplex.
    fn check_general_position(&self) -> Result<()> {
        for f in self.facets.iter().filter(|f| f.alive) {
            for (p, point) in self.pts.iter().enumerate() {
                if f.vertices.binary_search(&p).is_ok() {
                    continue;
                }
                let dist = dot(&f.normal, point) - f.offset;
                if dist > -self.tol * (self.radii[p] + f.radius) {
                    return Err(Error::DegenerateConfiguration(format!(
                        "point {p} is on or beyond the hyperplane of facet {:?}",
                        f.vertices
                    )));
                }
            }
        }
        Ok(())
    }

    fn initial_simplex(&self) -> Result<Vec<usize>> {
        let n = self.cloud.len();
        let scale = self
            .cloud
            .iter()
            .map(norm)
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let origin = self.cloud.point(0);
        let mut chosen = vec![0];
        let mut basis: Vec<Vec<f64>> = Vec::new();
        while chosen.len() < self.dim + 1 {
            let mut best: Option<(usize, f64, Vec<f64>)> = None;
            for i in 0..n {
                if chosen.contains(&i) {
                    continue;
                }
                let mut r = sub(self.cloud.point(i), origin);
                for b in &basis {
                    let c = dot(&r, b);
                    r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
                let len = norm(&r);
                if best.as_ref().is_none_or(|(_, l, _)| len > *l) {
                    best = Some((i, len, r));
                }
            }
            let (i, len, mut r) = best.expect("enough points checked by caller");
            if len <= self.tol * scale {
                return Err(Error::DegenerateConfiguration(
                    "points do not span the full dimension".into(),
                ));
            }
            r.iter_mut().for_each(|x| *x /= len);
            basis.push(r);
            chosen.push(i);
        }
        Ok(chosen)
    }

    fn insert(&mut self, p: usize) -> Result<()> {
        let point = &self.pts[p];
        let r = self.radii[p];
        let mut visible = Vec::new();
        // points coplanar with a facet do not see it; if such a point ends
        // up on the final boundary, `check_general_position` rejects the hull
        for (fi, f) in self.facets.iter().enumerate().filter(|(_, f)| f.alive) {
            let dist = dot(&f.normal, point) - f.offset;
            if dist > self.tol * (r + f.radius) {
                visible.push(fi);
            }
        }
        if visible.is_empty() {
            return Ok(());
        }
        let mut ridge_count: HashMap<Vec<usize>, u32> = HashMap::new();
        for &fi in &visible {
            for ridge in self.facets[fi]
                .vertices
                .iter()
                .copied()
                .combinations(self.dim - 1)
            {
                *ridge_count.entry(ridge).or_default() += 1;
            }
        }
        let mut created = Vec::new();
        for &fi in &visible {
            for ridge in self.facets[fi]
                .vertices
                .iter()
                .copied()
                .combinations(self.dim - 1)
            {
                if ridge_count[&ridge] == 1 {
                    let mut verts = ridge;
                    verts.push(p);
                    created.push(self.make_facet(verts)?);
                }
            }
        }
        for &fi in &visible {
            self.facets[fi].alive = false;
        }
        self.facets.extend(created);
        if self.facets.len() > 4 * self.facets.iter().filter(|f| f.alive).count() + 64 {
            self.facets.retain(|f| f.alive);
        }
        Ok(())
    }
}

/// Convex hull of a point cloud in general position.
///
/// Points are inserted in input order after the starting simplex. The
/// returned facet list is reproducible for a fixed input order; its vertex
/// sets do not depend on the order.
pub fn build_hull(cloud: &PointCloud, tol: f64) -> Result<SimplicialHull> {
    let dim = cloud.dim();
    if dim < 2 {
        return Err(Error::Parameter("hulls need dimension at least 2".into()));
    }
    if cloud.len() < dim + 1 {
        return Err(Error::InsufficientPoints {
            needed: dim + 1,
            got: cloud.len(),
        });
    }
    let mut builder = Builder {
        dim,
        pts: Vec::new(),
        radii: Vec::new(),
        tol,
        facets: Vec::new(),
        cloud,
    };
    let simplex = builder.initial_simplex()?;
    let mut center = vec![0.0; dim];
    for &i in &simplex {
        center
            .iter_mut()
            .zip(cloud.point(i))
            .for_each(|(c, x)| *c += x);
    }
    center.iter_mut().for_each(|c| *c /= (dim + 1) as f64);
    builder.pts = cloud.iter().map(|p| sub(p, &center)).collect();
    builder.radii = builder.pts.iter().map(|p| norm(p)).collect();

    for skip in 0..=dim {
        let verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &v)| v)
            .collect();
        let f = builder.make_facet(verts)?;
        builder.facets.push(f);
    }
    let in_simplex: HashSet<usize> = simplex.iter().copied().collect();
    for p in 0..cloud.len() {
        if !in_simplex.contains(&p) {
            builder.insert(p)?;
        }
    }
    builder.check_general_position()?;

    let facets: Vec<Facet> = builder
        .facets
        .into_iter()
        .filter(|f| f.alive)
        .map(|f| {
            let offset = f.offset + dot(&f.normal, &center);
            Facet {
                vertices: f.vertices,
                normal: f.normal,
                offset,
            }
        })
        .collect();
    let vertex_count = facets
        .iter()
        .flat_map(|f| f.vertices.iter().copied())
        .collect::<HashSet<_>>()
        .len();
    Ok(SimplicialHull {
        dim,
        facets,
        vertex_count,
    })
}

/// f-vector of a simplicial hull: `f_k` is the number of distinct
/// `(k+1)`-subsets of facet vertex sets.
pub fn f_vector(hull: &SimplicialHull) -> FVector {
    let dim = hull.dim;
    let mut counts = Vec::with_capacity(dim);
    for k in 0..dim {
        if k + 1 == dim {
            counts.push(hull.facets.len() as u64);
            continue;
        }
        let faces: HashSet<Vec<usize>> = hull
            .facets
            .iter()
            .flat_map(|f| f.vertices.iter().copied().combinations(k + 1))
            .collect();
        counts.push(faces.len() as u64);
    }
    FVector(counts)
}
