//! Monte Carlo realisations of the typical cell and of whole tessellations.
//!
//! The typical cell among `n` competitors is the Voronoi cell of the north
//! pole `e` when `n` uniform points are added. Its faces are dual to those of
//! the polytope `Q_n = conv(U_i / R_i)` in the tangent space at the south
//! pole: `f_k(cell) = f_{d-k-1}(Q_n)`. So the cell is never built on the
//! sphere; a `d`-dimensional hull suffices.
//!
//! A whole tessellation of `S^d` by `c` points is dual to the hull of the
//! points in `R^{d+1}`: `f_k(tessellation) = f_{d-k}(hull)`.
//!
//! Note the two conventions: `n` counts competitors (the tessellation behind
//! a typical cell has `n + 1` cells), whereas tessellation functions take the
//! cell count itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull::{build_hull, f_vector, FVector, PointCloud, DEFAULT_TOLERANCE};
use crate::rng::RngStream;
use crate::samplers::{sample_uniform_sphere, voronoi_dual_points_with_sources, UnitPoint};

/// Redraws allowed after a degenerate draw before giving up.
pub const MAX_RETRIES: u64 = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalCellSample {
    pub d: usize,
    /// Competitor count; the tessellation has `n + 1` cells.
    pub n: usize,
    pub fvec: FVector,
    /// f-vector of the dual polytope `Q_n`.
    pub hull_fvec: FVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TessellationSample {
    pub d: usize,
    /// Number of cells.
    pub n: usize,
    /// `(f_0, ..., f_{d-1})` of the tessellation; `f_d` is the cell count.
    pub fvec: FVector,
    pub cell_count: usize,
}

fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::DegenerateConfiguration(_) | Error::DegenerateSample
    )
}

/// Run `draw` on `rng`, redrawing from fresh child streams on degeneracy.
fn with_retries<T>(
    rng: &mut RngStream,
    mut draw: impl FnMut(&mut RngStream) -> Result<T>,
) -> Result<T> {
    let mut last = match draw(rng) {
        Err(e) if is_degenerate(&e) => e,
        other => return other,
    };
    for attempt in 0..MAX_RETRIES {
        let mut fresh = rng.child(attempt);
        match draw(&mut fresh) {
            Err(e) if is_degenerate(&e) => last = e,
            other => return other,
        }
    }
    Err(last)
}

fn check_typical(d: usize, n: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Parameter(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    if n < d + 1 {
        return Err(Error::Parameter(format!(
            "need n >= d + 1 competitors, got n={n}, d={d}"
        )));
    }
    Ok(())
}

/// f-vector of the typical cell among `n` competitors on `S^d`.
pub fn sample_typical_cell(d: usize, n: usize, rng: &mut RngStream) -> Result<TypicalCellSample> {
    check_typical(d, n)?;
    with_retries(rng, |rng| {
        let (cloud, _) = voronoi_dual_points_with_sources(n, d, rng)?;
        let hull = build_hull(&cloud, DEFAULT_TOLERANCE)?;
        let hull_fvec = f_vector(&hull);
        Ok(TypicalCellSample {
            d,
            n,
            fvec: hull_fvec.reversed(),
            hull_fvec,
        })
    })
}

/// f-vector of the hull of `n` points drawn from the beta' law with
/// parameter `beta` in `R^d`.
pub fn sample_beta_prime_hull(
    d: usize,
    n: usize,
    beta: f64,
    rng: &mut RngStream,
) -> Result<FVector> {
    check_typical(d, n)?;
    with_retries(rng, |rng| {
        let cloud = crate::samplers::sample_beta_prime(n, d, beta, rng)?;
        Ok(f_vector(&build_hull(&cloud, DEFAULT_TOLERANCE)?))
    })
}

fn sphere_cloud(
    d: usize,
    count: usize,
    rng: &mut RngStream,
) -> Result<(PointCloud, Vec<UnitPoint>)> {
    let pts: Vec<UnitPoint> = (0..count)
        .map(|_| sample_uniform_sphere(d, rng))
        .collect::<Result<_>>()?;
    let cloud = PointCloud::new(d + 1, pts.iter().map(|p| p.coords.clone()).collect())?;
    Ok((cloud, pts))
}

/// Face counts of the tessellation of `S^d` generated by `cells` uniform points.
pub fn sample_tessellation_fvector(
    d: usize,
    cells: usize,
    rng: &mut RngStream,
) -> Result<TessellationSample> {
    if d < 2 {
        return Err(Error::Parameter(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    if cells < d + 2 {
        return Err(Error::Parameter(format!(
            "need at least d + 2 cells, got {cells}"
        )));
    }
    with_retries(rng, |rng| {
        let (cloud, _) = sphere_cloud(d, cells, rng)?;
        let hull = build_hull(&cloud, DEFAULT_TOLERANCE)?;
        let hf = f_vector(&hull);
        // hull f-vector has length d+1; tessellation k-faces are hull (d-k)-faces
        let fvec = FVector((0..d).map(|k| hf[d - k]).collect());
        Ok(TessellationSample {
            d,
            n: cells,
            fvec,
            cell_count: cells,
        })
    })
}

/// The north-pole cell on `S^2` as a spherical polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct TypicalPolygon {
    /// Competitor points.
    pub generators: Vec<[f64; 3]>,
    /// Cell vertices in cyclic order around the pole.
    pub vertices: Vec<[f64; 3]>,
    /// For each vertex, the two competitors it is equidistant to (with `e`).
    pub vertex_generators: Vec<(usize, usize)>,
}

/// Build the north-pole cell from given competitors on `S^2`.
///
/// Each edge of `Q_n` with outward unit normal `ν` and offset `c` is the
/// vertex `(c, ν) / |(c, ν)|` of the cell.
pub fn typical_polygon_from_generators(points: &[UnitPoint]) -> Result<TypicalPolygon> {
    if points.iter().any(|p| p.dim() != 2) {
        return Err(Error::Parameter("typical polygons live on S^2".into()));
    }
    let cloud = PointCloud::new(2, points.iter().map(|p| p.dual_point()).collect())?;
    let hull = build_hull(&cloud, DEFAULT_TOLERANCE)?;
    let mut verts: Vec<(f64, [f64; 3], (usize, usize))> = hull
        .facets()
        .iter()
        .map(|f| {
            let v = [f.offset, f.normal[0], f.normal[1]];
            let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let angle = f.normal[1].atan2(f.normal[0]);
            (angle, v.map(|x| x / len), (f.vertices[0], f.vertices[1]))
        })
        .collect();
    verts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(TypicalPolygon {
        generators: points
            .iter()
            .map(|p| [p.coords[0], p.coords[1], p.coords[2]])
            .collect(),
        vertices: verts.iter().map(|v| v.1).collect(),
        vertex_generators: verts.iter().map(|v| v.2).collect(),
    })
}

/// The north-pole cell among `n` uniform competitors on `S^2`.
pub fn typical_cell_polygon_s2(n: usize, rng: &mut RngStream) -> Result<TypicalPolygon> {
    check_typical(2, n)?;
    with_retries(rng, |rng| {
        let (_, sources) = voronoi_dual_points_with_sources(n, 2, rng)?;
        typical_polygon_from_generators(&sources)
    })
}

/// A full Voronoi tessellation of `S^2`, for drawing.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalTessellation {
    pub generators: Vec<[f64; 3]>,
    /// Voronoi vertices (unit vectors), one per Delaunay triangle.
    pub vertices: Vec<[f64; 3]>,
    /// Voronoi edges as pairs of vertex indices; each is a geodesic arc.
    pub edges: Vec<(usize, usize)>,
}

/// Voronoi tessellation of `S^2` by `cells` uniform points.
pub fn sample_tessellation_s2(cells: usize, rng: &mut RngStream) -> Result<SphericalTessellation> {
    if cells < 4 {
        return Err(Error::Parameter(format!(
            "need at least 4 cells, got {cells}"
        )));
    }
    with_retries(rng, |rng| {
        let (cloud, pts) = sphere_cloud(2, cells, rng)?;
        let hull = build_hull(&cloud, DEFAULT_TOLERANCE)?;
        Ok(SphericalTessellation {
            generators: pts
                .iter()
                .map(|p| [p.coords[0], p.coords[1], p.coords[2]])
                .collect(),
            vertices: hull
                .facets()
                .iter()
                .map(|f| [f.normal[0], f.normal[1], f.normal[2]])
                .collect(),
            edges: hull.adjacent_facets(),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    fn det3(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
    }

    #[test]
    fn simplex_case_d3_n4() {
        let mut rng = RngStream::new(5, 0);
        for _ in 0..50 {
            let s = sample_typical_cell(3, 4, &mut rng).unwrap();
            assert_eq!(s.fvec, FVector(vec![4, 6, 4]));
        }
    }

    #[test]
    fn typical_cell_structure() {
        let mut rng = RngStream::new(9, 1);
        for d in 2..5 {
            for n in [d + 1, d + 3, 12] {
                for _ in 0..20 {
                    let s = sample_typical_cell(d, n, &mut rng).unwrap();
                    assert!(s.fvec.satisfies_euler());
                    assert!(s.hull_fvec.satisfies_euler());
                    for k in 0..d {
                        assert_eq!(s.fvec[k], s.hull_fvec[d - k - 1]);
                    }
                    if d == 2 {
                        assert_eq!(s.fvec[0], s.fvec[1]);
                    }
                    if d == 3 {
                        assert_eq!(2 * s.fvec[1], 3 * s.fvec[0]);
                    }
                }
            }
        }
    }

    #[test]
    fn tessellation_d2_is_deterministic_in_counts() {
        let mut rng = RngStream::new(2, 0);
        for _ in 0..10 {
            let s = sample_tessellation_fvector(2, 50, &mut rng).unwrap();
            assert_eq!(s.fvec, FVector(vec![96, 144]));
            assert_eq!(2 * s.fvec[1], 3 * s.fvec[0]);
        }
    }

    #[test]
    fn parameter_checks() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_typical_cell(3, 3, &mut rng).is_err());
        assert!(sample_typical_cell(1, 3, &mut rng).is_err());
        assert!(sample_tessellation_fvector(3, 4, &mut rng).is_err());
        assert!(sample_tessellation_s2(3, &mut rng).is_err());
    }

    #[test]
    fn polygon_vertices_are_voronoi_vertices() {
        let mut rng = RngStream::new(77, 0);
        let e = [1.0, 0.0, 0.0];
        for n in [3, 4, 8, 20] {
            for _ in 0..20 {
                let poly = typical_cell_polygon_s2(n, &mut rng).unwrap();
                for (v, &(i, j)) in poly.vertices.iter().zip(&poly.vertex_generators) {
                    let de = dot3(v, &e).clamp(-1.0, 1.0).acos();
                    let di = dot3(v, &poly.generators[i]).clamp(-1.0, 1.0).acos();
                    let dj = dot3(v, &poly.generators[j]).clamp(-1.0, 1.0).acos();
                    assert!((de - di).abs() < 1e-9 && (de - dj).abs() < 1e-9);
                    for g in &poly.generators {
                        assert!(dot3(v, g).clamp(-1.0, 1.0).acos() >= de - 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn polygon_vertex_count_matches_typical_cell() {
        for stream in 0..30 {
            let poly = typical_cell_polygon_s2(6, &mut RngStream::new(4, stream)).unwrap();
            let cell = sample_typical_cell(2, 6, &mut RngStream::new(4, stream)).unwrap();
            assert_eq!(poly.vertices.len() as u64, cell.fvec[0]);
        }
    }

    #[test]
    fn polygon_around_pole_with_southern_generators() {
        let e = [1.0, 0.0, 0.0];
        let pts: Vec<UnitPoint> = [0.0f64, 2.1, 4.2]
            .iter()
            .map(|&phi| {
                let theta: f64 = 3.0;
                UnitPoint::from_coords(vec![
                    theta.cos(),
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                ])
                .unwrap()
            })
            .collect();
        let poly = typical_polygon_from_generators(&pts).unwrap();
        assert_eq!(poly.vertices.len(), 3);
        let k = poly.vertices.len();
        let signs: Vec<f64> = (0..k)
            .map(|a| det3(&e, &poly.vertices[a], &poly.vertices[(a + 1) % k]).signum())
            .collect();
        assert!(signs.iter().all(|&s| s == signs[0]));
    }

    #[test]
    fn small_tessellation_has_four_vertices() {
        let t = sample_tessellation_s2(4, &mut RngStream::new(1, 0)).unwrap();
        assert_eq!(t.vertices.len(), 4);
        assert_eq!(t.edges.len(), 6);
    }

    #[test]
    fn beta_prime_hull_is_simplicial() {
        let mut rng = RngStream::new(3, 3);
        for _ in 0..20 {
            let f = sample_beta_prime_hull(3, 10, 3.0, &mut rng).unwrap();
            assert!(f.satisfies_euler());
            assert_eq!(2 * f[1], 3 * f[2]);
        }
    }
}
