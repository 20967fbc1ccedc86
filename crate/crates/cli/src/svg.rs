//! Orthographic SVG of a Voronoi tessellation of `S^2`, seen from `+x`.

use std::fmt::Write;

use svoronoi::voronoi::SphericalTessellation;

const SIZE: f64 = 512.0;
const RADIUS: f64 = 240.0;
const SEGMENTS: usize = 64;

/// Screen position of a unit vector: `y` to the right, `z` up.
fn project(p: &[f64; 3]) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * p[1], SIZE / 2.0 - RADIUS * p[2])
}

fn visible(p: &[f64; 3]) -> bool {
    p[0] >= 0.0
}

/// Points along the great-circle arc from `a` to `b`, both ends included.
pub fn geodesic(a: &[f64; 3], b: &[f64; 3], segments: usize) -> Vec<[f64; 3]> {
    let cos = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
    let omega = cos.acos();
    let s = omega.sin();
    (0..=segments)
        .map(|i| {
            let t = i as f64 / segments as f64;
            if s < 1e-12 {
                return *a;
            }
            let (wa, wb) = (((1.0 - t) * omega).sin() / s, (t * omega).sin() / s);
            [
                wa * a[0] + wb * b[0],
                wa * a[1] + wb * b[1],
                wa * a[2] + wb * b[2],
            ]
        })
        .collect()
}

/// Maximal runs of consecutive visible points.
fn visible_runs(points: &[[f64; 3]]) -> Vec<Vec<[f64; 3]>> {
    let mut runs = Vec::new();
    let mut cur: Vec<[f64; 3]> = Vec::new();
    for p in points {
        if visible(p) {
            cur.push(*p);
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs.retain(|r| r.len() >= 2);
    runs
}

pub fn render(t: &SphericalTessellation) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        s,
        r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="#f4f4f4" stroke="#000" stroke-width="1"/>"##,
        c = SIZE / 2.0
    )
    .unwrap();
    writeln!(
        s,
        r##"<g fill="none" stroke="#1f4e79" stroke-width="1.2">"##
    )
    .unwrap();
    for &(i, j) in &t.edges {
        for run in visible_runs(&geodesic(&t.vertices[i], &t.vertices[j], SEGMENTS)) {
            let pts: Vec<String> = run
                .iter()
                .map(|p| {
                    let (x, y) = project(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" ")).unwrap();
        }
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, r##"<g fill="#c0392b">"##).unwrap();
    for g in t.generators.iter().filter(|g| visible(g)) {
        let (x, y) = project(g);
        writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2"/>"#).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesic_stays_on_sphere() {
        let a = [1.0, 0.0, 0.0];
        let b = [0.0, 0.6, 0.8];
        let pts = geodesic(&a, &b, 64);
        assert_eq!(pts.len(), 65);
        assert_eq!(pts[0], a);
        for p in &pts {
            assert!((p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0).abs() < 1e-12);
        }
        let last = pts[64];
        assert!((0..3).all(|i| (last[i] - b[i]).abs() < 1e-12));
    }

    #[test]
    fn back_hemisphere_is_dropped() {
        let pts = [
            [0.5, 0.0, 0.0],
            [0.1, 0.0, 0.0],
            [-0.1, 0.0, 0.0],
            [0.2, 0.0, 0.0],
            [0.3, 0.0, 0.0],
        ];
        let runs = visible_runs(&pts);
        assert_eq!(runs.len(), 2);
        assert!(runs.iter().flatten().all(visible));
    }
}
