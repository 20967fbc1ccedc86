//! Small dense helpers for the hull. Dimensions here never exceed ~8, so
//! plain row-major `Vec<f64>` and elimination with partial pivoting are
//! enough.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Determinant of an `n x n` row-major matrix.
pub(crate) fn det(mut a: Vec<f64>, n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap();
        let p = a[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f != 0.0 {
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
    }
    det
}

/// Cofactor normal of the hyperplane through `m` points in `R^m`.
///
/// With rows `r_i = p_i - p_0` the result `c` satisfies
/// `<c, q - p_0> = det(r_1, ..., r_{m-1}, q - p_0)`, so its sign against a
/// query point is the orientation of the simplex `(p_0, ..., p_{m-1}, q)`.
/// The vector is not normalised; its length is the `(m-1)`-volume factor.
pub(crate) fn cofactor_normal(points: &[&[f64]]) -> Vec<f64> {
    let m = points.len();
    let base = points[0];
    let rows: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, base)).collect();
    if m == 1 {
        return vec![1.0];
    }
    let k = m - 1;
    let mut out = vec![0.0; m];
    let mut minor = Vec::with_capacity(k * k);
    for (j, slot) in out.iter_mut().enumerate() {
        minor.clear();
        for row in &rows {
            minor.extend(
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| *v),
            );
        }
        let sign = if (k + j).is_multiple_of(2) { 1.0 } else { -1.0 };
        *slot = sign * det(minor.clone(), k);
    }
    out
}
