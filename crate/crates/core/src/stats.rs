//! Test statistics: Kolmogorov–Smirnov and chi-square, one- and two-sample.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    ChiSquare,
    Ks,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleTestReport {
    pub statistic: f64,
    pub p_value: f64,
    pub test_kind: TestKind,
    pub sample_sizes: (usize, usize),
    /// Degrees of freedom after merging sparse bins (chi-square only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees_of_freedom: Option<usize>,
}

impl TwoSampleTestReport {
    pub fn rejects_at(&self, level: f64) -> bool {
        self.p_value < level
    }
}

/// Survival function of the Kolmogorov distribution, `P(K > λ)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=200 {
        let j = j as f64;
        let term = (-2.0 * j * j * lambda * lambda).exp();
        sum += if j as u64 % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p_value(d: f64, effective_n: f64) -> f64 {
    let sq = effective_n.sqrt();
    kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d)
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> TwoSampleTestReport {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    TwoSampleTestReport {
        statistic: d,
        p_value: ks_p_value(d, na * nb / (na + nb)),
        test_kind: TestKind::Ks,
        sample_sizes: (a.len(), b.len()),
        degrees_of_freedom: None,
    }
}

/// One-sample Kolmogorov–Smirnov test against a continuous distribution
/// function. The second sample size is reported as 0.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> TwoSampleTestReport {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let d = s
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    TwoSampleTestReport {
        statistic: d,
        p_value: ks_p_value(d, n),
        test_kind: TestKind::Ks,
        sample_sizes: (s.len(), 0),
        degrees_of_freedom: None,
    }
}

fn chi_square_p(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    (1.0 - dist.cdf(statistic)).clamp(0.0, 1.0)
}

/// Two-sample chi-square homogeneity test on integer-valued observations.
///
/// Adjacent values are pooled (in increasing order) until both samples'
/// expected counts in every bin are at least 5; a sparse trailing bin is
/// folded into its predecessor.
pub fn chi_square_two_sample(
    a: &BTreeMap<u64, u64>,
    b: &BTreeMap<u64, u64>,
) -> TwoSampleTestReport {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    let total = (na + nb) as f64;
    let (fa, fb) = (na as f64 / total, nb as f64 / total);
    let keys: std::collections::BTreeSet<u64> = a.keys().chain(b.keys()).copied().collect();

    let mut bins: Vec<(u64, u64)> = Vec::new();
    let mut cur = (0u64, 0u64);
    for k in keys {
        cur.0 += a.get(&k).copied().unwrap_or(0);
        cur.1 += b.get(&k).copied().unwrap_or(0);
        let pooled = (cur.0 + cur.1) as f64;
        if pooled * fa.min(fb) >= 5.0 {
            bins.push(cur);
            cur = (0, 0);
        }
    }
    if cur.0 + cur.1 > 0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += cur.0;
                last.1 += cur.1;
            }
            None => bins.push(cur),
        }
    }

    let statistic: f64 = bins
        .iter()
        .map(|&(x, y)| {
            let pooled = (x + y) as f64;
            let (ea, eb) = (pooled * fa, pooled * fb);
            (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb
        })
        .sum();
    let dof = bins.len().saturating_sub(1);
    TwoSampleTestReport {
        statistic,
        p_value: chi_square_p(statistic, dof),
        test_kind: TestKind::ChiSquare,
        sample_sizes: (na as usize, nb as usize),
        degrees_of_freedom: Some(dof),
    }
}

/// Chi-square goodness of fit with `bins` equiprobable bins, cut at the
/// quantiles of the reference distribution (found by bisection on `cdf`
/// within `[lo, hi]`).
pub fn chi_square_goodness_of_fit<F: Fn(f64) -> f64>(
    sample: &[f64],
    cdf: F,
    lo: f64,
    hi: f64,
    bins: usize,
) -> TwoSampleTestReport {
    let cuts: Vec<f64> = (1..bins)
        .map(|i| {
            let target = i as f64 / bins as f64;
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if cdf(m) < target {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        })
        .collect();
    let mut counts = vec![0u64; bins];
    for &x in sample {
        counts[cuts.partition_point(|&c| c < x)] += 1;
    }
    let expected = sample.len() as f64 / bins as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    TwoSampleTestReport {
        statistic,
        p_value: chi_square_p(statistic, bins - 1),
        test_kind: TestKind::ChiSquare,
        sample_sizes: (sample.len(), 0),
        degrees_of_freedom: Some(bins - 1),
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample median.
pub fn median(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}
