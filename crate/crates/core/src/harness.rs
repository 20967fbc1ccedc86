//! Monte Carlo estimation and the statistical checks built on it.
//!
//! Replication `i` of a run with seed `s` always draws from the stream
//! `(s, i)`, so reports are reproducible and do not depend on the number of
//! worker threads. Per-draw f-vectors are accumulated into an exact
//! histogram, and every summary statistic is computed from the histogram with
//! integer sums; merging two reports over disjoint replication ranges is
//! therefore identical to running the combined range at once.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{expected_fvector_exact, ExactFVectorResult, QuadratureSpec};
use crate::hull::FVector;
use crate::rng::RngStream;
use crate::samplers::sample_uniform_sphere;
use crate::stats::{chi_square_two_sample, ks_two_sample, TwoSampleTestReport, Z_99};
use crate::voronoi::{sample_beta_prime_hull, sample_tessellation_fvector, sample_typical_cell};

/// Default `|z|` threshold for exact-vs-simulated verdicts.
pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;

/// Offset separating the seeds of independent sides of a two-sided check.
const SECOND_SIDE: u64 = 0x5851_f42d_4c95_7f2d;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    TypicalCell,
    Tessellation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramEntry {
    pub fvector: FVector,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub kind: SampleKind,
    pub d: usize,
    /// Competitors for typical cells, cells for tessellations.
    pub n: usize,
    pub replications: u64,
    pub seed: u64,
    pub first_stream: u64,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    /// Normal-approximation 99% interval.
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub histogram: Vec<HistogramEntry>,
}

impl SimulationReport {
    fn from_histogram(
        kind: SampleKind,
        d: usize,
        n: usize,
        seed: u64,
        first_stream: u64,
        hist: BTreeMap<FVector, u64>,
    ) -> Self {
        let reps: u64 = hist.values().sum();
        let mut sum = vec![0u128; d];
        let mut sumsq = vec![0u128; d];
        for (f, &c) in &hist {
            for k in 0..d {
                let v = f[k] as u128;
                sum[k] += v * c as u128;
                sumsq[k] += v * v * c as u128;
            }
        }
        let nf = reps as f64;
        let mean: Vec<f64> = sum.iter().map(|&s| s as f64 / nf).collect();
        let std_error: Vec<f64> = (0..d)
            .map(|k| {
                if reps < 2 {
                    return f64::NAN;
                }
                let num = reps as u128 * sumsq[k] - sum[k] * sum[k];
                let var = num as f64 / (nf * (nf - 1.0));
                (var / nf).sqrt()
            })
            .collect();
        let ci_low = mean
            .iter()
            .zip(&std_error)
            .map(|(m, s)| m - Z_99 * s)
            .collect();
        let ci_high = mean
            .iter()
            .zip(&std_error)
            .map(|(m, s)| m + Z_99 * s)
            .collect();
        Self {
            kind,
            d,
            n,
            replications: reps,
            seed,
            first_stream,
            mean,
            std_error,
            ci_low,
            ci_high,
            histogram: hist
                .into_iter()
                .map(|(fvector, count)| HistogramEntry { fvector, count })
                .collect(),
        }
    }

    fn histogram_map(&self) -> BTreeMap<FVector, u64> {
        self.histogram
            .iter()
            .map(|e| (e.fvector.clone(), e.count))
            .collect()
    }

    /// Histogram of a single coordinate `f_k`.
    pub fn marginal(&self, k: usize) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for e in &self.histogram {
            *out.entry(e.fvector[k]).or_insert(0) += e.count;
        }
        out
    }

    /// Combine with a report over a disjoint replication range of the same
    /// experiment.
    pub fn merge(&self, other: &SimulationReport) -> Result<SimulationReport> {
        if (self.kind, self.d, self.n, self.seed) != (other.kind, other.d, other.n, other.seed) {
            return Err(Error::Parameter(
                "reports describe different experiments".into(),
            ));
        }
        let mut hist = self.histogram_map();
        for e in &other.histogram {
            *hist.entry(e.fvector.clone()).or_insert(0) += e.count;
        }
        Ok(Self::from_histogram(
            self.kind,
            self.d,
            self.n,
            self.seed,
            self.first_stream.min(other.first_stream),
            hist,
        ))
    }
}

fn merge_maps(mut a: BTreeMap<FVector, u64>, b: BTreeMap<FVector, u64>) -> BTreeMap<FVector, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

fn collect_histogram<F>(streams: Range<u64>, seed: u64, draw: F) -> Result<BTreeMap<FVector, u64>>
where
    F: Fn(&mut RngStream) -> Result<FVector> + Sync,
{
    streams
        .into_par_iter()
        .map(|i| draw(&mut RngStream::new(seed, i)))
        .try_fold(BTreeMap::new, |mut acc, f| {
            *acc.entry(f?).or_insert(0) += 1;
            Ok(acc)
        })
        .try_reduce(BTreeMap::new, |a, b| Ok(merge_maps(a, b)))
}

fn euler_checked(f: FVector) -> Result<FVector> {
    if f.satisfies_euler() {
        Ok(f)
    } else {
        Err(Error::DegenerateConfiguration(format!(
            "f-vector {:?} violates the Euler relation",
            f.counts()
        )))
    }
}

/// Typical-cell replications over an explicit stream range.
pub fn estimate_typical_cell_streams(
    d: usize,
    n: usize,
    seed: u64,
    streams: Range<u64>,
) -> Result<SimulationReport> {
    let first = streams.start;
    let hist = collect_histogram(streams, seed, |rng| {
        euler_checked(sample_typical_cell(d, n, rng)?.fvec)
    })?;
    Ok(SimulationReport::from_histogram(
        SampleKind::TypicalCell,
        d,
        n,
        seed,
        first,
        hist,
    ))
}

/// Estimate `E f_k` of the typical cell among `n` competitors on `S^d`.
pub fn estimate_typical_cell(
    d: usize,
    n: usize,
    replications: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if replications < 100 {
        return Err(Error::Parameter(format!(
            "need at least 100 replications, got {replications}"
        )));
    }
    estimate_typical_cell_streams(d, n, seed, 0..replications)
}

/// Tessellation replications over an explicit stream range.
pub fn estimate_tessellation_streams(
    d: usize,
    cells: usize,
    seed: u64,
    streams: Range<u64>,
) -> Result<SimulationReport> {
    let first = streams.start;
    let hist = collect_histogram(streams, seed, |rng| {
        let f = sample_tessellation_fvector(d, cells, rng)?.fvec;
        // appending f_d = cells and reversing gives the dual hull's f-vector
        let mut hull: Vec<u64> = vec![cells as u64];
        hull.extend(f.counts().iter().rev());
        euler_checked(FVector(hull))?;
        Ok(f)
    })?;
    Ok(SimulationReport::from_histogram(
        SampleKind::Tessellation,
        d,
        cells,
        seed,
        first,
        hist,
    ))
}

/// Estimate the expected face counts of the whole tessellation by `cells` points.
pub fn estimate_tessellation(
    d: usize,
    cells: usize,
    replications: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if replications < 100 {
        return Err(Error::Parameter(format!(
            "need at least 100 replications, got {replications}"
        )));
    }
    estimate_tessellation_streams(d, cells, seed, 0..replications)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub d: usize,
    pub n: usize,
    /// Values the simulation is compared against.
    pub reference: Vec<f64>,
    /// Standard error of the reference (zero for exact values).
    pub reference_std_error: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactFVectorResult>,
    pub simulated: SimulationReport,
    pub z_scores: Vec<f64>,
    pub verdicts: Vec<bool>,
    pub z_threshold: f64,
    pub passed: bool,
}

fn z_score(mean: f64, reference: f64, se: f64) -> f64 {
    let diff = mean - reference;
    if se > 0.0 {
        diff / se
    } else if diff.abs() <= 1e-9 * (1.0 + reference.abs()) {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// Compare a simulation against reference values componentwise.
pub fn compare_with_reference(
    simulated: SimulationReport,
    reference: Vec<f64>,
    reference_std_error: Vec<f64>,
    z_threshold: f64,
) -> ComparisonReport {
    let z_scores: Vec<f64> = (0..simulated.d)
        .map(|k| {
            let se = simulated.std_error[k].hypot(reference_std_error[k]);
            z_score(simulated.mean[k], reference[k], se)
        })
        .collect();
    let verdicts: Vec<bool> = z_scores.iter().map(|z| z.abs() <= z_threshold).collect();
    ComparisonReport {
        d: simulated.d,
        n: simulated.n,
        passed: verdicts.iter().all(|&v| v),
        reference,
        reference_std_error,
        exact: None,
        simulated,
        z_scores,
        verdicts,
        z_threshold,
    }
}

/// Run the exact engine and the simulation and compare them.
pub fn compare_exact_vs_mc(
    d: usize,
    n: usize,
    replications: u64,
    seed: u64,
    quad: &QuadratureSpec,
    z_threshold: f64,
) -> Result<ComparisonReport> {
    let exact = expected_fvector_exact(d, n, quad)?;
    let simulated = estimate_typical_cell(d, n, replications, seed)?;
    let mut report =
        compare_with_reference(simulated, exact.expected.clone(), vec![0.0; d], z_threshold);
    report.exact = Some(exact);
    Ok(report)
}

/// Chi-square test that `f_0` of the typical cell among `n` competitors has
/// the law of the facet count of a beta' polytope with `β = d` on `n` points.
pub fn test_beta_prime_identity(
    d: usize,
    n: usize,
    replications: u64,
    seed: u64,
) -> Result<TwoSampleTestReport> {
    test_beta_prime_identity_with_beta(d, n, replications, seed, d as f64)
}

/// As [`test_beta_prime_identity`] with a free beta' parameter for the
/// polytope side; any `beta != d` is a negative control.
pub fn test_beta_prime_identity_with_beta(
    d: usize,
    n: usize,
    replications: u64,
    seed: u64,
    beta: f64,
) -> Result<TwoSampleTestReport> {
    if replications < 1000 {
        return Err(Error::Parameter(format!(
            "need at least 1000 replications, got {replications}"
        )));
    }
    let cells = estimate_typical_cell_streams(d, n, seed, 0..replications)?.marginal(0);
    let hulls = collect_histogram(0..replications, seed.wrapping_add(SECOND_SIDE), |rng| {
        euler_checked(sample_beta_prime_hull(d, n, beta, rng)?)
    })?;
    let mut facets = BTreeMap::new();
    for (f, c) in hulls {
        *facets.entry(f[d - 1]).or_insert(0) += c;
    }
    Ok(chi_square_two_sample(&cells, &facets))
}

/// `R = tan(θ/2)` for `count` uniform points on `S^d`.
pub fn sample_radii(d: usize, count: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = RngStream::new(seed, 0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        match sample_uniform_sphere(d, &mut rng) {
            Ok(p) => out.push(p.r),
            Err(Error::DegenerateSample) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Two-sample KS test of `R` against `1/R`, using independent halves of
/// `samples` draws so the samples are independent.
pub fn test_inversion_invariance(
    d: usize,
    samples: usize,
    seed: u64,
) -> Result<TwoSampleTestReport> {
    if samples < 2 {
        return Err(Error::Parameter("need at least two samples".into()));
    }
    let radii = sample_radii(d, samples, seed)?;
    let (a, b) = radii.split_at(samples / 2);
    let inverted: Vec<f64> = b.iter().map(|r| 1.0 / r).collect();
    Ok(ks_two_sample(a, &inverted))
}

/// Check `E f_k(tessellation) = cells / (d - k + 1) · E f_k(typical cell)`
/// with both sides simulated independently.
pub fn verify_counting_identity(
    d: usize,
    cells: usize,
    replications: u64,
    seed: u64,
    z_threshold: f64,
) -> Result<ComparisonReport> {
    if cells < d + 2 {
        return Err(Error::Parameter(format!(
            "need at least d + 2 cells, got {cells}"
        )));
    }
    let tess = estimate_tessellation(d, cells, replications, seed)?;
    let typical =
        estimate_typical_cell(d, cells - 1, replications, seed.wrapping_add(SECOND_SIDE))?;
    let scale: Vec<f64> = (0..d).map(|k| cells as f64 / (d - k + 1) as f64).collect();
    let reference = typical
        .mean
        .iter()
        .zip(&scale)
        .map(|(m, s)| m * s)
        .collect();
    let reference_se = typical
        .std_error
        .iter()
        .zip(&scale)
        .map(|(e, s)| e * s)
        .collect();
    Ok(compare_with_reference(
        tess,
        reference,
        reference_se,
        z_threshold,
    ))
}
