//! JSON and CSV rendering of reports.

use std::fmt::Write;

use serde::Serialize;
use svoronoi::harness::{ComparisonReport, SimulationReport};
use svoronoi::stats::{TestKind, TwoSampleTestReport};
use svoronoi::ExactFVectorResult;

use crate::config::RunConfig;

pub const SIMULATION_HEADER: &str = "k,value,std_error,ci_low,ci_high";
pub const EXACT_HEADER: &str = "k,exact_formula1,exact_formula2,discrepancy";
pub const COMPARISON_HEADER: &str = "k,reference,value,std_error,z_score,pass";
pub const TEST_HEADER: &str =
    "test_kind,statistic,p_value,sample_size_a,sample_size_b,degrees_of_freedom";

/// A real number with 15 significant digits.
pub fn fmt15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, x)
    } else {
        sci
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    report: &'a T,
}

pub fn json<T: Serialize>(config: &RunConfig, report: &T) -> String {
    let mut s =
        serde_json::to_string_pretty(&Envelope { config, report }).expect("reports serialize");
    s.push('\n');
    s
}

pub fn exact_csv(r: &ExactFVectorResult) -> String {
    let mut s = format!("{EXACT_HEADER}\n");
    for k in 0..r.d {
        let (a, b) = (r.formula1[k], r.formula2[k]);
        writeln!(s, "{k},{},{},{}", fmt15(a), fmt15(b), fmt15((a - b).abs())).unwrap();
    }
    s
}

pub fn simulation_csv(r: &SimulationReport) -> String {
    let mut s = format!("{SIMULATION_HEADER}\n");
    for k in 0..r.d {
        writeln!(
            s,
            "{k},{},{},{},{}",
            fmt15(r.mean[k]),
            fmt15(r.std_error[k]),
            fmt15(r.ci_low[k]),
            fmt15(r.ci_high[k])
        )
        .unwrap();
    }
    s
}

pub fn comparison_csv(r: &ComparisonReport) -> String {
    let mut s = format!("{COMPARISON_HEADER}\n");
    for k in 0..r.d {
        writeln!(
            s,
            "{k},{},{},{},{},{}",
            fmt15(r.reference[k]),
            fmt15(r.simulated.mean[k]),
            fmt15(r.simulated.std_error[k].hypot(r.reference_std_error[k])),
            fmt15(r.z_scores[k]),
            r.verdicts[k]
        )
        .unwrap();
    }
    s
}

pub fn test_csv(r: &TwoSampleTestReport) -> String {
    let kind = match r.test_kind {
        TestKind::ChiSquare => "chi-square",
        TestKind::Ks => "ks",
    };
    let dof = r
        .degrees_of_freedom
        .map(|d| d.to_string())
        .unwrap_or_default();
    format!(
        "{TEST_HEADER}\n{kind},{},{},{},{},{dof}\n",
        fmt15(r.statistic),
        fmt15(r.p_value),
        r.sample_sizes.0,
        r.sample_sizes.1
    )
}
