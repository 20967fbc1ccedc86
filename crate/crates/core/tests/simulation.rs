use svoronoi::harness::{
    compare_exact_vs_mc, compare_with_reference, estimate_tessellation, estimate_typical_cell,
    test_beta_prime_identity, test_beta_prime_identity_with_beta, verify_counting_identity,
    ComparisonReport, SimulationReport, DEFAULT_Z_THRESHOLD,
};
use svoronoi::hull::DEFAULT_TOLERANCE;
use svoronoi::samplers::voronoi_dual_points;
use svoronoi::voronoi::{
    sample_beta_prime_hull, sample_tessellation_fvector, sample_tessellation_s2,
    sample_typical_cell,
};
use svoronoi::{build_hull, f_vector, QuadratureSpec, RngStream};

#[test]
fn simulated_hulls_are_well_formed() {
    for d in 2..=5 {
        for i in 0..200 {
            let cloud =
                voronoi_dual_points(d + 1 + (i % 12) as usize, d, &mut RngStream::new(1, i))
                    .unwrap();
            let hull = build_hull(&cloud, DEFAULT_TOLERANCE).unwrap();
            let f = f_vector(&hull);
            assert!(f.satisfies_euler(), "{f:?}");
            assert!(hull.ridges_closed());
            assert!(
                hull.max_violation(&cloud)
                    <= 1e-9
                        * (1.0
                            + hull
                                .facets()
                                .iter()
                                .map(|f| f.offset.abs())
                                .fold(0.0, f64::max))
            );
        }
    }
}

#[test]
fn typical_cell_is_the_reversed_hull() {
    for i in 0..300 {
        let s = sample_typical_cell(3, 9, &mut RngStream::new(2, i)).unwrap();
        assert_eq!(s.fvec, s.hull_fvec.reversed());
        // simple 3-polytope
        assert_eq!(2 * s.fvec[1], 3 * s.fvec[0]);
        assert_eq!(s.fvec.alternating_sum(), 2);
    }
}

#[test]
fn planar_cells_are_polygons() {
    for i in 0..200 {
        let s = sample_typical_cell(2, 6, &mut RngStream::new(3, i)).unwrap();
        assert_eq!(s.fvec[0], s.fvec[1]);
        let h = sample_beta_prime_hull(2, 6, 2.0, &mut RngStream::new(4, i)).unwrap();
        assert_eq!(h[0], h[1]);
    }
}

#[test]
fn planar_tessellations_are_combinatorially_fixed() {
    for cells in 4..=50 {
        for i in 0..5 {
            let t = sample_tessellation_fvector(2, cells, &mut RngStream::new(cells as u64, i))
                .unwrap();
            let c = cells as u64;
            assert_eq!(t.fvec.0, vec![2 * (c - 2), 3 * (c - 2)]);
        }
    }
    let t = sample_tessellation_s2(4, &mut RngStream::new(0, 0)).unwrap();
    assert_eq!(t.vertices.len(), 4);
    assert_eq!(t.edges.len(), 6);
}

#[test]
fn planar_mean_matches_miles() {
    let r = estimate_typical_cell(2, 9, 20_000, 42).unwrap();
    let z = (r.mean[0] - 4.8) / r.std_error[0];
    assert!(z.abs() <= 4.0, "z = {z}");
    assert_eq!(r.mean[0], r.mean[1]);
}

#[test]
fn reports_are_deterministic_and_thread_independent() {
    let a = estimate_typical_cell(3, 6, 500, 9).unwrap();
    let b = estimate_typical_cell(3, 6, 500, 9).unwrap();
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let c = pool
        .install(|| estimate_typical_cell(3, 6, 500, 9))
        .unwrap();
    assert_eq!(a, c);
    let counts: u64 = a.histogram.iter().map(|e| e.count).sum();
    assert_eq!(counts, a.replications);
    for k in 0..3 {
        assert!(a.ci_low[k] <= a.mean[k] && a.mean[k] <= a.ci_high[k]);
    }
}

#[test]
fn reports_round_trip_through_json() {
    let sim = estimate_tessellation(3, 8, 200, 1).unwrap();
    let json = serde_json::to_string(&sim).unwrap();
    let back: SimulationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(sim, back);

    let cmp = compare_exact_vs_mc(
        3,
        5,
        2_000,
        4,
        &QuadratureSpec::default(),
        DEFAULT_Z_THRESHOLD,
    )
    .unwrap();
    let json = serde_json::to_string(&cmp).unwrap();
    let back: ComparisonReport = serde_json::from_str(&json).unwrap();
    assert_eq!(cmp, back);
}

#[test]
fn exact_and_simulated_agree_d3() {
    let r = compare_exact_vs_mc(
        3,
        5,
        20_000,
        11,
        &QuadratureSpec::default(),
        DEFAULT_Z_THRESHOLD,
    )
    .unwrap();
    assert!(r.passed, "{:?}", r.z_scores);
}

#[test]
fn injected_mismatch_fails() {
    let sim = estimate_typical_cell(3, 5, 5_000, 11).unwrap();
    let mut wrong = sim.mean.clone();
    wrong[0] += 0.5;
    let r = compare_with_reference(sim, wrong, vec![0.0; 3], DEFAULT_Z_THRESHOLD);
    assert!(!r.passed);
    assert!(!r.verdicts[0]);
}

#[test]
fn beta_prime_identity_small() {
    let r = test_beta_prime_identity(3, 7, 3_000, 21).unwrap();
    assert!(r.p_value > 1e-3, "{r:?}");
    assert!((0.0..=1.0).contains(&r.p_value));
    // a mismatched beta' parameter is only a sensitivity check
    let control = test_beta_prime_identity_with_beta(3, 7, 3_000, 21, 4.0).unwrap();
    assert!((0.0..=1.0).contains(&control.p_value));
}

#[test]
fn counting_identity_d3_small() {
    let r = verify_counting_identity(3, 12, 2_000, 6, DEFAULT_Z_THRESHOLD).unwrap();
    assert!(r.passed, "{:?}", r.z_scores);
    assert!(verify_counting_identity(3, 4, 200, 6, DEFAULT_Z_THRESHOLD).is_err());
}
