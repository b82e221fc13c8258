mod common;

use common::*;
use hyperflow::curvature::{curvature_jacobian, eigenvalues, scalar_curvature};
use hyperflow::flows::{self, bounds, regime, FlowOptions, LinearSolver, Method, Regime, Termination};
use hyperflow::tetkernel::{tet_vertex_areas, TetRadii};
use hyperflow::{Error, PackingMetric, Triangulation};

fn realizable(name: &str, seed: u64) -> (Triangulation, PackingMetric, Vec<f64>) {
    let tri = fixture(name);
    let bar = metric(&mut rng(seed), tri.num_vertices(), 0.3, 2.0);
    let k = scalar_curvature(&tri, &bar).unwrap();
    (tri, bar, k)
}

#[test]
fn current_target_is_stationary_for_every_method() {
    let (tri, bar, k) = realizable("four_tet_chain.json", 11);
    for method in [Method::Ricci, Method::Calabi, Method::Newton] {
        let trace = flows::run(&tri, &FlowOptions::new(method, bar.clone(), k.clone())).unwrap();
        assert_eq!(trace.termination, Termination::Converged);
        assert_eq!(trace.samples.len(), 1);
        assert_eq!(trace.final_metric(), bar);
    }
}

#[test]
fn all_solvers_reach_the_same_metric() {
    for name in CLOSED_FIXTURES {
        let (tri, bar, k) = realizable(name, 12);
        let r0 = PackingMetric::constant(tri.num_vertices(), 1.0).unwrap();
        let limits: Vec<Vec<f64>> = [Method::Ricci, Method::Calabi, Method::Newton]
            .into_iter()
            .map(|m| {
                let trace = flows::run(&tri, &FlowOptions::new(m, r0.clone(), k.clone())).unwrap();
                assert!(trace.converged(), "{name} {m}: {}", trace.termination);
                trace.last().r.clone()
            })
            .collect();
        for l in &limits {
            assert!(max_abs_diff(l, &limits[2]) < 1e-7, "{name}: {l:?} vs {:?}", limits[2]);
            assert!(max_abs_diff(l, bar.as_slice()) < 1e-7);
        }
    }
}

#[test]
fn newton_is_independent_of_start() {
    let (tri, _, k) = realizable("mixed_four_tets.json", 13);
    let a = flows::newton_solve(&tri, &FlowOptions::new(Method::Newton, PackingMetric::new(vec![0.2, 3.0]).unwrap(), k.clone()))
        .unwrap();
    let b = flows::newton_solve(&tri, &FlowOptions::new(Method::Newton, PackingMetric::new(vec![4.0, 0.1]).unwrap(), k))
        .unwrap();
    assert!(max_abs_diff(a.as_slice(), b.as_slice()) < 1e-8);
}

#[test]
fn ricci_trace_records_monotone_energy_and_bounded_radii() {
    let (tri, bar, k) = realizable("genus_two_one_edge.json", 14);
    let r0 = PackingMetric::new(vec![bar.as_slice()[0] * 3.0]).unwrap();
    let trace = flows::ricci_flow(&tri, &FlowOptions::new(Method::Ricci, r0.clone(), k)).unwrap();
    assert!(trace.converged());
    assert!(trace.max_energy_increase <= 0.0);
    assert!(trace.max_radius <= r0.as_slice()[0] + 1e-12);
    assert!(trace.min_radius >= bar.as_slice()[0] - 1e-9);
}

#[test]
fn unreachable_target_terminates_without_converging() {
    let tri = fixture("doubled_tetrahedron.json");
    // K ≥ 4π on this triangulation, so K̄ = 3π lies outside the image.
    let target = vec![3.0 * std::f64::consts::PI; 4];
    let r0 = PackingMetric::constant(4, 1.0).unwrap();
    let mut opts = FlowOptions::new(Method::Newton, r0.clone(), target.clone());
    let trace = flows::newton_trace(&tri, &opts).unwrap();
    assert!(!trace.converged());
    match flows::newton_solve(&tri, &opts) {
        Err(Error::NotConverged { r, .. }) => assert_eq!(r.len(), 4),
        other => panic!("unexpected {other:?}"),
    }
    opts.method = Method::Ricci;
    opts.max_time = 50.0;
    let trace = flows::ricci_flow(&tri, &opts).unwrap();
    assert!(!trace.converged());
    assert!(trace.max_radius > 5.0, "radii should grow, max {}", trace.max_radius);
}

#[test]
fn iteration_and_time_limits_are_reported() {
    let (tri, _, k) = realizable("doubled_tetrahedron.json", 15);
    let r0 = PackingMetric::constant(4, 1.0).unwrap();
    let mut opts = FlowOptions::new(Method::Ricci, r0.clone(), k.clone());
    opts.max_iters = 3;
    assert_eq!(flows::ricci_flow(&tri, &opts).unwrap().termination, Termination::MaxIters);
    let mut opts = FlowOptions::new(Method::Calabi, r0.clone(), k.clone());
    opts.max_time = 1e-3;
    assert_eq!(flows::calabi_flow(&tri, &opts).unwrap().termination, Termination::MaxTime);
    let mut opts = FlowOptions::new(Method::Newton, r0, k);
    opts.max_iters = 1;
    assert_eq!(flows::newton_trace(&tri, &opts).unwrap().termination, Termination::MaxIters);
}

#[test]
fn rate_estimate_tracks_slowest_mode() {
    let (tri, bar, k) = realizable("four_tet_chain.json", 16);
    let ev = eigenvalues(&curvature_jacobian(&tri, &bar).unwrap());
    let slow = *ev.last().unwrap();
    let r0 = PackingMetric::new(bar.as_slice().iter().map(|r| r * 1.05).collect()).unwrap();
    let ricci = flows::ricci_flow(&tri, &FlowOptions::new(Method::Ricci, r0.clone(), k.clone())).unwrap();
    assert!((ricci.rate_estimate.unwrap() - slow).abs() < 0.1 * slow.abs());
    let calabi = flows::calabi_flow(&tri, &FlowOptions::new(Method::Calabi, r0, k)).unwrap();
    assert!((calabi.rate_estimate.unwrap() + slow * slow).abs() < 0.15 * slow * slow);
}

/// 128 disjoint doubled tetrahedra: exercises the parallel per-tet path and
/// the conjugate-gradient Newton solve.
#[test]
fn large_disconnected_triangulation() {
    let tets: Vec<[u64; 4]> = (0..128u64).flat_map(|c| [[4 * c, 4 * c + 1, 4 * c + 2, 4 * c + 3]; 2]).collect();
    let tri = Triangulation::simple(&tets).unwrap();
    assert_eq!((tri.num_tets(), tri.num_vertices(), tri.num_edges()), (256, 512, 768));
    let bar = metric(&mut rng(17), 512, 0.3, 2.0);
    let k = scalar_curvature(&tri, &bar).unwrap();
    let small = fixture("doubled_tetrahedron.json");
    for c in [0usize, 77, 127] {
        let piece = PackingMetric::new(bar.as_slice()[4 * c..4 * c + 4].to_vec()).unwrap();
        let expected = scalar_curvature(&small, &piece).unwrap();
        assert!(max_abs_diff(&expected, &k[4 * c..4 * c + 4]) < 1e-13);
    }
    let mut opts = FlowOptions::new(Method::Newton, PackingMetric::constant(512, 1.0).unwrap(), k);
    opts.linear_solver = LinearSolver::Auto;
    let got = flows::newton_solve(&tri, &opts).unwrap();
    assert!(max_abs_diff(got.as_slice(), bar.as_slice()) < 1e-8);
}

#[test]
fn bounds_match_vertex_triangles_and_classify_targets() {
    for (m, c) in [(0.25, 0.1), (1.0, 0.5), (4.0, 0.3)] {
        let b = bounds(m, c, -2, 5).unwrap();
        for a in tet_vertex_areas(&TetRadii::new([m; 4]).unwrap()) {
            assert!((a - b.min_area).abs() < 1e-12);
        }
        let corner = tet_vertex_areas(&TetRadii::new([c, m, m, m]).unwrap())[0];
        assert!((corner - b.min_area_small_corner).abs() < 1e-12);
        assert!(b.k_upper > b.k_lower);
    }
    assert!(matches!(bounds(1.0, 2.0, 2, 1), Err(Error::Domain(_))));

    let tri = fixture("mixed_four_tets.json");
    let b0 = bounds(2.0, 0.5, -2, 10).unwrap();
    let b1 = bounds(2.0, 0.5, 2, 6).unwrap();
    let k = [0.5 * (b0.k_lower + b0.k_upper), b1.k_upper + 0.1];
    assert_eq!(regime(&tri, &k, 2.0, 0.5).unwrap(), vec![Regime::InBand, Regime::AboveBand]);
}
