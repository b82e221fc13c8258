mod common;

use std::f64::consts::PI;

use common::*;
use hyperflow::tetkernel::*;
use hyperflow::triangulation::{edge_slot, EDGES};
use proptest::prelude::*;

fn radius() -> impl Strategy<Value = f64> {
    (-2.5f64..1.2).prop_map(|x| 10f64.powf(x))
}

fn radii() -> impl Strategy<Value = [f64; 4]> {
    [radius(), radius(), radius(), radius()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn angles_match_cosh_law(r in radii()) {
        let beta = tet_dihedral_angles(&TetRadii::new(r).unwrap());
        let oracle = cosh_law_angles(&r);
        for e in 0..6 {
            // acos amplifies cosine errors near 0 and π; compare cosines there.
            let cos_gap = (beta[e].cos() - oracle[e].cos()).abs();
            prop_assert!(cos_gap < 1e-10, "edge {} at {:?}: {} vs {}", e, r, beta[e], oracle[e]);
            prop_assert!(beta[e] > 0.0 && beta[e] < PI);
        }
    }

    #[test]
    fn areas_are_positive_and_sum_consistently(r in radii()) {
        let k = TetRadii::new(r).unwrap();
        let beta = tet_dihedral_angles(&k);
        let area = tet_vertex_areas(&k);
        let beta_sum: f64 = beta.iter().sum();
        prop_assert!(area.iter().all(|&a| a > 0.0));
        prop_assert!((area.iter().sum::<f64>() - (4.0 * PI - 2.0 * beta_sum)).abs() < 1e-12);
    }

    #[test]
    fn relabelling_corners_relabels_angles(r in radii(), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let permuted = [r[perm[0]], r[perm[1]], r[perm[2]], r[perm[3]]];
        let a = tet_dihedral_angles(&TetRadii::new(r).unwrap());
        let b = tet_dihedral_angles(&TetRadii::new(permuted).unwrap());
        for (e, &(p, q)) in EDGES.iter().enumerate() {
            prop_assert!((b[e] - a[edge_slot(perm[p], perm[q])]).abs() < 1e-13);
        }
    }

    #[test]
    fn partials_match_central_differences(r in [0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0]) {
        let k = TetRadii::new(r).unwrap();
        let d = tet_dihedral_partials(&k);
        let jac = tet_area_jacobian(&k);
        let angles = |x: &[f64]| tet_dihedral_angles(&TetRadii::new([x[0], x[1], x[2], x[3]]).unwrap());
        let areas = |x: &[f64]| tet_vertex_areas(&TetRadii::new([x[0], x[1], x[2], x[3]]).unwrap());
        for v in 0..4 {
            for e in 0..6 {
                let fd = central_diff(|x| angles(x)[e], &r, v);
                prop_assert!(fd_close(d[e][v], fd), "dβ{}/dr{}: {} vs {}", e, v, d[e][v], fd);
            }
            for a in 0..4 {
                let fd = central_diff(|x| areas(x)[a], &r, v);
                prop_assert!(fd_close(jac[a][v], fd), "dA{}/dr{}: {} vs {}", a, v, jac[a][v], fd);
            }
        }
    }

    #[test]
    fn jacobian_is_symmetric_negative_and_dominant(r in radii()) {
        let jac = tet_area_jacobian(&TetRadii::new(r).unwrap());
        for a in 0..4 {
            for b in 0..4 {
                prop_assert_eq!(jac[a][b], jac[b][a]);
                prop_assert!(jac[a][b] < 0.0);
            }
        }
        prop_assert!(row_dominance_margin(&jac).iter().all(|&m| m > 0.0));
    }

    #[test]
    fn geometry_bundle_is_consistent(r in radii()) {
        let k = TetRadii::new(r).unwrap();
        let g = tet_geometry(&k);
        prop_assert_eq!(g.beta, tet_dihedral_angles(&k));
        prop_assert_eq!(g.area, tet_vertex_areas(&k));
        prop_assert_eq!(g.jac, tet_area_jacobian(&k));
        prop_assert_eq!(g.q2, tet_q2(&k));
    }
}

#[test]
fn rejects_bad_radii() {
    assert!(TetRadii::new([1.0, 0.0, 1.0, 1.0]).is_err());
    assert!(TetRadii::new([1.0, f64::NAN, 1.0, 1.0]).is_err());
    assert!(TetRadii::new([1.0, 1.0, f64::INFINITY, 1.0]).is_err());
}

#[test]
fn equal_radii_closed_form() {
    for m in [0.01f64, 0.5, 2.0, 8.0] {
        let t = m.tanh();
        let expected = ((1.0 + t * t) / (1.0 + 3.0 * t * t)).acos();
        for b in tet_dihedral_angles(&TetRadii::new([m; 4]).unwrap()) {
            assert!((b - expected).abs() < 1e-13);
        }
    }
}
