mod common;

use common::*;
use hyperflow::triangulation::{face_corners, Triangulation, EDGES};
use hyperflow::Error;
use proptest::prelude::*;

fn check_structure(tri: &Triangulation) {
    // Gluing is a fixed-point-free involution with inverse corner maps.
    for t in 0..tri.num_tets() {
        for f in 0..4 {
            let p = tri.partner(t, f);
            assert!((p.tet, p.face) != (t, f));
            let back = tri.partner(p.tet, p.face);
            assert_eq!((back.tet, back.face), (t, f));
            for c in 0..4 {
                assert_eq!(back.corners[p.corners[c]], c);
            }
            assert_eq!(p.corners[f], p.face);
            for c in face_corners(f) {
                assert_eq!(tri.tets()[t].corners[c], tri.tets()[p.tet].corners[p.corners[c]]);
            }
        }
    }
    // Edge classes partition the tet edges, consistently with the per-tet table.
    let mut seen = vec![[false; 6]; tri.num_tets()];
    for (id, class) in tri.edge_classes().iter().enumerate() {
        for &(t, e) in &class.members {
            assert!(!seen[t][e]);
            seen[t][e] = true;
            assert_eq!(tri.tet_edge_classes(t)[e], id);
            let (p, q) = EDGES[e];
            let mut ends = [tri.tets()[t].corners[p], tri.tets()[t].corners[q]];
            let mut want = class.ends;
            ends.sort();
            want.sort();
            assert_eq!(ends, want);
        }
    }
    assert!(seen.iter().all(|row| row.iter().all(|&s| s)));
    // Degrees count corners, links are closed surfaces.
    let total: usize = (0..tri.num_vertices()).map(|v| tri.degree(v)).sum();
    assert_eq!(total, 4 * tri.num_tets());
    for link in tri.links() {
        assert_eq!(link.faces, link.degree);
        assert_eq!(3 * link.faces, 2 * link.edges);
        assert_eq!(link.euler_char, link.vertices as i64 - link.edges as i64 + link.faces as i64);
        assert!(link.euler_char <= 2 && link.euler_char % 2 == 0);
    }
    let incident: usize = (0..tri.num_vertices()).map(|v| tri.incident_edges(v).len()).sum();
    assert_eq!(incident, 2 * tri.num_edges());
}

#[test]
fn fixtures_are_consistent() {
    for name in CLOSED_FIXTURES {
        check_structure(&fixture(name));
    }
}

#[test]
fn fixture_counts() {
    let cases: [(&str, usize, usize, usize, &[(i64, usize)]); 4] = [
        ("doubled_tetrahedron.json", 4, 2, 6, &[(2, 2); 4]),
        ("four_tet_chain.json", 4, 4, 8, &[(2, 4); 4]),
        ("genus_two_one_edge.json", 1, 2, 1, &[(-2, 8)]),
        ("mixed_four_tets.json", 2, 4, 4, &[(-2, 10), (2, 6)]),
    ];
    for (name, n, tets, edges, links) in cases {
        let tri = fixture(name);
        assert_eq!((tri.num_vertices(), tri.num_tets(), tri.num_edges()), (n, tets, edges), "{name}");
        let got: Vec<(i64, usize)> = tri.links().iter().map(|l| (l.euler_char, l.degree)).collect();
        assert_eq!(got, links, "{name}");
    }
}

#[test]
fn explicit_and_simple_modes_agree() {
    assert_eq!(fixture("doubled_tetrahedron.json"), fixture("doubled_tetrahedron_explicit.json"));
}

#[test]
fn unglued_fixture_is_rejected() {
    let text = std::fs::read_to_string(fixture_path("unglued_single.json")).unwrap();
    assert!(matches!(Triangulation::parse(&text), Err(Error::UngluedFace { tet: 0, .. })));
}

#[test]
fn self_glued_face_is_rejected() {
    let doc = r#"{"mode":"explicit","tets":[[0,1,2,3],[0,1,2,3]],"gluings":[
        {"a":[0,0],"b":[0,0],"map":[0,1,2]},
        {"a":[0,1],"b":[1,1],"map":[0,1,2]},
        {"a":[0,2],"b":[1,2],"map":[0,1,2]},
        {"a":[0,3],"b":[1,3],"map":[0,1,2]}]}"#;
    assert!(Triangulation::parse(doc).is_err());
}

#[test]
fn bad_map_is_rejected() {
    let doc = r#"{"mode":"explicit","tets":[[0,1,2,3],[0,1,2,3]],"gluings":[
        {"a":[0,0],"b":[1,0],"map":[0,0,2]},
        {"a":[0,1],"b":[1,1],"map":[0,1,2]},
        {"a":[0,2],"b":[1,2],"map":[0,1,2]},
        {"a":[0,3],"b":[1,3],"map":[0,1,2]}]}"#;
    assert!(matches!(Triangulation::parse(doc), Err(Error::BadGluing { index: 0, .. })));
}

#[test]
fn empty_and_garbage_inputs_fail() {
    assert!(matches!(Triangulation::parse(""), Err(Error::Parse(_))));
    assert!(matches!(Triangulation::parse("{\"mode\":\"simple\",\"tets\":[]}"), Err(Error::Empty)));
    assert!(matches!(Triangulation::parse("{\"mode\":\"simple\",\"tets\":[[0,1,2]]}"), Err(Error::Parse(_))));
}

proptest! {
    /// Relabelling vertex classes by any injective map gives the same
    /// combinatorics up to the dense renumbering.
    #[test]
    fn relabelling_preserves_combinatorics(
        labels in proptest::collection::btree_set(0u64..1_000_000, 4),
        perm in Just([0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        let labels: Vec<u64> = labels.into_iter().collect();
        let relabel = |c: usize| labels[perm[c]];
        let tets = [[0usize, 1, 2, 3].map(relabel), [0usize, 1, 2, 3].map(relabel)];
        let tri = Triangulation::simple(&tets).unwrap();
        check_structure(&tri);
        prop_assert_eq!(tri.num_edges(), 6);
        let mut sorted = labels.clone();
        sorted.sort();
        prop_assert_eq!(tri.labels(), sorted.as_slice());
    }
}
