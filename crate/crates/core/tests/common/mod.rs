//! Shared oracles and helpers for the integration tests. The oracles here
//! are computed from hyperbolic trigonometry in terms of the edge lengths
//! `l_ij = r_i + r_j`, independently of the library's `tanh` closed forms.
#![allow(dead_code)]

use std::path::PathBuf;

use hyperflow::triangulation::EDGES;
use hyperflow::{PackingMetric, Triangulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FD_REL: f64 = 1e-6;
pub const FD_ABS: f64 = 1e-9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> Triangulation {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    Triangulation::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every closed fixture shipped with the repository.
pub const CLOSED_FIXTURES: [&str; 5] = [
    "doubled_tetrahedron.json",
    "doubled_tetrahedron_explicit.json",
    "four_tet_chain.json",
    "genus_two_one_edge.json",
    "mixed_four_tets.json",
];

pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

pub fn radii4(rng: &mut impl Rng, lo: f64, hi: f64) -> [f64; 4] {
    [0; 4].map(|_| rng.gen_range(lo..hi))
}

pub fn metric(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> PackingMetric {
    PackingMetric::new((0..n).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
}

/// `cosh x - 1` for the edge of vertex triangle `Δ_i` lying in face `{i,j,k}`,
/// from the right-angled hexagon cosine law. Uses
/// `cosh a cosh b - sinh a sinh b = cosh(a - b)` to avoid cancellation.
fn vertex_edge_cosh_m1(r: &[f64; 4], i: usize, j: usize, k: usize) -> f64 {
    let l = |a: usize, b: usize| r[a] + r[b];
    ((l(i, j) - l(i, k)).cosh() + l(j, k).cosh()) / (l(i, j).sinh() * l(i, k).sinh())
}

/// Dihedral cosine at edge `(p, q)` as the angle at the corresponding corner of
/// the vertex triangle `Δ_p`, via the hyperbolic law of cosines.
pub fn cosh_law_cos(r: &[f64; 4], p: usize, q: usize) -> f64 {
    let (a, b) = other_two(p, q);
    let u_qa = vertex_edge_cosh_m1(r, p, q, a);
    let u_qb = vertex_edge_cosh_m1(r, p, q, b);
    let u_ab = vertex_edge_cosh_m1(r, p, a, b);
    // cosh A cosh B - cosh C with cosh = 1 + u.
    let num = u_qa + u_qb + u_qa * u_qb - u_ab;
    let den = (u_qa * (u_qa + 2.0)).sqrt() * (u_qb * (u_qb + 2.0)).sqrt();
    num / den
}

pub fn cosh_law_angles(r: &[f64; 4]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (e, &(p, q)) in EDGES.iter().enumerate() {
        out[e] = cosh_law_cos(r, p, q).clamp(-1.0, 1.0).acos();
    }
    out
}

/// Vertex-triangle areas `π - Σ angles` from the cosh-law oracle.
pub fn cosh_law_areas(r: &[f64; 4]) -> [f64; 4] {
    let beta = cosh_law_angles(r);
    let mut area = [std::f64::consts::PI; 4];
    for (e, &(p, q)) in EDGES.iter().enumerate() {
        area[p] -= beta[e];
        area[q] -= beta[e];
    }
    area
}

fn other_two(p: usize, q: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&v| v != p && v != q);
    (rest.next().unwrap(), rest.next().unwrap())
}

pub const FD_STEP: f64 = 1e-5;

/// Central difference of `f` in coordinate `i` of `x`.
pub fn central_diff<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], i: usize) -> f64 {
    let h = FD_STEP;
    let mut plus = x.to_vec();
    let mut minus = x.to_vec();
    plus[i] += h;
    minus[i] -= h;
    (f(&plus) - f(&minus)) / (2.0 * h)
}

pub fn fd_close(analytic: f64, fd: f64) -> bool {
    (analytic - fd).abs() <= FD_REL * analytic.abs().max(fd.abs()) + FD_ABS
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
