//! Hyperbolic geometry of a single hyper-ideal tetrahedron under a sphere
//! packing metric.
//!
//! Corners are indexed `0..4` (the hyper-ideal vertices `i, j, k, h`), edges by
//! the slots of [`EDGES`]. Everything is evaluated in the `t = tanh r`
//! parameterization, where every intermediate stays bounded: with
//! `c = cosh r` one has `cosh(r_i + r_j + r_k) = λ_{ijk} c_i c_j c_k` and
//! `1 / c² = 1 - t²`, so the hyperbolic-function closed forms reduce to
//! rational expressions in `t` and `sqrt(Q₂)`.
//!
//! The canonical forms are written once for a generic labelling `(p, q, a, b)`
//! of the corners; every other entry is obtained by relabelling.

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::triangulation::EDGES;

/// Radii above this saturate `tanh` and degrade derivative information.
pub const LARGE_RADIUS: f64 = 20.0;

/// Radii of the four corners of one tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetRadii([f64; 4]);

impl TetRadii {
    pub fn new(r: [f64; 4]) -> Result<Self> {
        for (index, &value) in r.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveRadius { index, value });
            }
        }
        if r.iter().any(|&x| x > LARGE_RADIUS) {
            warn!("tetrahedron radius above {LARGE_RADIUS}: {r:?}; derivatives lose accuracy");
        }
        Ok(TetRadii(r))
    }

    /// Caller guarantees positivity (already checked on the global metric).
    pub(crate) fn from_checked(r: [f64; 4]) -> Self {
        debug_assert!(r.iter().all(|&x| x > 0.0));
        TetRadii(r)
    }

    pub fn radii(&self) -> [f64; 4] {
        self.0
    }

    pub fn tanh(&self) -> [f64; 4] {
        self.0.map(f64::tanh)
    }
}

/// Everything derived from the radii of one tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TetGeometry {
    /// `tanh r` per corner.
    pub t: [f64; 4],
    /// `λ_S = Σ_{pairs in S} t_p t_q + 1` for the triple `S` omitting corner `v`,
    /// stored at index `v`.
    pub lambda: [f64; 4],
    pub q2: f64,
    /// Dihedral angle per edge slot.
    pub beta: [f64; 6],
    /// Area of the vertex triangle at each corner.
    pub area: [f64; 4],
    /// `jac[a][b] = ∂Area(Δ_a)/∂r_b`.
    pub jac: [[f64; 4]; 4],
}

/// Corner labelling of edge slot `e`: `(p, q)` the edge, `(a, b)` the opposite edge.
#[inline]
fn labelling(e: usize) -> (usize, usize, usize, usize) {
    let (p, q) = EDGES[e];
    let (a, b) = EDGES[5 - e];
    (p, q, a, b)
}

#[inline]
fn lambdas(t: &[f64; 4]) -> [f64; 4] {
    let tri = |a: usize, b: usize, c: usize| t[a] * t[b] + t[a] * t[c] + t[b] * t[c] + 1.0;
    [tri(1, 2, 3), tri(0, 2, 3), tri(0, 1, 3), tri(0, 1, 2)]
}

#[inline]
fn q2_of(t: &[f64; 4]) -> f64 {
    let sum: f64 = t.iter().sum();
    let sq: f64 = t.iter().map(|x| x * x).sum();
    let q2 = sum * sum - 2.0 * sq + 4.0;
    // Bounded below by (Σt - 1)² + 3 on [0, 1)⁴.
    assert!(q2 > 0.0, "non-degeneracy quantity Q2 = {q2} is not positive for t = {t:?}");
    q2
}

/// `cos β_{pq,ab}` numerator `2 - t_p² - t_q² + (t_p + t_q)(t_a + t_b)`.
#[inline]
fn cos_numerator(t: &[f64; 4], p: usize, q: usize, a: usize, b: usize) -> f64 {
    2.0 - t[p] * t[p] - t[q] * t[q] + (t[p] + t[q]) * (t[a] + t[b])
}

/// Polynomial governing `∂β_{pq,ab}/∂r_p`, written for `(i, j, k, h) = (p, q, a, b)`.
#[inline]
fn same_edge_poly(ti: f64, tj: f64, tk: f64, th: f64) -> f64 {
    let (ti2, tj2) = (ti * ti, tj * tj);
    2.0 * ti2 * tj2 + tj2 * tk * tk + tj2 * th * th
        + 2.0 * ti2 * tj * tk
        + 2.0 * ti2 * tj * th
        + 2.0 * ti2 * tk * th
        + ti * tj2 * tk
        + ti * tj2 * th
        + 4.0 * ti * tj * tk * th
        - 2.0 * ti * tj2 * tj
        - tj2 * tj * tk
        - tj2 * tj * th
        - 2.0 * tj2
        - tk * tk
        - th * th
        + 6.0 * ti * tj
        + 3.0 * ti * tk
        + 3.0 * ti * th
        + 3.0 * tj * tk
        + 3.0 * tj * th
        + 2.0 * tk * th
        + 4.0
}

/// Off-diagonal area-derivative polynomial for the pair `(p, q)` with the
/// remaining corners `(a, b)`.
#[inline]
fn off_diagonal_poly(t: &[f64; 4], p: usize, q: usize, a: usize, b: usize) -> f64 {
    let d = t[a] - t[b];
    2.0 - d * d + t[p] * (t[q] + t[a] + t[b]) + t[q] * (t[p] + t[a] + t[b])
}

/// `∂β_{pq,ab}/∂r_p`.
#[inline]
fn d_beta_same(t: &[f64; 4], lam: &[f64; 4], sqrt_q2: f64, p: usize, q: usize, a: usize, b: usize) -> f64 {
    (1.0 - t[p] * t[p]) * same_edge_poly(t[p], t[q], t[a], t[b]) / (2.0 * sqrt_q2 * lam[b] * lam[a])
}

/// `∂β_{pq,ab}/∂r_a`.
#[inline]
fn d_beta_opposite(t: &[f64; 4], lam: &[f64; 4], sqrt_q2: f64, p: usize, q: usize, a: usize, b: usize) -> f64 {
    let s = t[p] + t[q];
    -(1.0 - t[a] * t[a]) * s * (s + t[a] - t[b]) / (2.0 * sqrt_q2 * lam[b])
}

pub fn tet_q2(r: &TetRadii) -> f64 {
    q2_of(&r.tanh())
}

/// Cosine of each dihedral angle.
pub fn tet_cos_dihedral(r: &TetRadii) -> [f64; 6] {
    let t = r.tanh();
    let lam = lambdas(&t);
    std::array::from_fn(|e| {
        let (p, q, a, b) = labelling(e);
        cos_numerator(&t, p, q, a, b) / (2.0 * (lam[b] * lam[a]).sqrt())
    })
}

/// Sine of each dihedral angle, from its own closed form.
pub fn tet_sin_dihedral(r: &TetRadii) -> [f64; 6] {
    let t = r.tanh();
    let lam = lambdas(&t);
    let sqrt_q2 = q2_of(&t).sqrt();
    std::array::from_fn(|e| {
        let (p, q, a, b) = labelling(e);
        (t[p] + t[q]) * sqrt_q2 / (2.0 * (lam[b] * lam[a]).sqrt())
    })
}

fn angles_from(t: &[f64; 4], lam: &[f64; 4], sqrt_q2: f64) -> [f64; 6] {
    std::array::from_fn(|e| {
        let (p, q, a, b) = labelling(e);
        let denom = 2.0 * (lam[b] * lam[a]).sqrt();
        let cos = cos_numerator(t, p, q, a, b) / denom;
        let sin = (t[p] + t[q]) * sqrt_q2 / denom;
        sin.atan2(cos)
    })
}

fn areas_from(beta: &[f64; 6]) -> [f64; 4] {
    std::array::from_fn(|v| {
        let incident: f64 = EDGES
            .iter()
            .zip(beta)
            .filter(|((p, q), _)| *p == v || *q == v)
            .map(|(_, b)| b)
            .sum();
        std::f64::consts::PI - incident
    })
}

/// Dihedral angle per edge slot, in `(0, π)`.
pub fn tet_dihedral_angles(r: &TetRadii) -> [f64; 6] {
    let t = r.tanh();
    let lam = lambdas(&t);
    angles_from(&t, &lam, q2_of(&t).sqrt())
}

/// Vertex-triangle areas: `π` minus the three dihedral angles meeting each corner.
pub fn tet_vertex_areas(r: &TetRadii) -> [f64; 4] {
    areas_from(&tet_dihedral_angles(r))
}

/// `out[e][v] = ∂β_e/∂r_v` for every edge slot `e` and corner `v`.
pub fn tet_dihedral_partials(r: &TetRadii) -> [[f64; 4]; 6] {
    let t = r.tanh();
    let lam = lambdas(&t);
    let sqrt_q2 = q2_of(&t).sqrt();
    std::array::from_fn(|e| {
        let (p, q, a, b) = labelling(e);
        let mut row = [0.0; 4];
        row[p] = d_beta_same(&t, &lam, sqrt_q2, p, q, a, b);
        row[q] = d_beta_same(&t, &lam, sqrt_q2, q, p, a, b);
        row[a] = d_beta_opposite(&t, &lam, sqrt_q2, p, q, a, b);
        row[b] = d_beta_opposite(&t, &lam, sqrt_q2, p, q, b, a);
        row
    })
}

fn jacobian_from(t: &[f64; 4], lam: &[f64; 4], sqrt_q2: f64) -> [[f64; 4]; 4] {
    let mut jac = [[0.0; 4]; 4];
    for (e, &(p, q)) in EDGES.iter().enumerate() {
        let (a, b) = EDGES[5 - e];
        let value = -(1.0 - t[p] * t[p]) * (1.0 - t[q] * t[q]) * off_diagonal_poly(t, p, q, a, b)
            / (sqrt_q2 * lam[b] * lam[a]);
        jac[p][q] = value;
        jac[q][p] = value;
    }
    for p in 0..4 {
        // Remaining corners in ascending order play the roles (j, k, h).
        let others: Vec<usize> = (0..4).filter(|&v| v != p).collect();
        let (j, k, h) = (others[0], others[1], others[2]);
        let lam_ijk = lam[h];
        let lam_ijh = lam[k];
        let lam_ikh = lam[j];
        let hj = same_edge_poly(t[p], t[j], t[k], t[h]);
        let hk = same_edge_poly(t[p], t[k], t[j], t[h]);
        let hh = same_edge_poly(t[p], t[h], t[j], t[k]);
        jac[p][p] = -(1.0 - t[p] * t[p]) * (hj * lam_ikh + hk * lam_ijh + hh * lam_ijk)
            / (2.0 * sqrt_q2 * lam_ijk * lam_ijh * lam_ikh);
    }
    jac
}

/// `jac[a][b] = ∂Area(Δ_a)/∂r_b`; exactly symmetric, negative, and strictly
/// diagonally dominant.
pub fn tet_area_jacobian(r: &TetRadii) -> [[f64; 4]; 4] {
    let t = r.tanh();
    let lam = lambdas(&t);
    jacobian_from(&t, &lam, q2_of(&t).sqrt())
}

/// All per-tetrahedron quantities in one pass.
pub fn tet_geometry(r: &TetRadii) -> TetGeometry {
    let t = r.tanh();
    let lambda = lambdas(&t);
    let q2 = q2_of(&t);
    let sqrt_q2 = q2.sqrt();
    let beta = angles_from(&t, &lambda, sqrt_q2);
    let area = areas_from(&beta);
    let jac = jacobian_from(&t, &lambda, sqrt_q2);
    TetGeometry { t, lambda, q2, beta, area, jac }
}

/// Per-tetrahedron geometry without the Jacobian.
pub(crate) fn tet_angles_and_areas(r: &TetRadii) -> ([f64; 6], [f64; 4]) {
    let beta = tet_dihedral_angles(r);
    (beta, areas_from(&beta))
}

/// `-J[a][a] - Σ_{b≠a} |J[a][b]|` per row; positive means strict dominance.
pub fn row_dominance_margin(jac: &[[f64; 4]; 4]) -> [f64; 4] {
    std::array::from_fn(|a| {
        let off: f64 = (0..4).filter(|&b| b != a).map(|b| jac[a][b].abs()).sum();
        -jac[a][a] - off
    })
}
