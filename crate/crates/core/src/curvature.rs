//! Global curvature quantities over a triangulation.
//!
//! Per-edge Ricci curvature `K_e = 2π - Σ β`, vertex scalar curvature in both
//! of its forms (sum over incident edges, and `2πχ(Σ_i) + Area(Σ_i)`), the
//! Jacobian `Λ = ∂K/∂r`, and the convex curvature energy obtained by
//! integrating `-(K - K̄)·dr`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use log::warn;
use nalgebra::{Cholesky, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;
use crate::sparse::SymmetricSparse;
use crate::tetkernel::{self, TetGeometry, TetRadii, LARGE_RADIUS};
use crate::triangulation::Triangulation;

/// Below this many tetrahedra the per-tet work runs on the calling thread.
const PARALLEL_MIN_TETS: usize = 256;

/// Positive radius per vertex class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingMetric(Vec<f64>);

impl PackingMetric {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        for (index, &value) in r.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveRadius { index, value });
            }
        }
        if let Some(big) = r.iter().copied().find(|&x| x > LARGE_RADIUS) {
            warn!("radius {big} exceeds {LARGE_RADIUS}; tanh saturates and derivatives degrade");
        }
        Ok(PackingMetric(r))
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Curvature data at one metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureState {
    /// Scalar curvature per vertex class (edge-sum form).
    pub k: Vec<f64>,
    /// Scalar curvature per vertex class (`2πχ + Area` form).
    pub k_gauss_bonnet: Vec<f64>,
    /// Ricci curvature per edge class.
    pub edge_k: Vec<f64>,
    /// `Λ = ∂K/∂r`.
    pub lambda: SymmetricSparse,
    /// Total vertex-triangle area of each link.
    pub link_area: Vec<f64>,
}

impl CurvatureState {
    /// `max_i |K_i - K_i^{GB}|`.
    pub fn form_discrepancy(&self) -> f64 {
        self.k
            .iter()
            .zip(&self.k_gauss_bonnet)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_len(tri: &Triangulation, n: usize) -> Result<()> {
    if n != tri.num_vertices() {
        return Err(Error::DimensionMismatch { expected: tri.num_vertices(), got: n });
    }
    Ok(())
}

fn tet_radii(tri: &Triangulation, r: &[f64], tet: usize) -> TetRadii {
    TetRadii::from_checked(tri.tets()[tet].corners.map(|v| r[v]))
}

pub(crate) fn map_tets<T, F>(tri: &Triangulation, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if tri.num_tets() >= PARALLEL_MIN_TETS {
        (0..tri.num_tets()).into_par_iter().map(f).collect()
    } else {
        (0..tri.num_tets()).map(f).collect()
    }
}

fn edge_ricci_from(tri: &Triangulation, beta: &[[f64; 6]]) -> Vec<f64> {
    tri.edge_classes()
        .iter()
        .map(|class| 2.0 * PI - class.members.iter().map(|&(t, e)| beta[t][e]).sum::<f64>())
        .collect()
}

fn vertex_sums_from(tri: &Triangulation, edge_k: &[f64]) -> Vec<f64> {
    (0..tri.num_vertices())
        .map(|v| tri.incident_edges(v).iter().map(|&e| edge_k[e]).sum())
        .collect()
}

fn link_areas_from(tri: &Triangulation, area: &[[f64; 4]]) -> Vec<f64> {
    (0..tri.num_vertices())
        .map(|v| tri.corners_at(v).iter().map(|&(t, p)| area[t][p]).sum())
        .collect()
}

fn gauss_bonnet_from(tri: &Triangulation, link_area: &[f64]) -> Vec<f64> {
    link_area
        .iter()
        .enumerate()
        .map(|(v, a)| 2.0 * PI * tri.euler_char(v) as f64 + a)
        .collect()
}

fn jacobian_from(tri: &Triangulation, geoms: &[TetGeometry]) -> SymmetricSparse {
    let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (tet, g) in tri.tets().iter().zip(geoms) {
        for p in 0..4 {
            for q in 0..4 {
                *entries.entry((tet.corners[p], tet.corners[q])).or_insert(0.0) += g.jac[p][q];
            }
        }
    }
    SymmetricSparse::from_entries(tri.num_vertices(), &entries)
}

/// Edge-sum scalar curvature at an unchecked positive metric.
pub(crate) fn scalar_curvature_raw(tri: &Triangulation, r: &[f64]) -> Vec<f64> {
    let beta = map_tets(tri, |t| tetkernel::tet_dihedral_angles(&tet_radii(tri, r, t)));
    vertex_sums_from(tri, &edge_ricci_from(tri, &beta))
}

/// Edge-sum scalar curvature and `Λ` at an unchecked positive metric.
pub(crate) fn curvature_and_jacobian_raw(tri: &Triangulation, r: &[f64]) -> (Vec<f64>, SymmetricSparse) {
    let geoms = map_tets(tri, |t| tetkernel::tet_geometry(&tet_radii(tri, r, t)));
    let beta: Vec<[f64; 6]> = geoms.iter().map(|g| g.beta).collect();
    let k = vertex_sums_from(tri, &edge_ricci_from(tri, &beta));
    (k, jacobian_from(tri, &geoms))
}

/// `-∫ (K - K̄)·dr` along the straight segment `from → to`.
pub(crate) fn segment_energy_raw(tri: &Triangulation, from: &[f64], to: &[f64], k_target: &[f64]) -> f64 {
    let dr: Vec<f64> = to.iter().zip(from).map(|(b, a)| b - a).collect();
    let integrand = |s: f64| {
        let point: Vec<f64> = from.iter().zip(&dr).map(|(a, d)| a + s * d).collect();
        let k = scalar_curvature_raw(tri, &point);
        k.iter().zip(k_target).zip(&dr).fold((0.0, 0.0), |(v, m), ((k, kb), d)| {
            (v + (k - kb) * d, m + (k.abs() + kb.abs()) * d.abs())
        })
    };
    -integrate_adaptive(&integrand, 0.0, 1.0)
}

/// Ricci curvature `K_e = 2π - Σ β` for every edge class.
pub fn edge_ricci(tri: &Triangulation, r: &PackingMetric) -> Result<Vec<f64>> {
    check_len(tri, r.len())?;
    let (beta, _): (Vec<[f64; 6]>, Vec<[f64; 4]>) =
        map_tets(tri, |t| tetkernel::tet_angles_and_areas(&tet_radii(tri, r.as_slice(), t)))
            .into_iter()
            .unzip();
    Ok(edge_ricci_from(tri, &beta))
}

/// Scalar curvature as the sum of Ricci curvatures over edge-class ends.
pub fn scalar_curvature(tri: &Triangulation, r: &PackingMetric) -> Result<Vec<f64>> {
    check_len(tri, r.len())?;
    Ok(scalar_curvature_raw(tri, r.as_slice()))
}

/// Total vertex-triangle area of each vertex link.
pub fn link_areas(tri: &Triangulation, r: &PackingMetric) -> Result<Vec<f64>> {
    check_len(tri, r.len())?;
    let area = map_tets(tri, |t| tetkernel::tet_vertex_areas(&tet_radii(tri, r.as_slice(), t)));
    Ok(link_areas_from(tri, &area))
}

/// Scalar curvature as `2πχ(Σ_i) + Area(Σ_i)`.
pub fn scalar_curvature_gb(tri: &Triangulation, r: &PackingMetric) -> Result<Vec<f64>> {
    Ok(gauss_bonnet_from(tri, &link_areas(tri, r)?))
}

/// `Λ[a][b] = ∂K_a/∂r_b`, assembled from per-tet area Jacobians.
pub fn curvature_jacobian(tri: &Triangulation, r: &PackingMetric) -> Result<SymmetricSparse> {
    check_len(tri, r.len())?;
    let geoms = map_tets(tri, |t| tetkernel::tet_geometry(&tet_radii(tri, r.as_slice(), t)));
    Ok(jacobian_from(tri, &geoms))
}

pub fn curvature_state(tri: &Triangulation, r: &PackingMetric) -> Result<CurvatureState> {
    check_len(tri, r.len())?;
    let geoms = map_tets(tri, |t| tetkernel::tet_geometry(&tet_radii(tri, r.as_slice(), t)));
    let beta: Vec<[f64; 6]> = geoms.iter().map(|g| g.beta).collect();
    let area: Vec<[f64; 4]> = geoms.iter().map(|g| g.area).collect();
    let edge_k = edge_ricci_from(tri, &beta);
    let k = vertex_sums_from(tri, &edge_k);
    let link_area = link_areas_from(tri, &area);
    let k_gauss_bonnet = gauss_bonnet_from(tri, &link_area);
    Ok(CurvatureState { k, k_gauss_bonnet, edge_k, lambda: jacobian_from(tri, &geoms), link_area })
}

/// Curvature energy `-∫_{r_base}^{r} Σ (K_i - K̄_i) dr_i` along the straight
/// segment, by adaptive Gauss–Legendre quadrature. Its gradient in `r` is
/// `-(K(r) - K̄)` and its Hessian `-Λ` is positive definite.
pub fn curvature_energy(
    tri: &Triangulation,
    r: &PackingMetric,
    r_base: &PackingMetric,
    k_target: &[f64],
) -> Result<f64> {
    check_len(tri, r.len())?;
    check_len(tri, r_base.len())?;
    check_len(tri, k_target.len())?;
    Ok(segment_energy_raw(tri, r_base.as_slice(), r.as_slice(), k_target))
}

/// Diagnostic: Cholesky of `-Λ` succeeds.
pub fn is_negative_definite(lambda: &SymmetricSparse) -> bool {
    Cholesky::new(-lambda.to_dense()).is_some()
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn eigenvalues(m: &SymmetricSparse) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.to_dense()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
