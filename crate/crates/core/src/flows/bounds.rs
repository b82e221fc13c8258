use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

/// Lower bounds on vertex-triangle areas for radii confined to `(0, M]`
/// (with one corner optionally down to `c`), and the resulting curvature
/// thresholds for a vertex of given link Euler characteristic and degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    /// Cosine of the dihedral angle at `(M, M, M, M)`.
    pub cos_equal: f64,
    /// Cosine bound with one corner at radius `c`.
    pub cos_small_corner: f64,
    /// Area of a vertex triangle at `(M, M, M, M)`.
    pub min_area: f64,
    /// Area of the vertex triangle at the small corner of `(c, M, M, M)`.
    pub min_area_small_corner: f64,
    /// `2πχ + d · min_area`.
    pub k_lower: f64,
    /// `2πχ + d · min_area_small_corner`.
    pub k_upper: f64,
}

pub fn bounds(m: f64, c: f64, chi: i64, d: usize) -> Result<Bounds> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::Domain(format!("M must be positive and finite, got {m}")));
    }
    if !(c > 0.0 && c < m) {
        return Err(Error::Domain(format!("c must lie in (0, M) = (0, {m}), got {c}")));
    }
    if d < 1 {
        return Err(Error::Domain("degree d must be at least 1".into()));
    }
    let tm = m.tanh();
    let tc = c.tanh();
    let cos_equal = (1.0 + tm * tm) / (1.0 + 3.0 * tm * tm);
    let cos_small_corner = 0.5 + (1.0 - tc * tc) / (2.0 * (1.0 + tm * tm + 2.0 * tc * tm));
    let min_area = PI - 3.0 * cos_equal.acos();
    let min_area_small_corner = PI - 3.0 * cos_small_corner.acos();
    let base = 2.0 * PI * chi as f64;
    Ok(Bounds {
        cos_equal,
        cos_small_corner,
        min_area,
        min_area_small_corner,
        k_lower: base + d as f64 * min_area,
        k_upper: base + d as f64 * min_area_small_corner,
    })
}

/// Where a target curvature sits relative to `(k_lower, k_upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BelowBand,
    InBand,
    AboveBand,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::BelowBand => "below_band",
            Regime::InBand => "in_band",
            Regime::AboveBand => "above_band",
        })
    }
}

/// Classify each target curvature against the per-vertex band for radius
/// range `[c, M]`.
pub fn regime(tri: &Triangulation, k_target: &[f64], m: f64, c: f64) -> Result<Vec<Regime>> {
    let n = tri.num_vertices();
    if k_target.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: k_target.len() });
    }
    let links = tri.links();
    k_target
        .iter()
        .zip(links)
        .map(|(&k, link)| {
            let b = bounds(m, c, link.euler_char, link.degree)?;
            Ok(if k <= b.k_lower {
                Regime::BelowBand
            } else if k <= b.k_upper {
                Regime::InBand
            } else {
                Regime::AboveBand
            })
        })
        .collect()
}
