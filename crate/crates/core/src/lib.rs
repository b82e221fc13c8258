//! Generalized sphere packing metrics on ideally triangulated compact
//! 3-manifolds with boundary.
//!
//! Every tetrahedron of an ideal triangulation is realized as a hyper-ideal
//! tetrahedron whose edge `{ij}` has length `r_i + r_j`. The crate computes
//! the resulting dihedral angles, vertex-triangle areas and their analytic
//! derivatives ([`tetkernel`]), assembles combinatorial Ricci and scalar
//! curvature together with the curvature Jacobian ([`curvature`]), and
//! solves the prescribed-curvature problem with the combinatorial Ricci and
//! Calabi flows or a damped Newton method on the convex curvature energy
//! ([`flows`]).
//!
//! ```no_run
//! use hyperflow::{curvature, PackingMetric, Triangulation};
//!
//! let doc = std::fs::read_to_string("fixtures/doubled_tetrahedron.json").unwrap();
//! let tri = Triangulation::parse(&doc).unwrap();
//! let r = PackingMetric::constant(tri.num_vertices(), 1.0).unwrap();
//! let k = curvature::scalar_curvature(&tri, &r).unwrap();
//! println!("{k:?}");
//! ```

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod curvature;
pub mod error;
pub mod flows;
pub mod quadrature;
pub mod sparse;
pub mod tetkernel;
pub mod triangulation;

pub use curvature::{CurvatureState, PackingMetric};
pub use error::{Error, Result};
pub use flows::{Bounds, FlowOptions, FlowTrace, Method, Termination};
pub use sparse::SymmetricSparse;
pub use tetkernel::{TetGeometry, TetRadii};
pub use triangulation::{Triangulation, VertexLink};
