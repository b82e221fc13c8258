use thiserror::Error;

/// Errors raised while building triangulations, metrics, or running solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed triangulation document: {0}")]
    Parse(String),

    #[error("triangulation has no tetrahedra")]
    Empty,

    #[error("gluing {index}: {reason}")]
    BadGluing { index: usize, reason: String },

    #[error("unglued face: tet {tet}, face {face}")]
    UngluedFace { tet: usize, face: usize },

    #[error("face glued more than once: tet {tet}, face {face}")]
    DoublyGluedFace { tet: usize, face: usize },

    #[error("simple mode: corner triple {triple:?} occurs {count} times (expected exactly 2)")]
    AmbiguousTriple { triple: [u64; 3], count: usize },

    #[error("simple mode: tet {tet} has repeated corner labels {corners:?}")]
    RepeatedCorners { tet: usize, corners: [u64; 4] },

    #[error(
        "vertex class mismatch across gluing {index}: corner {corner_a} of tet {tet_a} (class {class_a}) \
         meets corner {corner_b} of tet {tet_b} (class {class_b})"
    )]
    VertexClassMismatch {
        index: usize,
        tet_a: usize,
        corner_a: usize,
        class_a: u64,
        tet_b: usize,
        corner_b: usize,
        class_b: u64,
    },

    #[error("edge of tet {tet} between corners {p} and {q} is identified with itself reversed")]
    ReversedEdge { tet: usize, p: usize, q: usize },

    #[error("link of vertex class {vertex} is not a closed surface: {reason}")]
    BadLink { vertex: u64, reason: String },

    #[error("unknown vertex class {0}")]
    UnknownVertex(usize),

    #[error("radius {index} is {value}, expected a finite positive number")]
    NonPositiveRadius { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("solver stopped ({termination}) with residual {residual}")]
    NotConverged { termination: String, residual: f64, r: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, Error>;
