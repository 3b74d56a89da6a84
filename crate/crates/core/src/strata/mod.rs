//! Blocks, faces, corners and Poincaré polynomials of the compactified
//! configuration spaces attached to a diagram.

mod faces;
mod graph;
mod poincare;

use thiserror::Error;

use crate::diagram::VertexId;

pub use faces::{
    anomalous_faces, codim_certificate, compatible, corner_poset, enumerate_faces, principal_faces, CertCase,
    CodimCertificate, CornerSet, Face, FaceSet, PrincipalFace, MAX_CORNER_FAMILIES, MAX_FACE_VERTICES,
};
pub use graph::{blocks_and_tree, BlockCounting, BlockDecomposition, SimpleGraph};
pub use poincare::{
    diagram_dimensions, dimensions, direct_fiber_dim, graph_poincare, poincare_polynomial, Dimensions, PoincareMode,
    Poly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("diagram has {vertices} vertices; face scans are limited to {limit}")]
    TooManyVertices { vertices: usize, limit: usize },
    #[error("{0} is glued, not degenerate: its quotient has no multiple edge")]
    NotDegenerate(String),
    #[error("not a face: {0}")]
    NotAFace(String),
    #[error("ordering not admissible: earlier neighbours of vertex {vertex} are not pairwise adjacent")]
    NotAdmissible { vertex: VertexId },
    #[error("ordering not admissible: fiber mode needs all segment vertices first")]
    SegmentsNotFirst,
    #[error("bad ordering: {0}")]
    BadOrder(String),
    #[error("ambient dimension {0} is too small")]
    BadDimension(u32),
    #[error("more than {limit} corner families")]
    Budget { limit: usize },
    #[error("fiber dimension of {diagram}: formula gives {formula}, direct count {direct}")]
    DimensionMismatch { diagram: String, formula: i64, direct: i64 },
}
