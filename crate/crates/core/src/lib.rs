//! Graph cochain complexes for long links in `R^d`.
//!
//! The crate covers the combinatorial side of configuration-space-integral
//! cohomology classes: diagrams on long links and their orientation signs,
//! the coboundary complex over `Z`, `Q` and `Z/2`, exact cohomology via Smith
//! normal form, the face and corner structure of the compactified
//! configuration spaces, and gluing plans that turn an integer graph cocycle
//! into a checked face ledger.

pub mod complex;
pub mod diagram;
pub mod gluing;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod ring;
pub mod sign;
pub mod strata;

pub use complex::{Budget, Cochain, Grading};
pub use diagram::{Convention, Diagram, Direction, Edge, Element, LoopOrder};
pub use ring::Ring;
pub use sign::Sign;
