//! Gluing plans: which faces of which copies of which configuration spaces
//! are identified, folded, collapsed or left in the degenerate locus, and a
//! checker for the resulting fundamental cycle.

mod corners;
mod identify;
mod plan;
mod verify;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::ComplexError;
use crate::diagram::{ContractError, Diagram, Element, VertexId};
use crate::homology::HomologyError;
use crate::io::decimal;
use crate::ring::Ring;
use crate::sign::Sign;
use crate::strata::{CodimCertificate, Face, StrataError};

pub use corners::{corner_collapse_analysis, transport_corners, CornerChange, CornerLedger, CornerSplit};
pub use identify::{hidden_fold_signature, induced_signature};
pub use plan::{certified_faces, plan_chord_mod2, plan_cocycle, plan_gluing, plan_mod2};
pub use verify::{spherical_signatures, verify_fundamental_cycle, LabeledSignature};

#[derive(Debug, Error)]
pub enum GluingError {
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error("unpairable class: {} unmatched face(s): {}", faces.len(), faces.join("; "))]
    UnpairableClass { faces: Vec<String> },
    #[error("odd class multiplicity: {}", classes.join("; "))]
    OddClassMultiplicity { classes: Vec<String> },
    #[error("parity violation: integer plans need odd ambient dimension, got d = {0}; use the mod-2 planner")]
    ParityViolation(u32),
    #[error("diagram convention {convention} does not match ambient dimension d = {d}")]
    ConventionMismatch { convention: String, d: u32 },
    #[error("face {face} of space {space} carries an arc and a parallel chord; its boundary coefficient is 2, not supported over Z")]
    UnsupportedCombinedFace { space: usize, face: String },
    #[error("face {face} of space {space}: no orientation-reversing automorphism of the quotient fixes the collision point")]
    NoFoldAutomorphism { space: usize, face: String },
    #[error("cannot identify {a} with {b}: {reason}")]
    Identification { a: String, b: String, reason: String },
    #[error("not a chord diagram: {0}")]
    NotChordDiagram(String),
    #[error("ambient dimension {0} is too small")]
    BadDimension(u32),
    #[error("pairing index {index} out of range ({len} pairings)")]
    NoSuchPairing { index: usize, len: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(d: u32) -> Parity {
        if d % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// A permutation of the `N` sphere factors together with the factors on
/// which the antipodal map is applied. Both use 1-based factor numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalSignature {
    pub perm: Vec<usize>,
    pub flips: Vec<usize>,
}

impl SphericalSignature {
    pub fn identity(n: usize) -> SphericalSignature {
        SphericalSignature { perm: (1..=n).collect(), flips: Vec::new() }
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.perm.len()];
        for &p in &self.perm {
            if p == 0 || p > seen.len() || seen[p - 1] {
                return false;
            }
            seen[p - 1] = true;
        }
        self.flips.iter().all(|&f| f >= 1 && f <= self.perm.len())
    }

    /// Whether the element lies in the subgroup allowed for odd `d` over `Z`.
    pub fn in_odd_group(&self) -> bool {
        self.flips.len() % 2 == 0
    }
}

impl fmt::Display for SphericalSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.perm.iter().map(|x| x.to_string()).collect();
        let fl: Vec<String> = self.flips.iter().map(|x| x.to_string()).collect();
        write!(f, "perm [{}] flips {{{}}}", p.join(" "), fl.join(","))
    }
}

/// One configuration space `F(Γ_i)` of the bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    /// Labeled representative the plan works with.
    pub diagram: Diagram,
    pub canonical: Diagram,
    /// Coefficient of `diagram` (not of the canonical form).
    #[serde(with = "decimal")]
    pub coefficient: BigInt,
    pub copies: usize,
    /// `diagram = orientation * canonical`.
    pub orientation: Sign,
    pub absent_edges: usize,
}

/// A face of one copy of one space. Spaces and copies count from 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlanFace {
    pub space: usize,
    pub copy: usize,
    pub face: Face,
}

impl fmt::Display for PlanFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "space {} copy {} {}", self.space, self.copy, self.face)
    }
}

/// How the two colliding points of one side are matched with the other's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointMatch {
    /// First end to first end: tail to tail for edges, earlier to earlier for arcs.
    Direct,
    Swapped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identification {
    /// Bijection from the vertices of side a to those of side b, as `[a, b]` pairs.
    pub vertex_map: Vec<[VertexId; 2]>,
    /// Contracted element on each side.
    pub labels: [Element; 2],
    pub endpoints: EndpointMatch,
    pub signature: SphericalSignature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub face_a: PlanFace,
    pub face_b: PlanFace,
    pub identification: Identification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalFold {
    pub face: PlanFace,
    pub label: Element,
    /// Self-map of the vertices lifting an automorphism of the quotient
    /// (or the transposition of the colliding pair), as `[from, to]` pairs.
    pub automorphism: Vec<[VertexId; 2]>,
    pub endpoints: EndpointMatch,
    pub signature: SphericalSignature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiddenFold {
    pub face: PlanFace,
    /// Free vertex reflected by `x_v -> x_u + x_w - x_v`.
    pub v: VertexId,
    pub neighbors: [VertexId; 2],
    pub signature: SphericalSignature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollapseKind {
    C1,
    C2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collapse {
    pub face: PlanFace,
    pub kind: CollapseKind,
    pub forgets: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegenerateReason {
    MultiEdgeQuotient,
    /// A chord between segment vertices that are not neighbours on L; the
    /// collision locus is empty.
    Pinch,
    RigidHidden,
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degenerate {
    pub face: PlanFace,
    pub reason: DegenerateReason,
    pub certificate: Option<CodimCertificate>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    /// Contraction classes whose signed boundary sum does not vanish.
    pub unbalanced: Vec<String>,
    #[serde(default)]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingPlan {
    pub d_parity: Parity,
    pub ring: Ring,
    /// Ambient dimension the certificates were computed for.
    pub d: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub spaces: Vec<Space>,
    pub pairings: Vec<Pairing>,
    pub principal_folds: Vec<PrincipalFold>,
    pub hidden_folds: Vec<HiddenFold>,
    pub collapses: Vec<Collapse>,
    pub degenerate: Vec<Degenerate>,
    pub verification: VerificationReport,
}

impl GluingPlan {
    pub fn c1_count(&self) -> usize {
        self.collapses.iter().filter(|c| c.kind == CollapseKind::C1).count()
    }

    pub fn c2_count(&self) -> usize {
        self.collapses.iter().filter(|c| c.kind == CollapseKind::C2).count()
    }
}
