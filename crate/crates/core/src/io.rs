//! JSON formats shared by the library and the command line.

/// Serde adapter writing exact numbers as decimal strings (`"-3"`, `"5/2"`).
pub mod decimal {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(|e| serde::de::Error::custom(format!("bad number {s:?}: {e}")))
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::complex::{Cochain, ComplexError, Grading};
use crate::diagram::{Convention, Diagram};
use crate::homology::{ConsistentExpression, MinimalCocycle, OrientedTerm};
use crate::ring::{format_rational, Ring};
use crate::sign::Sign;

#[derive(Serialize, Deserialize)]
struct RawTerm {
    diagram: Diagram,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct RawCochain {
    ring: Ring,
    terms: Vec<RawTerm>,
}

impl Serialize for Cochain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawCochain {
            ring: self.ring(),
            terms: self
                .terms()
                .iter()
                .map(|(d, k)| RawTerm { diagram: d.clone(), coeff: format_rational(k) })
                .collect(),
        }
        .serialize(s)
    }
}

/// Terms are canonicalized on the way in, so a labeled diagram with a
/// negative orientation contributes with the opposite sign.
impl<'de> Deserialize<'de> for Cochain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Cochain, D::Error> {
        let raw = RawCochain::deserialize(d)?;
        let mut terms: Vec<(Diagram, BigRational)> = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let k = raw.ring.parse_coeff(&t.coeff).map_err(serde::de::Error::custom)?;
            terms.push((t.diagram, k));
        }
        Cochain::from_terms(raw.ring, terms.iter().map(|(d, k)| (d, k.clone()))).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RawOriented {
    diagram: Diagram,
    canonical: Diagram,
    orientation: Sign,
    #[serde(with = "decimal")]
    coeff: BigInt,
}

impl Serialize for ConsistentExpression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<RawOriented> = self
            .terms
            .iter()
            .map(|t| RawOriented {
                diagram: t.diagram.clone(),
                canonical: t.canonical.clone(),
                orientation: t.orientation,
                coeff: t.coeff.clone(),
            })
            .collect();
        #[derive(Serialize)]
        struct Out<'a> {
            terms: &'a [RawOriented],
        }
        Out { terms: &terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConsistentExpression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<ConsistentExpression, D::Error> {
        #[derive(Deserialize)]
        struct In {
            terms: Vec<RawOriented>,
        }
        let raw = In::deserialize(d)?;
        Ok(ConsistentExpression {
            terms: raw
                .terms
                .into_iter()
                .map(|t| OrientedTerm { diagram: t.diagram, canonical: t.canonical, orientation: t.orientation, coeff: t.coeff })
                .collect(),
        })
    }
}

impl Serialize for MinimalCocycle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            element: &'a Cochain,
            support: usize,
        }
        Out { element: &self.element, support: self.support.len() }.serialize(s)
    }
}

/// Description of a basis file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisManifest {
    pub m: usize,
    pub n: i64,
    pub k: i64,
    pub convention: Convention,
    pub ring: Ring,
    pub count: usize,
    /// SHA-256 of the compact JSON array of diagrams.
    pub content_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisFile {
    pub manifest: BasisManifest,
    pub diagrams: Vec<Diagram>,
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("basis manifest says {expected} diagrams, file holds {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("basis content hash mismatch: manifest {expected}, computed {found}")]
    HashMismatch { expected: String, found: String },
    #[error("diagram {diagram} has grading {found:?}, manifest says (n, k) = ({n}, {k})")]
    WrongGrading { diagram: Diagram, found: Grading, n: i64, k: i64 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn diagrams_hash(diagrams: &[Diagram]) -> Result<String, IoError> {
    Ok(sha256_hex(&serde_json::to_vec(diagrams)?))
}

impl BasisFile {
    pub fn new(m: usize, n: i64, k: i64, convention: Convention, ring: Ring, diagrams: Vec<Diagram>) -> Result<BasisFile, IoError> {
        let content_hash = diagrams_hash(&diagrams)?;
        Ok(BasisFile {
            manifest: BasisManifest { m, n, k, convention, ring, count: diagrams.len(), content_hash },
            diagrams,
        })
    }

    /// Count, hash and grading checks.
    pub fn validate(&self) -> Result<(), IoError> {
        let m = &self.manifest;
        if m.count != self.diagrams.len() {
            return Err(IoError::CountMismatch { expected: m.count, found: self.diagrams.len() });
        }
        let found = diagrams_hash(&self.diagrams)?;
        if found != m.content_hash {
            return Err(IoError::HashMismatch { expected: m.content_hash.clone(), found });
        }
        for d in &self.diagrams {
            let g = crate::complex::grading(d);
            if g.order != m.n || g.defect != m.k {
                return Err(IoError::WrongGrading { diagram: d.clone(), found: g, n: m.n, k: m.k });
            }
        }
        Ok(())
    }
}

/// Pretty JSON with a trailing newline; the one writer used for every file.
pub fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}
