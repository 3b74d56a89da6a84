use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::graph::SimpleGraph;
use super::StrataError;
use crate::diagram::{quotient, Diagram, Element, VertexId};
use crate::io::decimal;

/// Largest vertex count for exhaustive subset scans.
pub const MAX_FACE_VERTICES: usize = 20;
/// Largest number of corner families returned by one call.
pub const MAX_CORNER_FAMILIES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrincipalFace {
    pub pair: [VertexId; 2],
    /// Arcs first, then edges by index.
    pub labels: Vec<Element>,
}

/// A codimension-one face of the compactified configuration space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Face {
    Principal { pair: [VertexId; 2], labels: Vec<Element> },
    Hidden { vertices: Vec<VertexId> },
    Infinity { vertices: Vec<VertexId> },
}

impl Face {
    pub fn vertices(&self) -> Vec<VertexId> {
        match self {
            Face::Principal { pair, .. } => pair.to_vec(),
            Face::Hidden { vertices } | Face::Infinity { vertices } => vertices.clone(),
        }
    }
}

impl std::fmt::Display for Face {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ids = |v: &[VertexId]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Face::Principal { pair, labels } => {
                let l: Vec<String> = labels.iter().map(|e| e.to_string()).collect();
                write!(f, "principal {{{}}} [{}]", ids(pair), l.join(" "))
            }
            Face::Hidden { vertices } => write!(f, "hidden {{{}}}", ids(vertices)),
            Face::Infinity { vertices } => write!(f, "infinity {{{}}}", ids(vertices)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSet {
    pub principal: Vec<PrincipalFace>,
    pub hidden: Vec<Vec<VertexId>>,
    pub infinity: Vec<Vec<VertexId>>,
}

impl FaceSet {
    pub fn faces(&self) -> Vec<Face> {
        let mut out: Vec<Face> = self
            .principal
            .iter()
            .map(|p| Face::Principal { pair: p.pair, labels: p.labels.clone() })
            .collect();
        out.extend(self.hidden.iter().map(|v| Face::Hidden { vertices: v.clone() }));
        out.extend(self.infinity.iter().map(|v| Face::Infinity { vertices: v.clone() }));
        out
    }

    pub fn len(&self) -> usize {
        self.principal.len() + self.hidden.len() + self.infinity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_size(d: &Diagram) -> Result<(), StrataError> {
    if d.vertex_count() > MAX_FACE_VERTICES {
        return Err(StrataError::TooManyVertices { vertices: d.vertex_count(), limit: MAX_FACE_VERTICES });
    }
    Ok(())
}

/// Principal faces keyed by vertex pair, with every contractible label joining the pair.
pub fn principal_faces(d: &Diagram) -> Vec<PrincipalFace> {
    let mut by_pair: BTreeMap<[VertexId; 2], Vec<Element>> = BTreeMap::new();
    for a in d.arcs() {
        by_pair
            .entry([a.from.min(a.to), a.from.max(a.to)])
            .or_default()
            .push(Element::Arc { strand: a.strand, pos: a.pos });
    }
    for (i, e) in d.edges().iter().enumerate() {
        if !e.is_loop() {
            by_pair.entry([e.a.min(e.b), e.a.max(e.b)]).or_default().push(Element::Edge(i));
        }
    }
    by_pair.into_iter().map(|(pair, labels)| PrincipalFace { pair, labels }).collect()
}

fn mask_vertices(mask: u32) -> Vec<VertexId> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i as VertexId + 1).collect()
}

fn mask_connected(adj: &[u32], mask: u32) -> bool {
    if mask == 0 {
        return false;
    }
    let start = mask & mask.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let i = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[i] & mask;
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == mask
}

/// Principal faces, hidden faces (vertex sets of size at least three spanning
/// a biconnected subgraph of T(Γ)) and faces at infinity (nonempty vertex sets
/// spanning a connected subgraph of T(Γ)).
pub fn enumerate_faces(d: &Diagram) -> Result<FaceSet, StrataError> {
    check_size(d)?;
    let n = d.vertex_count();
    let t = SimpleGraph::t_graph(d);
    let mut adj = vec![0u32; n];
    for (a, b) in t.edges() {
        adj[a as usize - 1] |= 1 << (b - 1);
        adj[b as usize - 1] |= 1 << (a - 1);
    }
    let mut hidden = Vec::new();
    let mut infinity = Vec::new();
    for mask in 1u32..(1u32 << n) {
        if !mask_connected(&adj, mask) {
            continue;
        }
        let verts = mask_vertices(mask);
        if verts.len() >= 3 {
            let keep: BTreeSet<VertexId> = verts.iter().copied().collect();
            if t.induced(&keep).is_biconnected() {
                hidden.push(verts.clone());
            }
        }
        infinity.push(verts);
    }
    hidden.sort();
    infinity.sort();
    Ok(FaceSet { principal: principal_faces(d), hidden, infinity })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CertCase {
    I,
    II,
    III,
    IV,
    #[serde(rename = "principal-multiedge")]
    PrincipalMultiedge,
}

/// Lower bound on the codimension of a face's image in the sphere product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimCertificate {
    pub case: CertCase,
    pub d: u32,
    pub r: usize,
    pub s: usize,
    pub edges: usize,
    pub screen_dim: i64,
    /// `(d-1)·edges - screen_dim`; authoritative.
    #[serde(with = "decimal")]
    pub bound: BigInt,
    /// The simplified bound from the case analysis.
    #[serde(with = "decimal")]
    pub stated_bound: BigRational,
    pub anomalous: bool,
}

fn rs(d: &Diagram, verts: &[VertexId]) -> (usize, usize) {
    let r = verts.iter().filter(|&&v| d.is_segment(v)).count();
    (r, verts.len() - r)
}

fn check_vertices(d: &Diagram, verts: &[VertexId]) -> Result<(), StrataError> {
    let n = d.vertex_count() as VertexId;
    if verts.is_empty() || verts.iter().any(|&v| v == 0 || v > n) || verts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(StrataError::NotAFace(format!("bad vertex set {verts:?}")));
    }
    Ok(())
}

fn half(x: i64) -> BigRational {
    BigRational::new(x.into(), 2.into())
}

/// Certificate for a hidden face, a face at infinity, or a principal face
/// whose quotient has a multiple edge.
pub fn codim_certificate(face: &Face, dim: u32, d: &Diagram) -> Result<CodimCertificate, StrataError> {
    if dim < 2 {
        return Err(StrataError::BadDimension(dim));
    }
    let di = dim as i64;
    match face {
        Face::Principal { pair, labels } => {
            check_vertices(d, pair)?;
            let mut extra = None;
            for &el in labels {
                let q = quotient(d, el).map_err(|e| StrataError::NotAFace(e.to_string()))?;
                if let Some(q) = q {
                    let mut mult: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
                    for e in q.diagram.edges() {
                        *mult.entry(e.ends()).or_default() += 1;
                    }
                    let x: usize = mult.values().map(|m| m - 1).sum();
                    if x > 0 {
                        extra = Some(extra.unwrap_or(0usize).max(x));
                    }
                }
            }
            let Some(extra) = extra else {
                return Err(StrataError::NotDegenerate(face.to_string()));
            };
            let (r, s) = rs(d, pair);
            let joining = d.edges().iter().filter(|e| !e.is_loop() && e.touches(pair[0]) && e.touches(pair[1])).count();
            let bound = (di - 1) * extra as i64;
            Ok(CodimCertificate {
                case: CertCase::PrincipalMultiedge,
                d: dim,
                r,
                s,
                edges: joining,
                screen_dim: 0,
                bound: bound.into(),
                stated_bound: BigRational::from_integer((di - 1).into()),
                anomalous: bound <= 0,
            })
        }
        Face::Hidden { vertices } | Face::Infinity { vertices } => {
            check_vertices(d, vertices)?;
            let inside: BTreeSet<VertexId> = vertices.iter().copied().collect();
            let t = SimpleGraph::t_graph(d).induced(&inside);
            let hidden = matches!(face, Face::Hidden { .. });
            if hidden && !t.is_biconnected() {
                return Err(StrataError::NotAFace(format!("{face} is not biconnected in T")));
            }
            if !hidden && !t.is_connected() {
                return Err(StrataError::NotAFace(format!("{face} is not connected in T")));
            }
            let (r, s) = rs(d, vertices);
            let (ri, si) = (r as i64, s as i64);
            let edges = d
                .edges()
                .iter()
                .filter(|e| !e.is_loop())
                .filter(|e| {
                    let (a, b) = (inside.contains(&e.a), inside.contains(&e.b));
                    if hidden {
                        a && b
                    } else {
                        a || b
                    }
                })
                .count();
            let (case, screen_dim, stated_bound) = match (hidden, r) {
                (true, 0) => (CertCase::I, di * si - di - 1, half((di - 3) * (si + 2)) + BigRational::from_integer(4.into())),
                (false, 0) => (CertCase::II, di * si - 1, half((di - 3) * si) + BigRational::from_integer(1.into())),
                (true, _) => (CertCase::III, di + ri + di * si - 3, half((di - 3) * (ri + si - 2))),
                (false, _) => (CertCase::IV, ri + di * si - 1, half((di - 3) * (ri + si)) + BigRational::from_integer(1.into())),
            };
            let bound = BigInt::from((di - 1) * edges as i64 - screen_dim);
            let anomalous = bound <= BigInt::zero();
            Ok(CodimCertificate { case, d: dim, r, s, edges, screen_dim, bound, stated_bound, anomalous })
        }
    }
}

/// Hidden faces that admit no degeneracy argument in dimension three: the
/// vertex set is a whole component of U(Γ), free vertices are trivalent and
/// segment vertices univalent in it, its free part is connected, and no
/// other vertex sits on L between its segment vertices.
pub fn anomalous_faces(d: &Diagram) -> Result<Vec<Vec<VertexId>>, StrataError> {
    let faces = enumerate_faces(d)?;
    let u = SimpleGraph::u_graph(d);
    let comps: BTreeSet<Vec<VertexId>> = u.components().into_iter().collect();
    let mut out = Vec::new();
    for w in faces.hidden {
        if !comps.contains(&w) {
            continue;
        }
        let inside: BTreeSet<VertexId> = w.iter().copied().collect();
        let degrees_ok = w.iter().all(|&v| {
            let deg = d.edges().iter().filter(|e| !e.is_loop() && e.touches(v)).count();
            let loops = d.edges().iter().any(|e| e.is_loop() && e.a == v);
            !loops && if d.is_segment(v) { deg == 1 } else { deg == 3 }
        });
        if !degrees_ok {
            continue;
        }
        let free: BTreeSet<VertexId> = w.iter().copied().filter(|&v| !d.is_segment(v)).collect();
        if free.is_empty() || !u.induced(&free).is_connected() {
            continue;
        }
        let crossed = d.strands().iter().any(|s| {
            let pos: Vec<usize> = s.iter().enumerate().filter(|(_, v)| inside.contains(v)).map(|(i, _)| i).collect();
            match (pos.first(), pos.last()) {
                (Some(&lo), Some(&hi)) => s[lo..=hi].iter().any(|v| !inside.contains(v)),
                _ => false,
            }
        });
        if !crossed {
            out.push(w);
        }
    }
    Ok(out)
}

/// A face-indexing vertex set; sets at infinity implicitly contain the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CornerSet {
    pub vertices: Vec<VertexId>,
    pub infinity: bool,
}

impl CornerSet {
    pub fn finite(mut vertices: Vec<VertexId>) -> CornerSet {
        vertices.sort_unstable();
        CornerSet { vertices, infinity: false }
    }

    pub fn at_infinity(mut vertices: Vec<VertexId>) -> CornerSet {
        vertices.sort_unstable();
        CornerSet { vertices, infinity: true }
    }

    fn size(&self) -> usize {
        self.vertices.len() + self.infinity as usize
    }
}

/// Two face sets can meet in a corner when they are disjoint, nested, or share exactly one point.
pub fn compatible(a: &CornerSet, b: &CornerSet) -> bool {
    if a == b {
        return false;
    }
    let common = a.vertices.iter().filter(|v| b.vertices.binary_search(v).is_ok()).count()
        + (a.infinity && b.infinity) as usize;
    common <= 1 || common == a.size() || common == b.size()
}

/// Families of pairwise compatible face sets of size `1..=max_size`.
pub fn corner_poset(d: &Diagram, max_size: usize, include_infinity: bool) -> Result<Vec<Vec<CornerSet>>, StrataError> {
    let faces = enumerate_faces(d)?;
    let mut sets: Vec<CornerSet> = faces.principal.iter().map(|p| CornerSet::finite(p.pair.to_vec())).collect();
    sets.extend(faces.hidden.iter().map(|v| CornerSet::finite(v.clone())));
    if include_infinity {
        sets.extend(faces.infinity.iter().map(|v| CornerSet::at_infinity(v.clone())));
    }
    sets.sort();
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn grow(
        sets: &[CornerSet],
        start: usize,
        max: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<CornerSet>>,
    ) -> Result<(), StrataError> {
        for i in start..sets.len() {
            if cur.iter().all(|&j| compatible(&sets[i], &sets[j])) {
                cur.push(i);
                if out.len() >= MAX_CORNER_FAMILIES {
                    return Err(StrataError::Budget { limit: MAX_CORNER_FAMILIES });
                }
                out.push(cur.iter().map(|&j| sets[j].clone()).collect());
                if cur.len() < max {
                    grow(sets, i + 1, max, cur, out)?;
                }
                cur.pop();
            }
        }
        Ok(())
    }
    if max_size > 0 {
        grow(&sets, 0, max_size, &mut cur, &mut out)?;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}
