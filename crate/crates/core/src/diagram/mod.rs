//! Diagrams on long links: validation, labelings, canonical forms and
//! single-element contraction.

mod canon;
mod contract;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use canon::{
    apply_labeling, automorphism_signs, canonical_labelings, canonicalize, iso_sign,
    reversed_labeling, Canonical, CanonicalLabelings, IsoError, ZeroReason,
};
pub use contract::{contract, epsilon, quotient, ContractError, ContractionOutcome, Quotient};

pub type VertexId = u32;

/// Labeling convention: odd ambient dimension orders vertices and orients
/// edges, even ambient dimension orders edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Odd,
    Even,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Odd => "odd",
            Convention::Even => "even",
        })
    }
}

impl std::str::FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "odd" => Ok(Convention::Odd),
            "even" => Ok(Convention::Even),
            _ => Err(format!("unknown convention {s:?} (expected odd or even)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ab,
    Ba,
}

/// Which end of a self-loop comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopOrder {
    Lr,
    Rl,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub dir: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_order: Option<LoopOrder>,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Edge {
        Edge { a, b, dir: Direction::Ab, loop_order: if a == b { Some(LoopOrder::Lr) } else { None } }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn tail(&self) -> VertexId {
        match self.dir {
            Direction::Ab => self.a,
            Direction::Ba => self.b,
        }
    }

    pub fn head(&self) -> VertexId {
        match self.dir {
            Direction::Ab => self.b,
            Direction::Ba => self.a,
        }
    }

    /// Endpoints as an unordered pair `(min, max)`.
    pub fn ends(&self) -> (VertexId, VertexId) {
        (self.a.min(self.b), self.a.max(self.b))
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    /// Orientation bit of a self-loop relative to the canonical loop
    /// (direction `ab`, end order `lr`).
    pub(crate) fn loop_bit(&self) -> bool {
        (self.dir == Direction::Ba) != (self.loop_order == Some(LoopOrder::Rl))
    }
}

/// Where a vertex sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Segment { strand: usize, pos: usize },
    Free,
}

/// A contractible element: an edge by index, or the arc between positions
/// `pos` and `pos + 1` of a strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Edge(usize),
    Arc { strand: usize, pos: usize },
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Edge(i) => write!(f, "edge:{}", i + 1),
            Element::Arc { strand, pos } => write!(f, "arc:{}:{}", strand + 1, pos + 1),
        }
    }
}

impl std::str::FromStr for Element {
    type Err = String;
    fn from_str(s: &str) -> Result<Element, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| -> Result<usize, String> {
            match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(format!("bad element index {t:?} in {s:?}")),
            }
        };
        match parts.as_slice() {
            ["edge", i] => Ok(Element::Edge(num(i)?)),
            ["arc", st, p] => Ok(Element::Arc { strand: num(st)?, pos: num(p)? }),
            _ => Err(format!("element {s:?} must look like edge:<i> or arc:<strand>:<pos>")),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Element, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An arc of the link between consecutive segment vertices, oriented along L.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub strand: usize,
    pub pos: usize,
    pub from: VertexId,
    pub to: VertexId,
}

/// A validated diagram.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    convention: Convention,
    strands: Vec<Vec<VertexId>>,
    free: Vec<VertexId>,
    edges: Vec<Edge>,
    place: Vec<Place>,
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("a diagram needs at least one strand")]
    NoStrands,
    #[error("vertex id 0 is not allowed (ids are 1-based)")]
    ZeroId,
    #[error("duplicate vertex id {0}")]
    DuplicateId(VertexId),
    #[error("edge {edge} refers to unknown vertex {vertex}")]
    UnknownEndpoint { edge: usize, vertex: VertexId },
    #[error("free self-loop on vertex {0}")]
    FreeSelfLoop(VertexId),
    #[error("self-loop {0} lacks loop_order")]
    MissingLoopOrder(usize),
    #[error("edge {0} is not a self-loop but carries loop_order")]
    StrayLoopOrder(usize),
    #[error("vertex {vertex} has valence {valence} < 3")]
    LowValence { vertex: VertexId, valence: usize },
    #[error("component not connected to L: {0:?}")]
    Detached(Vec<VertexId>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError(pub Vec<Violation>);

impl Diagram {
    /// Validate a raw description, renumbering ids order-preservingly to `1..n`.
    pub fn new(
        convention: Convention,
        strands: Vec<Vec<VertexId>>,
        free: Vec<VertexId>,
        edges: Vec<Edge>,
    ) -> Result<Diagram, ValidationError> {
        let mut errs = Vec::new();
        if strands.is_empty() {
            errs.push(Violation::NoStrands);
        }
        let mut seen = BTreeMap::new();
        for &v in strands.iter().flatten().chain(free.iter()) {
            if v == 0 {
                if !errs.contains(&Violation::ZeroId) {
                    errs.push(Violation::ZeroId);
                }
                continue;
            }
            if seen.insert(v, ()).is_some() {
                errs.push(Violation::DuplicateId(v));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            for v in [e.a, e.b] {
                if !seen.contains_key(&v) {
                    errs.push(Violation::UnknownEndpoint { edge: i, vertex: v });
                }
            }
        }
        if !errs.is_empty() {
            return Err(ValidationError(errs));
        }
        let renum: BTreeMap<VertexId, VertexId> =
            seen.keys().enumerate().map(|(i, &v)| (v, i as VertexId + 1)).collect();
        let strands: Vec<Vec<VertexId>> =
            strands.iter().map(|s| s.iter().map(|v| renum[v]).collect()).collect();
        let mut free: Vec<VertexId> = free.iter().map(|v| renum[v]).collect();
        free.sort_unstable();
        let mut new_edges = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let mut e2 = Edge { a: renum[&e.a], b: renum[&e.b], dir: e.dir, loop_order: e.loop_order };
            if e2.is_loop() {
                match convention {
                    Convention::Odd if e2.loop_order.is_none() => errs.push(Violation::MissingLoopOrder(i)),
                    Convention::Even => {
                        e2.dir = Direction::Ab;
                        e2.loop_order = None;
                    }
                    _ => {}
                }
            } else if e2.loop_order.is_some() {
                errs.push(Violation::StrayLoopOrder(i));
            }
            if convention == Convention::Even {
                e2.dir = Direction::Ab;
            }
            new_edges.push(e2);
        }
        let d = Diagram::from_parts(convention, strands, free, new_edges);
        for e in &d.edges {
            if e.is_loop() && !d.is_segment(e.a) {
                errs.push(Violation::FreeSelfLoop(e.a));
            }
        }
        for v in d.vertices() {
            let val = d.valence(v);
            if val < 3 {
                errs.push(Violation::LowValence { vertex: v, valence: val });
            }
        }
        for comp in d.components() {
            if !comp.iter().any(|&v| d.is_segment(v)) {
                errs.push(Violation::Detached(comp));
            }
        }
        if errs.is_empty() {
            Ok(d)
        } else {
            Err(ValidationError(errs))
        }
    }

    /// Assemble without validation. Ids must already be `1..n`.
    pub(crate) fn from_parts(
        convention: Convention,
        strands: Vec<Vec<VertexId>>,
        mut free: Vec<VertexId>,
        edges: Vec<Edge>,
    ) -> Diagram {
        free.sort_unstable();
        let n = strands.iter().map(|s| s.len()).sum::<usize>() + free.len();
        let mut place = vec![Place::Free; n + 1];
        for (si, s) in strands.iter().enumerate() {
            for (pi, &v) in s.iter().enumerate() {
                place[v as usize] = Place::Segment { strand: si, pos: pi };
            }
        }
        Diagram { convention, strands, free, edges, place }
    }

    /// The diagram with no vertices on `m` strands.
    pub fn empty(convention: Convention, m: usize) -> Diagram {
        Diagram::from_parts(convention, vec![Vec::new(); m], Vec::new(), Vec::new())
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn strand_count(&self) -> usize {
        self.strands.len()
    }

    pub fn strands(&self) -> &[Vec<VertexId>] {
        &self.strands
    }

    pub fn free_vertices(&self) -> &[VertexId] {
        &self.free
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.place.len() - 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        1..=self.vertex_count() as VertexId
    }

    pub fn segment_count(&self) -> usize {
        self.vertex_count() - self.free.len()
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    pub fn place(&self, v: VertexId) -> Place {
        self.place[v as usize]
    }

    pub fn is_segment(&self, v: VertexId) -> bool {
        matches!(self.place[v as usize], Place::Segment { .. })
    }

    /// 1-based position of a segment vertex in strand-major L order.
    pub fn segment_label(&self, v: VertexId) -> Option<usize> {
        match self.place(v) {
            Place::Segment { strand, pos } => {
                Some(self.strands[..strand].iter().map(|s| s.len()).sum::<usize>() + pos + 1)
            }
            Place::Free => None,
        }
    }

    /// Segment vertices in strand-major L order.
    pub fn segments_in_order(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.strands.iter().flatten().copied()
    }

    pub fn arcs(&self) -> Vec<Arc> {
        let mut out = Vec::new();
        for (si, s) in self.strands.iter().enumerate() {
            for p in 0..s.len().saturating_sub(1) {
                out.push(Arc { strand: si, pos: p, from: s[p], to: s[p + 1] });
            }
        }
        out
    }

    pub fn arc(&self, strand: usize, pos: usize) -> Option<Arc> {
        let s = self.strands.get(strand)?;
        if pos + 1 < s.len() {
            Some(Arc { strand, pos, from: s[pos], to: s[pos + 1] })
        } else {
            None
        }
    }

    /// The arc joining two vertices, if they are consecutive on a strand.
    pub fn arc_between(&self, x: VertexId, y: VertexId) -> Option<Arc> {
        match (self.place(x), self.place(y)) {
            (Place::Segment { strand: s1, pos: p1 }, Place::Segment { strand: s2, pos: p2 })
                if s1 == s2 && p1.abs_diff(p2) == 1 =>
            {
                self.arc(s1, p1.min(p2))
            }
            _ => None,
        }
    }

    /// Edge-ends plus arc-ends at `v`.
    pub fn valence(&self, v: VertexId) -> usize {
        let ends: usize = self
            .edges
            .iter()
            .map(|e| (e.a == v) as usize + (e.b == v) as usize)
            .sum();
        ends + if self.is_segment(v) { 2 } else { 0 }
    }

    /// Number of edge-ends at `v`.
    pub fn edge_degree(&self, v: VertexId) -> usize {
        self.edges.iter().map(|e| (e.a == v) as usize + (e.b == v) as usize).sum()
    }

    pub fn has_multi_edge(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.edges.iter().any(|e| !seen.insert(e.ends()))
    }

    pub fn is_chord_diagram(&self) -> bool {
        self.free.is_empty()
    }

    /// Connected components of the graph formed by edges and arcs.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut pairs: Vec<(VertexId, VertexId)> = self.edges.iter().map(|e| (e.a, e.b)).collect();
        pairs.extend(self.arcs().iter().map(|a| (a.from, a.to)));
        components_of(self.vertex_count(), &pairs)
    }

    /// Connected components of U(Γ): edges only, arcs forgotten.
    pub fn edge_components(&self) -> Vec<Vec<VertexId>> {
        let pairs: Vec<(VertexId, VertexId)> = self.edges.iter().map(|e| (e.a, e.b)).collect();
        components_of(self.vertex_count(), &pairs)
    }

    /// Simple-graph adjacency of T(Γ) (edges and arcs, loops dropped), 1-based.
    pub fn t_adjacency(&self) -> Vec<std::collections::BTreeSet<VertexId>> {
        let mut adj = vec![std::collections::BTreeSet::new(); self.vertex_count() + 1];
        for (x, y) in self
            .edges
            .iter()
            .map(|e| (e.a, e.b))
            .chain(self.arcs().iter().map(|a| (a.from, a.to)))
        {
            if x != y {
                adj[x as usize].insert(y);
                adj[y as usize].insert(x);
            }
        }
        adj
    }

    pub(crate) fn with_edges(&self, edges: Vec<Edge>) -> Diagram {
        Diagram::from_parts(self.convention, self.strands.clone(), self.free.clone(), edges)
    }
}

fn components_of(n: usize, pairs: &[(VertexId, VertexId)]) -> Vec<Vec<VertexId>> {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for v in 1..=n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v as VertexId);
    }
    groups.into_values().collect()
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.convention)?;
        for s in &self.strands {
            write!(f, " |{}|", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))?;
        }
        if !self.free.is_empty() {
            write!(f, " free {}", self.free.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))?;
        }
        write!(f, ";")?;
        for e in &self.edges {
            match (self.convention, e.is_loop()) {
                (Convention::Odd, true) => {
                    let o = if e.loop_bit() { "~" } else { "" };
                    write!(f, " {}{}o", e.a, o)?
                }
                (Convention::Odd, false) => write!(f, " {}>{}", e.tail(), e.head())?,
                (Convention::Even, _) => write!(f, " {}-{}", e.a, e.b)?,
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    convention: Convention,
    strands: Vec<Vec<VertexId>>,
    #[serde(default)]
    free: Vec<VertexId>,
    #[serde(default)]
    edges: Vec<Edge>,
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawDiagram {
            convention: self.convention,
            strands: self.strands.clone(),
            free: self.free.clone(),
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Diagram, D::Error> {
        let raw = RawDiagram::deserialize(d)?;
        Diagram::new(raw.convention, raw.strands, raw.free, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// Small constructors used throughout tests and examples.
pub mod build {
    use super::*;

    /// Odd-convention diagram from strands, free ids and `(tail, head)` pairs.
    /// A pair `(v, v)` is a self-loop with the canonical end order.
    pub fn odd(strands: &[&[VertexId]], free: &[VertexId], edges: &[(VertexId, VertexId)]) -> Diagram {
        make(Convention::Odd, strands, free, edges)
    }

    pub fn even(strands: &[&[VertexId]], free: &[VertexId], edges: &[(VertexId, VertexId)]) -> Diagram {
        make(Convention::Even, strands, free, edges)
    }

    pub fn make(
        convention: Convention,
        strands: &[&[VertexId]],
        free: &[VertexId],
        edges: &[(VertexId, VertexId)],
    ) -> Diagram {
        let edges = edges.iter().map(|&(t, h)| Edge::new(t, h)).collect();
        Diagram::new(convention, strands.iter().map(|s| s.to_vec()).collect(), free.to_vec(), edges)
            .expect("valid diagram")
    }

    /// Chord diagram on one strand with `2c` segment vertices.
    pub fn chords(convention: Convention, pairs: &[(VertexId, VertexId)]) -> Diagram {
        let q = 2 * pairs.len() as VertexId;
        let strand: Vec<VertexId> = (1..=q).collect();
        make(convention, &[&strand], &[], pairs)
    }

    /// Segments 1,2,3 on one strand joined to free vertex 4.
    pub fn tripod() -> Diagram {
        odd(&[&[1, 2, 3]], &[4], &[(1, 4), (2, 4), (3, 4)])
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;

    #[test]
    fn tripod_is_valid() {
        let t = tripod();
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.segment_count(), 3);
        assert_eq!(t.valence(4), 3);
        assert_eq!(t.valence(1), 3);
        assert_eq!(t.arcs().len(), 2);
    }

    #[test]
    fn free_self_loop_rejected() {
        let err = Diagram::new(
            Convention::Odd,
            vec![vec![1, 2]],
            vec![3],
            vec![Edge::new(1, 3), Edge::new(2, 3), Edge::new(3, 3)],
        )
        .unwrap_err();
        assert!(err.0.contains(&Violation::FreeSelfLoop(3)));
        assert!(err.to_string().contains("free self-loop"));
    }

    #[test]
    fn detached_triangle_rejected() {
        let err = Diagram::new(
            Convention::Odd,
            vec![vec![]],
            vec![1, 2, 3],
            vec![Edge::new(1, 2), Edge::new(2, 3), Edge::new(1, 3)],
        )
        .unwrap_err();
        assert!(err.0.contains(&Violation::Detached(vec![1, 2, 3])));
        assert!(err.to_string().contains("component not connected to L"));
    }

    #[test]
    fn duplicate_and_low_valence() {
        let err = Diagram::new(Convention::Odd, vec![vec![1, 1]], vec![], vec![]).unwrap_err();
        assert!(err.0.contains(&Violation::DuplicateId(1)));
        let err = Diagram::new(Convention::Odd, vec![vec![1, 2]], vec![], vec![]).unwrap_err();
        assert!(matches!(err.0[0], Violation::LowValence { vertex: 1, valence: 2 }));
    }

    #[test]
    fn ids_are_renumbered() {
        let d = Diagram::new(
            Convention::Odd,
            vec![vec![10, 20]],
            vec![],
            vec![Edge::new(10, 20)],
        )
        .unwrap();
        assert_eq!(d.strands(), &[vec![1, 2]]);
        assert_eq!(d.edges()[0].ends(), (1, 2));
    }

    #[test]
    fn json_round_trip() {
        let t = tripod();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"convention":"odd","strands":[[1,2,3]],"free":[4],"edges":[{"a":1,"b":4,"dir":"ab"},{"a":2,"b":4,"dir":"ab"},{"a":3,"b":4,"dir":"ab"}]}"#
        );
        let back: Diagram = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn element_parse() {
        assert_eq!("edge:2".parse::<Element>().unwrap(), Element::Edge(1));
        assert_eq!("arc:1:2".parse::<Element>().unwrap(), Element::Arc { strand: 0, pos: 1 });
        assert!("arc:0:1".parse::<Element>().is_err());
    }
}
