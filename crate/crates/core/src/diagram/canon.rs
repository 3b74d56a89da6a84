use std::collections::BTreeSet;

use thiserror::Error;

use super::{Convention, Diagram, Direction, Edge, LoopOrder, VertexId};
use crate::ring::Ring;
use crate::sign::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroReason {
    MultiEdge,
    OrientationReversingAutomorphism,
}

impl std::fmt::Display for ZeroReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ZeroReason::MultiEdge => "multi-edge",
            ZeroReason::OrientationReversingAutomorphism => "orientation-reversing automorphism",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canonical {
    Form { diagram: Diagram, sign: Sign },
    Zero(ZeroReason),
}

impl Canonical {
    pub fn form(&self) -> Option<(&Diagram, Sign)> {
        match self {
            Canonical::Form { diagram, sign } => Some((diagram, *sign)),
            Canonical::Zero(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("diagram has automorphisms of both signs; its isomorphism sign is ambiguous")]
    Ambiguous,
}

/// Every labeling that carries a diagram onto its canonical form.
#[derive(Clone, Debug)]
pub struct CanonicalLabelings {
    pub diagram: Diagram,
    /// `(phi, sign)` where `phi[v]` is the canonical id of input vertex `v`
    /// (`phi[0]` unused) and the input is `sign` times the canonical form.
    pub labelings: Vec<(Vec<VertexId>, Sign)>,
}

impl CanonicalLabelings {
    pub fn sign(&self) -> Sign {
        self.labelings[0].1
    }

    pub fn automorphism_signs(&self) -> BTreeSet<Sign> {
        let s0 = self.sign();
        self.labelings.iter().map(|(_, s)| *s * s0).collect()
    }
}

/// Relabel `d` by `phi` (input id to new id), normalizing every edge to
/// low id to high id and every self-loop to the canonical end order, and
/// sorting the edge list. Returns the relabeled diagram and the sign `s`
/// with `d = s * result`.
pub fn apply_labeling(d: &Diagram, phi: &[VertexId]) -> (Diagram, Sign) {
    let odd = d.convention() == Convention::Odd;
    let strands: Vec<Vec<VertexId>> =
        d.strands().iter().map(|s| s.iter().map(|&v| phi[v as usize]).collect()).collect();
    let free: Vec<VertexId> = d.free_vertices().iter().map(|&v| phi[v as usize]).collect();
    let mut flips = 0u64;
    let mut keyed: Vec<(Edge, usize)> = Vec::with_capacity(d.edges().len());
    for (i, e) in d.edges().iter().enumerate() {
        let ne = if e.is_loop() {
            if odd && e.loop_bit() {
                flips += 1;
            }
            let v = phi[e.a as usize];
            Edge { a: v, b: v, dir: Direction::Ab, loop_order: odd.then_some(LoopOrder::Lr) }
        } else {
            let (t, h) = (phi[e.tail() as usize], phi[e.head() as usize]);
            if t > h && odd {
                flips += 1;
            }
            Edge { a: t.min(h), b: t.max(h), dir: Direction::Ab, loop_order: None }
        };
        keyed.push((ne, i));
    }
    keyed.sort();
    let sign = if odd {
        let perm: Vec<usize> = (1..phi.len()).map(|v| phi[v] as usize - 1).collect();
        Sign::of_permutation(&perm) * Sign::pow(flips)
    } else {
        let order: Vec<usize> = keyed.iter().map(|(_, i)| *i).collect();
        Sign::of_permutation(&order)
    };
    let edges = keyed.into_iter().map(|(e, _)| e).collect();
    (Diagram::from_parts(d.convention(), strands, free, edges), sign)
}

struct Search {
    q: VertexId,
    degree: Vec<usize>,
    adj: Vec<Vec<VertexId>>,
    free: Vec<VertexId>,
    label: Vec<VertexId>,
    cur: Vec<Vec<VertexId>>,
    best: Option<Vec<Vec<VertexId>>>,
    leaves: Vec<Vec<VertexId>>,
}

impl Search {
    fn row(&self, v: VertexId) -> Vec<VertexId> {
        let mut r: Vec<VertexId> = self.adj[v as usize]
            .iter()
            .map(|&u| self.label[u as usize])
            .filter(|&l| l != 0)
            .collect();
        r.sort_unstable();
        r.insert(0, self.degree[v as usize] as VertexId);
        r
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.free.len() {
            match &self.best {
                Some(b) if *b == self.cur => self.leaves.push(self.label.clone()),
                Some(b) if *b < self.cur => {}
                _ => {
                    self.best = Some(self.cur.clone());
                    self.leaves = vec![self.label.clone()];
                }
            }
            return;
        }
        let candidates: Vec<(Vec<VertexId>, VertexId)> = self
            .free
            .iter()
            .filter(|&&v| self.label[v as usize] == 0)
            .map(|&v| (self.row(v), v))
            .collect();
        let min = candidates.iter().map(|(r, _)| r).min().cloned().expect("unlabeled free vertex");
        if let Some(b) = &self.best {
            let prefix_equal = b[..depth] == self.cur[..];
            if prefix_equal && min > b[depth] {
                return;
            }
        }
        for (r, v) in candidates {
            if r != min {
                continue;
            }
            self.label[v as usize] = self.q + depth as VertexId + 1;
            self.cur.push(r);
            self.descend(depth + 1);
            self.cur.pop();
            self.label[v as usize] = 0;
        }
    }
}

/// All labelings realizing the canonical form. Segment vertices receive ids
/// `1..q` in strand-major order; free vertices are ordered by a
/// lexicographically least adjacency encoding.
pub fn canonical_labelings(d: &Diagram) -> CanonicalLabelings {
    let n = d.vertex_count();
    let mut label = vec![0 as VertexId; n + 1];
    for (i, v) in d.segments_in_order().enumerate() {
        label[v as usize] = i as VertexId + 1;
    }
    let mut adj = vec![Vec::new(); n + 1];
    let mut degree = vec![0usize; n + 1];
    for e in d.edges() {
        degree[e.a as usize] += 1;
        degree[e.b as usize] += 1;
        if !e.is_loop() {
            adj[e.a as usize].push(e.b);
            adj[e.b as usize].push(e.a);
        }
    }
    let mut s = Search {
        q: d.segment_count() as VertexId,
        degree,
        adj,
        free: d.free_vertices().to_vec(),
        label,
        cur: Vec::new(),
        best: None,
        leaves: Vec::new(),
    };
    s.descend(0);
    let mut labelings: Vec<(Vec<VertexId>, Sign)> = Vec::with_capacity(s.leaves.len());
    let mut canon = None;
    for phi in s.leaves {
        let (c, sign) = apply_labeling(d, &phi);
        if canon.is_none() {
            canon = Some(c);
        } else {
            debug_assert_eq!(canon.as_ref(), Some(&c));
        }
        labelings.push((phi, sign));
    }
    CanonicalLabelings { diagram: canon.expect("at least one leaf"), labelings }
}

/// Canonical representative and orientation sign, or the reason the diagram
/// vanishes over `ring`.
pub fn canonicalize(d: &Diagram, ring: Ring) -> Canonical {
    if d.has_multi_edge() {
        return Canonical::Zero(ZeroReason::MultiEdge);
    }
    let cl = canonical_labelings(d);
    if ring.char_not_two() && cl.automorphism_signs().len() > 1 {
        return Canonical::Zero(ZeroReason::OrientationReversingAutomorphism);
    }
    let sign = cl.sign();
    Canonical::Form { diagram: cl.diagram, sign }
}

pub fn automorphism_signs(d: &Diagram) -> BTreeSet<Sign> {
    canonical_labelings(d).automorphism_signs()
}

/// Sign `s` with `a = s * b` under some strand-preserving isomorphism.
pub fn iso_sign(a: &Diagram, b: &Diagram) -> Result<Option<Sign>, IsoError> {
    if a.convention() != b.convention() || a.strand_count() != b.strand_count() {
        return Ok(None);
    }
    let ca = canonical_labelings(a);
    let cb = canonical_labelings(b);
    if ca.diagram != cb.diagram {
        return Ok(None);
    }
    if ca.automorphism_signs().len() > 1 {
        return Err(IsoError::Ambiguous);
    }
    Ok(Some(ca.sign() * cb.sign()))
}

/// A differently labeled copy `d'` of `d` with `d = -d'`, if one exists.
pub fn reversed_labeling(d: &Diagram) -> Option<Diagram> {
    let mut edges = d.edges().to_vec();
    match d.convention() {
        Convention::Odd => {
            if let Some(e) = edges.iter_mut().find(|e| !e.is_loop()) {
                e.dir = match e.dir {
                    Direction::Ab => Direction::Ba,
                    Direction::Ba => Direction::Ab,
                };
            } else if let Some(e) = edges.first_mut() {
                e.loop_order = match e.loop_order {
                    Some(LoopOrder::Rl) => Some(LoopOrder::Lr),
                    _ => Some(LoopOrder::Rl),
                };
            } else {
                return None;
            }
        }
        Convention::Even => {
            if edges.len() < 2 {
                return None;
            }
            edges.swap(0, 1);
        }
    }
    Some(d.with_edges(edges))
}
