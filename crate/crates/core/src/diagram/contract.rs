use thiserror::Error;

use super::canon::{canonicalize, Canonical, ZeroReason};
use super::{Convention, Diagram, Direction, Edge, Element, LoopOrder, VertexId};
use crate::ring::Ring;
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("edge {0} is a self-loop; only non-self-loop edges contract")]
    SelfLoop(usize),
    #[error("no edge with index {0}")]
    NoSuchEdge(usize),
    #[error("no arc at strand {strand}, position {pos}")]
    NoSuchArc { strand: usize, pos: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractionOutcome {
    NonZero { diagram: Diagram, sign: Sign },
    ZeroPinch,
    ZeroMultiEdge,
    ZeroAutomorphism,
}

/// A labeled quotient `Γ/e` together with the bookkeeping that relates it to `Γ`.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// Relabeled per the contraction rule; may contain multiple edges.
    pub diagram: Diagram,
    /// Old vertex id to new vertex id (index 0 unused).
    pub vertex_map: Vec<VertexId>,
    /// Old edge index to new edge index; `None` for the contracted edge.
    pub edge_map: Vec<Option<usize>>,
    /// New edge index of the self-loop that the arc turns into when a chord
    /// between L-adjacent vertices is contracted.
    pub arc_loop: Option<usize>,
    pub merged: VertexId,
    /// Endpoints of the element in its own orientation: `(tail, head)` for an
    /// edge, `(earlier, later)` along L for an arc.
    pub ends: (VertexId, VertexId),
}

pub(crate) fn element_ends(d: &Diagram, el: Element) -> Result<(VertexId, VertexId), ContractError> {
    match el {
        Element::Edge(i) => {
            let e = d.edges().get(i).ok_or(ContractError::NoSuchEdge(i))?;
            if e.is_loop() {
                return Err(ContractError::SelfLoop(i));
            }
            Ok((e.tail(), e.head()))
        }
        Element::Arc { strand, pos } => {
            let a = d.arc(strand, pos).ok_or(ContractError::NoSuchArc { strand, pos })?;
            Ok((a.from, a.to))
        }
    }
}

/// The sign `ε(e)` with which `Γ/e` enters the coboundary.
pub fn epsilon(d: &Diagram, el: Element) -> Result<Sign, ContractError> {
    let (x, y) = element_ends(d, el)?;
    Ok(match (d.convention(), el) {
        (Convention::Odd, _) => {
            let j = x.max(y) as u64;
            if x < y {
                Sign::pow(j)
            } else {
                Sign::pow(j + 1)
            }
        }
        (Convention::Even, Element::Arc { .. }) => {
            let later = d.segment_label(y).expect("arc ends are segments") as u64;
            Sign::pow(later)
        }
        (Convention::Even, Element::Edge(i)) => match d.arc_between(x, y) {
            // The collision of L-neighbours removes a segment parameter and
            // keeps the chord as the tangent loop, exactly as the arc does.
            Some(a) => Sign::pow(d.segment_label(a.to).expect("arc ends are segments") as u64),
            None => Sign::pow(i as u64 + 1 + 1 + d.segment_count() as u64),
        },
    })
}

/// Contract one element, keeping labels: the merged vertex takes the smaller
/// id and ids above the larger one drop by one. Returns `None` when the
/// element pinches two segment vertices that are not adjacent along L.
pub fn quotient(d: &Diagram, el: Element) -> Result<Option<Quotient>, ContractError> {
    let (x, y) = element_ends(d, el)?;
    let chord_between_segments = matches!(el, Element::Edge(_)) && d.is_segment(x) && d.is_segment(y);
    if chord_between_segments && d.arc_between(x, y).is_none() {
        return Ok(None);
    }
    let (i, j) = (x.min(y), x.max(y));
    let n = d.vertex_count();
    let vertex_map: Vec<VertexId> = (0..=n as VertexId)
        .map(|v| {
            if v == j {
                i
            } else if v > j {
                v - 1
            } else {
                v
            }
        })
        .collect();
    let m = |v: VertexId| vertex_map[v as usize];
    let odd = d.convention() == Convention::Odd;

    let mut strands = Vec::with_capacity(d.strand_count());
    for s in d.strands() {
        let mut ns: Vec<VertexId> = Vec::with_capacity(s.len());
        for &v in s {
            let nv = m(v);
            if ns.last() != Some(&nv) {
                ns.push(nv);
            }
        }
        strands.push(ns);
    }
    let merged_is_segment = d.is_segment(x) || d.is_segment(y);
    let mut free: Vec<VertexId> = d
        .free_vertices()
        .iter()
        .map(|&v| m(v))
        .filter(|&v| !(merged_is_segment && v == i))
        .collect();
    free.sort_unstable();
    free.dedup();

    // Along-L order of the two ends, used to orient loops born from chords.
    let (early, _late) = match d.arc_between(x, y) {
        Some(a) => (a.from, a.to),
        None => (x, y),
    };

    let contracted_edge = match el {
        Element::Edge(k) => Some(k),
        Element::Arc { .. } => None,
    };
    let mut edges = Vec::with_capacity(d.edges().len());
    let mut edge_map = vec![None; d.edges().len()];
    let mut arc_loop = None;
    for (k, e) in d.edges().iter().enumerate() {
        if Some(k) == contracted_edge {
            if chord_between_segments {
                arc_loop = Some(edges.len());
                edges.push(Edge {
                    a: i,
                    b: i,
                    dir: Direction::Ab,
                    loop_order: odd.then_some(LoopOrder::Lr),
                });
            }
            continue;
        }
        let (na, nb) = (m(e.a), m(e.b));
        let ne = if na == nb && !e.is_loop() {
            let dir = if e.tail() == early { Direction::Ab } else { Direction::Ba };
            Edge {
                a: na,
                b: nb,
                dir: if odd { dir } else { Direction::Ab },
                loop_order: odd.then_some(LoopOrder::Lr),
            }
        } else {
            Edge { a: na, b: nb, dir: e.dir, loop_order: e.loop_order }
        };
        edge_map[k] = Some(edges.len());
        edges.push(ne);
    }
    Ok(Some(Quotient {
        diagram: Diagram::from_parts(d.convention(), strands, free, edges),
        vertex_map,
        edge_map,
        arc_loop,
        merged: i,
        ends: (x, y),
    }))
}

/// Contract `el` and canonicalize the result.
pub fn contract(d: &Diagram, el: Element, ring: Ring) -> Result<ContractionOutcome, ContractError> {
    let q = quotient(d, el)?;
    if d.has_multi_edge() {
        return Ok(ContractionOutcome::ZeroMultiEdge);
    }
    let Some(q) = q else {
        return Ok(ContractionOutcome::ZeroPinch);
    };
    Ok(match canonicalize(&q.diagram, ring) {
        Canonical::Form { diagram, sign } => ContractionOutcome::NonZero { diagram, sign },
        Canonical::Zero(ZeroReason::MultiEdge) => ContractionOutcome::ZeroMultiEdge,
        Canonical::Zero(ZeroReason::OrientationReversingAutomorphism) => ContractionOutcome::ZeroAutomorphism,
    })
}
