//! Vertex bijections between faces and the sphere-factor data they induce.

use std::collections::BTreeMap;

use super::{EndpointMatch, GluingError, SphericalSignature};
use crate::diagram::{apply_labeling, canonical_labelings, quotient, Diagram, Element, Quotient, VertexId};
use crate::sign::Sign;

pub(crate) fn face_quotient(d: &Diagram, label: Element) -> Result<Quotient, GluingError> {
    quotient(d, label)?.ok_or_else(|| GluingError::Identification {
        a: d.to_string(),
        b: label.to_string(),
        reason: "the element pinches two segment vertices that are not neighbours".into(),
    })
}

fn identity_map(n: usize) -> Vec<VertexId> {
    (0..=n as VertexId).collect()
}

/// Isomorphisms `Q_a -> Q_b` (indexed by `Q_a` vertex, slot 0 unused) that
/// send the collision point to the collision point, sorted.
pub(crate) fn quotient_isos(qa: &Quotient, qb: &Quotient) -> Vec<Vec<VertexId>> {
    let cla = canonical_labelings(&qa.diagram);
    let clb = canonical_labelings(&qb.diagram);
    if cla.diagram != clb.diagram {
        return Vec::new();
    }
    let psi = &clb.labelings[0].0;
    let mut inv = vec![0 as VertexId; psi.len()];
    for (v, &c) in psi.iter().enumerate().skip(1) {
        inv[c as usize] = v as VertexId;
    }
    let mut out: Vec<Vec<VertexId>> = cla
        .labelings
        .iter()
        .map(|(phi, _)| phi.iter().enumerate().map(|(p, &c)| if p == 0 { 0 } else { inv[c as usize] }).collect())
        .filter(|alpha: &Vec<VertexId>| alpha[qa.merged as usize] == qb.merged)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Automorphisms of a quotient that fix the collision point, with their
/// orientation signs, sorted by vertex map.
pub(crate) fn quotient_automorphisms(q: &Quotient) -> Vec<(Vec<VertexId>, Sign)> {
    let n = q.diagram.vertex_count();
    let (r0, s0) = apply_labeling(&q.diagram, &identity_map(n));
    let mut out: Vec<(Vec<VertexId>, Sign)> = quotient_isos(q, q)
        .into_iter()
        .filter_map(|alpha| {
            let (r, s) = apply_labeling(&q.diagram, &alpha);
            (r == r0).then_some((alpha, s * s0))
        })
        .collect();
    out.sort();
    out
}

/// Vertex bijection `Γ_a -> Γ_b` lifting `alpha`, indexed by `Γ_a` vertex.
pub(crate) fn lift(
    a: &Diagram,
    qa: &Quotient,
    b: &Diagram,
    qb: &Quotient,
    alpha: &[VertexId],
    m: EndpointMatch,
) -> Vec<VertexId> {
    let mut pre = vec![0 as VertexId; qb.diagram.vertex_count() + 1];
    for u in b.vertices() {
        if u != qb.ends.0 && u != qb.ends.1 {
            pre[qb.vertex_map[u as usize] as usize] = u;
        }
    }
    let (first, second) = match m {
        EndpointMatch::Direct => (qb.ends.0, qb.ends.1),
        EndpointMatch::Swapped => (qb.ends.1, qb.ends.0),
    };
    let mut beta = vec![0 as VertexId; a.vertex_count() + 1];
    for v in a.vertices() {
        beta[v as usize] = if v == qa.ends.0 {
            first
        } else if v == qa.ends.1 {
            second
        } else {
            pre[alpha[qa.vertex_map[v as usize] as usize] as usize]
        };
    }
    beta
}

/// The quotient map `Q_a -> Q_b` induced by a vertex bijection, if the
/// bijection sends the colliding pair onto the colliding pair.
pub(crate) fn induced_alpha(
    a: &Diagram,
    qa: &Quotient,
    b: &Diagram,
    qb: &Quotient,
    beta: &[VertexId],
) -> Option<Vec<VertexId>> {
    if beta.len() != a.vertex_count() + 1 || a.vertex_count() != b.vertex_count() {
        return None;
    }
    let mut seen = vec![false; beta.len()];
    for v in a.vertices() {
        let t = beta[v as usize];
        if t == 0 || t as usize >= seen.len() || seen[t as usize] {
            return None;
        }
        seen[t as usize] = true;
    }
    let ends_b = [qb.ends.0, qb.ends.1];
    if !ends_b.contains(&beta[qa.ends.0 as usize]) || !ends_b.contains(&beta[qa.ends.1 as usize]) {
        return None;
    }
    let mut alpha = vec![0 as VertexId; qa.diagram.vertex_count() + 1];
    for v in a.vertices() {
        alpha[qa.vertex_map[v as usize] as usize] = qb.vertex_map[beta[v as usize] as usize];
    }
    Some(alpha)
}

fn fail(a: &Diagram, b: &Diagram, reason: impl Into<String>) -> GluingError {
    GluingError::Identification { a: a.to_string(), b: b.to_string(), reason: reason.into() }
}

/// Permutation and antipodal flips of the `n` sphere factors induced by the
/// vertex bijection `beta` between the faces `la` of `a` and `lb` of `b`.
///
/// Factor `k` of a space is its `k`-th edge for `k <= |E|` and an absent
/// factor beyond. The contracted edge's collision direction is matched
/// with the other side's contracted edge, or with its first absent factor
/// when the other side contracts an arc.
pub fn induced_signature(
    a: &Diagram,
    la: Element,
    b: &Diagram,
    lb: Element,
    beta: &[VertexId],
    n: usize,
) -> Result<SphericalSignature, GluingError> {
    let qa = face_quotient(a, la)?;
    let qb = face_quotient(b, lb)?;
    let alpha = induced_alpha(a, &qa, b, &qb, beta).ok_or_else(|| fail(a, b, "vertex map is not a bijection of the colliding pairs"))?;
    let (ea, eb) = (a.edges().len(), b.edges().len());
    if ea > n || eb > n {
        return Err(fail(a, b, format!("more edges than the {n} sphere factors")));
    }

    let mut q_index: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (j, e) in qb.diagram.edges().iter().enumerate() {
        if q_index.insert(e.ends(), j).is_some() {
            return Err(fail(a, b, "quotient has a multiple edge"));
        }
    }
    let mut b_of_q = vec![None; qb.diagram.edges().len()];
    for (k, img) in qb.edge_map.iter().enumerate() {
        if let Some(j) = img {
            b_of_q[*j] = Some(k);
        }
    }

    let mut perm = vec![0usize; n];
    let mut used = vec![false; n];
    let mut flips = Vec::new();
    let mut assign = |from: usize, to: usize, flip: bool, perm: &mut Vec<usize>, flips: &mut Vec<usize>| {
        perm[from - 1] = to;
        used[to - 1] = true;
        if flip {
            flips.push(from);
        }
    };
    let contracted_flip = beta[qa.ends.0 as usize] != qb.ends.0;
    let mut a_absent_start = ea + 1;
    for k in 0..ea {
        if la == Element::Edge(k) {
            let to = match lb {
                Element::Edge(kb) => kb + 1,
                Element::Arc { .. } => eb + 1,
            };
            if to > n {
                return Err(fail(a, b, "no absent factor absorbs the collision direction"));
            }
            assign(k + 1, to, contracted_flip, &mut perm, &mut flips);
            continue;
        }
        let j = qa.edge_map[k].ok_or_else(|| fail(a, b, "edge lost in the quotient"))?;
        let qe = &qa.diagram.edges()[j];
        let (p, r) = (alpha[qe.a as usize], alpha[qe.b as usize]);
        let jb = *q_index.get(&(p.min(r), p.max(r))).ok_or_else(|| fail(a, b, "quotient map is not an isomorphism"))?;
        let kb = b_of_q[jb].ok_or_else(|| fail(a, b, "edge matches the other side's tangent loop"))?;
        let qbe = &qb.diagram.edges()[jb];
        let flip = if qe.is_loop() {
            qe.loop_bit() != qbe.loop_bit()
        } else {
            alpha[qe.tail() as usize] != qbe.tail()
        };
        assign(k + 1, kb + 1, flip, &mut perm, &mut flips);
    }
    if let (Element::Arc { .. }, Element::Edge(kb)) = (la, lb) {
        if ea + 1 > n {
            return Err(fail(a, b, "no absent factor absorbs the collision direction"));
        }
        assign(ea + 1, kb + 1, contracted_flip, &mut perm, &mut flips);
        a_absent_start = ea + 2;
    }
    let mut free_targets = (1..=n).filter(|&t| !used[t - 1]).collect::<Vec<_>>().into_iter();
    for from in a_absent_start..=n {
        let to = free_targets.next().ok_or_else(|| fail(a, b, "sphere factor count mismatch"))?;
        perm[from - 1] = to;
    }
    flips.sort_unstable();
    Ok(SphericalSignature { perm, flips })
}

/// Signature of the involution `x_v -> x_u + x_w - x_v`: the factors of
/// the edges `{u,v}` and `{v,w}` are exchanged, and both are flipped when
/// exactly one of the two edges points along the path `u -> v -> w`.
pub fn hidden_fold_signature(
    d: &Diagram,
    v: VertexId,
    u: VertexId,
    w: VertexId,
    n: usize,
) -> Result<SphericalSignature, GluingError> {
    let find = |x: VertexId, y: VertexId| {
        d.edges()
            .iter()
            .position(|e| !e.is_loop() && e.touches(x) && e.other(x) == y)
            .ok_or_else(|| fail(d, d, format!("no edge joins {x} and {y}")))
    };
    let k1 = find(u, v)?;
    let k2 = find(v, w)?;
    let mut sig = SphericalSignature::identity(n);
    sig.perm.swap(k1, k2);
    let along1 = d.edges()[k1].tail() == u;
    let along2 = d.edges()[k2].tail() == v;
    if along1 != along2 {
        sig.flips = vec![k1.min(k2) + 1, k1.max(k2) + 1];
    }
    Ok(sig)
}

/// Candidate identifications of two faces: every collision-preserving
/// quotient isomorphism with every admissible endpoint matching. An arc on
/// either side fixes the order of its endpoints, so only both-arc faces are
/// restricted to the direct matching.
pub(crate) fn candidates(
    a: &Diagram,
    la: Element,
    b: &Diagram,
    lb: Element,
    n: usize,
    automorphisms_only: Option<Sign>,
) -> Result<Vec<(Vec<VertexId>, EndpointMatch, SphericalSignature)>, GluingError> {
    let qa = face_quotient(a, la)?;
    let qb = face_quotient(b, lb)?;
    let alphas: Vec<Vec<VertexId>> = match automorphisms_only {
        Some(want) => quotient_automorphisms(&qa).into_iter().filter(|(_, s)| *s == want).map(|(x, _)| x).collect(),
        None => quotient_isos(&qa, &qb),
    };
    let both_arcs = matches!((la, lb), (Element::Arc { .. }, Element::Arc { .. }));
    let matches: &[EndpointMatch] =
        if both_arcs { &[EndpointMatch::Direct] } else { &[EndpointMatch::Direct, EndpointMatch::Swapped] };
    let mut out = Vec::new();
    for alpha in &alphas {
        for &m in matches {
            let beta = lift(a, &qa, b, &qb, alpha, m);
            let sig = induced_signature(a, la, b, lb, &beta, n)?;
            out.push((beta, m, sig));
        }
    }
    Ok(out)
}
