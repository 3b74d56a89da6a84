use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::identify::{face_quotient, hidden_fold_signature, induced_alpha, induced_signature};
use super::plan::{bivalent_free, classify_principal, PrincipalKind};
use super::*;
use crate::diagram::{apply_labeling, epsilon};
use crate::strata::{enumerate_faces, PrincipalFace, SimpleGraph};

fn principal_labels(f: &PlanFace) -> Option<(&[VertexId; 2], &[Element])> {
    match &f.face {
        Face::Principal { pair, labels } => Some((pair, labels)),
        _ => None,
    }
}

fn beta_from(pairs: &[[VertexId; 2]], n: usize) -> Option<Vec<VertexId>> {
    let mut beta = vec![0 as VertexId; n + 1];
    for &[x, y] in pairs {
        if x == 0 || x as usize > n || beta[x as usize] != 0 {
            return None;
        }
        beta[x as usize] = y;
    }
    beta.iter().skip(1).all(|&t| t != 0).then_some(beta)
}

fn identity(n: usize) -> Vec<VertexId> {
    (0..=n as VertexId).collect()
}

fn space_of<'a>(plan: &'a GluingPlan, f: &PlanFace) -> Option<&'a Space> {
    plan.spaces.get(f.space).filter(|s| f.copy < s.copies)
}

fn coefficient_sign(s: &Space) -> Sign {
    if s.coefficient.is_negative() {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

fn check_pairing(plan: &GluingPlan, i: usize, p: &Pairing) -> Vec<String> {
    let mut out = Vec::new();
    let tag = format!("pairing {i}");
    let (Some(sa), Some(sb)) = (space_of(plan, &p.face_a), space_of(plan, &p.face_b)) else {
        return vec![format!("{tag}: refers to a missing space or copy")];
    };
    let [la, lb] = p.identification.labels;
    match (principal_labels(&p.face_a), principal_labels(&p.face_b)) {
        (Some((_, a)), Some((_, b))) if a.contains(&la) && b.contains(&lb) => {}
        _ => return vec![format!("{tag}: faces are not principal faces carrying the matched labels")],
    }
    let (a, b) = (&sa.diagram, &sb.diagram);
    let Some(beta) = beta_from(&p.identification.vertex_map, a.vertex_count()) else {
        return vec![format!("{tag}: vertex map is not defined on every vertex")];
    };
    let sig = match induced_signature(a, la, b, lb, &beta, plan.n) {
        Ok(s) => s,
        Err(e) => return vec![format!("{tag}: {e}")],
    };
    let recorded = &p.identification.signature;
    let integer = plan.ring == Ring::Z;
    if !recorded.is_permutation() || recorded.perm.len() != plan.n {
        out.push(format!("{tag}: signature is not a permutation of 1..{}", plan.n));
    }
    if recorded.perm != sig.perm || (integer && recorded.flips != sig.flips) {
        out.push(format!("{tag}: recorded signature ({recorded}) differs from the induced one ({sig})"));
    }
    if integer && plan.d_parity == Parity::Odd && !recorded.in_odd_group() {
        out.push(format!("{tag}: flip set of odd size {}", recorded.flips.len()));
    }
    let (Ok(qa), Ok(qb)) = (face_quotient(a, la), face_quotient(b, lb)) else {
        out.push(format!("{tag}: a matched label pinches"));
        return out;
    };
    let Some(alpha) = induced_alpha(a, &qa, b, &qb, &beta) else {
        out.push(format!("{tag}: vertex map does not match the colliding pairs"));
        return out;
    };
    let (ra, s_a) = apply_labeling(&qa.diagram, &alpha);
    let (rb, s_b) = apply_labeling(&qb.diagram, &identity(qb.diagram.vertex_count()));
    if ra != rb || qa.diagram.has_multi_edge() {
        out.push(format!("{tag}: vertex map does not realize an isomorphism of the quotients"));
        return out;
    }
    if integer {
        match (epsilon(a, la), epsilon(b, lb)) {
            (Ok(ea), Ok(eb)) => {
                let side_a = coefficient_sign(sa) * ea * s_a * s_b;
                let side_b = coefficient_sign(sb) * eb;
                if side_a != -side_b {
                    out.push(format!("{tag}: induced boundary orientations agree instead of cancelling"));
                }
            }
            _ => out.push(format!("{tag}: contraction sign undefined")),
        }
    }
    out
}

fn check_principal_fold(plan: &GluingPlan, i: usize, f: &PrincipalFold) -> Vec<String> {
    let tag = format!("principal fold {i}");
    let Some(s) = space_of(plan, &f.face) else {
        return vec![format!("{tag}: refers to a missing space or copy")];
    };
    let Some((pair, labels)) = principal_labels(&f.face) else {
        return vec![format!("{tag}: face is not principal")];
    };
    if !labels.contains(&f.label) {
        return vec![format!("{tag}: label {} is not on the face", f.label)];
    }
    let d = &s.diagram;
    let Some(beta) = beta_from(&f.automorphism, d.vertex_count()) else {
        return vec![format!("{tag}: automorphism is not defined on every vertex")];
    };
    let is_transposition = d.vertices().all(|v| {
        let t = beta[v as usize];
        if v == pair[0] {
            t == pair[1]
        } else if v == pair[1] {
            t == pair[0]
        } else {
            t == v
        }
    });
    let mut out = Vec::new();
    if plan.ring == Ring::Z2 {
        if !is_transposition {
            let ok = face_quotient(d, f.label)
                .ok()
                .and_then(|q| {
                    let alpha = induced_alpha(d, &q, d, &q, &beta)?;
                    let n = q.diagram.vertex_count();
                    Some(apply_labeling(&q.diagram, &alpha).0 == apply_labeling(&q.diagram, &identity(n)).0)
                })
                .unwrap_or(false);
            if !ok {
                out.push(format!("{tag}: map is neither the transposition of the pair nor a quotient automorphism"));
            }
        }
        return out;
    }
    let Ok(q) = face_quotient(d, f.label) else {
        return vec![format!("{tag}: label pinches")];
    };
    let Some(alpha) = induced_alpha(d, &q, d, &q, &beta) else {
        return vec![format!("{tag}: map does not preserve the colliding pair")];
    };
    let n = q.diagram.vertex_count();
    let (r1, s1) = apply_labeling(&q.diagram, &alpha);
    let (r0, s0) = apply_labeling(&q.diagram, &identity(n));
    if r1 != r0 {
        out.push(format!("{tag}: map is not an automorphism of the quotient"));
    } else if s1 * s0 != Sign::Minus {
        out.push(format!("{tag}: automorphism preserves orientation"));
    }
    match induced_signature(d, f.label, d, f.label, &beta, plan.n) {
        Ok(sig) if sig == f.signature => {}
        Ok(sig) => out.push(format!("{tag}: recorded signature ({}) differs from the induced one ({sig})", f.signature)),
        Err(e) => out.push(format!("{tag}: {e}")),
    }
    if !f.signature.in_odd_group() {
        out.push(format!("{tag}: flip set of odd size {}", f.signature.flips.len()));
    }
    out
}

fn check_hidden_fold(plan: &GluingPlan, i: usize, h: &HiddenFold) -> Vec<String> {
    let tag = format!("hidden fold {i}");
    let Some(s) = space_of(plan, &h.face) else {
        return vec![format!("{tag}: refers to a missing space or copy")];
    };
    let Face::Hidden { vertices } = &h.face.face else {
        return vec![format!("{tag}: face is not hidden")];
    };
    let w: BTreeSet<VertexId> = vertices.iter().copied().collect();
    let d = &s.diagram;
    let mut out = Vec::new();
    let [u, x] = h.neighbors;
    if !bivalent_free(d, &w).contains(&(h.v, u.min(x), u.max(x))) {
        out.push(format!("{tag}: vertex {} is not a free vertex joined to exactly {u} and {x} inside the face", h.v));
        return out;
    }
    match hidden_fold_signature(d, h.v, u, x, plan.n) {
        Ok(mut sig) => {
            if plan.ring == Ring::Z2 {
                sig.flips.clear();
            }
            if sig != h.signature {
                out.push(format!("{tag}: recorded signature ({}) differs from the induced one ({sig})", h.signature));
            }
        }
        Err(e) => out.push(format!("{tag}: {e}")),
    }
    if plan.ring == Ring::Z {
        if plan.d % 2 == 0 {
            out.push(format!("{tag}: the reflection preserves orientation in even dimension"));
        }
        if !h.signature.in_odd_group() {
            out.push(format!("{tag}: flip set of odd size"));
        }
    }
    out
}

fn check_collapse(plan: &GluingPlan, i: usize, c: &Collapse) -> Vec<String> {
    let tag = format!("collapse {i}");
    let Some(s) = space_of(plan, &c.face) else {
        return vec![format!("{tag}: refers to a missing space or copy")];
    };
    let Face::Hidden { vertices } = &c.face.face else {
        return vec![format!("{tag}: only hidden faces collapse")];
    };
    let d = &s.diagram;
    let w: BTreeSet<VertexId> = vertices.iter().copied().collect();
    let ok = match c.kind {
        CollapseKind::C1 => w.iter().any(|&v| {
            d.is_segment(v) && !d.edges().iter().any(|e| e.touches(v) && (e.is_loop() || w.contains(&e.other(v))))
        }),
        CollapseKind::C2 => {
            SimpleGraph::u_graph(d).components().iter().filter(|comp| comp.iter().any(|v| w.contains(v))).count() >= 2
        }
    };
    if ok {
        Vec::new()
    } else {
        vec![format!("{tag}: face {} does not admit a {:?} collapse", c.face.face, c.kind)]
    }
}

fn check_degenerate(plan: &GluingPlan, i: usize, g: &Degenerate) -> Vec<String> {
    let fits = matches!(
        (&g.face.face, g.reason),
        (Face::Infinity { .. }, DegenerateReason::Infinity)
            | (Face::Hidden { .. }, DegenerateReason::RigidHidden)
            | (Face::Principal { .. }, DegenerateReason::MultiEdgeQuotient | DegenerateReason::Pinch)
    );
    let mut out = Vec::new();
    if space_of(plan, &g.face).is_none() {
        out.push(format!("degenerate {i}: refers to a missing space or copy"));
    }
    if !fits {
        out.push(format!("degenerate {i}: reason {:?} does not fit {}", g.reason, g.face.face));
    }
    out
}

/// Check a plan: exactly-once face accounting, every identification and
/// fold, and the vanishing of the signed boundary sum per contraction class.
pub fn verify_fundamental_cycle(plan: &GluingPlan) -> VerificationReport {
    let mut failures = Vec::new();
    let integer = plan.ring == Ring::Z;

    let mut expected: BTreeMap<PlanFace, usize> = BTreeMap::new();
    for (i, s) in plan.spaces.iter().enumerate() {
        if s.diagram.edges().len() + s.absent_edges != plan.n {
            failures.push(format!("space {i}: absent edge count {} does not fill N = {}", s.absent_edges, plan.n));
        }
        if integer && s.coefficient.abs() != s.copies.into() {
            failures.push(format!("space {i}: {} copies for coefficient {}", s.copies, s.coefficient));
        }
        match enumerate_faces(&s.diagram) {
            Ok(fs) => {
                for face in fs.faces() {
                    for copy in 0..s.copies {
                        *expected.entry(PlanFace { space: i, copy, face: face.clone() }).or_default() += 1;
                    }
                }
            }
            Err(e) => failures.push(format!("space {i}: {e}")),
        }
    }
    let mut seen: BTreeMap<PlanFace, usize> = BTreeMap::new();
    let mut note = |f: &PlanFace| *seen.entry(f.clone()).or_default() += 1;
    for p in &plan.pairings {
        note(&p.face_a);
        note(&p.face_b);
    }
    plan.principal_folds.iter().for_each(|f| note(&f.face));
    plan.hidden_folds.iter().for_each(|f| note(&f.face));
    plan.collapses.iter().for_each(|f| note(&f.face));
    plan.degenerate.iter().for_each(|f| note(&f.face));
    let keys: BTreeSet<&PlanFace> = expected.keys().chain(seen.keys()).collect();
    for k in keys {
        let (want, got) = (expected.get(k).copied().unwrap_or(0), seen.get(k).copied().unwrap_or(0));
        if want != got {
            failures.push(format!("accounting: {k} appears {got} time(s), expected {want}"));
        }
    }

    for (i, p) in plan.pairings.iter().enumerate() {
        failures.extend(check_pairing(plan, i, p));
    }
    for (i, f) in plan.principal_folds.iter().enumerate() {
        failures.extend(check_principal_fold(plan, i, f));
    }
    for (i, h) in plan.hidden_folds.iter().enumerate() {
        failures.extend(check_hidden_fold(plan, i, h));
    }
    for (i, c) in plan.collapses.iter().enumerate() {
        failures.extend(check_collapse(plan, i, c));
    }
    for (i, g) in plan.degenerate.iter().enumerate() {
        failures.extend(check_degenerate(plan, i, g));
    }

    // Signed boundary sum over the paired principal faces. A folded face is
    // glued to itself and leaves no boundary.
    let ring = if integer { Ring::Z } else { Ring::Z2 };
    let mut sums: BTreeMap<Diagram, i64> = BTreeMap::new();
    let glued = plan
        .pairings
        .iter()
        .flat_map(|p| [&p.face_a, &p.face_b]);
    for f in glued {
        let (Some(s), Some((pair, labels))) = (space_of(plan, f), principal_labels(f)) else {
            continue;
        };
        let pf = PrincipalFace { pair: *pair, labels: labels.to_vec() };
        match classify_principal(&s.diagram, &pf, ring) {
            Ok(PrincipalKind::Class { class, signed, .. }) => {
                *sums.entry(class).or_default() += (coefficient_sign(s) * signed).to_i64();
            }
            Ok(_) => {}
            Err(e) => failures.push(format!("{f}: {e}")),
        }
    }
    let unbalanced: Vec<String> = sums
        .into_iter()
        .filter(|(_, v)| if integer { *v != 0 } else { v % 2 != 0 })
        .map(|(class, v)| format!("{class}: {v}"))
        .collect();
    VerificationReport { pass: failures.is_empty() && unbalanced.is_empty(), unbalanced, failures }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSignature {
    pub source: String,
    pub signature: SphericalSignature,
}

/// One signature per pairing, fold and collapse; collapses do not move
/// sphere factors.
pub fn spherical_signatures(plan: &GluingPlan) -> Vec<LabeledSignature> {
    let mut out = Vec::new();
    for (i, p) in plan.pairings.iter().enumerate() {
        out.push(LabeledSignature { source: format!("pairing {i}"), signature: p.identification.signature.clone() });
    }
    for (i, f) in plan.principal_folds.iter().enumerate() {
        out.push(LabeledSignature { source: format!("principal fold {i}"), signature: f.signature.clone() });
    }
    for (i, h) in plan.hidden_folds.iter().enumerate() {
        out.push(LabeledSignature { source: format!("hidden fold {i}"), signature: h.signature.clone() });
    }
    for (i, _) in plan.collapses.iter().enumerate() {
        out.push(LabeledSignature { source: format!("collapse {i}"), signature: SphericalSignature::identity(plan.n) });
    }
    out
}
