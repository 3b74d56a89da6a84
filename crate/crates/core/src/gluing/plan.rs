use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::identify::{candidates, hidden_fold_signature};
use super::verify::verify_fundamental_cycle;
use super::*;
use crate::complex::{grading, Cochain};
use crate::diagram::{contract, epsilon, ContractionOutcome, Convention};
use crate::homology::{consistent_orientation, ConsistentExpression};
use crate::strata::{codim_certificate, enumerate_faces, PrincipalFace, SimpleGraph};

/// What one principal face does in a plan, before copies are considered.
#[derive(Clone, Debug)]
pub(crate) enum PrincipalKind {
    Pinch,
    MultiEdge,
    /// Arc plus parallel chord: both labels land in one class.
    Combined,
    Class { label: Element, class: Diagram, signed: Sign },
    /// Zero over `Z` because the quotient has an orientation-reversing automorphism.
    AutomorphismZero { label: Element },
}

pub(crate) fn classify_principal(d: &Diagram, pf: &PrincipalFace, ring: Ring) -> Result<PrincipalKind, GluingError> {
    let mut outcomes = Vec::with_capacity(pf.labels.len());
    for &l in &pf.labels {
        outcomes.push((l, contract(d, l, ring)?));
    }
    if outcomes.iter().any(|(_, o)| *o == ContractionOutcome::ZeroPinch) {
        return Ok(PrincipalKind::Pinch);
    }
    if outcomes.iter().all(|(_, o)| *o == ContractionOutcome::ZeroMultiEdge) {
        return Ok(PrincipalKind::MultiEdge);
    }
    if outcomes.len() > 1 {
        return Ok(PrincipalKind::Combined);
    }
    let (label, outcome) = outcomes.pop().expect("a principal face has a label");
    Ok(match outcome {
        ContractionOutcome::NonZero { diagram, sign } => {
            PrincipalKind::Class { label, class: diagram, signed: epsilon(d, label)? * sign }
        }
        ContractionOutcome::ZeroAutomorphism => PrincipalKind::AutomorphismZero { label },
        ContractionOutcome::ZeroMultiEdge => PrincipalKind::MultiEdge,
        ContractionOutcome::ZeroPinch => PrincipalKind::Pinch,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum HiddenKind {
    Fold { v: VertexId, u: VertexId, w: VertexId },
    C1 { s: VertexId },
    C2 { parts: Vec<Vec<VertexId>> },
    Rigid,
}

/// Edges with both ends in `w`, loops excluded.
fn inner_edges<'a>(d: &'a Diagram, w: &'a BTreeSet<VertexId>) -> impl Iterator<Item = &'a crate::diagram::Edge> + 'a {
    d.edges().iter().filter(move |e| !e.is_loop() && w.contains(&e.a) && w.contains(&e.b))
}

/// The free vertices of `w` joined to exactly two other vertices of `w`.
pub(crate) fn bivalent_free(d: &Diagram, w: &BTreeSet<VertexId>) -> Vec<(VertexId, VertexId, VertexId)> {
    let mut out = Vec::new();
    for &v in w {
        if d.is_segment(v) {
            continue;
        }
        let mut nb: Vec<VertexId> = inner_edges(d, w).filter(|e| e.touches(v)).map(|e| e.other(v)).collect();
        if nb.len() == 2 && nb[0] != nb[1] {
            nb.sort_unstable();
            out.push((v, nb[0], nb[1]));
        }
    }
    out
}

/// Parts of `w` in distinct components of U(Γ).
fn u_parts(d: &Diagram, w: &BTreeSet<VertexId>) -> Vec<Vec<VertexId>> {
    SimpleGraph::u_graph(d)
        .components()
        .into_iter()
        .map(|c| c.into_iter().filter(|v| w.contains(v)).collect::<Vec<_>>())
        .filter(|p| !p.is_empty())
        .collect()
}

pub(crate) fn classify_hidden(d: &Diagram, vertices: &[VertexId]) -> HiddenKind {
    let w: BTreeSet<VertexId> = vertices.iter().copied().collect();
    if let Some(&(v, u, x)) = bivalent_free(d, &w).first() {
        return HiddenKind::Fold { v, u, w: x };
    }
    for &s in &w {
        if d.is_segment(s) && !d.edges().iter().any(|e| e.touches(s) && (e.is_loop() || w.contains(&e.other(s)))) {
            return HiddenKind::C1 { s };
        }
    }
    let parts = u_parts(d, &w);
    if grading(d).defect == 0 && parts.len() >= 2 {
        return HiddenKind::C2 { parts };
    }
    HiddenKind::Rigid
}

fn set_string(v: &[VertexId]) -> String {
    format!("{{{}}}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn collapse_for(face: PlanFace, kind: &HiddenKind) -> Option<Collapse> {
    match kind {
        HiddenKind::C1 { s } => Some(Collapse {
            face,
            kind: CollapseKind::C1,
            forgets: format!("rate of approach of segment vertex {s}"),
        }),
        HiddenKind::C2 { parts } => Some(Collapse {
            face,
            kind: CollapseKind::C2,
            forgets: format!(
                "relative rate of approach of {}",
                parts.iter().map(|p| set_string(p)).collect::<Vec<_>>().join(" and ")
            ),
        }),
        _ => None,
    }
}

fn pick_even(cands: Vec<(Vec<VertexId>, EndpointMatch, SphericalSignature)>) -> Option<(Vec<VertexId>, EndpointMatch, SphericalSignature)> {
    let even = cands.iter().position(|c| c.2.in_odd_group());
    match even {
        Some(i) => cands.into_iter().nth(i),
        None => cands.into_iter().next(),
    }
}

fn pairs_of(beta: &[VertexId]) -> Vec<[VertexId; 2]> {
    beta.iter().enumerate().skip(1).map(|(v, &t)| [v as VertexId, t]).collect()
}

fn transposition(d: &Diagram, x: VertexId, y: VertexId) -> Vec<[VertexId; 2]> {
    d.vertices()
        .map(|v| {
            let t = if v == x {
                y
            } else if v == y {
                x
            } else {
                v
            };
            [v, t]
        })
        .collect()
}

struct Builder {
    plan: GluingPlan,
    /// class -> (contribution sign, face, label)
    classes: BTreeMap<Diagram, Vec<(Sign, PlanFace, Element)>>,
}

impl Builder {
    fn new(d_parity: Parity, ring: Ring, d: u32, n: usize, spaces: Vec<Space>) -> Builder {
        Builder {
            plan: GluingPlan {
                d_parity,
                ring,
                d,
                n,
                spaces,
                pairings: Vec::new(),
                principal_folds: Vec::new(),
                hidden_folds: Vec::new(),
                collapses: Vec::new(),
                degenerate: Vec::new(),
                verification: VerificationReport::default(),
            },
            classes: BTreeMap::new(),
        }
    }

    fn degenerate(&mut self, face: PlanFace, reason: DegenerateReason, certify: bool) -> Result<(), GluingError> {
        let certificate = if certify {
            let d = &self.plan.spaces[face.space].diagram;
            Some(codim_certificate(&face.face, self.plan.d, d)?)
        } else {
            None
        };
        self.plan.degenerate.push(Degenerate { face, reason, certificate });
        Ok(())
    }

    /// Hidden and infinity faces, shared by the integer and mod-2 planners.
    fn non_principal(&mut self, space: usize, faces: &crate::strata::FaceSet) -> Result<(), GluingError> {
        let d = self.plan.spaces[space].diagram.clone();
        let copies = self.plan.spaces[space].copies;
        let n = self.plan.n;
        for w in &faces.hidden {
            let kind = classify_hidden(&d, w);
            for copy in 0..copies {
                let face = PlanFace { space, copy, face: Face::Hidden { vertices: w.clone() } };
                match &kind {
                    HiddenKind::Fold { v, u, w } => {
                        let mut signature = hidden_fold_signature(&d, *v, *u, *w, n)?;
                        if self.plan.ring == Ring::Z2 {
                            signature.flips.clear();
                        }
                        self.plan.hidden_folds.push(HiddenFold { face, v: *v, neighbors: [*u, *w], signature });
                    }
                    HiddenKind::Rigid => self.degenerate(face, DegenerateReason::RigidHidden, true)?,
                    other => self.plan.collapses.push(collapse_for(face, other).expect("collapse kind")),
                }
            }
        }
        for w in &faces.infinity {
            for copy in 0..copies {
                let face = PlanFace { space, copy, face: Face::Infinity { vertices: w.clone() } };
                self.degenerate(face, DegenerateReason::Infinity, true)?;
            }
        }
        Ok(())
    }

    fn identification(&self, a: &PlanFace, la: Element, b: &PlanFace, lb: Element) -> Result<Identification, GluingError> {
        let da = &self.plan.spaces[a.space].diagram;
        let db = &self.plan.spaces[b.space].diagram;
        let (beta, endpoints, mut signature) = pick_even(candidates(da, la, db, lb, self.plan.n, None)?).ok_or_else(|| {
            GluingError::Identification {
                a: format!("{a}"),
                b: format!("{b}"),
                reason: "quotients admit no isomorphism matching the collision points".into(),
            }
        })?;
        if self.plan.ring == Ring::Z2 {
            signature.flips.clear();
        }
        Ok(Identification { vertex_map: pairs_of(&beta), labels: [la, lb], endpoints, signature })
    }

    fn finish(mut self) -> GluingPlan {
        self.plan.verification = verify_fundamental_cycle(&self.plan);
        self.plan
    }
}

fn face_of(pf: &PrincipalFace) -> Face {
    Face::Principal { pair: pf.pair, labels: pf.labels.clone() }
}

fn max_edges<'a>(ds: impl Iterator<Item = &'a Diagram>) -> usize {
    ds.map(|d| d.edges().len()).max().unwrap_or(0)
}

/// Orient an integer cocycle and plan its gluing in odd ambient dimension `d`.
pub fn plan_cocycle(c: &Cochain, d: u32) -> Result<GluingPlan, GluingError> {
    if d < 2 {
        return Err(GluingError::BadDimension(d));
    }
    if d % 2 == 0 {
        return Err(GluingError::ParityViolation(d));
    }
    plan_gluing(&consistent_orientation(c)?, d)
}

/// Integer gluing plan of a consistently oriented expression in odd ambient
/// dimension `d` (`d` also fixes the certificates of the degenerate locus).
pub fn plan_gluing(expr: &ConsistentExpression, d: u32) -> Result<GluingPlan, GluingError> {
    if d < 2 {
        return Err(GluingError::BadDimension(d));
    }
    if d % 2 == 0 {
        return Err(GluingError::ParityViolation(d));
    }
    if let Some(t) = expr.terms.iter().find(|t| t.diagram.convention() != Convention::Odd) {
        return Err(GluingError::ConventionMismatch { convention: t.diagram.convention().to_string(), d });
    }
    let n = max_edges(expr.terms.iter().map(|t| &t.diagram));
    let spaces: Vec<Space> = expr
        .terms
        .iter()
        .filter(|t| !t.coeff.is_zero())
        .map(|t| Space {
            diagram: t.diagram.clone(),
            canonical: t.canonical.clone(),
            coefficient: t.coeff.clone(),
            copies: usize::try_from(t.coeff.abs()).unwrap_or(usize::MAX),
            orientation: t.orientation,
            absent_edges: n - t.diagram.edges().len(),
        })
        .collect();
    let mut b = Builder::new(Parity::Odd, Ring::Z, d, n, spaces);

    for space in 0..b.plan.spaces.len() {
        let diagram = b.plan.spaces[space].diagram.clone();
        let copies = b.plan.spaces[space].copies;
        let sign_c = if b.plan.spaces[space].coefficient.is_negative() { Sign::Minus } else { Sign::Plus };
        let faces = enumerate_faces(&diagram)?;
        for pf in &faces.principal {
            let kind = classify_principal(&diagram, pf, Ring::Z)?;
            let fold = match &kind {
                PrincipalKind::AutomorphismZero { label } => {
                    let c = candidates(&diagram, *label, &diagram, *label, n, Some(Sign::Minus))?;
                    let chosen = pick_even(c).ok_or_else(|| GluingError::NoFoldAutomorphism {
                        space,
                        face: face_of(pf).to_string(),
                    })?;
                    Some((*label, chosen))
                }
                _ => None,
            };
            for copy in 0..copies {
                let face = PlanFace { space, copy, face: face_of(pf) };
                match &kind {
                    PrincipalKind::Pinch => b.degenerate(face, DegenerateReason::Pinch, false)?,
                    PrincipalKind::MultiEdge => b.degenerate(face, DegenerateReason::MultiEdgeQuotient, true)?,
                    PrincipalKind::Combined => {
                        return Err(GluingError::UnsupportedCombinedFace { space, face: face.face.to_string() })
                    }
                    PrincipalKind::Class { label, class, signed } => {
                        b.classes.entry(class.clone()).or_default().push((sign_c * *signed, face, *label));
                    }
                    PrincipalKind::AutomorphismZero { .. } => {
                        let (label, (beta, endpoints, signature)) = fold.clone().expect("fold computed");
                        b.plan.principal_folds.push(PrincipalFold {
                            face,
                            label,
                            automorphism: pairs_of(&beta),
                            endpoints,
                            signature,
                        });
                    }
                }
            }
        }
        b.non_principal(space, &faces)?;
    }

    let mut unmatched = Vec::new();
    let classes = std::mem::take(&mut b.classes);
    for (class, members) in classes {
        let mut plus: Vec<(PlanFace, Element)> =
            members.iter().filter(|m| m.0 == Sign::Plus).map(|m| (m.1.clone(), m.2)).collect();
        let mut minus: Vec<(PlanFace, Element)> =
            members.iter().filter(|m| m.0 == Sign::Minus).map(|m| (m.1.clone(), m.2)).collect();
        plus.sort();
        minus.sort();
        let k = plus.len().min(minus.len());
        for ((fa, la), (fb, lb)) in plus.iter().zip(minus.iter()) {
            let identification = b.identification(fa, *la, fb, *lb)?;
            b.plan.pairings.push(Pairing { face_a: fa.clone(), face_b: fb.clone(), identification });
        }
        for (f, l) in plus[k..].iter().chain(minus[k..].iter()) {
            unmatched.push(format!("{f} via {l} (class {class})"));
        }
    }
    if !unmatched.is_empty() {
        return Err(GluingError::UnpairableClass { faces: unmatched });
    }
    Ok(b.finish())
}

fn z2_spaces(c: &Cochain) -> Result<Vec<Space>, GluingError> {
    let c = c.change_ring(Ring::Z2)?;
    let n = max_edges(c.terms().keys());
    Ok(c.terms()
        .keys()
        .map(|d| Space {
            diagram: d.clone(),
            canonical: d.clone(),
            coefficient: BigInt::one(),
            copies: 1,
            orientation: Sign::Plus,
            absent_edges: n - d.edges().len(),
        })
        .collect())
}

/// Mod-2 gluing plan: faces of each class are paired in any order and
/// sphere factors are read in projective space, so flips are dropped.
pub fn plan_mod2(c: &Cochain, d: u32) -> Result<GluingPlan, GluingError> {
    if d < 2 {
        return Err(GluingError::BadDimension(d));
    }
    let spaces = z2_spaces(c)?;
    let n = max_edges(spaces.iter().map(|s| &s.diagram));
    let mut b = Builder::new(Parity::of(d), Ring::Z2, d, n, spaces);
    for space in 0..b.plan.spaces.len() {
        let diagram = b.plan.spaces[space].diagram.clone();
        let faces = enumerate_faces(&diagram)?;
        for pf in &faces.principal {
            let face = PlanFace { space, copy: 0, face: face_of(pf) };
            match classify_principal(&diagram, pf, Ring::Z2)? {
                PrincipalKind::Pinch => b.degenerate(face, DegenerateReason::Pinch, false)?,
                PrincipalKind::MultiEdge => b.degenerate(face, DegenerateReason::MultiEdgeQuotient, true)?,
                PrincipalKind::Combined | PrincipalKind::AutomorphismZero { .. } => {
                    let label = pf.labels[0];
                    b.plan.principal_folds.push(chord_fold(&diagram, pf, face, label, n));
                }
                PrincipalKind::Class { label, class, .. } => {
                    b.classes.entry(class).or_default().push((Sign::Plus, face, label));
                }
            }
        }
        b.non_principal(space, &faces)?;
    }
    let classes = std::mem::take(&mut b.classes);
    let odd: Vec<String> = classes
        .iter()
        .filter(|(_, m)| m.len() % 2 == 1)
        .map(|(class, m)| format!("{class} has {} face(s)", m.len()))
        .collect();
    if !odd.is_empty() {
        return Err(GluingError::OddClassMultiplicity { classes: odd });
    }
    for members in classes.into_values() {
        let mut faces: Vec<(PlanFace, Element)> = members.into_iter().map(|m| (m.1, m.2)).collect();
        faces.sort();
        for pair in faces.chunks(2) {
            let (fa, la) = &pair[0];
            let (fb, lb) = &pair[1];
            let identification = b.identification(fa, *la, fb, *lb)?;
            b.plan.pairings.push(Pairing { face_a: fa.clone(), face_b: fb.clone(), identification });
        }
    }
    Ok(b.finish())
}

/// Fold of a principal face by the transposition of its colliding pair.
fn chord_fold(d: &Diagram, pf: &PrincipalFace, face: PlanFace, label: Element, n: usize) -> PrincipalFold {
    PrincipalFold {
        face,
        label,
        automorphism: transposition(d, pf.pair[0], pf.pair[1]),
        endpoints: EndpointMatch::Swapped,
        signature: SphericalSignature::identity(n),
    }
}

/// The three-dimensional mod-2 plan of a chord diagram: every principal face
/// folds onto itself, every hidden face collapses, and only the faces at
/// infinity stay degenerate.
pub fn plan_chord_mod2(g: &Diagram) -> Result<GluingPlan, GluingError> {
    if !g.free_vertices().is_empty() || !g.is_chord_diagram() {
        return Err(GluingError::NotChordDiagram(g.to_string()));
    }
    let n = g.edges().len();
    let space = Space {
        diagram: g.clone(),
        canonical: g.clone(),
        coefficient: BigInt::one(),
        copies: 1,
        orientation: Sign::Plus,
        absent_edges: 0,
    };
    let mut b = Builder::new(Parity::Odd, Ring::Z2, 3, n, vec![space]);
    let faces = enumerate_faces(g)?;
    for pf in &faces.principal {
        let face = PlanFace { space: 0, copy: 0, face: face_of(pf) };
        b.plan.principal_folds.push(chord_fold(g, pf, face, pf.labels[0], n));
    }
    for w in &faces.hidden {
        let face = PlanFace { space: 0, copy: 0, face: Face::Hidden { vertices: w.clone() } };
        let kind = match classify_hidden(g, w) {
            k @ (HiddenKind::C1 { .. } | HiddenKind::C2 { .. }) => k,
            _ => HiddenKind::C2 { parts: u_parts(g, &w.iter().copied().collect()) },
        };
        b.plan.collapses.push(collapse_for(face, &kind).expect("collapse kind"));
    }
    for w in &faces.infinity {
        let face = PlanFace { space: 0, copy: 0, face: Face::Infinity { vertices: w.clone() } };
        b.degenerate(face, DegenerateReason::Infinity, true)?;
    }
    Ok(b.finish())
}

/// Faces of `d` that every plan over `ring` leaves in the degenerate locus
/// with a codimension certificate: multi-edge principal faces, rigid hidden
/// faces and faces at infinity.
pub fn certified_faces(d: &Diagram, ring: Ring) -> Result<Vec<Face>, GluingError> {
    let faces = enumerate_faces(d)?;
    let mut out = Vec::new();
    for pf in &faces.principal {
        if matches!(classify_principal(d, pf, ring)?, PrincipalKind::MultiEdge) {
            out.push(face_of(pf));
        }
    }
    for w in &faces.hidden {
        if classify_hidden(d, w) == HiddenKind::Rigid {
            out.push(Face::Hidden { vertices: w.clone() });
        }
    }
    out.extend(faces.infinity.iter().map(|w| Face::Infinity { vertices: w.clone() }));
    Ok(out)
}
