use std::collections::{BTreeMap, BTreeSet};

use gcx_core::complex::{coboundary, generate_basis, Cochain};
use gcx_core::diagram::build::{chords, odd, tripod};
use gcx_core::gluing::*;
use gcx_core::homology::{consistent_orientation, ConsistentExpression};
use gcx_core::strata::{enumerate_faces, Face, SimpleGraph};
use gcx_core::{Budget, Convention, Diagram, Element, Ring};

fn gamma2() -> Cochain {
    let c = chords(Convention::Odd, &[(1, 3), (2, 4)]);
    Cochain::from_int_terms(Ring::Z, [(&c, 1), (&tripod(), -1)]).unwrap()
}

fn triple_parts() -> [Diagram; 4] {
    [
        odd(&[&[1], &[2], &[3]], &[4], &[(1, 4), (2, 4), (3, 4)]),
        odd(&[&[1, 2], &[3], &[4]], &[], &[(1, 3), (2, 4)]),
        odd(&[&[1], &[2, 3], &[4]], &[], &[(1, 2), (3, 4)]),
        odd(&[&[1], &[2], &[3, 4]], &[], &[(1, 3), (2, 4)]),
    ]
}

fn triple_linking() -> Cochain {
    let [t, l, m, r] = triple_parts();
    Cochain::from_int_terms(Ring::Z, [(&t, 1), (&l, -1), (&m, -1), (&r, -1)]).unwrap()
}

fn space_index(plan: &GluingPlan, d: &Diagram) -> usize {
    plan.spaces.iter().position(|s| s.canonical == *d).unwrap()
}

fn hidden_sets(plan: &GluingPlan, space: usize, list: impl Iterator<Item = (usize, Face)>) -> BTreeSet<Vec<u32>> {
    list.filter(|(s, _)| *s == space)
        .map(|(_, f)| match f {
            Face::Hidden { vertices } => vertices,
            other => panic!("not hidden: {other}"),
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .inspect(|_| assert!(space < plan.spaces.len()))
        .collect()
}

/// Independent face count: every face of every copy, by direct enumeration.
fn face_multiset(plan: &GluingPlan) -> BTreeMap<PlanFace, usize> {
    let mut m = BTreeMap::new();
    for (i, s) in plan.spaces.iter().enumerate() {
        for f in enumerate_faces(&s.diagram).unwrap().faces() {
            for copy in 0..s.copies {
                *m.entry(PlanFace { space: i, copy, face: f.clone() }).or_default() += 1;
            }
        }
    }
    m
}

fn ledger_multiset(plan: &GluingPlan) -> BTreeMap<PlanFace, usize> {
    let mut m = BTreeMap::new();
    let mut add = |f: &PlanFace| *m.entry(f.clone()).or_default() += 1;
    for p in &plan.pairings {
        add(&p.face_a);
        add(&p.face_b);
    }
    plan.principal_folds.iter().for_each(|f| add(&f.face));
    plan.hidden_folds.iter().for_each(|f| add(&f.face));
    plan.collapses.iter().for_each(|f| add(&f.face));
    plan.degenerate.iter().for_each(|f| add(&f.face));
    m
}

#[test]
fn gamma2_plan_matches_the_worked_example() {
    let plan = plan_cocycle(&gamma2(), 5).unwrap();
    assert_eq!(plan.n, 3);
    assert_eq!(plan.ring, Ring::Z);
    assert_eq!(plan.d_parity, Parity::Odd);
    let chord = chords(Convention::Odd, &[(1, 3), (2, 4)]);
    let (ci, ti) = (space_index(&plan, &chord), space_index(&plan, &tripod()));
    assert_eq!(plan.spaces[ci].absent_edges, 1);
    assert_eq!(plan.spaces[ti].absent_edges, 0);
    assert_eq!(plan.spaces[ci].copies, 1);
    assert_eq!(plan.spaces[ti].copies, 1);

    assert_eq!(plan.pairings.len(), 3);
    for p in &plan.pairings {
        assert_ne!(p.face_a.space, p.face_b.space);
    }
    assert!(plan.principal_folds.is_empty());

    let folds = hidden_sets(&plan, ti, plan.hidden_folds.iter().map(|h| (h.face.space, h.face.face.clone())));
    assert_eq!(folds, BTreeSet::from([vec![1, 2, 4], vec![2, 3, 4]]));
    for h in &plan.hidden_folds {
        assert_eq!(h.v, 4);
    }
    assert_eq!(plan.hidden_folds.len(), 2);

    assert_eq!(plan.c1_count(), 2);
    let c1 = hidden_sets(
        &plan,
        ci,
        plan.collapses.iter().filter(|c| c.kind == CollapseKind::C1).map(|c| (c.face.space, c.face.face.clone())),
    );
    assert_eq!(c1, BTreeSet::from([vec![1, 2, 3], vec![2, 3, 4]]));

    let rigid: Vec<&Degenerate> =
        plan.degenerate.iter().filter(|g| g.reason == DegenerateReason::RigidHidden).collect();
    assert_eq!(rigid.len(), 1);
    assert_eq!(rigid[0].face.space, ti);
    assert_eq!(rigid[0].face.face, Face::Hidden { vertices: vec![1, 2, 3, 4] });

    let infinity = plan.degenerate.iter().filter(|g| g.reason == DegenerateReason::Infinity).count();
    let expected_inf: usize = plan.spaces.iter().map(|s| enumerate_faces(&s.diagram).unwrap().infinity.len()).sum();
    assert_eq!(infinity, expected_inf);

    assert!(plan.verification.pass, "{:?}", plan.verification);
    assert_eq!(ledger_multiset(&plan), face_multiset(&plan));
}

#[test]
fn corrupting_any_flip_set_fails_verification() {
    let plan = plan_cocycle(&gamma2(), 3).unwrap();
    assert!(plan.verification.pass);
    for i in 0..plan.pairings.len() {
        let mut bad = plan.clone();
        let flips = &mut bad.pairings[i].identification.signature.flips;
        if flips.is_empty() {
            flips.push(1);
        } else {
            flips.pop();
        }
        let report = verify_fundamental_cycle(&bad);
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f.starts_with(&format!("pairing {i}:"))), "{:?}", report.failures);
        assert!(report.failures.iter().all(|f| f.starts_with(&format!("pairing {i}:"))));
    }
}

#[test]
fn triple_linking_pairs_tripod_edges_with_arcs() {
    let c = triple_linking();
    assert!(coboundary(&c).unwrap().is_zero());
    let plan = plan_cocycle(&c, 3).unwrap();
    assert!(plan.verification.pass, "{:?}", plan.verification);
    assert!(plan.hidden_folds.is_empty());
    assert_eq!(plan.pairings.len(), 3);
    let [t, l, m, r] = triple_parts();
    let ti = space_index(&plan, &t);
    let mut partners = BTreeSet::new();
    for p in &plan.pairings {
        let (tf, tl, of, ol) = if p.face_a.space == ti {
            (&p.face_a, p.identification.labels[0], &p.face_b, p.identification.labels[1])
        } else {
            (&p.face_b, p.identification.labels[1], &p.face_a, p.identification.labels[0])
        };
        assert_eq!(tf.space, ti);
        assert!(matches!(tl, Element::Edge(_)));
        assert!(matches!(ol, Element::Arc { .. }));
        partners.insert(of.space);
    }
    let expect: BTreeSet<usize> = [&l, &m, &r].iter().map(|d| space_index(&plan, d)).collect();
    assert_eq!(partners, expect);
    assert_eq!(ledger_multiset(&plan), face_multiset(&plan));
}

#[test]
fn single_tripod_is_unpairable() {
    let c = Cochain::from_int_terms(Ring::Z, [(&tripod(), 1)]).unwrap();
    match plan_cocycle(&c, 3) {
        Err(GluingError::UnpairableClass { faces }) => assert_eq!(faces.len(), 3),
        other => panic!("expected unpairable class, got {other:?}"),
    }
    let msg = plan_cocycle(&c, 3).unwrap_err().to_string();
    assert!(msg.starts_with("unpairable class"));
}

#[test]
fn even_dimension_over_z_is_refused() {
    assert!(matches!(plan_cocycle(&gamma2(), 4), Err(GluingError::ParityViolation(4))));
}

#[test]
fn empty_plan_passes_vacuously() {
    let plan = plan_gluing(&ConsistentExpression::default(), 3).unwrap();
    assert!(plan.spaces.is_empty());
    assert!(plan.verification.pass);
    assert!(verify_fundamental_cycle(&plan).pass);
}

#[test]
fn cocycle_iff_plannable_on_order_two() {
    let b = Budget::default();
    let basis = generate_basis(1, 2, 0, Convention::Odd, Ring::Z, &b).unwrap();
    assert_eq!(basis.len(), 4);
    let mut cocycles = 0;
    for code in 1..81usize {
        let mut c = code;
        let mut terms = Vec::new();
        for d in &basis {
            let k = (c % 3) as i64 - 1;
            c /= 3;
            if k != 0 {
                terms.push((d, k));
            }
        }
        let x = Cochain::from_int_terms(Ring::Z, terms).unwrap();
        if x.is_zero() {
            continue;
        }
        let is_cocycle = coboundary(&x).unwrap().is_zero();
        match plan_cocycle(&x, 3) {
            Ok(plan) => {
                assert!(is_cocycle, "planned a non-cocycle {:?}", x.terms());
                assert!(plan.verification.pass);
                cocycles += 1;
            }
            Err(e) => {
                assert!(!is_cocycle, "cocycle {:?} failed: {e}", x.terms());
                assert!(
                    matches!(e, GluingError::UnpairableClass { .. } | GluingError::UnsupportedCombinedFace { .. }),
                    "{e}"
                );
            }
        }
    }
    assert_eq!(cocycles, 2);
}

#[test]
fn gamma2_pairing_signature() {
    let plan = plan_cocycle(&gamma2(), 3).unwrap();
    let chord = chords(Convention::Odd, &[(1, 3), (2, 4)]);
    let ci = space_index(&plan, &chord);
    let arc23 = Element::Arc { strand: 0, pos: 1 };
    let p = plan
        .pairings
        .iter()
        .find(|p| {
            let side = |f: &PlanFace, l: Element| f.space == ci && l == arc23;
            side(&p.face_a, p.identification.labels[0]) || side(&p.face_b, p.identification.labels[1])
        })
        .expect("arc 2-3 of the chord diagram is paired");
    let labels = p.identification.labels;
    assert!(labels.contains(&Element::Edge(1)), "tripod edge (2,4) is edge 2: {labels:?}");
    let sig = &p.identification.signature;
    assert!(sig.is_permutation());
    assert!(sig.in_odd_group());
    // The chord side's absent factor (3) absorbs the tripod's collision direction (factor 2).
    let (chord_to_tripod, absent) = if p.face_a.space == ci { (sig.perm.clone(), 3) } else { (invert(&sig.perm), 3) };
    assert_eq!(chord_to_tripod[absent - 1], 2);
    assert_eq!(chord_to_tripod[0], 1);
    assert_eq!(chord_to_tripod[1], 3);
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x - 1] = i + 1;
    }
    q
}

#[test]
fn signature_list_covers_every_identification() {
    let plan = plan_cocycle(&gamma2(), 3).unwrap();
    let sigs = spherical_signatures(&plan);
    assert_eq!(sigs.len(), plan.pairings.len() + plan.principal_folds.len() + plan.hidden_folds.len() + plan.collapses.len());
    for s in &sigs {
        assert!(s.signature.is_permutation());
        assert!(s.signature.in_odd_group(), "{}: {}", s.source, s.signature);
        if s.source.starts_with("collapse") {
            assert_eq!(s.signature, SphericalSignature::identity(plan.n));
        }
        if s.source.starts_with("hidden fold") {
            let moved: Vec<usize> = (1..=plan.n).filter(|&k| s.signature.perm[k - 1] != k).collect();
            assert_eq!(moved.len(), 2, "a transposition of two factors");
            assert!(s.signature.flips.is_empty() || s.signature.flips == moved);
        }
    }
}

#[test]
fn hidden_fold_flips_follow_edge_directions() {
    // Path 1 -> 4 -> 2 through the free vertex: no flips.
    let d = odd(&[&[1, 2, 3]], &[4], &[(1, 4), (4, 2), (3, 4)]);
    let s = hidden_fold_signature(&d, 4, 1, 2, 3).unwrap();
    assert_eq!(s.perm, vec![2, 1, 3]);
    assert!(s.flips.is_empty());
    let s = hidden_fold_signature(&tripod(), 4, 1, 2, 3).unwrap();
    assert_eq!(s.perm, vec![2, 1, 3]);
    assert_eq!(s.flips, vec![1, 2]);
}

#[test]
fn hidden_folds_are_well_formed() {
    for c in [gamma2(), triple_linking()] {
        let plan = plan_cocycle(&c, 3).unwrap();
        for h in &plan.hidden_folds {
            let d = &plan.spaces[h.face.space].diagram;
            let w: BTreeSet<u32> = h.face.face.vertices().into_iter().collect();
            assert!(!d.is_segment(h.v));
            let inside: BTreeSet<u32> =
                d.edges().iter().filter(|e| e.touches(h.v) && w.contains(&e.other(h.v))).map(|e| e.other(h.v)).collect();
            assert_eq!(inside, BTreeSet::from(h.neighbors));
            // Every corner set inside the face through v holds both neighbours or is one of the two edges.
            let t = SimpleGraph::t_graph(d).induced(&w);
            let verts: Vec<u32> = w.iter().copied().collect();
            for mask in 1u32..(1 << verts.len()) {
                let s: BTreeSet<u32> = (0..verts.len()).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
                if !s.contains(&h.v) {
                    continue;
                }
                let face = if s.len() == 2 {
                    let mut it = s.iter();
                    let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
                    t.has_edge(a, b)
                } else {
                    s.len() >= 3 && t.induced(&s).is_biconnected()
                };
                if face {
                    let [u, x] = h.neighbors;
                    let is_edge = s == BTreeSet::from([u, h.v]) || s == BTreeSet::from([x, h.v]);
                    assert!(is_edge || (s.contains(&u) && s.contains(&x)), "{s:?}");
                }
            }
        }
    }
}

#[test]
fn relabeling_the_input_keeps_the_plan_shape() {
    let e = consistent_orientation(&gamma2()).unwrap();
    let base = plan_gluing(&e, 3).unwrap();
    let mut swapped = e.clone();
    for t in &mut swapped.terms {
        if let Some(r) = gcx_core::diagram::reversed_labeling(&t.diagram) {
            t.diagram = r;
            t.orientation = -t.orientation;
            t.coeff = -t.coeff.clone();
        }
    }
    let other = plan_gluing(&swapped, 3).unwrap();
    assert!(other.verification.pass, "{:?}", other.verification);
    assert_eq!(base.pairings.len(), other.pairings.len());
    assert_eq!(base.hidden_folds.len(), other.hidden_folds.len());
    assert_eq!(base.collapses, other.collapses);
    assert_eq!(base.degenerate.len(), other.degenerate.len());
    for p in &other.pairings {
        assert!(p.identification.signature.in_odd_group());
    }
}

#[test]
fn plan_json_round_trips() {
    let plan = plan_cocycle(&gamma2(), 5).unwrap();
    let text = serde_json::to_string_pretty(&plan).unwrap();
    let back: GluingPlan = serde_json::from_str(&text).unwrap();
    assert_eq!(back, plan);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["d_parity", "ring", "N", "spaces", "pairings", "principal_folds", "hidden_folds", "collapses", "degenerate"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["verification"]["pass"], serde_json::Value::Bool(true));
    assert!(v["pairings"][0]["identification"]["signature"]["perm"].is_array());
    assert!(verify_fundamental_cycle(&back).pass);
}

#[test]
fn mod2_reduction_of_gamma2() {
    let z = plan_cocycle(&gamma2(), 3).unwrap();
    let p = plan_mod2(&gamma2().change_ring(Ring::Z2).unwrap(), 3).unwrap();
    assert_eq!(p.ring, Ring::Z2);
    assert!(p.verification.pass, "{:?}", p.verification);
    assert_eq!(p.pairings.len(), z.pairings.len());
    assert_eq!(p.hidden_folds.len(), z.hidden_folds.len());
    assert_eq!(p.collapses, z.collapses);
    assert_eq!(p.degenerate.len(), z.degenerate.len());
    assert_eq!(ledger_multiset(&p), face_multiset(&p));
    for pr in &p.pairings {
        assert!(pr.identification.signature.flips.is_empty());
    }
}

#[test]
fn mod2_needs_even_multiplicities() {
    let c = Cochain::from_int_terms(Ring::Z2, [(&tripod(), 1)]).unwrap();
    assert!(matches!(plan_mod2(&c, 4), Err(GluingError::OddClassMultiplicity { .. })));
}

#[test]
fn chord_plans() {
    let single = plan_chord_mod2(&chords(Convention::Odd, &[(1, 2)])).unwrap();
    assert_eq!(single.principal_folds.len(), 1);
    assert!(single.collapses.is_empty() && single.hidden_folds.is_empty());
    assert_eq!(single.degenerate.len(), 3);
    assert!(single.degenerate.iter().all(|g| g.reason == DegenerateReason::Infinity));
    assert!(single.verification.pass, "{:?}", single.verification);

    let two = plan_chord_mod2(&chords(Convention::Odd, &[(1, 3), (2, 4)])).unwrap();
    assert_eq!(two.principal_folds.len(), 5);
    assert_eq!(two.collapses.len(), 3);
    assert!(two.degenerate.iter().all(|g| g.reason == DegenerateReason::Infinity));
    assert!(two.verification.pass, "{:?}", two.verification);
    assert_eq!(ledger_multiset(&two), face_multiset(&two));

    assert!(matches!(plan_chord_mod2(&tripod()), Err(GluingError::NotChordDiagram(_))));
}

fn g(edges: &[(u32, u32)]) -> SimpleGraph {
    SimpleGraph::new(std::iter::empty(), edges.iter().copied())
}

#[test]
fn double_square_corner_gains_one_codimension() {
    // a1=1 a2=2 x=3 y=4 b1=5 b2=6
    let left = g(&[(1, 2), (1, 3), (2, 4), (3, 4), (5, 6), (5, 3), (6, 4)]);
    let right = g(&[(1, 2), (1, 3), (2, 3), (3, 4), (5, 6), (5, 4), (6, 4)]);
    let beta: BTreeMap<u32, u32> = (1..=6).map(|v| (v, v)).collect();
    let changes = transport_corners(&left, [3, 4], &right, [3, 4], &beta).unwrap();
    let target = changes
        .iter()
        .find(|c| c.family == vec![vec![3, 4], vec![1, 2, 3, 4, 5, 6]])
        .expect("double-square corner");
    assert_eq!(target.codim, 2);
    assert_eq!(target.increase, 1);
    assert_eq!(target.splits[0].parts, [vec![1, 2, 3], vec![4, 5, 6]]);
}

#[test]
fn twin_cicadas_collapse_on_both_sides() {
    // x=1 y=2; a=3,4 b=5,6 c=7,8 d=9,10
    let edges_common = [(3, 4), (5, 6), (7, 8), (9, 10), (1, 2)];
    let mut li = edges_common.to_vec();
    li.extend([(1, 3), (1, 5), (1, 7), (1, 8), (2, 4), (2, 6), (2, 9), (2, 10)]);
    let mut rj = edges_common.to_vec();
    rj.extend([(1, 3), (1, 4), (1, 7), (1, 9), (2, 5), (2, 6), (2, 8), (2, 10)]);
    let (gi, gj) = (g(&li), g(&rj));
    let id: BTreeMap<u32, u32> = (1..=10).map(|v| (v, v)).collect();
    let fwd = transport_corners(&gi, [1, 2], &gj, [1, 2], &id).unwrap();
    let back = transport_corners(&gj, [1, 2], &gi, [1, 2], &id).unwrap();
    let fi = fwd.iter().find(|c| c.family == vec![vec![1, 2], vec![1, 2, 3, 4, 5, 6], vec![1, 7, 8]]).unwrap();
    assert_eq!((fi.codim, fi.codim + fi.increase), (3, 4));
    let fj = back.iter().find(|c| c.family == vec![vec![1, 2], vec![1, 2, 7, 8, 9, 10], vec![1, 3, 4]]).unwrap();
    assert_eq!((fj.codim, fj.codim + fj.increase), (3, 4));
}

#[test]
fn gamma2_pairings_keep_every_corner() {
    let plan = plan_cocycle(&gamma2(), 3).unwrap();
    for i in 0..plan.pairings.len() {
        let ledger = corner_collapse_analysis(&plan, i).unwrap();
        assert!(!ledger.side_a.is_empty() && !ledger.side_b.is_empty());
        assert!(ledger.side_a.iter().chain(&ledger.side_b).all(|c| c.increase == 0));
    }
    assert!(corner_collapse_analysis(&plan, 99).is_err());
}
