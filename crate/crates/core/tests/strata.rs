use std::collections::BTreeSet;

use gcx_core::complex::generate_basis;
use gcx_core::diagram::build::{chords, odd, tripod};
use gcx_core::diagram::VertexId;
use gcx_core::strata::*;
use gcx_core::{Budget, Cochain, Convention, Diagram, Element, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn set(v: &[VertexId]) -> Vec<VertexId> {
    v.to_vec()
}

fn gamma2() -> Cochain {
    let c = chords(Convention::Odd, &[(1, 3), (2, 4)]);
    Cochain::from_int_terms(Ring::Z, [(&c, 1), (&tripod(), -1)]).unwrap()
}

// ---- brute-force oracles -------------------------------------------------

fn adjacency(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n + 1];
    for &(a, b) in edges {
        if a != b {
            adj[a as usize].insert(b as usize);
            adj[b as usize].insert(a as usize);
        }
    }
    adj
}

fn connected_within(adj: &[BTreeSet<usize>], verts: &BTreeSet<usize>) -> bool {
    let Some(&start) = verts.iter().next() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if verts.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == verts.len()
}

/// Connected with at least three vertices and still connected after deleting any one.
fn two_connected(adj: &[BTreeSet<usize>], verts: &BTreeSet<usize>) -> bool {
    verts.len() >= 3
        && connected_within(adj, verts)
        && verts.iter().all(|v| {
            let mut rest = verts.clone();
            rest.remove(v);
            connected_within(adj, &rest)
        })
}

fn component_count(adj: &[BTreeSet<usize>], verts: &BTreeSet<usize>) -> usize {
    let mut left = verts.clone();
    let mut count = 0;
    while let Some(&s) = left.iter().next() {
        count += 1;
        let mut stack = vec![s];
        left.remove(&s);
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if left.remove(&u) {
                    stack.push(u);
                }
            }
        }
    }
    count
}

fn subsets(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
}

fn t_edges(d: &Diagram) -> Vec<(VertexId, VertexId)> {
    let mut e: Vec<_> = d.edges().iter().map(|e| (e.a, e.b)).collect();
    e.extend(d.arcs().iter().map(|a| (a.from, a.to)));
    e
}

fn test_diagrams() -> Vec<Diagram> {
    let b = Budget::default();
    let mut out = Vec::new();
    for (m, n, k) in [(1, 2, 0), (1, 2, 1), (1, 3, 0), (1, 3, 1), (2, 2, 0), (2, 2, 1), (3, 2, 0)] {
        for d in generate_basis(m, n, k, Convention::Odd, Ring::Z, &b).unwrap() {
            if d.vertex_count() <= 7 {
                out.push(d);
            }
        }
    }
    out
}

fn random_graph(rng: &mut ChaCha8Rng) -> (usize, Vec<(VertexId, VertexId)>) {
    let n = rng.gen_range(1..=10);
    let p = rng.gen_range(0.1..0.6);
    let mut edges = Vec::new();
    for a in 1..=n as VertexId {
        for b in a + 1..=n as VertexId {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    (n, edges)
}

/// Blocks by brute force: maximal vertex sets spanning a 2-connected subgraph or a bridge.
fn brute_blocks(n: usize, edges: &[(VertexId, VertexId)]) -> BTreeSet<Vec<VertexId>> {
    let adj = adjacency(n, edges);
    let mut good: Vec<BTreeSet<usize>> = Vec::new();
    for s in subsets(n) {
        let ok = match s.len() {
            2 => {
                let v: Vec<_> = s.iter().copied().collect();
                adj[v[0]].contains(&v[1])
            }
            1 => false,
            _ => two_connected(&adj, &s),
        };
        if ok {
            good.push(s);
        }
    }
    good.iter()
        .filter(|s| !good.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .map(|s| s.iter().map(|&v| v as VertexId).collect())
        .collect()
}

// ---- blocks ----------------------------------------------------------------

#[test]
fn path_blocks() {
    let g = SimpleGraph::new(1..=3, [(1, 2), (2, 3)]);
    let b = blocks_and_tree(&g);
    assert_eq!(b.blocks.len(), 2);
    assert_eq!(b.cut_vertices, vec![2]);
    let id = b.counting(&g);
    assert_eq!((id.block_vertex_sum, id.vertices, id.tree_edges, id.cut_vertices), (4, 3, 2, 1));
    assert!(id.corrected_holds());
}

#[test]
fn triangle_is_one_block() {
    let g = SimpleGraph::new(1..=3, [(1, 2), (2, 3), (1, 3)]);
    let b = blocks_and_tree(&g);
    assert_eq!(b.blocks, vec![vec![1, 2, 3]]);
    assert!(b.cut_vertices.is_empty());
    assert!(b.tree_edges.is_empty());
}

#[test]
fn two_triangles_regression() {
    // Two triangles sharing vertex 3: 3 + 3 = 5 + 2 - 1, while the uncorrected count gives 7.
    let g = SimpleGraph::new(1..=5, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)]);
    let b = blocks_and_tree(&g);
    assert_eq!(b.blocks.len(), 2);
    assert_eq!(b.cut_vertices, vec![3]);
    let id = b.counting(&g);
    assert_eq!(id.block_vertex_sum, 6);
    assert_eq!(id.vertices + id.tree_edges, 7);
    assert!(id.corrected_holds());
    assert!(!id.literal_holds());
}

#[test]
fn blocks_match_brute_force_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let (n, edges) = random_graph(&mut rng);
        let g = SimpleGraph::new(1..=n as VertexId, edges.iter().copied());
        let b = blocks_and_tree(&g);
        let got: BTreeSet<Vec<VertexId>> = b.blocks.iter().cloned().collect();
        assert_eq!(got, brute_blocks(n, &edges), "graph {edges:?}");
        assert!(b.counting(&g).corrected_holds(), "graph {edges:?}");

        let adj = adjacency(n, &edges);
        let all: BTreeSet<usize> = (1..=n).collect();
        let base = component_count(&adj, &all);
        let cuts: BTreeSet<VertexId> = (1..=n)
            .filter(|&v| {
                let mut rest = all.clone();
                rest.remove(&v);
                component_count(&adj, &rest) > base
            })
            .map(|v| v as VertexId)
            .collect();
        assert_eq!(b.cut_vertices.iter().copied().collect::<BTreeSet<_>>(), cuts, "graph {edges:?}");
        // Blocks meet in at most one vertex, and only at cut vertices.
        for (i, x) in b.blocks.iter().enumerate() {
            for y in &b.blocks[i + 1..] {
                let common: Vec<_> = x.iter().filter(|v| y.contains(v)).collect();
                assert!(common.len() <= 1);
                assert!(common.iter().all(|v| cuts.contains(v)));
            }
        }
    }
}

// ---- faces -----------------------------------------------------------------

#[test]
fn single_chord_faces() {
    let f = enumerate_faces(&chords(Convention::Odd, &[(1, 2)])).unwrap();
    assert_eq!(f.principal.len(), 1);
    assert_eq!(f.principal[0].pair, [1, 2]);
    assert_eq!(f.principal[0].labels, vec![Element::Arc { strand: 0, pos: 0 }, Element::Edge(0)]);
    assert!(f.hidden.is_empty());
    assert_eq!(f.infinity, vec![set(&[1]), set(&[1, 2]), set(&[2])]);
}

#[test]
fn tripod_faces() {
    let f = enumerate_faces(&tripod()).unwrap();
    let pairs: Vec<[VertexId; 2]> = f.principal.iter().map(|p| p.pair).collect();
    assert_eq!(pairs, vec![[1, 2], [1, 4], [2, 3], [2, 4], [3, 4]]);
    assert_eq!(f.hidden, vec![set(&[1, 2, 3, 4]), set(&[1, 2, 4]), set(&[2, 3, 4])]);
    assert_eq!(f.infinity.len(), 14);
}

#[test]
fn chord_13_24_faces() {
    let f = enumerate_faces(&chords(Convention::Odd, &[(1, 3), (2, 4)])).unwrap();
    assert_eq!(f.principal.len(), 5);
    assert_eq!(f.hidden, vec![set(&[1, 2, 3]), set(&[1, 2, 3, 4]), set(&[2, 3, 4])]);
    assert_eq!(f.infinity.len(), 14);
}

#[test]
fn faces_agree_with_subset_scan() {
    for d in test_diagrams() {
        let n = d.vertex_count();
        let adj = adjacency(n, &t_edges(&d));
        let mut hidden = BTreeSet::new();
        let mut infinity = BTreeSet::new();
        for s in subsets(n) {
            let ids: Vec<VertexId> = s.iter().map(|&v| v as VertexId).collect();
            if connected_within(&adj, &s) {
                infinity.insert(ids.clone());
            }
            if two_connected(&adj, &s) {
                hidden.insert(ids);
            }
        }
        let mut pairs = BTreeSet::new();
        for (a, b) in t_edges(&d) {
            if a != b {
                pairs.insert([a.min(b), a.max(b)]);
            }
        }
        let f = enumerate_faces(&d).unwrap();
        assert_eq!(f.hidden.iter().cloned().collect::<BTreeSet<_>>(), hidden, "{d}");
        assert_eq!(f.infinity.iter().cloned().collect::<BTreeSet<_>>(), infinity, "{d}");
        assert_eq!(f.principal.iter().map(|p| p.pair).collect::<BTreeSet<_>>(), pairs, "{d}");
    }
}

#[test]
fn face_json_shape() {
    let f = enumerate_faces(&chords(Convention::Odd, &[(1, 2)])).unwrap();
    let v = serde_json::to_value(&f).unwrap();
    assert_eq!(
        v,
        serde_json::json!({
            "principal": [{"pair": [1, 2], "labels": ["arc:1:1", "edge:1"]}],
            "hidden": [],
            "infinity": [[1], [1, 2], [2]]
        })
    );
    let back: FaceSet = serde_json::from_value(v).unwrap();
    assert_eq!(back, f);
}

// ---- certificates ----------------------------------------------------------

fn k4_on_legs() -> Diagram {
    odd(
        &[&[1, 2, 3, 4]],
        &[5, 6, 7, 8],
        &[(1, 5), (2, 6), (3, 7), (4, 8), (5, 6), (5, 7), (5, 8), (6, 7), (6, 8), (7, 8)],
    )
}

#[test]
fn case_one_certificate() {
    let f = Face::Hidden { vertices: vec![5, 6, 7, 8] };
    let c = codim_certificate(&f, 5, &k4_on_legs()).unwrap();
    assert_eq!(c.case, CertCase::I);
    assert_eq!((c.r, c.s, c.edges), (0, 4, 6));
    assert_eq!(c.bound, BigInt::from(10));
    assert_eq!(c.stated_bound, "10".parse().unwrap());
    assert!(!c.anomalous);
}

#[test]
fn case_three_tripod_full_collision() {
    let f = Face::Hidden { vertices: vec![1, 2, 3, 4] };
    let c = codim_certificate(&f, 5, &tripod()).unwrap();
    assert_eq!(c.case, CertCase::III);
    assert_eq!((c.r, c.s, c.edges), (3, 1, 3));
    assert_eq!(c.bound, BigInt::from(2));
    assert_eq!(c.stated_bound, "2".parse().unwrap());
    let c3 = codim_certificate(&f, 3, &tripod()).unwrap();
    assert_eq!(c3.bound, BigInt::from(0));
    assert!(c3.anomalous);
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(v["case"], "III");
    assert_eq!(v["bound"], "2");
    assert_eq!(v["anomalous"], false);
}

#[test]
fn infinity_certificates_count_edges_leaving_the_set() {
    let c = chords(Convention::Odd, &[(1, 3), (2, 4)]);
    let cert = codim_certificate(&Face::Infinity { vertices: vec![1, 2] }, 3, &c).unwrap();
    assert_eq!(cert.case, CertCase::IV);
    assert_eq!(cert.edges, 2);
    assert_eq!(cert.bound, BigInt::from(3));
    let free = codim_certificate(&Face::Infinity { vertices: vec![4] }, 3, &tripod()).unwrap();
    assert_eq!(free.case, CertCase::II);
    assert_eq!(free.bound, BigInt::from(4));
}

#[test]
fn plain_principal_faces_are_rejected() {
    let f = Face::Principal { pair: [1, 4], labels: vec![Element::Edge(0)] };
    assert!(matches!(codim_certificate(&f, 5, &tripod()), Err(StrataError::NotDegenerate(_))));
}

#[test]
fn principal_multiedge_certificate() {
    // Contracting arc 1-2 doubles the two edges into 3.
    let d = odd(&[&[1, 2, 3]], &[], &[(1, 3), (2, 3), (1, 1)]);
    let f = Face::Principal { pair: [1, 2], labels: vec![Element::Arc { strand: 0, pos: 0 }] };
    let c = codim_certificate(&f, 5, &d).unwrap();
    assert_eq!(c.case, CertCase::PrincipalMultiedge);
    assert_eq!(c.bound, BigInt::from(4));
}

#[test]
fn anomalous_examples() {
    assert_eq!(anomalous_faces(&tripod()).unwrap(), vec![set(&[1, 2, 3, 4])]);
    assert!(anomalous_faces(&chords(Convention::Odd, &[(1, 3), (2, 4)])).unwrap().is_empty());
    // The tripod crossed by a chord: its component is crossed, nothing is flagged.
    let crossed = odd(&[&[1, 2, 3, 4, 5]], &[6], &[(1, 6), (3, 6), (5, 6), (2, 4)]);
    assert!(anomalous_faces(&crossed).unwrap().is_empty());
}

// ---- corners ---------------------------------------------------------------

#[test]
fn corner_compatibility_examples() {
    let a = CornerSet::finite(vec![1, 2, 4]);
    let b = CornerSet::finite(vec![1, 2, 3, 4]);
    let c = CornerSet::finite(vec![2, 3, 4]);
    assert!(compatible(&a, &b));
    assert!(!compatible(&a, &c));
    assert!(compatible(&CornerSet::finite(vec![1, 2]), &CornerSet::finite(vec![2, 3])));
    // Two sets at infinity always share the point at infinity.
    assert!(!compatible(&CornerSet::at_infinity(vec![1, 2]), &CornerSet::at_infinity(vec![2, 3])));
    assert!(compatible(&CornerSet::at_infinity(vec![1]), &CornerSet::at_infinity(vec![1, 2])));
    assert!(compatible(&CornerSet::at_infinity(vec![1]), &CornerSet::at_infinity(vec![2])));
    assert!(!compatible(&CornerSet::at_infinity(vec![1, 2]), &CornerSet::finite(vec![1, 2, 3])));
    assert!(compatible(&CornerSet::at_infinity(vec![1, 2]), &CornerSet::finite(vec![2, 3, 4])));

    let fam = corner_poset(&tripod(), 2, false).unwrap();
    let s124 = CornerSet::finite(vec![1, 2, 4]);
    let s1234 = CornerSet::finite(vec![1, 2, 3, 4]);
    let s234 = CornerSet::finite(vec![2, 3, 4]);
    // Families list their sets in sorted order.
    assert!(fam.contains(&vec![s1234, s124.clone()]));
    assert!(!fam.contains(&vec![s124, s234]));
    assert!(fam.iter().all(|f| f.windows(2).all(|w| w[0] < w[1])));
}

#[test]
fn single_chord_corners() {
    let fam = corner_poset(&chords(Convention::Odd, &[(1, 2)]), 1, false).unwrap();
    assert_eq!(fam, vec![vec![CornerSet::finite(vec![1, 2])]]);
    let with_inf = corner_poset(&chords(Convention::Odd, &[(1, 2)]), 1, true).unwrap();
    assert_eq!(with_inf.len(), 4);
}

// ---- Poincaré polynomials --------------------------------------------------

fn cohen(n: usize, dim: u32) -> Poly {
    let mut p = Poly::one();
    for k in 2..=n {
        p = p.mul(&Poly::binomial((k - 1) as u64, dim - 1));
    }
    p
}

fn permutations(v: &[VertexId]) -> Vec<Vec<VertexId>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[test]
fn complete_graphs_match_cohen() {
    for n in 1..=6usize {
        let verts: Vec<VertexId> = (1..=n as VertexId).collect();
        let edges: Vec<(VertexId, VertexId)> =
            verts.iter().flat_map(|&a| verts.iter().filter(move |&&b| b > a).map(move |&b| (a, b))).collect();
        let g = SimpleGraph::new(verts.iter().copied(), edges);
        for dim in [3, 4, 5] {
            let expect = cohen(n, dim);
            let orders = if n <= 5 { permutations(&verts) } else { vec![verts.clone(), verts.iter().rev().copied().collect()] };
            for o in orders {
                assert_eq!(graph_poincare(&g, dim, &o).unwrap(), expect, "K_{n} order {o:?}");
            }
        }
    }
}

#[test]
fn small_examples() {
    let edge = SimpleGraph::new(1..=2, [(1, 2)]);
    assert_eq!(graph_poincare(&edge, 5, &[1, 2]).unwrap().to_string(), "1 + t^4");
    let k3 = SimpleGraph::new(1..=3, [(1, 2), (2, 3), (1, 3)]);
    assert_eq!(graph_poincare(&k3, 3, &[1, 2, 3]).unwrap().to_string(), "1 + 3t^2 + 2t^4");
}

#[test]
fn four_cycle_is_never_admissible() {
    let c4 = SimpleGraph::new(1..=4, [(1, 2), (2, 3), (3, 4), (4, 1)]);
    for o in permutations(&[1, 2, 3, 4]) {
        assert!(matches!(graph_poincare(&c4, 3, &o), Err(StrataError::NotAdmissible { .. })), "{o:?}");
    }
}

#[test]
fn diagram_poincare_is_order_invariant() {
    for d in test_diagrams() {
        let verts: Vec<VertexId> = d.vertices().collect();
        if verts.len() > 6 {
            continue;
        }
        let mut seen = BTreeSet::new();
        for o in permutations(&verts) {
            if let Ok(p) = poincare_polynomial(&d, 4, PoincareMode::Ambient, Some(&o)) {
                seen.insert(p.to_string());
            }
        }
        assert!(seen.len() <= 1, "{d}: {seen:?}");
    }
}

#[test]
fn fiber_mode() {
    // R^d minus three points.
    let p = poincare_polynomial(&tripod(), 3, PoincareMode::Fiber, None).unwrap();
    assert_eq!(p.to_string(), "1 + 3t^2");
    let c = chords(Convention::Odd, &[(1, 3), (2, 4)]);
    assert_eq!(poincare_polynomial(&c, 3, PoincareMode::Fiber, None).unwrap(), Poly::one());
    assert!(matches!(
        poincare_polynomial(&tripod(), 3, PoincareMode::Fiber, Some(&[4, 1, 2, 3])),
        Err(StrataError::SegmentsNotFirst)
    ));
}

// ---- dimensions ------------------------------------------------------------

#[test]
fn gamma2_dimensions() {
    let g = gamma2();
    let d5 = dimensions(&g, 5).unwrap();
    assert_eq!((d5.fiber_dim, d5.class_degree, d5.sphere_dim), (8, 4, 12));
    let d3 = dimensions(&g, 3).unwrap();
    assert_eq!((d3.fiber_dim, d3.class_degree), (6, 0));
    assert_eq!(dimensions(&Cochain::zero(Ring::Z), 7).unwrap().fiber_dim, 0);
}

#[test]
fn dimension_identity_on_basis_elements() {
    for d in test_diagrams() {
        let c = Cochain::from_int_terms(Ring::Z, [(&d, 1)]).unwrap();
        for dim in [4, 5, 6, 7] {
            let dims = dimensions(&c, dim).unwrap();
            assert_eq!(dims.fiber_dim, direct_fiber_dim(&d, dim, d.edges().len()), "{d}");
        }
    }
}

proptest! {
    #[test]
    fn random_graph_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, edges) = random_graph(&mut rng);
        let g = SimpleGraph::new(1..=n as VertexId, edges);
        prop_assert!(blocks_and_tree(&g).counting(&g).corrected_holds());
    }

    #[test]
    fn block_tree_is_a_forest(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, edges) = random_graph(&mut rng);
        let g = SimpleGraph::new(1..=n as VertexId, edges);
        let b = blocks_and_tree(&g);
        // nodes = blocks + cut vertices; a forest has one tree per component of non-isolated vertices.
        let comps = g.components().into_iter().filter(|c| c.len() > 1).count();
        prop_assert_eq!(b.tree_edges.len() + comps, b.blocks.len() + b.cut_vertices.len());
    }
}
