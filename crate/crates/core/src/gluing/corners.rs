use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{GluingError, GluingPlan};
use crate::diagram::VertexId;
use crate::strata::{compatible, CornerSet, SimpleGraph, StrataError, MAX_CORNER_FAMILIES, MAX_FACE_VERTICES};

/// A transported subgraph that falls apart into two screens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerSplit {
    /// The subgraph on the source side.
    pub set: Vec<VertexId>,
    /// The two pieces left on the target side once the glued pair is cut.
    pub parts: [Vec<VertexId>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerChange {
    pub family: Vec<Vec<VertexId>>,
    pub codim: usize,
    pub splits: Vec<CornerSplit>,
    /// Number of forgotten relative rates of approach.
    pub increase: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerLedger {
    pub pairing: usize,
    /// Corners of the first face carried to the second.
    pub side_a: Vec<CornerChange>,
    /// Corners of the second face carried back to the first.
    pub side_b: Vec<CornerChange>,
}

/// Vertex sets of `g` that can index a corner: edges and biconnected sets.
fn corner_sets(g: &SimpleGraph) -> Result<Vec<BTreeSet<VertexId>>, GluingError> {
    let verts: Vec<VertexId> = g.vertices().collect();
    if verts.len() > MAX_FACE_VERTICES {
        return Err(StrataError::TooManyVertices { vertices: verts.len(), limit: MAX_FACE_VERTICES }.into());
    }
    let mut out: Vec<BTreeSet<VertexId>> = g.edges().map(|(a, b)| BTreeSet::from([a, b])).collect();
    for mask in 1u32..(1 << verts.len()) {
        if mask.count_ones() < 3 {
            continue;
        }
        let set: BTreeSet<VertexId> = (0..verts.len()).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
        if g.induced(&set).is_biconnected() {
            out.push(set);
        }
    }
    out.sort();
    Ok(out)
}

/// Compatible families of corner sets that contain `pair`.
fn families_with(g: &SimpleGraph, pair: [VertexId; 2]) -> Result<Vec<Vec<BTreeSet<VertexId>>>, GluingError> {
    let p: BTreeSet<VertexId> = pair.into_iter().collect();
    let sets: Vec<BTreeSet<VertexId>> = corner_sets(g)?.into_iter().filter(|s| *s != p).collect();
    let cs = |s: &BTreeSet<VertexId>| CornerSet::finite(s.iter().copied().collect());
    let pc = cs(&p);
    let corner: Vec<CornerSet> = sets.iter().map(cs).collect();
    let usable: Vec<usize> = (0..sets.len()).filter(|&i| compatible(&corner[i], &pc)).collect();
    let mut out = vec![vec![p.clone()]];
    let mut cur: Vec<usize> = Vec::new();
    fn grow(
        usable: &[usize],
        start: usize,
        corner: &[CornerSet],
        sets: &[BTreeSet<VertexId>],
        p: &BTreeSet<VertexId>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<BTreeSet<VertexId>>>,
    ) -> Result<(), GluingError> {
        for k in start..usable.len() {
            let i = usable[k];
            if cur.iter().all(|&j| compatible(&corner[i], &corner[j])) {
                cur.push(i);
                if out.len() >= MAX_CORNER_FAMILIES {
                    return Err(StrataError::Budget { limit: MAX_CORNER_FAMILIES }.into());
                }
                let mut fam = vec![p.clone()];
                fam.extend(cur.iter().map(|&j| sets[j].clone()));
                out.push(fam);
                grow(usable, k + 1, corner, sets, p, cur, out)?;
                cur.pop();
            }
        }
        Ok(())
    }
    grow(&usable, 0, &corner, &sets, &p, &mut cur, &mut out)?;
    Ok(out)
}

/// Carry every corner family of `a` containing the glued pair `pair_a`
/// through the vertex bijection `beta` into `b`, where the glued pair is
/// `pair_b`. A transported set containing both glued points that is no
/// longer biconnected splits along the glued pair; when both pieces have
/// more than one vertex a relative rate of approach is forgotten.
pub fn transport_corners(
    a: &SimpleGraph,
    pair_a: [VertexId; 2],
    b: &SimpleGraph,
    pair_b: [VertexId; 2],
    beta: &BTreeMap<VertexId, VertexId>,
) -> Result<Vec<CornerChange>, GluingError> {
    let mut out = Vec::new();
    for family in families_with(a, pair_a)? {
        let mut splits = Vec::new();
        for set in &family[1..] {
            if !(set.contains(&pair_a[0]) && set.contains(&pair_a[1])) {
                continue;
            }
            let image: BTreeSet<VertexId> = set.iter().map(|v| beta.get(v).copied().unwrap_or(*v)).collect();
            let sub = b.induced(&image);
            if sub.is_biconnected() {
                continue;
            }
            let cut = SimpleGraph::new(
                sub.vertices(),
                sub.edges().filter(|&(x, y)| BTreeSet::from([x, y]) != BTreeSet::from(pair_b)),
            );
            let comps = cut.components();
            if comps.len() == 2 && comps.iter().all(|c| c.len() > 1) {
                splits.push(CornerSplit {
                    set: set.iter().copied().collect(),
                    parts: [comps[0].clone(), comps[1].clone()],
                });
            }
        }
        out.push(CornerChange {
            family: family.iter().map(|s| s.iter().copied().collect()).collect(),
            codim: family.len(),
            increase: splits.len(),
            splits,
        });
    }
    Ok(out)
}

/// Corner codimension changes on both sides of one pairing of a plan.
pub fn corner_collapse_analysis(plan: &GluingPlan, pairing: usize) -> Result<CornerLedger, GluingError> {
    let p = plan
        .pairings
        .get(pairing)
        .ok_or(GluingError::NoSuchPairing { index: pairing, len: plan.pairings.len() })?;
    let da = &plan.spaces[p.face_a.space].diagram;
    let db = &plan.spaces[p.face_b.space].diagram;
    let pair = |f: &crate::strata::Face| {
        let v = f.vertices();
        [v[0], v[1]]
    };
    let (pa, pb) = (pair(&p.face_a.face), pair(&p.face_b.face));
    let forward: BTreeMap<VertexId, VertexId> = p.identification.vertex_map.iter().map(|&[x, y]| (x, y)).collect();
    let backward: BTreeMap<VertexId, VertexId> = forward.iter().map(|(&x, &y)| (y, x)).collect();
    let (ta, tb) = (SimpleGraph::t_graph(da), SimpleGraph::t_graph(db));
    Ok(CornerLedger {
        pairing,
        side_a: transport_corners(&ta, pa, &tb, pb, &forward)?,
        side_b: transport_corners(&tb, pb, &ta, pa, &backward)?,
    })
}
