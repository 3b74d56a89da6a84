use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::graph::SimpleGraph;
use super::StrataError;
use crate::complex::{grading, Cochain};
use crate::diagram::{Diagram, VertexId};

/// Polynomial in `t` with integer coefficients, dense by degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn one() -> Poly {
        Poly(vec![BigInt::one()])
    }

    /// `1 + c·t^deg`.
    pub fn binomial(c: u64, deg: u32) -> Poly {
        let mut v = vec![BigInt::zero(); deg as usize + 1];
        v[0] += 1;
        v[deg as usize] += c;
        Poly(v).trimmed()
    }

    fn trimmed(mut self) -> Poly {
        while self.0.len() > 1 && self.0.last().is_some_and(|x| x.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    /// Value at `t = 1`: total rank.
    pub fn total(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = if c.is_one() && i > 0 { String::new() } else { c.to_string() };
            parts.push(match i {
                0 => coeff,
                1 => format!("{coeff}t"),
                _ => format!("{coeff}t^{i}"),
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Poly, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        if raw.is_empty() {
            return Err(serde::de::Error::custom("polynomial needs at least one coefficient"));
        }
        let v = raw
            .iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(|_| serde::de::Error::custom(format!("bad integer {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly(v).trimmed())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoincareMode {
    /// Configurations of all vertices in `R^d` avoiding the diagonals of edges and arcs.
    Ambient,
    /// The fiber over a fixed link: segment vertices on L, free vertices avoiding edge diagonals.
    Fiber,
}

fn check_order(g: &SimpleGraph, order: &[VertexId]) -> Result<(), StrataError> {
    let want: BTreeSet<VertexId> = g.vertices().collect();
    let got: BTreeSet<VertexId> = order.iter().copied().collect();
    if got.len() != order.len() || got != want {
        return Err(StrataError::BadOrder(format!("{order:?} is not an ordering of {want:?}")));
    }
    Ok(())
}

/// Product of `(1 + e_k t^(dim-1))` over the ordering, where `e_k` counts the
/// earlier neighbours of the k-th vertex; `adjacent` decides the clique test.
fn product<F>(g: &SimpleGraph, dim: u32, order: &[VertexId], skip: usize, adjacent: F) -> Result<Poly, StrataError>
where
    F: Fn(VertexId, VertexId) -> bool,
{
    if dim < 2 {
        return Err(StrataError::BadDimension(dim));
    }
    let mut p = Poly::one();
    for (k, &v) in order.iter().enumerate().skip(skip) {
        let earlier: Vec<VertexId> = g.neighbors(v).filter(|u| order[..k].contains(u)).collect();
        for (i, &a) in earlier.iter().enumerate() {
            for &b in &earlier[i + 1..] {
                if !adjacent(a, b) {
                    return Err(StrataError::NotAdmissible { vertex: v });
                }
            }
        }
        p = p.mul(&Poly::binomial(earlier.len() as u64, dim - 1));
    }
    Ok(p)
}

/// Cohomology Poincaré polynomial of the configuration space of a graph,
/// for an ordering in which every vertex's earlier neighbours form a clique.
pub fn graph_poincare(g: &SimpleGraph, dim: u32, order: &[VertexId]) -> Result<Poly, StrataError> {
    check_order(g, order)?;
    product(g, dim, order, 0, |a, b| g.has_edge(a, b))
}

/// Maximum cardinality search starting after `fixed`.
fn mcs(g: &SimpleGraph, fixed: &[VertexId], rest: &[VertexId]) -> Vec<VertexId> {
    let mut order = fixed.to_vec();
    let mut left: BTreeSet<VertexId> = rest.iter().copied().collect();
    while !left.is_empty() {
        let best = left
            .iter()
            .copied()
            .max_by_key(|&v| (g.neighbors(v).filter(|u| order.contains(u)).count(), std::cmp::Reverse(v)))
            .expect("nonempty");
        left.remove(&best);
        order.push(best);
    }
    order
}

/// Poincaré polynomial of the ambient configuration space `C_Γ(R^d)` or the
/// fiber `F(Γ)`. Without an explicit order one is found by maximum
/// cardinality search (segment vertices first in fiber mode).
pub fn poincare_polynomial(
    d: &Diagram,
    dim: u32,
    mode: PoincareMode,
    order: Option<&[VertexId]>,
) -> Result<Poly, StrataError> {
    match mode {
        PoincareMode::Ambient => {
            let g = SimpleGraph::t_graph(d);
            let all: Vec<VertexId> = g.vertices().collect();
            let order = match order {
                Some(o) => o.to_vec(),
                None => mcs(&g, &[], &all),
            };
            graph_poincare(&g, dim, &order)
        }
        PoincareMode::Fiber => {
            let g = SimpleGraph::u_graph(d);
            let q = d.segment_count();
            let order = match order {
                Some(o) => o.to_vec(),
                None => {
                    let segs: Vec<VertexId> = d.segments_in_order().collect();
                    mcs(&g, &segs, d.free_vertices())
                }
            };
            check_order(&g, &order)?;
            if order[..q].iter().any(|&v| !d.is_segment(v)) {
                return Err(StrataError::SegmentsNotFirst);
            }
            // Points of L never collide with each other, so segment pairs count as adjacent.
            product(&g, dim, &order, q, |a, b| g.has_edge(a, b) || (d.is_segment(a) && d.is_segment(b)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    pub fiber_dim: i64,
    pub class_degree: i64,
    pub sphere_dim: i64,
}

/// `q + d·t + (d-1)(N - E)` counted directly on one diagram.
pub fn direct_fiber_dim(d: &Diagram, dim: u32, big_n: usize) -> i64 {
    let dim = dim as i64;
    d.segment_count() as i64 + dim * d.free_count() as i64 + (dim - 1) * (big_n as i64 - d.edges().len() as i64)
}

/// Fiber dimension, cohomology degree of the class and sphere dimension of a
/// homogeneous cochain, with `N` the largest edge count in its support.
pub fn dimensions(c: &Cochain, dim: u32) -> Result<Dimensions, StrataError> {
    let Some(deg) = c.degree() else {
        return Ok(Dimensions { fiber_dim: 0, class_degree: 0, sphere_dim: 0 });
    };
    let big_n = c.terms().keys().map(|d| d.edges().len()).max().unwrap_or(0);
    let out = formula(deg.grading.order, deg.grading.defect, big_n, dim);
    for d in c.terms().keys() {
        let direct = direct_fiber_dim(d, dim, big_n);
        if direct != out.fiber_dim {
            return Err(StrataError::DimensionMismatch { diagram: d.to_string(), formula: out.fiber_dim, direct });
        }
    }
    Ok(out)
}

pub fn diagram_dimensions(d: &Diagram, dim: u32) -> Dimensions {
    let g = grading(d);
    formula(g.order, g.defect, d.edges().len(), dim)
}

fn formula(n: i64, k: i64, big_n: usize, dim: u32) -> Dimensions {
    let dim = dim as i64;
    let big_n = big_n as i64;
    Dimensions {
        fiber_dim: (3 - dim) * n - k + big_n * (dim - 1),
        class_degree: n * (dim - 3) + k,
        sphere_dim: big_n * (dim - 1),
    }
}
