//! The graph cochain complex: grading, cochains, coboundary and bases.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::diagram::{
    canonicalize, contract, epsilon, Canonical, ContractError, ContractionOutcome, Convention, Diagram, Edge,
    Element, VertexId,
};
use crate::linalg::SparseMatrix;
use crate::ring::{CoeffError, Ring};
use crate::sign::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Grading {
    pub order: i64,
    pub defect: i64,
}

pub fn grading(d: &Diagram) -> Grading {
    let e = d.edges().len() as i64;
    let f = d.free_count() as i64;
    let q = d.segment_count() as i64;
    Grading { order: e - f, defect: 2 * e - q - 3 * f }
}

/// Homogeneity key of a cochain: grading, strand count and convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub grading: Grading,
    pub strands: usize,
    pub convention: Convention,
}

impl Degree {
    pub fn of(d: &Diagram) -> Degree {
        Degree { grading: grading(d), strands: d.strand_count(), convention: d.convention() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("mixed grading: {0:?} and {1:?}")]
    MixedGrading(Degree, Degree),
    #[error("ring mismatch: {0} and {1}")]
    RingMismatch(Ring, Ring),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error("basis budget exceeded: {vertices} vertices > limit {limit}")]
    Budget { vertices: usize, limit: usize },
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("coboundary target {0} missing from the next basis")]
    MissingTarget(Diagram),
}

/// Resource limits for exhaustive enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest vertex count for which bases are generated.
    pub max_vertices: usize,
    /// Largest support for exhaustive sub-support searches.
    pub max_support: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vertices: 12, max_support: 18 }
    }
}

/// A finite combination of canonical diagrams over a ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    ring: Ring,
    degree: Option<Degree>,
    terms: BTreeMap<Diagram, BigRational>,
}

impl Cochain {
    pub fn zero(ring: Ring) -> Cochain {
        Cochain { ring, degree: None, terms: BTreeMap::new() }
    }

    /// Build from labeled terms; each diagram is canonicalized and its sign absorbed.
    pub fn from_terms<'a, I>(ring: Ring, terms: I) -> Result<Cochain, ComplexError>
    where
        I: IntoIterator<Item = (&'a Diagram, BigRational)>,
    {
        let mut c = Cochain::zero(ring);
        for (d, k) in terms {
            c.add_term(d, &k)?;
        }
        Ok(c)
    }

    pub fn from_int_terms<'a, I>(ring: Ring, terms: I) -> Result<Cochain, ComplexError>
    where
        I: IntoIterator<Item = (&'a Diagram, i64)>,
    {
        Cochain::from_terms(ring, terms.into_iter().map(|(d, k)| (d, BigRational::from_integer(k.into()))))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn degree(&self) -> Option<Degree> {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Diagram, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, canonical: &Diagram) -> BigRational {
        self.terms.get(canonical).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> BTreeSet<Diagram> {
        self.terms.keys().cloned().collect()
    }

    /// Add `k * d`, canonicalizing `d`.
    pub fn add_term(&mut self, d: &Diagram, k: &BigRational) -> Result<(), ComplexError> {
        let k = self.ring.normalize(k)?;
        if k.is_zero() {
            return Ok(());
        }
        let deg = Degree::of(d);
        match self.degree {
            Some(cur) if cur != deg => return Err(ComplexError::MixedGrading(cur, deg)),
            _ => self.degree = Some(deg),
        }
        if let Canonical::Form { diagram, sign } = canonicalize(d, self.ring) {
            let k = if sign.is_minus() { -k } else { k };
            self.add_canonical(diagram, k)?;
        }
        Ok(())
    }

    fn add_canonical(&mut self, d: Diagram, k: BigRational) -> Result<(), ComplexError> {
        let entry = self.terms.entry(d).or_insert_with(BigRational::zero);
        *entry = self.ring.normalize(&(&*entry + k))?;
        self.terms.retain(|_, v| !v.is_zero());
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, ComplexError> {
        if self.ring != other.ring {
            return Err(ComplexError::RingMismatch(self.ring, other.ring));
        }
        let mut out = self.clone();
        for (d, k) in &other.terms {
            out.add_term(d, k)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigRational) -> Result<Cochain, ComplexError> {
        let mut out = Cochain { ring: self.ring, degree: self.degree, terms: BTreeMap::new() };
        for (d, v) in &self.terms {
            let c = self.ring.normalize(&(v * k))?;
            if !c.is_zero() {
                out.terms.insert(d.clone(), c);
            }
        }
        Ok(out)
    }

    /// Reinterpret the coefficients in another ring.
    pub fn change_ring(&self, ring: Ring) -> Result<Cochain, ComplexError> {
        Cochain::from_terms(ring, self.terms.iter().map(|(d, k)| (d, k.clone())))
    }

    /// Integer coefficients, if all are integral.
    pub fn integer_terms(&self) -> Option<Vec<(Diagram, BigInt)>> {
        self.terms.iter().map(|(d, k)| k.is_integer().then(|| (d.clone(), k.to_integer()))).collect()
    }

    /// gcd of the numerators of an integral cochain.
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::zero(), |g, k| g.gcd(&k.to_integer()))
    }
}

/// All contractible elements of a diagram: arcs then non-loop edges.
pub fn elements(d: &Diagram) -> Vec<Element> {
    let mut out: Vec<Element> = d.arcs().iter().map(|a| Element::Arc { strand: a.strand, pos: a.pos }).collect();
    out.extend(d.edges().iter().enumerate().filter(|(_, e)| !e.is_loop()).map(|(i, _)| Element::Edge(i)));
    out
}

/// Signed canonical summands `ε(e) · Γ/e` of `dΓ` that survive over `ring`.
pub fn coboundary_terms(d: &Diagram, ring: Ring) -> Result<Vec<(Diagram, Sign)>, ComplexError> {
    let mut out = Vec::new();
    for el in elements(d) {
        if let ContractionOutcome::NonZero { diagram, sign } = contract(d, el, ring)? {
            out.push((diagram, epsilon(d, el)? * sign));
        }
    }
    Ok(out)
}

pub fn coboundary(x: &Cochain) -> Result<Cochain, ComplexError> {
    let mut out = Cochain::zero(x.ring);
    if let Some(deg) = x.degree {
        out.degree = Some(Degree {
            grading: Grading { order: deg.grading.order, defect: deg.grading.defect + 1 },
            ..deg
        });
    }
    let mut acc: BTreeMap<Diagram, BigRational> = BTreeMap::new();
    for (d, k) in &x.terms {
        for (t, s) in coboundary_terms(d, x.ring)? {
            let v = acc.entry(t).or_insert_with(BigRational::zero);
            if s.is_minus() {
                *v -= k;
            } else {
                *v += k;
            }
        }
    }
    for (t, v) in acc {
        let v = x.ring.normalize(&v)?;
        if !v.is_zero() {
            out.terms.insert(t, v);
        }
    }
    Ok(out)
}

/// Every canonical nonzero diagram with the given grading, in canonical order.
pub fn generate_basis(
    m: usize,
    n: i64,
    k: i64,
    convention: Convention,
    ring: Ring,
    budget: &Budget,
) -> Result<Vec<Diagram>, ComplexError> {
    if m == 0 {
        return Err(ComplexError::NoStrands);
    }
    let total = 2 * n - k;
    if n < 0 || k < 0 || total < 0 {
        return Ok(Vec::new());
    }
    let total = total as usize;
    if total > budget.max_vertices {
        return Err(ComplexError::Budget { vertices: total, limit: budget.max_vertices });
    }
    let mut found: BTreeSet<Diagram> = BTreeSet::new();
    for f in 0..=total {
        let q = total - f;
        let e = n + f as i64;
        if e < 0 {
            continue;
        }
        let e = e as usize;
        if q == 0 && total > 0 {
            // components must touch L
            continue;
        }
        let mut graphs = Vec::new();
        edge_sets(q, f, e, k as usize, &mut graphs);
        if graphs.is_empty() {
            continue;
        }
        for split in compositions(q, m) {
            let mut strands = Vec::with_capacity(m);
            let mut next: VertexId = 1;
            for &len in &split {
                strands.push((next..next + len as VertexId).collect::<Vec<_>>());
                next += len as VertexId;
            }
            let free: Vec<VertexId> = (q as VertexId + 1..=(q + f) as VertexId).collect();
            for edges in &graphs {
                let d = Diagram::from_parts(convention, strands.clone(), free.clone(), edges.clone());
                if !d.components().iter().all(|c| c.iter().any(|&v| d.is_segment(v))) {
                    continue;
                }
                if let Canonical::Form { diagram, .. } = canonicalize(&d, ring) {
                    found.insert(diagram);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Ways to write `q` as an ordered sum of `m` nonnegative parts.
fn compositions(q: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 1 {
        return vec![vec![q]];
    }
    let mut out = Vec::new();
    for first in 0..=q {
        for mut rest in compositions(q - first, m - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Simple edge sets (self-loops allowed on segment vertices `1..=q` only)
/// with `e` edges, segment edge-degree at least 1, free degree at least 3,
/// and total excess `k`.
fn edge_sets(q: usize, f: usize, e: usize, k: usize, out: &mut Vec<Vec<Edge>>) {
    let nv = q + f;
    let min_deg = |v: usize| if v <= q { 1 } else { 3 };
    let mut cands: Vec<(usize, usize)> = Vec::new();
    for a in 1..=nv {
        for b in a..=nv {
            if a == b && a > q {
                continue;
            }
            cands.push((a, b));
        }
    }
    struct St<'a> {
        cands: &'a [(usize, usize)],
        deg: Vec<usize>,
        chosen: Vec<usize>,
        excess: usize,
        deficit: usize,
    }
    fn rec(
        st: &mut St,
        idx: usize,
        e: usize,
        k: usize,
        min_deg: &dyn Fn(usize) -> usize,
        out: &mut Vec<Vec<Edge>>,
    ) {
        let remaining = e - st.chosen.len();
        if st.deficit > 2 * remaining {
            return;
        }
        if remaining == 0 {
            if st.deficit == 0 {
                out.push(
                    st.chosen
                        .iter()
                        .map(|&c| {
                            let (a, b) = st.cands[c];
                            Edge::new(a as VertexId, b as VertexId)
                        })
                        .collect(),
                );
            }
            return;
        }
        if idx >= st.cands.len() {
            return;
        }
        let (a, b) = st.cands[idx];
        // Once the scan leaves first coordinate `a`, vertex `a` is final.
        let closes = idx + 1 == st.cands.len() || st.cands[idx + 1].0 != a;
        let bump = |st: &mut St, v: usize, delta: usize, add: bool| {
            for _ in 0..delta {
                if add {
                    if st.deg[v] >= min_deg(v) {
                        st.excess += 1;
                    } else {
                        st.deficit -= 1;
                    }
                    st.deg[v] += 1;
                } else {
                    st.deg[v] -= 1;
                    if st.deg[v] >= min_deg(v) {
                        st.excess -= 1;
                    } else {
                        st.deficit += 1;
                    }
                }
            }
        };
        // take
        {
            if a == b {
                bump(st, a, 2, true);
            } else {
                bump(st, a, 1, true);
                bump(st, b, 1, true);
            }
            st.chosen.push(idx);
            if st.excess <= k && !(closes && st.deg[a] < min_deg(a)) {
                rec(st, idx + 1, e, k, min_deg, out);
            }
            st.chosen.pop();
            if a == b {
                bump(st, a, 2, false);
            } else {
                bump(st, a, 1, false);
                bump(st, b, 1, false);
            }
        }
        // skip
        if !(closes && st.deg[a] < min_deg(a)) {
            rec(st, idx + 1, e, k, min_deg, out);
        }
    }
    let deficit = (1..=nv).map(min_deg).sum();
    let mut st = St { cands: &cands, deg: vec![0; nv + 1], chosen: Vec::new(), excess: 0, deficit };
    if nv == 0 {
        if e == 0 {
            out.push(Vec::new());
        }
        return;
    }
    rec(&mut st, 0, e, k, &min_deg, out);
}

/// Matrix of `d: D^k_n -> D^{k+1}_n` in canonical bases (rows: targets).
pub fn coboundary_matrix(
    m: usize,
    n: i64,
    k: i64,
    convention: Convention,
    ring: Ring,
    budget: &Budget,
) -> Result<SparseMatrix, ComplexError> {
    let src = generate_basis(m, n, k, convention, ring, budget)?;
    let dst = generate_basis(m, n, k + 1, convention, ring, budget)?;
    matrix_between(&src, &dst, ring)
}

/// Coboundary restricted to `src` columns, with rows indexed by `dst`.
pub fn matrix_between(src: &[Diagram], dst: &[Diagram], ring: Ring) -> Result<SparseMatrix, ComplexError> {
    let index: BTreeMap<&Diagram, usize> = dst.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut mat = SparseMatrix::new(dst.len(), src.len());
    for (j, d) in src.iter().enumerate() {
        for (t, s) in coboundary_terms(d, ring)? {
            let i = *index.get(&t).ok_or_else(|| ComplexError::MissingTarget(t.clone()))?;
            mat.add(i, j, &BigInt::from(s.to_i64()));
        }
    }
    if ring == Ring::Z2 {
        mat.reduce_mod2();
    }
    Ok(mat)
}

/// Column vector of a cochain in a basis; `None` if a term is outside it.
pub fn coordinates(x: &Cochain, basis: &[Diagram]) -> Option<Vec<BigRational>> {
    let index: BTreeMap<&Diagram, usize> = basis.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut v = vec![BigRational::zero(); basis.len()];
    for (d, k) in x.terms() {
        v[*index.get(d)?] = k.clone();
    }
    Some(v)
}

/// Cochain from integer coordinates in a basis.
pub fn from_coordinates(ring: Ring, basis: &[Diagram], coords: &[BigInt]) -> Result<Cochain, ComplexError> {
    let mut c = Cochain::zero(ring);
    for (d, k) in basis.iter().zip(coords) {
        if !k.is_zero() {
            c.add_term(d, &BigRational::from_integer(k.clone()))?;
        }
    }
    Ok(c)
}

/// Divide out the content and make the leading coefficient positive.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    use num_integer::Integer;
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let lead_neg = v.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false);
    let g = if lead_neg { -g } else { g };
    v.iter().map(|x| x / &g).collect()
}
