//! Cocycles, cohomology, minimal cocycles and consistent orientations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    coboundary, coboundary_terms, elements, from_coordinates, generate_basis, matrix_between, primitive, Budget,
    Cochain, ComplexError,
};
use crate::diagram::{
    canonicalize, contract, epsilon, reversed_labeling, Canonical, ContractionOutcome, Convention, Diagram, Element,
};
use crate::linalg::{
    integer_kernel, integer_solve, lattice_contains, mod2_kernel, mod2_solve, rational_kernel, rational_rank,
    rational_solve, smith_normal_form, IntMatrix,
};
use crate::ring::Ring;
use crate::sign::Sign;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("input is not a cocycle")]
    NotCocycle,
    #[error("input has non-integral coefficients; minimal decomposition works over Z")]
    NotIntegral,
    #[error("support of {size} diagrams exceeds the sub-support search bound {limit}")]
    SupportBudget { size: usize, limit: usize },
    #[error("minimal cocycles inside the support do not generate the input lattice")]
    NotGenerated,
    #[error("orientation propagation conflict at {diagram} (contraction class {class})")]
    PropagationConflict { diagram: Diagram, class: Diagram },
    #[error("{0} admits no oppositely labeled representative")]
    Irreversible(Diagram),
    #[error("diagram {0} is not in the basis of the requested grading")]
    OutsideBasis(Diagram),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyGroup {
    pub free_rank: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

fn dense(src: &[Diagram], dst: &[Diagram], ring: Ring) -> Result<IntMatrix, ComplexError> {
    Ok(matrix_between(src, dst, ring)?.to_dense())
}

/// Spanning set of `ker d` in degree `(n, k)`; a lattice basis over `Z`.
pub fn cocycle_space(
    m: usize,
    n: i64,
    k: i64,
    convention: Convention,
    ring: Ring,
    budget: &Budget,
) -> Result<Vec<Cochain>, HomologyError> {
    let src = generate_basis(m, n, k, convention, ring, budget)?;
    let dst = generate_basis(m, n, k + 1, convention, ring, budget)?;
    let a = dense(&src, &dst, ring)?;
    let vectors: Vec<Vec<BigInt>> = match ring {
        Ring::Z => integer_kernel(&a),
        Ring::Q => rational_kernel(&a),
        Ring::Z2 => mod2_kernel(&a)
            .into_iter()
            .map(|v| v.into_iter().map(|b| BigInt::from(b as u8)).collect())
            .collect(),
    };
    let mut out = Vec::with_capacity(vectors.len());
    for v in vectors {
        out.push(from_coordinates(ring, &src, &v)?);
    }
    Ok(out)
}

/// `H^k` over `Z` in order `n`: free rank and torsion.
pub fn cohomology_group(
    m: usize,
    n: i64,
    k: i64,
    convention: Convention,
    budget: &Budget,
) -> Result<CohomologyGroup, HomologyError> {
    let here = generate_basis(m, n, k, convention, Ring::Z, budget)?;
    if here.is_empty() {
        return Ok(CohomologyGroup { free_rank: 0, torsion: Vec::new() });
    }
    let next = generate_basis(m, n, k + 1, convention, Ring::Z, budget)?;
    let out_rank = smith_normal_form(&dense(&here, &next, Ring::Z)?).rank();
    let (in_rank, torsion) = if k >= 1 {
        let prev = generate_basis(m, n, k - 1, convention, Ring::Z, budget)?;
        let s = smith_normal_form(&dense(&prev, &here, Ring::Z)?);
        let inv = s.invariants();
        let tors = inv.iter().filter(|x| **x > BigInt::one()).cloned().collect();
        (inv.len(), tors)
    } else {
        (0, Vec::new())
    };
    Ok(CohomologyGroup { free_rank: here.len() - out_rank - in_rank, torsion })
}

/// A support-minimal, content-one integer cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalCocycle {
    pub element: Cochain,
    pub support: BTreeSet<Diagram>,
}

fn subsets(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..r).collect();
    if r > n {
        return;
    }
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Decompose integer cocycles into support-minimal cocycles whose integer
/// span contains the inputs.
pub fn minimal_decomposition(space: &[Cochain], budget: &Budget) -> Result<Vec<MinimalCocycle>, HomologyError> {
    let mut support: BTreeSet<Diagram> = BTreeSet::new();
    for c in space {
        if c.integer_terms().is_none() {
            return Err(HomologyError::NotIntegral);
        }
        if !coboundary(&c.change_ring(Ring::Z)?)?.is_zero() {
            return Err(HomologyError::NotCocycle);
        }
        support.extend(c.support());
    }
    let s: Vec<Diagram> = support.into_iter().collect();
    if s.len() > budget.max_support {
        return Err(HomologyError::SupportBudget { size: s.len(), limit: budget.max_support });
    }
    let mut targets: BTreeSet<Diagram> = BTreeSet::new();
    for d in &s {
        targets.extend(coboundary_terms(d, Ring::Z)?.into_iter().map(|(t, _)| t));
    }
    let targets: Vec<Diagram> = targets.into_iter().collect();
    let a = dense(&s, &targets, Ring::Z)?;
    let index: BTreeMap<&Diagram, usize> = s.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let inputs: Vec<Vec<BigInt>> = space
        .iter()
        .map(|c| {
            let mut v = vec![BigInt::zero(); s.len()];
            for (d, k) in c.terms() {
                v[index[d]] = k.to_integer();
            }
            v
        })
        .collect();

    let mut circuits: Vec<Vec<usize>> = Vec::new();
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    let done = |chosen: &Vec<Vec<BigInt>>| inputs.iter().all(|x| lattice_contains(chosen, x));
    if !done(&chosen) {
        'outer: for r in 1..=s.len() {
            let mut found_here: Vec<(Vec<usize>, Vec<BigInt>)> = Vec::new();
            subsets(s.len(), r, |t| {
                if circuits.iter().any(|c| c.iter().all(|x| t.contains(x))) {
                    return true;
                }
                let sub = a.select_columns(t);
                let ker = rational_kernel(&sub);
                if ker.len() == 1 && ker[0].iter().all(|x| !x.is_zero()) {
                    let mut full = vec![BigInt::zero(); s.len()];
                    for (pos, &col) in t.iter().enumerate() {
                        full[col] = ker[0][pos].clone();
                    }
                    found_here.push((t.to_vec(), full));
                }
                true
            });
            for (t, v) in found_here {
                circuits.push(t);
                let rank_before = rank_of(&chosen);
                let mut trial = chosen.clone();
                trial.push(v.clone());
                if rank_of(&trial) > rank_before || !lattice_contains(&chosen, &v) {
                    chosen.push(orient_like_inputs(v, &inputs));
                    if done(&chosen) {
                        break 'outer;
                    }
                }
            }
        }
    }
    if !done(&chosen) {
        return Err(HomologyError::NotGenerated);
    }
    chosen
        .into_iter()
        .map(|v| {
            let element = from_coordinates(Ring::Z, &s, &v)?;
            Ok(MinimalCocycle { support: element.support(), element })
        })
        .collect()
}

fn rank_of(vs: &[Vec<BigInt>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    rational_rank(&IntMatrix::from_rows(vs))
}

/// Primitive vector, signed to agree with an input it is proportional to,
/// else with a positive leading coefficient.
fn orient_like_inputs(v: Vec<BigInt>, inputs: &[Vec<BigInt>]) -> Vec<BigInt> {
    let p = primitive(&v);
    for x in inputs {
        let px = primitive(x);
        if px == p {
            return if x.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
                p.iter().map(|c| -c).collect()
            } else {
                p
            };
        }
    }
    p
}

/// Whether an integer cocycle is minimal: content one and no proper sub-support carries a cocycle.
pub fn is_minimal(c: &Cochain, budget: &Budget) -> Result<bool, HomologyError> {
    if c.is_zero() || !c.content().is_one() {
        return Ok(false);
    }
    let dec = minimal_decomposition(std::slice::from_ref(c), budget)?;
    Ok(dec.len() == 1 && dec[0].support == c.support())
}

/// One term of a consistently oriented expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedTerm {
    /// Labeled representative used in the expression.
    pub diagram: Diagram,
    pub canonical: Diagram,
    /// `diagram = orientation * canonical`.
    pub orientation: Sign,
    pub coeff: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConsistentExpression {
    pub terms: Vec<OrientedTerm>,
}

impl ConsistentExpression {
    pub fn to_cochain(&self) -> Result<Cochain, ComplexError> {
        Cochain::from_terms(
            Ring::Z,
            self.terms.iter().map(|t| (&t.diagram, BigRational::from_integer(t.coeff.clone()))),
        )
    }
}

/// A principal contraction of a labeled diagram that survives over `Z`.
#[derive(Clone, Debug)]
pub struct ClassFace {
    pub element: Element,
    /// Canonical quotient.
    pub class: Diagram,
    /// `ε(e)` times the sign of the labeled quotient against the class representative.
    pub signed: Sign,
}

/// Surviving principal contractions with their orientation-invariant signs.
pub fn class_faces(d: &Diagram, ring: Ring) -> Result<Vec<ClassFace>, ComplexError> {
    let mut out = Vec::new();
    for el in elements(d) {
        if let ContractionOutcome::NonZero { diagram, sign } = contract(d, el, ring)? {
            out.push(ClassFace { element: el, class: diagram, signed: epsilon(d, el)? * sign });
        }
    }
    Ok(out)
}

/// Orient the terms of an integer cocycle so that matching contractions agree.
pub fn consistent_orientation(c: &Cochain) -> Result<ConsistentExpression, HomologyError> {
    let c = c.change_ring(Ring::Z)?;
    let diagrams: Vec<Diagram> = c.terms().keys().cloned().collect();
    let mut faces_of: Vec<Vec<ClassFace>> = Vec::with_capacity(diagrams.len());
    let mut classes: BTreeMap<Diagram, Vec<(usize, Sign)>> = BTreeMap::new();
    for (i, d) in diagrams.iter().enumerate() {
        let fs = class_faces(d, Ring::Z)?;
        for f in &fs {
            classes.entry(f.class.clone()).or_default().push((i, f.signed));
        }
        faces_of.push(fs);
    }
    let mut t: Vec<Option<Sign>> = vec![None; diagrams.len()];
    for seed in 0..diagrams.len() {
        if t[seed].is_some() {
            continue;
        }
        t[seed] = Some(Sign::Plus);
        let mut queue = VecDeque::from([seed]);
        while let Some(i) = queue.pop_front() {
            let ti = t[i].expect("visited");
            for f in &faces_of[i] {
                let target = ti * f.signed;
                for &(j, sj) in &classes[&f.class] {
                    let want = target * sj;
                    match t[j] {
                        None => {
                            t[j] = Some(want);
                            queue.push_back(j);
                        }
                        Some(tj) if tj != want => {
                            return Err(HomologyError::PropagationConflict {
                                diagram: diagrams[j].clone(),
                                class: f.class.clone(),
                            })
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let mut terms = Vec::with_capacity(diagrams.len());
    for (i, d) in diagrams.iter().enumerate() {
        let ti = t[i].expect("all visited");
        let coeff = c.coeff(d).to_integer();
        let (diagram, orientation, coeff) = match ti {
            Sign::Plus => (d.clone(), Sign::Plus, coeff),
            Sign::Minus => match reversed_labeling(d) {
                Some(r) => (r, Sign::Minus, -coeff),
                None => return Err(HomologyError::Irreversible(d.clone())),
            },
        };
        terms.push(OrientedTerm { diagram, canonical: d.clone(), orientation, coeff });
    }
    Ok(ConsistentExpression { terms })
}

/// Pairs of matching contractions whose signed quotients disagree.
pub fn consistency_violations(expr: &ConsistentExpression) -> Result<Vec<(usize, Element, usize, Element)>, ComplexError> {
    let mut by_class: BTreeMap<Diagram, Vec<(usize, Element, Sign)>> = BTreeMap::new();
    for (i, t) in expr.terms.iter().enumerate() {
        for f in class_faces(&t.diagram, Ring::Z)? {
            by_class.entry(f.class).or_default().push((i, f.element, f.signed));
        }
    }
    let mut bad = Vec::new();
    for members in by_class.values() {
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                if members[a].2 != members[b].2 {
                    bad.push((members[a].0, members[a].1, members[b].0, members[b].1));
                }
            }
        }
    }
    Ok(bad)
}

/// Extend a partial assignment of coefficients to a cocycle, if possible.
pub fn extend_to_cocycle(
    partial: &[(Diagram, BigRational)],
    m: usize,
    n: i64,
    k: i64,
    convention: Convention,
    ring: Ring,
    budget: &Budget,
) -> Result<Option<Cochain>, HomologyError> {
    let src = generate_basis(m, n, k, convention, ring, budget)?;
    let dst = generate_basis(m, n, k + 1, convention, ring, budget)?;
    let a = dense(&src, &dst, ring)?;
    let index: BTreeMap<&Diagram, usize> = src.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut fixed: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (d, k) in partial {
        let (canon, sign) = match canonicalize(d, ring) {
            Canonical::Form { diagram, sign } => (diagram, sign),
            Canonical::Zero(_) => return Err(HomologyError::OutsideBasis(d.clone())),
        };
        let i = *index.get(&canon).ok_or_else(|| HomologyError::OutsideBasis(d.clone()))?;
        let v = ring.normalize(&if sign.is_minus() { -k.clone() } else { k.clone() }).map_err(ComplexError::from)?;
        fixed.insert(i, v);
    }
    let free: Vec<usize> = (0..src.len()).filter(|i| !fixed.contains_key(i)).collect();
    let af = a.select_columns(&free);
    let mut rhs = vec![BigRational::zero(); a.rows()];
    for (&j, v) in &fixed {
        for (i, r) in rhs.iter_mut().enumerate() {
            let x = a.get(i, j);
            if !x.is_zero() {
                *r -= BigRational::from_integer(x.clone()) * v;
            }
        }
    }
    let sol: Option<Vec<BigRational>> = match ring {
        Ring::Q => rational_solve(&af, &rhs),
        Ring::Z => {
            let b: Vec<BigInt> = rhs.iter().map(|x| x.to_integer()).collect();
            integer_solve(&af, &b).map(|x| x.into_iter().map(BigRational::from_integer).collect())
        }
        Ring::Z2 => {
            let b: Vec<bool> = rhs
                .iter()
                .map(|x| ring.normalize(x).map(|y| !y.is_zero()))
                .collect::<Result<_, _>>()
                .map_err(ComplexError::from)?;
            mod2_solve(&af, &b).map(|x| {
                x.into_iter().map(|bit| if bit { BigRational::one() } else { BigRational::zero() }).collect()
            })
        }
    };
    let Some(sol) = sol else {
        return Ok(None);
    };
    let mut out = Cochain::zero(ring);
    for (&j, v) in &fixed {
        out.add_term(&src[j], v)?;
    }
    for (pos, &j) in free.iter().enumerate() {
        out.add_term(&src[j], &sol[pos])?;
    }
    debug_assert!(coboundary(&out)?.is_zero());
    Ok(Some(out))
}
