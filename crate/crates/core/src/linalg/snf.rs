use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `A = U·D·V` with `U`, `V` unimodular and `D` diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// `U^{-1}`, so that `D = U^{-1}·A·V^{-1}`.
    u_inv: IntMatrix,
    /// `V^{-1}`.
    v_inv: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariants().len()
    }

    /// Nonzero diagonal entries in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn u_inverse(&self) -> &IntMatrix {
        &self.u_inv
    }

    pub fn v_inverse(&self) -> &IntMatrix {
        &self.v_inv
    }
}

struct Work {
    d: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    q_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.p.swap_rows(a, b);
        self.p_inv.swap_cols(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_row(dst, src, c);
        self.p.add_row(dst, src, c);
        self.p_inv.add_col(src, dst, &-c);
    }

    fn negate_row(&mut self, r: usize) {
        self.d.negate_row(r);
        self.p.negate_row(r);
        self.p_inv.negate_col(r);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.q.swap_cols(a, b);
        self.q_inv.swap_rows(a, b);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_col(dst, src, c);
        self.q.add_col(dst, src, c);
        self.q_inv.add_row(src, dst, &-c);
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        p: IntMatrix::identity(r),
        p_inv: IntMatrix::identity(r),
        q: IntMatrix::identity(c),
        q_inv: IntMatrix::identity(c),
    };
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = w.d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if w.d.get(bi, bj).abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(w);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let piv = w.d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..r {
                if w.d.get(i, t).is_zero() {
                    continue;
                }
                let qt = w.d.get(i, t).div_floor(&piv);
                w.add_row(i, t, &-qt);
                dirty |= !w.d.get(i, t).is_zero();
            }
            for j in t + 1..c {
                if w.d.get(t, j).is_zero() {
                    continue;
                }
                let qt = w.d.get(t, j).div_floor(&piv);
                w.add_col(j, t, &-qt);
                dirty |= !w.d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.d.get(i, j).mod_floor(&piv).is_zero()));
            if let Some(i) = offender {
                w.add_row(t, i, &BigInt::from(1));
                continue;
            }
            break;
        }
        if w.d.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    finish(w)
}

fn finish(w: Work) -> SmithDecomposition {
    SmithDecomposition { u: w.p_inv, d: w.d, v: w.q_inv, u_inv: w.p, v_inv: w.q }
}
