use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{smith_normal_form, IntMatrix};

/// Basis of the integer kernel lattice `{x in Z^n : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a);
    let r = s.rank();
    let q = s.v_inverse();
    (r..a.cols()).map(|j| q.column(j)).collect()
}

/// Some integer solution of `A x = b`.
pub fn integer_solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith_normal_form(a);
    let pb = s.u_inverse().mul_vec(b);
    let inv = s.invariants();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, v) in pb.iter().enumerate() {
        if i < inv.len() {
            let (qt, rem) = v.div_rem(&inv[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = qt;
        } else if !v.is_zero() {
            return None;
        }
    }
    Some(s.v_inverse().mul_vec(&y))
}

/// Whether `target` is an integer combination of `gens`.
pub fn lattice_contains(gens: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    if gens.is_empty() {
        return target.iter().all(|x| x.is_zero());
    }
    let rows: Vec<Vec<BigInt>> = (0..target.len()).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect();
    integer_solve(&IntMatrix::from_rows(&rows), target).is_some()
}
