use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntMatrix;

fn to_rational(a: &IntMatrix) -> Vec<Vec<BigRational>> {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..cols {
                    let t = &m[row][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rational_rank(a: &IntMatrix) -> usize {
    let mut m = to_rational(a);
    rref(&mut m, a.cols()).len()
}

/// Kernel basis over `Q`, each vector scaled to a primitive integer vector.
pub fn rational_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let mut m = to_rational(a);
    let pivots = rref(&mut m, a.cols());
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); a.cols()];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
            crate::complex::primitive(&ints)
        })
        .collect()
}

/// Some rational solution of `A x = b`.
pub fn rational_solve(a: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.cols();
    let mut m: Vec<Vec<BigRational>> = to_rational(a);
    for (row, bi) in m.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    let pivots = rref(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][cols].clone();
    }
    Some(x)
}

type Bits = Vec<u64>;

fn bit(v: &Bits, j: usize) -> bool {
    (v[j / 64] >> (j % 64)) & 1 == 1
}

fn to_bits(a: &IntMatrix, extra: usize) -> Vec<Bits> {
    let words = (a.cols() + extra).div_ceil(64).max(1);
    (0..a.rows())
        .map(|i| {
            let mut r = vec![0u64; words];
            for (j, x) in a.row(i).iter().enumerate() {
                if x.is_odd() {
                    r[j / 64] |= 1 << (j % 64);
                }
            }
            r
        })
        .collect()
}

fn rref2(m: &mut [Bits], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| bit(&m[i], col)) else {
            continue;
        };
        m.swap(row, p);
        let pr = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && bit(r, col) {
                for (w, pw) in r.iter_mut().zip(&pr) {
                    *w ^= pw;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn mod2_rank(a: &IntMatrix) -> usize {
    let mut m = to_bits(a, 0);
    rref2(&mut m, a.cols()).len()
}

pub fn mod2_kernel(a: &IntMatrix) -> Vec<Vec<bool>> {
    let mut m = to_bits(a, 0);
    let pivots = rref2(&mut m, a.cols());
    (0..a.cols())
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![false; a.cols()];
            v[f] = true;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = bit(&m[r], f);
            }
            v
        })
        .collect()
}

pub fn mod2_solve(a: &IntMatrix, b: &[bool]) -> Option<Vec<bool>> {
    let cols = a.cols();
    let mut m = to_bits(a, 1);
    for (i, &bi) in b.iter().enumerate() {
        if bi {
            m[i][cols / 64] |= 1 << (cols % 64);
        }
    }
    let pivots = rref2(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![false; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = bit(&m[r], cols);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rational_rank(&a), 2);
        assert_eq!(mod2_rank(&a), 1);
        let k = rational_kernel(&a);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(rational_rank(&b), 2);
        assert_eq!(mod2_rank(&b), 0);
        assert_eq!(mod2_kernel(&b).len(), 2);
    }

    #[test]
    fn solving() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![1, -1]]);
        let b = vec![BigRational::from_integer(3.into()), BigRational::from_integer(1.into())];
        let x = rational_solve(&a, &b).unwrap();
        assert_eq!(x[0], BigRational::from_integer(2.into()));
        let a2 = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(mod2_solve(&a2, &[true, false]).is_none());
        assert_eq!(mod2_solve(&a2, &[true, true]).unwrap(), vec![true, false]);
    }
}
