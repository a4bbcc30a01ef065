//! Small dense exact linear algebra over `Q`.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn mat_vec(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Gauss–Jordan inverse; `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let s = &f * &a[col][j];
                a[r][j] -= s;
                let s = &f * &inv[col][j];
                inv[r][j] -= s;
            }
        }
    }
    Some(inv)
}

/// Rank of a (possibly rectangular) matrix given as rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    if a.is_empty() {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for j in c..cols {
                let s = &f * &a[r][j];
                a[i][j] -= s;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Counts of positive, negative and zero entries in a diagonal form of the
/// symmetric matrix `m`, obtained by rational congruence `PᵀMP`.
pub fn signature(m: &Matrix) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = m.clone();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            // bring a nonzero diagonal entry into position k, or manufacture
            // one by adding a row/column with a nonzero off-diagonal pairing
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // row_k += row_j, col_k += col_j; new a_kk = 2 a_kj
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                zero += 1;
                k += 1;
                continue;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let s = &f * &a[k][j];
                a[i][j] -= s;
            }
            for r in k..n {
                let s = &f * &a[r][k];
                a[r][i] -= s;
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

/// Quadratic form `aᵀ M b`.
pub fn bilinear(m: &Matrix, a: &[Q], b: &[Q]) -> Q {
    let mb = mat_vec(m, b);
    a.iter().zip(&mb).map(|(x, y)| x * y).sum()
}

/// Whether a symmetric matrix is negative definite.
pub fn is_negative_definite(m: &Matrix) -> bool {
    let (p, _, z) = signature(m);
    p == 0 && z == 0
}

pub fn is_one(q: &Q) -> bool {
    q.is_one()
}
