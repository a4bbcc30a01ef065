//! Exact two-phase simplex for `max c·x  s.t.  A x = b, x ≥ 0`.
//!
//! `A` and `c` are rational; the right-hand side `b` may be any [`Scalar`],
//! which lets the same solver run on parametric right-hand sides. Pivots are
//! always taken on entries of `A`, so only rational divisions occur.
//! Bland's rule keeps the method finite under degeneracy.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::param::{cmp, Scalar, Window};
use crate::rational::Q;

#[derive(Debug, Clone)]
pub enum Outcome<T> {
    Infeasible,
    Unbounded,
    Optimal { value: T, x: Vec<T> },
}

const PIVOT_CAP: usize = 100_000;

struct Tableau<T> {
    rows: Vec<Vec<Q>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        let inv = Q::one() / &p;
        for v in self.rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        self.rhs[r] = self.rhs[r].scale(&inv);
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            let pivot_row = self.rows[r].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
            self.rhs[i] = self.rhs[i].sub(&self.rhs[r].scale(&f));
        }
        self.basis[r] = c;
    }

    /// Runs the primal simplex for `max cost·x` over the allowed columns.
    /// Returns `false` on unboundedness.
    fn optimize(&mut self, cost: &[Q], allowed: &[bool], w: &mut Window) -> Result<bool> {
        for _ in 0..PIVOT_CAP {
            // reduced costs are rational: they only involve A and cost
            let mut entering = None;
            for j in 0..cost.len() {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, b) in self.basis.iter().enumerate() {
                    r -= &cost[*b] * &self.rows[i][j];
                }
                if r.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].scale(&(Q::one() / a));
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => match cmp(&ratio, &best, w) {
                        Ordering::Less => Some((i, ratio)),
                        Ordering::Equal if self.basis[i] < self.basis[k] => Some((i, ratio)),
                        _ => Some((k, best)),
                    },
                };
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, j);
        }
        Err(Error::Resource("simplex pivot cap reached".into()))
    }
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn maximize<T: Scalar>(a: &[Vec<Q>], b: &[T], c: &[Q], w: &mut Window) -> Result<Outcome<T>> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::internal("lp dimensions disagree"));
    }
    // phase 1: rows normalized to b ≥ 0, one artificial per row
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (row, bi) in a.iter().zip(b) {
        let flip = bi.sign(w) == Ordering::Less;
        let mut r: Vec<Q> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|_| Q::zero()));
        rows.push(r);
        rhs.push(if flip { bi.neg() } else { bi.clone() });
    }
    for (i, r) in rows.iter_mut().enumerate() {
        r[n + i] = Q::one();
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
    };
    let mut cost1 = vec![Q::zero(); n + m];
    for v in cost1.iter_mut().skip(n) {
        *v = -Q::one();
    }
    let all = vec![true; n + m];
    t.optimize(&cost1, &all, w)?;
    let mut infeas = T::zero();
    for (i, bcol) in t.basis.iter().enumerate() {
        if *bcol >= n {
            infeas = infeas.add(&t.rhs[i]);
        }
    }
    if infeas.sign(w) != Ordering::Equal {
        return Ok(Outcome::Infeasible);
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let mut cost2 = vec![Q::zero(); n + m];
    cost2[..n].clone_from_slice(c);
    let mut allowed = vec![true; n + m];
    for v in allowed.iter_mut().skip(n) {
        *v = false;
    }
    if !t.optimize(&cost2, &allowed, w)? {
        return Ok(Outcome::Unbounded);
    }
    let mut x = vec![T::zero(); n];
    let mut value = T::zero();
    for (i, bcol) in t.basis.iter().enumerate() {
        if *bcol < n {
            x[*bcol] = t.rhs[i].clone();
            value = value.add(&t.rhs[i].scale(&c[*bcol]));
        }
    }
    Ok(Outcome::Optimal { value, x })
}

/// Whether `target` is a nonnegative combination of `generators`.
pub fn in_cone<T: Scalar>(generators: &[Vec<Q>], target: &[T], w: &mut Window) -> Result<bool> {
    let dim = target.len();
    let a: Vec<Vec<Q>> = (0..dim)
        .map(|r| generators.iter().map(|g| g[r].clone()).collect())
        .collect();
    let c = vec![Q::zero(); generators.len()];
    Ok(!matches!(maximize(&a, target, &c, w)?, Outcome::Infeasible))
}

/// Whether `p` lies in the convex hull of `points` (all rational).
pub fn in_hull(points: &[Vec<Q>], p: &[Q]) -> Result<bool> {
    use crate::param::Lin;
    let dim = p.len();
    let mut a: Vec<Vec<Q>> = (0..dim)
        .map(|r| points.iter().map(|q| q[r].clone()).collect())
        .collect();
    a.push(vec![Q::one(); points.len()]);
    let mut b: Vec<Lin> = p.iter().cloned().map(Lin::constant).collect();
    b.push(Lin::constant(Q::one()));
    let c = vec![Q::zero(); points.len()];
    let mut w = Window::new();
    Ok(!matches!(maximize(&a, &b, &c, &mut w)?, Outcome::Infeasible))
}
