#![allow(dead_code)]

use noct::rational::frac;
use noct::{DivisorClass, SurfaceModel, Q};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn positive_q<R: Rng>(r: &mut R) -> Q {
    frac(r.gen_range(1..=9), r.gen_range(1..=4))
}

/// A strictly positive combination of all effective generators, plus a
/// random nef part. Interior points of a full cone are big.
pub fn big_class<R: Rng>(r: &mut R, model: &SurfaceModel) -> DivisorClass {
    let mut d = DivisorClass::zero(model.rank);
    for g in &model.effective_generators {
        d = d.add_scaled(&positive_q(r), g);
    }
    for g in &model.nef_generators {
        if r.gen_bool(0.5) {
            d = d.add_scaled(&positive_q(r), g);
        }
    }
    d
}

fn binom(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut out = Q::one();
    for i in 0..k {
        out = out * Q::from_integer((n - i).into()) / Q::from_integer((i + 1).into());
    }
    out
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / pivot.clone();
                for j in c..cols {
                    let v = rows[r][j].clone() * f.clone();
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of the map from degree-`e` forms on P² to `k`-jets at the affine
/// point `(p, q)`, built from Taylor coefficients of the monomials `u^a v^b`.
pub fn jet_rank(e: u32, k: u32, p: &Q, q: &Q) -> usize {
    let pow = |x: &Q, n: u32| (0..n).fold(Q::one(), |acc, _| acc * x.clone());
    let mut rows = Vec::new();
    for a in 0..=e {
        for b in 0..=e - a {
            let mut row = Vec::new();
            for i in 0..=k {
                for j in 0..=k - i {
                    row.push(binom(a, i) * pow(p, a.saturating_sub(i)) * binom(b, j) * pow(q, b.saturating_sub(j)));
                }
            }
            rows.push(row);
        }
    }
    rank(rows)
}

/// Whether `O(e)` on P² separates `k`-jets at a sample point.
pub fn separates_jets(e: u32, k: u32) -> bool {
    jet_rank(e, k, &frac(2, 3), &frac(-5, 7)) == ((k + 1) * (k + 2) / 2) as usize
}
