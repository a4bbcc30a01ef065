//! Exact arithmetic along a one-parameter family.
//!
//! The engines in this crate (Zariski loop, cone LP, chamber walk) only ever
//! add, subtract and scale by rational constants, and branch on signs. Running
//! them on values of the form `at + rate·τ` therefore computes, for every
//! sufficiently small `τ > 0` at once, the answer for the class `D(t0 + τ)`.
//! Each sign decision goes through a [`Window`], which records how far `τ`
//! may grow before that decision could flip. When all rates are zero this is
//! plain rational arithmetic and the window stays unbounded.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{Signed, Zero};

use crate::rational::Q;

/// Tracks the open interval `(0, limit)` of parameter values on which every
/// sign decision taken so far stays the same.
#[derive(Clone, Debug, Default)]
pub struct Window {
    limit: Option<Q>,
}

impl Window {
    pub fn new() -> Self {
        Window { limit: None }
    }

    /// `None` means the decisions hold for every `τ > 0`.
    pub fn limit(&self) -> Option<&Q> {
        self.limit.as_ref()
    }

    fn clamp(&mut self, bound: Q) {
        match &self.limit {
            Some(l) if *l <= bound => {}
            _ => self.limit = Some(bound),
        }
    }

    /// Sign of `x` at `τ = 0+`.
    pub fn sign(&mut self, x: &Lin) -> Ordering {
        match x.at.cmp(&Q::zero()) {
            Ordering::Equal => x.rate.cmp(&Q::zero()),
            s => {
                if !x.rate.is_zero() && x.rate.is_positive() != x.at.is_positive() {
                    self.clamp(-(&x.at / &x.rate));
                }
                s
            }
        }
    }
}

/// The value `at + rate·τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lin {
    pub at: Q,
    pub rate: Q,
}

impl Lin {
    pub fn constant(at: Q) -> Self {
        Lin { at, rate: Q::zero() }
    }

    pub fn new(at: Q, rate: Q) -> Self {
        Lin { at, rate }
    }

    pub fn is_constant(&self) -> bool {
        self.rate.is_zero()
    }

    pub fn eval(&self, tau: &Q) -> Q {
        &self.at + &self.rate * tau
    }
}

/// Ordered-field operations the generic engines need.
pub trait Scalar: Clone + Debug {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn scale(&self, q: &Q) -> Self;
    fn sign(&self, w: &mut Window) -> Ordering;

    fn neg(&self) -> Self {
        self.scale(&-Q::from_integer(1.into()))
    }
}

impl Scalar for Lin {
    fn zero() -> Self {
        Lin::constant(Q::zero())
    }
    fn add(&self, o: &Self) -> Self {
        Lin::new(&self.at + &o.at, &self.rate + &o.rate)
    }
    fn sub(&self, o: &Self) -> Self {
        Lin::new(&self.at - &o.at, &self.rate - &o.rate)
    }
    fn scale(&self, q: &Q) -> Self {
        Lin::new(&self.at * q, &self.rate * q)
    }
    fn sign(&self, w: &mut Window) -> Ordering {
        w.sign(self)
    }
}

/// A value together with its first-order drift along a second, infinitely
/// smaller step: compares lexicographically. Used to find the Zariski support
/// just to the right of a point on a ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    pub at: Lin,
    pub slope: Lin,
}

impl Scalar for Germ {
    fn zero() -> Self {
        Germ {
            at: Lin::zero(),
            slope: Lin::zero(),
        }
    }
    fn add(&self, o: &Self) -> Self {
        Germ {
            at: self.at.add(&o.at),
            slope: self.slope.add(&o.slope),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Germ {
            at: self.at.sub(&o.at),
            slope: self.slope.sub(&o.slope),
        }
    }
    fn scale(&self, q: &Q) -> Self {
        Germ {
            at: self.at.scale(q),
            slope: self.slope.scale(q),
        }
    }
    fn sign(&self, w: &mut Window) -> Ordering {
        match w.sign(&self.at) {
            Ordering::Equal => w.sign(&self.slope),
            s => s,
        }
    }
}

/// Lifts a rational vector to constants.
pub fn lift(v: &[Q]) -> Vec<Lin> {
    v.iter().cloned().map(Lin::constant).collect()
}

/// `Σ vᵢ·wᵢ` for generic `v` and rational `w`.
pub fn dot<T: Scalar>(v: &[T], w: &[Q]) -> T {
    v.iter()
        .zip(w)
        .filter(|(_, q)| !q.is_zero())
        .fold(T::zero(), |acc, (x, q)| acc.add(&x.scale(q)))
}

/// `v - c·w` with `c` generic and `w` rational.
pub fn axpy<T: Scalar>(v: &[T], c: &T, w: &[Q]) -> Vec<T> {
    v.iter().zip(w).map(|(x, q)| x.sub(&c.scale(q))).collect()
}

pub fn cmp<T: Scalar>(a: &T, b: &T, w: &mut Window) -> Ordering {
    a.sub(b).sign(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn window_records_first_sign_flip() {
        let mut w = Window::new();
        // 1 - 2τ stays positive for τ < 1/2
        assert_eq!(w.sign(&Lin::new(int(1), int(-2))), Ordering::Greater);
        assert_eq!(w.limit(), Some(&frac(1, 2)));
        // 0 + τ is positive on all of τ > 0 and does not shrink the window
        assert_eq!(w.sign(&Lin::new(int(0), int(1))), Ordering::Greater);
        // -1 + 4τ flips at 1/4
        assert_eq!(w.sign(&Lin::new(int(-1), int(4))), Ordering::Less);
        assert_eq!(w.limit(), Some(&frac(1, 4)));
        assert_eq!(w.sign(&Lin::new(int(3), int(5))), Ordering::Greater);
        assert_eq!(w.limit(), Some(&frac(1, 4)));
    }

    #[test]
    fn germ_compares_lexicographically() {
        let mut w = Window::new();
        let g = Germ {
            at: Lin::constant(int(0)),
            slope: Lin::constant(int(-1)),
        };
        assert_eq!(g.sign(&mut w), Ordering::Less);
        assert!(w.limit().is_none());
    }
}
