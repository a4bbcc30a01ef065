//! Valuation vectors of polynomial germs along the standard infinitesimal
//! flag at the origin of `Aⁿ`, and the monomial oracle for `O(d)` on `Pⁿ`.
//!
//! The flag lives on the exceptional divisor `E ≅ P^{n−1}` of the blow-up
//! of the origin, in the chart `u_n = y_n`, `u_i = y_i·y_n`:
//! `Y_{i+1} = E ∩ {y₁ = … = y_i = 0}`. Other linear flags are reached by a
//! linear change of the `u` coordinates before calling in.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp;
use crate::rational::{self, Q};

type Exponent = Vec<u32>;

/// A polynomial in `u₁ … u_n` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermPolynomial {
    n: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl GermPolynomial {
    pub fn zero(n: usize) -> Self {
        GermPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut g = Self::zero(n);
        g.add_term(vec![0; n], c);
        g
    }

    pub fn monomial(exponent: Exponent) -> Self {
        let n = exponent.len();
        let mut g = Self::zero(n);
        g.add_term(exponent, Q::one());
        g
    }

    /// `u_i` with `i` counted from 1.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Self::monomial(e)
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Exponent, Q)>) -> Result<Self> {
        let mut g = Self::zero(n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::input(format!("exponent {e:?} has the wrong length for n = {n}")));
            }
            g.add_term(e, c);
        }
        Ok(g)
    }

    fn add_term(&mut self, e: Exponent, c: Q) {
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &GermPolynomial) -> GermPolynomial {
        let mut g = self.clone();
        for (e, c) in &o.terms {
            g.add_term(e.clone(), c.clone());
        }
        g
    }

    pub fn mul(&self, o: &GermPolynomial) -> GermPolynomial {
        let mut g = Self::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Exponent = a.iter().zip(b).map(|(p, q)| p + q).collect();
                g.add_term(e, x * y);
            }
        }
        g
    }

    pub fn pow(&self, k: u32) -> GermPolynomial {
        (0..k).fold(Self::constant(self.n, Q::one()), |acc, _| acc.mul(self))
    }

    /// Parses sums of terms like `3/2*u1^2*u3 - u2 + 4`.
    pub fn parse(n: usize, text: &str) -> Result<GermPolynomial> {
        if n == 0 {
            return Err(Error::input("a germ needs at least one coordinate"));
        }
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::input("empty germ"));
        }
        let mut g = Self::zero(n);
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            if term.is_empty() {
                return Err(Error::input(format!("dangling sign in germ '{text}'")));
            }
            let (e, mut c) = parse_term(n, term)?;
            if negative {
                c = -c;
            }
            g.add_term(e, c);
            rest = tail;
        }
        Ok(g)
    }

    fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }
}

fn parse_term(n: usize, term: &str) -> Result<(Exponent, Q)> {
    let mut e = vec![0u32; n];
    let mut c = Q::one();
    for factor in term.split('*') {
        if let Some(var) = factor.strip_prefix('u') {
            let (idx, pow) = match var.split_once('^') {
                Some((i, p)) => (i, p),
                None => (var, "1"),
            };
            let i: usize = idx
                .parse()
                .map_err(|_| Error::input(format!("bad variable '{factor}'")))?;
            let p: u32 = pow
                .parse()
                .map_err(|_| Error::input(format!("bad exponent in '{factor}'")))?;
            if i == 0 || i > n {
                return Err(Error::input(format!("variable u{i} outside u1..u{n}")));
            }
            e[i - 1] += p;
        } else {
            c *= rational::parse(factor)?;
        }
    }
    Ok((e, c))
}

impl fmt::Display for GermPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let c = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(i, p)| {
                    if *p == 1 {
                        format!("u{}", i + 1)
                    } else {
                        format!("u{}^{p}", i + 1)
                    }
                })
                .collect();
            if vars.is_empty() || !c.is_one() {
                write!(f, "{c}")?;
                if !vars.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", vars.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ValuationVector {
    pub nu: Vec<u32>,
}

impl ValuationVector {
    pub fn add(&self, o: &ValuationVector) -> ValuationVector {
        ValuationVector {
            nu: self.nu.iter().zip(&o.nu).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `ν(s)`: the order of vanishing `m` at the origin, then the successive
/// vanishing orders of the lowest form `P_m(y₁, …, y_{n−1}, 1)` along
/// `y₁ = 0`, `y₂ = 0`, ….
pub fn valuation_vector(s: &GermPolynomial) -> Result<ValuationVector> {
    let m = s
        .lowest_degree()
        .ok_or_else(|| Error::domain("the zero germ has no valuation"))?;
    let n = s.n;
    // dehomogenize the lowest form in the chart y_n = 1
    let mut current: Vec<Exponent> = s
        .terms
        .keys()
        .filter(|e| e.iter().sum::<u32>() == m)
        .map(|e| e[..n - 1].to_vec())
        .collect();
    let mut nu = vec![m];
    for i in 0..n - 1 {
        let order = current.iter().map(|e| e[i]).min().unwrap_or(0);
        nu.push(order);
        current.retain(|e| e[i] == order);
    }
    if nu[1..].iter().sum::<u32>() > m {
        return Err(Error::internal(format!("valuation {nu:?} violates ν₂+…+ν_n ≤ ν₁")));
    }
    Ok(ValuationVector { nu })
}

/// Local germs of the sections `s₀′, …, s_n′` of `O(d)` on `Pⁿ` together
/// with the vectors `0, e₁, e₁+e₂, …, e₁+e_n` they realize. The auxiliary
/// section is the unit `(1 + u₁ + … + u_n)^{d−1}`; the hyperplanes are the
/// coordinate hyperplanes adapted to the flag.
pub fn simplex_witnesses(n: usize, d: u32) -> Result<Vec<(GermPolynomial, ValuationVector)>> {
    if n < 2 || d < 1 {
        return Err(Error::input("witness sections need n ≥ 2 and d ≥ 1"));
    }
    let linear = (1..=n).fold(GermPolynomial::constant(n, Q::one()), |acc, i| {
        acc.add(&GermPolynomial::variable(n, i))
    });
    let unit = linear.pow(d - 1);
    let e = |i: Option<usize>| {
        let mut v = vec![0; n];
        if let Some(i) = i {
            v[0] = 1;
            v[i] += 1;
        }
        ValuationVector { nu: v }
    };
    let mut out = vec![(unit.clone(), e(None))];
    let mut e1 = vec![0; n];
    e1[0] = 1;
    out.push((unit.mul(&GermPolynomial::variable(n, n)), ValuationVector { nu: e1 }));
    for i in 2..=n {
        out.push((unit.mul(&GermPolynomial::variable(n, i - 1)), e(Some(i - 1))));
    }
    Ok(out)
}

pub const ORACLE_CAP: u64 = 200_000;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn exponents(n: usize, max_degree: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for p in 0..=left {
            cur[i] = p;
            rec(i + 1, left - p, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_degree, &mut cur, &mut out);
    out
}

/// Convex hull of `ν(u^a)/m` over all monomials of degree at most `m·d`,
/// returned as its vertex list in lexicographic order.
pub fn monomial_oracle_body(n: usize, d: u32, m: u32) -> Result<Vec<Vec<Q>>> {
    if n < 2 || d < 1 || m < 1 {
        return Err(Error::input("oracle needs n ≥ 2, d ≥ 1, m ≥ 1"));
    }
    let md = (m as u64) * (d as u64);
    let count = binomial(md + n as u64, n as u64);
    if count > ORACLE_CAP {
        return Err(Error::Resource(format!(
            "{count} monomials exceed the oracle cap of {ORACLE_CAP}"
        )));
    }
    let scale = Q::one() / rational::int(m as i64);
    let mut points: Vec<Vec<Q>> = exponents(n, md as u32)
        .into_iter()
        .map(|e| valuation_vector(&GermPolynomial::monomial(e)))
        .map(|v| v.map(|v| v.nu.iter().map(|&x| rational::int(x as i64) * &scale).collect()))
        .collect::<Result<_>>()?;
    points.sort();
    points.dedup();
    hull_vertices(&points)
}

/// Vertices of the hull of a finite point set in any dimension.
pub fn hull_vertices(points: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    if points.first().is_some_and(|p| p.len() == 2) {
        let poly = crate::polygon::Polygon::hull(points.iter().map(|p| [p[0].clone(), p[1].clone()]));
        let mut v: Vec<Vec<Q>> = poly
            .vertices()
            .iter()
            .map(|[x, y]| vec![x.clone(), y.clone()])
            .collect();
        v.sort();
        return Ok(v);
    }
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let others: Vec<Vec<Q>> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if others.is_empty() || !lp::in_hull(&others, p)? {
            out.push(p.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn v(nu: &[u32]) -> ValuationVector {
        ValuationVector { nu: nu.to_vec() }
    }

    fn qv(x: &[i64]) -> Vec<Q> {
        x.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn parses_and_prints() {
        let g = GermPolynomial::parse(2, "u1^2*u2 + 3*u1^4").unwrap();
        assert_eq!(g.terms().len(), 2);
        assert_eq!(g.terms()[&vec![4, 0]], int(3));
        let h = GermPolynomial::parse(3, "-1/2*u3 + u1 - u1 + 2").unwrap();
        assert_eq!(
            h,
            GermPolynomial::from_terms(3, [(vec![0, 0, 1], frac(-1, 2)), (vec![0, 0, 0], int(2))]).unwrap()
        );
        assert_eq!(GermPolynomial::parse(2, &g.to_string()).unwrap(), g);
        assert!(GermPolynomial::parse(2, "u3").is_err());
        assert!(GermPolynomial::parse(2, "u1 +").is_err());
        assert!(GermPolynomial::parse(2, "0.5*u1").is_err());
    }

    #[test]
    fn small_valuations() {
        let val = |n, s: &str| valuation_vector(&GermPolynomial::parse(n, s).unwrap()).unwrap();
        assert_eq!(val(2, "1"), v(&[0, 0]));
        assert_eq!(val(2, "u1"), v(&[1, 1]));
        assert_eq!(val(2, "u2"), v(&[1, 0]));
        assert_eq!(val(2, "u1^3*u2^2"), v(&[5, 3]));
        assert_eq!(val(3, "u1 + u2^2"), v(&[1, 1, 0]));
        assert_eq!(val(3, "u3^4 + u1^5"), v(&[4, 0, 0]));
        assert_eq!(val(3, "u1*u2 + u2^2*u1"), v(&[2, 1, 1]));
        assert!(matches!(
            valuation_vector(&GermPolynomial::zero(2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn witnesses_realize_their_vectors() {
        for n in 2..=4 {
            for d in 1..=3 {
                let w = simplex_witnesses(n, d).unwrap();
                assert_eq!(w.len(), n + 1);
                for (g, expected) in &w {
                    assert_eq!(&valuation_vector(g).unwrap(), expected);
                }
            }
        }
        let w = simplex_witnesses(3, 1).unwrap();
        let got: Vec<Vec<u32>> = w.iter().map(|(_, e)| e.nu.clone()).collect();
        assert_eq!(got, vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]);
    }

    #[test]
    fn oracle_bodies_are_inverted_simplices() {
        assert_eq!(
            monomial_oracle_body(2, 1, 1).unwrap(),
            vec![qv(&[0, 0]), qv(&[1, 0]), qv(&[1, 1])]
        );
        assert_eq!(
            monomial_oracle_body(2, 2, 1).unwrap(),
            vec![qv(&[0, 0]), qv(&[2, 0]), qv(&[2, 2])]
        );
        assert_eq!(
            monomial_oracle_body(3, 1, 2).unwrap(),
            vec![qv(&[0, 0, 0]), qv(&[1, 0, 0]), qv(&[1, 0, 1]), qv(&[1, 1, 0])]
        );
        assert!(matches!(monomial_oracle_body(6, 40, 40), Err(Error::Resource(_))));
    }

    #[test]
    fn oracle_grows_with_the_level() {
        for (n, d) in [(2, 1), (2, 2), (3, 1)] {
            let low = monomial_oracle_body(n, d, 1).unwrap();
            let high = monomial_oracle_body(n, d, 3).unwrap();
            for p in &low {
                assert!(lp::in_hull(&high, p).unwrap());
            }
        }
    }

    #[test]
    fn rational_points_are_valuative() {
        // every point of (1/q)Zⁿ in Δ₁⁻¹ is ν(u^a)/q for some |a| ≤ q
        for n in 2..=3usize {
            for q in 1..=4u32 {
                let hits: std::collections::BTreeSet<Vec<u32>> = exponents(n, q)
                    .into_iter()
                    .map(|e| valuation_vector(&GermPolynomial::monomial(e)).unwrap().nu)
                    .collect();
                for e in exponents(n, q) {
                    // candidate q·p = (k, j₂, …, j_n) with Σj ≤ k ≤ q
                    let k = e.iter().sum::<u32>();
                    let mut p = vec![k];
                    p.extend(&e[..n - 1]);
                    assert!(hits.contains(&p));
                }
            }
        }
    }

    fn germ(n: usize) -> impl Strategy<Value = GermPolynomial> {
        prop::collection::vec((prop::collection::vec(0u32..=3, n), -3i64..=3), 1..6).prop_filter_map(
            "zero germ",
            move |terms| {
                let g = GermPolynomial::from_terms(n, terms.into_iter().map(|(e, c)| (e, int(c)))).unwrap();
                (!g.is_zero()).then_some(g)
            },
        )
    }

    proptest! {
        #[test]
        fn valuations_respect_the_simplex_bound(g in (2usize..=4).prop_flat_map(germ)) {
            let nu = valuation_vector(&g).unwrap().nu;
            prop_assert!(nu[1..].iter().sum::<u32>() <= nu[0]);
        }

        #[test]
        fn valuation_is_multiplicative((a, b) in (2usize..=4).prop_flat_map(|n| (germ(n), germ(n)))) {
            let lhs = valuation_vector(&a.mul(&b)).unwrap();
            prop_assert_eq!(lhs, valuation_vector(&a).unwrap().add(&valuation_vector(&b).unwrap()));
        }
    }
}
