//! Newton–Okounkov polygons of big classes with respect to a flag `(C, z)`.
//!
//! Along `D − sC` the positive part moves affinely inside each Zariski
//! chamber. The walk starts at `s = a` (the coefficient of `C` in `N(D)`),
//! finds the support just to the right of the current point, and jumps to the
//! first root of a decreasing coefficient or pairing. The polygon is the
//! region `a ≤ s ≤ μ`, `α(s) ≤ y ≤ β(s)` with `α = Σ coef·(Cᵢ·C)_z` and
//! `β = α + P·C`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::param::{self, Germ, Lin, Scalar, Window};
use crate::rational::{self, Q};
use crate::zariski;

pub type Point = [Q; 2];

fn cross(o: &Point, a: &Point, b: &Point) -> Q {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// A convex polygon with exact vertices, stored counterclockwise from the
/// lexicographically smallest vertex with collinear vertices removed. Degenerate
/// polygons (a segment or a point) keep two or one vertices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Convex hull of a finite point set.
    pub fn hull<I: IntoIterator<Item = Point>>(points: I) -> Polygon {
        let mut pts: Vec<Point> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        if pts.len() <= 1 {
            return Polygon { vertices: pts };
        }
        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Polygon { vertices: lower }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as vertex pairs; a segment yields both orientations.
    fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let n = self.vertices.len();
        (0..if n >= 2 { n } else { 0 }).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0] == *p,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                cross(a, b, p).is_zero()
                    && rational::min(a[0].clone(), b[0].clone()) <= p[0]
                    && p[0] <= a[0].clone().max(b[0].clone())
                    && rational::min(a[1].clone(), b[1].clone()) <= p[1]
                    && p[1] <= a[1].clone().max(b[1].clone())
            }
            _ => self.edges().all(|(a, b)| !cross(a, b, p).is_negative()),
        }
    }

    pub fn contains_polygon(&self, other: &Polygon) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn area(&self) -> Q {
        if self.vertices.len() < 3 {
            return Q::zero();
        }
        let o = &self.vertices[0];
        let twice: Q = (1..self.vertices.len() - 1)
            .map(|i| cross(o, &self.vertices[i], &self.vertices[i + 1]))
            .sum();
        twice / rational::int(2)
    }

    pub fn translate(&self, dx: &Q, dy: &Q) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|[x, y]| [x + dx, y + dy]).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> Polygon {
        Polygon::hull(self.vertices.iter().map(|[x, y]| [x * k, y * k]))
    }

    /// Points where the edges cross the vertical line `x = t`.
    fn vertical_hits(&self, t: &Q) -> Vec<Point> {
        let mut out = Vec::new();
        if self.vertices.len() == 1 && self.vertices[0][0] == *t {
            out.push(self.vertices[0].clone());
        }
        for (a, b) in self.edges() {
            if a[0] == *t {
                out.push(a.clone());
            }
            let (lo, hi) = if a[0] < b[0] { (a, b) } else { (b, a) };
            if lo[0] < *t && *t < hi[0] {
                let y = &lo[1] + (&hi[1] - &lo[1]) * (t - &lo[0]) / (&hi[0] - &lo[0]);
                out.push([t.clone(), y]);
            }
        }
        out
    }

    /// The part with first coordinate at least `t`.
    pub fn clip_x_ge(&self, t: &Q) -> Polygon {
        let mut pts: Vec<Point> = self.vertices.iter().filter(|v| v[0] >= *t).cloned().collect();
        pts.extend(self.vertical_hits(t));
        Polygon::hull(pts)
    }

    /// `(min y, max y)` on the vertical line `x = t`, if it meets the polygon.
    pub fn fiber(&self, t: &Q) -> Option<(Q, Q)> {
        let hits = self.vertical_hits(t);
        let lo = hits.iter().map(|p| p[1].clone()).min()?;
        let hi = hits.iter().map(|p| p[1].clone()).max()?;
        Some((lo, hi))
    }

    pub fn min_x(&self) -> Option<Q> {
        self.vertices.iter().map(|v| v[0].clone()).min()
    }

    pub fn max_x(&self) -> Option<Q> {
        self.vertices.iter().map(|v| v[0].clone()).max()
    }

    /// `max{λ ≥ 0 : λ·dir ∈ self}`, or `None` when the origin is outside.
    pub fn ray_exit(&self, dir: &Point) -> Option<Q> {
        let origin = [Q::zero(), Q::zero()];
        if !self.contains(&origin) {
            return None;
        }
        if self.vertices.len() < 3 {
            // degenerate: the farthest vertex on the ray, if any
            let dd = &dir[0] * &dir[0] + &dir[1] * &dir[1];
            let best = self
                .vertices
                .iter()
                .filter(|v| cross(&origin, dir, v).is_zero())
                .map(|v| (&v[0] * &dir[0] + &v[1] * &dir[1]) / &dd)
                .filter(|l| l.is_positive())
                .max();
            return Some(best.unwrap_or_else(Q::zero));
        }
        // edge a→b keeps p when cross(a, b, p) ≥ 0; substitute p = λ·dir
        self.edges()
            .filter_map(|(a, b)| {
                let e = [&b[0] - &a[0], &b[1] - &a[1]];
                let slope = &e[0] * &dir[1] - &e[1] * &dir[0];
                let offset = &e[1] * &a[0] - &e[0] * &a[1];
                (slope.is_negative()).then(|| offset / -slope)
            })
            .min()
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hull{{")?;
        for (i, [x, y]) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Polygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[String; 2]> = self
            .vertices
            .iter()
            .map(|[x, y]| [x.to_string(), y.to_string()])
            .collect();
        v.serialize(s)
    }
}

/// An affine piece `slope·t + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffinePiece {
    #[serde(with = "rational::serde_q")]
    pub slope: Q,
    #[serde(with = "rational::serde_q")]
    pub intercept: Q,
}

impl AffinePiece {
    pub fn through(p: &Point, q: &Point) -> AffinePiece {
        let slope = (&q[1] - &p[1]) / (&q[0] - &p[0]);
        let intercept = &p[1] - &slope * &p[0];
        AffinePiece { slope, intercept }
    }

    pub fn eval(&self, t: &Q) -> Q {
        &self.slope * t + &self.intercept
    }
}

/// A piecewise affine function on `[t₀, t_k]`; piece `i` lives on
/// `[breakpoints[i], breakpoints[i+1]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiecewiseRationalFunction {
    #[serde(with = "rational::serde_qvec")]
    pub breakpoints: Vec<Q>,
    pub pieces: Vec<AffinePiece>,
}

impl PiecewiseRationalFunction {
    /// Interpolates knots with increasing abscissae, merging collinear runs.
    pub fn from_knots(knots: &[Point]) -> PiecewiseRationalFunction {
        let mut breakpoints = vec![knots[0][0].clone()];
        let mut pieces: Vec<AffinePiece> = Vec::new();
        for w in knots.windows(2) {
            if w[0][0] == w[1][0] {
                continue;
            }
            let piece = AffinePiece::through(&w[0], &w[1]);
            if pieces.last() == Some(&piece) {
                *breakpoints.last_mut().unwrap() = w[1][0].clone();
            } else {
                pieces.push(piece);
                breakpoints.push(w[1][0].clone());
            }
        }
        PiecewiseRationalFunction { breakpoints, pieces }
    }

    pub fn domain(&self) -> (&Q, &Q) {
        (&self.breakpoints[0], self.breakpoints.last().unwrap())
    }

    /// Value at `t`; at an interior breakpoint the left piece is used.
    pub fn eval(&self, t: &Q) -> Option<Q> {
        let (lo, hi) = self.domain();
        if t < lo || t > hi {
            return None;
        }
        if self.pieces.is_empty() {
            return None;
        }
        let i = self.breakpoints[1..]
            .iter()
            .position(|b| t <= b)
            .unwrap_or(self.pieces.len() - 1);
        Some(self.pieces[i].eval(t))
    }

    /// Values of the two adjacent pieces agree at every interior breakpoint.
    pub fn is_continuous(&self) -> bool {
        (1..self.pieces.len()).all(|i| {
            let b = &self.breakpoints[i];
            self.pieces[i - 1].eval(b) == self.pieces[i].eval(b)
        })
    }

    pub fn interior_breakpoints(&self) -> &[Q] {
        let n = self.breakpoints.len();
        if n <= 2 {
            &[]
        } else {
            &self.breakpoints[1..n - 1]
        }
    }
}

/// The flag curve `Y₁ = C` and the incidence of the negative curves with `C`
/// at the flag point `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagSpec {
    pub curve: DivisorClass,
    /// Index of `C` among the negative curves, when it is one of them.
    pub curve_index: Option<usize>,
    /// Local intersection multiplicity at `z`, keyed by negative-curve index.
    pub incidence: BTreeMap<usize, u32>,
}

impl FlagSpec {
    pub fn negative_curve(model: &SurfaceModel, i: usize, incidence: BTreeMap<usize, u32>) -> FlagSpec {
        FlagSpec {
            curve: model.negative_curves[i].clone(),
            curve_index: Some(i),
            incidence,
        }
    }

    pub fn class(model: &SurfaceModel, c: DivisorClass, incidence: BTreeMap<usize, u32>) -> FlagSpec {
        let curve_index = model.negative_curves.iter().position(|n| *n == c);
        FlagSpec {
            curve: c,
            curve_index,
            incidence,
        }
    }

    pub fn validate(&self, model: &SurfaceModel) -> Result<()> {
        model.check_class(&self.curve)?;
        if self.curve.is_zero() {
            return Err(Error::input("flag curve is zero"));
        }
        if !zariski::is_pseudoeffective(model, &self.curve)? {
            return Err(Error::input(format!("flag curve {} is not effective", self.curve)));
        }
        for (&i, &m) in &self.incidence {
            if i >= model.negative_curves.len() {
                return Err(Error::input(format!("incidence given for unknown curve {i}")));
            }
            if Some(i) == self.curve_index || m == 0 {
                continue;
            }
            let total = model.pair(&model.negative_curves[i], &self.curve);
            if rational::int(m as i64) > total {
                return Err(Error::input(format!(
                    "local intersection {m} of curve {i} with the flag curve exceeds the total {total}"
                )));
            }
        }
        Ok(())
    }

    fn incidence_of(&self, i: usize) -> Q {
        if Some(i) == self.curve_index {
            return Q::zero();
        }
        rational::int(self.incidence.get(&i).copied().unwrap_or(0) as i64)
    }
}

/// Boundary values of the polygon at a walk knot.
#[derive(Clone, Debug)]
pub(crate) struct Knot {
    pub s: Lin,
    pub alpha: Lin,
    pub beta: Lin,
}

#[derive(Clone, Debug)]
pub(crate) struct Walk {
    pub knots: Vec<Knot>,
}

const WALK_CAP: usize = 10_000;

/// Chamber walk along `d − sC`, exact for every parameter value in the window.
/// `d` must be big.
pub(crate) fn walk(model: &SurfaceModel, d: &[Lin], flag: &FlagSpec, w: &mut Window) -> Result<Walk> {
    let c = flag.curve.coords();
    let duals = zariski::curve_duals(model);
    let c_dual = model.dual(&flag.curve);
    let start = zariski::decompose(model, d, w)?;
    let mut s = flag
        .curve_index
        .and_then(|i| start.coefficient(i).cloned())
        .unwrap_or_else(Lin::zero);
    let mu = zariski::mu_lin(model, d, c, w)?;
    let slope: Vec<Lin> = c.iter().map(|x| Lin::constant(-x)).collect();
    let mut knots = Vec::new();
    for _ in 0..WALK_CAP {
        let at = param::axpy(d, &s, c);
        let germ: Vec<Germ> = at
            .into_iter()
            .zip(&slope)
            .map(|(at, sl)| Germ { at, slope: sl.clone() })
            .collect();
        let raw = zariski::decompose(model, &germ, w)?;
        if flag.curve_index.is_some_and(|i| raw.support.contains(&i)) {
            return Err(Error::internal("flag curve entered the negative part along the walk"));
        }
        let p0: Vec<Lin> = raw.positive.iter().map(|g| g.at.clone()).collect();
        let p1: Vec<Q> = raw.positive.iter().map(|g| g.slope.at.clone()).collect();
        let mut alpha0 = Lin::zero();
        let mut alpha1 = Q::zero();
        for (&i, a) in raw.support.iter().zip(&raw.coeffs) {
            let inc = flag.incidence_of(i);
            alpha0 = alpha0.add(&a.at.scale(&inc));
            alpha1 += &a.slope.at * &inc;
        }
        let pc0 = param::dot(&p0, &c_dual);
        let pc1: Q = p1.iter().zip(&c_dual).map(|(a, b)| a * b).sum();
        knots.push(Knot {
            s: s.clone(),
            alpha: alpha0.clone(),
            beta: alpha0.add(&pc0),
        });

        let remaining = mu.sub(&s);
        if remaining.sign(w) != Ordering::Greater {
            return Err(Error::internal("walk reached μ without a final chamber"));
        }
        let mut step = remaining.clone();
        let mut last = true;
        let mut consider = |cand: Lin, w: &mut Window| {
            if param::cmp(&cand, &step, w) == Ordering::Less {
                step = cand;
                last = false;
            }
        };
        for a in &raw.coeffs {
            if a.slope.at.is_negative() {
                consider(a.at.scale(&-a.slope.at.recip()), w);
            }
        }
        for (j, dual) in duals.iter().enumerate() {
            if raw.support.contains(&j) {
                continue;
            }
            let v1: Q = p1.iter().zip(dual).map(|(a, b)| a * b).sum();
            if v1.is_negative() {
                let v0 = param::dot(&p0, dual);
                consider(v0.scale(&-v1.recip()), w);
            }
        }
        if step.sign(w) != Ordering::Greater {
            return Err(Error::internal("chamber walk made no progress"));
        }
        let next = s.add(&step);
        if last {
            let alpha = alpha0.add(&step.scale(&alpha1));
            let beta = alpha.add(&pc0).add(&step.scale(&pc1));
            knots.push(Knot { s: next, alpha, beta });
            return Ok(Walk { knots });
        }
        s = next;
    }
    Err(Error::Resource("chamber walk exceeded its step cap".into()))
}

/// Everything the walk computes for a rational class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OkounkovData {
    /// Coefficient of the flag curve in the negative part of `D`.
    #[serde(with = "rational::serde_q")]
    pub a: Q,
    #[serde(with = "rational::serde_q")]
    pub mu: Q,
    pub alpha: PiecewiseRationalFunction,
    pub beta: PiecewiseRationalFunction,
    pub polygon: Polygon,
}

fn require_big(model: &SurfaceModel, d: &DivisorClass) -> Result<()> {
    model.check_class(d)?;
    if !zariski::is_big(model, d)? {
        return Err(Error::domain(format!("class {d} is not big on '{}'", model.name)));
    }
    Ok(())
}

pub fn okounkov_data(model: &SurfaceModel, d: &DivisorClass, flag: &FlagSpec) -> Result<OkounkovData> {
    require_big(model, d)?;
    flag.validate(model)?;
    let walk = walk(model, &param::lift(d.coords()), flag, &mut Window::new())?;
    let alpha: Vec<Point> = walk
        .knots
        .iter()
        .map(|k| [k.s.at.clone(), k.alpha.at.clone()])
        .collect();
    let beta: Vec<Point> = walk.knots.iter().map(|k| [k.s.at.clone(), k.beta.at.clone()]).collect();
    let polygon = Polygon::hull(alpha.iter().chain(&beta).cloned());
    Ok(OkounkovData {
        a: alpha[0][0].clone(),
        mu: alpha.last().unwrap()[0].clone(),
        alpha: PiecewiseRationalFunction::from_knots(&alpha),
        beta: PiecewiseRationalFunction::from_knots(&beta),
        polygon,
    })
}

pub fn okounkov_polygon(model: &SurfaceModel, d: &DivisorClass, flag: &FlagSpec) -> Result<Polygon> {
    Ok(okounkov_data(model, d, flag)?.polygon)
}

/// `Δ(D − tC)` shifted by `t·e₁`, for `0 ≤ t < μ(D; C)`.
pub fn slice_at(model: &SurfaceModel, d: &DivisorClass, flag: &FlagSpec, t: &Q) -> Result<Polygon> {
    require_big(model, d)?;
    flag.validate(model)?;
    if t.is_negative() {
        return Err(Error::input("slice parameter must be nonnegative"));
    }
    let mu = zariski::mu(model, d, &flag.curve)?;
    if *t >= mu {
        return Err(Error::domain(format!("slice parameter {t} is not below μ = {mu}")));
    }
    let rest = d.add_scaled(&-t.clone(), &flag.curve);
    Ok(okounkov_polygon(model, &rest, flag)?.translate(t, &Q::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::registry;
    use proptest::prelude::*;

    fn pt(x: Q, y: Q) -> Point {
        [x, y]
    }

    fn ip(x: i64, y: i64) -> Point {
        [int(x), int(y)]
    }

    fn no_incidence() -> BTreeMap<usize, u32> {
        BTreeMap::new()
    }

    #[test]
    fn hull_is_canonical() {
        let a = Polygon::hull(vec![ip(2, 0), ip(0, 0), ip(1, 0), ip(1, 1), ip(0, 0)]);
        assert_eq!(a.vertices(), &[ip(0, 0), ip(2, 0), ip(1, 1)]);
        let seg = Polygon::hull(vec![ip(0, 0), ip(1, 1), ip(2, 2)]);
        assert_eq!(seg.vertices(), &[ip(0, 0), ip(2, 2)]);
        assert_eq!(Polygon::hull(vec![ip(3, 1)]).vertices(), &[ip(3, 1)]);
        assert!(Polygon::hull(vec![]).is_empty());
    }

    #[test]
    fn area_contains_and_rays() {
        let t = Polygon::hull(vec![ip(0, 0), ip(2, 0), ip(2, 2)]);
        assert_eq!(t.area(), int(2));
        assert!(t.contains(&ip(1, 1)));
        assert!(!t.contains(&ip(1, 2)));
        assert_eq!(t.ray_exit(&ip(1, 0)), Some(int(2)));
        assert_eq!(t.ray_exit(&ip(1, 1)), Some(int(2)));
        let b = Polygon::hull(vec![ip(0, 0), pt(int(1), frac(1, 2)), ip(2, 0)]);
        assert_eq!(b.ray_exit(&ip(1, 1)), Some(int(0)));
        assert_eq!(b.ray_exit(&ip(1, 0)), Some(int(2)));
        let shifted = t.translate(&int(1), &int(0));
        assert_eq!(shifted.ray_exit(&ip(1, 0)), None);
        let seg = Polygon::hull(vec![ip(0, 0), ip(3, 0)]);
        assert_eq!(seg.ray_exit(&ip(1, 0)), Some(int(3)));
        assert_eq!(seg.ray_exit(&ip(1, 1)), Some(int(0)));
    }

    #[test]
    fn clipping_and_fibers() {
        let t = Polygon::hull(vec![ip(0, 0), ip(2, 0), ip(0, 2)]);
        assert_eq!(t.clip_x_ge(&int(1)), Polygon::hull(vec![ip(1, 0), ip(2, 0), ip(1, 1)]));
        assert_eq!(t.fiber(&frac(1, 2)), Some((int(0), frac(3, 2))));
        assert_eq!(t.fiber(&int(3)), None);
        assert_eq!(t.clip_x_ge(&int(2)), Polygon::hull(vec![ip(2, 0)]));
    }

    #[test]
    fn piecewise_functions_merge_collinear_knots() {
        let f = PiecewiseRationalFunction::from_knots(&[ip(0, 0), ip(1, 1), ip(2, 2), ip(3, 1)]);
        assert_eq!(f.breakpoints, vec![int(0), int(2), int(3)]);
        assert_eq!(f.eval(&frac(5, 2)), Some(frac(3, 2)));
        assert!(f.is_continuous());
        assert_eq!(f.interior_breakpoints(), &[int(2)]);
    }

    #[test]
    fn line_flag_on_the_plane() {
        let m = registry::p2();
        let flag = FlagSpec::class(&m, DivisorClass::from_ints(&[1]), no_incidence());
        let p = okounkov_polygon(&m, &DivisorClass::from_ints(&[1]), &flag).unwrap();
        assert_eq!(p, Polygon::hull(vec![ip(0, 0), ip(1, 0), ip(0, 1)]));
    }

    #[test]
    fn exceptional_flag_generic_point() {
        let m = registry::example5();
        let flag = FlagSpec::negative_curve(&m, 1, no_incidence());
        let data = okounkov_data(&m, &DivisorClass::from_ints(&[1, 2, 1]), &flag).unwrap();
        assert_eq!(
            data.polygon,
            Polygon::hull(vec![ip(0, 0), pt(int(1), frac(1, 2)), ip(2, 0)])
        );
        assert_eq!(data.beta.breakpoints, vec![int(0), int(1), int(2)]);
        assert_eq!(data.beta.pieces[0].slope, frac(1, 2));
        assert_eq!(data.beta.pieces[1].slope, frac(-1, 2));
    }

    #[test]
    fn exceptional_flag_point_on_e1() {
        let m = registry::example5();
        let flag = FlagSpec::negative_curve(&m, 1, [(0, 1)].into_iter().collect());
        let data = okounkov_data(&m, &DivisorClass::from_ints(&[1, 2, 1]), &flag).unwrap();
        assert_eq!(data.polygon, Polygon::hull(vec![ip(0, 0), ip(2, 1), ip(1, 1)]));
        // cross-check α and β against direct Zariski decompositions
        for k in 0..=8 {
            let s = frac(k, 4);
            let ds = DivisorClass::from_ints(&[1, 2, 1]).add_scaled(&-s.clone(), &m.negative_curves[1]);
            let z = zariski::zariski_decompose(&m, &ds).unwrap();
            let alpha = z.coefficient(0);
            let beta = &alpha + m.pair(&z.positive_part, &m.negative_curves[1]);
            assert_eq!(data.alpha.eval(&s), Some(alpha));
            assert_eq!(data.beta.eval(&s), Some(beta));
        }
    }

    #[test]
    fn slices() {
        let m = registry::p2();
        let flag = FlagSpec::class(&m, DivisorClass::from_ints(&[1]), no_incidence());
        let o1 = DivisorClass::from_ints(&[1]);
        assert_eq!(
            slice_at(&m, &o1, &flag, &int(0)).unwrap(),
            okounkov_polygon(&m, &o1, &flag).unwrap()
        );
        assert_eq!(
            slice_at(&m, &DivisorClass::from_ints(&[2]), &flag, &int(1)).unwrap(),
            Polygon::hull(vec![ip(1, 0), ip(2, 0), ip(1, 1)])
        );
        assert!(matches!(slice_at(&m, &o1, &flag, &int(1)), Err(Error::Domain(_))));

        let e = registry::example5();
        let flag = FlagSpec::negative_curve(&e, 1, no_incidence());
        assert_eq!(
            slice_at(&e, &DivisorClass::from_ints(&[1, 2, 1]), &flag, &int(1)).unwrap(),
            Polygon::hull(vec![ip(1, 0), pt(int(1), frac(1, 2)), ip(2, 0)])
        );
    }

    #[test]
    fn non_big_classes_are_rejected() {
        let m = registry::blp_p2();
        let flag = FlagSpec::negative_curve(&m, 0, no_incidence());
        assert!(matches!(
            okounkov_polygon(&m, &DivisorClass::from_ints(&[1, -1]), &flag),
            Err(Error::Domain(_))
        ));
    }

    fn coeff() -> impl Strategy<Value = Q> {
        (0i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d))
    }

    fn big_example5_class() -> impl Strategy<Value = DivisorClass> {
        (coeff(), coeff(), coeff())
            .prop_map(|(a, b, c)| DivisorClass::new(vec![a, b, c]).add(&DivisorClass::from_ints(&[1, 2, 1])))
    }

    fn example5_flag() -> impl Strategy<Value = FlagSpec> {
        (0usize..3, 0u32..2).prop_map(|(i, z)| {
            let m = registry::example5();
            let neighbours: Vec<usize> = (0..3)
                .filter(|&j| j != i && m.pair(&m.negative_curves[i], &m.negative_curves[j]) > int(0))
                .collect();
            let inc = if z == 1 && !neighbours.is_empty() {
                [(neighbours[0], 1)].into_iter().collect()
            } else {
                BTreeMap::new()
            };
            FlagSpec::negative_curve(&m, i, inc)
        })
    }

    proptest! {
        #[test]
        fn area_law(d in big_example5_class(), flag in example5_flag()) {
            let m = registry::example5();
            let p = okounkov_polygon(&m, &d, &flag).unwrap();
            prop_assert_eq!(p.area() * int(2), zariski::volume(&m, &d).unwrap());
        }

        #[test]
        fn slicing_matches_clipping(d in big_example5_class(), flag in example5_flag(), k in 0i64..8) {
            let m = registry::example5();
            let data = okounkov_data(&m, &d, &flag).unwrap();
            let t = &data.mu * frac(k, 8);
            let s = slice_at(&m, &d, &flag, &t).unwrap();
            prop_assert_eq!(s, data.polygon.clip_x_ge(&t));
        }

        #[test]
        fn nesting_under_ample_perturbation(d in big_example5_class(), flag in example5_flag(), half in any::<bool>()) {
            let m = registry::example5();
            let a = DivisorClass::from_ints(&[1, 2, 1]).add(&DivisorClass::from_ints(&[1, 2, 2])).add(&DivisorClass::from_ints(&[0, 1, 1]));
            let eps = if half { frac(1, 2) } else { frac(1, 3) };
            let small = okounkov_polygon(&m, &d, &flag).unwrap();
            let large = okounkov_polygon(&m, &d.add_scaled(&eps, &a), &flag).unwrap();
            prop_assert!(large.contains_polygon(&small));
        }

        #[test]
        fn width_is_positive_part_against_flag(d in big_example5_class(), flag in example5_flag(), k in 0i64..=8) {
            let m = registry::example5();
            let data = okounkov_data(&m, &d, &flag).unwrap();
            let t = &data.a + (&data.mu - &data.a) * frac(k, 8);
            let (lo, hi) = data.polygon.fiber(&t).unwrap();
            let z = zariski::zariski_decompose(&m, &d.add_scaled(&-t.clone(), &flag.curve));
            let width = match z {
                Ok(z) => m.pair(&z.positive_part, &flag.curve),
                Err(_) => unreachable!(),
            };
            prop_assert_eq!(hi - lo, width);
        }
    }
}
