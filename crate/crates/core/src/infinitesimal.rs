//! Infinitesimal Newton–Okounkov bodies: the polygon of `π*D` on the blow-up
//! of a point `x`, taken with respect to the exceptional curve `E` and a
//! point `z ∈ E`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, DivisorClass, PointProfile, SurfaceModel};
use crate::param::{self, Lin, Scalar, Window};
use crate::polygon::{self, FlagSpec, Point, Polygon, Walk};
use crate::rational::{self, Q};
use crate::zariski;

/// The blow-up `X′` of a point together with the index of `E` among its
/// negative curves.
#[derive(Clone, Debug)]
pub struct PointBlowup {
    pub model: SurfaceModel,
    pub e: usize,
}

impl PointBlowup {
    pub fn exceptional(&self) -> &DivisorClass {
        &self.model.negative_curves[self.e]
    }

    pub fn flag(&self, z: &BTreeMap<usize, u32>) -> FlagSpec {
        FlagSpec::negative_curve(&self.model, self.e, z.clone())
    }
}

/// Builds `X′` from the point's cone data, which must be present.
pub fn blow_up_point(model: &SurfaceModel, x: &PointProfile) -> Result<PointBlowup> {
    let cones = x.cones.as_ref().ok_or_else(|| {
        Error::input(format!(
            "point '{}' has no blow-up cone data; infinitesimal bodies need the cones of the blow-up",
            x.label
        ))
    })?;
    if cones.nef_generators.is_empty() {
        return Err(Error::input(format!(
            "point '{}' has no nef generators for the blow-up",
            x.label
        )));
    }
    let bl = lattice::blow_up(model, x)?.with_cones(cones)?;
    lattice::validate_model(&bl).into_result()?;
    Ok(PointBlowup {
        e: model.negative_curves.len(),
        model: bl,
    })
}

/// `Δ_ξ^{-1} = hull{0, ξe₁, ξ(e₁+e₂), …, ξ(e₁+e_n)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvertedSimplex {
    #[serde(with = "rational::serde_q")]
    pub size: Q,
    pub ambient_dim: usize,
}

impl InvertedSimplex {
    pub fn new(size: Q, ambient_dim: usize) -> Self {
        InvertedSimplex { size, ambient_dim }
    }

    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let n = self.ambient_dim;
        let mut out = vec![vec![Q::zero(); n]];
        for i in 0..n {
            let mut v = vec![Q::zero(); n];
            v[0] = self.size.clone();
            v[i] = self.size.clone();
            out.push(v);
        }
        out
    }

    pub fn polygon(&self) -> Polygon {
        Polygon::hull(self.vertices().into_iter().map(|v| [v[0].clone(), v[1].clone()]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiResult {
    #[serde(with = "rational::serde_q")]
    pub xi: Q,
    pub witness_flag: FlagSpec,
    pub body: Polygon,
}

fn require_big(model: &SurfaceModel, d: &DivisorClass) -> Result<()> {
    model.check_class(d)?;
    if !zariski::is_big(model, d)? {
        return Err(Error::domain(format!("class {d} is not big on '{}'", model.name)));
    }
    Ok(())
}

/// `Δ_{Y•}(π*D)` for the flag `(E, z)` with `z` given by its incidences.
pub fn infinitesimal_body(
    model: &SurfaceModel,
    x: &PointProfile,
    z: &BTreeMap<usize, u32>,
    d: &DivisorClass,
) -> Result<Polygon> {
    require_big(model, d)?;
    let bl = blow_up_point(model, x)?;
    polygon::okounkov_polygon(&bl.model, &d.pullback(), &bl.flag(z))
}

/// Whether `Δ_ξ^{-1} ⊆ body`; by convexity it suffices to test the vertices.
pub fn contains_inverted_simplex(body: &Polygon, xi: &Q) -> bool {
    InvertedSimplex::new(xi.clone(), 2)
        .vertices()
        .iter()
        .all(|v| body.contains(&[v[0].clone(), v[1].clone()]))
}

/// Largest `ξ` with `Δ_ξ^{-1} ⊆ body`, from the exits of the rays along
/// `e₁` and `e₁ + e₂`.
pub fn xi_of_body(body: &Polygon) -> Q {
    let e1: Point = [rational::int(1), Q::zero()];
    let diag: Point = [rational::int(1), rational::int(1)];
    match (body.ray_exit(&e1), body.ray_exit(&diag)) {
        (Some(a), Some(b)) => rational::min(a, b),
        _ => Q::zero(),
    }
}

/// The same constant read off the walk: `α` vanishes on `[0, h]`, `β(s) = s`
/// on `[0, g]`, and `ξ = min(h, g)`.
pub(crate) fn xi_of_walk(walk: &Walk, w: &mut Window) -> Result<Lin> {
    let first = &walk.knots[0];
    if first.s.sign(w) != Ordering::Equal || first.alpha.sign(w) != Ordering::Equal {
        return Ok(Lin::zero());
    }
    let mut h = Lin::zero();
    for k in &walk.knots {
        if k.alpha.sign(w) != Ordering::Equal {
            break;
        }
        h = k.s.clone();
    }
    let mut g = Lin::zero();
    for k in &walk.knots {
        match k.beta.sub(&k.s).sign(w) {
            Ordering::Equal => g = k.s.clone(),
            Ordering::Less => break,
            Ordering::Greater => {
                return Err(Error::internal(
                    "infinitesimal body leaves the inverted simplex of size μ",
                ));
            }
        }
    }
    Ok(if param::cmp(&h, &g, w) == Ordering::Less { h } else { g })
}

/// `ξ(D; x)` with the point's default flag.
pub fn xi_constant(model: &SurfaceModel, x: &PointProfile, d: &DivisorClass) -> Result<XiResult> {
    xi_with_flag(model, x, &x.flag_incidence, d)
}

pub fn xi_with_flag(
    model: &SurfaceModel,
    x: &PointProfile,
    z: &BTreeMap<usize, u32>,
    d: &DivisorClass,
) -> Result<XiResult> {
    require_big(model, d)?;
    let bl = blow_up_point(model, x)?;
    let flag = bl.flag(z);
    let body = polygon::okounkov_polygon(&bl.model, &d.pullback(), &flag)?;
    Ok(XiResult {
        xi: xi_of_body(&body),
        witness_flag: flag,
        body,
    })
}

/// Whether the origin lies in the infinitesimal body of `d` at `x`.
pub fn check_origin(model: &SurfaceModel, x: &PointProfile, d: &DivisorClass) -> Result<bool> {
    let body = infinitesimal_body(model, x, &x.flag_incidence, d)?;
    Ok(body.contains(&[Q::zero(), Q::zero()]))
}

/// `ord_E N(π*D)` for pseudoeffective `D`.
pub fn exceptional_order(bl: &PointBlowup, d: &DivisorClass) -> Result<Q> {
    let z = zariski::zariski_decompose(&bl.model, &d.pullback())?;
    Ok(z.coefficient(bl.e))
}

/// Parametric `ξ` of a big class on `X′`.
pub(crate) fn xi_lin(bl: &PointBlowup, d: &[Lin], w: &mut Window) -> Result<Lin> {
    let walk = polygon::walk(&bl.model, d, &bl.flag(&BTreeMap::new()), w)?;
    xi_of_walk(&walk, w)
}

/// Pulls back a parametric class.
pub(crate) fn pullback_lin(d: &[Lin]) -> Vec<Lin> {
    let mut v = d.to_vec();
    v.push(Lin::zero());
    v
}

/// `μ(π*D; E)` as a rational, the size of the simplex bounding the body.
pub fn simplex_bound(bl: &PointBlowup, d: &DivisorClass) -> Result<Q> {
    zariski::mu(&bl.model, &d.pullback(), bl.exceptional())
}
