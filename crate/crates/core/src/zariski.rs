//! Zariski decomposition, volume, positivity classes and the bigness
//! threshold `μ(D; F)` on surface models.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::linalg;
use crate::lp::{self, Outcome};
use crate::param::{self, Lin, Scalar, Window};
use crate::rational::{self, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegativeTerm {
    pub curve: usize,
    #[serde(with = "rational::serde_q")]
    pub coefficient: Q,
}

/// `D = P + N` with `N = Σ aᵢ Cᵢ` supported on negative curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZariskiDecomposition {
    pub positive_part: DivisorClass,
    pub negative_part: Vec<NegativeTerm>,
    pub support: BTreeSet<usize>,
}

impl ZariskiDecomposition {
    pub fn coefficient(&self, curve: usize) -> Q {
        self.negative_part
            .iter()
            .find(|t| t.curve == curve)
            .map(|t| t.coefficient.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn negative_class(&self, model: &SurfaceModel) -> DivisorClass {
        self.negative_part
            .iter()
            .fold(DivisorClass::zero(model.rank), |acc, t| {
                acc.add_scaled(&t.coefficient, &model.negative_curves[t.curve])
            })
    }
}

/// Positivity class of a divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Positivity {
    Ample,
    NefNotAmple,
    BigNotNef,
    PseffNotBig,
    NotPseff,
}

impl Positivity {
    pub fn as_str(self) -> &'static str {
        match self {
            Positivity::Ample => "ample",
            Positivity::NefNotAmple => "nef-not-ample",
            Positivity::BigNotNef => "big-not-nef",
            Positivity::PseffNotBig => "pseff-not-big",
            Positivity::NotPseff => "not-pseff",
        }
    }
}

/// Zariski data over a generic scalar; `coeffs` is aligned with `support`.
#[derive(Clone, Debug)]
pub(crate) struct Raw<T> {
    pub support: Vec<usize>,
    pub coeffs: Vec<T>,
    pub positive: Vec<T>,
}

impl<T: Scalar> Raw<T> {
    pub fn coefficient(&self, curve: usize) -> Option<&T> {
        self.support.iter().position(|&c| c == curve).map(|k| &self.coeffs[k])
    }
}

/// Solves `(d − Σ aᵢCᵢ)·Cⱼ = 0` for `j` in `support`.
pub(crate) fn solve_support<T: Scalar>(
    model: &SurfaceModel,
    duals: &[Vec<Q>],
    d: &[T],
    support: &[usize],
) -> Result<(Vec<T>, Vec<T>)> {
    if support.is_empty() {
        return Ok((vec![], d.to_vec()));
    }
    let gram = model.gram(support);
    let inv = linalg::inverse(&gram)
        .ok_or_else(|| Error::internal(format!("singular Gram matrix on support {support:?}")))?;
    let rhs: Vec<T> = support.iter().map(|&j| param::dot(d, &duals[j])).collect();
    let coeffs: Vec<T> = inv.iter().map(|row| param::dot(&rhs, row)).collect();
    let mut p = d.to_vec();
    for (a, &i) in coeffs.iter().zip(support) {
        p = param::axpy(&p, a, model.negative_curves[i].coords());
    }
    Ok((coeffs, p))
}

pub(crate) fn curve_duals(model: &SurfaceModel) -> Vec<Vec<Q>> {
    model.negative_curves.iter().map(|c| model.dual(c)).collect()
}

/// The iterative Zariski algorithm: grow the support by every curve the
/// current positive part meets negatively, until none is left. Assumes `d`
/// is pseudoeffective.
pub(crate) fn decompose<T: Scalar>(model: &SurfaceModel, d: &[T], w: &mut Window) -> Result<Raw<T>> {
    let duals = curve_duals(model);
    let mut support: Vec<usize> = Vec::new();
    loop {
        let (coeffs, positive) = solve_support(model, &duals, d, &support)?;
        let violators: Vec<usize> = (0..model.negative_curves.len())
            .filter(|j| !support.contains(j))
            .filter(|&j| param::dot(&positive, &duals[j]).sign(w) == Ordering::Less)
            .collect();
        if violators.is_empty() {
            for (a, i) in coeffs.iter().zip(&support) {
                if a.sign(w) != Ordering::Greater {
                    return Err(Error::internal(format!(
                        "non-positive Zariski coefficient on curve {i}; check the model's negative curves"
                    )));
                }
            }
            return Ok(Raw {
                support,
                coeffs,
                positive,
            });
        }
        support.extend(violators);
        support.sort_unstable();
    }
}

pub(crate) fn pseudoeffective_lin(model: &SurfaceModel, d: &[Lin], w: &mut Window) -> Result<bool> {
    let gens: Vec<Vec<Q>> = model.effective_generators.iter().map(|g| g.0.clone()).collect();
    lp::in_cone(&gens, d, w)
}

/// `max{t ≥ 0 : d − t·f ∈ Eff}` as an exact LP over the effective generators.
pub(crate) fn mu_lin(model: &SurfaceModel, d: &[Lin], f: &[Q], w: &mut Window) -> Result<Lin> {
    let n = model.effective_generators.len();
    let a: Vec<Vec<Q>> = (0..model.rank)
        .map(|r| {
            let mut row: Vec<Q> = model.effective_generators.iter().map(|g| g.0[r].clone()).collect();
            row.push(f[r].clone());
            row
        })
        .collect();
    let mut cost = vec![Q::zero(); n + 1];
    cost[n] = rational::int(1);
    match lp::maximize(&a, d, &cost, w)? {
        Outcome::Optimal { value, .. } => Ok(value),
        Outcome::Infeasible => Err(Error::domain("class is not pseudoeffective")),
        Outcome::Unbounded => Err(Error::domain(
            "the direction lies in the effective cone in both signs; model cones are degenerate",
        )),
    }
}

fn to_public(model: &SurfaceModel, raw: Raw<Lin>) -> ZariskiDecomposition {
    ZariskiDecomposition {
        positive_part: DivisorClass::new(raw.positive.into_iter().map(|l| l.at).collect()),
        negative_part: raw
            .support
            .iter()
            .zip(raw.coeffs)
            .map(|(&curve, a)| NegativeTerm {
                curve,
                coefficient: a.at,
            })
            .collect(),
        support: raw
            .support
            .iter()
            .copied()
            .filter(|&i| i < model.negative_curves.len())
            .collect(),
    }
}

pub fn is_pseudoeffective(model: &SurfaceModel, d: &DivisorClass) -> Result<bool> {
    model.check_class(d)?;
    pseudoeffective_lin(model, &param::lift(d.coords()), &mut Window::new())
}

/// The Zariski decomposition of a pseudoeffective class.
pub fn zariski_decompose(model: &SurfaceModel, d: &DivisorClass) -> Result<ZariskiDecomposition> {
    if !is_pseudoeffective(model, d)? {
        return Err(Error::domain(format!(
            "class {d} is not pseudoeffective on '{}'",
            model.name
        )));
    }
    let raw = decompose(model, &param::lift(d.coords()), &mut Window::new())?;
    Ok(to_public(model, raw))
}

/// `vol(D) = P²`.
pub fn volume(model: &SurfaceModel, d: &DivisorClass) -> Result<Q> {
    let z = zariski_decompose(model, d)?;
    Ok(model.self_intersection(&z.positive_part))
}

pub fn is_big(model: &SurfaceModel, d: &DivisorClass) -> Result<bool> {
    if !is_pseudoeffective(model, d)? {
        return Ok(false);
    }
    Ok(volume(model, d)?.is_positive())
}

/// Nef against every negative curve and every effective generator.
pub fn is_nef(model: &SurfaceModel, d: &DivisorClass) -> Result<bool> {
    model.check_class(d)?;
    Ok(model
        .negative_curves
        .iter()
        .chain(&model.effective_generators)
        .all(|c| !model.pair(d, c).is_negative()))
}

pub fn classify(model: &SurfaceModel, d: &DivisorClass) -> Result<Positivity> {
    if is_nef(model, d)? {
        let ample = model
            .effective_generators
            .iter()
            .all(|g| model.pair(d, g).is_positive());
        return Ok(if ample && !d.is_zero() {
            Positivity::Ample
        } else {
            Positivity::NefNotAmple
        });
    }
    if !is_pseudoeffective(model, d)? {
        return Ok(Positivity::NotPseff);
    }
    Ok(if volume(model, d)?.is_positive() {
        Positivity::BigNotNef
    } else {
        Positivity::PseffNotBig
    })
}

/// `μ(D; F) = sup{t > 0 : D − tF big}` for big `D` and effective `F ≠ 0`.
pub fn mu(model: &SurfaceModel, d: &DivisorClass, f: &DivisorClass) -> Result<Q> {
    model.check_class(f)?;
    if f.is_zero() {
        return Err(Error::input("μ needs a nonzero direction"));
    }
    if !is_big(model, d)? {
        return Err(Error::domain(format!("class {d} is not big")));
    }
    if !is_pseudoeffective(model, f)? {
        return Err(Error::input(format!("direction {f} is not effective")));
    }
    let v = mu_lin(model, &param::lift(d.coords()), f.coords(), &mut Window::new())?;
    Ok(v.at)
}
