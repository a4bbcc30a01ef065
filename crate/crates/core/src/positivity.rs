//! Local positivity at a point: asymptotic multiplicity, moving and extended
//! Seshadri constants, base-locus verdicts, jet-separation certificates and
//! exact Seshadri profiles along segments of classes.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::infinitesimal::{self, PointBlowup};
use crate::lattice::{DivisorClass, PointProfile, SurfaceModel};
use crate::param::{Lin, Scalar, Window};
use crate::polygon::{AffinePiece, PiecewiseRationalFunction};
use crate::rational::{self, Q};
use crate::zariski;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "outside_Bplus")]
    OutsideBplus,
    #[serde(rename = "in_Bplus_not_Bminus")]
    InBplusNotBminus,
    #[serde(rename = "in_Bminus")]
    InBminus,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::OutsideBplus => "outside_Bplus",
            Verdict::InBplusNotBminus => "in_Bplus_not_Bminus",
            Verdict::InBminus => "in_Bminus",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificates {
    #[serde(with = "rational::serde_q")]
    pub xi: Q,
    #[serde(with = "rational::serde_q")]
    pub asymptotic_mult: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseLocusVerdict {
    pub verdict: Verdict,
    pub certificates: Certificates,
}

/// Where a class sits relative to the point: in `B₋`, in `B₊ \ B₋`, or
/// outside `B₊`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "in_Bminus")]
    InBminus,
    #[serde(rename = "boundary")]
    Boundary,
    #[serde(rename = "outside_Bplus")]
    OutsideBplus,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::InBminus => "in_Bminus",
            Regime::Boundary => "boundary",
            Regime::OutsideBplus => "outside_Bplus",
        }
    }

    fn of_value(v: &Q) -> Regime {
        match v.cmp(&Q::zero()) {
            Ordering::Less => Regime::InBminus,
            Ordering::Equal => Regime::Boundary,
            Ordering::Greater => Regime::OutsideBplus,
        }
    }
}

fn pseff_nonzero(model: &SurfaceModel, d: &DivisorClass) -> Result<()> {
    model.check_class(d)?;
    if d.is_zero() {
        return Err(Error::domain("the zero class has no Seshadri value"));
    }
    if !zariski::is_pseudoeffective(model, d)? {
        return Err(Error::domain(format!("class {d} is not pseudoeffective")));
    }
    Ok(())
}

fn require_big(model: &SurfaceModel, d: &DivisorClass) -> Result<()> {
    model.check_class(d)?;
    if !zariski::is_big(model, d)? {
        return Err(Error::domain(format!("class {d} is not big on '{}'", model.name)));
    }
    Ok(())
}

/// `mult_x‖D‖ = ord_E N(π*D)`.
pub fn asymptotic_multiplicity(model: &SurfaceModel, x: &PointProfile, d: &DivisorClass) -> Result<Q> {
    model.check_class(d)?;
    if !zariski::is_pseudoeffective(model, d)? {
        return Err(Error::domain(format!("class {d} is not pseudoeffective")));
    }
    let bl = infinitesimal::blow_up_point(model, x)?;
    infinitesimal::exceptional_order(&bl, d)
}

/// `ε(‖D‖; x)`, computed as the largest inverted simplex constant. A nef
/// class that is not big gets its ordinary Seshadri constant from the nef
/// cone of the blow-up.
pub fn moving_seshadri(model: &SurfaceModel, x: &PointProfile, d: &DivisorClass) -> Result<Q> {
    model.check_class(d)?;
    if !zariski::is_big(model, d)? && zariski::is_nef(model, d)? && !d.is_zero() {
        let bl = infinitesimal::blow_up_point(model, x)?;
        return seshadri_via_nef_cone(&bl.model, &d.pullback(), bl.e);
    }
    Ok(infinitesimal::xi_constant(model, x, d)?.xi)
}

/// `max{ε ≥ 0 : D′ − εE` pairs nonnegatively with every effective generator`}`
/// for a nef class `D′` on the blow-up, where `E` is the negative curve `e_index`.
pub fn seshadri_via_nef_cone(blowup: &SurfaceModel, dprime: &DivisorClass, e_index: usize) -> Result<Q> {
    if !zariski::is_nef(blowup, dprime)? {
        return Err(Error::domain(format!("class {dprime} is not nef")));
    }
    let e = blowup
        .negative_curves
        .get(e_index)
        .ok_or_else(|| Error::input(format!("no negative curve with index {e_index}")))?;
    blowup
        .effective_generators
        .iter()
        .filter_map(|g| {
            let eg = blowup.pair(e, g);
            eg.is_positive().then(|| blowup.pair(dprime, g) / eg)
        })
        .min()
        .ok_or_else(|| Error::domain("no effective generator bounds the threshold"))
}

/// `ε_x(D)`: `−mult_x‖D‖` on `B₋`, `0` on `B₊ \ B₋` and `ξ(D; x)` elsewhere.
pub fn extended_seshadri(model: &SurfaceModel, x: &PointProfile, d: &DivisorClass) -> Result<Q> {
    pseff_nonzero(model, d)?;
    let mult = asymptotic_multiplicity(model, x, d)?;
    if mult.is_positive() {
        return Ok(-mult);
    }
    if !zariski::is_big(model, d)? {
        // a class that is not big has B₊ = X
        return Ok(Q::zero());
    }
    moving_seshadri(model, x, d)
}

pub fn base_locus_membership(model: &SurfaceModel, x: &PointProfile, d: &DivisorClass) -> Result<BaseLocusVerdict> {
    require_big(model, d)?;
    let asymptotic_mult = asymptotic_multiplicity(model, x, d)?;
    let xi = moving_seshadri(model, x, d)?;
    let verdict = if asymptotic_mult.is_positive() {
        Verdict::InBminus
    } else if xi.is_positive() {
        Verdict::OutsideBplus
    } else {
        Verdict::InBplusNotBminus
    };
    Ok(BaseLocusVerdict {
        verdict,
        certificates: Certificates { xi, asymptotic_mult },
    })
}

/// One-sided certificate that `K_X + D` separates `k`-jets at `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JetCertificate {
    pub certified: bool,
    #[serde(with = "rational::serde_q")]
    pub xi: Q,
    /// `n + k`; certification needs `ξ` strictly above it.
    pub threshold: u64,
    pub adjoint_class: DivisorClass,
}

pub fn jets_separated(model: &SurfaceModel, x: &PointProfile, d: &DivisorClass, k: u32) -> Result<JetCertificate> {
    let canonical = model
        .canonical_class
        .as_ref()
        .ok_or_else(|| Error::input(format!("model '{}' has no canonical class", model.name)))?;
    model.check_class(d)?;
    if !d.is_integral() {
        return Err(Error::input(format!("class {d} is not integral")));
    }
    let xi = moving_seshadri(model, x, d)?;
    let threshold = model.dimension_of_variety as u64 + k as u64;
    Ok(JetCertificate {
        certified: xi > rational::int(threshold as i64),
        xi,
        threshold,
        adjoint_class: canonical.add(d),
    })
}

/// Whether `x ∉ B₋(D)`, tested by the origin lying in the infinitesimal body.
pub fn nef_at_point(model: &SurfaceModel, x: &PointProfile, d: &DivisorClass) -> Result<bool> {
    infinitesimal::check_origin(model, x, d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileSample {
    #[serde(with = "rational::serde_q")]
    pub t: Q,
    #[serde(with = "rational::serde_q")]
    pub value: Q,
    pub regime: Regime,
}

/// `t ↦ ε_x((1 − t)d0 + t·d1)` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeshadriProfile {
    pub segment: (DivisorClass, DivisorClass),
    /// Exact affine pieces; absent in sampled mode.
    pub pieces: Option<PiecewiseRationalFunction>,
    /// Interior points where the function has a kink or changes regime.
    #[serde(with = "rational::serde_qvec")]
    pub breakpoints: Vec<Q>,
    #[serde(with = "rational::serde_qvec")]
    pub regime_breakpoints: Vec<Q>,
    /// Values at the endpoints and breakpoints, or at the requested samples.
    pub samples: Vec<ProfileSample>,
}

impl SeshadriProfile {
    /// Every sample agrees with the pieces, which agree with each other.
    pub fn is_continuous(&self) -> bool {
        let Some(p) = &self.pieces else {
            return true;
        };
        p.is_continuous()
            && self.samples.iter().all(|s| {
                let (lo, hi) = p.domain();
                let left = p.eval(&s.t);
                let right = p
                    .breakpoints
                    .iter()
                    .position(|b| *b == s.t)
                    .filter(|&i| i < p.pieces.len())
                    .map(|i| p.pieces[i].eval(&s.t));
                s.t >= *lo && s.t <= *hi && left.as_ref() == Some(&s.value) && right.is_none_or(|r| r == s.value)
            })
    }

    pub fn slopes(&self) -> Vec<Q> {
        self.pieces
            .as_ref()
            .map(|p| p.pieces.iter().map(|a| a.slope.clone()).collect())
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileMode {
    Exact,
    Samples(Vec<Q>),
}

const PROFILE_CAP: usize = 10_000;

fn interpolate(d0: &DivisorClass, d1: &DivisorClass, t: &Q) -> DivisorClass {
    d0.scale(&(rational::int(1) - t)).add_scaled(t, d1)
}

/// Value and regime of `ε_x` on `D(t0 + τ)` for all small `τ > 0`, as an
/// affine function of `τ` valid on the window.
fn right_germ(
    model: &SurfaceModel,
    bl: &PointBlowup,
    interior: &[Q],
    d: &[Lin],
    w: &mut Window,
) -> Result<(Lin, Regime)> {
    let dp = infinitesimal::pullback_lin(d);
    let raw = zariski::decompose(&bl.model, &dp, w)?;
    let mult = raw.coefficient(bl.e).cloned().unwrap_or_else(Lin::zero);
    if mult.sign(w) == Ordering::Greater {
        return Ok((mult.neg(), Regime::InBminus));
    }
    let big = zariski::mu_lin(model, d, interior, w)?;
    if big.sign(w) != Ordering::Greater {
        return Ok((Lin::zero(), Regime::Boundary));
    }
    let xi = infinitesimal::xi_lin(bl, &dp, w)?;
    let regime = if xi.sign(w) == Ordering::Greater {
        Regime::OutsideBplus
    } else {
        Regime::Boundary
    };
    Ok((xi, regime))
}

struct RawPiece {
    start: Q,
    end: Q,
    value: AffinePiece,
    regime: Regime,
}

fn sample(
    model: &SurfaceModel,
    x: &PointProfile,
    d0: &DivisorClass,
    d1: &DivisorClass,
    t: &Q,
) -> Result<ProfileSample> {
    let value = extended_seshadri(model, x, &interpolate(d0, d1, t))?;
    Ok(ProfileSample {
        t: t.clone(),
        regime: Regime::of_value(&value),
        value,
    })
}

pub fn seshadri_profile(
    model: &SurfaceModel,
    x: &PointProfile,
    d0: &DivisorClass,
    d1: &DivisorClass,
    mode: &ProfileMode,
) -> Result<SeshadriProfile> {
    model.check_class(d0)?;
    model.check_class(d1)?;
    let segment = (d0.clone(), d1.clone());
    if let ProfileMode::Samples(ts) = mode {
        if ts.iter().any(|t| t.is_negative() || *t > rational::int(1)) {
            return Err(Error::input("samples must lie in [0, 1]"));
        }
        let samples = ts
            .iter()
            .map(|t| sample(model, x, d0, d1, t))
            .collect::<Result<Vec<_>>>()?;
        return Ok(SeshadriProfile {
            segment,
            pieces: None,
            breakpoints: vec![],
            regime_breakpoints: vec![],
            samples,
        });
    }
    for d in [d0, d1] {
        if !zariski::is_pseudoeffective(model, d)? {
            return Err(Error::domain(format!("segment endpoint {d} is not pseudoeffective")));
        }
    }
    let bl = infinitesimal::blow_up_point(model, x)?;
    let interior = model
        .effective_generators
        .iter()
        .fold(DivisorClass::zero(model.rank), |acc, g| acc.add(g));
    let dir = d1.sub(d0);
    let one = rational::int(1);

    let mut raw: Vec<RawPiece> = Vec::new();
    let mut t0 = Q::zero();
    while t0 < one {
        if raw.len() >= PROFILE_CAP {
            return Err(Error::Resource("profile exceeded its piece cap".into()));
        }
        let base = interpolate(d0, d1, &t0);
        let d: Vec<Lin> = base
            .coords()
            .iter()
            .zip(dir.coords())
            .map(|(a, r)| Lin::new(a.clone(), r.clone()))
            .collect();
        let mut w = Window::new();
        let (value, regime) = right_germ(model, &bl, interior.coords(), &d, &mut w)?;
        let mut end = &one - &t0;
        if let Some(l) = w.limit() {
            end = rational::min(end, l.clone());
        }
        let end = &t0 + end;
        raw.push(RawPiece {
            value: AffinePiece {
                slope: value.rate.clone(),
                intercept: &value.at - &value.rate * &t0,
            },
            start: t0,
            end: end.clone(),
            regime,
        });
        t0 = end;
    }

    // samples at every raw boundary, then keep the informative ones
    let mut points: Vec<ProfileSample> = Vec::new();
    points.push(sample(model, x, d0, d1, &Q::zero())?);
    for p in &raw {
        points.push(sample(model, x, d0, d1, &p.end)?);
    }
    let mut regime_breaks = BTreeSet::new();
    for i in 1..raw.len() {
        let pt = &points[i];
        if raw[i - 1].regime != raw[i].regime || pt.regime != raw[i].regime || pt.regime != raw[i - 1].regime {
            regime_breaks.insert(raw[i].start.clone());
        }
    }

    let mut breakpoints = vec![Q::zero()];
    let mut pieces: Vec<AffinePiece> = Vec::new();
    for p in &raw {
        if pieces.last() == Some(&p.value) {
            *breakpoints.last_mut().unwrap() = p.end.clone();
        } else {
            pieces.push(p.value.clone());
            breakpoints.push(p.end.clone());
        }
    }
    let pieces = PiecewiseRationalFunction { breakpoints, pieces };
    let all_breaks: BTreeSet<Q> = pieces
        .interior_breakpoints()
        .iter()
        .cloned()
        .chain(regime_breaks.iter().cloned())
        .collect();
    let samples: Vec<ProfileSample> = points
        .into_iter()
        .filter(|s| s.t.is_zero() || s.t == one || all_breaks.contains(&s.t))
        .collect();
    Ok(SeshadriProfile {
        segment,
        pieces: Some(pieces),
        breakpoints: all_breaks.into_iter().collect(),
        regime_breakpoints: regime_breaks.into_iter().collect(),
        samples,
    })
}
