//! Divisor lattices of surfaces: intersection pairing, model validation and
//! point blow-ups.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Q};

/// Coordinates of a numerical divisor class in a model's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(#[serde(with = "rational::serde_qvec")] pub Vec<Q>);

impl DivisorClass {
    pub fn new(coords: Vec<Q>) -> Self {
        DivisorClass(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivisorClass(coords.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Q::zero(); rank])
    }

    /// The `i`-th basis vector.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![Q::zero(); rank];
        v[i] = rational::int(1);
        DivisorClass(v)
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(rational::is_integral)
    }

    pub fn add(&self, o: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, q: &Q) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a * q).collect())
    }

    /// `self + q·o`
    pub fn add_scaled(&self, q: &Q, o: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a + q * b).collect())
    }

    /// Appends a zero coordinate: the pullback under a point blow-up.
    pub fn pullback(&self) -> DivisorClass {
        let mut v = self.0.clone();
        v.push(Q::zero());
        DivisorClass(v)
    }

    /// `k > 0` with `self = k·o`, if there is one.
    pub fn ray_factor(&self, o: &DivisorClass) -> Option<Q> {
        if self.rank() != o.rank() || self.is_zero() {
            return None;
        }
        let i = o.0.iter().position(|c| !c.is_zero())?;
        let k = &self.0[i] / &o.0[i];
        (k.is_positive() && self.0.iter().zip(&o.0).all(|(a, b)| *a == &k * b)).then_some(k)
    }

    pub fn same_ray(&self, o: &DivisorClass) -> bool {
        self.ray_factor(o).is_some()
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational::Show(&self.0))
    }
}

/// A rank-ρ divisor lattice with intersection form and cone data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub name: String,
    pub rank: usize,
    pub basis_labels: Vec<String>,
    #[serde(with = "serde_matrix")]
    pub intersection_matrix: Matrix,
    pub negative_curves: Vec<DivisorClass>,
    pub effective_generators: Vec<DivisorClass>,
    #[serde(default)]
    pub nef_generators: Vec<DivisorClass>,
    #[serde(default)]
    pub canonical_class: Option<DivisorClass>,
    #[serde(default = "two")]
    pub dimension_of_variety: usize,
}

fn two() -> usize {
    2
}

mod serde_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Row(#[serde(with = "rational::serde_qvec")] Vec<Q>);

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Row> = m.iter().map(|r| Row(r.clone())).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Matrix, D::Error> {
        let rows: Vec<Row> = Vec::deserialize(d)?;
        Ok(rows.into_iter().map(|r| r.0).collect())
    }
}

/// A point `x` on a model: multiplicities of the model's negative curves at
/// `x`, the default flag point `z` on the exceptional curve over `x`, and
/// optionally the cone data of the blow-up at `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointProfile {
    pub label: String,
    /// `mult_x(Cᵢ)` keyed by negative-curve index of the source model.
    pub multiplicities: BTreeMap<usize, u32>,
    /// Local intersection multiplicity at `z` of each curve of the blow-up
    /// (keyed by its negative-curve index there) with the exceptional curve.
    #[serde(default)]
    pub flag_incidence: BTreeMap<usize, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<BlowupCones>,
}

/// Cone data of a blow-up that the lattice cannot derive: curves through `x`
/// with nonnegative self-intersection become negative after blowing up, and
/// the effective and nef cones change.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BlowupCones {
    #[serde(default)]
    pub extra_negative_curves: Vec<DivisorClass>,
    pub effective_generators: Vec<DivisorClass>,
    pub nef_generators: Vec<DivisorClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name && !c.passed)
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            return Ok(());
        }
        let msgs: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| match &c.witness {
                Some(w) => format!("{} ({w})", c.name),
                None => c.name.to_string(),
            })
            .collect();
        Err(Error::input(format!(
            "model '{}' failed validation: {}",
            self.model,
            msgs.join("; ")
        )))
    }
}

impl SurfaceModel {
    /// Builds a model and checks dimensions (not the geometric invariants;
    /// see [`validate_model`]).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        basis_labels: Vec<String>,
        intersection_matrix: Matrix,
        negative_curves: Vec<DivisorClass>,
        effective_generators: Vec<DivisorClass>,
        nef_generators: Vec<DivisorClass>,
        canonical_class: Option<DivisorClass>,
    ) -> Result<Self> {
        let m = SurfaceModel {
            name: name.into(),
            rank: basis_labels.len(),
            basis_labels,
            intersection_matrix,
            negative_curves,
            effective_generators,
            nef_generators,
            canonical_class,
            dimension_of_variety: 2,
        };
        m.check_dimensions()?;
        Ok(m)
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let r = self.rank;
        if r == 0 {
            return Err(Error::input("model rank must be positive"));
        }
        if self.basis_labels.len() != r {
            return Err(Error::input(format!(
                "{} basis labels for rank {r}",
                self.basis_labels.len()
            )));
        }
        if self.intersection_matrix.len() != r || self.intersection_matrix.iter().any(|row| row.len() != r) {
            return Err(Error::input(format!("intersection matrix is not {r}x{r}")));
        }
        let classes = self
            .negative_curves
            .iter()
            .chain(&self.effective_generators)
            .chain(&self.nef_generators)
            .chain(self.canonical_class.iter());
        for c in classes {
            if c.rank() != r {
                return Err(Error::input(format!("class {c} does not have rank {r}")));
            }
        }
        Ok(())
    }

    pub fn check_class(&self, d: &DivisorClass) -> Result<()> {
        if d.rank() != self.rank {
            return Err(Error::input(format!(
                "class has {} coordinates, model '{}' has rank {}",
                d.rank(),
                self.name,
                self.rank
            )));
        }
        Ok(())
    }

    /// `Q·c`, the linear form "pair with c".
    pub fn dual(&self, c: &DivisorClass) -> Vec<Q> {
        linalg::mat_vec(&self.intersection_matrix, c.coords())
    }

    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Q {
        linalg::bilinear(&self.intersection_matrix, a.coords(), b.coords())
    }

    pub fn self_intersection(&self, a: &DivisorClass) -> Q {
        self.pair(a, a)
    }

    /// Gram matrix of a set of negative curves.
    pub fn gram(&self, curves: &[usize]) -> Matrix {
        curves
            .iter()
            .map(|&i| {
                curves
                    .iter()
                    .map(|&j| self.pair(&self.negative_curves[i], &self.negative_curves[j]))
                    .collect()
            })
            .collect()
    }

    /// Index of `c` among the negative curves (same ray).
    pub fn curve_index(&self, c: &DivisorClass) -> Option<usize> {
        self.negative_curves
            .iter()
            .position(|n| n == c)
            .or_else(|| self.negative_curves.iter().position(|n| n.same_ray(c)))
    }

    pub fn label_of(&self, i: usize) -> &str {
        &self.basis_labels[i]
    }

    /// Replaces the cone data with user supplied blow-up cones.
    pub fn with_cones(mut self, cones: &BlowupCones) -> Result<Self> {
        self.negative_curves.extend(cones.extra_negative_curves.iter().cloned());
        self.effective_generators = cones.effective_generators.clone();
        self.nef_generators = cones.nef_generators.clone();
        self.check_dimensions()?;
        Ok(self)
    }
}

/// Exact intersection number `aᵀ Q b`.
pub fn intersection(model: &SurfaceModel, a: &DivisorClass, b: &DivisorClass) -> Result<Q> {
    model.check_class(a)?;
    model.check_class(b)?;
    Ok(model.pair(a, b))
}

/// Checks the model invariants and reports a witness for each failure.
pub fn validate_model(model: &SurfaceModel) -> ValidationReport {
    let mut checks = Vec::new();
    let dims = model.check_dimensions();
    checks.push(Check {
        name: "dimensions",
        passed: dims.is_ok(),
        witness: dims.err().map(|e| e.to_string()),
    });
    if !checks[0].passed {
        return ValidationReport {
            model: model.name.clone(),
            checks,
        };
    }
    let q = &model.intersection_matrix;
    let r = model.rank;

    let asym = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .find(|&(i, j)| q[i][j] != q[j][i]);
    checks.push(Check {
        name: "symmetric",
        passed: asym.is_none(),
        witness: asym.map(|(i, j)| format!("({i},{j})")),
    });

    if asym.is_none() {
        let (p, n, z) = linalg::signature(q);
        let ok = p == 1 && n + 1 == r && z == 0;
        checks.push(Check {
            name: "hodge_signature",
            passed: ok,
            witness: (!ok).then(|| format!("signature (+{p}, -{n}, 0x{z})")),
        });
    }

    let bad_curve = model
        .negative_curves
        .iter()
        .position(|c| !model.self_intersection(c).is_negative());
    checks.push(Check {
        name: "negative_curves_negative",
        passed: bad_curve.is_none(),
        witness: bad_curve.map(|i| {
            format!(
                "curve {i} has self-intersection {}",
                model.self_intersection(&model.negative_curves[i])
            )
        }),
    });

    let mut nef_witness = None;
    'outer: for (i, n) in model.nef_generators.iter().enumerate() {
        for (j, e) in model.effective_generators.iter().enumerate() {
            if model.pair(n, e).is_negative() {
                nef_witness = Some(format!("nef generator {i} . effective generator {j} < 0"));
                break 'outer;
            }
        }
    }
    checks.push(Check {
        name: "nef_pairs_effective",
        passed: nef_witness.is_none(),
        witness: nef_witness,
    });

    let not_gen = model
        .negative_curves
        .iter()
        .position(|c| !model.effective_generators.iter().any(|g| g.same_ray(c)));
    checks.push(Check {
        name: "negative_curves_are_generators",
        passed: not_gen.is_none(),
        witness: not_gen.map(|i| format!("curve {i}")),
    });

    let rows: Vec<Vec<Q>> = model.effective_generators.iter().map(|g| g.0.clone()).collect();
    let spans = linalg::rank(&rows) == r;
    checks.push(Check {
        name: "effective_cone_full_dimensional",
        passed: spans,
        witness: (!spans).then(|| "effective generators do not span".to_string()),
    });

    ValidationReport {
        model: model.name.clone(),
        checks,
    }
}

/// Blows the model up at the point described by `profile`.
///
/// The new basis is the old one followed by the exceptional class `E`;
/// negative curves become strict transforms `π*C − mult_x(C)·E` and `E` is
/// appended right after them. Effective generators that are negative curves
/// are replaced by their strict transforms, the others pulled back. Nef
/// generators are left empty: they cannot be derived from the lattice.
pub fn blow_up(model: &SurfaceModel, profile: &PointProfile) -> Result<SurfaceModel> {
    model.check_dimensions()?;
    for i in 0..model.negative_curves.len() {
        if !profile.multiplicities.contains_key(&i) {
            return Err(Error::input(format!(
                "point '{}' has no multiplicity for negative curve {i}",
                profile.label
            )));
        }
    }
    if let Some(k) = profile
        .multiplicities
        .keys()
        .find(|&&k| k >= model.negative_curves.len())
    {
        return Err(Error::input(format!(
            "point '{}' lists multiplicity for unknown curve {k}",
            profile.label
        )));
    }
    let r = model.rank;
    let mut labels = model.basis_labels.clone();
    let mut e_label = format!("E{}", sanitize(&profile.label));
    while labels.contains(&e_label) {
        e_label.push('\'');
    }
    labels.push(e_label);

    let mut q: Matrix = model
        .intersection_matrix
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.push(Q::zero());
            r
        })
        .collect();
    let mut last = vec![Q::zero(); r + 1];
    last[r] = rational::int(-1);
    q.push(last);

    let e = DivisorClass::unit(r + 1, r);
    let strict = |i: usize| {
        let m = profile.multiplicities[&i];
        model.negative_curves[i]
            .pullback()
            .add_scaled(&-rational::int(m as i64), &e)
    };
    let mut negative: Vec<DivisorClass> = (0..model.negative_curves.len()).map(strict).collect();
    negative.push(e.clone());

    let mut effective: Vec<DivisorClass> = model
        .effective_generators
        .iter()
        .map(|g| {
            model
                .negative_curves
                .iter()
                .enumerate()
                .find_map(|(i, c)| g.ray_factor(c).map(|k| strict(i).scale(&k)))
                .unwrap_or_else(|| g.pullback())
        })
        .collect();
    effective.push(e.clone());

    let canonical = model.canonical_class.as_ref().map(|k| k.pullback().add(&e));
    Ok(SurfaceModel {
        name: format!("{}+bl({})", model.name, profile.label),
        rank: r + 1,
        basis_labels: labels,
        intersection_matrix: q,
        negative_curves: negative,
        effective_generators: effective,
        nef_generators: Vec::new(),
        canonical_class: canonical,
        dimension_of_variety: model.dimension_of_variety,
    })
}

fn sanitize(label: &str) -> String {
    let s: String = label.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
    if s.is_empty() || s == "generic" {
        "x".to_string()
    } else {
        format!("_{s}")
    }
}
