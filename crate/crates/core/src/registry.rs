//! Built-in surface models, addressable by name.
//!
//! | name            | surface                                   |
//! |-----------------|-------------------------------------------|
//! | `p2`            | the projective plane                      |
//! | `hirzebruch:n`  | the Hirzebruch surface `F_n`              |
//! | `blp-p2`        | `P²` blown up at one point                |
//! | `example5`      | `P²` blown up at `p` and at a point of `E`|
//!
//! Each model comes with the points on it whose blow-up cone data is known.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{BlowupCones, DivisorClass, PointProfile, SurfaceModel};
use crate::rational::int;

fn c(v: &[i64]) -> DivisorClass {
    DivisorClass::from_ints(v)
}

fn matrix(rows: &[&[i64]]) -> Vec<Vec<crate::rational::Q>> {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn labels(l: &[&str]) -> Vec<String> {
    l.iter().map(|s| s.to_string()).collect()
}

pub const NAMES: &[&str] = &["p2", "hirzebruch:n", "blp-p2", "example5"];

pub fn p2() -> SurfaceModel {
    SurfaceModel::new(
        "p2",
        labels(&["H"]),
        matrix(&[&[1]]),
        vec![],
        vec![c(&[1])],
        vec![c(&[1])],
        Some(c(&[-3])),
    )
    .expect("p2 is well formed")
}

/// `F_n` in the basis `(C, F)`: `C² = −n`, `C·F = 1`, `F² = 0`.
pub fn hirzebruch(n: u32) -> SurfaceModel {
    let n = n as i64;
    let negative = if n > 0 { vec![c(&[1, 0])] } else { vec![] };
    SurfaceModel::new(
        format!("hirzebruch:{n}"),
        labels(&["C", "F"]),
        matrix(&[&[-n, 1], &[1, 0]]),
        negative,
        vec![c(&[1, 0]), c(&[0, 1])],
        vec![c(&[1, n]), c(&[0, 1])],
        Some(c(&[-2, -(n + 2)])),
    )
    .expect("hirzebruch model is well formed")
}

/// `Bl_p P²` in the basis `(H, E)`.
pub fn blp_p2() -> SurfaceModel {
    SurfaceModel::new(
        "blp-p2",
        labels(&["H", "E"]),
        matrix(&[&[1, 0], &[0, -1]]),
        vec![c(&[0, 1])],
        vec![c(&[0, 1]), c(&[1, -1])],
        vec![c(&[1, 0]), c(&[1, -1])],
        Some(c(&[-3, 1])),
    )
    .expect("blp-p2 is well formed")
}

/// The blow-up of `Bl_p P²` at a point `x ∈ E`, in the basis of its three
/// negative curves `E1` (strict transform of `E`), `E2` (exceptional curve
/// over `x`) and `E3` (strict transform of the line of class `H − E` through
/// `x`). The hyperplane class is `H′ = E1 + 2E2 + E3`.
pub fn example5() -> SurfaceModel {
    SurfaceModel::new(
        "example5",
        labels(&["E1", "E2", "E3"]),
        matrix(&[&[-2, 1, 0], &[1, -1, 1], &[0, 1, -1]]),
        vec![c(&[1, 0, 0]), c(&[0, 1, 0]), c(&[0, 0, 1])],
        vec![c(&[1, 0, 0]), c(&[0, 1, 0]), c(&[0, 0, 1])],
        vec![c(&[1, 2, 1]), c(&[1, 2, 2]), c(&[0, 1, 1])],
        Some(c(&[-2, -4, -3])),
    )
    .expect("example5 is well formed")
}

fn point(label: &str, mult: &[(usize, u32)], cones: BlowupCones) -> PointProfile {
    PointProfile {
        label: label.to_string(),
        multiplicities: mult.iter().cloned().collect(),
        flag_incidence: BTreeMap::new(),
        cones: Some(cones),
    }
}

/// Points with known blow-up cones for a built-in model.
pub fn points(name: &str) -> Vec<PointProfile> {
    match name {
        // blow-up basis (H, Ex)
        "p2" => vec![point(
            "generic",
            &[],
            BlowupCones {
                extra_negative_curves: vec![],
                effective_generators: vec![c(&[0, 1]), c(&[1, -1])],
                nef_generators: vec![c(&[1, 0]), c(&[1, -1])],
            },
        )],
        // blow-up basis (H, E, Ex); curves in order E−Ex (or E), Ex, H−E−Ex
        "blp-p2" => vec![
            point(
                "on-E",
                &[(0, 1)],
                BlowupCones {
                    extra_negative_curves: vec![c(&[1, -1, -1])],
                    effective_generators: vec![c(&[0, 1, -1]), c(&[0, 0, 1]), c(&[1, -1, -1])],
                    nef_generators: vec![c(&[1, 0, 0]), c(&[2, -1, -1]), c(&[1, -1, 0])],
                },
            ),
            point(
                "generic",
                &[(0, 0)],
                BlowupCones {
                    extra_negative_curves: vec![c(&[1, -1, -1])],
                    effective_generators: vec![c(&[0, 1, 0]), c(&[0, 0, 1]), c(&[1, -1, -1])],
                    nef_generators: vec![c(&[1, 0, 0]), c(&[1, -1, 0]), c(&[1, 0, -1])],
                },
            ),
        ],
        _ => match name.strip_prefix("hirzebruch:").and_then(|n| n.parse::<i64>().ok()) {
            // blow-up basis (C, F, Ex) at a point off the negative section
            Some(0) => vec![point(
                "generic",
                &[],
                BlowupCones {
                    extra_negative_curves: vec![c(&[0, 1, -1]), c(&[1, 0, -1])],
                    effective_generators: vec![c(&[0, 0, 1]), c(&[0, 1, -1]), c(&[1, 0, -1])],
                    nef_generators: vec![c(&[1, 0, 0]), c(&[0, 1, 0]), c(&[1, 1, -1])],
                },
            )],
            Some(n) => vec![point(
                "generic",
                &[(0, 0)],
                BlowupCones {
                    extra_negative_curves: vec![c(&[0, 1, -1])],
                    effective_generators: vec![c(&[1, 0, 0]), c(&[0, 0, 1]), c(&[0, 1, -1])],
                    nef_generators: vec![c(&[1, n, 0]), c(&[1, n, -1]), c(&[0, 1, 0])],
                },
            )],
            None => vec![],
        },
    }
}

/// Looks up a built-in model by name.
pub fn builtin(name: &str) -> Result<SurfaceModel> {
    match name {
        "p2" => Ok(p2()),
        "blp-p2" => Ok(blp_p2()),
        "example5" => Ok(example5()),
        _ => {
            if let Some(n) = name.strip_prefix("hirzebruch:") {
                let n: u32 = n
                    .parse()
                    .map_err(|_| Error::input(format!("bad Hirzebruch index in '{name}'")))?;
                Ok(hirzebruch(n))
            } else {
                Err(Error::input(format!(
                    "unknown model '{name}' (built-ins: {})",
                    NAMES.join(", ")
                )))
            }
        }
    }
}
