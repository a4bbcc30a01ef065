//! Model files, class expressions and output formats (canonical JSON, CSV,
//! SVG).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, BlowupCones, DivisorClass, PointProfile, SurfaceModel, ValidationReport};
use crate::polygon::Polygon;
use crate::positivity::SeshadriProfile;
use crate::rational::{self, Q};
use crate::registry;

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable listing extra directories searched for `NAME.json`.
pub const MODEL_PATH_ENV: &str = "NOCT_MODEL_PATH";

/// On-disk model: the surface, its named points and optional cone data of
/// their blow-ups keyed by point label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    pub model: SurfaceModel,
    #[serde(default)]
    pub points: Vec<PointProfile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub blowup_cones: BTreeMap<String, BlowupCones>,
}

/// A model with the points declared on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedModel {
    pub model: SurfaceModel,
    pub points: Vec<PointProfile>,
}

impl LoadedModel {
    pub fn point(&self, label: &str) -> Result<&PointProfile> {
        self.points.iter().find(|p| p.label == label).ok_or_else(|| {
            let known: Vec<&str> = self.points.iter().map(|p| p.label.as_str()).collect();
            Error::input(format!(
                "model '{}' has no point '{label}' (declared: {})",
                self.model.name,
                if known.is_empty() {
                    "none".to_string()
                } else {
                    known.join(", ")
                }
            ))
        })
    }

    /// The only declared point, or the named one.
    pub fn pick_point(&self, label: Option<&str>) -> Result<&PointProfile> {
        match label {
            Some(l) => self.point(l),
            None if self.points.len() == 1 => Ok(&self.points[0]),
            None => Err(Error::input(
                "this model declares several points; choose one with --point",
            )),
        }
    }

    /// Splits the point cone data back out into the file layout.
    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            schema_version: SCHEMA_VERSION,
            model: self.model.clone(),
            points: self.points.clone(),
            blowup_cones: BTreeMap::new(),
        }
    }
}

fn builtin(name: &str) -> Result<LoadedModel> {
    let model = registry::builtin(name)?;
    let points = registry::points(&model.name);
    Ok(LoadedModel { model, points })
}

/// Parses a model file's text without checking the geometric invariants.
pub fn parse_model_unchecked(text: &str) -> Result<LoadedModel> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::input(format!("malformed model file: {e}")))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::input(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    file.model.check_dimensions()?;
    if file.model.rank != file.model.basis_labels.len() {
        return Err(Error::input("rank and basis labels disagree"));
    }
    let mut points = file.points;
    for (label, cones) in file.blowup_cones {
        let p = points
            .iter_mut()
            .find(|p| p.label == label)
            .ok_or_else(|| Error::input(format!("blow-up cones given for undeclared point '{label}'")))?;
        p.cones = Some(cones);
    }
    Ok(LoadedModel {
        model: file.model,
        points,
    })
}

/// Parses and validates a model file's text.
pub fn parse_model(text: &str) -> Result<LoadedModel> {
    let loaded = parse_model_unchecked(text)?;
    lattice::validate_model(&loaded.model).into_result()?;
    Ok(loaded)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_file_unchecked(path: &Path) -> Result<LoadedModel> {
    parse_model_unchecked(&read(path)?)
}

pub fn load_file(path: &Path) -> Result<LoadedModel> {
    parse_model(&read(path)?)
}

fn search_path(name: &str) -> Option<PathBuf> {
    let dirs = std::env::var_os(MODEL_PATH_ENV)?;
    std::env::split_paths(&dirs)
        .map(|d| d.join(format!("{name}.json")))
        .find(|p| p.is_file())
}

/// Resolves a built-in name, then `NAME.json` in the model path directories.
pub fn load_named(name: &str) -> Result<LoadedModel> {
    match builtin(name) {
        Ok(m) => Ok(m),
        Err(e) => match search_path(name) {
            Some(p) => load_file(&p),
            None => Err(e),
        },
    }
}

/// A class given either as comma separated coordinates (`"1/4,1/2"`) or as
/// a combination of basis labels (`"2H-E"`, `"1/4H + 1/2*E"`).
pub fn parse_class(model: &SurfaceModel, text: &str) -> Result<DivisorClass> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::input("empty class"));
    }
    let symbolic = compact.chars().any(|c| c.is_alphabetic());
    let class = if symbolic {
        parse_symbolic(model, &compact)?
    } else {
        DivisorClass::new(rational::parse_list(&compact)?)
    };
    model.check_class(&class)?;
    Ok(class)
}

fn parse_symbolic(model: &SurfaceModel, text: &str) -> Result<DivisorClass> {
    let mut labels: Vec<(usize, &String)> = model.basis_labels.iter().enumerate().collect();
    labels.sort_by_key(|(_, l)| std::cmp::Reverse(l.len()));
    let mut coords = vec![Q::zero(); model.rank];
    let mut rest = text;
    while !rest.is_empty() {
        let (negative, body) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ => (false, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        let (i, label) = labels
            .iter()
            .find(|(_, l)| term.ends_with(l.as_str()))
            .ok_or_else(|| Error::input(format!("term '{term}' names no basis label of '{}'", model.name)))?;
        let prefix = term[..term.len() - label.len()].trim_end_matches('*');
        let mut c = if prefix.is_empty() {
            Q::one()
        } else {
            rational::parse(prefix)?
        };
        if negative {
            c = -c;
        }
        coords[*i] += c;
        rest = tail;
    }
    Ok(DivisorClass::new(coords))
}

/// Resolves a negative curve given by basis label, class expression or index.
pub fn parse_curve(model: &SurfaceModel, text: &str) -> Result<usize> {
    if let Ok(i) = text.trim().parse::<usize>() {
        if i < model.negative_curves.len() {
            return Ok(i);
        }
    }
    let c = parse_class(model, text)?;
    model
        .negative_curves
        .iter()
        .position(|n| *n == c)
        .ok_or_else(|| Error::input(format!("'{text}' is not a negative curve of '{}'", model.name)))
}

/// Parses `"E1=1,E3=0"` into negative-curve incidences.
pub fn parse_incidence(model: &SurfaceModel, text: &str) -> Result<BTreeMap<usize, u32>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (curve, m) = part
            .split_once('=')
            .ok_or_else(|| Error::input(format!("incidence '{part}' is not of the form CURVE=N")))?;
        let m: u32 = m
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("incidence '{part}' needs a nonnegative integer")))?;
        out.insert(parse_curve(model, curve.trim())?, m);
    }
    Ok(out)
}

/// Pretty JSON with object keys in sorted order.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::internal(format!("serialization failed: {e}")))?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::internal(format!("serialization failed: {e}")))
}

pub fn validation_json(report: &ValidationReport) -> Result<String> {
    canonical_json(report)
}

/// `t,value,regime` rows of a profile.
pub fn profile_csv(profile: &SeshadriProfile) -> String {
    let mut out = String::from("t,value,regime\n");
    for s in &profile.samples {
        let _ = writeln!(out, "{},{},{}", s.t, s.value, s.regime.as_str());
    }
    out
}

pub fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(xs: &[f64], ys: &[f64]) -> Frame {
        let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
        let mut fr = Frame {
            x0: fold(xs, f64::min, 0.0),
            x1: fold(xs, f64::max, 0.0),
            y0: fold(ys, f64::min, 0.0),
            y1: fold(ys, f64::max, 0.0),
        };
        if fr.x1 - fr.x0 < 1e-9 {
            fr.x1 = fr.x0 + 1.0;
        }
        if fr.y1 - fr.y0 < 1e-9 {
            fr.y1 = fr.y0 + 1.0;
        }
        fr
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let w = SIZE - 2.0 * MARGIN;
        (
            MARGIN + (x - self.x0) / (self.x1 - self.x0) * w,
            SIZE - MARGIN - (y - self.y0) / (self.y1 - self.y0) * w,
        )
    }

    fn axes(&self, out: &mut String) {
        let (ax0, ay) = self.map(self.x0, 0.0_f64.clamp(self.y0, self.y1));
        let (ax1, _) = self.map(self.x1, 0.0);
        let (bx, by0) = self.map(0.0_f64.clamp(self.x0, self.x1), self.y0);
        let (_, by1) = self.map(0.0, self.y1);
        let _ = writeln!(
            out,
            r##"<path d="M{ax0:.2},{ay:.2} L{ax1:.2},{ay:.2} M{bx:.2},{by0:.2} L{bx:.2},{by1:.2}" stroke="#444" fill="none"/>"##
        );
        let (lx, ly) = self.map(self.x1, self.y0);
        let _ = writeln!(
            out,
            r##"<text x="{lx:.2}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"##,
            ly + 16.0,
            self.x1
        );
        let (tx, ty) = self.map(self.x0, self.y1);
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{ty:.2}" font-size="12" text-anchor="end">{}</text>"##,
            tx - 4.0,
            self.y1
        );
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<title>{}</title>\n",
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders a polygon with its axes.
pub fn polygon_svg(polygon: &Polygon, title: &str) -> String {
    let pts: Vec<(f64, f64)> = polygon
        .vertices()
        .iter()
        .map(|[x, y]| (rational::to_f64(x), rational::to_f64(y)))
        .collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let frame = Frame::new(&xs, &ys);
    let mut out = svg_open(title);
    frame.axes(&mut out);
    if !pts.is_empty() {
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let (px, py) = frame.map(*x, *y);
            let _ = write!(d, "{}{px:.2},{py:.2} ", if i == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ = writeln!(
            out,
            r##"<path d="{d}" fill="#8ab6d6" fill-opacity="0.6" stroke="#1f4e79"/>"##
        );
        for ([x, y], (fx, fy)) in polygon.vertices().iter().zip(&pts) {
            let (px, py) = frame.map(*fx, *fy);
            let _ = writeln!(
                out,
                r##"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="#1f4e79"><title>({x}, {y})</title></circle>"##
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Renders the profile graph through its breakpoints and samples.
pub fn profile_svg(profile: &SeshadriProfile, title: &str) -> String {
    let mut pts: Vec<(Q, Q)> = match &profile.pieces {
        Some(p) => {
            let mut v: Vec<(Q, Q)> = p
                .pieces
                .iter()
                .zip(&p.breakpoints)
                .map(|(a, t)| (t.clone(), a.eval(t)))
                .collect();
            if let (Some(last), Some(t)) = (p.pieces.last(), p.breakpoints.last()) {
                v.push((t.clone(), last.eval(t)));
            }
            v
        }
        None => profile.samples.iter().map(|s| (s.t.clone(), s.value.clone())).collect(),
    };
    pts.sort();
    let fpts: Vec<(f64, f64)> = pts
        .iter()
        .map(|(t, v)| (rational::to_f64(t), rational::to_f64(v)))
        .collect();
    let xs: Vec<f64> = fpts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = fpts.iter().map(|p| p.1).collect();
    let frame = Frame::new(&xs, &ys);
    let mut out = svg_open(title);
    frame.axes(&mut out);
    let mut d = String::new();
    for (i, (x, y)) in fpts.iter().enumerate() {
        let (px, py) = frame.map(*x, *y);
        let _ = write!(d, "{}{px:.2},{py:.2} ", if i == 0 { "M" } else { "L" });
    }
    let _ = writeln!(
        out,
        r##"<path d="{}" stroke="#b22222" stroke-width="2" fill="none"/>"##,
        d.trim_end()
    );
    for s in &profile.samples {
        let (px, py) = frame.map(rational::to_f64(&s.t), rational::to_f64(&s.value));
        let _ = writeln!(
            out,
            r##"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="#b22222"><title>t={} value={} {}</title></circle>"##,
            s.t,
            s.value,
            s.regime.as_str()
        );
    }
    out.push_str("</svg>\n");
    out
}
