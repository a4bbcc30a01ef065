//! Command line front end. Every command prints canonical JSON on stdout;
//! errors go to stderr with exit code 2 (input), 3 (i/o), 4 (precondition
//! or resource limit) or 1 (internal).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use noct::error::{Error, Result};
use noct::io::{self, LoadedModel};
use noct::polygon::{self, FlagSpec};
use noct::positivity::{self, ProfileMode};
use noct::rational::{self, Q};
use noct::{germ, infinitesimal, lattice, zariski};

#[derive(Parser)]
#[command(
    name = "noct",
    version,
    about = "Exact Newton-Okounkov polygons, Zariski decompositions and Seshadri functions on surfaces",
    after_help = "Models: built-ins p2, hirzebruch:N, blp-p2, example5, or NAME.json found in a directory \
listed in NOCT_MODEL_PATH, or any file via --file.\nRationals are written p/q; floats are rejected.\n\
Classes are coordinates (\"1/4,1/2\") or label combinations (\"1/4H+1/2E\").\n\
Exit codes: 0 ok, 2 input, 3 i/o, 4 precondition or resource limit, 1 internal."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Built-in model name or NAME.json on NOCT_MODEL_PATH
    #[arg(long, conflicts_with = "file")]
    model: Option<String>,
    /// Model file path
    #[arg(long)]
    file: Option<PathBuf>,
}

impl ModelArgs {
    fn load(&self) -> Result<LoadedModel> {
        match (&self.model, &self.file) {
            (_, Some(p)) => io::load_file(p),
            (Some(n), None) => io::load_named(n),
            (None, None) => Err(Error::input("give --model NAME or --file PATH")),
        }
    }

    fn load_unchecked(&self) -> Result<LoadedModel> {
        match (&self.model, &self.file) {
            (_, Some(p)) => io::load_file_unchecked(p),
            _ => self.load(),
        }
    }
}

#[derive(Args, Clone)]
struct PointArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Point label declared by the model
    #[arg(long)]
    point: Option<String>,
    /// Flag point incidences on the blow-up, e.g. "E1=1"
    #[arg(long)]
    incidence: Option<String>,
}

#[derive(Args, Clone)]
struct FlagArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Flag curve, e.g. "curve=E2" (label, class expression or curve index)
    #[arg(long)]
    flag: String,
    /// Local intersections at the flag point, e.g. "E1=1,E3=0"
    #[arg(long, default_value = "")]
    incidence: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Criterion {
    Nef,
    Origin,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model's invariants and print the report
    Validate {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Print a model in file form, optionally writing it to a file
    Export {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection number of two classes
    Intersect {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Zariski decomposition
    Zariski {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        class: String,
    },
    /// Positivity class: ample, nef-not-ample, big-not-nef, pseff-not-big, not-pseff
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        class: String,
    },
    /// Volume of a pseudoeffective class
    Volume {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        class: String,
    },
    /// Largest t with D - tF still big
    Mu {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        class: String,
        #[arg(long)]
        direction: String,
    },
    /// Newton-Okounkov polygon for a flag (curve, point)
    Polygon {
        #[command(flatten)]
        flag: FlagArgs,
        #[arg(long)]
        class: String,
        /// Also render the polygon to this SVG file
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Polygon of D - tC shifted by t
    Slice {
        #[command(flatten)]
        flag: FlagArgs,
        #[arg(long)]
        class: String,
        #[arg(long)]
        t: String,
    },
    /// Infinitesimal body of a class at a point
    InfBody {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        class: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Largest inverted simplex constant
    Xi {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        class: String,
    },
    /// Nefness or origin criterion through infinitesimal bodies
    Check {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum)]
        criterion: Criterion,
        #[arg(long)]
        class: String,
    },
    /// Extended Seshadri value with its certificates
    Seshadri {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        class: String,
    },
    /// Seshadri function along the segment from one class to another
    SeshadriProfile {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Exact affine pieces (default)
        #[arg(long, conflicts_with = "samples")]
        exact: bool,
        /// Evaluate at these parameters instead, e.g. "1/4,1/2"
        #[arg(long)]
        samples: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Certificate that K + D separates k-jets
    Jets {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        class: String,
        #[arg(long)]
        k: u32,
    },
    /// Base-locus verdict at a point
    BaseLocus {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        class: String,
    },
    /// Valuation vector of a polynomial germ
    Valuate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        germ: String,
    },
    /// Hull of scaled monomial valuation vectors for O(d) on P^n
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Witness germs realizing the inverted simplex vertices
    Witnesses {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
}

fn q(v: &Q) -> Value {
    Value::String(v.to_string())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::internal(e.to_string()))
}

fn flag_of(model: &noct::SurfaceModel, args: &FlagArgs) -> Result<FlagSpec> {
    let curve = args.flag.strip_prefix("curve=").unwrap_or(&args.flag);
    let incidence = io::parse_incidence(model, &args.incidence)?;
    match io::parse_curve(model, curve) {
        Ok(i) => Ok(FlagSpec::negative_curve(model, i, incidence)),
        Err(_) => Ok(FlagSpec::class(model, io::parse_class(model, curve)?, incidence)),
    }
}

struct PointCtx {
    loaded: LoadedModel,
    point: noct::PointProfile,
}

fn point_of(args: &PointArgs) -> Result<PointCtx> {
    let loaded = args.model.load()?;
    let mut point = loaded.pick_point(args.point.as_deref())?.clone();
    if let Some(inc) = &args.incidence {
        let bl = infinitesimal::blow_up_point(&loaded.model, &point)?;
        point.flag_incidence = io::parse_incidence(&bl.model, inc)?;
    }
    Ok(PointCtx { loaded, point })
}

struct Outcome {
    result: Value,
    artifacts: Vec<PathBuf>,
    failed: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            artifacts: vec![],
            failed: false,
        }
    }
}

fn run(cmd: &Command) -> Result<Outcome> {
    Ok(match cmd {
        Command::Validate { model } => {
            let loaded = model.load_unchecked()?;
            let report = lattice::validate_model(&loaded.model);
            Outcome {
                failed: !report.is_ok(),
                result: to_value(&report)?,
                artifacts: vec![],
            }
        }
        Command::Export { model, out } => {
            let file = to_value(&model.load()?.to_file())?;
            let mut artifacts = vec![];
            if let Some(p) = out {
                io::write_file(p, &io::canonical_json(&file)?)?;
                artifacts.push(p.clone());
            }
            Outcome {
                result: file,
                artifacts,
                failed: false,
            }
        }
        Command::Intersect { model, a, b } => {
            let m = model.load()?.model;
            let (a, b) = (io::parse_class(&m, a)?, io::parse_class(&m, b)?);
            Outcome::ok(json!({ "intersection": q(&lattice::intersection(&m, &a, &b)?) }))
        }
        Command::Zariski { model, class } => {
            let m = model.load()?.model;
            let d = io::parse_class(&m, class)?;
            Outcome::ok(to_value(&zariski::zariski_decompose(&m, &d)?)?)
        }
        Command::Classify { model, class } => {
            let m = model.load()?.model;
            let d = io::parse_class(&m, class)?;
            Outcome::ok(json!({ "class": to_value(&d)?, "positivity": zariski::classify(&m, &d)?.as_str() }))
        }
        Command::Volume { model, class } => {
            let m = model.load()?.model;
            let d = io::parse_class(&m, class)?;
            Outcome::ok(json!({ "volume": q(&zariski::volume(&m, &d)?) }))
        }
        Command::Mu {
            model,
            class,
            direction,
        } => {
            let m = model.load()?.model;
            let d = io::parse_class(&m, class)?;
            let f = io::parse_class(&m, direction)?;
            Outcome::ok(json!({ "mu": q(&zariski::mu(&m, &d, &f)?) }))
        }
        Command::Polygon { flag, class, svg } => {
            let m = flag.model.load()?.model;
            let d = io::parse_class(&m, class)?;
            let f = flag_of(&m, flag)?;
            let data = polygon::okounkov_data(&m, &d, &f)?;
            let mut artifacts = vec![];
            if let Some(p) = svg {
                io::write_file(p, &io::polygon_svg(&data.polygon, &format!("polygon of {d}")))?;
                artifacts.push(p.clone());
            }
            Outcome {
                result: json!({
                    "vertices": to_value(&data.polygon)?,
                    "a": q(&data.a),
                    "mu": q(&data.mu),
                    "alpha": to_value(&data.alpha)?,
                    "beta": to_value(&data.beta)?,
                    "area": q(&data.polygon.area()),
                }),
                artifacts,
                failed: false,
            }
        }
        Command::Slice { flag, class, t } => {
            let m = flag.model.load()?.model;
            let d = io::parse_class(&m, class)?;
            let f = flag_of(&m, flag)?;
            let t = rational::parse(t)?;
            Outcome::ok(json!({ "vertices": to_value(&polygon::slice_at(&m, &d, &f, &t)?)? }))
        }
        Command::InfBody { point, class, svg } => {
            let ctx = point_of(point)?;
            let d = io::parse_class(&ctx.loaded.model, class)?;
            let r = infinitesimal::xi_constant(&ctx.loaded.model, &ctx.point, &d)?;
            let mut artifacts = vec![];
            if let Some(p) = svg {
                io::write_file(p, &io::polygon_svg(&r.body, &format!("infinitesimal body of {d}")))?;
                artifacts.push(p.clone());
            }
            Outcome {
                result: json!({ "body": to_value(&r.body)?, "xi": q(&r.xi) }),
                artifacts,
                failed: false,
            }
        }
        Command::Xi { point, class } => {
            let ctx = point_of(point)?;
            let d = io::parse_class(&ctx.loaded.model, class)?;
            let r = infinitesimal::xi_constant(&ctx.loaded.model, &ctx.point, &d)?;
            Outcome::ok(json!({ "xi": q(&r.xi), "body": to_value(&r.body)?, "flag": to_value(&r.witness_flag)? }))
        }
        Command::Check {
            point,
            criterion,
            class,
        } => match criterion {
            Criterion::Origin => {
                let ctx = point_of(point)?;
                let d = io::parse_class(&ctx.loaded.model, class)?;
                let origin = infinitesimal::check_origin(&ctx.loaded.model, &ctx.point, &d)?;
                Outcome::ok(json!({
                    "criterion": "origin",
                    "point": ctx.point.label,
                    "origin_in_body": origin,
                    "in_restricted_base_locus": !origin,
                }))
            }
            Criterion::Nef => {
                let loaded = point.model.load()?;
                let m = &loaded.model;
                let d = io::parse_class(m, class)?;
                let mut per_point = BTreeMap::new();
                for x in &loaded.points {
                    per_point.insert(x.label.clone(), positivity::nef_at_point(m, x, &d)?);
                }
                let lattice_nef = zariski::is_nef(m, &d)?;
                Outcome::ok(json!({
                    "criterion": "nef",
                    "nef": lattice_nef,
                    "origin_in_body": per_point,
                    "consistent": !lattice_nef || per_point.values().all(|v| *v),
                }))
            }
        },
        Command::Seshadri { point, class } => {
            let ctx = point_of(point)?;
            let m = &ctx.loaded.model;
            let d = io::parse_class(m, class)?;
            let value = positivity::extended_seshadri(m, &ctx.point, &d)?;
            let mult = positivity::asymptotic_multiplicity(m, &ctx.point, &d)?;
            let moving = match positivity::moving_seshadri(m, &ctx.point, &d) {
                Ok(v) => q(&v),
                Err(Error::Domain(_)) => Value::Null,
                Err(e) => return Err(e),
            };
            Outcome::ok(json!({
                "extended_seshadri": q(&value),
                "moving_seshadri": moving,
                "asymptotic_mult": q(&mult),
            }))
        }
        Command::SeshadriProfile {
            point,
            from,
            to,
            exact: _,
            samples,
            csv,
            svg,
        } => {
            let ctx = point_of(point)?;
            let m = &ctx.loaded.model;
            let d0 = io::parse_class(m, from)?;
            let d1 = io::parse_class(m, to)?;
            let mode = match samples {
                Some(s) => ProfileMode::Samples(rational::parse_list(s)?),
                None => ProfileMode::Exact,
            };
            let p = positivity::seshadri_profile(m, &ctx.point, &d0, &d1, &mode)?;
            let mut artifacts = vec![];
            if let Some(path) = csv {
                io::write_file(path, &io::profile_csv(&p))?;
                artifacts.push(path.clone());
            }
            if let Some(path) = svg {
                io::write_file(
                    path,
                    &io::profile_svg(&p, &format!("Seshadri function from {d0} to {d1}")),
                )?;
                artifacts.push(path.clone());
            }
            Outcome {
                result: to_value(&p)?,
                artifacts,
                failed: false,
            }
        }
        Command::Jets { point, class, k } => {
            let ctx = point_of(point)?;
            let d = io::parse_class(&ctx.loaded.model, class)?;
            let c = positivity::jets_separated(&ctx.loaded.model, &ctx.point, &d, *k)?;
            let mut v = to_value(&c)?;
            v["status"] = json!(if c.certified { "certified" } else { "no certificate" });
            Outcome::ok(v)
        }
        Command::BaseLocus { point, class } => {
            let ctx = point_of(point)?;
            let d = io::parse_class(&ctx.loaded.model, class)?;
            Outcome::ok(to_value(&positivity::base_locus_membership(
                &ctx.loaded.model,
                &ctx.point,
                &d,
            )?)?)
        }
        Command::Valuate { n, germ } => {
            let g = germ::GermPolynomial::parse(*n, germ)?;
            Outcome::ok(json!({ "germ": g.to_string(), "nu": germ::valuation_vector(&g)?.nu }))
        }
        Command::Oracle { n, d, m } => {
            let verts = germ::monomial_oracle_body(*n, *d, *m)?;
            let v: Vec<Vec<String>> = verts
                .iter()
                .map(|p| p.iter().map(|x| x.to_string()).collect())
                .collect();
            Outcome::ok(json!({ "vertices": v }))
        }
        Command::Witnesses { n, d } => {
            let w = germ::simplex_witnesses(*n, *d)?;
            let v: Vec<Value> = w
                .iter()
                .map(|(g, e)| json!({ "germ": g.to_string(), "nu": e.nu }))
                .collect();
            Outcome::ok(Value::Array(v))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    match run(&cli.command) {
        Ok(out) => {
            let report = json!({
                "command": echo.join(" "),
                "result": out.result,
                "artifacts": out.artifacts,
                "elapsed_ms": start.elapsed().as_millis() as u64,
            });
            match io::canonical_json(&report) {
                Ok(s) => println!("{s}"),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            }
            if out.failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
