mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use noct::germ::{self, GermPolynomial};
use noct::infinitesimal::{self, InvertedSimplex};
use noct::polygon::{self, FlagSpec, Polygon};
use noct::positivity::{self, Verdict};
use noct::rational::{frac, int};
use noct::{registry, zariski, DivisorClass, PointProfile, SurfaceModel, Q};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pinned(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn on_e() -> PointProfile {
    registry::points("blp-p2")[0].clone()
}

fn f(t: Q) -> DivisorClass {
    DivisorClass::new(vec![t.clone(), int(1) - int(2) * t])
}

fn golden_profile() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_noct"))
        .args([
            "seshadri-profile",
            "--model",
            "blp-p2",
            "--point",
            "on-E",
            "--from",
            "E",
            "--to",
            "H-E",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let r = &v["result"];
    let s = |x: &Value| x.as_str().unwrap_or("").to_string();
    let pieces: Vec<(String, String)> = r["pieces"]["pieces"]
        .as_array()
        .ok_or("no exact pieces")?
        .iter()
        .map(|p| (s(&p["slope"]), s(&p["intercept"])))
        .collect();
    let knots: Vec<String> = r["pieces"]["breakpoints"]
        .as_array()
        .ok_or("no knots")?
        .iter()
        .map(s)
        .collect();
    let breaks: Vec<String> = r["breakpoints"]
        .as_array()
        .ok_or("no breakpoints")?
        .iter()
        .map(s)
        .collect();
    let want_pieces = vec![("2".to_string(), "-1".to_string()), ("-1".to_string(), "1".to_string())];
    ensure(pieces == want_pieces, || format!("pieces {pieces:?}"))?;
    ensure(knots == ["0", "2/3", "1"], || format!("knots {knots:?}"))?;
    ensure(breaks == ["1/2", "2/3"], || format!("breakpoints {breaks:?}"))?;
    pinned(Duration::from_secs(1), start)?;
    Ok(format!(
        "2t-1 on [0,2/3], 1-t on [2/3,1], breakpoints {{1/2, 2/3}} in {:?}",
        start.elapsed()
    ))
}

fn nef_threshold() -> Outcome {
    let start = Instant::now();
    let m = registry::blp_p2();
    let e5 = registry::example5();
    for (t, want) in [
        (frac(1, 2), int(0)),
        (frac(3, 5), frac(1, 5)),
        (frac(2, 3), frac(1, 3)),
        (frac(3, 4), frac(1, 4)),
        (int(1), int(0)),
    ] {
        let d_t = DivisorClass::new(vec![int(1) - t.clone(), int(1), t.clone()]);
        let via_nef = positivity::seshadri_via_nef_cone(&e5, &d_t, 1).map_err(|e| e.to_string())?;
        let moving = positivity::moving_seshadri(&m, &on_e(), &f(t.clone())).map_err(|e| e.to_string())?;
        ensure(via_nef == want && moving == want, || {
            format!("t = {t}: nef cone {via_nef}, moving {moving}, expected {want}")
        })?;
    }
    pinned(Duration::from_secs(1), start)?;
    Ok("values 0, 1/5, 1/3, 1/4, 0".into())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let m = registry::p2();
    let x = &registry::points("p2")[0];
    for d in 1..=3u32 {
        let body = infinitesimal::infinitesimal_body(&m, x, &BTreeMap::new(), &DivisorClass::from_ints(&[d as i64]))
            .map_err(|e| e.to_string())?;
        let simplex = InvertedSimplex::new(int(d as i64), 2).polygon();
        ensure(body == simplex, || format!("d = {d}: body {body}"))?;
        for k in 1..=3u32 {
            let verts = germ::monomial_oracle_body(2, d, k).map_err(|e| e.to_string())?;
            let hull = Polygon::hull(verts.iter().map(|v| [v[0].clone(), v[1].clone()]));
            ensure(hull == simplex, || format!("d = {d}, m = {k}: oracle {hull}"))?;
        }
    }
    pinned(Duration::from_secs(5), start)?;
    Ok("d = 1..3, m = 1..3".into())
}

fn surfaces_with_points() -> Vec<(SurfaceModel, Vec<PointProfile>)> {
    ["p2", "hirzebruch:0", "hirzebruch:1", "hirzebruch:2", "blp-p2"]
        .iter()
        .map(|n| (registry::builtin(n).unwrap(), registry::points(n)))
        .collect()
}

fn simplex_containment() -> Outcome {
    let mut r = common::rng(4);
    let cases = surfaces_with_points();
    for i in 0..200 {
        let (m, pts) = &cases[i % cases.len()];
        let x = &pts[r.gen_range(0..pts.len())];
        let d = common::big_class(&mut r, m);
        let bl = infinitesimal::blow_up_point(m, x).map_err(|e| e.to_string())?;
        let mu = infinitesimal::simplex_bound(&bl, &d).map_err(|e| e.to_string())?;
        let body = infinitesimal::infinitesimal_body(m, x, &x.flag_incidence, &d).map_err(|e| e.to_string())?;
        ensure(
            InvertedSimplex::new(mu.clone(), 2).polygon().contains_polygon(&body),
            || {
                format!(
                    "{} at {}: {d} body {body} not inside simplex of size {mu}",
                    m.name, x.label
                )
            },
        )?;
    }
    Ok("200 classes, 0 violations".into())
}

fn decision_suite() -> Outcome {
    let m = registry::blp_p2();
    let check = |d: DivisorClass, verdict: Verdict, xi: Q, mult: Q| -> Result<(), String> {
        let v = positivity::base_locus_membership(&m, &on_e(), &d).map_err(|e| e.to_string())?;
        ensure(
            v.verdict == verdict && v.certificates.xi == xi && v.certificates.asymptotic_mult == mult,
            || {
                format!(
                    "{d}: got {:?} xi {} mult {}",
                    v.verdict, v.certificates.xi, v.certificates.asymptotic_mult
                )
            },
        )
    };
    check(DivisorClass::from_ints(&[2, -1]), Verdict::OutsideBplus, int(1), int(0))?;
    check(
        DivisorClass::from_ints(&[1, 0]),
        Verdict::InBplusNotBminus,
        int(0),
        int(0),
    )?;
    check(f(frac(1, 4)), Verdict::InBminus, int(0), frac(1, 2))?;
    Ok("2H-E, H, F_1/4".into())
}

/// Flags on negative curves with an optional crossing curve at the flag point.
fn random_flag<R: Rng>(r: &mut R, m: &SurfaceModel) -> FlagSpec {
    if m.negative_curves.is_empty() {
        return FlagSpec::class(m, m.effective_generators[0].clone(), BTreeMap::new());
    }
    let i = r.gen_range(0..m.negative_curves.len());
    let crossing: Vec<usize> = (0..m.negative_curves.len())
        .filter(|&j| j != i && m.pair(&m.negative_curves[i], &m.negative_curves[j]) > int(0))
        .collect();
    let mut incidence = BTreeMap::new();
    if !crossing.is_empty() && r.gen_bool(0.5) {
        incidence.insert(crossing[r.gen_range(0..crossing.len())], 1);
    }
    FlagSpec::negative_curve(m, i, incidence)
}

fn slicing() -> Outcome {
    let mut r = common::rng(6);
    let m = registry::example5();
    for _ in 0..50 {
        let d = common::big_class(&mut r, &m);
        let flag = random_flag(&mut r, &m);
        let mu = zariski::mu(&m, &d, &flag.curve).map_err(|e| e.to_string())?;
        let t = mu * frac(r.gen_range(0..8), 8);
        let whole = polygon::okounkov_polygon(&m, &d, &flag).map_err(|e| e.to_string())?;
        let slice = polygon::slice_at(&m, &d, &flag, &t).map_err(|e| e.to_string())?;
        ensure(slice == whole.clip_x_ge(&t), || {
            format!("{d}, t = {t}: slice {slice} vs {}", whole.clip_x_ge(&t))
        })?;
    }
    Ok("50 triples".into())
}

fn area_law() -> Outcome {
    let mut r = common::rng(7);
    let mut models: Vec<SurfaceModel> = surfaces_with_points().into_iter().map(|(m, _)| m).collect();
    models.push(registry::example5());
    for i in 0..200 {
        let m = &models[i % models.len()];
        let d = common::big_class(&mut r, m);
        let flag = random_flag(&mut r, m);
        let body = polygon::okounkov_polygon(m, &d, &flag).map_err(|e| e.to_string())?;
        let vol = zariski::volume(m, &d).map_err(|e| e.to_string())?;
        ensure(int(2) * body.area() == vol, || {
            format!("{} {d}: 2 area {} vs volume {vol}", m.name, int(2) * body.area())
        })?;
    }
    Ok("200 classes".into())
}

fn flag_independence() -> Outcome {
    let mut r = common::rng(8);
    let m = registry::blp_p2();
    let x = on_e();
    let bl = infinitesimal::blow_up_point(&m, &x).map_err(|e| e.to_string())?;
    let e5 = registry::example5();
    ensure(bl.model.gram(&[0, 1, 2]) == e5.gram(&[0, 1, 2]), || {
        "blow-up curves do not match example5".into()
    })?;
    let on_e1: BTreeMap<usize, u32> = [(0, 1)].into_iter().collect();
    let mut differing = 0;
    for _ in 0..20 {
        let d = common::big_class(&mut r, &m);
        let a = infinitesimal::xi_with_flag(&m, &x, &BTreeMap::new(), &d).map_err(|e| e.to_string())?;
        let b = infinitesimal::xi_with_flag(&m, &x, &on_e1, &d).map_err(|e| e.to_string())?;
        ensure(a.xi == b.xi, || format!("{d}: xi {} vs {}", a.xi, b.xi))?;
        if a.body != b.body {
            differing += 1;
        }
    }
    Ok(format!("20 classes, bodies differ in {differing}"))
}

fn jet_separation() -> Outcome {
    let m = registry::p2();
    let x = &registry::points("p2")[0];
    let mut certified = 0;
    for d in 1..=8i64 {
        for k in 0..=6u32 {
            let c = positivity::jets_separated(&m, x, &DivisorClass::from_ints(&[d]), k).map_err(|e| e.to_string())?;
            ensure(c.certified == (d > 2 + k as i64), || {
                format!("d = {d}, k = {k}: certified {}", c.certified)
            })?;
            if c.certified {
                certified += 1;
                ensure(common::separates_jets((d - 3) as u32, k), || {
                    format!("O({}) fails to separate {k}-jets", d - 3)
                })?;
            }
        }
    }
    Ok(format!("{certified} certified cases confirmed by jet rank"))
}

fn random_germ<R: Rng>(r: &mut R, n: usize) -> GermPolynomial {
    loop {
        let terms: Vec<(Vec<u32>, Q)> = (0..r.gen_range(1..=5))
            .map(|_| {
                let mut e = vec![0u32; n];
                let mut left = r.gen_range(0..=6u32);
                for slot in e.iter_mut() {
                    let k = r.gen_range(0..=left);
                    *slot = k;
                    left -= k;
                }
                let sign = if r.gen_bool(0.5) { 1 } else { -1 };
                (e, frac(sign * r.gen_range(1..=9), r.gen_range(1..=5)))
            })
            .collect();
        let g = GermPolynomial::from_terms(n, terms).expect("valid terms");
        if !g.is_zero() {
            return g;
        }
    }
}

fn valuation_engine() -> Outcome {
    let mut r = common::rng(10);
    for _ in 0..1000 {
        let n = r.gen_range(1..=4);
        let g = random_germ(&mut r, n);
        let nu = germ::valuation_vector(&g).map_err(|e| e.to_string())?.nu;
        let tail: u64 = nu[1..].iter().map(|&v| v as u64).sum();
        ensure(tail <= nu[0] as u64, || format!("{g}: nu {nu:?}"))?;
    }
    for _ in 0..200 {
        let n = r.gen_range(1..=4);
        let (a, b) = (random_germ(&mut r, n), random_germ(&mut r, n));
        let va = germ::valuation_vector(&a).map_err(|e| e.to_string())?;
        let vb = germ::valuation_vector(&b).map_err(|e| e.to_string())?;
        let vab = germ::valuation_vector(&a.mul(&b)).map_err(|e| e.to_string())?;
        ensure(vab == va.add(&vb), || format!("nu({a} * {b}) = {:?}", vab.nu))?;
    }
    Ok("1000 germs, 200 products".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 golden Seshadri profile", golden_profile),
        ("AC2 nef-cone threshold", nef_threshold),
        ("AC3 monomial oracle", oracle_equivalence),
        ("AC4 simplex containment", simplex_containment),
        ("AC5 base-locus decisions", decision_suite),
        ("AC6 slicing", slicing),
        ("AC7 area law", area_law),
        ("AC8 flag independence of xi", flag_independence),
        ("AC9 jet separation", jet_separation),
        ("AC10 valuation engine", valuation_engine),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(msg) => println!("[PASS] {name}: {msg} ({:?})", start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name}: {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
