//! Report builders for each subcommand.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde_json::{json, Value};
use tfw_core::energy::{disk_energy, obstruction_check, opposite_ends_class, DiskBoundaryData};
use tfw_core::exactnum::{parse_linexpr, parse_rational, Valuation};
use tfw_core::hamiltonian::{enumerate_generators, GenKind, GeneratorSet, PerturbationConfig, PhiPolicy};
use tfw_core::mirror_ring::{
    end_parametrization, filtered_dim, hms_lq_candidates, laurent_from_ints, mirror_basis, pants_candidates,
    parse_laurent, pole_profile, pop_generator, present_curve, solve_pop_coefficients, structure_constants,
    verify_basis, CurvePresentation, Window,
};
use tfw_core::tropical::{
    coefficient_gap, cylindrical_ends, ends_of, genus_and_ends, newton_polygon, skeleton, skeleton_svg, SvgOptions,
    TropCurve, TropError,
};

use crate::failure::{Failure, EXIT_DOMAIN};
use crate::{Body, Command, CurveKind, Opts, Outcome};

/// Default translation direction `(cos 0.3, sin 0.3)`, generic for every end in the examples.
const DEFAULT_A_ANGLE: f64 = 0.3;

fn rational(name: &str, s: &str) -> Result<Rational64, Failure> {
    parse_rational(s).map_err(|e| Failure::domain(format!("--{name}: {e}")))
}

fn curve_kind(opts: &Opts) -> CurveKind {
    match (opts.curve, &opts.input) {
        (Some(c), _) => c,
        (None, Some(_)) => CurveKind::File,
        (None, None) => CurveKind::Pants,
    }
}

/// The curve named by the options, with the refinement depth applied.
fn load_curve(opts: &Opts) -> Result<TropCurve, Failure> {
    let (name, doc) = match curve_kind(opts) {
        CurveKind::Pants => ("pants".to_string(), TropCurve::pants().to_json()),
        CurveKind::Lq => {
            let c = TropCurve::lq(rational("logq", &opts.logq)?, rational("argq", &opts.argq)?);
            ("lq".to_string(), c.to_json())
        }
        CurveKind::File => {
            let path = opts.input.as_ref().ok_or_else(|| Failure::domain("--curve file needs --input"))?;
            let text = std::fs::read_to_string(path)?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
            (name, serde_json::from_str(&text)?)
        }
    };
    Ok(TropCurve::from_json_with_depth(&name, &doc, opts.precision)?)
}

fn cutoff(opts: &Opts) -> Result<Valuation, Failure> {
    let basis = mirror_basis();
    let v = parse_linexpr(&basis, &opts.cutoff).map_err(|e| Failure::domain(format!("--cutoff: {e}")))?;
    if basis.sign(&v)? != std::cmp::Ordering::Greater {
        return Err(Failure::domain("--cutoff must be positive"));
    }
    Ok(v)
}

fn direction(opts: &Opts) -> Result<[f64; 2], Failure> {
    let a = match &opts.a {
        None => [DEFAULT_A_ANGLE.cos(), DEFAULT_A_ANGLE.sin()],
        Some(s) => {
            let v: Vec<f64> = s
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| Failure::domain(format!("--a: bad number {x:?}"))))
                .collect::<Result<_, _>>()?;
            if v.len() != 2 {
                return Err(Failure::domain("--a takes two components"));
            }
            [v[0], v[1]]
        }
    };
    let n = a[0].hypot(a[1]);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Failure::domain("--a must be a nonzero vector"));
    }
    Ok([a[0] / n, a[1] / n])
}

fn perturbation(opts: &Opts, curve: &TropCurve) -> Result<PerturbationConfig, Failure> {
    let a = direction(opts)?;
    let r = match opts.r {
        Some(r) => r,
        None => {
            let m = curve.approx(&coefficient_gap(curve)?);
            let k = opts.k.max(0) as f64;
            10.0 * k * m + 2.0 * k + 10.0
        }
    };
    let mut cfg = PerturbationConfig::new(r, opts.k, a);
    if opts.phi != "auto" {
        let v: Vec<f64> = opts
            .phi
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| Failure::domain(format!("--phi: bad number {x:?}"))))
            .collect::<Result<_, _>>()?;
        cfg.phi = PhiPolicy::Explicit(v);
    }
    Ok(cfg)
}

fn config_echo(opts: &Opts) -> Value {
    json!({
        "curve": format!("{:?}", curve_kind(opts)).to_lowercase(),
        "input": opts.input.as_ref().map(|p| p.display().to_string()),
        "logq": opts.logq,
        "argq": opts.argq,
        "k": opts.k,
        "R": opts.r,
        "a": opts.a,
        "phi": opts.phi,
        "cutoff": opts.cutoff,
        "seed": opts.seed,
        "precision": opts.precision,
    })
}

fn report(command: &str, opts: &Opts, results: Value, warnings: Vec<String>) -> Value {
    json!({
        "command": command,
        "config": config_echo(opts),
        "seed": opts.seed,
        "results": results,
        "warnings": warnings,
        "timing": Value::Null,
    })
}

fn ok(v: Value) -> Outcome {
    Outcome { body: Body::Report(v), code: 0 }
}

pub fn dispatch(cmd: &Command, opts: &Opts) -> Result<Outcome, Failure> {
    match cmd {
        Command::Analyze => analyze(opts),
        Command::Generators => generators(opts),
        Command::Obstruction { class } => obstruction(opts, class),
        Command::Energy { disk } => energy(opts, disk),
        Command::MirrorCheck => mirror_check(opts),
        Command::PoleProfile { g, end } => pole_profile_cmd(opts, g, *end),
        Command::Render { ladder } => render(opts, *ladder),
    }
}

fn analyze(opts: &Opts) -> Result<Outcome, Failure> {
    let curve = load_curve(opts)?;
    let mut warnings = Vec::new();
    let poly = newton_polygon(&curve)?;
    let boundary_defects = poly.non_vertex_boundary_points();
    let mut results = json!({
        "newton_polygon": {
            "vertices": poly.vertices,
            "twice_area": poly.twice_area,
            "boundary_points": poly.boundary_points,
            "interior_points": poly.interior_points,
        },
        "smooth": boundary_defects.is_empty(),
        "M": coefficient_gap(&curve)?.display(&curve.basis).to_string(),
    });
    if let Some((a, b, p)) = boundary_defects.first() {
        warnings.push(format!("NotSmooth: boundary edge {a:?}-{b:?} contains the lattice point {p:?}"));
        return Ok(Outcome { body: Body::Report(report("analyze", opts, results, warnings)), code: EXIT_DOMAIN });
    }
    let sk = skeleton(&curve)?;
    let ends = ends_of(&curve, &sk);
    let (g, b) = genus_and_ends(&curve)?;
    results["skeleton"] = sk.to_json(&curve);
    results["ends"] = Value::Array(ends.iter().map(|e| e.to_json(&curve)).collect());
    results["genus"] = json!(g);
    results["b"] = json!(b);
    results["interior_count"] = json!(2 * g + b - 2);
    Ok(ok(report("analyze", opts, results, warnings)))
}

fn generator_summary(curve: &TropCurve, gs: &GeneratorSet) -> Value {
    let ends: Vec<Value> = gs
        .ends
        .iter()
        .enumerate()
        .map(|(ei, re)| {
            let mut levels: Vec<(i64, f64, Vec<Value>)> = Vec::new();
            for g in gs.on_end(ei) {
                if let (GenKind::Cylindrical { j, label, gen_type, .. }, Some(c)) = (&g.kind, g.coords) {
                    if levels.last().map(|l| l.0) != Some(*j) {
                        levels.push((*j, c.p_alpha, Vec::new()));
                    }
                    let entry = levels.last_mut().expect("pushed above");
                    entry.2.push(json!({ "j0": label.j0, "j1": label.j1, "type": gen_type.as_str() }));
                }
            }
            json!({
                "end": re.end.to_json(curve),
                "phi": re.phi,
                "a_alpha": re.a_alpha,
                "a_perp": re.a_perp,
                "levels": levels.into_iter().map(|(j, p, s)| json!({ "j": j, "p_alpha": p, "sheets": s })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "degree0": gs.count(0),
        "degree1": gs.count(1),
        "by_end": ends,
        "generators": gs.generators.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
    })
}

fn generators(opts: &Opts) -> Result<Outcome, Failure> {
    let curve = load_curve(opts)?;
    let cfg = perturbation(opts, &curve)?;
    let gs = enumerate_generators(&curve, &cfg)?;
    let mut results = generator_summary(&curve, &gs);
    results["perturbation"] = cfg.to_json();
    Ok(ok(report("generators", opts, results, gs.warnings.clone())))
}

fn obstruction(opts: &Opts, class: &str) -> Result<Outcome, Failure> {
    let curve = load_curve(opts)?;
    let n: Vec<i64> = if class == "opposite-ends" {
        opposite_ends_class(&curve)?.ok_or_else(|| Failure::domain("the curve has no pair of opposite ends"))?
    } else {
        class
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::domain(format!("--class: bad integer {x:?}"))))
            .collect::<Result<_, _>>()?
    };
    let rep = obstruction_check(&curve, &n)?;
    let mut results = rep.to_json(&curve);
    results["value_over_pi"] = json!(rep.value / PI);
    Ok(ok(report("obstruction", opts, results, Vec::new())))
}

fn energy(opts: &Opts, disk: &std::path::Path) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(disk)?;
    let data = DiskBoundaryData::from_json(&serde_json::from_str(&text)?)?;
    let e = disk_energy(&data)?;
    let results = json!({ "energy": e, "disk": data.to_json() });
    Ok(ok(report("energy", opts, results, Vec::new())))
}

/// The presentation of a built-in curve together with its filtration window family.
fn mirror_presentation(opts: &Opts, c: Valuation) -> Result<(CurvePresentation, Window), Failure> {
    match curve_kind(opts) {
        CurveKind::Lq => Ok((
            CurvePresentation::f_q(rational("logq", &opts.logq)?, rational("argq", &opts.argq)?, c)?,
            Window::HalfOpenBox { k: 1 },
        )),
        CurveKind::Pants => Ok((CurvePresentation::pants(c)?, Window::Pants { k: 1 })),
        CurveKind::File => Err(Failure::domain("mirror-check supports --curve lq or pants")),
    }
}

fn mirror_check(opts: &Opts) -> Result<Outcome, Failure> {
    let (pres, family) = mirror_presentation(opts, cutoff(opts)?)?;
    let k = opts.k;
    if k < 1 {
        return Err(Failure::domain("mirror-check needs --k >= 1"));
    }
    let is_lq = matches!(family, Window::HalfOpenBox { .. });
    let mut dims = Vec::new();
    for kk in 1..=k {
        let fd = filtered_dim(&pres, &family.with_k(kk))?;
        let expected = if is_lq { 4 * kk - 1 } else { 3 * kk + 1 };
        dims.push(json!({ "k": kk, "dim": fd.dim, "expected": expected, "ok": fd.dim as i64 == expected, "basis": fd.basis }));
    }
    let window = family.with_k(k);
    let candidates = if is_lq { hms_lq_candidates(&pres, k, &[], &[])? } else { pants_candidates(&pres, k)? };
    let cert = verify_basis(&pres, &candidates, &window)?;
    let mut table_checks = Vec::new();
    if is_lq {
        let sc = structure_constants(&pres, [1, 0], [0, 1], &window)?;
        let want = pres.reduce(&parse_laurent(&pres, "Q*z1 + Q*z2 - Q")?)?;
        let ok = pres.equal(&sc.product, &want)?;
        table_checks.push(json!({ "check": "z1*z2 = Q*z1 + Q*z2 - Q", "ok": ok, "expansion": sc.to_json() }));
    } else {
        for l in 0..=k {
            let g = laurent_from_ints(&pres.ctx, &[(1, l + 1, l), (1, l, l + 1), (-1, l, l)]);
            let ok = pres.is_zero(&pres.reduce(&g)?)?;
            table_checks.push(json!({ "check": format!("z1^{}*z2^{l} + z1^{l}*z2^{} - z1^{l}*z2^{l} = 0", l + 1, l + 1), "ok": ok }));
        }
        for kk in 0..=k {
            let g = pop_generator(&pres, kk)?;
            table_checks.push(json!({ "check": format!("X^{kk} acts by {}", g.expected.display()), "ok": g.matches_expected, "generator": g.to_json() }));
        }
    }
    let pop = solve_pop_coefficients()?;
    let all_ok = dims.iter().all(|d| d["ok"] == json!(true)) && cert.ok && table_checks.iter().all(|t| t["ok"] == json!(true));
    let results = json!({
        "presentation": pres.to_json(),
        "dims": dims,
        "basis_certificates": [{ "window": window.describe(), "certificate": cert.to_json() }],
        "table_checks": table_checks,
        "pop_solve": pop.to_json(),
        "all_ok": all_ok,
    });
    let code = if all_ok { 0 } else { EXIT_DOMAIN };
    Ok(Outcome { body: Body::Report(report("mirror-check", opts, results, Vec::new())), code })
}

fn pole_profile_cmd(opts: &Opts, g: &str, end: usize) -> Result<Outcome, Failure> {
    let curve = load_curve(opts)?;
    let c = cutoff(opts)?;
    let pres = match curve_kind(opts) {
        CurveKind::Lq => CurvePresentation::f_q(rational("logq", &opts.logq)?, rational("argq", &opts.argq)?, c)?,
        _ => present_curve(&curve, c)?,
    };
    let ends = cylindrical_ends(&curve)?;
    let spec = ends.get(end).ok_or_else(|| Failure::domain(format!("end {end} out of range (curve has {})", ends.len())))?;
    let ep = end_parametrization(&pres, &curve, spec)?;
    let element = pres.reduce(&parse_laurent(&pres, g)?)?;
    let prof = pole_profile(&pres, &element, &ep)?;
    let results = json!({
        "g": g,
        "normal_form": element.display(),
        "end": ep.to_json(Some(&curve)),
        "profile": prof.to_json(),
    });
    Ok(ok(report("pole-profile", opts, results, Vec::new())))
}

/// Rows of `(p_α, j)` marks per end, drawn below the skeleton.
fn ladder_svg(gs: &GeneratorSet, width: u32, top: u32) -> (String, u32) {
    let row = 22u32;
    let mut s = String::new();
    let mut y = top;
    let _ = writeln!(s, r#"<g font-family="monospace" font-size="11" fill="black">"#);
    for (ei, re) in gs.ends.iter().enumerate() {
        let mut marks: Vec<(i64, f64)> = Vec::new();
        for g in gs.on_end(ei) {
            if let (GenKind::Cylindrical { j, sheet: 0, gen_type, .. }, Some(c)) = (&g.kind, g.coords) {
                if *gen_type == tfw_core::hamiltonian::GenType::E {
                    marks.push((*j, c.p_alpha));
                }
            }
        }
        y += row;
        let _ = writeln!(s, r#"<text x="8" y="{y}">end {ei} α=({},{})</text>"#, re.end.alpha[0], re.end.alpha[1]);
        if marks.is_empty() {
            continue;
        }
        let lo = marks.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
        let hi = marks.iter().map(|m| m.1).fold(f64::NEG_INFINITY, f64::max);
        let (x0, x1) = (150.0, width as f64 - 20.0);
        let _ = writeln!(s, r#"<line x1="{x0:.3}" y1="{:.3}" x2="{x1:.3}" y2="{:.3}" stroke="gray"/>"#, y as f64 - 4.0, y as f64 - 4.0);
        for (j, p) in marks {
            let t = if hi > lo { (p - lo) / (hi - lo) } else { 0.5 };
            let x = x0 + t * (x1 - x0);
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{:.3}" r="3"/><text x="{:.3}" y="{:.3}">{j}</text>"#, y as f64 - 4.0, x - 3.0, y as f64 + 8.0);
        }
    }
    let _ = writeln!(s, "</g>");
    (s, y + row - top)
}

fn render(opts: &Opts, ladder: bool) -> Result<Outcome, Failure> {
    let curve = load_curve(opts)?;
    let sk = skeleton(&curve).map_err(|e| match e {
        TropError::NotSmooth { .. } => Failure::domain(format!("render: {e}")),
        other => Failure::from(other),
    })?;
    let ends = ends_of(&curve, &sk);
    let svg_opts = SvgOptions::default();
    let inner = skeleton_svg(&curve, &sk, &ends, &svg_opts);
    let gs = if ladder && opts.k > 0 { Some(enumerate_generators(&curve, &perturbation(opts, &curve)?)?) } else { None };
    let Some(gs) = gs else { return Ok(Outcome { body: Body::Svg(inner), code: 0 }) };
    let px = svg_opts.pixels;
    let (group, extra) = ladder_svg(&gs, px, px);
    let h = px + extra;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px}" height="{h}" viewBox="0 0 {px} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{px}" height="{h}" fill="white"/>"#);
    s.push_str(&inner);
    s.push_str(&group);
    s.push_str("</svg>\n");
    Ok(Outcome { body: Body::Svg(s), code: 0 })
}
