use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use poncelet::closure::closure_traverse;
use poncelet::construction::{poncelet_curve, Pencil};
use poncelet::dual::{dual_conic, jumping_curve};
use poncelet::forms::{PlaneCurve, TernaryForm};
use poncelet::lab::{conic_vector, recover_conics, RecoveryOptions};
use poncelet::membership::{is_poncelet, MembershipVerdict, DEFAULT_TOL};
use poncelet::random;
use poncelet::scalar::{Mode, Rational, Scalar};
use poncelet::selftest::{self, Level};

use crate::plot::{self, Window};
use crate::scene::{curve_map, form_values, float_form, SceneDoc, SceneScalar};
use crate::{CliError, Format, Output};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const CONIC_COLUMNS: [&str; 6] = ["xx", "xy", "yy", "xz", "yz", "zz"];

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

fn meta(mode: Mode, seed: Option<u64>, tol: Option<f64>) -> Value {
    json!({ "seed": seed, "mode": mode_name(mode), "tol": tol, "version": VERSION })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn pencil_json<S: SceneScalar>(p: &Pencil<S>) -> Value {
    json!({ "f": form_values(p.f()), "g": form_values(p.g()) })
}

fn verdict_json<S: SceneScalar>(v: &MembershipVerdict<S>) -> Value {
    json!({
        "is_poncelet": v.is_poncelet,
        "rank": v.rank,
        "residual": v.residual,
        "degenerate": v.degenerate,
        "reason": v.reason,
        "pencil": v.pencil.as_ref().map(pencil_json),
    })
}

fn curve_json<S: SceneScalar>(c: &PlaneCurve<S>) -> Value {
    json!({ "degree": c.degree(), "chart": c.chart(), "coefficients": curve_map(c.form()) })
}

pub fn construct(path: &Path, conic: &str, pencil: &str, name: &str, out: Option<&Path>) -> Result<Output, CliError> {
    fn go<S: SceneScalar>(doc: &mut SceneDoc, conic: &str, pencil: &str, name: &str) -> Result<Value, CliError> {
        let curve = poncelet_curve(&doc.conic::<S>(conic)?, &doc.pencil::<S>(pencil)?)
            .map_err(|e| CliError::input(format!("pencils.{pencil}: {e}")))?;
        doc.put_curve(name, &curve);
        Ok(curve_json(&curve))
    }
    let mut doc = SceneDoc::load(path)?;
    let curve = match doc.mode {
        Mode::Exact => go::<Rational>(&mut doc, conic, pencil, name)?,
        Mode::Float => go::<f64>(&mut doc, conic, pencil, name)?,
    };
    doc.save(out.unwrap_or(path))?;
    let v = json!({ "meta": meta(doc.mode, None, None), "name": name, "curve": curve });
    Ok(Output { stdout: pretty(&v), positive: true })
}

pub fn check(path: &Path, conic: &str, curve: &str, tol: f64) -> Result<Output, CliError> {
    fn go<S: SceneScalar>(doc: &SceneDoc, conic: &str, curve: &str, tol: f64) -> Result<(Value, bool), CliError> {
        let v = is_poncelet(&doc.conic::<S>(conic)?, &doc.curve::<S>(curve)?, tol)?;
        Ok((verdict_json(&v), v.is_poncelet))
    }
    let doc = SceneDoc::load(path)?;
    let (verdict, positive) = match doc.mode {
        Mode::Exact => go::<Rational>(&doc, conic, curve, tol)?,
        Mode::Float => go::<f64>(&doc, conic, curve, tol)?,
    };
    let v = json!({ "meta": meta(doc.mode, None, Some(tol)), "conic": conic, "curve": curve, "verdict": verdict });
    Ok(Output { stdout: pretty(&v), positive })
}

fn complex_pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn closure(
    path: &Path,
    conic: &str,
    curve: &str,
    starts: usize,
    seed: u64,
    tol: f64,
    format: Format,
) -> Result<Output, CliError> {
    let doc = SceneDoc::load(path)?;
    let (frame, curve_c) = match doc.mode {
        Mode::Exact => (doc.conic::<Rational>(conic)?.map(Scalar::to_complex)?, doc.curve::<Rational>(curve)?.map(Scalar::to_complex)?),
        Mode::Float => (doc.conic::<f64>(conic)?.map(Scalar::to_complex)?, doc.curve::<f64>(curve)?.map(Scalar::to_complex)?),
    };
    let mut rng = random::rng(seed);
    let mut reports = Vec::with_capacity(starts);
    for _ in 0..starts {
        let s = random::complex_param(&mut rng);
        reports.push(closure_traverse(&frame, &curve_c, &s, tol)?);
    }
    let positive = reports.iter().all(|r| r.closed);
    let stdout = match format {
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "start": complex_pair(r.start.u / r.start.v),
                        "closed": r.closed,
                        "size": r.polygon_size,
                        "residual": r.max_vertex_residual,
                        "iterations": r.iterations,
                        "real_count": r.real_count,
                        "params": r.params_found.iter().map(|t| json!({ "u": complex_pair(t.u), "v": complex_pair(t.v) })).collect::<Vec<_>>(),
                        "diagnostic": r.diagnostic,
                    })
                })
                .collect();
            let closed = reports.iter().filter(|r| r.closed).count();
            pretty(&json!({ "meta": meta(doc.mode, Some(seed), Some(tol)), "closed": closed, "reports": rows }))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Numeric(e.to_string());
            w.write_record(["start_re", "start_im", "closed", "size", "residual", "seed", "mode", "tol", "version"]).map_err(io)?;
            for r in &reports {
                let t = r.start.u / r.start.v;
                w.write_record([
                    t.re.to_string(),
                    t.im.to_string(),
                    r.closed.to_string(),
                    r.polygon_size.to_string(),
                    format!("{:e}", r.max_vertex_residual),
                    seed.to_string(),
                    mode_name(doc.mode).to_string(),
                    tol.to_string(),
                    VERSION.to_string(),
                ])
                .map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Numeric(e.to_string()))?).expect("csv output is UTF-8")
        }
    };
    Ok(Output { stdout, positive })
}

pub fn recover(
    path: &Path,
    curve: &str,
    starts: usize,
    seed: u64,
    tol: f64,
    target: Option<&str>,
    csv_path: Option<&Path>,
) -> Result<Output, CliError> {
    let doc = SceneDoc::load(path)?;
    let opts = RecoveryOptions { starts, seed, tol, ..RecoveryOptions::default() };
    let (mut result, target_vec) = match doc.mode {
        Mode::Exact => (
            recover_conics(&doc.curve::<Rational>(curve)?, &opts)?,
            target.map(|t| doc.conic::<Rational>(t).map(|f| conic_vector(&f))).transpose()?,
        ),
        Mode::Float => (
            recover_conics(&doc.curve::<f64>(curve)?, &opts)?,
            target.map(|t| doc.conic::<f64>(t).map(|f| conic_vector(&f))).transpose()?,
        ),
    };
    if let Some(t) = &target_vec {
        result.match_target(t, 1e-6);
    }
    if let Some(p) = csv_path {
        let mut w = csv::Writer::from_path(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
        let io = |e: csv::Error| CliError::Numeric(e.to_string());
        let mut header = vec!["index"];
        header.extend(CONIC_COLUMNS);
        header.extend(["residual", "basin_count", "seed", "mode", "tol", "version"]);
        w.write_record(&header).map_err(io)?;
        for (i, c) in result.candidates.iter().enumerate() {
            let mut row = vec![i.to_string()];
            row.extend(c.conic.iter().map(|x| x.to_string()));
            row.extend([
                format!("{:e}", c.residual),
                c.basin_count.to_string(),
                seed.to_string(),
                mode_name(doc.mode).to_string(),
                tol.to_string(),
                VERSION.to_string(),
            ]);
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
    }
    let candidates: Vec<Value> = result
        .candidates
        .iter()
        .map(|c| {
            let coefficients: serde_json::Map<String, Value> =
                CONIC_COLUMNS.iter().zip(&c.conic).map(|(k, x)| (k.to_string(), json!(x))).collect();
            json!({ "conic": coefficients, "residual": c.residual, "basin_count": c.basin_count })
        })
        .collect();
    let positive = !result.candidates.is_empty() && result.target_matched != Some(false);
    let v = json!({
        "meta": meta(doc.mode, Some(seed), Some(tol)),
        "curve": curve,
        "starts": result.starts,
        "seed": result.seed,
        "target_matched": result.target_matched,
        "candidates": candidates,
    });
    Ok(Output { stdout: pretty(&v), positive })
}

pub fn jumping(path: &Path, conic: &str, pencil: &str, name: Option<&str>) -> Result<Output, CliError> {
    fn go<S: SceneScalar>(doc: &mut SceneDoc, conic: &str, pencil: &str, name: Option<&str>) -> Result<(Value, bool), CliError> {
        let frame = doc.conic::<S>(conic)?;
        let j = jumping_curve(&frame, &doc.pencil::<S>(pencil)?)?;
        let verdict = is_poncelet(&dual_conic(&frame), &j.curve, DEFAULT_TOL)?;
        if let Some(n) = name {
            doc.put_curve(n, &j.curve);
        }
        let v = json!({ "curve": curve_json(&j.curve), "even_degree": j.even_degree, "duality": verdict_json(&verdict) });
        Ok((v, verdict.is_poncelet))
    }
    let mut doc = SceneDoc::load(path)?;
    let (body, positive) = match doc.mode {
        Mode::Exact => go::<Rational>(&mut doc, conic, pencil, name)?,
        Mode::Float => go::<f64>(&mut doc, conic, pencil, name)?,
    };
    if name.is_some() {
        doc.save(path)?;
    }
    let v = json!({ "meta": meta(doc.mode, None, Some(DEFAULT_TOL)), "conic": conic, "pencil": pencil, "jumping": body });
    Ok(Output { stdout: pretty(&v), positive })
}

pub fn plot(path: &Path, names: &[String], window: &Window, grid: usize, out: &Path) -> Result<Output, CliError> {
    if grid == 0 {
        return Err(CliError::input("grid: must be positive"));
    }
    let doc = SceneDoc::load(path)?;
    let layers: Vec<(String, TernaryForm<f64>)> =
        names.iter().map(|n| float_form(&doc, n).map(|(f, _)| (n.clone(), f))).collect::<Result<_, _>>()?;
    let (svg, counts) = plot::render(&layers, window, grid);
    std::fs::write(out, svg).map_err(|e| CliError::input(format!("{}: {e}", out.display())))?;
    let summary: Vec<Value> = names.iter().zip(&counts).map(|(n, k)| json!({ "name": n, "segments": k })).collect();
    let v = json!({ "meta": meta(doc.mode, None, None), "out": out.display().to_string(), "grid": grid, "layers": summary });
    Ok(Output { stdout: pretty(&v), positive: true })
}

pub fn selftest(level: Level, seed: u64) -> Result<Output, CliError> {
    let report = selftest::run(level, seed);
    let meta = json!({ "seed": seed, "mode": "mixed", "tol": null, "version": VERSION });
    let v = json!({ "meta": meta, "report": report });
    Ok(Output { stdout: pretty(&v), positive: report.passed() })
}
