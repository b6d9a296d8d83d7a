//! Subcommand bodies. Each returns the JSON (or text) to print and the exit
//! code; wall-clock timings are written to stderr only.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use cremona_core::cremona::{cremona_from_monoid, verify_cremona};
use cremona_core::descriptor::{FindMonoidDescriptor, MapDescriptor, SurfaceDescriptor, TraceDescriptor, SCHEMA_VERSION};
use cremona_core::exact::{parse_rational, MultiPoly};
use cremona_core::lemmas::{
    beta_of, check_cubic_remainder, check_dimension_inequality, check_quadratic_inequality, constants as lemma_constants,
    cubic_root_uniqueness, dimension_threshold, xi_constant, EllM,
};
use cremona_core::monoid::{dim_formula_md, dim_formula_mdpq, monoid_basis, search_double_vertex_monoid, Monoid, Vertex};
use cremona_core::orbit::{demo_orbit as run_demo, random_monoid_map};
use cremona_core::rectify::{rectify_with, RectifyConfig};
use cremona_core::surfaces::ParamSurface;
use cremona_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String, std::io::Error),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("malformed JSON: {e}"))
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::SearchExhausted(_) | Error::RetriesExhausted(_) | Error::EmptySystem(_) => EXIT_EXHAUSTED,
                Error::VerificationFailed(_) | Error::MapCollapses(_) | Error::ProjectionCollapses => EXIT_VERIFICATION,
                _ => EXIT_USAGE,
            },
        }
    }
}

pub struct Output {
    pub text: String,
    pub code: u8,
}

fn json_output<T: Serialize>(v: &T, code: u8) -> Result<Output, CliError> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    Ok(Output { text, code })
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    Ok(serde_json::from_str(&raw)?)
}

fn surface_from(v: Value) -> Result<ParamSurface, CliError> {
    let d: SurfaceDescriptor = serde_json::from_value(v)?;
    Ok(d.to_surface()?)
}

fn load_surface(path: &Path) -> Result<ParamSurface, CliError> {
    surface_from(read_json(path)?)
}

fn load_map(path: &Path) -> Result<cremona_core::cremona::CremonaMap, CliError> {
    let d: MapDescriptor = serde_json::from_value(read_json(path)?)?;
    Ok(d.to_map()?)
}

fn parse_vertexes(s: &str) -> Result<Vec<Vertex>, CliError> {
    let vs = s.split(',').map(|v| Vertex::parse(v.trim())).collect::<Result<Vec<_>, _>>()?;
    if vs.is_empty() {
        return Err(CliError::Usage("no vertexes given".into()));
    }
    Ok(vs)
}

pub fn monoid_dim(d: u32, vertexes: &str) -> Result<Output, CliError> {
    let vs = parse_vertexes(vertexes)?;
    let sys = monoid_basis(d, &vs)?;
    let formula = match vs.as_slice() {
        [Vertex::P0] | [Vertex::P4] => dim_formula_md(d)?,
        _ => dim_formula_mdpq(d)?,
    };
    let enumerated = sys.projective_dim();
    json_output(
        &json!({
            "schema_version": SCHEMA_VERSION,
            "d": d,
            "vertexes": vs,
            "enumerated": enumerated,
            "formula": formula,
            "match": enumerated == formula as i64,
        }),
        EXIT_OK,
    )
}

/// `seed` is the seed from the command line or environment, if any; a
/// request file may carry its own.
pub fn find_monoid(path: &Path, d: Option<u32>, d_max: u32, draws: usize, seed: Option<u64>) -> Result<Output, CliError> {
    let v = read_json(path)?;
    let (surface, req_d, req_seed) = if v.get("surface").is_some() {
        if let Some(vs) = v.get("vertexes") {
            let vs: Vec<Vertex> = serde_json::from_value(vs.clone())?;
            if vs != [Vertex::P0, Vertex::P4] {
                return Err(CliError::Usage("only the vertex pair [\"p0\", \"p4\"] is searched".into()));
            }
        }
        let req_d = v.get("d").and_then(Value::as_u64).map(|x| x as u32);
        (surface_from(v["surface"].clone())?, req_d, v.get("seed").and_then(Value::as_u64))
    } else {
        (surface_from(v)?, None, None)
    };
    let seed = seed.or(req_seed).unwrap_or(0);
    let degrees: Vec<u32> = match d.or(req_d) {
        Some(d) => vec![d],
        None => (2..=d_max).collect(),
    };
    if degrees.is_empty() {
        return Err(CliError::Usage(format!("empty degree range 2..={d_max}")));
    }
    let mut last = None;
    for d in degrees {
        let t = Instant::now();
        let found = search_double_vertex_monoid(&surface, d, seed, draws)?;
        eprintln!("d = {d}: system dim {:?}, found {} ({:.2}s)", found.system_dim, found.monoid.is_some(), t.elapsed().as_secs_f64());
        let desc = FindMonoidDescriptor {
            schema_version: SCHEMA_VERSION,
            d,
            dim: found.system_dim,
            cone_dims: found.cone_dims,
            element: found.monoid.as_ref().map(|m| m.form().to_string()),
            cone_free: found.monoid.is_some(),
        };
        if found.monoid.is_some() {
            return json_output(&desc, EXIT_OK);
        }
        last = Some(desc);
    }
    json_output(&last, EXIT_EXHAUSTED)
}

pub fn cremona_build(monoid: Option<&str>, degree: Option<u32>, seed: u64) -> Result<Output, CliError> {
    let map = match (monoid, degree) {
        (Some(f), _) => {
            let m = Monoid::new(MultiPoly::parse(f, 5)?, &[Vertex::P0, Vertex::P4])?;
            cremona_from_monoid(&m, seed)?
        }
        (None, Some(d)) => random_monoid_map(d, seed)?,
        (None, None) => return Err(CliError::Usage("give --monoid or --degree".into())),
    };
    json_output(&MapDescriptor::from_map(&map), EXIT_OK)
}

pub fn cremona_verify(path: &Path, trials: usize, seed: u64) -> Result<Output, CliError> {
    let map = load_map(path)?;
    let t = Instant::now();
    let v = verify_cremona(&map, trials, seed);
    eprintln!("verified {} points ({:.2}s)", v.checked, t.elapsed().as_secs_f64());
    let code = if v.passed { EXIT_OK } else { EXIT_VERIFICATION };
    json_output(
        &json!({
            "schema_version": SCHEMA_VERSION,
            "degree": map.degrees(),
            "passed": v.passed,
            "checked": v.checked,
            "indeterminate": v.indeterminate,
        }),
        code,
    )
}

pub fn cremona_apply(map_path: &Path, surface_path: &Path, seed: u64) -> Result<Output, CliError> {
    let map = load_map(map_path)?;
    let s = load_surface(surface_path)?;
    let image = map.apply_to_surface(&s, seed)?;
    json_output(
        &json!({
            "schema_version": SCHEMA_VERSION,
            "surface": SurfaceDescriptor::from_surface(&image),
            "ruling_degree": image.ruling_degree(),
            "image_degree": image.image_degree(seed)?,
        }),
        EXIT_OK,
    )
}

pub fn rectify(path: &Path, config: &RectifyConfig) -> Result<Output, CliError> {
    let s = load_surface(path)?;
    let mut clock = Instant::now();
    let result = rectify_with(&s, config, |step| {
        let betas: Vec<u32> = step.stages.iter().map(|st| st.beta).collect();
        let ds: Vec<u32> = step.stages.iter().map(|st| st.d).collect();
        let maps: Vec<(u32, u32)> = step.stages.iter().map(|st| st.map.degrees()).collect();
        let degree = step.output.image_degree(step.seed).map_or_else(|e| e.to_string(), |d| d.to_string());
        eprintln!(
            "step: beta {betas:?}, d {ds:?}, map degrees {maps:?}, surface degree {degree}, ruling degree {} ({:.2}s)",
            step.output.ruling_degree(),
            clock.elapsed().as_secs_f64()
        );
        clock = Instant::now();
    });
    match result {
        Ok(trace) => json_output(&TraceDescriptor::from_trace(&trace)?, EXIT_OK),
        Err(Error::SearchExhausted(report)) => {
            eprintln!("{}", report.summary());
            json_output(&json!({ "schema_version": SCHEMA_VERSION, "outcome": "search_exhausted", "report": report }), EXIT_EXHAUSTED)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn constants(precision: u32, as_json: bool) -> Result<Output, CliError> {
    let c = lemma_constants(precision)?;
    let u = cubic_root_uniqueness();
    if as_json {
        return json_output(
            &json!({
                "schema_version": SCHEMA_VERSION,
                "precision": precision,
                "xi": c.xi.to_string(),
                "a1": c.a1.to_string(),
                "a2": c.a2.to_string(),
                "cubic_residual": c.residual.to_string(),
                "root_uniqueness": u,
            }),
            EXIT_OK,
        );
    }
    let text = format!(
        "xi = {}\na1 = {}\na2 = {}\ncubic residual = {}\ndiscriminant {}, one real root in [{}, {}]\n",
        c.xi, c.a1, c.a2, c.residual, u.discriminant, u.bracket.0, u.bracket.1
    );
    Ok(Output { text, code: EXIT_OK })
}

pub struct GridOptions<'a> {
    pub grid: &'a str,
    pub precision: u32,
    pub h_max: u64,
    pub threshold_h_max: u64,
    pub ell: &'a str,
    pub m: &'a str,
}

fn parse_range(entry: &str) -> Result<(String, u64, u64), CliError> {
    let bad = || CliError::Usage(format!("bad grid entry `{entry}`, expected name=LO..HI"));
    let (name, range) = entry.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = match range.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (range, range),
    };
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((name.trim().to_string(), lo, hi))
}

/// Inclusive `(lo, hi)` for `a` and for `b`.
type GridBounds = ((u64, u64), (u64, u64));

fn parse_grid(grid: &str) -> Result<GridBounds, CliError> {
    let (mut a, mut b) = (None, None);
    for part in grid.split(',') {
        match parse_range(part)? {
            (n, lo, hi) if n == "a" => a = Some((lo, hi)),
            (n, lo, hi) if n == "b" => b = Some((lo, hi)),
            (n, ..) => return Err(CliError::Usage(format!("unknown grid variable `{n}`"))),
        }
    }
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(CliError::Usage("grid needs both a and b".into())),
    }
}

#[derive(Serialize)]
struct GridRow {
    h: u64,
    d: u64,
    beta: u64,
    offset: String,
    quadratic: cremona_core::lemmas::BoundReport,
    cubic: cremona_core::lemmas::BoundReport,
    dimension: Option<cremona_core::lemmas::BoundReport>,
}

#[derive(Serialize)]
struct GridCell {
    a: u64,
    b: u64,
    threshold: Option<cremona_core::lemmas::Threshold>,
    rows: Vec<GridRow>,
}

pub fn verify_grid(opts: &GridOptions, as_json: bool) -> Result<Output, CliError> {
    let ((a_lo, a_hi), (b_lo, b_hi)) = parse_grid(opts.grid)?;
    let ell_m = EllM { ell: parse_rational(opts.ell)?, m: parse_rational(opts.m)? };
    let xi = xi_constant(opts.precision)?;
    let t = Instant::now();
    let mut cells = Vec::new();
    let mut failed = false;
    for a in a_lo..=a_hi {
        for b in b_lo..=b_hi {
            let threshold = if a >= 2 { Some(dimension_threshold(a, b, opts.threshold_h_max, &ell_m, &xi)?) } else { None };
            failed |= threshold.as_ref().is_some_and(|t| t.h_star.is_none());
            let mut rows = Vec::new();
            for h in 1..=opts.h_max {
                let d = a * h;
                let (beta, eps) = beta_of(d, a, &xi)?;
                let quadratic = check_quadratic_inequality(a, b, beta, d);
                let cubic = check_cubic_remainder(h, &eps.to_rational(), a, &xi)?;
                let dimension = if a >= 2 { Some(check_dimension_inequality(a, b, beta, d, None, &ell_m)?) } else { None };
                failed |= !quadratic.verdict || !cubic.verdict;
                rows.push(GridRow { h, d, beta, offset: eps.to_decimal(12), quadratic, cubic, dimension });
            }
            cells.push(GridCell { a, b, threshold, rows });
        }
    }
    eprintln!("checked {} shapes ({:.2}s)", cells.len(), t.elapsed().as_secs_f64());
    let code = if failed { EXIT_VERIFICATION } else { EXIT_OK };
    if as_json {
        return json_output(
            &json!({
                "schema_version": SCHEMA_VERSION,
                "precision": opts.precision,
                "ell_m": ell_m,
                "h_max": opts.h_max,
                "cells": cells,
            }),
            code,
        );
    }
    let mut text = format!("{:>3} {:>3} {:>10} {:>10} {:>10} {:>5} {:>9}\n", "a", "b", "quadratic", "cubic", "dimension", "h*", "negative");
    for c in &cells {
        let count = |f: &dyn Fn(&GridRow) -> bool| format!("{}/{}", c.rows.iter().filter(|r| f(r)).count(), c.rows.len());
        let dim = count(&|r| r.dimension.as_ref().is_some_and(|d| d.verdict));
        let (h_star, neg) = match &c.threshold {
            Some(t) => (t.h_star.map_or("none".to_string(), |h| h.to_string()), t.negative_count.to_string()),
            None => ("-".into(), "-".into()),
        };
        text.push_str(&format!(
            "{:>3} {:>3} {:>10} {:>10} {:>10} {:>5} {:>9}\n",
            c.a,
            c.b,
            count(&|r| r.quadratic.verdict),
            count(&|r| r.cubic.verdict),
            dim,
            h_star,
            neg
        ));
    }
    Ok(Output { text, code })
}

pub fn demo_orbit(scroll: Option<&Path>, degrees: &[u32], config: Option<&RectifyConfig>, seed: u64) -> Result<Output, CliError> {
    let start = match scroll {
        Some(p) => load_surface(p)?,
        None => ParamSurface::parse(&["s*u", "s*v", "t*u", "t*v"])?,
    };
    let t = Instant::now();
    let demo = run_demo(&start, degrees, config, seed)?;
    eprintln!("orbit of {} maps ({:.2}s)", demo.steps.len(), t.elapsed().as_secs_f64());
    let steps = demo
        .steps
        .iter()
        .map(|st| {
            Ok(json!({
                "map": MapDescriptor::from_map(&st.map),
                "surface": SurfaceDescriptor::from_surface(&st.surface),
                "ruling_degree": st.surface.ruling_degree(),
                "image_degree": st.surface.image_degree(seed)?,
            }))
        })
        .collect::<Result<Vec<Value>, Error>>()?;
    let mut code = EXIT_OK;
    let rectification = match demo.rectification {
        None => Value::Null,
        Some(Ok(trace)) => json!({
            "outcome": "rectified",
            "steps": trace.steps.len(),
            "final": SurfaceDescriptor::from_surface(&trace.final_surface),
            "final_ruling_degree": trace.final_surface.ruling_degree(),
        }),
        Some(Err(Error::SearchExhausted(report))) => {
            eprintln!("{}", report.summary());
            code = EXIT_EXHAUSTED;
            json!({ "outcome": "search_exhausted", "report": report })
        }
        Some(Err(e)) => return Err(e.into()),
    };
    json_output(
        &json!({
            "schema_version": SCHEMA_VERSION,
            "start": SurfaceDescriptor::from_surface(&start),
            "degrees": degrees,
            "steps": steps,
            "rectification": rectification,
        }),
        code,
    )
}
