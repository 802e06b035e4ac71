use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use viro_cook::coefficients::{eulerian_row, hodge_coeff, hodge_row, second_diff, sign_profile};
use viro_cook::cooking::{cook, registry_leaf, standard, surplus, CoeffVector, IngredientSet};
use viro_cook::limit::{gaussian, gaussian_error, iterate_distribution, midpoint_ratio, sigma_squared};
use viro_cook::patchwork::{betti_z2, construct_qnd_signs, glue, harnack_signs, smith_thom, standard_ingredient_signs, Mode, SignDistribution};
use viro_cook::rational::{fmt_q, parse_q, qi, to_f64};
use viro_cook::search::{best_coefficient, expand_leaves, t_table, Mode as PlanSearch, Plan, SearchOptions};
use viro_cook::triangulation::{build_t, io, primitive_refinement, verify_built_t, verify_triangulation, Triangulation};
use viro_cook::verify::run_suite;

use crate::args::{ChartMode, CoeffArgs, CookArgs, Format, LimitArgs, PatchworkArgs, RunConfig, SearchArgs, SearchMode, TriangulateArgs, VerifyArgs};
use crate::output::{csv, document, json_bytes, q_cells, rational, rationals, Sink};

/// A bad flag combination or unreadable input; exits with status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failed,
}

// ----------------------------------------------------------------------------
// Inputs
// ----------------------------------------------------------------------------

fn resolved(p: &Path) -> PathBuf {
    if let Ok(c) = std::fs::canonicalize(p) {
        return c;
    }
    match (p.parent(), p.file_name()) {
        (Some(dir), Some(name)) => {
            let dir = if dir.as_os_str().is_empty() { Path::new(".") } else { dir };
            std::fs::canonicalize(dir).map_or_else(|_| p.to_path_buf(), |d| d.join(name))
        }
        _ => p.to_path_buf(),
    }
}

fn read_input(path: &Path, sink: &Sink) -> Result<String> {
    if let Some(out) = sink.path() {
        if resolved(path) == resolved(out) {
            return usage(format!("input and output are the same file: {}", path.display()));
        }
    }
    std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())).into())
}

fn load_json(spec: &str, sink: &Sink) -> Result<Value> {
    let text = if spec.trim_start().starts_with('{') { spec.to_string() } else { read_input(Path::new(spec), sink)? };
    serde_json::from_str(&text).map_err(|e| Usage(format!("ingredients are not valid JSON: {e}")).into())
}

fn looks_like_json(spec: &str) -> bool {
    spec.trim_start().starts_with('{') || Path::new(spec).is_file()
}

/// `{"k": "name" | ["num/den", ...]}` into one vector per dimension.
fn ingredients_from_json(v: &Value) -> Result<BTreeMap<usize, CoeffVector>> {
    let Some(obj) = v.as_object() else {
        return usage("ingredients must be a JSON object keyed by dimension");
    };
    let mut out = BTreeMap::new();
    for (key, val) in obj {
        let k: usize = match key.parse() {
            Ok(k) if k >= 1 => k,
            _ => return usage(format!("bad ingredient dimension `{key}`")),
        };
        let vector = match val {
            Value::String(name) => registry_leaf(name, k)?,
            Value::Array(items) => {
                let x = items
                    .iter()
                    .map(|item| match item {
                        Value::String(s) => Ok(parse_q(s)?),
                        Value::Number(num) => num.as_i64().map(qi).ok_or_else(|| Usage(format!("entry {num} is not an integer or \"num/den\"")).into()),
                        other => usage(format!("bad ingredient entry {other}")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                CoeffVector::new(k, x)?
            }
            other => return usage(format!("bad ingredient for dimension {k}: {other}")),
        };
        out.insert(k, vector);
    }
    Ok(out)
}

fn limit_ingredients(spec: &str, big_n: usize, sink: &Sink) -> Result<Vec<CoeffVector>> {
    let mut given = BTreeMap::new();
    if looks_like_json(spec) {
        given = ingredients_from_json(&load_json(spec, sink)?)?;
    } else {
        let names: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if names.len() == 1 {
            given.insert(big_n, registry_leaf(names[0], big_n)?);
        } else if names.len() == big_n {
            for (k, name) in names.iter().enumerate() {
                given.insert(k + 1, registry_leaf(name, k + 1)?);
            }
        } else {
            return usage(format!("give one ingredient name or {big_n} of them, got {}", names.len()));
        }
    }
    if let Some(&k) = given.keys().find(|&&k| k > big_n) {
        return usage(format!("ingredient of dimension {k} above N = {big_n}"));
    }
    Ok((1..=big_n).map(|k| given.remove(&k).unwrap_or_else(|| standard(k))).collect())
}

// ----------------------------------------------------------------------------
// Subcommands
// ----------------------------------------------------------------------------

pub fn coeff(a: &CoeffArgs, format: Option<Format>, sink: &Sink) -> Result<Outcome> {
    if a.from > a.n {
        return usage(format!("--from {} exceeds --n {}", a.from, a.n));
    }
    let ns = a.from as usize..=a.n as usize;
    let bytes = match format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut rows = Vec::new();
            for n in ns {
                let e = eulerian_row(n);
                let h = hodge_row(n);
                for p in 0..n as i64 {
                    let mut row = vec![n.to_string(), p.to_string(), e.get(p).to_string()];
                    row.extend(q_cells(&h.get(p)));
                    row.extend(q_cells(&second_diff(n, p)));
                    rows.push(row);
                }
            }
            csv(&["n", "p", "eulerian", "a", "a_float", "d2", "d2_float"], rows)?
        }
        Format::Json => {
            let mut rows = Vec::new();
            let mut profiles = Vec::new();
            for n in ns {
                let e = eulerian_row(n);
                let h = hodge_row(n);
                for p in 0..n as i64 {
                    rows.push(json!({
                        "n": n,
                        "p": p,
                        "eulerian": e.get(p).to_string(),
                        "a": rational(&h.get(p)),
                        "d2": rational(&second_diff(n, p)),
                    }));
                }
                if n >= 3 {
                    let s = sign_profile(n)?;
                    profiles.push(json!({
                        "n": n,
                        "ptilde": s.ptilde,
                        "signs": s.signs.iter().map(|(_, sign)| sign.symbol()).collect::<String>(),
                        "first_p": -1,
                        "zero_free": s.zero_free(),
                    }));
                }
            }
            json_bytes(&document("coeff", json!({ "rows": rows, "sign_profiles": profiles })))?
        }
    };
    sink.write(&bytes)?;
    Ok(Outcome::Success)
}

pub fn cook_cmd(a: &CookArgs, format: Option<Format>, sink: &Sink) -> Result<Outcome> {
    let given = ingredients_from_json(&load_json(&a.ingredients, sink)?)?;
    let Some(&top) = given.keys().max() else {
        return usage("no ingredients given");
    };
    let n = a.n.map_or(top + 1, |n| n as usize);
    let mut set = IngredientSet::new(n);
    for (k, v) in given {
        set.insert(k, v)?;
    }
    let x = cook(&set)?;
    let t = surplus(&x);
    let a_n = hodge_row(n);
    let bytes = match format.unwrap_or(Format::Json) {
        Format::Csv => {
            let rows = (0..n as i64).map(|i| {
                let mut row = vec![i.to_string()];
                row.extend(q_cells(&x.get(i)));
                row.extend(q_cells(&a_n.get(i)));
                row.extend(q_cells(&t.get(i)));
                row
            });
            csv(&["i", "x", "x_float", "a", "a_float", "t", "t_float"], rows)?
        }
        Format::Json => json_bytes(&document(
            "cook",
            json!({
                "n": n,
                "x": rationals(x.entries()),
                "t": rationals(&t.t),
                "sum": rational(&x.sum()),
                "maximal": x.is_maximal(),
                "symmetric": x.is_symmetric(),
                "lower_bound_only": x.lower_bound_only,
            }),
        ))?,
    };
    sink.write(&bytes)?;
    Ok(Outcome::Success)
}

fn plan_json(p: &Plan) -> Value {
    match p {
        Plan::Leaf { name, n } => json!({ "leaf": name, "n": n }),
        Plan::Node { n, children } => json!({ "n": n, "children": children.values().map(|c| plan_json(c)).collect::<Vec<_>>() }),
    }
}

pub fn search(a: &SearchArgs, cfg: &RunConfig, sink: &Sink) -> Result<Outcome> {
    let opts = SearchOptions {
        mode: match a.mode {
            SearchMode::Memo => PlanSearch::Memo,
            SearchMode::Brute => PlanSearch::Brute,
        },
        cap: usize::try_from(a.cap.unwrap_or(cfg.frontier_cap)).unwrap_or(usize::MAX),
        ..SearchOptions::default()
    };
    let leaves = expand_leaves(&a.leaves, &opts)?;
    let bytes = if let Some(n_max) = a.table {
        let rows = t_table(n_max as usize, &leaves, &opts)?;
        match cfg.format.unwrap_or(Format::Csv) {
            Format::Csv => csv(
                &["n", "i", "x", "x_float", "t", "t_float", "plan"],
                rows.iter().map(|r| {
                    let mut row = vec![r.n.to_string(), r.i.to_string()];
                    row.extend(q_cells(&r.x));
                    row.extend(q_cells(&r.t));
                    row.push(r.plan.to_string());
                    row
                }),
            )?,
            Format::Json => json_bytes(&document(
                "search-table",
                json!({
                    "leaves": leaves,
                    "n_max": n_max,
                    "rows": rows.iter().map(|r| json!({
                        "n": r.n,
                        "i": r.i,
                        "x": rational(&r.x),
                        "t": rational(&r.t),
                        "plan": plan_json(&r.plan),
                        "witness": r.plan.to_string(),
                    })).collect::<Vec<_>>(),
                }),
            ))?,
        }
    } else {
        let (n, i) = (a.n.expect("clap requires --n") as usize, a.i.expect("clap requires --i") as usize);
        let (value, plan) = best_coefficient(n, i, &leaves, &opts)?;
        let t = &value - hodge_coeff(n, i as i64);
        match cfg.format.unwrap_or(Format::Json) {
            Format::Csv => {
                let mut row = vec![n.to_string(), i.to_string()];
                row.extend(q_cells(&value));
                row.extend(q_cells(&t));
                row.push(plan.to_string());
                csv(&["n", "i", "x", "x_float", "t", "t_float", "plan"], [row])?
            }
            Format::Json => json_bytes(&document(
                "search",
                json!({
                    "n": n,
                    "i": i,
                    "leaves": leaves,
                    "value": rational(&value),
                    "t": rational(&t),
                    "plan": plan_json(&plan),
                    "witness": plan.to_string(),
                }),
            ))?,
        }
    };
    sink.write(&bytes)?;
    Ok(Outcome::Success)
}

pub fn limit(a: &LimitArgs, cfg: &RunConfig, sink: &Sink) -> Result<Outcome> {
    let (big_n, n) = (a.big_n as usize, a.n as usize);
    if n <= big_n {
        return usage(format!("--n {n} must exceed --N {big_n}"));
    }
    let ingredients = limit_ingredients(&a.ingredients, big_n, sink)?;
    let horizon = usize::try_from(cfg.exact_horizon).unwrap_or(usize::MAX);
    let seq = iterate_distribution(&ingredients, n, horizon)?;
    let sigma2 = sigma_squared(&ingredients)?;
    let s2 = to_f64(&sigma2);
    let rows: Vec<(usize, f64, f64)> = seq.row(n).iter().enumerate().map(|(m, &x)| (m, x, gaussian(m as f64, n, s2))).collect();
    let bytes = match cfg.format.unwrap_or(Format::Json) {
        Format::Csv => csv(
            &["m", "x", "gaussian", "diff"],
            rows.iter().map(|(m, x, g)| vec![m.to_string(), x.to_string(), g.to_string(), (x - g).to_string()]),
        )?,
        Format::Json => {
            let sup = rows.iter().map(|(_, x, g)| (x - g).abs()).fold(0.0, f64::max);
            json_bytes(&document(
                "limit",
                json!({
                    "N": big_n,
                    "n": n,
                    "ingredients": ingredients.iter().map(|v| rationals(v.entries())).collect::<Vec<_>>(),
                    "sigma2": rational(&sigma2),
                    "sigma2_float": s2,
                    "sup_error": sup,
                    "sqrt_n_sup_error": gaussian_error(&seq, &sigma2, n)?,
                    "midpoint_ratio": midpoint_ratio(&seq, n),
                    "exact_horizon": horizon,
                    "exact": n <= horizon,
                }),
            ))?
        }
    };
    sink.write(&bytes)?;
    Ok(Outcome::Success)
}

fn triangulation_json(t: &Triangulation, verified: bool) -> Value {
    document(
        "triangulation",
        json!({
            "n": t.n,
            "d": t.d,
            "cells": t.simplices.len(),
            "volume": t.total_volume().to_string(),
            "primitive": t.is_primitive(),
            "verified": verified,
            "simplices": t.simplices.iter().map(|s| s.vertices().to_vec()).collect::<Vec<_>>(),
            "certificate": t.certificate.points.iter().zip(&t.certificate.values)
                .map(|(p, v)| json!({ "point": p, "value": fmt_q(v) }))
                .collect::<Vec<_>>(),
        }),
    )
}

pub fn triangulate(a: &TriangulateArgs, format: Option<Format>, sink: &Sink) -> Result<Outcome> {
    let (n, d) = (a.n as usize, a.d);
    let built = build_t(n, d)?;
    if a.verify {
        if let Err(e) = verify_built_t(&built) {
            eprintln!("verification failed: {e}");
            return Ok(Outcome::Failed);
        }
    }
    let t = if a.primitive {
        let r = primitive_refinement(&built.triangulation)?;
        if a.verify {
            match verify_triangulation(&r) {
                Ok(rep) if rep.primitive => {}
                Ok(_) => {
                    eprintln!("verification failed: refinement is not primitive");
                    return Ok(Outcome::Failed);
                }
                Err(e) => {
                    eprintln!("verification failed: {e}");
                    return Ok(Outcome::Failed);
                }
            }
        }
        r
    } else {
        built.triangulation
    };
    let bytes = match format {
        None => io::write(&t).into_bytes(),
        Some(Format::Json) => json_bytes(&triangulation_json(&t, a.verify))?,
        Some(Format::Csv) => {
            let mut header = vec!["simplex".to_string(), "vertex".to_string()];
            header.extend((1..=n).map(|i| format!("x{i}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows = t.simplices.iter().enumerate().flat_map(|(s, simplex)| {
                simplex.vertices().iter().enumerate().map(move |(v, p)| {
                    let mut row = vec![s.to_string(), v.to_string()];
                    row.extend(p.iter().map(i64::to_string));
                    row
                })
            });
            csv(&header, rows)?
        }
    };
    sink.write(&bytes)?;
    Ok(Outcome::Success)
}

fn load_triangulation(path: &Path, sink: &Sink) -> Result<Triangulation> {
    let text = read_input(path, sink)?;
    io::read(&text).with_context(|| format!("reading {}", path.display()))
}

pub fn patchwork(a: &PatchworkArgs, cfg: &RunConfig, sink: &Sink) -> Result<Outcome> {
    let mode = match a.mode {
        ChartMode::Torus => Mode::Torus,
        ChartMode::Affine => Mode::Affine,
        ChartMode::Projective => Mode::Projective,
    };
    let (t, signs) = match a.signs.as_str() {
        "harnack" => {
            let t = match &a.triangulation {
                Some(p) => load_triangulation(p, sink)?,
                None => {
                    let Some(d) = a.d else {
                        return usage("harnack signs need --triangulation or --d");
                    };
                    if a.n.is_some_and(|n| n != 2) {
                        return usage("harnack signs live in dimension 2");
                    }
                    primitive_refinement(&build_t(2, d)?.triangulation)?
                }
            };
            if t.n != 2 {
                return usage(format!("harnack signs live in dimension 2, the triangulation has n = {}", t.n));
            }
            let s = harnack_signs(t.d);
            (t, s)
        }
        "qnd" => {
            if a.triangulation.is_some() {
                return usage("qnd builds its own triangulation; pass --n and --d instead of --triangulation");
            }
            let (Some(n), Some(d)) = (a.n, a.d) else {
                return usage("qnd signs need --n and --d");
            };
            construct_qnd_signs(n as usize, d, &standard_ingredient_signs)?
        }
        file => {
            let Some(tp) = &a.triangulation else {
                return usage("a sign file needs --triangulation");
            };
            let t = load_triangulation(tp, sink)?;
            let text = read_input(Path::new(file), sink)?;
            let s = SignDistribution::parse(&text, t.n, t.d)?;
            (t, s)
        }
    };
    let complex = glue(&t, &signs, mode)?;
    let counts = complex.cell_counts();
    let total: usize = counts.iter().sum();
    if total as u64 > cfg.cell_cap {
        bail!("glued complex has {total} cells, above the cap of {}", cfg.cell_cap);
    }
    let betti = betti_z2(&complex);
    let st = smith_thom(t.n, t.d, &betti);
    let bytes = match cfg.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let dims = betti.0.len().max(counts.len());
            csv(
                &["k", "betti", "cells"],
                (0..dims).map(|k| {
                    vec![k.to_string(), betti.0.get(k).copied().unwrap_or(0).to_string(), counts.get(k).copied().unwrap_or(0).to_string()]
                }),
            )?
        }
        Format::Json => json_bytes(&document(
            "patchwork",
            json!({
                "n": t.n,
                "d": t.d,
                "mode": mode.to_string(),
                "betti": betti.0,
                "cells": {
                    "counts": counts,
                    "total": total,
                    "euler_characteristic": complex.euler_characteristic(),
                },
                "smith_thom": {
                    "bound": st.bound,
                    "total": st.total,
                    "equal": st.equal(),
                    "holds": st.holds(),
                },
            }),
        ))?,
    };
    sink.write(&bytes)?;
    Ok(Outcome::Success)
}

pub fn verify(a: &VerifyArgs, format: Option<Format>, sink: &Sink) -> Result<Outcome> {
    let results = run_suite(&a.suite)?;
    let failed = results.iter().filter(|r| !r.passed).count();
    let passed = results.len() - failed;
    let bytes = match format {
        None => {
            let mut out = String::new();
            for r in &results {
                out.push_str(&format!("{r}\n"));
            }
            out.push_str(&format!("{passed} passed, {failed} failed\n"));
            out.into_bytes()
        }
        Some(Format::Json) => json_bytes(&document(
            "verify",
            json!({
                "suite": a.suite,
                "passed": passed,
                "failed": failed,
                "results": results.iter().map(|r| json!({
                    "id": r.id,
                    "suite": r.suite,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "elapsed_secs": r.elapsed.as_secs_f64(),
                    "budget_secs": r.budget.as_secs(),
                })).collect::<Vec<_>>(),
            }),
        ))?,
        Some(Format::Csv) => csv(
            &["id", "suite", "name", "passed", "elapsed_secs", "budget_secs", "detail"],
            results.iter().map(|r| {
                vec![
                    r.id.to_string(),
                    r.suite.to_string(),
                    r.name.to_string(),
                    r.passed.to_string(),
                    format!("{:.3}", r.elapsed.as_secs_f64()),
                    r.budget.as_secs().to_string(),
                    r.detail.clone(),
                ]
            }),
        )?,
    };
    sink.write(&bytes)?;
    Ok(if failed == 0 { Outcome::Success } else { Outcome::Failed })
}
