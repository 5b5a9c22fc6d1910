//! JSON formats for polytopes, subspaces, building sets and lattices.
//!
//! Rationals are strings (`"3"`, `"-1/2"`, `"0.25"`) or JSON integers. Every parser
//! validates the resulting object and names the violated invariant on failure.
//!
//! ```text
//! polytope      {"vars": ["x", "y"], "vertices": [["0", "0"], ["1/2", "1"], …]}
//!               {"vars": …, "inequalities": [[c0, c1, …], …]}        c0 + c·x ≥ 0
//! subspace      {"equations": [[c0, c1, …], …], "label": "E"}         c0 X0 + c·x = 0
//!               {"points": [[…], …]}                                  projective span
//!               {"empty": true}
//! building set  {"ambient_dim": n, "subspaces": [subspace, …]}
//! lattice       {"groundset": n, "flats": [[i, …], …]}                0-based elements
//!               {"arrangement": [[normal], …]}
//!               {"partition": n} | {"boolean": n} | {"uniform": [r, n]}
//! lattice building set  {"flats": ["12|3|4", …]}  or  {"flats": [[i, …], …]}
//! ```

use std::path::Path;

use serde_json::{json, Value};

use crate::algebra::text::parse_rat;
use crate::algebra::{vars, Rat};
use crate::buildingset_geom::GeomBuildingSet;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matroid::{FlatLattice, MatroidBuildingSet};
use crate::polytope::{shapes, LinearSubspace, Polytope};

fn bad(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {detail}"))
}

pub fn read_json(path: impl AsRef<Path>) -> Result<Value> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| bad(&path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| bad(&path.display().to_string(), e))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => parse_rat(&n.to_string()),
        other => Err(bad("rational", format!("expected a string or number, found {other}"))),
    }
}

fn rat_row(v: &Value) -> Result<Vec<Rat>> {
    v.as_array().ok_or_else(|| bad("row", format!("expected an array, found {v}")))?.iter().map(rat_from_json).collect()
}

fn rat_rows(v: &Value) -> Result<Matrix> {
    v.as_array().ok_or_else(|| bad("rows", format!("expected an array of rows, found {v}")))?.iter().map(rat_row).collect()
}

fn same_width(rows: &Matrix, what: &str) -> Result<Option<usize>> {
    let w = rows.first().map(|r| r.len());
    if rows.iter().any(|r| Some(r.len()) != w) {
        return Err(bad(what, "rows of different lengths"));
    }
    Ok(w)
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| bad(what, "expected an array of strings"))?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad(what, format!("{s} is not a string"))))
        .collect()
}

pub fn parse_polytope(v: &Value) -> Result<Polytope> {
    let (rows, kind) = match (v.get("vertices"), v.get("inequalities")) {
        (Some(r), None) => (rat_rows(r)?, "vertices"),
        (None, Some(r)) => (rat_rows(r)?, "inequalities"),
        _ => return Err(bad("polytope", "give exactly one of \"vertices\" and \"inequalities\"")),
    };
    let width = same_width(&rows, kind)?.ok_or_else(|| bad("polytope", format!("no {kind}")))?;
    let n = if kind == "vertices" { width } else { width.checked_sub(1).ok_or_else(|| bad("polytope", "empty inequality rows"))? };
    let vs = match v.get("vars") {
        Some(names) => {
            let names = string_list(names, "vars")?;
            if names.len() != n {
                return Err(bad("polytope", format!("{} variable names for dimension {n}", names.len())));
            }
            vars(&names)
        }
        None => shapes::chart_vars(n),
    };
    let p = if kind == "vertices" { Polytope::from_vertices(vs, &rows)? } else { Polytope::from_inequalities(vs, &rows)? };
    if !p.is_full_dim() {
        return Err(bad("polytope", format!("not full-dimensional: dimension {} in ℝ^{n}", p.dim())));
    }
    Ok(p)
}

pub fn polytope_to_json(p: &Polytope) -> Value {
    json!({
        "vars": p.vars().to_vec(),
        "vertices": p.vertices().iter().map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `n` is the projective dimension when the object itself does not fix it.
pub fn parse_subspace(v: &Value, n: Option<usize>) -> Result<LinearSubspace> {
    let declared = v.get("ambient_dim").and_then(Value::as_u64).map(|d| d as usize).or(n);
    let s = if v.get("empty").and_then(Value::as_bool) == Some(true) {
        LinearSubspace::empty(declared.ok_or_else(|| bad("subspace", "the empty subspace needs \"ambient_dim\""))?)
    } else if let Some(eq) = v.get("equations") {
        let rows = rat_rows(eq)?;
        let width = same_width(&rows, "equations")?;
        let dim = match (width, declared) {
            (Some(w), Some(d)) if w != d + 1 => return Err(bad("subspace", format!("equation rows need {} entries", d + 1))),
            (Some(w), _) => w.checked_sub(1).ok_or_else(|| bad("subspace", "empty equation rows"))?,
            (None, Some(d)) => d,
            (None, None) => return Err(bad("subspace", "no equations and no \"ambient_dim\"")),
        };
        LinearSubspace::new(dim, &rows)
    } else if let Some(pts) = v.get("points") {
        let rows = rat_rows(pts)?;
        let dim = same_width(&rows, "points")?.or(declared).ok_or_else(|| bad("subspace", "no points"))?;
        LinearSubspace::span_of_points(dim, &rows)
    } else {
        return Err(bad("subspace", "expected \"equations\", \"points\" or \"empty\""));
    };
    if let Some(d) = declared {
        if s.ambient_dim() != d {
            return Err(bad("subspace", format!("lives in ℙ^{} but ℙ^{d} was expected", s.ambient_dim())));
        }
    }
    Ok(s)
}

pub fn subspace_to_json(s: &LinearSubspace) -> Value {
    json!({
        "ambient_dim": s.ambient_dim(),
        "equations": s.equations().iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn parse_building_set(v: &Value, n: Option<usize>) -> Result<GeomBuildingSet> {
    let list = v
        .get("subspaces")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("building set", "expected \"subspaces\": [...]"))?;
    let mut n = v.get("ambient_dim").and_then(Value::as_u64).map(|d| d as usize).or(n);
    let mut subspaces = vec![];
    let mut labels = vec![];
    for (i, item) in list.iter().enumerate() {
        let s = parse_subspace(item, n)?;
        n = Some(s.ambient_dim());
        labels.push(item.get("label").and_then(Value::as_str).map_or_else(|| format!("F{}", i + 1), str::to_string));
        subspaces.push(s);
    }
    let n = n.ok_or_else(|| bad("building set", "empty family without \"ambient_dim\""))?;
    GeomBuildingSet::with_labels(n, subspaces, labels)
}

pub fn building_set_to_json(b: &GeomBuildingSet) -> Value {
    json!({
        "ambient_dim": b.ambient_dim(),
        "subspaces": b.iter().map(|(label, s)| {
            let mut v = subspace_to_json(s);
            v["label"] = json!(label);
            v
        }).collect::<Vec<_>>(),
    })
}

fn as_count(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|k| k as usize).ok_or_else(|| bad(what, format!("expected a nonnegative integer, found {v}")))
}

pub fn parse_lattice(v: &Value) -> Result<FlatLattice> {
    if let Some(n) = v.get("partition") {
        return FlatLattice::partition(as_count(n, "partition")?);
    }
    if let Some(n) = v.get("boolean") {
        return FlatLattice::boolean(as_count(n, "boolean")?);
    }
    if let Some(rn) = v.get("uniform") {
        let pair = rn.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("uniform", "expected [r, n]"))?;
        return FlatLattice::uniform(as_count(&pair[0], "uniform")?, as_count(&pair[1], "uniform")?);
    }
    if let Some(normals) = v.get("arrangement") {
        let rows = rat_rows(normals)?;
        same_width(&rows, "arrangement")?;
        return FlatLattice::from_arrangement(&rows);
    }
    if let (Some(g), Some(flats)) = (v.get("groundset"), v.get("flats")) {
        let g = as_count(g, "groundset")?;
        if g > 64 {
            return Err(bad("lattice", "ground sets are limited to 64 elements"));
        }
        let flats = flats
            .as_array()
            .ok_or_else(|| bad("flats", "expected an array of index arrays"))?
            .iter()
            .map(|f| {
                f.as_array().ok_or_else(|| bad("flats", format!("{f} is not an array")))?.iter().try_fold(0u64, |acc, e| {
                    let e = as_count(e, "flat element")?;
                    if e >= g {
                        return Err(bad("flats", format!("element {e} is outside the ground set 0..{g}")));
                    }
                    Ok(acc | 1 << e)
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        return FlatLattice::from_flats(g, &flats);
    }
    Err(bad("lattice", "expected \"groundset\"+\"flats\", \"arrangement\", \"partition\", \"boolean\" or \"uniform\""))
}

/// `Π4`, `pi4`, `partition:4`, `boolean:3`, `uniform:3:5` (rank 3 on 5 elements).
pub fn parse_lattice_name(s: &str) -> Result<FlatLattice> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad("lattice name", format!("bad number in {s:?}")));
    let lower = s.to_lowercase();
    if let Some(rest) = s.strip_prefix('Π').or_else(|| lower.strip_prefix("pi")) {
        return FlatLattice::partition(num(rest)?);
    }
    let parts: Vec<&str> = lower.split(':').collect();
    match parts.as_slice() {
        ["partition", n] => FlatLattice::partition(num(n)?),
        ["boolean", n] => FlatLattice::boolean(num(n)?),
        ["uniform", r, n] => FlatLattice::uniform(num(r)?, num(n)?),
        _ => Err(bad("lattice name", format!("{s:?} is not Πn, pin, partition:n, boolean:n or uniform:r:n"))),
    }
}

/// A file path if one exists, a lattice name otherwise.
pub fn load_lattice(arg: &str) -> Result<FlatLattice> {
    if Path::new(arg).is_file() {
        parse_lattice(&read_json(arg)?)
    } else {
        parse_lattice_name(arg)
    }
}

pub fn lattice_to_json(l: &FlatLattice) -> Value {
    json!({
        "groundset": l.ground(),
        "flats": (0..l.len()).map(|x| (0..l.ground()).filter(|&e| l.flat(x) >> e & 1 == 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Flats given by label or by 0-based element lists.
pub fn parse_lattice_building_set(l: &FlatLattice, v: &Value) -> Result<MatroidBuildingSet> {
    let flats = v.get("flats").and_then(Value::as_array).ok_or_else(|| bad("building set", "expected \"flats\": [...]"))?;
    let members = flats
        .iter()
        .map(|f| match f {
            Value::String(s) => l.parse_flat(s),
            Value::Array(es) => {
                let bits = es.iter().try_fold(0u64, |acc, e| {
                    let e = as_count(e, "flat element")?;
                    if e >= l.ground() {
                        return Err(bad("building set", format!("element {e} is outside the ground set")));
                    }
                    Ok(acc | 1 << e)
                })?;
                l.index_of(bits).ok_or_else(|| bad("building set", format!("{f} is not a flat")))
            }
            other => Err(bad("building set", format!("{other} is neither a label nor an element list"))),
        })
        .collect::<Result<Vec<_>>>()?;
    MatroidBuildingSet::new(l, members)
}
