//! JSON forms of the exact types. Rationals travel as strings "p/q" (integers
//! may also be given as JSON numbers on input); directions as [dx, dy].

use serde_json::{json, Map, Value};
use thiserror::Error;

use hingeset::cone::{Arc, GSpan, PolytopalCone, RealizabilityVerdict, Witness};
use hingeset::exact::{format_rational, parse_rational, AffineForm, Direction, Point2, Rational, Vec2};
use hingeset::hinge::HingeFunction;
use hingeset::planar::{Components, ConvexCell, LocalCheck, PolytopalSet};
use hingeset::synth::{ConeTrace, SymmetricProfile, SynthesisFrame};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {msg}")]
pub struct JsonError {
    pub path: String,
    pub msg: String,
}

fn err<T>(path: &str, msg: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError { path: path.to_string(), msg: msg.into() })
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => err(path, format!("missing field \"{key}\"")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rational_from_json(v: &Value, path: &str) -> Result<Rational, JsonError> {
    match v {
        Value::String(s) => parse_rational(s).map_or_else(|| err(path, format!("bad rational \"{s}\"")), Ok),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => err(path, "non-integer numbers must be given as \"p/q\" strings"),
        },
        _ => err(path, "expected a rational"),
    }
}

pub fn point_to_json(p: &Point2) -> Value {
    json!([rational_to_json(&p.x), rational_to_json(&p.y)])
}

pub fn point_from_json(v: &Value, path: &str) -> Result<Point2, JsonError> {
    let a = array(v, path)?;
    if a.len() != 2 {
        return err(path, "expected [x, y]");
    }
    Ok(Vec2::new(rational_from_json(&a[0], path)?, rational_from_json(&a[1], path)?))
}

pub fn direction_to_json(d: Direction) -> Value {
    json!([d.dx(), d.dy()])
}

pub fn direction_from_json(v: &Value, path: &str) -> Result<Direction, JsonError> {
    let a = array(v, path)?;
    let ints: Vec<i64> = a.iter().filter_map(Value::as_i64).collect();
    if a.len() != 2 || ints.len() != 2 {
        return err(path, "expected [dx, dy] with integer entries");
    }
    Direction::new(ints[0], ints[1]).or_else(|e| err(path, e.to_string()))
}

pub fn form_to_json(f: &AffineForm) -> Value {
    json!({"a": rational_to_json(&f.a), "b": rational_to_json(&f.b), "c": rational_to_json(&f.c)})
}

pub fn form_from_json(v: &Value, path: &str) -> Result<AffineForm, JsonError> {
    let get = |k: &str| rational_from_json(field(v, k, path)?, &format!("{path}.{k}"));
    Ok(AffineForm::new(get("a")?, get("b")?, get("c")?))
}

fn forms_from_json(v: &Value, path: &str) -> Result<Vec<AffineForm>, JsonError> {
    array(v, path)?.iter().enumerate().map(|(i, f)| form_from_json(f, &format!("{path}[{i}]"))).collect()
}

pub fn hinge_to_json(h: &HingeFunction) -> Value {
    json!({
        "base": form_to_json(h.base()),
        "plus": h.plus().iter().map(form_to_json).collect::<Vec<_>>(),
        "minus": h.minus().iter().map(form_to_json).collect::<Vec<_>>(),
    })
}

pub fn hinge_from_json(v: &Value, path: &str) -> Result<HingeFunction, JsonError> {
    let base = form_from_json(field(v, "base", path)?, &format!("{path}.base"))?;
    let list = |k: &str| match v.get(k) {
        Some(x) => forms_from_json(x, &format!("{path}.{k}")),
        None => Ok(vec![]),
    };
    Ok(HingeFunction::new(base, list("plus")?, list("minus")?))
}

pub fn cone_to_json(c: &PolytopalCone) -> Value {
    match c {
        PolytopalCone::Empty => json!({"kind": "empty"}),
        PolytopalCone::Full => json!({"kind": "full"}),
        PolytopalCone::Arcs(arcs) => json!({
            "kind": "arcs",
            "arcs": arcs.iter().map(|a| json!({
                "start": direction_to_json(a.start),
                "end": direction_to_json(a.end),
            })).collect::<Vec<_>>(),
        }),
    }
}

/// Accepts any list of open arcs; the result is canonical.
pub fn cone_from_json(v: &Value, path: &str) -> Result<PolytopalCone, JsonError> {
    let kind = field(v, "kind", path)?.as_str().unwrap_or("");
    match kind {
        "empty" => Ok(PolytopalCone::Empty),
        "full" => Ok(PolytopalCone::Full),
        "arcs" => {
            let mut arcs = Vec::new();
            for (i, a) in array(field(v, "arcs", path)?, &format!("{path}.arcs"))?.iter().enumerate() {
                let p = format!("{path}.arcs[{i}]");
                arcs.push(Arc::new(
                    direction_from_json(field(a, "start", &p)?, &format!("{p}.start"))?,
                    direction_from_json(field(a, "end", &p)?, &format!("{p}.end"))?,
                ));
            }
            Ok(hingeset::cone::normalize_cone(&arcs))
        }
        _ => err(path, "kind must be \"empty\", \"full\" or \"arcs\""),
    }
}

pub fn cell_to_json(c: &ConvexCell) -> Value {
    json!({"constraints": c.constraints().iter().map(form_to_json).collect::<Vec<_>>()})
}

pub fn cell_from_json(v: &Value, path: &str) -> Result<ConvexCell, JsonError> {
    let cons = forms_from_json(field(v, "constraints", path)?, &format!("{path}.constraints"))?;
    ConvexCell::new(cons).or_else(|e| err(path, e.to_string()))
}

pub fn set_to_json(s: &PolytopalSet) -> Value {
    json!({"cells": s.cells().iter().map(cell_to_json).collect::<Vec<_>>()})
}

pub fn set_from_json(v: &Value, path: &str) -> Result<PolytopalSet, JsonError> {
    let cells = array(field(v, "cells", path)?, &format!("{path}.cells"))?
        .iter()
        .enumerate()
        .map(|(i, c)| cell_from_json(c, &format!("{path}.cells[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolytopalSet::new(cells))
}

pub fn points_from_json(v: &Value, path: &str) -> Result<Vec<Point2>, JsonError> {
    array(v, path)?.iter().enumerate().map(|(i, p)| point_from_json(p, &format!("{path}[{i}]"))).collect()
}

pub fn g_span_to_json(g: &GSpan) -> Value {
    match g {
        GSpan::Dim0 => json!({"dim": 0}),
        GSpan::Dim1(d) => json!({"dim": 1, "lines": [direction_to_json(*d)]}),
        GSpan::Dim2(a, b) => json!({"dim": 2, "lines": [direction_to_json(*a), direction_to_json(*b)]}),
    }
}

pub fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::Trivial => json!({"kind": "trivial"}),
        Witness::Normal(n) => json!({"kind": "normal", "normal": direction_to_json(*n)}),
        Witness::Violation(ds) => json!({
            "kind": "violation",
            "directions": ds.iter().map(|d| direction_to_json(*d)).collect::<Vec<_>>(),
        }),
    }
}

pub fn verdict_to_json(v: &RealizabilityVerdict) -> Value {
    json!({
        "realizable": v.realizable,
        "g_span": g_span_to_json(&v.g_span),
        "r_cone": cone_to_json(&v.r_cone),
        "r_nonempty": v.r_nonempty,
        "witness": witness_to_json(&v.witness),
    })
}

pub fn local_check_to_json(c: &LocalCheck) -> Value {
    match c {
        LocalCheck::Pass => json!({"passed": true}),
        LocalCheck::Fail { q, verdict } => json!({
            "passed": false,
            "vertex": point_to_json(q),
            "verdict": verdict_to_json(verdict),
        }),
    }
}

pub fn components_to_json(c: &Components) -> Value {
    json!({"count": c.count, "bounded": c.bounded})
}

pub fn frame_to_json(f: &SynthesisFrame) -> Value {
    json!({
        "g_span": g_span_to_json(&f.g_span),
        "pi_normal": direction_to_json(f.pi_normal),
        "e": point_to_json(&f.e),
        "boundary_line": direction_to_json(f.boundary_line),
        "segments": f.segments.iter().map(|s| json!({
            "start_ray": direction_to_json(s.start_ray),
            "end_ray": direction_to_json(s.end_ray),
            "case": s.case.map(|c| c.number()),
            "inserted_ray": direction_to_json(s.inserted_ray),
            "inserted_value_rule": s.case.map(|c| c.value_rule()),
        })).collect::<Vec<_>>(),
        "segment_boundary_rays": f.segment_boundary_rays.iter().map(|(d, c)| json!({
            "ray": direction_to_json(*d),
            "case": c.map(|c| c.letter().to_string()),
        })).collect::<Vec<_>>(),
    })
}

pub fn profile_to_json(p: &SymmetricProfile) -> Value {
    Value::Array(
        p.rays.iter().map(|(d, v)| json!({"ray": direction_to_json(*d), "value": rational_to_json(v)})).collect(),
    )
}

pub fn trace_to_json(t: &ConeTrace) -> Value {
    json!({"frame": frame_to_json(&t.frame), "profile": profile_to_json(&t.profile)})
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("serializable");
    s.push('\n');
    s
}

fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), sort_keys(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        x => x.clone(),
    }
}
