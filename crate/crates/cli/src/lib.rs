//! Command-line surface of `hingeset`: JSON schemas, SVG output and the verbs.

pub mod json;
pub mod svg;

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hingeset::cone::check_cone_condition;
use hingeset::exact::Point2;
use hingeset::hinge::HingeFunction;
use hingeset::planar::{check_local_condition, connected_components, positivity_set, set_equal, ConvexCell, SetEquality};
use hingeset::synth::{
    polygon_from_vertices, synthesize_boundary_complement, synthesize_cone_traced, synthesize_convex_polygon,
    synthesize_triangle, SynthError,
};

use crate::json::*;
use crate::svg::ViewBox;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hingeset", version, about = "Exact positivity sets of planar hinge functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input file, inline JSON, or "-" for stdin (the default).
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// "xmin,ymin,xmax,ymax" for render.
    #[arg(long, global = true)]
    pub viewbox: Option<String>,
    /// Include the synthesis trace in synth-cone output.
    #[arg(long, global = true)]
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Decide whether a cone is a positivity set.
    CheckCone,
    /// Build a hinge function whose positivity set is the cone.
    SynthCone,
    /// Check the local cone condition at every boundary vertex of a set.
    CheckSet,
    /// The positivity set of a hinge function.
    PositivitySet,
    /// Connected components of a set or of a hinge function's positivity set.
    Components,
    /// Hinge function for an open triangle.
    SynthTriangle,
    /// Hinge function for an open convex polygon.
    SynthPolygon,
    /// Hinge function positive off the boundary of a convex polygon.
    BoundaryComplement,
    /// Evaluate a hinge function at a point.
    Eval,
    /// Compare a hinge function's positivity set with a set.
    Verify,
    /// SVG of a hinge function, set or cone.
    Render,
}

/// Result of one invocation: exit code and the text for the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

fn error_outcome(code: &str, message: impl Into<String>) -> Outcome {
    let v = json!({"error": {"code": code, "message": message.into()}});
    Outcome { code: EXIT_ERROR, text: to_canonical_string(&v) }
}

fn ok(v: Value) -> Outcome {
    Outcome { code: EXIT_OK, text: to_canonical_string(&v) }
}

fn negative(v: Value) -> Outcome {
    Outcome { code: EXIT_NEGATIVE, text: to_canonical_string(&v) }
}

fn synth_error(e: SynthError) -> Outcome {
    match e {
        SynthError::NotRealizable => negative(json!({"realizable": false, "error": {
            "code": "NotRealizable", "message": e.to_string()}})),
        SynthError::DegenerateTriangle => error_outcome("DegenerateTriangle", e.to_string()),
        SynthError::DegenerateInput(_) => error_outcome("DegenerateInput", e.to_string()),
        SynthError::ConstructionFailed(_) => error_outcome("ConstructionFailed", e.to_string()),
        SynthError::EpsilonSearchExhausted(_) => error_outcome("EpsilonSearchExhausted", e.to_string()),
        SynthError::InternalInconsistency(_) => error_outcome("InternalInconsistency", e.to_string()),
        SynthError::Hinge(_) => error_outcome("HingeError", e.to_string()),
    }
}

fn read_input(spec: Option<&str>) -> Result<Value, Outcome> {
    let text = match spec {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| error_outcome("Io", e.to_string()))?;
            s
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => s.to_string(),
        Some(path) => fs::read_to_string(path).map_err(|e| error_outcome("Io", format!("{path}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| error_outcome("MalformedJson", e.to_string()))
}

fn schema(e: JsonError) -> Outcome {
    error_outcome("SchemaViolation", e.to_string())
}

fn hinge_json(h: &HingeFunction) -> Value {
    json!({"hinge": hinge_to_json(h), "display": h.to_string()})
}

/// A hinge function either at the top level or under "hinge".
fn hinge_arg(v: &Value) -> Result<HingeFunction, Outcome> {
    match v.get("hinge") {
        Some(h) => hinge_from_json(h, "$.hinge").map_err(schema),
        None => hinge_from_json(v, "$").map_err(schema),
    }
}

fn polygon_arg(v: &Value) -> Result<ConvexCell, Outcome> {
    if let Some(vs) = v.get("vertices") {
        let pts = points_from_json(vs, "$.vertices").map_err(schema)?;
        return polygon_from_vertices(&pts).map_err(synth_error);
    }
    cell_from_json(v, "$").map_err(schema)
}

fn cone_arg(v: &Value) -> Result<hingeset::cone::PolytopalCone, Outcome> {
    match v.get("cone") {
        Some(c) => cone_from_json(c, "$.cone").map_err(schema),
        None => cone_from_json(v, "$").map_err(schema),
    }
}

fn set_arg(v: &Value) -> Result<hingeset::planar::PolytopalSet, Outcome> {
    match v.get("set") {
        Some(s) => set_from_json(s, "$.set").map_err(schema),
        None => set_from_json(v, "$").map_err(schema),
    }
}

pub fn execute(cli: &Cli, input: &Value) -> Outcome {
    match run_verb(cli, input) {
        Ok(o) | Err(o) => o,
    }
}

fn run_verb(cli: &Cli, v: &Value) -> Result<Outcome, Outcome> {
    Ok(match cli.command {
        Command::CheckCone => {
            let verdict = check_cone_condition(&cone_arg(v)?);
            let body = verdict_to_json(&verdict);
            if verdict.realizable {
                ok(body)
            } else {
                negative(body)
            }
        }
        Command::SynthCone => {
            let (h, trace) = synthesize_cone_traced(&cone_arg(v)?).map_err(synth_error)?;
            let mut body = hinge_json(&h);
            if cli.trace {
                body["trace"] = trace.as_ref().map_or(Value::Null, trace_to_json);
            }
            ok(body)
        }
        Command::CheckSet => {
            let check = check_local_condition(&set_arg(v)?);
            let body = local_check_to_json(&check);
            if check.passed() {
                ok(body)
            } else {
                negative(body)
            }
        }
        Command::PositivitySet => ok(set_to_json(&positivity_set(&hinge_arg(v)?))),
        Command::Components => {
            let set = if v.get("cells").is_some() || v.get("set").is_some() {
                set_arg(v)?
            } else {
                positivity_set(&hinge_arg(v)?)
            };
            ok(components_to_json(&connected_components(&set)))
        }
        Command::SynthTriangle => {
            let pts = points_from_json(v.get("vertices").unwrap_or(&Value::Null), "$.vertices").map_err(schema)?;
            if pts.len() != 3 {
                return Err(error_outcome("SchemaViolation", "$.vertices: expected three points"));
            }
            ok(hinge_json(&synthesize_triangle(&pts[0], &pts[1], &pts[2]).map_err(synth_error)?))
        }
        Command::SynthPolygon => ok(hinge_json(&synthesize_convex_polygon(&polygon_arg(v)?).map_err(synth_error)?)),
        Command::BoundaryComplement => {
            ok(hinge_json(&synthesize_boundary_complement(&polygon_arg(v)?).map_err(synth_error)?))
        }
        Command::Eval => {
            let h = hinge_arg(v)?;
            if let Some(ps) = v.get("points") {
                let pts: Vec<Point2> = points_from_json(ps, "$.points").map_err(schema)?;
                let vals: Vec<Value> = pts.iter().map(|p| rational_to_json(&h.evaluate(p))).collect();
                ok(json!({"values": vals}))
            } else {
                let p = point_from_json(v.get("point").unwrap_or(&Value::Null), "$.point").map_err(schema)?;
                ok(json!({"value": rational_to_json(&h.evaluate(&p))}))
            }
        }
        Command::Verify => {
            let h = hinge_arg(v)?;
            let target = match v.get("set") {
                Some(s) => set_from_json(s, "$.set").map_err(schema)?,
                None => return Err(error_outcome("SchemaViolation", "$: missing field \"set\"")),
            };
            match set_equal(&positivity_set(&h), &target) {
                SetEquality::Equal => ok(json!({"equal": true})),
                SetEquality::Differ(p) => negative(json!({"equal": false, "counterexample": point_to_json(&p)})),
            }
        }
        Command::Render => {
            let vb = match &cli.viewbox {
                Some(s) => ViewBox::parse(s)
                    .ok_or_else(|| error_outcome("BadViewBox", format!("cannot read viewbox \"{s}\"")))?,
                None => ViewBox::default(),
            };
            let text = if v.get("kind").is_some() || v.get("cone").is_some() {
                svg::render_cone(&cone_arg(v)?, &vb)
            } else if v.get("cells").is_some() || v.get("set").is_some() {
                svg::render_set(&set_arg(v)?, &vb)
            } else {
                svg::render_hinge(&hinge_arg(v)?, &vb)
            };
            Outcome { code: EXIT_OK, text }
        }
    })
}

/// Parses nothing itself: reads the input named by `cli`, runs, and writes the
/// result where requested. Returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match read_input(cli.input.as_deref()) {
        Ok(v) => execute(cli, &v),
        Err(o) => o,
    };
    match &cli.output {
        Some(path) if outcome.code != EXIT_ERROR => {
            if let Err(e) = fs::write(path, &outcome.text) {
                eprintln!("{}: {e}", path.display());
                return EXIT_ERROR;
            }
        }
        _ => print!("{}", outcome.text),
    }
    outcome.code
}
