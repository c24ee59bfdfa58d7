//! JSON front-end: one request in, one report out, and newline-delimited
//! batches of them.
//!
//! Output is canonical. Every report goes through `serde_json::Value`,
//! whose maps keep keys sorted, no field carries a float, and rationals are
//! written as `[numerator, denominator]`.

use num_rational::Ratio;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chern_fm::diagram::verify_diagram_generators;
use crate::chern_fm::{
    fibre_pair_transform, fm_transform_ch, mukai_nahm_ch, ChernTriple, Direction, FibrePair,
};
use crate::error::Error;
use crate::lattice::{DivisorClass, SurfaceKind, SurfaceModel};
use crate::moduli::{report, ModuliDescriptor};
use crate::simpson::{transform_classification, SheafComponent, TorsionSheafModel};
use crate::spectral::{
    construct_from_spectral, incidence_matrix, spectral_divisor, MarkedComponent,
    MarkedConstruction, ProductFamily,
};
use crate::verify::{self, Failure};

pub const COMMANDS: [&str; 8] = [
    "lattice",
    "suitable",
    "transform",
    "spectral",
    "stability",
    "dimensions",
    "duality",
    "verify",
];

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Ten requests touching every command except `verify`.
pub const SAMPLE_BATCH: &str = r#"{"command":"transform","payload":{"rank":2,"c1":{"a":0,"b":0},"ch2_times_2":-6}}
{"command":"suitable","payload":{"L":{"a":1,"b":3},"c":4,"kind":"k3"}}
{"command":"lattice","payload":{"class":{"a":2,"b":3},"kind":"abelian","c":2}}
{"command":"dimensions","payload":{"r":2,"k":3,"kind":"k3"}}
{"command":"dimensions","payload":{"r":2,"k":3,"kind":"abelian"}}
{"command":"stability","payload":{"kind":"abelian","components":[{"class":{"a":1,"b":0},"degree":2},{"class":{"a":1,"b":0},"degree":1},{"class":{"a":0,"b":1},"degree":1},{"class":{"a":0,"b":1},"degree":1},{"class":{"a":0,"b":1},"degree":1}],"polarization":{"a":1,"b":1}}}
{"command":"stability","payload":{"kind":"abelian","components":[{"class":{"a":1,"b":0},"degree":2},{"class":{"a":1,"b":0},"degree":2},{"class":{"a":0,"b":1},"degree":1},{"class":{"a":0,"b":1},"degree":1},{"class":{"a":0,"b":1},"degree":0}],"polarization":{"a":1,"b":1}}}
{"command":"stability","payload":{"kind":"abelian","components":[{"class":{"a":1,"b":0},"degree":4},{"class":{"a":1,"b":0},"degree":2},{"class":{"a":0,"b":1},"degree":0},{"class":{"a":0,"b":1},"degree":0},{"class":{"a":0,"b":1},"degree":0}],"polarization":{"a":1,"b":1}}}
{"command":"spectral","payload":{"family":{"curves":{"base":{"p":7,"a":1,"b":1},"fibre":{"p":5,"a":1,"b":1}},"blocks":[{"q":{"x":0,"y":1},"m":2},{"q":"O","m":1}]}}}
{"command":"duality","payload":{"nahm":{"rank":2,"c1":{"a":0,"b":0},"ch2_times_2":-6}}}
"#;

/// Flag-level defaults applied to payloads that leave a field out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Defaults {
    pub surface: Option<SurfaceKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: String,
    #[serde(default)]
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub ok: bool,
    pub results: Vec<Value>,
    pub failures: Vec<Failure>,
}

/// A report together with the process exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn success(results: Vec<Value>) -> Self {
        Outcome {
            report: Report {
                ok: true,
                results,
                failures: Vec::new(),
            },
            exit_code: EXIT_OK,
        }
    }

    fn usage(check: &str, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Outcome {
            report: Report {
                ok: false,
                results: Vec::new(),
                failures: vec![Failure {
                    check: check.into(),
                    expected: expected.into(),
                    got: got.into(),
                }],
            },
            exit_code: EXIT_USAGE,
        }
    }

    /// Canonical single-line JSON.
    pub fn render(&self) -> String {
        serde_json::to_value(&self.report)
            .expect("reports serialize")
            .to_string()
    }
}

enum Fault {
    Schema(String),
    Domain(Error),
}

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        Fault::Domain(e)
    }
}

type Handled = std::result::Result<Value, Fault>;

fn parse<T: DeserializeOwned>(payload: &Value) -> std::result::Result<T, Fault> {
    serde_json::from_value(payload.clone()).map_err(|e| Fault::Schema(e.to_string()))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("domain types serialize")
}

fn ratio(r: Ratio<i64>) -> Value {
    json!([r.numer(), r.denom()])
}

fn surface(kind: Option<SurfaceKind>, defaults: &Defaults) -> SurfaceModel {
    SurfaceModel::new(
        kind.or(defaults.surface)
            .unwrap_or(SurfaceKind::K3WithSection),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticePayload {
    kind: Option<SurfaceKind>,
    class: DivisorClass,
    other: Option<DivisorClass>,
    c: Option<i64>,
}

fn lattice(payload: &Value, defaults: &Defaults) -> Handled {
    let p: LatticePayload = parse(payload)?;
    let s = surface(p.kind, defaults);
    let d = p.class;
    let mut out = json!({
        "surface": s,
        "class": d,
        "square": s.square(d),
        "genus": s.arithmetic_genus(d),
        "effective": s.is_effective_model(d),
        "nef": s.is_nef_model(d),
        "ample": s.is_ample_model(d),
        "linear_system": s.linear_system_dim(d).ok(),
    });
    if let Some(o) = p.other {
        out["intersection"] = json!(s.intersect(d, o));
    }
    if let Some(c) = p.c {
        out["walls"] = to_json(&s.wall_set(c)?.walls);
        out["find_suitable"] = to_json(&s.find_suitable(c)?);
        if s.is_ample_model(d) {
            out["suitable"] = to_json(&s.is_suitable(d, c)?);
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuitablePayload {
    kind: Option<SurfaceKind>,
    #[serde(alias = "L")]
    polarization: DivisorClass,
    c: i64,
}

fn suitable(payload: &Value, defaults: &Defaults) -> Handled {
    let p: SuitablePayload = parse(payload)?;
    let s = surface(p.kind, defaults);
    Ok(to_json(&s.is_suitable(p.polarization, p.c)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformPayload {
    kind: Option<SurfaceKind>,
    rank: i64,
    c1: DivisorClass,
    ch2_times_2: i64,
}

fn transform(payload: &Value, defaults: &Defaults) -> Handled {
    let p: TransformPayload = parse(payload)?;
    let s = surface(p.kind, defaults);
    let e = ChernTriple::new(p.rank, p.c1, p.ch2_times_2);
    let t = fm_transform_ch(&e, &s)?;
    Ok(json!({
        "input": e,
        "c2": e.c2(&s)?,
        "triple": t.triple,
        "wit_index": t.wit_index,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstructionPayload {
    kind: Option<SurfaceKind>,
    components: Vec<MarkedComponent>,
    /// Taken from the lattice when absent.
    incidence: Option<Vec<Vec<i64>>>,
    degrees: Vec<i64>,
    #[serde(default = "yes")]
    marked_points_valid: bool,
    #[serde(default = "yes")]
    nonzero_on_each_factor: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralPayload {
    family: Option<ProductFamily>,
    construction: Option<ConstructionPayload>,
    polarization: Option<DivisorClass>,
}

fn spectral(payload: &Value, defaults: &Defaults) -> Handled {
    let p: SpectralPayload = parse(payload)?;
    match (p.family, p.construction) {
        (Some(family), None) => {
            let div = spectral_divisor(&family)?;
            let t = fm_transform_ch(&family.chern_triple(), &SurfaceModel::ABELIAN)?;
            Ok(json!({
                "divisor": div,
                "class": div.class(),
                "regular": family.blocks.is_regular(),
                "transform": t,
            }))
        }
        (None, Some(c)) => {
            let s = surface(c.kind, defaults);
            let classes: Vec<_> = c.components.iter().map(|m| m.class).collect();
            let m = MarkedConstruction {
                surface: s,
                incidence: c
                    .incidence
                    .unwrap_or_else(|| incidence_matrix(&s, &classes)),
                components: c.components,
                degrees: c.degrees,
                marked_points_valid: c.marked_points_valid,
                nonzero_on_each_factor: c.nonzero_on_each_factor,
            };
            let model = construct_from_spectral(&m)?;
            let mut out = json!({
                "model": model,
                "genus": m.genus(),
                "chi": model.chi(),
            });
            if let Some(l) = p.polarization {
                let poly = model.hilbert_polynomial(l)?;
                out["hilbert"] = to_json(&poly);
                out["reduced_constant"] = ratio(poly.reduced_constant());
            }
            Ok(out)
        }
        _ => Err(Fault::Schema(
            "exactly one of `family` or `construction` is required".into(),
        )),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StabilityPayload {
    kind: Option<SurfaceKind>,
    components: Vec<SheafComponent>,
    incidence: Option<Vec<Vec<i64>>>,
    #[serde(default = "yes")]
    reduced: bool,
    polarization: DivisorClass,
}

fn stability(payload: &Value, defaults: &Defaults) -> Handled {
    let p: StabilityPayload = parse(payload)?;
    let s = surface(p.kind, defaults);
    let mut model = TorsionSheafModel::from_components(s, p.components);
    if let Some(inc) = p.incidence {
        model.incidence = inc;
    }
    model.reduced = p.reduced;
    let poly = model.hilbert_polynomial(p.polarization)?;
    let v = model.stability_verdict(p.polarization)?;
    let class = transform_classification(&v);
    let mut out = to_json(&v);
    out["hilbert"] = to_json(&poly);
    out["reduced_constant"] = ratio(poly.reduced_constant());
    out["transform_class"] = to_json(&class);
    out["description"] = json!(class.describe());
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DimensionsPayload {
    kind: Option<SurfaceKind>,
    r: i64,
    k: i64,
}

fn dimensions(payload: &Value, defaults: &Defaults) -> Handled {
    let p: DimensionsPayload = parse(payload)?;
    let m = ModuliDescriptor::new(surface(p.kind, defaults), p.r, p.k)?;
    Ok(to_json(&report(&m)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FibrePairPayload {
    rank: i64,
    fibre_degree: i64,
    #[serde(default = "forward")]
    direction: Direction,
}

fn forward() -> Direction {
    Direction::Forward
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct DualityPayload {
    nahm: Option<ChernTriple>,
    fibre_pair: Option<FibrePairPayload>,
}

fn duality(payload: &Value) -> Handled {
    let p: DualityPayload = if payload.is_null() {
        DualityPayload::default()
    } else {
        parse(payload)?
    };
    let report = verify_diagram_generators();
    let nahm = p.nahm.map(|e| mukai_nahm_ch(&e)).transpose()?;
    let pair = p
        .fibre_pair
        .map(|f| fibre_pair_transform(FibrePair::new(f.rank, f.fibre_degree), f.direction));
    Ok(json!({
        "diagram": report.checks,
        "matrix_consistent": report.matrix_consistent,
        "all_match": report.all_match(),
        "nahm": nahm,
        "fibre_pair": pair,
    }))
}

fn verify_all() -> Outcome {
    let results = verify::run_all();
    let failures: Vec<Failure> = results
        .iter()
        .flat_map(|r| {
            r.failures.iter().map(move |f| Failure {
                check: format!("criterion {}: {}", r.criterion, f.check),
                ..f.clone()
            })
        })
        .collect();
    let passed = results.iter().all(|r| r.passed);
    let summaries = results
        .iter()
        .map(|r| {
            json!({
                "criterion": r.criterion,
                "name": r.name,
                "passed": r.passed,
                "checks": r.checks,
                "failed": r.failed,
            })
        })
        .collect();
    Outcome {
        report: Report {
            ok: passed,
            results: summaries,
            failures,
        },
        exit_code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
    }
}

/// Dispatches one command.
pub fn run(command: &str, payload: &Value, defaults: &Defaults) -> Outcome {
    let handled = match command {
        "lattice" => lattice(payload, defaults),
        "suitable" => suitable(payload, defaults),
        "transform" => transform(payload, defaults),
        "spectral" => spectral(payload, defaults),
        "stability" => stability(payload, defaults),
        "dimensions" => dimensions(payload, defaults),
        "duality" => duality(payload),
        "verify" => {
            if !(payload.is_null() || payload.as_object().is_some_and(|o| o.is_empty())) {
                return Outcome::usage("schema", "empty payload", payload.to_string());
            }
            return verify_all();
        }
        other => {
            return Outcome::usage("command", format!("one of {}", COMMANDS.join(", ")), other);
        }
    };
    match handled {
        Ok(v) => Outcome::success(vec![v]),
        Err(Fault::Schema(msg)) => {
            Outcome::usage("schema", format!("valid `{command}` payload"), msg)
        }
        Err(Fault::Domain(e)) => {
            Outcome::usage("domain", format!("`{command}` precondition"), e.to_string())
        }
    }
}

/// Parses and runs one NDJSON line.
pub fn run_line(line: &str, defaults: &Defaults) -> Outcome {
    match serde_json::from_str::<Request>(line) {
        Ok(req) => run(&req.command, &req.payload, defaults),
        Err(e) => Outcome::usage(
            "request",
            "{\"command\": string, \"payload\": object}",
            e.to_string(),
        ),
    }
}

/// Runs every non-blank line, up to `jobs` at a time, and returns the
/// reports in input order with the worst exit code.
pub fn batch(input: &str, defaults: &Defaults, jobs: usize) -> (String, i32) {
    let lines: Vec<&str> = input.lines().filter(|l| !l.trim().is_empty()).collect();
    let jobs = jobs.clamp(1, lines.len().max(1));
    let chunk = lines.len().div_ceil(jobs).max(1);
    let outcomes: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = lines
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|l| run_line(l, defaults))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("request worker panicked"))
            .collect()
    });
    let mut out = String::new();
    let mut code = EXIT_OK;
    for o in &outcomes {
        out.push_str(&o.render());
        out.push('\n');
        code = code.max(o.exit_code);
    }
    (out, code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(line: &str) -> Outcome {
        run_line(line, &Defaults::default())
    }

    #[test]
    fn transform_example() {
        let o = one(
            r#"{"command":"transform","payload":{"rank":2,"c1":{"a":0,"b":0},"ch2_times_2":-6}}"#,
        );
        assert_eq!(o.exit_code, 0);
        assert_eq!(
            o.report.results[0]["triple"],
            json!({"rank": 0, "c1": {"a": 2, "b": 3}, "ch2_times_2": 0})
        );
    }

    #[test]
    fn suitable_example() {
        let o = one(r#"{"command":"suitable","payload":{"L":{"a":1,"b":3},"c":4,"kind":"k3"}}"#);
        assert_eq!(
            o.report.results[0],
            json!({"suitable": false, "wall": {"a": 2, "b": -2}})
        );
    }

    #[test]
    fn errors_exit_two() {
        assert_eq!(one(r#"{"command":"nope"}"#).exit_code, EXIT_USAGE);
        assert_eq!(one("{not json").exit_code, EXIT_USAGE);
        let o = one(r#"{"command":"suitable","payload":{"L":{"a":1,"b":3},"c":4,"extra":1}}"#);
        assert_eq!(o.report.failures[0].check, "schema");
        let o = one(r#"{"command":"dimensions","payload":{"r":1,"k":3}}"#);
        assert_eq!(o.report.failures[0].check, "domain");
        assert!(!o.report.ok);
    }

    #[test]
    fn surface_flag_is_a_default() {
        let line = r#"{"command":"dimensions","payload":{"r":2,"k":3}}"#;
        let ab = Defaults {
            surface: Some(SurfaceKind::AbelianProduct),
        };
        assert_eq!(
            run_line(line, &ab).report.results[0]["total_dim"],
            json!(14)
        );
        let explicit = r#"{"command":"dimensions","payload":{"r":2,"k":3,"kind":"k3"}}"#;
        assert_eq!(
            run_line(explicit, &ab).report.results[0]["total_dim"],
            json!(6)
        );
    }

    #[test]
    fn batch_order_and_isolation() {
        let input = "{\"command\":\"dimensions\",\"payload\":{\"r\":2,\"k\":3}}\n{oops\n\n{\"command\":\"duality\"}\n";
        let (out, code) = batch(input, &Defaults::default(), 3);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("{\"failures\":[],\"ok\":true"));
        assert!(lines[1].contains("\"ok\":false"));
        assert!(lines[2].contains("\"all_match\":true"));
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(batch("", &Defaults::default(), 4), (String::new(), 0));
    }

    #[test]
    fn sample_batch_is_clean() {
        let (out, code) = batch(SAMPLE_BATCH, &Defaults::default(), 2);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.lines().count(), 10);
    }
}
