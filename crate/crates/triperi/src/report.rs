//! Report documents and their JSON and text renderings.
//!
//! Numbers are strings: `num/den` (or an integer) in exact mode, the
//! shortest round-trip decimal in float mode. Points are rendered by label.
//! The text form is derived from the same JSON value, one `key: value` line
//! per leaf, so both renderings carry identical numbers.

use serde::Serialize;
use serde_json::Value;
use triperi_core::{AnalysisReport, AxiomReport, MetricSpace, PointRef, Scalar, SolveResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument<R: Serialize> {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub result: R,
}

impl<R: Serialize> ReportDocument<R> {
    pub fn new(command: &'static str, inputs: Vec<String>, result: R) -> Self {
        ReportDocument {
            command,
            inputs,
            result,
        }
    }

    pub fn render(&self, format: Format) -> String {
        let value = serde_json::to_value(self).expect("report documents serialize");
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                flatten_text(&mut out, "", &value);
                out
            }
        }
    }
}

fn flatten_text(out: &mut String, prefix: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_text(out, &key, v);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten_text(out, &format!("{prefix}[{i}]"), v);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(leaf).collect();
            out.push_str(&format!("{prefix}: [{}]\n", parts.join(", ")));
        }
        other => out.push_str(&format!("{prefix}: {}\n", leaf(other))),
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::Null => "none".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn num(s: &Scalar) -> String {
    s.to_string()
}

fn labels<S: MetricSpace + ?Sized>(space: &S, points: impl IntoIterator<Item = PointRef>) -> Vec<String> {
    points.into_iter().map(|p| space.label(p)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyResult {
    pub status: &'static str,
    pub points_checked: usize,
    pub violation: Option<String>,
    pub witness: Option<Vec<String>>,
}

impl VerifyResult {
    pub fn new<S: MetricSpace + ?Sized>(space: &S, report: &AxiomReport) -> Self {
        VerifyResult {
            status: if report.passed() { "pass" } else { "fail" },
            points_checked: report.points_checked,
            violation: report.violation.as_ref().map(|v| v.kind_name().to_string()),
            witness: report.violation.as_ref().map(|v| labels(space, v.points())),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyResult {
    pub status: &'static str,
    pub mode: String,
    pub window: Option<usize>,
    pub points_examined: usize,
    pub alpha_star: String,
    pub alpha_witness: Vec<String>,
    pub is_perimeter_contracting: bool,
    pub lipschitz: String,
    pub lipschitz_witness: Vec<String>,
    pub is_contraction: bool,
    pub condition_i_witness: Option<String>,
    pub fixed_points: Vec<String>,
    pub fixed_point_count: usize,
}

impl ClassifyResult {
    pub fn new<S: MetricSpace + ?Sized>(space: &S, r: &AnalysisReport) -> Self {
        let status = if !r.is_perimeter_contracting {
            "not-perimeter-contracting"
        } else if r.condition_i_witness.is_some() {
            "condition-i-violation-detected"
        } else {
            "perimeter-contracting"
        };
        ClassifyResult {
            status,
            mode: space.mode().to_string(),
            window: r.window,
            points_examined: r.points_examined,
            alpha_star: num(&r.alpha_star),
            alpha_witness: labels(space, r.alpha_witness.points()),
            is_perimeter_contracting: r.is_perimeter_contracting,
            lipschitz: num(&r.lipschitz),
            lipschitz_witness: labels(space, [r.lipschitz_witness.0, r.lipschitz_witness.1]),
            is_contraction: r.is_contraction,
            condition_i_witness: r.condition_i_witness.map(|p| space.label(p)),
            fixed_points: labels(space, r.fixed_points.iter().copied()),
            fixed_point_count: r.fixed_point_count(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub status: &'static str,
    pub mode: String,
    pub point: String,
    pub iterations: usize,
    pub final_gap: String,
    pub alpha: String,
    pub p0: Option<String>,
    pub final_bound: Option<String>,
    pub condition_i_witness: Option<String>,
    pub iterates: Vec<String>,
    /// Entry `k - 1` bounds `d(x_k, fixed point)`.
    pub bound_trace: Option<Vec<String>>,
}

impl SolveReport {
    pub fn new<S: MetricSpace + ?Sized>(space: &S, r: &SolveResult) -> Self {
        SolveReport {
            status: r.status.as_str(),
            mode: space.mode().to_string(),
            point: space.label(r.point),
            iterations: r.iterations,
            final_gap: num(&r.final_gap),
            alpha: num(&r.alpha_used),
            p0: r.p0.as_ref().map(num),
            final_bound: r.final_bound().map(num),
            condition_i_witness: r.condition_i_witness.map(|p| space.label(p)),
            iterates: labels(space, r.iterates.iter().copied()),
            bound_trace: r.bound_trace.as_ref().map(|t| t.iter().map(num).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StarRow {
    pub i: usize,
    pub parity: &'static str,
    pub ratio: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Maximum {
    pub value: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperTable {
    pub status: &'static str,
    pub mode: String,
    pub window: usize,
    pub scale: String,
    pub star_rows: Vec<StarRow>,
    pub finite_max: Maximum,
    pub alpha_star: Maximum,
    pub certified_bound: String,
    pub triples_examined: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        a: String,
        list: Vec<String>,
        none: Option<String>,
        rows: Vec<StarRow>,
    }

    #[test]
    fn text_mirrors_json() {
        let doc = ReportDocument::new(
            "demo",
            vec!["in.fms".into()],
            Sample {
                a: "3/4".into(),
                list: vec!["x".into(), "y".into()],
                none: None,
                rows: vec![StarRow {
                    i: 0,
                    parity: "even",
                    ratio: "3/4".into(),
                }],
            },
        );
        assert_eq!(
            doc.render(Format::Text),
            "command: demo\ninputs: [in.fms]\nresult.a: 3/4\nresult.list: [x, y]\nresult.none: none\n\
             result.rows[0].i: 0\nresult.rows[0].parity: even\nresult.rows[0].ratio: 3/4\n"
        );
        let json = doc.render(Format::Json);
        assert!(json.starts_with("{\n  \"command\": \"demo\",\n  \"inputs\""));
        assert!(json.ends_with("}\n"));
        assert_eq!(json, doc.render(Format::Json));
    }
}
