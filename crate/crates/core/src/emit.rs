//! Proof script, JSON and DOT renderings of a run.

use std::fmt::Write;

use indexmap::IndexMap;
use serde::Serialize;

use crate::dim::Dim;
use crate::dsl::{BinOp, Expr};
use crate::graph::{to_dot, Step};
use crate::num::rational_to_string;
use crate::pipeline::Run;
use crate::rules::{param_nodes, Rule};
use crate::verify::{Certification, SampleReport, Status};

/// Lines the text rendering adds around the steps: three header lines and
/// the final check.
pub const FRAME_LINES: usize = 4;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(..) => 2,
        Expr::Neg(_) => 3,
        _ => 4,
    }
}

/// A claim side written with segment names, `len(O,D)` as `OD`.
pub fn expr_text(e: &Expr) -> String {
    let wrap = |inner: &Expr, min: u8| {
        let s = expr_text(inner);
        if prec(inner) < min {
            format!("({s})")
        } else {
            s
        }
    };
    match e {
        Expr::Num(n) => rational_to_string(n),
        Expr::Param(p) => p.name.clone(),
        Expr::Len(a, b) => {
            if a.name.chars().count() == 1 && b.name.chars().count() == 1 {
                format!("{}{}", a.name, b.name)
            } else {
                format!("len({},{})", a.name, b.name)
            }
        }
        Expr::Neg(inner) => format!("-{}", wrap(inner, 3)),
        Expr::Bin(op, l, r) => {
            let (sym, p) = match op {
                BinOp::Add => ("+", 1),
                BinOp::Sub => ("-", 1),
                BinOp::Mul => ("*", 2),
                BinOp::Div => ("/", 2),
            };
            format!("{} {sym} {}", wrap(l, p), wrap(r, p + 1))
        }
    }
}

fn claim_text(run: &Run) -> String {
    run.model
        .claims
        .iter()
        .map(|c| format!("{} = {}", expr_text(&c.lhs), expr_text(&c.rhs)))
        .collect::<Vec<_>>()
        .join(" and ")
}

fn params_text(run: &Run) -> String {
    let nodes = param_nodes(&run.model);
    run.model
        .params
        .iter()
        .map(|p| match nodes.iter().find(|(n, _)| n == p) {
            Some((_, d)) => format!("{d} = {p}"),
            None => p.clone(),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

struct StepView {
    node: Dim,
    rule: Option<Rule>,
    group: Option<u32>,
    sources: Vec<Dim>,
    justification: String,
}

fn step_view(run: &Run, step: &Step) -> StepView {
    let edge = step.edge.and_then(|l| run.growth.as_ref()?.graph.edge(l));
    match edge {
        Some(e) => StepView {
            node: step.node.clone(),
            rule: Some(e.rule),
            group: Some(e.group),
            sources: e.sources.clone(),
            justification: e.justification.clone(),
        },
        None => {
            let param = param_nodes(&run.model).into_iter().find(|(_, d)| *d == step.node).map(|(p, _)| p);
            StepView {
                node: step.node.clone(),
                rule: None,
                group: None,
                sources: Vec::new(),
                justification: format!("parameter {}", param.unwrap_or_default()),
            }
        }
    }
}

fn steps(run: &Run) -> Vec<StepView> {
    run.proof.iter().flat_map(|p| p.steps.iter()).map(|s| step_view(run, s)).collect()
}

fn join_dims(ds: &[Dim]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
}

fn footer_detail(run: &Run) -> String {
    let v = &run.verdict;
    match (&v.status, &v.certification) {
        (Status::Proved, Some(c)) => format!("{}; {}", v.reason, c.label()),
        _ => v.reason.clone(),
    }
}

/// The numbered proof script.
pub fn render_text(run: &Run) -> String {
    let mut out = String::new();
    writeln!(out, "Theorem: {}", run.name).unwrap();
    writeln!(out, "Claim: {}", claim_text(run)).unwrap();
    writeln!(out, "Parameters: {}", params_text(run)).unwrap();
    let steps = steps(run);
    if steps.is_empty() && run.verdict.status == Status::Inconclusive {
        writeln!(out, "{}: {}", run.verdict.status, run.verdict.reason).unwrap();
        return out;
    }
    for (i, s) in steps.iter().enumerate() {
        match s.rule {
            Some(rule) => writeln!(
                out,
                "{}. Find {} (rule: {rule}, using {{{}}}): {}",
                i + 1,
                s.node,
                join_dims(&s.sources),
                s.justification
            ),
            None => writeln!(out, "{}. Take {} as {}", i + 1, s.node, s.justification),
        }
        .unwrap();
    }
    writeln!(out, "Check whether {}: {} ({})", claim_text(run), run.verdict.status, footer_detail(run)).unwrap();
    out
}

#[derive(Serialize)]
struct JsonStep {
    index: usize,
    node: String,
    rule: Option<Rule>,
    group: Option<u32>,
    sources: Vec<String>,
    justification: String,
}

#[derive(Serialize)]
struct JsonParam {
    param: String,
    node: Option<String>,
}

#[derive(Serialize)]
struct JsonSample {
    index: usize,
    assignment: IndexMap<String, String>,
    claim_residual: f64,
    max_node_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    worst_node: Option<String>,
    lhs: Vec<String>,
    rhs: Vec<String>,
    exact: bool,
    redraws: usize,
}

#[derive(Serialize)]
struct JsonSamples {
    count: usize,
    max_node_residual: f64,
    max_claim_residual: f64,
    min_claim_residual: Option<f64>,
    worst: Option<JsonSample>,
    per_sample: Vec<JsonSample>,
}

#[derive(Serialize)]
struct JsonRun<'a> {
    theorem: &'a str,
    claim: String,
    status: Status,
    reason: &'a str,
    certification: Option<&'a Certification>,
    parameters: Vec<JsonParam>,
    schedule_nodes: usize,
    steps: Vec<JsonStep>,
    samples: JsonSamples,
}

fn json_sample(i: usize, s: &SampleReport) -> JsonSample {
    JsonSample {
        index: i + 1,
        assignment: s.assignment.iter().map(|(k, v)| (k.clone(), rational_to_string(v))).collect(),
        claim_residual: s.claim_residual,
        max_node_residual: s.max_node_residual,
        worst_node: s.worst_node.as_ref().map(|d| d.to_string()),
        lhs: s.claims.iter().map(|c| c.lhs.to_string()).collect(),
        rhs: s.claims.iter().map(|c| c.rhs.to_string()).collect(),
        exact: s.claim_exact(),
        redraws: s.redraws,
    }
}

/// Pretty JSON with a fixed field order.
pub fn render_json(run: &Run) -> String {
    let v = &run.verdict;
    let nodes = param_nodes(&run.model);
    let doc = JsonRun {
        theorem: &run.name,
        claim: claim_text(run),
        status: v.status,
        reason: &v.reason,
        certification: v.certification.as_ref(),
        parameters: run
            .model
            .params
            .iter()
            .map(|p| JsonParam {
                param: p.clone(),
                node: nodes.iter().find(|(n, _)| n == p).map(|(_, d)| d.to_string()),
            })
            .collect(),
        schedule_nodes: run.schedule.as_ref().map_or(0, |s| s.len()),
        steps: steps(run)
            .into_iter()
            .enumerate()
            .map(|(i, s)| JsonStep {
                index: i + 1,
                node: s.node.to_string(),
                rule: s.rule,
                group: s.group,
                sources: s.sources.iter().map(|d| d.to_string()).collect(),
                justification: s.justification,
            })
            .collect(),
        samples: JsonSamples {
            count: v.samples.len(),
            max_node_residual: v.max_node_residual(),
            max_claim_residual: v.max_claim_residual(),
            min_claim_residual: (!v.samples.is_empty()).then(|| v.min_claim_residual()),
            worst: v.worst_sample().map(|i| json_sample(i, &v.samples[i])),
            per_sample: v.samples.iter().enumerate().map(|(i, s)| json_sample(i, s)).collect(),
        },
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("run serializes");
    out.push('\n');
    out
}

/// The grown graph annotated with the proof order, or `None` when nothing
/// was grown.
pub fn render_dot(run: &Run) -> Option<String> {
    let g = &run.growth.as_ref()?.graph;
    Some(to_dot(g, run.proof.as_ref()))
}
