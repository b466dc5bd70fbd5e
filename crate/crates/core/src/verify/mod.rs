//! Executes a schedule at random samples, cross-checks every node against
//! the coordinate oracle, and decides the claim.

mod degree;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::dim::Dim;
use crate::dsl::{Expr, HypothesisModel};
use crate::graph::{DerivationGraph, Schedule};
use crate::num::Scalar;
use crate::rules::{param_nodes, EvalError, Formula, OracleCache};
use crate::scene::{Evaluation, ParamAssignment, SampleRange, Sampler, Scene, SceneError};

pub use degree::{claim_degree, Deg, DegreeMap};

/// Draw stream for verification samples; stream 0 feeds the witness.
pub const VERIFY_STREAM: u64 = 1;
/// REFUTED needs a claim residual at least this many tolerances wide.
pub const REFUTE_FACTOR: f64 = 10.0;
/// Redraws allowed per sample slot after a numeric failure.
pub const REDRAW_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Proved,
    Refuted,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "PROVED",
            Status::Refuted => "REFUTED",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("no value for parameter node {0}")]
    MissingParam(String),
    #[error("step {node}: {source}")]
    NumericFailure { node: String, source: EvalError },
    #[error("step {node} has no hyperedge {group}")]
    UnknownEdge { node: String, group: u32 },
    #[error(transparent)]
    Scene(#[from] SceneError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig { samples: 100, seed: 42, tol: 1e-9 }
    }
}

#[derive(Debug, Clone)]
pub struct ClaimValue {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub residual: f64,
    /// Decided by exact comparison of squares.
    pub exact: bool,
}

impl ClaimValue {
    fn new(lhs: Scalar, rhs: Scalar) -> ClaimValue {
        let exact = lhs.exact_eq(&rhs).is_some();
        let residual = lhs.rel_diff(&rhs);
        ClaimValue { lhs, rhs, residual, exact }
    }
}

#[derive(Debug, Clone)]
pub struct SampleReport {
    pub assignment: ParamAssignment,
    pub node_values: IndexMap<Dim, Scalar>,
    pub oracle_values: IndexMap<Dim, Scalar>,
    pub max_node_residual: f64,
    pub worst_node: Option<Dim>,
    pub claims: Vec<ClaimValue>,
    pub claim_residual: f64,
    /// Redraws this slot needed after numeric failures.
    pub redraws: usize,
}

impl SampleReport {
    pub fn claim_exact(&self) -> bool {
        self.claims.iter().all(|c| c.exact)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certification {
    /// Radical-free claim agreeing exactly at every sample.
    SchwartzZippel { degree: u32, grid: u64, samples: usize, bound: f64 },
    /// Agreement within tolerance only.
    Numerical,
}

impl Certification {
    pub fn label(&self) -> String {
        match self {
            Certification::SchwartzZippel { degree, grid, samples, bound } => format!(
                "exact at {samples} samples; degree bound {degree} over a grid of {grid}, \
                 false-proof probability <= {bound:.3e}"
            ),
            Certification::Numerical => "numerically certified".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    pub samples: Vec<SampleReport>,
    pub reason: String,
    pub schedule: Option<Schedule>,
    pub certification: Option<Certification>,
}

impl Verdict {
    pub fn inconclusive(reason: impl Into<String>) -> Verdict {
        Verdict { status: Status::Inconclusive, samples: Vec::new(), reason: reason.into(), schedule: None, certification: None }
    }

    pub fn max_node_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.max_node_residual).fold(0.0, f64::max)
    }

    pub fn max_claim_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.claim_residual).fold(0.0, f64::max)
    }

    pub fn min_claim_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.claim_residual).fold(f64::INFINITY, f64::min)
    }

    /// Index of the sample with the largest claim residual, then node residual.
    pub fn worst_sample(&self) -> Option<usize> {
        let key = |s: &SampleReport| (s.claim_residual, s.max_node_residual);
        (0..self.samples.len()).reduce(|best, i| {
            if key(&self.samples[i]) > key(&self.samples[best]) {
                i
            } else {
                best
            }
        })
    }
}

/// Runs the schedule: parameter nodes take their assigned values, every
/// other step applies its chosen hyperedge.
pub fn execute_schedule(
    model: &HypothesisModel,
    g: &DerivationGraph,
    s: &Schedule,
    a: &ParamAssignment,
) -> Result<IndexMap<Dim, Scalar>, VerifyError> {
    let params = param_nodes(model);
    let mut values: IndexMap<Dim, Scalar> = IndexMap::new();
    for step in &s.steps {
        let v = match step.edge {
            None => {
                let name = params
                    .iter()
                    .find(|(_, d)| *d == step.node)
                    .map(|(n, _)| n)
                    .ok_or_else(|| VerifyError::MissingParam(step.node.to_string()))?;
                let r = a.get(name).ok_or_else(|| VerifyError::MissingParam(name.clone()))?;
                Scalar::from_rational(r.clone())
            }
            Some(group) => {
                let e = g
                    .edge(group)
                    .ok_or_else(|| VerifyError::UnknownEdge { node: step.node.to_string(), group })?;
                e.execute(&|d| values.get(d).cloned())
                    .map_err(|source| VerifyError::NumericFailure { node: step.node.to_string(), source })?
            }
        };
        values.insert(step.node.clone(), v);
    }
    Ok(values)
}

/// True iff every executed node matches the oracle within `tol`.
pub fn cross_check(report: &SampleReport, tol: f64) -> bool {
    report.max_node_residual <= tol
}

fn claim_from(model: &HypothesisModel, e: &Expr, values: &IndexMap<Dim, Scalar>) -> Result<Scalar, VerifyError> {
    let f = Formula::Expr { expr: e.clone(), params: param_nodes(model), abs: false };
    f.eval(&|d| values.get(d).cloned())
        .map_err(|source| VerifyError::NumericFailure { node: "claim".to_string(), source })
}

/// One full sample: execute, query the oracle, evaluate the claims from the
/// executed values.
pub fn sample_report(
    model: &HypothesisModel,
    g: &DerivationGraph,
    s: &Schedule,
    a: ParamAssignment,
    ev: &Evaluation,
) -> Result<SampleReport, VerifyError> {
    let node_values = execute_schedule(model, g, s, &a)?;
    let mut oracle = OracleCache::new(ev);
    let mut oracle_values = IndexMap::new();
    let mut max_node_residual = 0.0f64;
    let mut worst_node = None;
    for (d, v) in &node_values {
        let o = oracle.get(d)?;
        let r = v.rel_diff(&o);
        if r > max_node_residual || r.is_nan() {
            max_node_residual = if r.is_nan() { f64::INFINITY } else { r };
            worst_node = Some(d.clone());
        }
        oracle_values.insert(d.clone(), o);
    }
    let mut claims = Vec::new();
    for c in &model.claims {
        claims.push(ClaimValue::new(claim_from(model, &c.lhs, &node_values)?, claim_from(model, &c.rhs, &node_values)?));
    }
    let claim_residual = claims.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(SampleReport { assignment: a, node_values, oracle_values, max_node_residual, worst_node, claims, claim_residual, redraws: 0 })
}

/// Oracle-only report: claims evaluated from coordinates, no schedule.
pub fn oracle_report(scene: &Scene, a: ParamAssignment, ev: &Evaluation) -> Result<SampleReport, VerifyError> {
    let mut claims = Vec::new();
    for c in &scene.model().claims {
        claims.push(ClaimValue::new(scene.eval_expr(&c.lhs, &a, ev)?, scene.eval_expr(&c.rhs, &a, ev)?));
    }
    let claim_residual = claims.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(SampleReport {
        assignment: a,
        node_values: IndexMap::new(),
        oracle_values: IndexMap::new(),
        max_node_residual: 0.0,
        worst_node: None,
        claims,
        claim_residual,
        redraws: 0,
    })
}

fn collect(
    scene: &Scene,
    cfg: &VerifyConfig,
    range: &SampleRange,
    mut run: impl FnMut(ParamAssignment, &Evaluation) -> Result<SampleReport, VerifyError>,
) -> Result<Vec<SampleReport>, String> {
    let mut sampler = Sampler::new(cfg.seed, VERIFY_STREAM, range.clone());
    let mut out = Vec::with_capacity(cfg.samples);
    for slot in 0..cfg.samples {
        let mut last = None;
        let mut done = false;
        for redraws in 0..=REDRAW_CAP {
            let (a, ev) = sampler.draw(scene).map_err(|e| format!("degenerate model: {e}"))?;
            match run(a, &ev) {
                Ok(mut r) => {
                    r.redraws = redraws;
                    out.push(r);
                    done = true;
                    break;
                }
                Err(e @ VerifyError::NumericFailure { .. }) | Err(e @ VerifyError::Scene(_)) => last = Some(e),
                Err(e) => return Err(e.to_string()),
            }
        }
        if !done {
            let e = last.map(|e| e.to_string()).unwrap_or_default();
            return Err(format!("sample {}: numeric failure after {REDRAW_CAP} redraws: {e}", slot + 1));
        }
    }
    Ok(out)
}

fn decide(model: &HypothesisModel, range: &SampleRange, samples: Vec<SampleReport>, cfg: &VerifyConfig) -> Verdict {
    let tol = cfg.tol;
    let passes = |s: &SampleReport| cross_check(s, tol) && s.claim_residual <= tol;
    let refutes = |s: &SampleReport| cross_check(s, tol) && s.claim_residual >= REFUTE_FACTOR * tol;
    let (status, reason, certification) = if samples.iter().all(passes) {
        let exact = samples.iter().all(|s| s.claim_exact() && s.claim_residual == 0.0);
        let degree = model
            .claims
            .iter()
            .map(|c| claim_degree(model, &c.lhs, &c.rhs))
            .try_fold(0u32, |m, d| d.map(|d| m.max(d)));
        let cert = match degree {
            Some(degree) if exact => {
                let grid = range.grid_size();
                let bound = (degree as f64 / grid as f64).min(1.0).powi(samples.len() as i32);
                Certification::SchwartzZippel { degree, grid, samples: samples.len(), bound }
            }
            _ => Certification::Numerical,
        };
        (Status::Proved, format!("claim holds at all {} samples", samples.len()), Some(cert))
    } else if let Some(i) = samples.iter().position(refutes) {
        let r = samples[i].claim_residual;
        (Status::Refuted, format!("claim fails at sample {} with residual {r:.3e}", i + 1), None)
    } else {
        let i = samples.iter().position(|s| !passes(s)).expect("some sample fails");
        let s = &samples[i];
        let reason = if !cross_check(s, tol) {
            let node = s.worst_node.as_ref().map(|d| d.to_string()).unwrap_or_default();
            format!("sample {}: node {node} disagrees with the oracle by {:.3e}", i + 1, s.max_node_residual)
        } else {
            format!("sample {}: claim residual {:.3e} is between tolerance and refutation margin", i + 1, s.claim_residual)
        };
        (Status::Inconclusive, reason, None)
    };
    Verdict { status, samples, reason, schedule: None, certification }
}

/// Draws `cfg.samples` assignments, executes `s` at each, and decides.
pub fn verdict(
    model: &HypothesisModel,
    scene: &Scene,
    g: &DerivationGraph,
    s: &Schedule,
    cfg: &VerifyConfig,
    range: &SampleRange,
) -> Verdict {
    if cfg.samples == 0 {
        return Verdict::inconclusive("no samples requested");
    }
    match collect(scene, cfg, range, |a, ev| sample_report(model, g, s, a, ev)) {
        Ok(samples) => Verdict { schedule: Some(s.clone()), ..decide(model, range, samples, cfg) },
        Err(reason) => Verdict { schedule: Some(s.clone()), ..Verdict::inconclusive(reason) },
    }
}

/// Verdict from the coordinate oracle alone.
pub fn oracle_verdict(scene: &Scene, cfg: &VerifyConfig, range: &SampleRange) -> Verdict {
    if cfg.samples == 0 {
        return Verdict::inconclusive("no samples requested");
    }
    match collect(scene, cfg, range, |a, ev| oracle_report(scene, a, ev)) {
        Ok(samples) => decide(scene.model(), range, samples, cfg),
        Err(reason) => Verdict::inconclusive(reason),
    }
}
