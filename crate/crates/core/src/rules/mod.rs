//! Relation discovery. Each rule inspects the figure at a witness sample and
//! proposes hyperedges; candidates are then re-checked at fresh samples.

mod chain;
mod construction;
mod figure;
mod formula;
mod parallel;
mod pythagoras;
mod similar;
mod solve;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dim::Dim;
use crate::dsl::HypothesisModel;
use crate::num::Scalar;
use crate::scene::{oracle_dimension, Evaluation, Scene, SceneError, Witness};

pub use construction::param_nodes;
pub use figure::Figure;
pub use formula::{EvalError, Formula, LinearSolve, QuadraticSolve, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    SegmentChain,
    ParallelTransfer,
    SimilarTriangles,
    Pythagoras,
    DistanceFormula,
    RatioSolve,
    Construction,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::SegmentChain,
        Rule::ParallelTransfer,
        Rule::SimilarTriangles,
        Rule::Pythagoras,
        Rule::DistanceFormula,
        Rule::RatioSolve,
        Rule::Construction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::SegmentChain => "segment-chain",
            Rule::ParallelTransfer => "parallel-transfer",
            Rule::SimilarTriangles => "similar-triangles",
            Rule::Pythagoras => "pythagoras",
            Rule::DistanceFormula => "distance-formula",
            Rule::RatioSolve => "ratio-solve",
            Rule::Construction => "construction",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An AND-group of sources that determines `target` through `formula`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    pub sources: Vec<Dim>,
    pub target: Dim,
    pub rule: Rule,
    pub justification: String,
    pub formula: Formula,
    /// Assigned when the edge joins a graph; zero before that.
    pub group: u32,
}

impl Hyperedge {
    pub fn new(target: Dim, rule: Rule, justification: impl Into<String>, formula: Formula) -> Hyperedge {
        Hyperedge { sources: formula.sources(), target, rule, justification: justification.into(), formula, group: 0 }
    }

    /// Evaluates the formula given source values.
    pub fn execute(&self, value: &dyn Fn(&Dim) -> Option<Scalar>) -> Result<Scalar, formula::EvalError> {
        self.formula.eval(value)
    }

    fn key(&self) -> (Vec<Dim>, Dim, Rule) {
        (self.sources.clone(), self.target.clone(), self.rule)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_pairs: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { max_nodes: 512, max_edges: 4096, max_pairs: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CapExceeded {
    #[error("triangle-pair scan stopped at {limit} pairs")]
    TrianglePairs { limit: usize },
    #[error("graph stopped at {limit} nodes")]
    Nodes { limit: usize },
    #[error("graph stopped at {limit} hyperedges")]
    Edges { limit: usize },
}

#[derive(Debug, Clone, Default)]
pub struct Discovery {
    pub edges: Vec<Hyperedge>,
    pub caps: Vec<CapExceeded>,
    /// Candidates dropped because a confirmation sample contradicted them.
    pub rejected: usize,
}

/// Every rule's candidates at the primary witness.
pub fn candidates(model: &HypothesisModel, scene: &Scene, witness: &Witness, caps: &Caps) -> Discovery {
    let fig = Figure::new(scene, &witness.evaluation);
    let mut out = Discovery::default();
    out.edges.extend(chain::segment_chain(&fig));
    out.edges.extend(parallel::parallel_transfer(&fig));
    let (sim, report) = similar::similar_triangles(&fig, caps.max_pairs);
    out.caps.extend(report);
    let ratios = similar::ratio_targets(&sim);
    out.edges.extend(sim);
    out.edges.extend(pythagoras::pythagoras(&fig));
    out.edges.extend(pythagoras::distance_formula(&fig));
    out.edges.extend(solve::ratio_solve(&fig, &ratios));
    out.edges.extend(construction::construction(model, scene));
    out
}

/// All rule outputs that survive confirmation, deduplicated and sorted by
/// rule priority, then target, then sources.
pub fn discover(model: &HypothesisModel, scene: &Scene, witness: &Witness, caps: &Caps) -> Discovery {
    let Discovery { edges, caps: reports, .. } = candidates(model, scene, witness, caps);
    let mut seen = HashSet::new();
    let mut unique: Vec<Hyperedge> = edges
        .into_iter()
        .filter(|e| !e.sources.contains(&e.target) && seen.insert(e.key()))
        .collect();
    unique.sort_by(|a, b| {
        (a.rule, &a.target, &a.sources).cmp(&(b.rule, &b.target, &b.sources))
    });

    let mut checks: Vec<OracleCache> = witness.confirmations.iter().map(OracleCache::new).collect();
    let before = unique.len();
    unique.retain(|e| checks.iter_mut().all(|c| c.confirms(e)));
    let mut probes: Vec<OracleCache> = witness.probes.iter().map(OracleCache::new).collect();
    unique.retain(|e| !e.formula.is_regional() || probes.iter_mut().all(|c| c.confirms(e)));
    Discovery { rejected: before - unique.len(), edges: unique, caps: reports }
}

/// Memoized oracle values for one evaluation.
pub struct OracleCache<'a> {
    ev: &'a Evaluation,
    values: BTreeMap<Dim, Option<Scalar>>,
}

impl<'a> OracleCache<'a> {
    pub fn new(ev: &'a Evaluation) -> OracleCache<'a> {
        OracleCache { ev, values: BTreeMap::new() }
    }

    pub fn get(&mut self, d: &Dim) -> Result<Scalar, SceneError> {
        if let Some(v) = self.values.get(d) {
            return v.clone().ok_or(SceneError::Num(crate::num::NumError::DivisionByZero));
        }
        let v = oracle_dimension(self.ev, d);
        self.values.insert(d.clone(), v.as_ref().ok().cloned());
        v
    }

    /// True if the edge reproduces the oracle value of its target.
    pub fn confirms(&mut self, e: &Hyperedge) -> bool {
        let Ok(expected) = self.get(&e.target) else { return false };
        let mut vals = BTreeMap::new();
        for s in &e.sources {
            match self.get(s) {
                Ok(v) => {
                    vals.insert(s.clone(), v);
                }
                Err(_) => return false,
            }
        }
        match e.execute(&|d| vals.get(d).cloned()) {
            Ok(got) => got.rel_diff(&expected) <= CONFIRM_TOL,
            Err(_) => false,
        }
    }
}

const CONFIRM_TOL: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load;
    use crate::scene::{build_scene, SampleRange};

    pub(crate) const PARALLELOGRAM: &str = include_str!("../../../../fixtures/parallelogram.gthm");
    pub(crate) const IMO: &str = include_str!("../../../../fixtures/imo2012.gthm");

    pub(crate) fn discover_fixture(text: &str) -> Discovery {
        let model = load(text).unwrap();
        let scene = build_scene(&model).unwrap();
        let w = Witness::draw(&scene, 42, &SampleRange::default()).unwrap();
        discover(&model, &scene, &w, &Caps::default())
    }

    fn has(d: &Discovery, rule: Rule, sources: &[&str], target: &str) -> bool {
        let mut src: Vec<Dim> = sources.iter().map(|s| Dim::parse(s).unwrap()).collect();
        src.sort();
        let t = Dim::parse(target).unwrap();
        d.edges.iter().any(|e| e.rule == rule && e.target == t && e.sources == src)
    }

    #[test]
    fn parallelogram_edges() {
        let d = discover_fixture(PARALLELOGRAM);
        assert!(has(&d, Rule::SegmentChain, &["OA", "OE"], "AE"));
        assert!(has(&d, Rule::SegmentChain, &["OA", "AG"], "OG"));
        assert!(has(&d, Rule::ParallelTransfer, &["BE"], "CG"));
        assert!(has(&d, Rule::ParallelTransfer, &["CG"], "BE"));
        assert!(has(&d, Rule::SimilarTriangles, &["BE/OE"], "CG/AG"));
        assert!(has(&d, Rule::SimilarTriangles, &["CG/AG", "CG"], "AG"));
        assert!(has(&d, Rule::SimilarTriangles, &["CG/OG"], "DF/OF"));
        assert!(has(&d, Rule::SimilarTriangles, &["AE/BE"], "AF/DF"));
        assert!(has(&d, Rule::Pythagoras, &["OF", "DF"], "OD"));
        assert!(has(&d, Rule::DistanceFormula, &["OG", "OF", "CG", "DF"], "CD"));
        assert!(has(&d, Rule::RatioSolve, &["AF/DF"], "(OA-OF)/DF"));
        assert!(has(&d, Rule::RatioSolve, &["DF/OF", "(OA-OF)/DF", "OA"], "DF"));
        assert!(has(&d, Rule::RatioSolve, &["DF/OF", "(OA-OF)/DF", "OA"], "OF"));
    }

    #[test]
    fn imo_edges() {
        let d = discover_fixture(IMO);
        assert!(has(&d, Rule::Pythagoras, &["AD", "CD"], "AC"));
        assert!(has(&d, Rule::Pythagoras, &["AD", "DX"], "AX"));
        assert!(has(&d, Rule::Pythagoras, &["BD", "DX"], "BX"));
        assert!(has(&d, Rule::Construction, &["BC"], "BK"));
        assert!(has(&d, Rule::Construction, &["AC"], "AL"));
        assert!(has(&d, Rule::RatioSolve, &["KN/AN", "AB", "BK"], "AN"));
        assert!(has(&d, Rule::DistanceFormula, &["AR", "AN", "KN", "MR"], "KM"));
        assert!(!d.edges.iter().any(|e| e.rule == Rule::ParallelTransfer));
    }

    #[test]
    fn output_is_sorted_and_unique() {
        let d = discover_fixture(PARALLELOGRAM);
        let keys: Vec<_> = d.edges.iter().map(|e| e.key()).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| (a.2, &a.1, &a.0).cmp(&(b.2, &b.1, &b.0)));
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn frame_only_model() {
        let d = discover_fixture("param x\npoint O = origin\npoint A = baseline(O, x)\nclaim len(O,A) = x\n");
        assert!(d.edges.is_empty());
    }
}
