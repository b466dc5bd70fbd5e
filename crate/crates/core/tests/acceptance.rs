//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::cell::Cell;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use dimgraph::dim::{Dim, DimKind};
use dimgraph::emit::{render_dot, render_json, render_text};
use dimgraph::graph::{topo_order, DerivationGraph, GrowStatus};
use dimgraph::num::Scalar;
use dimgraph::pipeline::{self, Run, RunConfig};
use dimgraph::scene::{rational, Evaluation, SampleRange, Sampler};
use dimgraph::verify::{execute_schedule, Status};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

const TOL: f64 = 1e-9;

const PARALLELOGRAM_ORDER: [&str; 15] =
    ["OA", "OE", "BE", "CG/AG", "CG", "AE", "AF/DF", "AG", "OG", "(OA-OF)/DF", "DF/OF", "DF", "OF", "CD", "OD"];

const IMO_NODES: [&str; 14] = ["AC", "BD", "BC", "AX", "BX", "KN", "AN", "LS", "AS", "BN", "MR", "AR", "KM", "ML"];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn text(name: &str) -> &'static str {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).unwrap()
}

struct Runs(BTreeMap<&'static str, Run>);

impl Runs {
    fn get(&mut self, name: &'static str) -> &Run {
        self.0.entry(name).or_insert_with(|| pipeline::prove(name, text(name), &RunConfig::default()).unwrap())
    }
}

fn graph(run: &Run) -> &DerivationGraph {
    &run.growth.as_ref().expect("grown").graph
}

fn proved_with_nodes(run: &Run, wanted: &[&str]) -> Result<usize, String> {
    ensure(run.verdict.status == Status::Proved, || format!("{}: {}", run.verdict.status, run.verdict.reason))?;
    let schedule = run.schedule.as_ref().ok_or("no schedule")?;
    schedule.validate(graph(run)).map_err(|e| format!("schedule: {e}"))?;
    run.proof.as_ref().unwrap().validate(graph(run)).map_err(|e| format!("proof: {e}"))?;
    let missing: Vec<&str> = wanted.iter().copied().filter(|n| !schedule.covers(&Dim::parse(n).unwrap())).collect();
    ensure(missing.is_empty(), || format!("unscheduled: {missing:?}"))?;
    Ok(schedule.len())
}

fn c1(runs: &mut Runs) -> Outcome {
    let run = runs.get("parallelogram");
    let n = proved_with_nodes(run, &PARALLELOGRAM_ORDER)?;
    let samples = &run.verdict.samples;
    ensure(samples.len() == 100, || format!("{} samples", samples.len()))?;
    let inexact = samples.iter().filter(|s| !(s.claim_exact() && s.claim_residual == 0.0)).count();
    ensure(inexact == 0, || format!("{inexact} samples without an exact zero residual"))?;
    Ok(format!("{n} scheduled nodes, claim residual exactly 0 at 100 samples"))
}

fn c2(runs: &mut Runs) -> Outcome {
    let run = runs.get("parallelogram_bd");
    let n = proved_with_nodes(run, &[])?;
    Ok(format!("{n} scheduled nodes, max claim residual {:e}", run.verdict.max_claim_residual()))
}

fn c3(runs: &mut Runs) -> Outcome {
    let run = runs.get("imo2012");
    let n = proved_with_nodes(run, &IMO_NODES)?;
    ensure(run.verdict.samples.len() == 100, || "sample count".into())?;
    Ok(format!("{n} scheduled nodes, max claim residual {:e}", run.verdict.max_claim_residual()))
}

fn c4(runs: &mut Runs) -> Outcome {
    let run = runs.get("parallelogram_bad");
    ensure(run.verdict.status == Status::Refuted, || format!("{}: {}", run.verdict.status, run.verdict.reason))?;
    let low = run.verdict.samples.iter().filter(|s| s.claim_residual < 10.0 * TOL).count();
    ensure(low == 0, || format!("{low} samples below 10*tol"))?;
    Ok(format!("min claim residual {:e} over {} samples", run.verdict.min_claim_residual(), run.verdict.samples.len()))
}

fn c5(_: &mut Runs) -> Outcome {
    let run = pipeline::prove("unreachable", UNREACHABLE, &RunConfig::default()).unwrap();
    let status = &run.growth.as_ref().ok_or("no growth")?.status;
    ensure(matches!(status, GrowStatus::Disconnected { .. }), || format!("{status:?}"))?;
    ensure(run.schedule.is_none() && run.verdict.status == Status::Inconclusive, || format!("{}", run.verdict.status))?;
    Ok(run.verdict.reason.clone())
}

/// Floating-point value of `d` straight from the coordinates.
fn coordinate_value(ev: &Evaluation, d: &Dim) -> f64 {
    let point = |n: &str| {
        let c = ev.point(n).unwrap();
        (c.x.to_f64(), c.y.to_f64())
    };
    let dist = |s: &dimgraph::dim::Seg| {
        let (a, b) = s.ends();
        let ((ax, ay), (bx, by)) = (point(a), point(b));
        (ax - bx).hypot(ay - by)
    };
    match d {
        Dim::Length(s) => dist(s),
        Dim::Composite(f) => f.terms().iter().map(|(c, s)| *c as f64 * dist(s)).sum(),
        Dim::Ratio(n, m) => coordinate_value(ev, n) / coordinate_value(ev, m),
    }
}

fn c6(runs: &mut Runs) -> Outcome {
    let mut notes = Vec::new();
    for name in ["parallelogram", "imo2012"] {
        let run = runs.get(name);
        let (mut worst, mut exact, mut checked) = (0f64, 0usize, 0usize);
        for s in &run.verdict.samples {
            let ev = run.scene.evaluate(&s.assignment).map_err(|e| e.to_string())?;
            for (d, v) in &s.node_values {
                let want = coordinate_value(&ev, d);
                let rel = (v.to_f64() - want).abs() / v.to_f64().abs().max(want.abs());
                worst = worst.max(rel);
                checked += 1;
                let oracle = &s.oracle_values[d];
                if oracle.as_rational().is_some() {
                    exact += 1;
                    let same = v.exact_eq(oracle) == Some(true);
                    ensure(same, || format!("{name}: radical-free {d} = {v}, oracle {oracle}"))?;
                }
            }
        }
        ensure(worst <= TOL, || format!("{name}: relative error {worst:e}"))?;
        notes.push(format!("{name} max rel {worst:.1e} over {checked} values, {exact} exactly equal"));
    }
    Ok(notes.join("; "))
}

fn c7(_: &mut Runs) -> Outcome {
    let config = Config { cases: 1000, failure_persistence: None, ..Config::default() };
    let rng = || TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(config.clone(), rng());
    let (present, absent) = (Cell::new(0usize), Cell::new(0usize));
    runner
        .run(&spec(30, 20), |s| {
            let g = s.build();
            let exists = brute_force_exists(&s);
            match topo_order(&g) {
                Some(order) => {
                    order.validate(&g).map_err(|e| TestCaseError::fail(e.to_string()))?;
                    let goals: Vec<Dim> = g.goals().cloned().collect();
                    order.restrict(&g, goals.iter()).validate(&g).map_err(|e| TestCaseError::fail(e.to_string()))?;
                    if !exists {
                        return Err(TestCaseError::fail("order found where brute force has none"));
                    }
                    present.set(present.get() + 1);
                }
                None if exists => return Err(TestCaseError::fail("absent where brute force finds an order")),
                None => absent.set(absent.get() + 1),
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let mut runner = TestRunner::new_with_rng(config, rng());
    let digraph = (2usize..=30, proptest::collection::vec(0usize..30, 30));
    runner
        .run(&digraph, |(n, picks)| {
            let params = [0usize];
            let parent: Vec<Option<usize>> = (0..n).map(|i| if i == 0 { None } else { Some(picks[i] % n).filter(|&p| p != i) }).collect();
            let mut g = DerivationGraph::new();
            g.add_param(node(0));
            for i in 1..n {
                g.add_node(node(i));
            }
            g.add_goal(node(0));
            for (i, p) in parent.iter().enumerate() {
                if let Some(p) = p {
                    g.add_edge(edge(&[*p], i)).unwrap();
                }
            }
            let got: Vec<Dim> = topo_order(&g).unwrap().nodes().cloned().collect();
            let want: Vec<Dim> = textbook_kahn(n, &params, &parent).into_iter().map(node).collect();
            if got != want {
                return Err(TestCaseError::fail(format!("{got:?} != {want:?}")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("1000 hypergraphs ({} schedulable, {} absent) and 1000 digraphs", present.get(), absent.get()))
}

fn c8(runs: &mut Runs) -> Outcome {
    let mut checked = 0usize;
    for name in ["parallelogram", "imo2012"] {
        let run = runs.get(name);
        let (g, s) = (graph(run), run.schedule.as_ref().unwrap());
        let mut sampler = Sampler::new(7, 3, SampleRange::default());
        for i in 0..20 {
            let (a, _) = sampler.draw(&run.scene).map_err(|e| e.to_string())?;
            let k = rational(2 * i + 3, i + 2);
            let base = execute_schedule(&run.model, g, s, &a).map_err(|e| e.to_string())?;
            let scaled = execute_schedule(&run.model, g, s, &a.scaled(&k)).map_err(|e| e.to_string())?;
            let kf = Scalar::from_rational(k.clone());
            for (d, v) in &base {
                let want = if d.kind() == DimKind::Ratio { v.clone() } else { v.mul(&kf) };
                let rel = scaled[d].rel_diff(&want);
                ensure(rel <= 1e-12, || format!("{name} {d}: {rel:e} at k = {k}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} node values over 20 samples"))
}

fn renders(run: &Run) -> [String; 3] {
    [render_text(run), render_json(run), render_dot(run).unwrap_or_default()]
}

fn c9(runs: &mut Runs) -> Outcome {
    for (name, body) in FIXTURES {
        let first = renders(runs.get(name));
        let again = renders(&pipeline::prove(name, body, &RunConfig::default()).unwrap());
        for (kind, (a, b)) in ["text", "json", "dot"].iter().zip(first.iter().zip(&again)) {
            ensure(a == b, || format!("{name}: {kind} differs"))?;
        }
    }
    Ok(format!("{} fixtures, text, JSON and DOT identical", FIXTURES.len()))
}

fn main() {
    let criteria: [(&str, fn(&mut Runs) -> Outcome); 9] = [
        ("parallelogram OD = CD proved", c1),
        ("parallelogram BD = AD proved", c2),
        ("imo2012 proved", c3),
        ("parallelogram_bad refuted", c4),
        ("unreachable goal is inconclusive", c5),
        ("executed nodes match the oracle", c6),
        ("scheduler properties", c7),
        ("homogeneity", c8),
        ("determinism", c9),
    ];
    let mut runs = Runs(BTreeMap::new());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(|| f(&mut runs))).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
