//! End-to-end runs: load, build the scene, grow, schedule, verify.

use thiserror::Error;

use crate::dsl::{load, DslError, HypothesisModel};
use crate::graph::{grow, topo_order, GrowStatus, Growth, Schedule};
use crate::rules::Caps;
use crate::scene::{build_scene, SampleRange, Scene, SceneError, Witness};
use crate::verify::{oracle_verdict, verdict, Verdict, VerifyConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub caps: Caps,
    pub range: SampleRange,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig { seed: 42, samples: 100, tol: 1e-9, caps: Caps::default(), range: SampleRange::default() }
    }
}

impl RunConfig {
    pub fn verify(&self) -> VerifyConfig {
        VerifyConfig { samples: self.samples, seed: self.seed, tol: self.tol }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

#[derive(Debug, Clone)]
pub struct Run {
    pub name: String,
    pub model: HypothesisModel,
    pub scene: Scene,
    /// Absent when no witness could be drawn.
    pub growth: Option<Growth>,
    /// Every derivable node, as executed and cross-checked.
    pub schedule: Option<Schedule>,
    /// The part of `schedule` the goals depend on.
    pub proof: Option<Schedule>,
    pub verdict: Verdict,
}

/// Parses, validates and builds the scene.
pub fn prepare(text: &str) -> Result<(HypothesisModel, Scene), RunError> {
    let model = load(text)?;
    let scene = build_scene(&model)?;
    Ok((model, scene))
}

/// Growth and scheduling without verification. The verdict is
/// INCONCLUSIVE with the reason when no schedule exists, and a placeholder
/// otherwise.
pub fn derive(name: &str, text: &str, cfg: &RunConfig) -> Result<Run, RunError> {
    let (model, scene) = prepare(text)?;
    let mut run = Run {
        name: name.to_string(),
        model,
        scene,
        growth: None,
        schedule: None,
        proof: None,
        verdict: Verdict::inconclusive("not verified"),
    };
    let witness = match Witness::draw(&run.scene, cfg.seed, &cfg.range) {
        Ok(w) => w,
        Err(e) => {
            run.verdict = Verdict::inconclusive(format!("degenerate model: {e}"));
            return Ok(run);
        }
    };
    let growth = grow(&run.model, &run.scene, &witness, &cfg.caps);
    let caps: String = growth.caps.iter().map(|c| format!("; {c}")).collect();
    if let GrowStatus::Disconnected { unreached } = &growth.status {
        run.verdict = Verdict::inconclusive(format!("no derivation schedule: {} unreached{caps}", unreached.join(", ")));
    } else if let Some(schedule) = topo_order(&growth.graph) {
        let goals: Vec<_> = growth.graph.goals().cloned().collect();
        run.proof = Some(schedule.restrict(&growth.graph, goals.iter()));
        run.schedule = Some(schedule);
    } else {
        run.verdict = Verdict::inconclusive(format!("no derivation schedule{caps}"));
    }
    run.growth = Some(growth);
    Ok(run)
}

/// The full pipeline. Input errors are `Err`; every other failure is an
/// INCONCLUSIVE verdict.
pub fn prove(name: &str, text: &str, cfg: &RunConfig) -> Result<Run, RunError> {
    let mut run = derive(name, text, cfg)?;
    if let (Some(growth), Some(schedule)) = (&run.growth, &run.schedule) {
        run.verdict = verdict(&run.model, &run.scene, &growth.graph, schedule, &cfg.verify(), &cfg.range);
    }
    Ok(run)
}

/// Oracle-only run: no discovery or scheduling.
pub fn check(name: &str, text: &str, cfg: &RunConfig) -> Result<Run, RunError> {
    let (model, scene) = prepare(text)?;
    let verdict = oracle_verdict(&scene, &cfg.verify(), &cfg.range);
    Ok(Run { name: name.to_string(), model, scene, growth: None, schedule: None, proof: None, verdict })
}
