use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimgraph::emit::{render_dot, render_json, render_text};
use dimgraph::num::parse_rational;
use dimgraph::pipeline::{self, RunConfig, RunError};
use dimgraph::rules::Caps;
use dimgraph::scene::{sample_params, SampleRange};
use dimgraph::verify::Status;

const EXIT_INPUT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "dimgraph", version, about = "Plane-geometry prover over derivation hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grow, schedule and verify; print the proof.
    Prove { file: PathBuf },
    /// Print the grown derivation graph as DOT.
    Graph { file: PathBuf },
    /// Decide the claim from coordinates alone.
    Check { file: PathBuf },
}

#[derive(Args, Debug)]
struct Opts {
    /// Seed for the witness and the verification draws.
    #[arg(long, global = true, env = "GRAATP_SEED", default_value_t = 42)]
    seed: u64,
    /// Verification samples.
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Relative tolerance for residuals.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_f64)]
    tol: f64,
    /// Growth stops adding nodes past this many.
    #[arg(long, global = true, default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
    max_nodes: u64,
    /// Growth stops adding edges past this many.
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    max_edges: u64,
    /// Cap on triangle pairs compared for similarity.
    #[arg(long, global = true, default_value_t = 10000, value_parser = clap::value_parser!(u64).range(1..))]
    max_pairs: u64,
    /// Output format; `scene` dumps coordinates at the seed's draw.
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    /// Sampling interval `LO:HI`, rationals.
    #[arg(long, global = true, default_value = "1:10", value_parser = parse_range)]
    range: SampleRange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
    Dot,
    Scene,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && !v.is_nan() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<SampleRange, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = parse_rational(lo).ok_or_else(|| format!("bad lower bound {lo:?}"))?;
    let hi = parse_rational(hi).ok_or_else(|| format!("bad upper bound {hi:?}"))?;
    SampleRange::new(lo, hi).ok_or_else(|| "expected LO < HI".to_string())
}

impl Opts {
    fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            samples: self.samples as usize,
            tol: self.tol,
            caps: Caps {
                max_nodes: self.max_nodes as usize,
                max_edges: self.max_edges as usize,
                max_pairs: self.max_pairs as usize,
            },
            range: self.range.clone(),
        }
    }
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Proved => 0,
        Status::Refuted => 1,
        Status::Inconclusive => 2,
    }
}

fn theorem_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "theorem".to_string())
}

/// Writes `text` with a trailing newline; a closed pipe is not an error.
fn print(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
    let _ = out.flush();
}

fn input_error(file: &Path, e: RunError) -> ExitCode {
    let shown = file.display().to_string();
    match e {
        RunError::Dsl(d) => eprintln!("{}", d.diagnostic(&shown)),
        RunError::Scene(s) => eprintln!("{shown}: {s}"),
    }
    ExitCode::from(EXIT_INPUT)
}

fn scene_dump(file: &Path, text: &str, cfg: &RunConfig) -> ExitCode {
    let scene = match pipeline::prepare(text) {
        Ok((_, scene)) => scene,
        Err(e) => return input_error(file, e),
    };
    match sample_params(&scene, cfg.seed, &cfg.range).and_then(|a| scene.to_json(&a)) {
        Ok(json) => {
            print(&json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            ExitCode::from(status_code(Status::Inconclusive))
        }
    }
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

fn run(cli: Cli) -> ExitCode {
    let cfg = cli.opts.config();
    let (file, which) = match &cli.command {
        Command::Prove { file } => (file, "prove"),
        Command::Graph { file } => (file, "graph"),
        Command::Check { file } => (file, "check"),
    };
    let emit = cli.opts.emit.unwrap_or(if which == "graph" { Emit::Dot } else { Emit::Text });
    match (which, emit) {
        ("graph", Emit::Dot) => {}
        ("graph", e) => return usage(&format!("graph only emits dot, not {e:?}").to_lowercase()),
        ("check", Emit::Dot) => return usage("check builds no graph; use --emit text, json or scene"),
        _ => {}
    }
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    if emit == Emit::Scene {
        return scene_dump(file, &text, &cfg);
    }
    let name = theorem_name(file);
    let result = match which {
        "prove" => pipeline::prove(&name, &text, &cfg),
        "graph" => pipeline::derive(&name, &text, &cfg),
        _ => pipeline::check(&name, &text, &cfg),
    };
    let run = match result {
        Ok(r) => r,
        Err(e) => return input_error(file, e),
    };
    if which == "graph" {
        print(&render_dot(&run).unwrap_or_else(|| "digraph g {}\n".to_string()));
        if run.proof.is_none() {
            eprintln!("{}: {}", file.display(), run.verdict.reason);
        }
        return ExitCode::from(if run.proof.is_some() { 0 } else { status_code(Status::Inconclusive) });
    }
    match emit {
        Emit::Text => print(&render_text(&run)),
        Emit::Json => print(&render_json(&run)),
        Emit::Dot => print(&render_dot(&run).unwrap_or_else(|| "digraph g {}\n".to_string())),
        Emit::Scene => unreachable!("handled before the run"),
    }
    ExitCode::from(status_code(run.verdict.status))
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
