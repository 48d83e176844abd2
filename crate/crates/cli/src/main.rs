use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use snc_cli::{emit_report, run, Command, Format, RunConfig, Source};
use snc_core::theorems::TheoremId;

/// Second-neighborhood workbench: oracles, median orders, sedimentation,
/// dependency digraphs, theorem certificates and sweeps.
///
/// INSTANCE is a file in the text format, a spec such as `random-tournament:n=8,seed=1`,
/// or a fixture name (C3, TT3, C4X, LC3, ST1).
#[derive(Debug, Parser)]
#[command(name = "snc", version)]
struct Cli {
    /// Largest item count for the exact solver (at most 20).
    #[arg(long, global = true, env = "SNC_CAP_EXACT", default_value_t = 15)]
    cap_exact: usize,
    #[arg(long, global = true, env = "SNC_SEED", default_value_t = 0)]
    seed: u64,
    /// Sedimentation step budget, or instance count for seeded sweeps.
    #[arg(long, global = true, env = "SNC_BUDGET")]
    budget: Option<u64>,
    /// human or machine (JSON Lines).
    #[arg(long, global = true, env = "SNC_FORMAT", default_value = "human")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, env = "SNC_OUT")]
    out: Option<PathBuf>,
    /// Record wall-clock times in the report.
    #[arg(long, global = true, env = "SNC_TIMINGS")]
    timings: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// SNP set and per-vertex degrees.
    Oracle { instance: String },
    /// Median order and its analysis.
    Median {
        instance: String,
        /// Repair the identity order locally instead of solving exactly.
        #[arg(long)]
        local: bool,
    },
    /// Iterate the sedimentation step.
    Sediment {
        instance: String,
        /// Starting order, e.g. "0,1,2"; defaults to the identity.
        #[arg(long)]
        order: Option<String>,
    },
    /// Dependency digraph, its components, good edges and goodness.
    Delta { instance: String },
    /// Run a theorem's witness procedure and verify the witnesses.
    Verify { theorem: TheoremId, instance: String },
    /// Batch run: tournaments-n6, two-witness, gadgets, good-edges, lemma2, lemma3,
    /// oracle-n4, oracle-n7, feedback, or a theorem id.
    Sweep { family: String },
    /// Emit the instance described by a spec.
    Gen { spec: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, instance) = match cli.command {
        Cmd::Oracle { instance } => (Command::Oracle, Some(instance)),
        Cmd::Median { instance, local } => (Command::Median { local }, Some(instance)),
        Cmd::Sediment { instance, order } => (Command::Sediment { order }, Some(instance)),
        Cmd::Delta { instance } => (Command::Delta, Some(instance)),
        Cmd::Verify { theorem, instance } => (Command::Verify { theorem }, Some(instance)),
        Cmd::Sweep { family } => (Command::Sweep { family }, None),
        Cmd::Gen { spec } => (Command::Gen { spec }, None),
    };
    let config = RunConfig {
        command,
        instance: instance.as_deref().map(Source::resolve),
        cap_exact: cli.cap_exact,
        seed: cli.seed,
        budget: cli.budget,
        format: cli.format,
        out: cli.out.clone(),
        timings: cli.timings,
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("snc: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match (&config.command, config.format) {
        (Command::Gen { .. }, Format::Human) => report.records[0].data["text"].as_str().unwrap_or_default().to_string(),
        _ => emit_report(&report, config.format),
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("snc: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
