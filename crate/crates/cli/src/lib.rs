//! The `mmsim` command line.
//!
//! Exit status is 0 on success, 1 for model, parameter or usage errors and
//! 2 for I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mmsim_bone::{format_density, parse_density, simulate, BoneParams, Density, DEFAULT_CAPACITY};
use mmsim_core::{MembraneId, Model};
use mmsim_engine::{run, EngineOptions, LabelState, Trace};
use mmsim_parser::{lint, parse_model_with_source_map, serialize_model};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(name = "mmsim", version, about = "Mobile membrane simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and lint a model; silent when it is clean.
    Validate { file: PathBuf },
    /// Run a model with a seed.
    Run(RunArgs),
    /// Build and run the bone remodelling model, printing densities as CSV.
    Bone(BoneArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: u64,
    /// Write a JSON Lines trace here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Include the full state every N steps (and always on the last one).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub snapshot_every: u64,
    #[arg(long)]
    pub no_self_check: bool,
}

#[derive(Args, Debug)]
pub struct BoneArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub units: u64,
    /// Initial density in [0, 1], as a decimal or a fraction.
    #[arg(long, default_value = "0.5", value_parser = density_arg)]
    pub density: Density,
    #[arg(long, default_value_t = DEFAULT_CAPACITY, value_parser = clap::value_parser!(u64).range(1..))]
    pub capacity: u64,
    #[arg(long, default_value_t = 3)]
    pub oc: u64,
    #[arg(long, default_value_t = 1)]
    pub ob: u64,
    #[arg(long, default_value_t = 1)]
    pub cycles: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: u64,
    /// Also write the generated model here.
    #[arg(long)]
    pub emit_model: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

fn density_arg(s: &str) -> Result<Density, String> {
    parse_density(s).map_err(|e| e.to_string())
}

/// A failure and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1: bad model, parameters or usage.
    Model(String),
    /// Exit 2.
    Io(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Model(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Model(m) | Failure::Io(m) => m,
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { file } => cmd_validate(&file, err),
        Command::Run(args) => cmd_run(&args, out),
        Command::Bone(args) => cmd_bone(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "mmsim: {}", f.message());
            f.code()
        }
    }
}

fn load(path: &Path) -> Result<(Model, mmsim_parser::SourceMap), Failure> {
    let bytes = fs::read(path).map_err(|e| io_failure(path, e))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::Model(format!("{}: file is not valid UTF-8", path.display())))?;
    parse_model_with_source_map(&text).map_err(|e| {
        Failure::Model(format!(
            "{}:{}:{}: {}",
            path.display(),
            e.line,
            e.column,
            e.message
        ))
    })
}

fn cmd_validate(path: &Path, err: &mut dyn Write) -> Result<i32, Failure> {
    let (model, map) = load(path)?;
    let warnings = lint(&model);
    for w in &warnings {
        let line = map.rule_line(w.rule()).unwrap_or(0);
        let _ = writeln!(err, "{}:{line}: warning: {w}", path.display());
    }
    Ok(if warnings.is_empty() { 0 } else { 1 })
}

/// Hex SHA-256 of the canonical text of `model`.
pub fn model_hash(model: &Model) -> String {
    let digest = Sha256::digest(serialize_model(model).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct Header<'a> {
    seed: u64,
    rng: &'a str,
    model_hash: String,
}

#[derive(Serialize)]
struct AppliedLine<'a> {
    rule: &'a str,
    subject: MembraneId,
    host: Option<MembraneId>,
    count: u64,
}

#[derive(Serialize)]
struct StepLine<'a> {
    step: u64,
    applied: Vec<AppliedLine<'a>>,
    halted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<&'a LabelState>,
}

/// Writes `trace` as JSON Lines: a header, then one object per step.
pub fn write_trace(
    w: &mut dyn Write,
    model: &Model,
    trace: &Trace,
    snapshot_every: u64,
) -> io::Result<()> {
    let header = Header {
        seed: trace.seed,
        rng: &trace.rng,
        model_hash: model_hash(model),
    };
    serde_json::to_writer(&mut *w, &header)?;
    w.write_all(b"\n")?;
    let last = trace.steps.len().checked_sub(1);
    for (i, s) in trace.steps.iter().enumerate() {
        let snapshot = (s.step + 1) % snapshot_every.max(1) == 0 || Some(i) == last;
        let line = StepLine {
            step: s.step,
            applied: s
                .applied
                .iter()
                .map(|a| AppliedLine {
                    rule: &a.instance.rule,
                    subject: a.instance.subject,
                    host: a.instance.host,
                    count: a.count,
                })
                .collect(),
            halted: s.halted,
            state: snapshot.then_some(&s.state),
        };
        serde_json::to_writer(&mut *w, &line)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

fn save_trace(
    path: &Path,
    model: &Model,
    trace: &Trace,
    snapshot_every: u64,
) -> Result<(), Failure> {
    let file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
    write_trace(&mut BufWriter::new(file), model, trace, snapshot_every)
        .map_err(|e| io_failure(path, e))
}

/// Steps that fired at least one rule.
pub fn active_steps(trace: &Trace) -> usize {
    trace.steps.iter().filter(|s| !s.halted).count()
}

/// One line: steps, halting, and final per-label totals as JSON.
pub fn summary(trace: &Trace) -> String {
    let totals = serde_json::to_string(trace.final_state()).expect("label totals serialize");
    format!(
        "steps={} halted={} totals={totals}",
        active_steps(trace),
        trace.halted()
    )
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (model, _) = load(&args.file)?;
    let options = EngineOptions {
        seed: args.seed,
        self_check: !args.no_self_check,
        ..Default::default()
    };
    let trace = run(&model, options, args.max_steps).map_err(|e| Failure::Model(e.to_string()))?;
    if let Some(path) = &args.trace {
        save_trace(path, &model, &trace, args.snapshot_every)?;
    }
    writeln!(out, "{}", summary(&trace)).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(0)
}

fn cmd_bone(args: &BoneArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let params = BoneParams::uniform(
        args.units as usize,
        args.density,
        args.capacity,
        args.oc,
        args.ob,
        args.cycles,
    );
    let result = simulate(&params, EngineOptions::with_seed(args.seed), args.max_steps)
        .map_err(|e| Failure::Model(e.to_string()))?;
    if let Some(path) = &args.emit_model {
        fs::write(path, serialize_model(&result.model)).map_err(|e| io_failure(path, e))?;
    }
    if let Some(path) = &args.trace {
        save_trace(path, &result.model, &result.trace, 1)?;
    }
    let mut csv = String::from("unit,cycle,density\n");
    for (u, series) in result.series.iter().enumerate() {
        for (cycle, d) in series {
            csv.push_str(&format!("{},{cycle},{}\n", u + 1, format_density(*d)));
        }
    }
    out.write_all(csv.as_bytes())
        .map_err(|e| Failure::Io(e.to_string()))?;
    Ok(0)
}
