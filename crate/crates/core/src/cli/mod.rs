//! Command-line front end: `evolve`, `run` and `analyze`.
//!
//! Every command writes into one output directory and finishes with a
//! `manifest.json` listing each produced file and its SHA-256.
//!
//! Exit codes: 0 success, 2 configuration error, 3 a stage ran out of
//! generations, 4 I/O error, 1 anything else.

mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use config::{IoConfig, RunConfig, DEFAULT_CHECKPOINT_INTERVAL};
pub use output::{sha256_hex, Manifest, ManifestEntry, OutputDir, MANIFEST_FILE};

use crate::analysis::{
    classify_groups, default_grid, default_prune_times, export_raster, isi_stats, prune_sweep, pruning_csv,
    sample_landscape, weight_deviation, weight_sweep, Phase,
};
use crate::error::{Error, Result};
use crate::evolution::{Checkpoint, Evolution, Parallelism, Status};
use crate::genome::{decode, Genome, GenomeLayout};
use crate::snn::{StimulusSpec, Topology};
use crate::trial::{evaluate, TrialSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_STAGE_FAILED: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const CHECKPOINT_FILE: &str = "checkpoint.json";

#[derive(Debug, Parser)]
#[command(name = "snn-memory", version, about = "Evolve and analyse self-stopping spiking networks")]
pub struct Cli {
    /// Worker threads for trial evaluation (default: all cores). Never changes results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the genetic algorithm over the schedule of target durations.
    Evolve(EvolveArgs),
    /// Evaluate one genome on the trial protocol.
    Run(RunArgs),
    /// Post-hoc analyses of evolved genomes.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// JSON run configuration. Required unless resuming.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Continue from a checkpoint written by an earlier run.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub population: Option<usize>,
    /// Per-stage generation budget.
    #[arg(long)]
    pub max_generations: Option<u64>,
    #[arg(long)]
    pub checkpoint_interval: Option<u64>,
    /// Stop (with a checkpoint) once this many generations have been evaluated.
    #[arg(long)]
    pub stop_after: Option<u64>,
}

/// Trial protocol flags. Values from `--config` are used first, then flags
/// override them; anything left unset takes the built-in default.
#[derive(Debug, Args, Clone)]
pub struct TrialArgs {
    /// Run configuration whose `trial` section supplies the protocol.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dt_ms: Option<f64>,
    #[arg(long)]
    pub stimulation_s: Option<f64>,
    #[arg(long)]
    pub target_s: Option<f64>,
    #[arg(long)]
    pub silence_s: Option<f64>,
    #[arg(long)]
    pub stimulus_amplitude: Option<f64>,
}

impl TrialArgs {
    pub fn resolve(&self) -> Result<TrialSpec> {
        let mut spec = match &self.config {
            Some(p) => RunConfig::load(p)?.trial,
            None => TrialSpec::default(),
        };
        if let Some(v) = self.dt_ms {
            spec.dt_ms = v;
        }
        if let Some(v) = self.stimulation_s {
            spec.stimulation_s = v;
        }
        if let Some(v) = self.target_s {
            spec.target_sustain_s = v;
        }
        if let Some(v) = self.silence_s {
            spec.silence_window_s = v;
        }
        if let Some(v) = self.stimulus_amplitude {
            spec.stimulus = StimulusSpec {
                amplitude: v,
                ..spec.stimulus
            };
        }
        spec.plan()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub genome: PathBuf,
    #[command(flatten)]
    pub trial: TrialArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also write a binned raster with bins of this width (ms).
    #[arg(long)]
    pub raster_bin_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhaseArg {
    Stimulated,
    SelfSustained,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Prune each hidden neuron at each pruning time.
    Prune(PruneArgs),
    /// Prune, then label neurons as sustaining / stopping / inactive.
    Groups(GroupsArgs),
    /// Inter-spike interval statistics in one protocol phase.
    Isi(IsiArgs),
    /// Correlate synapse strength with stopping time.
    Sweep(SweepArgs),
    /// Per-synapse weight spread across several genomes.
    Wdev(WdevArgs),
    /// Classify random genomes by when their activity ends.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct PruneArgs {
    #[arg(long)]
    pub genome: PathBuf,
    #[command(flatten)]
    pub trial: TrialArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Pruning times in seconds (default: every 0.1 s of the sustain period).
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Prune inputs and outputs too, not only hidden neurons.
    #[arg(long)]
    pub all_neurons: bool,
}

#[derive(Debug, Args)]
pub struct GroupsArgs {
    #[command(flatten)]
    pub prune: PruneArgs,
    /// Distance from the target stop time, in seconds (default: quarter of the sustain duration).
    #[arg(long)]
    pub margin_s: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IsiArgs {
    #[arg(long)]
    pub genome: PathBuf,
    #[command(flatten)]
    pub trial: TrialArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "self-sustained")]
    pub window: PhaseArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub genome: PathBuf,
    #[command(flatten)]
    pub trial: TrialArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Magnitude grid (default 0, 0.05, ..., 1).
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Restrict to these synapses, written `pre:post`.
    #[arg(long, value_delimiter = ',')]
    pub synapses: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct WdevArgs {
    /// Genome files; give the flag once per genome.
    #[arg(long = "genome", required = true)]
    pub genomes: Vec<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub trial: TrialArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 60)]
    pub hidden: usize,
}

/// What went wrong, already mapped onto an exit code.
#[derive(Debug)]
pub enum Failure {
    Error(Error),
    StageFailed(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::StageFailed(_) => EXIT_STAGE_FAILED,
            Failure::Error(e) => match e {
                Error::Config(_) | Error::Encoding { .. } | Error::Network(_) | Error::Json { .. } => EXIT_CONFIG,
                Error::Io { .. } => EXIT_IO,
                Error::SimulationFault { .. } => EXIT_FAILURE,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Error(e) => write!(f, "{e}"),
            Failure::StageFailed(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> std::result::Result<(), Failure> {
    let threads = cli.threads;
    if threads == Some(0) {
        return Err(Error::config("--threads must be at least 1").into());
    }
    let mut command = Some(cli.command);
    let mut go = || match command.take().expect("runs once") {
        Command::Evolve(a) => cmd_evolve(a, threads),
        Command::Run(a) => cmd_run(a).map_err(Failure::from),
        Command::Analyze(a) => cmd_analyze(a).map_err(Failure::from),
    };
    match threads {
        None => go(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config(format!("cannot start {n} worker threads: {e}")))?;
            pool.install(go)
        }
    }
}

/// Loads a genome and records its hash for the manifest.
fn load_genome(path: &Path) -> Result<(Genome, String)> {
    let g = Genome::load(path)?;
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok((g, sha256_hex(&bytes)))
}

pub fn cmd_evolve(args: EvolveArgs, threads: Option<usize>) -> std::result::Result<(), Failure> {
    let (mut evo, out_dir, interval, effective) = match (&args.config, &args.resume) {
        (_, Some(ckpt_path)) => {
            let text = std::fs::read_to_string(ckpt_path).map_err(|e| Error::io(ckpt_path, e))?;
            let cp: Checkpoint = serde_json::from_str(&text).map_err(|source| Error::Json {
                path: ckpt_path.display().to_string(),
                source,
            })?;
            let out = args
                .out
                .clone()
                .or_else(|| ckpt_path.parent().map(Path::to_path_buf))
                .unwrap_or_else(|| PathBuf::from("."));
            let effective = json!({
                "command": "evolve",
                "resumed_from_generation": cp.generation,
                "ga": cp.config,
                "schedule": cp.schedule,
                "trial": cp.template,
                "layout": cp.layout,
            });
            let interval = args.checkpoint_interval.unwrap_or(DEFAULT_CHECKPOINT_INTERVAL);
            (Evolution::resume(cp)?, out, interval, effective)
        }
        (Some(cfg_path), None) => {
            let mut cfg = RunConfig::load(cfg_path)?;
            if let Some(s) = args.seed {
                cfg.ga.master_seed = s;
                cfg.seed = Some(s);
            }
            if let Some(p) = args.population {
                cfg.ga.population_size = p;
            }
            if let Some(m) = args.max_generations {
                cfg.ga.max_generations = m;
            }
            if let Some(i) = args.checkpoint_interval {
                cfg.io.checkpoint_interval = i;
            }
            if threads.is_some() {
                cfg.threads = threads;
            }
            cfg.validate()?;
            let out = args
                .out
                .clone()
                .or_else(|| cfg.io.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let mut effective = serde_json::to_value(&cfg).expect("config serializes");
            // Output location and thread count never affect results.
            effective["io"]["output_dir"] = serde_json::Value::Null;
            effective["threads"] = serde_json::Value::Null;
            let evo = Evolution::new(cfg.ga.clone(), cfg.schedule.clone(), cfg.trial, cfg.layout)?;
            (evo, out, cfg.io.checkpoint_interval, json!({"command": "evolve", "config": effective}))
        }
        (None, None) => return Err(Error::config("evolve needs --config or --resume").into()),
    };
    if interval == 0 {
        return Err(Error::config("checkpoint interval must be at least 1").into());
    }

    let seed = evo.checkpoint().config.master_seed;
    let mut out = OutputDir::create(&out_dir, "evolve", effective, Some(seed))?;
    let stop_after = args.stop_after.unwrap_or(u64::MAX);
    while evo.generation() < stop_after && evo.step()? {
        if evo.generation() % interval == 0 {
            out.write_json(CHECKPOINT_FILE, &evo.checkpoint())?;
        }
    }
    out.write_json(CHECKPOINT_FILE, &evo.checkpoint())?;
    write_evolution_artifacts(&mut out, &evo)?;
    let status = evo.status();
    out.finish()?;
    match status {
        Status::Failed => {
            let stage = evo.champions().len();
            Err(Failure::StageFailed(format!(
                "stage {stage} exhausted its generation budget; partial results kept in {}",
                out_dir.display()
            )))
        }
        Status::Completed | Status::Running => Ok(()),
    }
}

fn write_evolution_artifacts(out: &mut OutputDir, evo: &Evolution) -> Result<()> {
    out.write_csv("evolution_log.csv", &evo.log().to_csv())?;
    out.write_csv("stage_markers.csv", &evo.log().markers_csv())?;
    for c in evo.champions() {
        let name = format!("champion_stage{:02}_{}s.json", c.stage, c.target_sustain_s);
        out.write(&name, c.genome.to_json().as_bytes())?;
    }
    Ok(())
}

pub fn cmd_run(args: RunArgs) -> Result<()> {
    let spec = args.trial.resolve()?;
    let plan = spec.plan()?;
    let (genome, genome_sha) = load_genome(&args.genome)?;
    let net = decode(&genome)?;
    if let Some(b) = args.raster_bin_ms {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::config(format!("--raster-bin-ms must be positive, got {b}")));
        }
    }
    let rec = evaluate(&net, &plan)?;

    let effective = json!({
        "command": "run",
        "trial": spec,
        "genome_sha256": genome_sha,
        "raster_bin_ms": args.raster_bin_ms,
    });
    let mut out = OutputDir::create(&args.out, "run", effective, None)?;
    out.write_json(
        "record.json",
        &json!({
            "last_output_spike_step": rec.last_output_spike_step,
            "fitness": rec.fitness,
            "summary": rec.summary(&plan),
        }),
    )?;
    if let Some(bin_ms) = args.raster_bin_ms {
        let raster = export_raster(&rec.spike_log, bin_ms, plan.clock.dt_ms())?;
        out.write_csv("raster.csv", &raster.to_csv())?;
        out.write_csv("spike_counts.csv", &raster.step_totals_csv())?;
    }
    out.finish()?;
    Ok(())
}

pub fn cmd_analyze(cmd: AnalyzeCommand) -> Result<()> {
    match cmd {
        AnalyzeCommand::Prune(a) => analyze_prune(a, None),
        AnalyzeCommand::Groups(a) => analyze_prune(a.prune, Some(a.margin_s)),
        AnalyzeCommand::Isi(a) => analyze_isi(a),
        AnalyzeCommand::Sweep(a) => analyze_sweep(a),
        AnalyzeCommand::Wdev(a) => analyze_wdev(a),
        AnalyzeCommand::Sample(a) => analyze_sample(a),
    }
}

/// Prune sweep; with `groups = Some(margin)` also labels the neurons.
fn analyze_prune(a: PruneArgs, groups: Option<Option<f64>>) -> Result<()> {
    let spec = a.trial.resolve()?;
    let plan = spec.plan()?;
    let (genome, genome_sha) = load_genome(&a.genome)?;
    let net = decode(&genome)?;
    let times = a.times.clone().unwrap_or_else(|| default_prune_times(&plan));
    let neurons: Vec<usize> = if a.all_neurons {
        (0..net.len()).collect()
    } else {
        net.topology().hidden().collect()
    };
    let results = prune_sweep(&net, &plan, &neurons, &times, Parallelism::Parallel)?;

    let name = if groups.is_some() { "groups" } else { "prune" };
    let effective = json!({
        "command": format!("analyze {name}"),
        "trial": spec,
        "genome_sha256": genome_sha,
        "times_s": times,
        "neurons": neurons,
        "margin_s": groups.flatten(),
    });
    let mut out = OutputDir::create(&a.out, name, effective, None)?;
    out.write_csv("pruning.csv", &pruning_csv(&results))?;
    let mut summary = String::from("neuron_id,kind,mean_s,stddev_s\n");
    for r in &results {
        summary.push_str(&format!(
            "{},{},{},{}\n",
            r.neuron_id,
            kind_name(&net, r.neuron_id),
            r.mean_s,
            r.stddev_s
        ));
    }
    out.write_csv("pruning_summary.csv", &summary)?;
    if let Some(margin) = groups {
        let labels = classify_groups(&results, &plan, margin);
        out.write_csv("groups.csv", &labels.to_csv())?;
    }
    out.finish()?;
    Ok(())
}

fn kind_name(net: &crate::snn::Network, n: usize) -> &'static str {
    match net.kind(n) {
        crate::snn::NeuronKind::Excitatory => "excitatory",
        crate::snn::NeuronKind::Inhibitory => "inhibitory",
    }
}

fn analyze_isi(a: IsiArgs) -> Result<()> {
    let spec = a.trial.resolve()?;
    let plan = spec.plan()?;
    let (genome, genome_sha) = load_genome(&a.genome)?;
    let net = decode(&genome)?;
    let rec = evaluate(&net, &plan)?;
    let phase = match a.window {
        PhaseArg::Stimulated => Phase::Stimulated,
        PhaseArg::SelfSustained => Phase::SelfSustained,
    };
    let stats = isi_stats(&rec.spike_log, phase.window(&plan), plan.clock.dt_ms(), 0..net.len());
    let effective = json!({
        "command": "analyze isi",
        "trial": spec,
        "genome_sha256": genome_sha,
        "window": phase,
    });
    let mut out = OutputDir::create(&a.out, "isi", effective, None)?;
    out.write_csv("isi.csv", &stats.to_csv())?;
    out.finish()?;
    Ok(())
}

fn parse_synapse(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::config(format!("synapse {s:?} is not of the form pre:post"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn analyze_sweep(a: SweepArgs) -> Result<()> {
    let spec = a.trial.resolve()?;
    let plan = spec.plan()?;
    let (genome, genome_sha) = load_genome(&a.genome)?;
    let net = decode(&genome)?;
    let grid = a.grid.clone().unwrap_or_else(default_grid);
    let synapses = a
        .synapses
        .as_ref()
        .map(|v| v.iter().map(|s| parse_synapse(s)).collect::<Result<Vec<_>>>())
        .transpose()?;
    let map = weight_sweep(&net, &plan, &grid, synapses.as_deref(), Parallelism::Parallel)?;
    let effective = json!({
        "command": "analyze sweep",
        "trial": spec,
        "genome_sha256": genome_sha,
        "grid": grid,
        "synapses": synapses,
    });
    let mut out = OutputDir::create(&a.out, "sweep", effective, None)?;
    out.write_csv("correlation.csv", &map.to_csv())?;
    out.finish()?;
    Ok(())
}

fn analyze_wdev(a: WdevArgs) -> Result<()> {
    let loaded = a
        .genomes
        .iter()
        .map(|p| load_genome(p))
        .collect::<Result<Vec<_>>>()?;
    let (genomes, hashes): (Vec<Genome>, Vec<String>) = loaded.into_iter().unzip();
    let map = weight_deviation(&genomes)?;
    let effective = json!({"command": "analyze wdev", "genome_sha256": hashes});
    let mut out = OutputDir::create(&a.out, "wdev", effective, None)?;
    out.write_csv("weight_deviation.csv", &map.to_csv())?;
    out.finish()?;
    Ok(())
}

fn analyze_sample(a: SampleArgs) -> Result<()> {
    let spec = a.trial.resolve()?;
    let plan = spec.plan()?;
    let layout = GenomeLayout::new(Topology::new(5, a.hidden, 1)?);
    let sample = sample_landscape(a.n, &plan, layout, a.seed, Parallelism::Parallel)?;
    let effective = json!({
        "command": "analyze sample",
        "trial": spec,
        "layout": layout,
        "n": a.n,
        "seed": a.seed,
    });
    let mut out = OutputDir::create(&a.out, "sample", effective, Some(a.seed))?;
    out.write_json("landscape.json", &sample)?;
    out.finish()?;
    Ok(())
}
