//! The `semantica` command line.
//!
//! Any subcommand accepts `--config file.json`: a JSON object whose keys are
//! flag names (`"lr": 0.01`, `"branch": [2, 2]`, `"snapshots": true`). File
//! values are applied first, so flags given on the command line win.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::{AppError, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "semantica", version, about = "Learning dynamics of deep linear networks on structured semantic domains")]
#[command(after_help = "Every subcommand also takes --config FILE.json; command-line flags override the file.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a dataset file.
    Gen {
        #[command(subcommand)]
        generator: Generator,
    },
    /// Closed-form mode trajectories for a dataset.
    Solve(SolveArgs),
    /// Train a network by gradient descent and record its modes.
    Train(TrainArgs),
    /// Train and overlay the closed-form trajectories.
    Compare(TrainArgs),
    /// Planted-category recovery sweep over coherence.
    Coherence(CoherenceArgs),
    /// Inductive projection of a novel feature over development.
    Project(ProjectArgs),
    /// Hidden-layer similarity across independently trained networks.
    Rsa(RsaArgs),
    /// MDS trajectories of the hidden representations.
    Mds(MdsArgs),
    /// Spectrum, typicality, prototype and similarity tables for a dataset.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output dataset file (JSON).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct FieldArgs {
    /// Comma-separated branching factors below the root.
    #[arg(long, default_value = "2,2")]
    pub branch: String,
    /// Edge length between neighbouring nodes.
    #[arg(long, default_value_t = 0.24)]
    pub edge: f64,
    /// Prior standard deviation at every node.
    #[arg(long, default_value_t = 4.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1000)]
    pub features: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Generator {
    /// Four items, seven features, two-level hierarchy.
    #[command(args_override_self = true)]
    Toy(OutArg),
    /// Nine items in a transitive ordering.
    #[command(args_override_self = true)]
    Ordering(OutArg),
    /// Eight items in two cross-cutting groupings.
    #[command(args_override_self = true)]
    Crosscut(OutArg),
    /// Features diffused down a tree with random flips.
    #[command(args_override_self = true)]
    Tree {
        /// Number of levels including root and leaves (implied by --branch).
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value = "2,2")]
        branch: String,
        /// Flip probability per edge.
        #[arg(long, default_value_t = 0.15)]
        flip: f64,
        #[arg(long, default_value_t = 1000)]
        features: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gaussian field on clusters of items joined through hidden hubs.
    #[command(args_override_self = true)]
    GmrfCluster {
        /// Comma-separated cluster sizes.
        #[arg(long, default_value = "4,4,4")]
        sizes: String,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gaussian field on a ring of items.
    #[command(args_override_self = true)]
    GmrfRing {
        #[arg(long, default_value_t = 8)]
        items: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gaussian field on a tree with items at the leaves.
    #[command(args_override_self = true)]
    GmrfTree {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// One category hidden in Bernoulli background noise.
    #[command(args_override_self = true)]
    Planted {
        #[arg(long = "no", default_value_t = 500)]
        n_objects: usize,
        #[arg(long = "nf", default_value_t = 800)]
        n_features: usize,
        #[arg(long = "ko", default_value_t = 30)]
        k_objects: usize,
        #[arg(long = "kf", default_value_t = 30)]
        k_features: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Arch {
    Deep,
    Shallow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Batch,
    Online,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Gaussian,
    Balanced,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SolveArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = Arch::Deep)]
    pub arch: Arch,
    /// Initial strength of every mode.
    #[arg(long, default_value_t = 1e-3)]
    pub a0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[arg(long, default_value = "trajectory.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct TrainArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = Arch::Deep)]
    pub arch: Arch,
    /// Learning rate λ.
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    /// Initial weight scale.
    #[arg(long, default_value_t = 1e-3)]
    pub a0: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = RegimeArg::Batch)]
    pub regime: RegimeArg,
    /// Initial weights; `compare` defaults to balanced.
    #[arg(long, value_enum)]
    pub init: Option<InitArg>,
    /// Hidden width (defaults to the number of modes).
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    #[arg(long, default_value = "trajectory.csv")]
    pub out: PathBuf,
    /// Also write the trained weights to this run file.
    #[arg(long)]
    pub run: Option<PathBuf>,
    /// Store hidden representations at every record in the run file.
    #[arg(long)]
    pub snapshots: bool,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct CoherenceArgs {
    #[arg(long = "nf", default_value_t = 800)]
    pub n_features: usize,
    #[arg(long = "no", default_value_t = 500)]
    pub n_objects: usize,
    /// Background density.
    #[arg(long, default_value_t = 0.1)]
    pub q: f64,
    /// Category size (items and features).
    #[arg(long, default_value_t = 30)]
    pub k: usize,
    #[arg(long, default_value_t = 0.25)]
    pub cmin: f64,
    #[arg(long, default_value_t = 4.0)]
    pub cmax: f64,
    #[arg(long, default_value_t = 8)]
    pub points: usize,
    /// Explicit comma-separated coherence values (replaces the grid).
    #[arg(long)]
    pub coherence: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "coherence.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ProjectArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Anchor item, by label or index.
    #[arg(long)]
    pub anchor: String,
    /// Comma-separated developmental times.
    #[arg(long, default_value = "0.5,1,2,4,8")]
    pub times: String,
    #[arg(long, default_value_t = 1e-3)]
    pub a0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Use the hidden layer of a trained run instead of the closed form.
    #[arg(long)]
    pub run: Option<PathBuf>,
    #[arg(long, default_value = "projection.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct RsaArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Number of networks; seeds are `seed, seed+1, ...`.
    #[arg(long, default_value_t = 4)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2e-4)]
    pub a0: f64,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    #[arg(long, default_value_t = 32)]
    pub hidden: usize,
    /// Distance below which similarity counts as conserved.
    #[arg(long, default_value_t = 0.05)]
    pub conserved: f64,
    /// Distance above which similarity counts as not conserved.
    #[arg(long, default_value_t = 0.2)]
    pub not_conserved: f64,
    #[arg(long, default_value = "rsa.csv")]
    pub out: PathBuf,
    /// Write each network's hidden similarity matrix into this directory.
    #[arg(long)]
    pub sim_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct MdsArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Hidden snapshots from a trained run; the closed form is used otherwise.
    #[arg(long)]
    pub run: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-3)]
    pub a0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 40)]
    pub frames: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value = "mds.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ReportArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value = "report")]
    pub out_dir: PathBuf,
    /// Initial strength used for the learning-time column.
    #[arg(long, default_value_t = 1e-3)]
    pub a0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
}

/// Replaces `--config FILE` by the flags it holds, placed right after the
/// subcommand names so that later command-line flags override them.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, AppError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config: Option<PathBuf> = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            let path = it.next().ok_or_else(|| AppError::Input("--config needs a file".into()))?;
            config = Some(path.into());
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(p.into());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let text = crate::io::read_text(&path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| AppError::Input("config file must hold a JSON object".into()))?;
    let mut flags: Vec<OsString> = Vec::new();
    for (key, v) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        let scalar = |v: &serde_json::Value| match v {
            serde_json::Value::String(s) => Ok(s.clone()),
            serde_json::Value::Number(n) => Ok(n.to_string()),
            other => Err(AppError::Input(format!("config value for {key} is not a scalar: {other}"))),
        };
        match v {
            serde_json::Value::Bool(true) => flags.push(flag.into()),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                flags.push(flag.into());
                flags.push(parts.join(",").into());
            }
            other => {
                flags.push(flag.into());
                flags.push(scalar(other)?.into());
            }
        }
    }
    let at = 1 + rest.iter().skip(1).take_while(|a| !a.to_string_lossy().starts_with('-')).count();
    rest.splice(at..at, flags);
    Ok(rest)
}

/// Runs the command line and returns the process exit status.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let args = match expand_config(args.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let provenance = provenance_of(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::dispatch(cli.command, &provenance) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn provenance_of(args: &[OsString]) -> Provenance {
    let words: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let seed = words
        .iter()
        .rposition(|w| w == "--seed")
        .and_then(|i| words.get(i + 1).cloned());
    Provenance { command: format!("semantica {}", words.join(" ")), seed }
}

/// What produced an output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub command: String,
    pub seed: Option<String>,
}

impl Provenance {
    /// `command="..." seed=... version=...`, with the default seed filled
    /// in when none was given.
    pub fn line(&self, default_seed: Option<u64>) -> String {
        let seed = self
            .seed
            .clone()
            .or_else(|| default_seed.map(|s| s.to_string()))
            .unwrap_or_else(|| "none".into());
        format!("command=\"{}\" seed={} version={}", self.command.replace('"', "'"), seed, crate::version_string())
    }
}
