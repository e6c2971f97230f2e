use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kgcx_core::csg::ClassSelection;
use kgcx_core::graph::SplitSelection;

#[derive(Debug, Parser)]
#[command(name = "kgcx", version, about = "Knowledge-graph dataset complexity profiler")]
pub struct Cli {
    /// Root seed; every stage derives its own sub-seed from it.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (default: all cores, or KGCX_THREADS).
    #[arg(long, global = true, env = "KGCX_THREADS")]
    pub threads: Option<usize>,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semantic and structural profile of one dataset.
    Profile(ProfileArgs),
    /// One cumulative-spectral-gradient measurement.
    Csg(CsgArgs),
    /// CSG over a grid of k and class counts.
    Sweep(SweepArgs),
    /// Correlate profiles against a model-performance table.
    Correlate(CorrelateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SplitsArg {
    Train,
    All,
}

impl From<SplitsArg> for SplitSelection {
    fn from(s: SplitsArg) -> Self {
        match s {
            SplitsArg::Train => SplitSelection::TrainOnly,
            SplitsArg::All => SplitSelection::All,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ClassOrder {
    /// The most frequent tails (ties by id).
    Top,
    /// A seeded uniform draw of tails.
    Random,
}

/// `all` or a class count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassCount {
    All,
    Count(usize),
}

pub fn parse_class_count(s: &str) -> Result<ClassCount, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(ClassCount::All);
    }
    match s.parse::<usize>() {
        Ok(0) => Err("class count must be positive".into()),
        Ok(n) => Ok(ClassCount::Count(n)),
        Err(_) => Err(format!("expected `all` or a positive integer, got `{s}`")),
    }
}

impl ClassCount {
    pub fn selection(self, order: ClassOrder) -> ClassSelection {
        match (self, order) {
            (ClassCount::All, _) => ClassSelection::All,
            (ClassCount::Count(m), ClassOrder::Top) => ClassSelection::TopFrequency(m),
            (ClassCount::Count(m), ClassOrder::Random) => ClassSelection::Random(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRange(pub Vec<usize>);

/// `start:stop:step` (inclusive), a comma list, or a single value.
pub fn parse_k_range(s: &str) -> Result<KRange, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a non-negative integer"));
    let ks: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("range `{s}` must look like start:stop:step"));
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if step == 0 || start > stop {
            return Err(format!("range `{s}` needs step > 0 and start <= stop"));
        }
        (start..=stop).step_by(step).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if ks.contains(&0) {
        return Err("k must be at least 1".into());
    }
    Ok(KRange(ks))
}

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    /// Embedding file (`<count> <dim>` header, then `label v1 ... vd`). Without it
    /// the seeded fallback embedder is used.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Fallback embedding dimension.
    #[arg(long, default_value_t = 768)]
    pub dim: usize,
    /// Fill labels missing from the embedding file with fallback vectors.
    #[arg(long)]
    pub allow_fallback_fill: bool,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub splits: SplitsArg,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write the normalized dataset as `<name>.dataset.jsonl`.
    #[arg(long)]
    pub dump_dataset: bool,
}

#[derive(Debug, Args)]
pub struct CsgArgs {
    pub dataset: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub k: usize,
    #[arg(long, default_value_t = 120)]
    pub samples: usize,
    #[arg(long, default_value = "all", value_parser = parse_class_count)]
    pub classes: ClassCount,
    #[arg(long, value_enum, default_value = "top")]
    pub selection: ClassOrder,
    /// Eigenvalue cut-off index (default M − 1).
    #[arg(long)]
    pub k_c: Option<usize>,
    #[arg(long, value_enum, default_value = "all")]
    pub splits: SplitsArg,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    /// Append the record to this profile JSON instead of writing a standalone file.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub dataset: PathBuf,
    /// `start:stop:step` (inclusive) or a comma list.
    #[arg(long, default_value = "5:100:5", value_parser = parse_k_range)]
    pub k: KRange,
    /// Comma list of class counts or `all`.
    #[arg(long, default_value = "100", value_delimiter = ',', value_parser = parse_class_count)]
    pub classes: Vec<ClassCount>,
    #[arg(long, value_enum, default_value = "top")]
    pub selection: ClassOrder,
    #[arg(long, default_value_t = 120)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub splits: SplitsArg,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub profiles: Vec<PathBuf>,
    #[arg(long)]
    pub perf: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// z-score features instead of min-max scaling.
    #[arg(long)]
    pub zscore: bool,
}
