//! `lingclass` — multi-command pipeline for phonetic clustering and
//! instance-based language classification of multilingual word lists.

mod config;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::PipelineConfig;

#[derive(Parser, Debug)]
#[command(name = "lingclass", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Tunables shared by all subcommands. Flags override the config file,
/// which overrides defaults.
#[derive(Args, Debug, Default, Clone)]
struct ConfigArgs {
    /// Flat `key = value` config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// DBSCAN neighborhood radius
    #[arg(long)]
    eps: Option<f64>,
    /// DBSCAN core-point neighborhood size (counts the point itself)
    #[arg(long)]
    min_samples: Option<usize>,
    /// Levenshtein cutoff for word-graph edges
    #[arg(long)]
    edge_threshold: Option<usize>,
    #[arg(long)]
    jaccard_threshold: Option<f64>,
    #[arg(long)]
    soundex_threshold: Option<f64>,
    /// Neighbor count for KNN
    #[arg(short, long)]
    k: Option<usize>,
    /// Include the gloss Levenshtein term in the distance
    #[arg(long)]
    use_meaning: Option<bool>,
    #[arg(long)]
    test_fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<PipelineConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        apply!(
            eps,
            min_samples,
            edge_threshold,
            jaccard_threshold,
            soundex_threshold,
            k,
            use_meaning,
            test_fraction,
            seed,
            max_iters,
            tol
        );
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct InOut {
    /// Input CSV (wide or long shape, detected from the header)
    #[arg(short, long)]
    input: PathBuf,
    /// Output directory
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ModelInOut {
    /// Directory holding model.csv and model.config
    #[arg(short, long)]
    model: PathBuf,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a lexicon and emit the canonical long CSV
    Ingest {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Emit soundex codes and embeddings per record
    Encode {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Bigram-Jaccard pass/fail per word pair at thresholds 0.2/0.4/0.5
    JaccardSweep {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// DBSCAN clustering with labels and coefficients
    Cluster {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Word-graph edge-density coefficients per language
    Coeff {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Stratified train/test split
    Split {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Fit the KNN instance model and serialize it
    Train {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Classify query records with a trained model
    Classify {
        #[command(flatten)]
        io: ModelInOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Absorb correctly classified pool records into the model
    Selftrain {
        #[command(flatten)]
        io: ModelInOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Outcome, confusion, and summary reports on a test set
    Evaluate {
        #[command(flatten)]
        io: ModelInOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// One-vs-rest ROC curves on a test set
    Roc {
        #[command(flatten)]
        io: ModelInOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Run the whole pipeline: ingest through roc
    Pipeline {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
}

fn run(cli: Cli) -> Result<(), (&'static str, String)> {
    let with = |stage: &'static str| move |e: String| (stage, e);
    match cli.command {
        Command::Ingest { io, cfg } => {
            cfg.resolve().map_err(with("ingest"))?;
            stages::cmd_ingest(&io.input, &io.out).map_err(with("ingest"))
        }
        Command::Encode { io, cfg } => {
            cfg.resolve().map_err(with("encode"))?;
            stages::cmd_encode(&io.input, &io.out).map_err(with("encode"))
        }
        Command::JaccardSweep { io, cfg } => {
            cfg.resolve().map_err(with("jaccard-sweep"))?;
            stages::cmd_jaccard_sweep(&io.input, &io.out).map_err(with("jaccard-sweep"))
        }
        Command::Cluster { io, cfg } => {
            let cfg = cfg.resolve().map_err(with("cluster"))?;
            stages::cmd_cluster(&io.input, &io.out, &cfg).map_err(with("cluster"))
        }
        Command::Coeff { io, cfg } => {
            let cfg = cfg.resolve().map_err(with("coeff"))?;
            stages::cmd_coeff(&io.input, &io.out, &cfg).map_err(with("coeff"))
        }
        Command::Split { io, cfg } => {
            let cfg = cfg.resolve().map_err(with("split"))?;
            stages::cmd_split(&io.input, &io.out, &cfg).map_err(with("split"))
        }
        Command::Train { io, cfg } => {
            let cfg = cfg.resolve().map_err(with("train"))?;
            stages::cmd_train(&io.input, &io.out, &cfg).map_err(with("train"))
        }
        Command::Classify { io, cfg } => {
            cfg.resolve().map_err(with("classify"))?;
            stages::cmd_classify(&io.model, &io.input, &io.out).map_err(with("classify"))
        }
        Command::Selftrain { io, cfg } => {
            let cfg = cfg.resolve().map_err(with("selftrain"))?;
            stages::cmd_selftrain(&io.model, &io.input, &io.out, &cfg).map_err(with("selftrain"))
        }
        Command::Evaluate { io, cfg } => {
            cfg.resolve().map_err(with("evaluate"))?;
            stages::cmd_evaluate(&io.model, &io.input, &io.out).map_err(with("evaluate"))
        }
        Command::Roc { io, cfg } => {
            cfg.resolve().map_err(with("roc"))?;
            stages::cmd_roc(&io.model, &io.input, &io.out).map_err(with("roc"))
        }
        Command::Pipeline { io, cfg } => {
            let cfg = cfg.resolve().map_err(with("pipeline"))?;
            stages::run_pipeline(&io.input, &io.out, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage text on stderr, uniform exit status 1
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((stage, msg)) => {
            eprintln!("ERROR {stage}: {msg}");
            ExitCode::from(1)
        }
    }
}
