use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kglab::embed::TrainConfig;
use kglab::pipeline::{self, EvalOptions, Task};
use kglab::walk::WalkConfig;

#[derive(Parser)]
#[command(name = "kglab", version, about = "Knowledge-graph materialization and embedding lab")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct WalkArgs {
    /// Walks started from every entity.
    #[arg(long, default_value_t = 500)]
    walks: usize,
    /// Hops per walk.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl From<WalkArgs> for WalkConfig {
    fn from(a: WalkArgs) -> Self {
        WalkConfig {
            walks_per_node: a.walks,
            depth: a.depth,
            seed: a.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Saturate a graph under a T-box.
    Materialize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tbox: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Report path; defaults to <out>.report.txt.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Extract a random-walk corpus.
    Walk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        walk: WalkArgs,
    },
    /// Train skip-gram embeddings on a walk corpus.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long, default_value_t = 10)]
        epochs: usize,
        #[arg(long, default_value_t = 25)]
        negatives: usize,
        #[arg(long, default_value_t = 0.025)]
        lr: f64,
        #[arg(long, default_value_t = 1e-4)]
        min_lr: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Single-threaded, bit-reproducible training.
        #[arg(long)]
        deterministic: bool,
    },
    /// Score embeddings on a downstream task.
    Eval {
        #[arg(long)]
        embeddings: PathBuf,
        /// classification, regression, similarity, relatedness or docsim.
        #[arg(long)]
        task: String,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Compare predicate distributions of walks over two graphs.
    Compare {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        enriched: PathBuf,
        /// Text report; the CSV goes next to it.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        #[command(flatten)]
        walk: WalkArgs,
    },
    /// Run every stage from a config file.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(command: Command) -> Result<(), pipeline::Error> {
    match command {
        Command::Materialize {
            graph,
            tbox,
            out,
            report,
        } => {
            let report_path = report.unwrap_or_else(|| {
                let mut p = out.clone().into_os_string();
                p.push(".report.txt");
                PathBuf::from(p)
            });
            let report = pipeline::cmd_materialize(&graph, tbox.as_deref(), &out, &report_path)?;
            print!("{}", pipeline::materialization_report_text(&report));
        }
        Command::Walk { graph, out, walk } => {
            let n = pipeline::cmd_walk(&graph, walk.into(), &out)?;
            println!("walks={n}");
        }
        Command::Train {
            corpus,
            out,
            dim,
            window,
            epochs,
            negatives,
            lr,
            min_lr,
            seed,
            deterministic,
        } => {
            let config = TrainConfig {
                dim,
                window,
                epochs,
                negatives,
                initial_lr: lr,
                min_lr,
                seed,
                deterministic,
                ..TrainConfig::default()
            };
            let model = pipeline::cmd_train(&corpus, &config, &out)?;
            println!("vocab={}", model.vectors.len());
            for (i, loss) in model.epoch_losses.iter().enumerate() {
                println!("epoch_{}_loss={loss}", i + 1);
            }
        }
        Command::Eval {
            embeddings,
            task,
            dataset,
            out,
            folds,
            seed,
        } => {
            let task: Task = task.parse()?;
            let report = pipeline::cmd_eval(&embeddings, task, &dataset, &out, EvalOptions { folds, seed })?;
            print!("{}", pipeline::eval_report_text(&report));
        }
        Command::Compare {
            original,
            enriched,
            out,
            top_k,
            walk,
        } => {
            let cmp = pipeline::cmd_compare(&original, &enriched, walk.into(), top_k, &out)?;
            print!("{cmp}");
        }
        Command::Pipeline { config } => {
            let manifest = pipeline::cmd_pipeline(&config)?;
            print!("{manifest}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
