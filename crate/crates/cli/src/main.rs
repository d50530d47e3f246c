use std::path::PathBuf;
use std::process::ExitCode;

use backbone_core::backbone::{DegreeSource, Method, PrunePolicy};
use backbone_core::community::{Listening, SlpaParams, DEFAULT_ITERATIONS, DEFAULT_THRESHOLD};
use backbone_core::harness::{self, RunConfig};
use backbone_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "backbone", version, about = "Extract and compare weighted network backbones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write backbone edge lists and provenance files for every run
    Extract(RunArgs),
    /// Measure every backbone and method pair, averaged over runs
    Compare(RunArgs),
    /// Render a backbone as Graphviz DOT, colored by community
    ExportDot {
        /// Backbone edge list
        #[arg(long)]
        backbone: PathBuf,
        /// Community cover JSON
        #[arg(long)]
        cover: PathBuf,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Ego,
    Hubs,
    Disparity,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    SkipBridges,
    HaltOnBridge,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ListeningArg {
    Weighted,
    Unweighted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DegreeArg {
    Backbone,
    Source,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Edge list: `src dst [weight]` per line, `#` comments
    #[arg(long)]
    input: PathBuf,
    /// Methods to run; repeat or comma-separate
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    method: Vec<MethodArg>,
    /// Backbone size as a fraction of the network's nodes
    #[arg(long, default_value_t = 0.3)]
    s: f64,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Run i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    slpa_iters: usize,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    slpa_threshold: f64,
    #[arg(long, value_enum, default_value = "weighted")]
    slpa_listening: ListeningArg,
    #[arg(long, value_enum, default_value = "halt-on-bridge")]
    prune_policy: PolicyArg,
    /// Degree used to rank nodes during size control
    #[arg(long, value_enum, default_value = "backbone")]
    degree_source: DegreeArg,
    /// Fixed disparity threshold; disables size matching
    #[arg(long)]
    alpha: Option<f64>,
    /// Precomputed cover JSON used for every run
    #[arg(long)]
    cover: Option<PathBuf>,
    /// Weight for lines without one
    #[arg(long, default_value_t = 1.0)]
    default_weight: f64,
    #[arg(long, default_value = "output")]
    out: PathBuf,
}

impl RunArgs {
    fn config(self) -> RunConfig {
        let mut methods = Vec::new();
        for m in self.method {
            match m {
                MethodArg::Ego => methods.push(Method::Ego),
                MethodArg::Hubs => methods.push(Method::Hubs),
                MethodArg::Disparity => methods.push(Method::Disparity),
                MethodArg::All => methods.extend(Method::ALL),
            }
        }
        RunConfig {
            input: self.input,
            methods,
            s: self.s,
            runs: self.runs,
            base_seed: self.seed,
            slpa: SlpaParams {
                iterations: self.slpa_iters,
                threshold: self.slpa_threshold,
                seed: self.seed,
                listening: match self.slpa_listening {
                    ListeningArg::Weighted => Listening::Weighted,
                    ListeningArg::Unweighted => Listening::Unweighted,
                },
            },
            policy: match self.prune_policy {
                PolicyArg::SkipBridges => PrunePolicy::SkipBridges,
                PolicyArg::HaltOnBridge => PrunePolicy::HaltOnBridge,
            },
            degree_source: match self.degree_source {
                DegreeArg::Backbone => DegreeSource::Backbone,
                DegreeArg::Source => DegreeSource::Source,
            },
            alpha: self.alpha,
            cover: self.cover,
            out: self.out,
            default_weight: self.default_weight,
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Extract(args) => {
            let summary = harness::cmd_extract(&args.config())?;
            for f in &summary.failures {
                eprintln!("run {} (seed {}): {}", f.run, f.seed, f.error);
            }
            println!("{} of {} runs extracted", summary.completed, summary.runs);
        }
        Command::Compare(args) => {
            let report = harness::cmd_compare(&args.config())?;
            for f in &report.failures {
                eprintln!("run {} (seed {}): {}", f.run, f.seed, f.error);
            }
            print!("{}", report.to_table());
        }
        Command::ExportDot { backbone, cover, out } => {
            let export = harness::cmd_export_dot(&backbone, &cover)?;
            if export.missing > 0 {
                eprintln!("warning: {} nodes missing from the cover", export.missing);
            }
            match out {
                Some(path) => std::fs::write(path, &export.text)?,
                None => print!("{}", export.text),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::exit_code(&e) as u8)
        }
    }
}
