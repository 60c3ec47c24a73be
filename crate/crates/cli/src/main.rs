use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cliffbundle_cli::{eval_quantity, metrics_list, render_report, run_suite, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "cliffbundle", version, about = "Clifford-bundle identity checker")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an identity suite at seeded random points of a metric.
    Check {
        /// algebra | geometry | transforms | variational | coupling | all
        #[arg(long)]
        suite: String,
        /// builtin metric name or path to a metric file
        #[arg(long)]
        metric: String,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// override every check's intrinsic tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// also write a JSON report to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate a single quantity at a point.
    Eval {
        #[arg(long)]
        metric: String,
        /// scalar-curvature | einstein | omega | extended-christoffel |
        /// extended-curvature-trace | lagrangian-densities | q-tensor
        #[arg(long)]
        quantity: String,
        /// four comma-separated coordinates, e.g. "2,0,0,0"
        #[arg(long)]
        point: String,
    },
    /// Metric catalog operations.
    Metrics {
        #[command(subcommand)]
        cmd: MetricsCmd,
    },
}

#[derive(Subcommand)]
enum MetricsCmd {
    /// List the builtin metric names.
    List,
}

fn run(cli: Cli) -> ExitCode {
    match cli.cmd {
        Cmd::Check {
            suite,
            metric,
            points,
            seed,
            tol,
            json,
        } => {
            let Some(suite) = Suite::parse(&suite) else {
                eprintln!("error: unknown suite '{suite}'");
                return ExitCode::from(2);
            };
            if points == 0 {
                eprintln!("error: --points must be at least 1");
                return ExitCode::from(2);
            }
            if let Some(t) = tol {
                if !(t > 0.0) {
                    eprintln!("error: --tol must be positive");
                    return ExitCode::from(2);
                }
            }
            let cfg = SuiteConfig {
                suite,
                metric,
                points,
                seed,
                tol,
            };
            let report = match run_suite(&cfg) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            print!("{}", render_report(&report));
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).expect("serialize report");
                if let Err(e) = std::fs::write(&path, text + "\n") {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Cmd::Eval {
            metric,
            quantity,
            point,
        } => match eval_quantity(&metric, &quantity, &point) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Cmd::Metrics {
            cmd: MetricsCmd::List,
        } => {
            print!("{}", metrics_list());
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // nested-jet seeding in the variational checks needs a deep stack
    std::thread::Builder::new()
        .stack_size(256 * 1024 * 1024)
        .spawn(move || run(cli))
        .expect("spawn worker")
        .join()
        .expect("worker panicked")
}
