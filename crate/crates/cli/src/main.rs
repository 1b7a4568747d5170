use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fbmrate_cli::commands::{self, RunContext};
use fbmrate_cli::AppResult;
use fbmrate_core::fbm::SamplingMethod;

#[derive(Parser)]
#[command(
    name = "fbmrate",
    version,
    about = "Exact fBm sampling, pathwise-integral discretization rates, \
             level-crossing analytics and fractional calculus"
)]
struct Cli {
    /// Override every seed (config files included).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; defaults to the available parallelism. Results are
    /// identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suppress progress and config echo; never suppresses result output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Cholesky,
    Circulant,
}

impl From<MethodArg> for SamplingMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Cholesky => SamplingMethod::Cholesky,
            MethodArg::Circulant => SamplingMethod::CirculantEmbedding,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample fractional Brownian motion paths to CSV
    /// (columns path_id,i,t,value).
    SimulatePaths {
        /// Hurst parameter in (0, 1).
        #[arg(long)]
        hurst: f64,
        /// Grid steps; the path has steps+1 points on [0, 1].
        #[arg(long)]
        steps: usize,
        /// Number of paths.
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        out: PathBuf,
    },

    /// Run a Monte Carlo convergence-rate experiment from a JSON config.
    EstimateRate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },

    /// Sweep exact crossing probabilities against the closed-form bound.
    CrossingBound {
        #[arg(long)]
        hurst: f64,
        /// lo:hi:count
        #[arg(long, allow_hyphen_values = true)]
        s_grid: String,
        /// lo:hi:count
        #[arg(long, allow_hyphen_values = true)]
        t_grid: String,
        /// lo:hi:count
        #[arg(long, allow_hyphen_values = true)]
        a_grid: String,
        #[arg(long, default_value_t = 64)]
        quadrature_points: usize,
        #[arg(long)]
        out: PathBuf,
    },

    /// Besov seminorms of a sampled path, emitted as JSON.
    Besov {
        /// CSV with a 'value' column (simulate-paths output works).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        beta: f64,
        /// Which path to read when the CSV holds several.
        #[arg(long, default_value_t = 0)]
        path_id: u64,
        /// Interval length when the CSV has no time column.
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
    },

    /// Empirical L1 error of the left-point sums against the pathwise
    /// change-of-variable value, per dyadic n.
    VerifyIto {
        #[arg(long)]
        hurst: f64,
        /// Fine grid (power of two).
        #[arg(long)]
        steps: usize,
        /// Monte Carlo replicates.
        #[arg(long)]
        paths: usize,
        /// Integrand description file (JSON).
        #[arg(long)]
        integrand: PathBuf,
    },
}

fn dispatch(cli: Cli) -> AppResult<()> {
    let threads = cli.threads.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let ctx = RunContext {
        threads,
        quiet: cli.quiet,
        seed_override: cli.seed,
    };
    match cli.command {
        Command::SimulatePaths { hurst, steps, count, method, out } => {
            commands::simulate_paths::run(&ctx, hurst, steps, count, method.into(), &out)
        }
        Command::EstimateRate { config, out } => commands::estimate_rate::run(&ctx, &config, &out),
        Command::CrossingBound { hurst, s_grid, t_grid, a_grid, quadrature_points, out } => {
            commands::crossing_bound::run(
                &ctx,
                hurst,
                &s_grid,
                &t_grid,
                &a_grid,
                quadrature_points,
                &out,
            )
        }
        Command::Besov { input, beta, path_id, t_max } => {
            commands::besov::run(&ctx, &input, beta, path_id, t_max)
        }
        Command::VerifyIto { hurst, steps, paths, integrand } => {
            commands::verify_ito::run(&ctx, hurst, steps, paths, &integrand)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
