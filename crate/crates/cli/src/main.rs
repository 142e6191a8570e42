//! `hvclust`: analytic clustering curves, simulations and their comparison for
//! scale-free hidden-variable graphs.
//!
//! Artifacts go to `--out`, else to `$HVCLUST_OUT_DIR/<command>.<ext>`, else to
//! standard output. A one-line summary is printed on standard error. Exit codes:
//! 0 success, 1 I/O failure, 2 invalid input, 3 numerical failure. Every failure
//! except a flag the parser rejects also prints an error object on standard output.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hvclust::GeneratorKind;

#[derive(Debug, Parser)]
#[command(name = "hvclust", version, about = "Clustering in scale-free hidden-variable random graphs")]
pub struct Cli {
    /// Worker threads for replicas and grids (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for artifacts without an explicit path.
    #[arg(long, global = true, env = "HVCLUST_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    /// Relative tolerance of every quadrature.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub rel_tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Population {
    /// Connection kernel: max-dense, poisson or max-random.
    #[arg(long, default_value = "max-dense")]
    pub kernel: String,
    /// Power-law exponent, in [2, 3].
    #[arg(long)]
    pub tau: f64,
    /// Smallest hidden variable.
    #[arg(long, default_value_t = 1.0)]
    pub hmin: f64,
    /// Number of vertices; scientific notation such as 1e6 is accepted.
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct Replicas {
    #[arg(long, default_value_t = 100)]
    pub replicas: usize,
    /// Master seed; replica r uses seed ^ splitmix64(r).
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "fast")]
    pub generator: GeneratorKind,
    /// Number of logarithmic hidden-variable bins over [h_min, h_c].
    #[arg(long, default_value_t = hvclust::clustering::DEFAULT_H_BINS)]
    pub bins: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Average clustering (JSON), or the local curve c(h) as CSV with --h / --grid.
    Analytic {
        #[command(flatten)]
        pop: Population,
        /// Hidden values for the local curve, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "grid")]
        h: Vec<f64>,
        /// Geometric grid lo:hi:count for the local curve.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(f64, f64, usize)>,
        /// Closed form of the max-dense or max-random kernel next to quadrature.
        #[arg(long, conflicts_with_all = ["h", "grid"])]
        closed_form: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulated clustering pooled over replicas (JSON).
    Simulate {
        #[command(flatten)]
        pop: Population,
        #[command(flatten)]
        rep: Replicas,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-bin clustering curve as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Edge list of replica 0 ("i j" per line, 0-based, i < j).
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Simulation next to the analytic curves: JSON summary and CSV curve.
    Compare {
        #[command(flatten)]
        pop: Population,
        #[command(flatten)]
        rep: Replicas,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Size N at which clustering stops persisting, for threshold t.
    Persistence {
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 2.0)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expected maximum of N untruncated hidden variables and its bounds.
    NaturalCutoff {
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 1.0)]
        hmin: f64,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        /// Also estimate by Monte Carlo with this many replicates.
        #[arg(long)]
        monte_carlo: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dominant terms of the closed forms at s = tau - 2 (CSV).
    Table2 {
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5])]
        s: Vec<f64>,
        /// Print fixed decimals instead of 17 significant digits.
        #[arg(long)]
        decimals: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical check of the kernel conditions on a geometric u grid (JSON).
    ValidateKernel {
        #[arg(long)]
        kernel: String,
        #[arg(long, value_parser = parse_grid, default_value = "1e-6:1e6:241")]
        grid: (f64, f64, usize),
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A vertex count, accepting `10000` as well as `1e4`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(x.is_finite() && x >= 1.0 && x.fract() == 0.0 && x <= 9.007_199_254_740_992e15) {
        return Err(format!("{s:?} is not a positive integer"));
    }
    Ok(x as u64)
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(format!("grid must be lo:hi:count, got {s:?}"));
    };
    let lo: f64 = lo.parse().map_err(|_| format!("bad grid start {lo:?}"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad grid end {hi:?}"))?;
    let count: usize = count.parse().map_err(|_| format!("bad grid count {count:?}"))?;
    if !(lo > 0.0 && hi > lo && hi.is_finite() && count >= 2) {
        return Err(format!("grid needs 0 < lo < hi and count >= 2, got {s:?}"));
    }
    Ok((lo, hi, count))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            clap::Error::raw(clap::error::ErrorKind::InvalidValue, "--threads must be at least 1\n").exit();
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().expect("global pool is built once");
    }
    match commands::run(&cli) {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            print!("{}", output::to_json(&e.report()));
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code())
        }
    }
}
