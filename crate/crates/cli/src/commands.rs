use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use hvclust::analytic::{
    a_factor, c_average, c_bounds, c_max_closed, default_u0_grid, local_clustering_analytic,
    local_clustering_bin_average, persistence_threshold_n, Bounds,
};
use hvclust::clustering::HBinSpec;
use hvclust::grid::geometric_grid;
use hvclust::lerch::{self, table2_terms, CLOSED_FORM_GUARD};
use hvclust::powerlaw::{expected_max_bounds, expected_max_untruncated, monte_carlo_expected_max, McEstimate};
use hvclust::seeding::SEED_DERIVATION;
use hvclust::simulate::{self, SimulationConfig, SimulationSummary};
use hvclust::{validate_fclass, AnalyticConfig, CutoffScheme, Error, FClassReport, Kernel, KernelId, PowerLawModel};
use serde::Serialize;

use crate::output::{cell, sig17, to_json, Destination, Table};
use crate::{Cli, Command, Population, Replicas};

pub struct CliError {
    kind: &'static str,
    pub message: String,
}

#[derive(Serialize)]
pub struct ErrorReport<'a> {
    error: &'a str,
    message: &'a str,
    exit_code: u8,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self.kind {
            "domain" | "constraint" | "too_large" => 2,
            "io" => 1,
            _ => 3,
        }
    }

    pub fn report(&self) -> ErrorReport<'_> {
        ErrorReport { error: self.kind, message: &self.message, exit_code: self.exit_code() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Domain(_) => "domain",
            Error::Constraint(_) => "constraint",
            Error::Quadrature { .. } => "quadrature",
            Error::Series { .. } => "series",
            Error::CrossCheck(_) => "cross_check",
            Error::TooLarge { .. } => "too_large",
            Error::Graph(_) => "graph",
        };
        CliError { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { kind: "io", message: e.to_string() }
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Setup {
    kernel: Kernel,
    model: PowerLawModel,
    scheme: CutoffScheme,
}

fn setup(pop: &Population) -> Result<Setup> {
    let kernel = Kernel::from_name(&pop.kernel)?;
    let model = PowerLawModel::new(pop.tau, pop.hmin, pop.n)?;
    let scheme = model.default_cutoffs()?;
    Ok(Setup { kernel, model, scheme })
}

fn simulation_config(s: &Setup, rep: &Replicas) -> Result<SimulationConfig> {
    let mut cfg = SimulationConfig::new(s.kernel.clone(), s.model, rep.replicas, rep.seed)?;
    cfg.generator = rep.generator;
    let hi = s.scheme.h_c.max(s.model.h_min() * (1.0 + 1e-9));
    cfg.bins = HBinSpec::logarithmic(s.model.h_min(), hi, rep.bins)?;
    cfg.validate()?;
    Ok(cfg)
}

fn place<'a>(explicit: Option<&'a Path>, cli: &'a Cli, name: &'a str, stdout: bool) -> Destination<'a> {
    Destination { explicit, out_dir: cli.out_dir.as_deref(), default_name: name, stdout_fallback: stdout }
}

fn written(where_: Option<String>) -> String {
    where_.unwrap_or_else(|| "not written".into())
}

/// Runs one subcommand and returns its one-line summary.
pub fn run(cli: &Cli) -> Result<String> {
    let cfg = AnalyticConfig { rel_tol: cli.rel_tol, ..AnalyticConfig::default() };
    cfg.validate()?;
    match &cli.command {
        Command::Analytic { pop, h, grid, closed_form, out } => {
            let s = setup(pop)?;
            if *closed_form {
                let report = closed_form_report(&s, &cfg)?;
                let to = place(out.as_deref(), cli, "analytic.json", true).write(&to_json(&report))?;
                return Ok(format!(
                    "analytic {} closed form {} vs quadrature {} (relative {:.2e}) -> {}",
                    report.kernel,
                    sig17(report.c_closed),
                    sig17(report.c_quadrature),
                    report.rel_diff,
                    written(to)
                ));
            }
            let hs: Vec<f64> = match grid {
                Some((lo, hi, count)) => geometric_grid(*lo, *hi, *count)?,
                None => h.clone(),
            };
            if hs.is_empty() {
                let r = c_average(&s.kernel, &s.scheme, pop.tau, pop.hmin, s.model.n(), &cfg)?;
                let to = place(out.as_deref(), cli, "analytic.json", true).write(&to_json(&r))?;
                return Ok(format!(
                    "analytic {} tau={} N={}: C = {} -> {}",
                    r.kernel,
                    r.tau,
                    pop.n,
                    sig17(r.c_avg),
                    written(to)
                ));
            }
            let mut table = Table::new(vec!["h", "c_analytic"]);
            for &x in &hs {
                let c = local_clustering_analytic(&s.kernel, &s.scheme, pop.tau, pop.hmin, x, &cfg)?;
                table.push(vec![sig17(x), sig17(c.value)]);
            }
            let to = place(out.as_deref(), cli, "analytic.csv", true).write(&table.to_csv())?;
            Ok(format!("analytic {} local curve at {} points -> {}", s.kernel.label(), hs.len(), written(to)))
        }
        Command::Simulate { pop, rep, out, csv, edges } => {
            let s = setup(pop)?;
            let sim = simulation_config(&s, rep)?;
            if let Some(path) = edges {
                let g = simulate::replica_graph(&sim, 0)?;
                g.write_edge_list(BufWriter::new(File::create(path)?))?;
            }
            let summary = simulate::run(&sim)?;
            let to = place(out.as_deref(), cli, "simulate.json", true).write(&to_json(&summary))?;
            let curve = place(csv.as_deref(), cli, "simulate.csv", false).write(&simulation_csv(&summary))?;
            Ok(format!(
                "simulate {} tau={} N={} replicas={} seed={}: C = {} +/- {} -> {}{}",
                summary.kernel,
                summary.tau,
                summary.n,
                summary.replicas,
                summary.seed,
                sig17(summary.c_global.mean),
                cell(summary.c_global.stderr),
                written(to),
                curve.map(|c| format!(", curve -> {c}")).unwrap_or_default()
            ))
        }
        Command::Compare { pop, rep, out, csv } => {
            let s = setup(pop)?;
            let sim = simulation_config(&s, rep)?;
            let summary = simulate::run(&sim)?;
            let analytic = c_average(&s.kernel, &s.scheme, pop.tau, pop.hmin, s.model.n(), &cfg)?;
            let mut table = Table::new(vec!["h_bin_center", "c_empirical", "stderr", "c_analytic"]);
            for bin in &summary.bins_h {
                let theory =
                    local_clustering_bin_average(&s.kernel, &s.scheme, pop.tau, pop.hmin, bin.lo, bin.hi, &cfg)?;
                table.push(vec![
                    sig17(bin.center),
                    cell(bin.replica_mean),
                    cell(bin.replica_stderr),
                    sig17(theory.value),
                ]);
            }
            let report = CompareReport {
                kernel: summary.kernel.clone(),
                tau: pop.tau,
                h_min: pop.hmin,
                n: pop.n,
                replicas: summary.replicas,
                seed: summary.seed,
                seed_derivation: SEED_DERIVATION,
                binning: summary.binning.clone(),
                c_empirical: summary.c_global.mean,
                stderr: summary.c_global.stderr,
                c_analytic: analytic.c_avg,
                c_max: analytic.bound_high,
                bounds: c_bounds(
                    &s.kernel,
                    &s.scheme,
                    pop.tau,
                    pop.hmin,
                    s.model.n(),
                    &default_u0_grid(&s.scheme),
                    &cfg,
                )?,
            };
            let to = place(out.as_deref(), cli, "compare.json", true).write(&to_json(&report))?;
            let curve = place(csv.as_deref(), cli, "compare.csv", false).write(&table.to_csv())?;
            Ok(format!(
                "compare {} tau={} N={}: C_empirical = {} +/- {}, C_analytic = {} -> {}{}",
                report.kernel,
                report.tau,
                report.n,
                sig17(report.c_empirical),
                cell(report.stderr),
                sig17(report.c_analytic),
                written(to),
                curve.map(|c| format!(", curve -> {c}")).unwrap_or_default()
            ))
        }
        Command::Persistence { tau, t, out } => {
            let n = persistence_threshold_n(*tau, *t)?;
            let report = PersistenceReport { tau: *tau, t: *t, n };
            let to = place(out.as_deref(), cli, "persistence.json", true).write(&to_json(&report))?;
            Ok(format!("persistence tau={tau} t={t}: N = {n:.3e} -> {}", written(to)))
        }
        Command::NaturalCutoff { tau, hmin, n, monte_carlo, seed, out } => {
            let model = PowerLawModel::new(*tau, *hmin, *n)?;
            let exact = expected_max_untruncated(*tau, *hmin, *n)?;
            let (lower, upper) = expected_max_bounds(*tau, *hmin, *n)?;
            let monte_carlo = match monte_carlo {
                Some(reps) => Some(MonteCarlo {
                    estimate: monte_carlo_expected_max(&model, *reps, *seed)?,
                    seed: *seed,
                    seed_derivation: SEED_DERIVATION,
                }),
                None => None,
            };
            let report = NaturalCutoffReport { tau: *tau, h_min: *hmin, n: *n, exact, lower, upper, monte_carlo };
            let to = place(out.as_deref(), cli, "natural-cutoff.json", true).write(&to_json(&report))?;
            Ok(format!("natural-cutoff tau={tau} N={n}: E[max] = {} -> {}", sig17(exact), written(to)))
        }
        Command::Table2 { s, decimals, out } => {
            let fmt = |x: f64| match decimals {
                Some(d) => format!("{x:.d$}", d = *d),
                None => sig17(x),
            };
            let mut table =
                Table::new(vec!["s", "pi_over_sin", "inv_s_one_minus_s", "pi2_cos_over_sin2", "inv_square_diff"]);
            for &x in s {
                let r = table2_terms(x)?;
                table.push(vec![
                    fmt(r.s),
                    fmt(r.pi_over_sin),
                    fmt(r.inv_s_one_minus_s),
                    fmt(r.pi2_cos_over_sin2),
                    fmt(r.inv_square_diff),
                ]);
            }
            let to = place(out.as_deref(), cli, "table2.csv", true).write(&table.to_csv())?;
            Ok(format!("table2: {} rows -> {}", s.len(), written(to)))
        }
        Command::ValidateKernel { kernel, grid, out } => {
            let k = Kernel::from_name(kernel)?;
            let (lo, hi, count) = *grid;
            let report = KernelReport {
                kernel: k.label().to_string(),
                grid: GridSpec { lo, hi, count },
                all_passed: false,
                checks: validate_fclass(&k, &geometric_grid(lo, hi, count)?),
            };
            let report = KernelReport { all_passed: report.checks.all_passed(), ..report };
            let to = place(out.as_deref(), cli, "validate-kernel.json", true).write(&to_json(&report))?;
            Ok(format!("validate-kernel {}: all passed = {} -> {}", report.kernel, report.all_passed, written(to)))
        }
    }
}

fn simulation_csv(summary: &SimulationSummary) -> String {
    let mut table = Table::new(vec![
        "h_bin_lo",
        "h_bin_hi",
        "h_bin_center",
        "count",
        "c_mean",
        "c_stderr_vertices",
        "replicas",
        "c_replica_mean",
        "c_replica_stderr",
    ]);
    for b in &summary.bins_h {
        table.push(vec![
            sig17(b.lo),
            sig17(b.hi),
            sig17(b.center),
            b.count.to_string(),
            cell(b.mean),
            cell(b.stderr),
            b.replicas.to_string(),
            cell(b.replica_mean),
            cell(b.replica_stderr),
        ]);
    }
    table.to_csv()
}

#[derive(Serialize)]
struct ClosedFormReport {
    kernel: String,
    tau: f64,
    h_min: f64,
    n: u64,
    a: f64,
    b: f64,
    alpha: f64,
    a_factor: f64,
    c_closed: f64,
    c_quadrature: f64,
    rel_diff: f64,
}

fn closed_form_report(s: &Setup, cfg: &AnalyticConfig) -> Result<ClosedFormReport> {
    let (tau, h_min, n) = (s.model.tau(), s.model.h_min(), s.model.n());
    let a = a_factor(tau, h_min, n, cfg)?.value;
    let c_closed = match s.kernel.id() {
        KernelId::MaxDense => c_max_closed(&s.scheme, tau, h_min, n, cfg)?,
        KernelId::MaxRandom => {
            if tau - 2.0 < CLOSED_FORM_GUARD || 3.0 - tau < CLOSED_FORM_GUARD {
                return Err(Error::Domain(format!(
                    "the max-random closed form is singular within {CLOSED_FORM_GUARD} of tau = 2 and tau = 3"
                ))
                .into());
            }
            a * lerch::c_maxrandom_closed(&s.scheme, tau, h_min, cfg)?
        }
        _ => {
            return Err(Error::Domain(format!("no closed form for the {} kernel", s.kernel.label())).into());
        }
    };
    let quad = hvclust::c_ab_h(&s.kernel, &s.scheme, tau, h_min, 0.0, cfg)?.value * a;
    Ok(ClosedFormReport {
        kernel: s.kernel.label().to_string(),
        tau,
        h_min,
        n: s.model.n_vertices(),
        a: s.scheme.a,
        b: s.scheme.b,
        alpha: s.scheme.alpha(h_min),
        a_factor: a,
        c_closed,
        c_quadrature: quad,
        rel_diff: ((c_closed - quad) / c_closed).abs(),
    })
}

#[derive(Serialize)]
struct CompareReport {
    kernel: String,
    tau: f64,
    h_min: f64,
    n: u64,
    replicas: usize,
    seed: u64,
    seed_derivation: &'static str,
    binning: String,
    #[serde(rename = "C_empirical")]
    c_empirical: f64,
    stderr: Option<f64>,
    #[serde(rename = "C_analytic")]
    c_analytic: f64,
    #[serde(rename = "C_max")]
    c_max: f64,
    bounds: Bounds,
}

#[derive(Serialize)]
struct PersistenceReport {
    tau: f64,
    t: f64,
    #[serde(rename = "N")]
    n: f64,
}

#[derive(Serialize)]
struct MonteCarlo {
    #[serde(flatten)]
    estimate: McEstimate,
    seed: u64,
    seed_derivation: &'static str,
}

#[derive(Serialize)]
struct NaturalCutoffReport {
    tau: f64,
    h_min: f64,
    n: u64,
    exact: f64,
    lower: f64,
    upper: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<MonteCarlo>,
}

#[derive(Serialize)]
struct GridSpec {
    lo: f64,
    hi: f64,
    count: usize,
}

#[derive(Serialize)]
struct KernelReport {
    kernel: String,
    grid: GridSpec,
    all_passed: bool,
    checks: FClassReport,
}
