//! Replica harness: sample hidden variables, generate a graph, measure clustering,
//! and pool the per-replica reports.
//!
//! Replicas run in parallel on the ambient rayon pool. Replica `r` uses its own
//! stream derived from `(seed, r)` and reports are pooled in replica order, so the
//! summary does not depend on the number of threads.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{report, ClusteringReport, DegreeBin, HBin, HBinSpec, DEFAULT_H_BINS};
use crate::error::{domain, Result};
use crate::graph::Graph;
use crate::graphgen::{generate, GeneratorKind};
use crate::kernels::Kernel;
use crate::powerlaw::{sample_hidden, CutoffScheme, PowerLawModel};
use crate::seeding::{replica_rng, SEED_DERIVATION};
use crate::stats::RunningStats;

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub kernel: Kernel,
    pub model: PowerLawModel,
    pub scheme: CutoffScheme,
    pub replicas: usize,
    pub seed: u64,
    pub generator: GeneratorKind,
    pub bins: HBinSpec,
}

impl SimulationConfig {
    /// Default cutoffs and 20 logarithmic bins over `[h_min, h_c]`.
    pub fn new(kernel: Kernel, model: PowerLawModel, replicas: usize, seed: u64) -> Result<Self> {
        let scheme = model.default_cutoffs()?;
        let bins = HBinSpec::logarithmic(model.h_min(), scheme.h_c.max(model.h_min() * (1.0 + 1e-9)), DEFAULT_H_BINS)?;
        Ok(SimulationConfig { kernel, model, scheme, replicas, seed, generator: GeneratorKind::Fast, bins })
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(domain("need at least one replica"));
        }
        self.scheme.check(self.model.h_min())?;
        if !(self.scheme.h_c > self.model.h_min()) {
            return Err(domain("natural cutoff must exceed h_min to sample hidden variables"));
        }
        if self.model.n_vertices() > u32::MAX as u64 {
            return Err(domain("n exceeds the u32 vertex index range"));
        }
        Ok(())
    }
}

/// Hidden variables (truncated to `[h_min, h_c]`) and graph of replica `r`.
pub fn replica_graph(cfg: &SimulationConfig, r: u64) -> Result<Graph> {
    let mut rng = replica_rng(cfg.seed, r);
    let n = cfg.model.n_vertices() as usize;
    let hidden = sample_hidden(&cfg.model, cfg.scheme.h_c, n, &mut rng)?;
    generate(cfg.generator, &cfg.kernel, hidden, &cfg.scheme, &mut rng)
}

pub fn replica_report(cfg: &SimulationConfig, r: u64) -> Result<ClusteringReport> {
    Ok(report(&replica_graph(cfg, r)?, &cfg.bins))
}

/// One hidden-variable bin pooled over replicas.
///
/// `mean` and `stderr` treat every vertex as an independent draw. Vertices of the
/// same replica share its hubs and are correlated, so `stderr` understates the
/// uncertainty; `replica_mean` and `replica_stderr` are taken over the per-replica
/// bin means (of the replicas where the bin is non-empty) and are the ones to use
/// for comparisons with theory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PooledBin {
    pub lo: f64,
    pub hi: f64,
    pub center: f64,
    pub count: u64,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub replicas: u64,
    pub replica_mean: Option<f64>,
    pub replica_stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PooledDegree {
    pub degree: usize,
    pub count: u64,
    pub mean: f64,
    pub stderr: Option<f64>,
}

/// Mean and standard error across replicas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub stderr: Option<f64>,
}

impl From<&RunningStats> for Summary {
    fn from(s: &RunningStats) -> Self {
        Summary { mean: s.mean().unwrap_or(f64::NAN), stderr: s.stderr() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub kernel: String,
    pub generator: GeneratorKind,
    pub tau: f64,
    pub h_min: f64,
    pub n: u64,
    pub h_s: f64,
    pub h_c: f64,
    pub replicas: usize,
    pub seed: u64,
    pub seed_derivation: String,
    /// How the hidden-variable bins were placed; the edges are in `bins_h`.
    pub binning: String,
    /// Per-replica average clustering over all vertices.
    pub c_global: Summary,
    /// Per-replica average clustering over vertices of degree at least two.
    pub c_degree2: Summary,
    pub transitivity: Summary,
    pub edges: Summary,
    pub mean_degree: Summary,
    pub triangles: Summary,
    /// Vertex-level pooling over all replicas.
    pub bins_h: Vec<PooledBin>,
    pub bins_k: Vec<PooledDegree>,
}

/// Runs every replica and pools the reports.
pub fn run(cfg: &SimulationConfig) -> Result<SimulationSummary> {
    cfg.validate()?;
    let reports: Vec<ClusteringReport> =
        (0..cfg.replicas as u64).into_par_iter().map(|r| replica_report(cfg, r)).collect::<Result<_>>()?;
    Ok(pool(cfg, &reports))
}

/// Pools per-replica reports in the given order.
pub fn pool(cfg: &SimulationConfig, reports: &[ClusteringReport]) -> SimulationSummary {
    let n = cfg.model.n_vertices();
    let mut c_global = RunningStats::default();
    let mut c_degree2 = RunningStats::default();
    let mut transitivity = RunningStats::default();
    let mut edges = RunningStats::default();
    let mut mean_degree = RunningStats::default();
    let mut triangles = RunningStats::default();
    let mut bins_h: Vec<HBin> = cfg
        .bins
        .edges
        .windows(2)
        .map(|w| HBin { lo: w[0], hi: w[1], center: (w[0] * w[1]).sqrt(), stats: RunningStats::default() })
        .collect();
    let mut replica_means = vec![RunningStats::default(); bins_h.len()];
    let mut bins_k: BTreeMap<usize, RunningStats> = BTreeMap::new();

    for rep in reports {
        c_global.push(rep.c_global);
        if let Some(c) = rep.c_degree2 {
            c_degree2.push(c);
        }
        if let Some(t) = rep.transitivity {
            transitivity.push(t);
        }
        edges.push(rep.edges as f64);
        mean_degree.push(2.0 * rep.edges as f64 / n as f64);
        triangles.push(rep.triangles_total as f64);
        for ((acc, means), bin) in bins_h.iter_mut().zip(&mut replica_means).zip(&rep.bins_h) {
            acc.stats.merge(&bin.stats);
            if let Some(m) = bin.stats.mean() {
                means.push(m);
            }
        }
        for DegreeBin { degree, stats } in &rep.bins_k {
            bins_k.entry(*degree).or_default().merge(stats);
        }
    }

    SimulationSummary {
        kernel: cfg.kernel.label().to_string(),
        generator: cfg.generator,
        tau: cfg.model.tau(),
        h_min: cfg.model.h_min(),
        n,
        h_s: cfg.scheme.h_s,
        h_c: cfg.scheme.h_c,
        replicas: reports.len(),
        seed: cfg.seed,
        seed_derivation: SEED_DERIVATION.to_string(),
        binning: describe_bins(&cfg.bins),
        c_global: (&c_global).into(),
        c_degree2: (&c_degree2).into(),
        transitivity: (&transitivity).into(),
        edges: (&edges).into(),
        mean_degree: (&mean_degree).into(),
        triangles: (&triangles).into(),
        bins_h: bins_h
            .into_iter()
            .zip(replica_means)
            .map(|(b, r)| PooledBin {
                lo: b.lo,
                hi: b.hi,
                center: b.center,
                count: b.stats.count,
                mean: b.stats.mean(),
                stderr: b.stats.stderr(),
                replicas: r.count,
                replica_mean: r.mean(),
                replica_stderr: r.stderr(),
            })
            .collect(),
        bins_k: bins_k
            .into_iter()
            .map(|(degree, s)| PooledDegree {
                degree,
                count: s.count,
                mean: s.mean().unwrap_or(f64::NAN),
                stderr: s.stderr(),
            })
            .collect(),
    }
}

fn describe_bins(bins: &HBinSpec) -> String {
    let e = &bins.edges;
    let (lo, hi) = (e[0], e[e.len() - 1]);
    let ratio = (hi / lo).powf(1.0 / bins.len() as f64);
    let geometric = e.windows(2).all(|w| ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-9);
    let kind = if geometric { "logarithmic" } else { "custom" };
    format!("{kind}: {} bins over [{lo}, {hi}], closed on the left, top edge in the last bin", bins.len())
}
