//! Triangle counts and clustering statistics of a [`Graph`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::Graph;
use crate::grid::geometric_grid;
use crate::stats::RunningStats;

/// Largest `N` the triple-enumeration oracle accepts.
pub const BRUTE_FORCE_CAP: usize = 200;

/// Number of triangles through each vertex.
///
/// Each edge is oriented from lower to higher `(degree, index)` rank; every
/// triangle is then found exactly once, at its lowest-ranked vertex, by
/// intersecting two sorted forward lists.
pub fn count_triangles(graph: &Graph) -> Vec<u64> {
    let n = graph.n();
    let degrees = graph.degrees();
    let rank_less = |x: usize, y: usize| (degrees[x], x) < (degrees[y], y);
    let forward: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|v| graph.neighbors(v).iter().copied().filter(|&w| rank_less(v, w as usize)).collect())
        .collect();

    (0..n)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut counts, v| {
                let fv = &forward[v];
                for &w in fv {
                    let fw = &forward[w as usize];
                    let (mut x, mut y) = (0, 0);
                    while x < fv.len() && y < fw.len() {
                        match fv[x].cmp(&fw[y]) {
                            std::cmp::Ordering::Less => x += 1,
                            std::cmp::Ordering::Greater => y += 1,
                            std::cmp::Ordering::Equal => {
                                counts[v] += 1;
                                counts[w as usize] += 1;
                                counts[fv[x] as usize] += 1;
                                x += 1;
                                y += 1;
                            }
                        }
                    }
                }
                counts
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Triangle counts by enumerating every vertex triple; an oracle for small graphs.
pub fn brute_force_triangles(graph: &Graph) -> Result<Vec<u64>> {
    let n = graph.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge { n, cap: BRUTE_FORCE_CAP });
    }
    let mut counts = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if !graph.has_edge(i, j) {
                continue;
            }
            for k in j + 1..n {
                if graph.has_edge(i, k) && graph.has_edge(j, k) {
                    counts[i] += 1;
                    counts[j] += 1;
                    counts[k] += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// `c_i = 2 T_i / (k_i (k_i - 1))`, zero for `k_i < 2`.
pub fn local_clustering(graph: &Graph, triangles: &[u64]) -> Vec<f64> {
    (0..graph.n())
        .map(|v| {
            let k = graph.degree(v) as f64;
            if k < 2.0 {
                0.0
            } else {
                2.0 * triangles[v] as f64 / (k * (k - 1.0))
            }
        })
        .collect()
}

/// Logarithmic hidden-variable bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HBinSpec {
    pub edges: Vec<f64>,
}

/// Default number of hidden-variable bins.
pub const DEFAULT_H_BINS: usize = 20;

impl HBinSpec {
    /// `count` bins with geometrically spaced edges over `[lo, hi]`.
    pub fn logarithmic(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(domain("need at least one bin"));
        }
        Ok(HBinSpec { edges: geometric_grid(lo, hi, count + 1)? })
    }

    pub fn len(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bin holding `h`; values on the top edge go to the last bin.
    pub fn locate(&self, h: f64) -> Option<usize> {
        let last = *self.edges.last()?;
        if !(h >= self.edges[0] && h <= last) {
            return None;
        }
        let k = self.edges.partition_point(|&e| e <= h);
        Some(k.saturating_sub(1).min(self.len() - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HBin {
    pub lo: f64,
    pub hi: f64,
    /// Geometric center `sqrt(lo * hi)`.
    pub center: f64,
    pub stats: RunningStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeBin {
    pub degree: usize,
    pub stats: RunningStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringReport {
    pub n: usize,
    pub edges: usize,
    /// Mean of `c_i` over all vertices.
    pub c_global: f64,
    /// Mean of `c_i` over vertices of degree at least two (`None` if there are none).
    pub c_degree2: Option<f64>,
    /// `3 * triangles / connected triples`.
    pub transitivity: Option<f64>,
    pub triangles_total: u64,
    pub bins_h: Vec<HBin>,
    pub bins_k: Vec<DegreeBin>,
}

/// Clustering summary of one graph; vertices outside the bin range are left out
/// of `bins_h` only.
pub fn report(graph: &Graph, bins: &HBinSpec) -> ClusteringReport {
    let triangles = count_triangles(graph);
    let c = local_clustering(graph, &triangles);
    let n = graph.n();

    let mut bins_h: Vec<HBin> = bins
        .edges
        .windows(2)
        .map(|w| HBin { lo: w[0], hi: w[1], center: (w[0] * w[1]).sqrt(), stats: RunningStats::default() })
        .collect();
    let mut by_degree: BTreeMap<usize, RunningStats> = BTreeMap::new();
    let mut deg2 = RunningStats::default();
    let mut triples = 0.0;
    for (v, (&cv, &h)) in c.iter().zip(graph.hidden()).enumerate() {
        let k = graph.degree(v);
        if let Some(b) = bins.locate(h) {
            bins_h[b].stats.push(cv);
        }
        by_degree.entry(k).or_default().push(cv);
        if k >= 2 {
            deg2.push(cv);
            triples += (k * (k - 1) / 2) as f64;
        }
    }
    let incidences: u64 = triangles.iter().sum();
    ClusteringReport {
        n,
        edges: graph.edge_count(),
        c_global: if n == 0 { 0.0 } else { c.iter().sum::<f64>() / n as f64 },
        c_degree2: deg2.mean(),
        transitivity: (triples > 0.0).then(|| incidences as f64 / triples),
        triangles_total: incidences / 3,
        bins_h,
        bins_k: by_degree.into_iter().map(|(degree, stats)| DegreeBin { degree, stats }).collect(),
    }
}

/// `<k(k-1)>^2 / (N <k>^3)` from a degree sequence: the clustering of a graph
/// without degree correlations.
pub fn uncorrelated_c_formula(degrees: &[usize], n: usize) -> Result<f64> {
    if degrees.is_empty() || n == 0 {
        return Err(domain("need a non-empty degree sequence and n >= 1"));
    }
    let m = degrees.len() as f64;
    let k1 = degrees.iter().map(|&k| k as f64).sum::<f64>() / m;
    if k1 == 0.0 {
        return Err(domain("all degrees are zero"));
    }
    let k2 = degrees.iter().map(|&k| (k as f64) * (k as f64 - 1.0)).sum::<f64>() / m;
    Ok(k2 * k2 / (n as f64 * k1.powi(3)))
}
