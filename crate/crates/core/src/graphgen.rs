//! Hidden-variable graph generation: each pair `{i, j}` is joined independently
//! with probability `r(h_i h_j / h_s^2)`.
//!
//! [`generate_fast`] samples under the envelope `q = min(1, u) >= r(u)` with
//! geometric skips and thins the proposals, in expected `O(N log N + E)` time.
//! [`generate_naive`] draws one uniform per pair and is kept as its oracle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::Graph;
use crate::kernels::Kernel;
use crate::powerlaw::CutoffScheme;

/// Largest `N` the quadratic generator accepts.
pub const NAIVE_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    #[default]
    Fast,
    Naive,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(GeneratorKind::Fast),
            "naive" => Ok(GeneratorKind::Naive),
            other => Err(domain(format!("unknown generator {other:?} (expected fast or naive)"))),
        }
    }
}

fn check_hidden(hidden: &[f64]) -> Result<()> {
    if hidden.len() > u32::MAX as usize {
        return Err(domain("too many vertices for u32 indices"));
    }
    if let Some(h) = hidden.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
        return Err(domain(format!("hidden variables must be positive and finite, found {h}")));
    }
    Ok(())
}

fn inv_hs2(scheme: &CutoffScheme) -> Result<f64> {
    if !(scheme.h_s.is_finite() && scheme.h_s > 0.0) {
        return Err(domain("structural cutoff must be positive"));
    }
    Ok(scheme.a * scheme.a)
}

pub fn generate<R: Rng + ?Sized>(
    kind: GeneratorKind,
    kernel: &Kernel,
    hidden: Vec<f64>,
    scheme: &CutoffScheme,
    rng: &mut R,
) -> Result<Graph> {
    match kind {
        GeneratorKind::Fast => generate_fast(kernel, hidden, scheme, rng),
        GeneratorKind::Naive => generate_naive(kernel, hidden, scheme, rng),
    }
}

/// One uniform draw per unordered pair, in the order `(0,1), (0,2), ..., (1,2), ...`.
pub fn generate_naive<R: Rng + ?Sized>(
    kernel: &Kernel,
    hidden: Vec<f64>,
    scheme: &CutoffScheme,
    rng: &mut R,
) -> Result<Graph> {
    check_hidden(&hidden)?;
    let n = hidden.len();
    if n > NAIVE_CAP {
        return Err(Error::TooLarge { n, cap: NAIVE_CAP });
    }
    let scale = inv_hs2(scheme)?;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = kernel.r_raw(hidden[i] * hidden[j] * scale);
            if rng.random::<f64>() < p {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Graph::from_edges(hidden, &edges)
}

/// Envelope sampling with geometric skips over vertices sorted by decreasing `h`.
///
/// For a fixed `i` the envelope `q_ij = min(1, h_i h_j / h_s^2)` is nonincreasing in
/// the sorted position `j`, so a skip drawn with the current `p >= q_ij` overshoots
/// nothing; each landing `j` is accepted with probability `r(u_ij) / p`.
pub fn generate_fast<R: Rng + ?Sized>(
    kernel: &Kernel,
    hidden: Vec<f64>,
    scheme: &CutoffScheme,
    rng: &mut R,
) -> Result<Graph> {
    check_hidden(&hidden)?;
    let n = hidden.len();
    let scale = inv_hs2(scheme)?;
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&x, &y| hidden[y as usize].total_cmp(&hidden[x as usize]).then(x.cmp(&y)));
    let sorted: Vec<f64> = order.iter().map(|&v| hidden[v as usize]).collect();

    let mut edges = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let hi = sorted[i];
        let mut j = i + 1;
        let mut p = (hi * sorted[j] * scale).min(1.0);
        while j < n && p > 0.0 {
            if p < 1.0 {
                let u: f64 = rng.random();
                // P(skip >= k) = (1-p)^k
                let skip = ((1.0 - u).ln() / (-p).ln_1p()).floor();
                if skip >= (n - j) as f64 {
                    break;
                }
                j += skip as usize;
            }
            let u = hi * sorted[j] * scale;
            let q = u.min(1.0);
            let r = kernel.r_raw(u);
            if r >= p || rng.random::<f64>() * p < r {
                let (a, b) = (order[i], order[j]);
                edges.push((a.min(b), a.max(b)));
            }
            p = q;
            j += 1;
        }
    }
    Graph::from_edges(hidden, &edges)
}

/// `sum_{i<j} r(h_i h_j / h_s^2)` and the matching Poisson-binomial variance.
pub fn expected_edge_count(kernel: &Kernel, hidden: &[f64], scheme: &CutoffScheme) -> Result<(f64, f64)> {
    check_hidden(hidden)?;
    let scale = inv_hs2(scheme)?;
    let mut mean = 0.0;
    let mut var = 0.0;
    for i in 0..hidden.len() {
        for j in i + 1..hidden.len() {
            let p = kernel.r_raw(hidden[i] * hidden[j] * scale);
            mean += p;
            var += p * (1.0 - p);
        }
    }
    Ok((mean, var))
}
