//! Power-law hidden variables: the mean, the default cutoffs, sampling, and the
//! expected maximum of `N` untruncated draws.

use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{domain, Error, Result};

/// Width of the band around `tau = 2` and `tau = 3` where limit forms replace
/// expressions with removable singularities.
pub const TAU_EPS: f64 = 1e-6;

/// Density `rho(h) ~ h^{-tau}` with `h >= h_min`, for a graph of `n_vertices` vertices.
///
/// `tau` is accepted on the closed interval `[2, 3]`; the endpoints are handled by
/// their limit forms. Operations that are undefined at an endpoint report it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawModel {
    tau: f64,
    h_min: f64,
    n_vertices: u64,
}

impl PowerLawModel {
    pub fn new(tau: f64, h_min: f64, n_vertices: u64) -> Result<Self> {
        if !(tau.is_finite() && (2.0..=3.0).contains(&tau)) {
            return Err(domain(format!("tau must lie in [2, 3], got {tau}")));
        }
        if !(h_min.is_finite() && h_min > 0.0) {
            return Err(domain(format!("h_min must be positive, got {h_min}")));
        }
        if n_vertices == 0 || (n_vertices as f64) <= h_min {
            return Err(domain(format!(
                "need n > h_min so that [h_min, n] is a proper support, got n = {n_vertices}, h_min = {h_min}"
            )));
        }
        Ok(PowerLawModel { tau, h_min, n_vertices })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn h_min(&self) -> f64 {
        self.h_min
    }

    pub fn n_vertices(&self) -> u64 {
        self.n_vertices
    }

    pub fn n(&self) -> f64 {
        self.n_vertices as f64
    }

    /// `<h>` for the density normalized on `[h_min, N]`.
    pub fn mean_h(&self) -> f64 {
        truncated_mean(self.tau, self.h_min, self.n())
    }

    /// `h_s = sqrt(N <h>)` and `h_c = (N <h>)^{1/(tau-1)}`, checked against the
    /// cutoff constraint chain.
    pub fn default_cutoffs(&self) -> Result<CutoffScheme> {
        let x = self.n() * self.mean_h();
        let h_s = x.sqrt();
        // h_c = h_s * b keeps b exactly 1 at tau = 3.
        let b = x.powf((3.0 - self.tau) / (2.0 * (self.tau - 1.0)));
        let scheme = CutoffScheme::new(h_s, h_s * b)?;
        scheme.check(self.h_min)?;
        Ok(scheme)
    }

    /// Distribution truncated to `[h_min, upper]`.
    pub fn truncated(&self, upper: f64) -> Result<TruncatedPowerLaw> {
        TruncatedPowerLaw::new(self.tau, self.h_min, upper)
    }

    /// `E[max of N iid draws]` from the untruncated density on `[h_min, inf)`:
    /// `h_min * Gamma(u) * Gamma(N+1) / Gamma(N+u)` with `u = (tau-2)/(tau-1)`.
    pub fn natural_cutoff_exact(&self) -> Result<f64> {
        expected_max_untruncated(self.tau, self.h_min, self.n_vertices)
    }

    /// `(lower, upper)` with `lower = h_min^u (N <h_inf>)^{1-u}`, `<h_inf> = h_min/u`,
    /// and `upper = 4/3 lower`.
    pub fn natural_cutoff_bounds(&self) -> Result<(f64, f64)> {
        expected_max_bounds(self.tau, self.h_min, self.n_vertices)
    }
}

fn untruncated_shape(tau: f64, h_min: f64, n: u64) -> Result<f64> {
    if !(tau.is_finite() && tau - 2.0 >= TAU_EPS && tau <= 3.0) {
        return Err(domain(format!("the untruncated mean needs 2 < tau <= 3, got tau = {tau}")));
    }
    if !(h_min.is_finite() && h_min > 0.0) || n == 0 {
        return Err(domain(format!("need h_min > 0 and n >= 1, got h_min = {h_min}, n = {n}")));
    }
    Ok((tau - 2.0) / (tau - 1.0))
}

/// `E[max]` of `n` iid draws from `h^{-tau}` on `[h_min, inf)`, through log-gamma.
pub fn expected_max_untruncated(tau: f64, h_min: f64, n: u64) -> Result<f64> {
    let u = untruncated_shape(tau, h_min, n)?;
    Ok(h_min * gamma(u) * ln_gamma_ratio(n as f64, u).exp())
}

/// `ln Gamma(n+1) - ln Gamma(n+u)` for `0 <= u <= 1`.
///
/// For large `n` the two log-gammas are huge and nearly equal, so their difference
/// is taken inside the Stirling series instead.
fn ln_gamma_ratio(n: f64, u: f64) -> f64 {
    if n < 100.0 {
        return ln_gamma(n + 1.0) - ln_gamma(n + u);
    }
    let (z1, z2) = (n + 1.0, n + u);
    // not z1 - z2, which loses the low bits of u once n is large
    let d = 1.0 - u;
    // (z - 1/2) ln z - z, differenced
    let main = (z2 - 0.5) * (d / z2).ln_1p() + d * z1.ln() - d;
    // sum_k B_{2k} / (2k (2k-1) z^{2k-1})
    let coeffs = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0];
    let tail: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let p = 2 * k as i32 + 1;
            c * (z1.powi(-p) - z2.powi(-p))
        })
        .sum();
    main + tail
}

/// Sandwich bounds on the `Gamma(u) N^{1-u}` approximation of [`expected_max_untruncated`].
pub fn expected_max_bounds(tau: f64, h_min: f64, n: u64) -> Result<(f64, f64)> {
    let u = untruncated_shape(tau, h_min, n)?;
    let mean_inf = h_min / u;
    let lower = h_min.powf(u) * (n as f64 * mean_inf).powf(1.0 - u);
    Ok((lower, lower * 4.0 / 3.0))
}

/// Mean of `h^{-tau}` normalized on `[lo, hi]`:
/// `((tau-1)/(tau-2)) (lo^{2-tau} - hi^{2-tau}) / (lo^{1-tau} - hi^{1-tau})`.
///
/// Written as `(tau-1) lo^{2-tau} g / (lo^{1-tau} - hi^{1-tau})` with
/// `g = (1 - (hi/lo)^{2-tau}) / (tau-2)`, which tends to `ln(hi/lo)` as `tau -> 2`.
pub fn truncated_mean(tau: f64, lo: f64, hi: f64) -> f64 {
    let s = tau - 2.0;
    let l = (hi / lo).ln();
    let g = if s.abs() < TAU_EPS { l * (1.0 - s * l / 2.0 + s * s * l * l / 6.0) } else { -(-s * l).exp_m1() / s };
    (tau - 1.0) * lo.powf(-s) * g / (lo.powf(1.0 - tau) - hi.powf(1.0 - tau))
}

/// Structural and natural cutoffs with the rescaled `a = 1/h_s`, `b = h_c/h_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffScheme {
    pub h_s: f64,
    pub h_c: f64,
    pub a: f64,
    pub b: f64,
}

/// Relative slack on the constraint chain, to absorb rounding in `b` at `tau = 3`.
const CHAIN_SLACK: f64 = 1e-12;

impl CutoffScheme {
    pub fn new(h_s: f64, h_c: f64) -> Result<Self> {
        if !(h_s.is_finite() && h_s > 0.0 && h_c.is_finite() && h_c > 0.0) {
            return Err(domain(format!("cutoffs must be positive and finite, got h_s = {h_s}, h_c = {h_c}")));
        }
        Ok(CutoffScheme { h_s, h_c, a: 1.0 / h_s, b: h_c / h_s })
    }

    /// Scheme with prescribed rescaled cutoffs (`h_s = 1/a`, `h_c = b/a`).
    pub fn from_ab(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0) {
            return Err(domain(format!("a and b must be positive, got a = {a}, b = {b}")));
        }
        Ok(CutoffScheme { h_s: 1.0 / a, h_c: b / a, a, b })
    }

    /// Lower integration limit `a * h_min`.
    pub fn alpha(&self, h_min: f64) -> f64 {
        self.a * h_min
    }

    /// Checks `0 < a h_min <= a h_min b <= 1 <= b`.
    pub fn check(&self, h_min: f64) -> Result<()> {
        let alpha = self.alpha(h_min);
        if !(alpha > 0.0) {
            return Err(Error::Constraint(format!("0 < a*h_min fails (a*h_min = {alpha})")));
        }
        if self.b < 1.0 - CHAIN_SLACK {
            return Err(Error::Constraint(format!("a*h_min <= a*h_min*b, i.e. b >= 1, fails (b = {})", self.b)));
        }
        if alpha * self.b > 1.0 + CHAIN_SLACK {
            return Err(Error::Constraint(format!(
                "a*h_min*b <= 1 fails (a*h_min*b = {}, i.e. h_min*h_c > h_s^2)",
                alpha * self.b
            )));
        }
        Ok(())
    }
}

/// `h^{-tau}` on `[h_min, upper]`, sampled by inverse CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedPowerLaw {
    tau: f64,
    h_min: f64,
    upper: f64,
    lo_pow: f64,
    hi_pow: f64,
    span: f64,
}

impl TruncatedPowerLaw {
    pub fn new(tau: f64, h_min: f64, upper: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 1.0) {
            return Err(domain(format!("tau must exceed 1, got {tau}")));
        }
        if !(h_min > 0.0 && upper.is_finite() && upper > h_min) {
            return Err(domain(format!("need 0 < h_min < upper, got h_min = {h_min}, upper = {upper}")));
        }
        let lo_pow = h_min.powf(1.0 - tau);
        let hi_pow = upper.powf(1.0 - tau);
        Ok(TruncatedPowerLaw { tau, h_min, upper, lo_pow, hi_pow, span: lo_pow - hi_pow })
    }

    /// Inverse CDF: `(h_min^{1-tau} - p (h_min^{1-tau} - upper^{1-tau}))^{1/(1-tau)}`,
    /// evaluated as a convex combination so that both endpoints are exact.
    pub fn quantile(&self, p: f64) -> f64 {
        let h = ((1.0 - p) * self.lo_pow + p * self.hi_pow).powf(1.0 / (1.0 - self.tau));
        h.clamp(self.h_min, self.upper)
    }

    pub fn cdf(&self, h: f64) -> f64 {
        if h <= self.h_min {
            0.0
        } else if h >= self.upper {
            1.0
        } else {
            (self.lo_pow - h.powf(1.0 - self.tau)) / self.span
        }
    }

    pub fn mean(&self) -> f64 {
        truncated_mean(self.tau, self.h_min, self.upper)
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

impl Distribution<f64> for TruncatedPowerLaw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// `h^{-tau}` on `[h_min, inf)`, a Pareto law with shape `tau - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    h_min: f64,
    inv_shape: f64,
}

impl PowerLaw {
    pub fn new(tau: f64, h_min: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 1.0 && h_min > 0.0 && h_min.is_finite()) {
            return Err(domain(format!("need tau > 1 and h_min > 0, got tau = {tau}, h_min = {h_min}")));
        }
        Ok(PowerLaw { h_min, inv_shape: 1.0 / (tau - 1.0) })
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.h_min * (1.0 - p).powf(-self.inv_shape)
    }
}

impl Distribution<f64> for PowerLaw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// `count` iid draws from the model's density truncated to `[h_min, upper]`.
pub fn sample_hidden<R: Rng + ?Sized>(
    model: &PowerLawModel,
    upper: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(domain("sample count must be at least 1"));
    }
    let dist = model.truncated(upper)?;
    Ok((0..count).map(|_| dist.sample(rng)).collect())
}

/// Monte Carlo estimate of `E[max]` over `replicates` independent sets of `N`
/// untruncated draws. Replicate `k` uses [`crate::seeding::replica_rng`]`(seed, k)`.
pub fn monte_carlo_expected_max(model: &PowerLawModel, replicates: usize, seed: u64) -> Result<McEstimate> {
    use rayon::prelude::*;

    if replicates < 2 {
        return Err(domain("need at least two replicates"));
    }
    let dist = PowerLaw::new(model.tau, model.h_min)?;
    let n = model.n_vertices;
    let maxima: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = crate::seeding::replica_rng(seed, k);
            (0..n).map(|_| dist.sample(&mut rng)).fold(f64::MIN, f64::max)
        })
        .collect();
    let mut stats = crate::stats::RunningStats::default();
    maxima.iter().for_each(|&m| stats.push(m));
    Ok(McEstimate { mean: stats.mean().unwrap_or(f64::NAN), stderr: stats.stderr().unwrap_or(f64::NAN), replicates })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub replicates: usize,
}
