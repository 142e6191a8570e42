//! Clustering integrals `c_ab(h)`, the degree-mixture factor `A(tau)`, the
//! maximally dense closed form, the universal bounds, the near-`tau = 2`
//! approximation and its size threshold, and the `tau`-monotone envelope.
//!
//! All integrals run in logarithmic coordinates `x = e^s`, where the power-law
//! weights become exponentials and the range `[a h_min, b]` stays short even when
//! it spans many decades.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::{Kernel, KernelId};
use crate::lerch::{self, CLOSED_FORM_GUARD};
use crate::powerlaw::{truncated_mean, CutoffScheme};
use crate::quadrature::{integrate, integrate_square, AnalyticConfig, Estimate};

/// Agreement required between the maximally dense closed form and quadrature.
pub const MAX_DENSE_CROSS_CHECK: f64 = 1e-6;

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && (2.0..=3.0).contains(&tau) {
        Ok(())
    } else {
        Err(domain(format!("tau must lie in [2, 3], got {tau}")))
    }
}

fn check_population(tau: f64, h_min: f64, n: f64) -> Result<()> {
    check_tau(tau)?;
    if !(h_min.is_finite() && h_min > 0.0 && n.is_finite() && n > h_min) {
        return Err(domain(format!("need 0 < h_min < n, got h_min = {h_min}, n = {n}")));
    }
    Ok(())
}

/// `P(Poisson(h) >= 2) = 1 - (1 + h) e^{-h}`.
pub fn degree_factor(h: f64) -> f64 {
    if h < 0.1 {
        // sum_{k>=2} (-1)^k (k-1) h^k / k!
        let mut power = h * h / 2.0;
        let mut sum = power;
        for k in 3..=12 {
            power *= -h / k as f64;
            sum += (k - 1) as f64 * power;
        }
        sum
    } else {
        -(-h).exp_m1() - h * (-h).exp()
    }
}

/// `(e^{c x} - 1) / c`, equal to `x` at `c = 0`.
fn expm1_ratio(x: f64, c: f64) -> f64 {
    let cx = c * x;
    if cx == 0.0 {
        x
    } else {
        x * cx.exp_m1() / cx
    }
}

/// `(e^{-x} - 1 + x) / x^2`.
fn phi2(x: f64) -> f64 {
    if x.abs() < 0.1 {
        // sum_k (-x)^k / (k+2)!
        let mut term = 0.5;
        let mut sum = 0.5;
        for k in 1..=8 {
            term *= -x / (k as f64 + 2.0);
            sum += term;
        }
        sum
    } else {
        (x + (-x).exp_m1()) / (x * x)
    }
}

/// Ratio `num / den^2` of the clustering integrals for a kernel, in log coordinates.
///
/// `ah` is `a * h`; `ah = 0` gives `c_ab(0)`, which is also the `G(tau, a, b)` of
/// the `tau`-monotonicity argument. No constraint on `alpha`, `b` is imposed beyond
/// `0 < alpha < b`.
fn clustering_ratio(kernel: &Kernel, tau: f64, alpha: f64, b: f64, ah: f64, cfg: &AnalyticConfig) -> Result<Estimate> {
    cfg.validate()?;
    if !(alpha > 0.0 && b > alpha && alpha.is_finite() && b.is_finite()) {
        return Err(domain(format!("need 0 < a*h_min < b, got {alpha}, {b}")));
    }
    if !(ah.is_finite() && ah >= 0.0) {
        return Err(domain(format!("h must be finite and >= 0 (a*h = {ah})")));
    }
    let lo = alpha.ln();
    let hi = b.ln();
    let w = 2.0 - tau;
    let kinks: Vec<f64> = kernel.kinks().iter().map(|u| u.ln()).collect();
    // s where f(a h e^s) kinks
    let vertex_kinks: Vec<f64> = if ah > 0.0 { kinks.iter().map(|lk| lk - ah.ln()).collect() } else { Vec::new() };

    let vertex_f = |s: f64| {
        if ah > 0.0 {
            kernel.f_raw(ah * s.exp())
        } else {
            1.0
        }
    };

    let den = integrate(|s| (w * s).exp() * vertex_f(s), lo, hi, &vertex_kinks, cfg)?;
    if !(den.value > 0.0) {
        return Err(domain("clustering denominator vanished"));
    }

    let g = |s: f64, t: f64| (w * (s + t)).exp() * vertex_f(s) * vertex_f(t) * kernel.r_raw((s + t).exp());
    let inner_breaks = |s: f64| -> Vec<f64> {
        let mut v: Vec<f64> = kinks.iter().map(|lk| lk - s).collect();
        v.extend_from_slice(&vertex_kinks);
        v
    };
    let mut outer_breaks = vertex_kinks.clone();
    for lk in &kinks {
        outer_breaks.push(lk - lo);
        outer_breaks.push(lk - hi);
        for vk in &vertex_kinks {
            outer_breaks.push(lk - vk);
        }
    }
    let num = integrate_square(g, lo, hi, &outer_breaks, inner_breaks, cfg)?;

    let value = num.value / (den.value * den.value);
    let error = value.abs() * (num.rel_error() + 2.0 * den.rel_error());
    Ok(Estimate { value, error })
}

/// `c_ab(h)`: the probability that two neighbors of a vertex with hidden variable `h`
/// are themselves adjacent, as the ratio
/// `int int (xy)^{-tau} r(ahx) r(ahy) r(xy) dx dy / (int x^{-tau} r(ahx) dx)^2`
/// over `[a h_min, b]`.
pub fn c_ab_h(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    h: f64,
    cfg: &AnalyticConfig,
) -> Result<Estimate> {
    check_tau(tau)?;
    scheme.check(h_min)?;
    clustering_ratio(kernel, tau, scheme.alpha(h_min), scheme.b, scheme.a * h, cfg)
}

/// `c(h) = (1 - e^{-h} - h e^{-h}) c_ab(h)`.
pub fn local_clustering_analytic(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    h: f64,
    cfg: &AnalyticConfig,
) -> Result<Estimate> {
    let c = c_ab_h(kernel, scheme, tau, h_min, h, cfg)?;
    let p = degree_factor(h);
    Ok(Estimate { value: p * c.value, error: p * c.error })
}

/// Average of `c(h)` over `h^{-tau}` restricted to `[lo, hi]`: what the mean
/// local clustering of the vertices whose hidden variable falls in that bin
/// converges to.
pub fn local_clustering_bin_average(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    lo: f64,
    hi: f64,
    cfg: &AnalyticConfig,
) -> Result<Estimate> {
    bin_average(kernel, scheme, tau, h_min, lo, hi, cfg, |h| Ok(degree_factor(h)))
}

/// `(N - 1) E[r(h h' / h_s^2)]` with `h'` drawn from `h^{-tau}` on `[h_min, h_c]`: the
/// exact mean degree of a vertex with hidden variable `h` in a simulated graph.
///
/// It equals `h` only when `<h>` over `[h_min, h_c]` equals the `<h>` that fixed
/// `h_s`, and the kernel is linear over the whole range.
pub fn expected_degree(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    n: f64,
    h: f64,
    cfg: &AnalyticConfig,
) -> Result<Estimate> {
    check_population(tau, h_min, n)?;
    if !(h.is_finite() && h >= 0.0 && scheme.h_c > h_min) {
        return Err(domain(format!("need h >= 0 and h_c > h_min, got h = {h}, h_c = {}", scheme.h_c)));
    }
    let w = 1.0 - tau;
    let scale = h * scheme.a * scheme.a;
    let breaks: Vec<f64> = kernel.kinks().iter().map(|u| (u / scale).ln()).collect();
    let body = integrate(|v| (w * v).exp() * kernel.r_raw(scale * v.exp()), h_min.ln(), scheme.h_c.ln(), &breaks, cfg)?;
    let z = h_min.powf(w) * expm1_ratio((scheme.h_c / h_min).ln(), w);
    Ok(Estimate { value: (n - 1.0) * body.value / z, error: (n - 1.0) * body.error / z })
}

/// `P(Binomial(N - 1, p) >= 2) c_ab(h)` with `p` from [`expected_degree`]: the local
/// clustering a finite simulated graph converges to, without the Poisson(h)
/// degree approximation.
pub fn local_clustering_finite_size(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    n: f64,
    h: f64,
    cfg: &AnalyticConfig,
) -> Result<Estimate> {
    let c = c_ab_h(kernel, scheme, tau, h_min, h, cfg)?;
    let p = binomial_two_or_more(n, expected_degree(kernel, scheme, tau, h_min, n, h, cfg)?.value);
    Ok(Estimate { value: p * c.value, error: p * c.error })
}

/// Bin average of [`local_clustering_finite_size`], weighted by `h^{-tau}`.
#[allow(clippy::too_many_arguments)]
pub fn local_clustering_finite_size_bin_average(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    n: f64,
    lo: f64,
    hi: f64,
    cfg: &AnalyticConfig,
) -> Result<Estimate> {
    let inner = AnalyticConfig { rel_tol: cfg.rel_tol.max(1e-9), ..*cfg };
    bin_average(kernel, scheme, tau, h_min, lo, hi, cfg, |h| {
        Ok(binomial_two_or_more(n, expected_degree(kernel, scheme, tau, h_min, n, h, &inner)?.value))
    })
}

/// `P(Binomial(N - 1, lambda / (N - 1)) >= 2)`.
fn binomial_two_or_more(n: f64, lambda: f64) -> f64 {
    let m = n - 1.0;
    let p = (lambda / m).clamp(0.0, 1.0);
    if p == 1.0 {
        return if m >= 2.0 { 1.0 } else { 0.0 };
    }
    let log_q = (-p).ln_1p();
    let zero = (m * log_q).exp();
    let one = m * p * ((m - 1.0) * log_q).exp();
    (1.0 - zero - one).max(0.0)
}

#[allow(clippy::too_many_arguments)]
fn bin_average<P>(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    lo: f64,
    hi: f64,
    cfg: &AnalyticConfig,
    prefactor: P,
) -> Result<Estimate>
where
    P: Fn(f64) -> Result<f64>,
{
    check_tau(tau)?;
    scheme.check(h_min)?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(domain(format!("bin must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let alpha = scheme.alpha(h_min);
    let inner = AnalyticConfig { rel_tol: cfg.rel_tol.max(1e-9), ..*cfg };
    let outer = AnalyticConfig { rel_tol: (inner.rel_tol * 100.0).min(1e-6), ..*cfg };
    let failure = std::cell::RefCell::new(None);
    let w = 1.0 - tau;
    let weighted = integrate(
        |v| {
            let h = v.exp();
            let value = clustering_ratio(kernel, tau, alpha, scheme.b, scheme.a * h, &inner)
                .and_then(|c| Ok(prefactor(h)? * c.value));
            match value {
                Ok(x) => (w * v).exp() * x,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        lo.ln(),
        hi.ln(),
        &[],
        &outer,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    // int_lo^hi h^{-tau} dh
    let mass = lo.powf(w) * expm1_ratio((hi / lo).ln(), w);
    Ok(Estimate { value: weighted.value / mass, error: weighted.error / mass })
}

/// `A(tau) = int_{h_min}^{N} rho(h) (1 - (1+h) e^{-h}) dh` with `rho` normalized on `[h_min, N]`.
///
/// Above `H = max(h_min, 40)` the degree factor is one to double precision, so that
/// part is integrated exactly and only the `(1+h) e^{-h}` remainder is quadratured.
pub fn a_factor(tau: f64, h_min: f64, n: f64, cfg: &AnalyticConfig) -> Result<Estimate> {
    check_population(tau, h_min, n)?;
    cfg.validate()?;
    let w = 1.0 - tau;
    // int_lo^hi h^{-tau} dh
    let mass = |lo: f64, hi: f64| lo.powf(w) * expm1_ratio((hi / lo).ln(), w);
    let z = mass(h_min, n);
    let split = n.min(h_min.max(40.0));

    let body = integrate(|v| (w * v).exp() * degree_factor(v.exp()), h_min.ln(), split.ln(), &[], cfg)?;
    // Beyond h_min + 750 the remainder underflows.
    let tail_end = n.min(split + 750.0);
    let remainder = integrate(
        |h| h.powf(-tau) * (1.0 + h) * (-h).exp(),
        split,
        tail_end,
        &[],
        &AnalyticConfig { abs_tol: 1e-300, ..*cfg },
    )?;
    let value = (body.value + mass(split, n) - remainder.value) / z;
    let error = (body.error + remainder.error) / z;
    Ok(Estimate { value, error })
}

/// `G(tau, alpha, b)` for the maximally dense kernel, in closed form.
///
/// For `b >= 1 >= alpha b` this is `(tau-2)^2 I / (alpha^{2-tau} - b^{2-tau})^2` with
///
/// ```text
/// I = ln(b^2) / ((tau-2)(3-tau)) - (1 - b^{2(2-tau)}) / (tau-2)^2
///     + (1 - 2 (alpha b)^{3-tau} + alpha^{2(3-tau)}) / (3-tau)^2 .
/// ```
///
/// Within `CLOSED_FORM_GUARD` of `tau = 2` or `3` the same quantity is evaluated
/// in a rearranged form free of the removable singularities. For `b < 1` the
/// kernel is identically one on the square and the ratio factorizes.
pub fn max_dense_g_closed(tau: f64, alpha: f64, b: f64) -> Result<f64> {
    check_tau(tau)?;
    if !(alpha > 0.0 && b > alpha && b.is_finite()) {
        return Err(domain(format!("need 0 < alpha < b, got alpha = {alpha}, b = {b}")));
    }
    let s = tau - 2.0;
    let p = 3.0 - tau;
    let l = (b / alpha).ln();
    if b <= 1.0 {
        // (int x^{2-tau})^2 / (int x^{1-tau})^2 over [alpha, b]
        let num = alpha.powf(p) * expm1_ratio(l, p);
        let den = alpha.powf(-s) * expm1_ratio(l, -s);
        return Ok((num / den).powi(2));
    }
    if alpha * b > 1.0 {
        return Err(domain(format!("closed form needs alpha * b <= 1 when b > 1, got alpha * b = {}", alpha * b)));
    }
    if s.abs() >= CLOSED_FORM_GUARD && p.abs() >= CLOSED_FORM_GUARD {
        let ln_b2 = (b * b).ln();
        let i = ln_b2 / (s * p) - (1.0 - b.powf(-2.0 * s)) / (s * s)
            + (1.0 - 2.0 * (alpha * b).powf(p) + alpha.powf(2.0 * p)) / (p * p);
        return Ok(lerch::front_factor(tau, alpha, b) * i);
    }
    Ok(max_dense_g_stable(tau, alpha, b))
}

/// Rearrangement of the maximally dense closed form that is regular at `tau = 2, 3`.
///
/// With `beta = ln b^2`, `E(x, c) = (e^{cx} - 1)/c`:
/// `I = beta^2 phi2(s beta) - beta^2 phi2(-p beta) - E(2 ln alpha, p) E(beta, p) + E(ln(alpha b), p)^2`
/// and the front factor becomes `1 / (b^{-s} E(ln(b/alpha), s))^2`.
pub(crate) fn max_dense_g_stable(tau: f64, alpha: f64, b: f64) -> f64 {
    let s = tau - 2.0;
    let p = 3.0 - tau;
    let beta = (b * b).ln();
    let i = beta * beta * (phi2(s * beta) - phi2(-p * beta)) - expm1_ratio(2.0 * alpha.ln(), p) * expm1_ratio(beta, p)
        + expm1_ratio((alpha * b).ln(), p).powi(2);
    let d = b.powf(-s) * expm1_ratio((b / alpha).ln(), s);
    i / (d * d)
}

/// Maximally dense average clustering `A(tau) G(tau, a h_min, b)` in closed form.
pub fn c_max_closed(scheme: &CutoffScheme, tau: f64, h_min: f64, n: f64, cfg: &AnalyticConfig) -> Result<f64> {
    check_population(tau, h_min, n)?;
    scheme.check(h_min)?;
    let a = a_factor(tau, h_min, n, cfg)?;
    Ok(a.value * max_dense_g_closed(tau, scheme.alpha(h_min), scheme.b)?)
}

/// Default `u0` grid for the lower bound: geometric from 1 to `4 b^2`.
pub fn default_u0_grid(scheme: &CutoffScheme) -> Vec<f64> {
    let hi = (4.0 * scheme.b * scheme.b).max(4.0);
    crate::grid::geometric_grid(1.0, hi, 81).expect("valid grid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    /// The `u0` attaining the lower bound.
    pub u0: f64,
}

/// `u0 f(u0) A G_max(a/sqrt(u0), b/sqrt(u0)) <= C_ab <= A G_max(a, b)` for every `u0 >= 1`;
/// the lower bound is maximized over `u0_grid`.
pub fn c_bounds(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    n: f64,
    u0_grid: &[f64],
    cfg: &AnalyticConfig,
) -> Result<Bounds> {
    check_population(tau, h_min, n)?;
    scheme.check(h_min)?;
    if u0_grid.is_empty() || u0_grid.iter().any(|u| !(u.is_finite() && *u >= 1.0)) {
        return Err(domain("u0 grid must be non-empty with every u0 >= 1"));
    }
    let a = a_factor(tau, h_min, n, cfg)?.value;
    let alpha = scheme.alpha(h_min);
    let upper = a * max_dense_g_closed(tau, alpha, scheme.b)?;
    let mut best = Bounds { lower: f64::NEG_INFINITY, upper, u0: f64::NAN };
    for &u0 in u0_grid {
        let root = u0.sqrt();
        let candidate = kernel.eval_r(u0)? * a * max_dense_g_closed(tau, alpha / root, scheme.b / root)?;
        if candidate > best.lower {
            best.lower = candidate;
            best.u0 = u0;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistenceApprox {
    pub value: f64,
    /// `|ln(a h_min b) / ln(b^2)|`; the approximation needs this to be small.
    pub validity_ratio: f64,
}

/// Near-`tau = 2` approximation of the maximally dense average clustering:
/// `A (1 - s ln(b^2)/3) / (2 (1 - s ln(a h_min b)/2 + s^2 ln^2(b)/6)^2)`, `s = tau - 2`.
pub fn persistence_approx(
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    n: f64,
    cfg: &AnalyticConfig,
) -> Result<PersistenceApprox> {
    check_population(tau, h_min, n)?;
    scheme.check(h_min)?;
    let a = a_factor(tau, h_min, n, cfg)?.value;
    let s = tau - 2.0;
    let ln_b = scheme.b.ln();
    let ln_ab = (scheme.alpha(h_min) * scheme.b).ln();
    let num = 1.0 - s * 2.0 * ln_b / 3.0;
    let den = 1.0 - s * ln_ab / 2.0 + s * s * ln_b * ln_b / 6.0;
    Ok(PersistenceApprox { value: a * num / (2.0 * den * den), validity_ratio: (ln_ab / (2.0 * ln_b)).abs() })
}

/// Size `N` at which `(tau - 2) ln(b^2) = t` under the default cutoffs with `h_min = 1`
/// and `<h> ~ ln N`: the root of `N ln N = exp((tau-1) t / ((tau-2)(3-tau)))`.
pub fn persistence_threshold_n(tau: f64, t: f64) -> Result<f64> {
    if !(tau.is_finite() && tau > 2.0 && tau < 3.0) {
        return Err(domain(format!("tau must lie in (2, 3), got {tau}")));
    }
    if !(t.is_finite() && t > 0.0 && t < 3.0) {
        return Err(domain(format!("threshold t must lie in (0, 3), got {t}")));
    }
    let k = (tau - 1.0) * t / ((tau - 2.0) * (3.0 - tau));
    // y = ln N solves y + ln y = k; the left side increases in y > 0.
    let mut lo = f64::MIN_POSITIVE;
    let mut hi = k.max(1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mid + mid.ln() < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    let n = y.exp();
    if !n.is_finite() {
        return Err(domain(format!("threshold N overflows for tau = {tau}, t = {t}")));
    }
    Ok(n)
}

/// Rescaled cutoffs `(a_bar, b_bar)` that dominate the default `(a, b)` for every
/// `tau`: `a_bar = (N m)^{-1/2}`, `b_bar = (N M)^{(3-tau)/(2(tau-1))}` with `m`, `M`
/// the mean of `h` at `tau = 3` and `tau -> 2`.
pub fn envelope_cutoffs(tau: f64, h_min: f64, n: f64) -> Result<(f64, f64)> {
    check_population(tau, h_min, n)?;
    let m = truncated_mean(3.0, h_min, n);
    let big_m = truncated_mean(2.0, h_min, n);
    Ok(((n * m).powf(-0.5), (n * big_m).powf((3.0 - tau) / (2.0 * (tau - 1.0)))))
}

/// `A(tau) G(tau, a_bar, b_bar)`: an upper bound on the average clustering that is
/// monotone in `tau`.
///
/// The envelope cutoffs need not satisfy `a h_min b <= 1`; the quadrature does not
/// rely on it.
pub fn envelope_c(kernel: &Kernel, tau: f64, h_min: f64, n: f64, cfg: &AnalyticConfig) -> Result<Estimate> {
    let (a_bar, b_bar) = envelope_cutoffs(tau, h_min, n)?;
    let g = clustering_ratio(kernel, tau, a_bar * h_min, b_bar.max(a_bar * h_min * (1.0 + 1e-12)), 0.0, cfg)?;
    let a = a_factor(tau, h_min, n, cfg)?;
    Ok(Estimate { value: a.value * g.value, error: a.value * g.error + a.error * g.value })
}

/// `G(tau, alpha, b) = c_ab(0)` for an arbitrary kernel by quadrature, with
/// `alpha = a h_min`.
pub fn g_factor(kernel: &Kernel, tau: f64, alpha: f64, b: f64, cfg: &AnalyticConfig) -> Result<Estimate> {
    check_tau(tau)?;
    clustering_ratio(kernel, tau, alpha, b, 0.0, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticResult {
    pub kernel: String,
    pub tau: f64,
    pub h_min: f64,
    pub n: f64,
    pub a: f64,
    pub b: f64,
    /// `a * h_min`, the lower integration limit actually used.
    pub alpha: f64,
    pub c_ab_0: f64,
    pub c_ab_0_error: f64,
    pub a_factor: f64,
    /// `C_ab = c_ab(0) A(tau)` by quadrature.
    pub c_avg: f64,
    /// Maximally dense closed form (maximally dense kernel only).
    pub c_max_closed: Option<f64>,
    /// Maximally random closed form times `A(tau)` (maximally random kernel only,
    /// outside the guard band).
    pub c_maxrandom_closed: Option<f64>,
    pub bound_low: f64,
    pub bound_high: f64,
    /// `A (tau-2)/(3-tau) (a h_min)^{2(tau-2)} ln(b^2)`, for `tau` away from 3.
    pub approx_main: Option<f64>,
    pub approx_persistence: f64,
    pub persistence_validity_ratio: f64,
}

/// Every analytic summary of the average clustering for one kernel and cutoff scheme.
///
/// For the maximally dense kernel the closed form is checked against quadrature
/// and a disagreement beyond [`MAX_DENSE_CROSS_CHECK`] is an error.
pub fn c_average(
    kernel: &Kernel,
    scheme: &CutoffScheme,
    tau: f64,
    h_min: f64,
    n: f64,
    cfg: &AnalyticConfig,
) -> Result<AnalyticResult> {
    check_population(tau, h_min, n)?;
    let c0 = c_ab_h(kernel, scheme, tau, h_min, 0.0, cfg)?;
    let a = a_factor(tau, h_min, n, cfg)?.value;
    let c_avg = c0.value * a;
    let alpha = scheme.alpha(h_min);

    let c_max_closed = if kernel.id() == KernelId::MaxDense {
        let closed = a * max_dense_g_closed(tau, alpha, scheme.b)?;
        let rel = ((closed - c_avg) / closed).abs();
        if rel > MAX_DENSE_CROSS_CHECK {
            return Err(Error::CrossCheck(format!(
                "maximally dense closed form {closed:e} vs quadrature {c_avg:e} (relative {rel:e})"
            )));
        }
        Some(closed)
    } else {
        None
    };
    let c_maxrandom_closed =
        if kernel.id() == KernelId::MaxRandom && tau - 2.0 >= CLOSED_FORM_GUARD && 3.0 - tau >= CLOSED_FORM_GUARD {
            Some(a * lerch::c_maxrandom_closed(scheme, tau, h_min, cfg)?)
        } else {
            None
        };

    let bounds = c_bounds(kernel, scheme, tau, h_min, n, &default_u0_grid(scheme), cfg)?;
    let s = tau - 2.0;
    let p = 3.0 - tau;
    let approx_main = (p >= CLOSED_FORM_GUARD).then(|| a * s / p * alpha.powf(2.0 * s) * (scheme.b * scheme.b).ln());
    let pers = persistence_approx(scheme, tau, h_min, n, cfg)?;

    Ok(AnalyticResult {
        kernel: kernel.label().to_string(),
        tau,
        h_min,
        n,
        a: scheme.a,
        b: scheme.b,
        alpha,
        c_ab_0: c0.value,
        c_ab_0_error: c0.error,
        a_factor: a,
        c_avg,
        c_max_closed,
        c_maxrandom_closed,
        bound_low: bounds.lower,
        bound_high: bounds.upper,
        approx_main,
        approx_persistence: pers.value,
        persistence_validity_ratio: pers.validity_ratio,
    })
}
