//! Lerch transcendent `Phi(z, s, v) = sum_{k>=0} z^k / (k + v)^s` for real `|z| <= 1`,
//! and the closed form of the maximally random graph's clustering built from it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::powerlaw::CutoffScheme;
use crate::quadrature::AnalyticConfig;

/// Guard band around `tau = 2` and `tau = 3` inside which the maximally random
/// closed form is not evaluated.
pub const CLOSED_FORM_GUARD: f64 = 1e-4;

const MAX_DIRECT_TERMS: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LerchParams {
    pub z: f64,
    pub s: f64,
    pub v: f64,
}

impl LerchParams {
    pub fn new(z: f64, s: f64, v: f64) -> Result<Self> {
        if !(z.is_finite() && s.is_finite() && v.is_finite()) {
            return Err(domain("Lerch parameters must be finite"));
        }
        if z.abs() > 1.0 {
            return Err(domain(format!("|z| <= 1 required, got z = {z}")));
        }
        if !(s > 0.0 && v > 0.0) {
            return Err(domain(format!("s > 0 and v > 0 required, got s = {s}, v = {v}")));
        }
        if z == 1.0 && s <= 1.0 {
            return Err(domain(format!("Phi(1, s, v) diverges for s <= 1 (s = {s})")));
        }
        Ok(LerchParams { z, s, v })
    }
}

/// `Phi(z, s, v)` with absolute error at most `tol`.
///
/// * `|z| <= 1/2`: direct summation, stopping once a term drops below `tol/10` past `k = 10`.
/// * `-1 <= z < -1/2`: Cohen–Rodriguez Villegas–Zagier acceleration of the alternating series.
/// * `1/2 < z < 1`: direct summation with a geometric tail bound.
/// * `z = 1`: Hurwitz zeta by Euler–Maclaurin.
pub fn lerch_phi(p: &LerchParams, tol: f64) -> Result<f64> {
    let LerchParams { z, s, v } = *p;
    if !(tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    if z == 0.0 {
        return Ok(v.powf(-s));
    }
    if z.abs() <= 0.5 {
        return direct_sum(z, s, v, tol);
    }
    if z < 0.0 {
        return Ok(alternating_cvz(-z, s, v, tol));
    }
    if z < 1.0 {
        return direct_sum(z, s, v, tol);
    }
    Ok(hurwitz_zeta(s, v))
}

fn direct_sum(z: f64, s: f64, v: f64, tol: f64) -> Result<f64> {
    let tail_factor = 1.0 / (1.0 - z.abs());
    let mut sum = 0.0;
    let mut zk = 1.0;
    for k in 0..MAX_DIRECT_TERMS {
        let term = zk * (k as f64 + v).powf(-s);
        sum += term;
        // |terms| decrease geometrically at least as fast as |z|^k.
        if k > 10 && term.abs() * tail_factor < tol / 10.0 {
            return Ok(sum);
        }
        zk *= z;
        if zk == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::Series { terms: MAX_DIRECT_TERMS })
}

/// `sum_k (-1)^k rho^k (k+v)^{-s}` for `0 < rho <= 1`.
///
/// `a_k = rho^k (k+v)^{-s}` is a moment sequence, so the CVZ error is at most
/// `2 a_0 / (3 + sqrt 8)^n`.
fn alternating_cvz(rho: f64, s: f64, v: f64, tol: f64) -> f64 {
    let a0 = v.powf(-s);
    let rate = 3.0 + 8f64.sqrt();
    let n = (((2.0 * a0 / tol).ln() / rate.ln()).ceil() as i64 + 2).clamp(5, 60) as usize;
    let d0 = rate.powi(n as i32);
    let d = 0.5 * (d0 + 1.0 / d0);
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    let mut rk = 1.0;
    for k in 0..n {
        c = b - c;
        sum += c * rk * (k as f64 + v).powf(-s);
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
        rk *= rho;
    }
    sum / d
}

/// Hurwitz zeta `sum_k (k+v)^{-s}` for `s > 1` by Euler–Maclaurin.
fn hurwitz_zeta(s: f64, v: f64) -> f64 {
    // B_{2j} / (2j)!
    const B2J: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    let m = 30usize;
    let mut sum: f64 = (0..m).map(|k| (k as f64 + v).powf(-s)).sum();
    let x = m as f64 + v;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial s (s+1) ... (s + 2j - 2) times x^{-s-2j+1}
    let mut rising = s;
    let mut xp = x.powf(-s - 1.0);
    for (j, bj) in B2J.iter().enumerate() {
        sum += bj * rising * xp;
        let base = s + 2.0 * j as f64;
        rising *= (base + 1.0) * (base + 2.0);
        xp /= x * x;
    }
    sum
}

/// The four dominant-term columns compared between the maximally random and
/// maximally dense closed forms, at `s = tau - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub s: f64,
    /// `pi / sin(pi s)`
    pub pi_over_sin: f64,
    /// `1 / (s (1 - s))`
    pub inv_s_one_minus_s: f64,
    /// `pi^2 cos(pi s) / sin^2(pi s)`
    pub pi2_cos_over_sin2: f64,
    /// `1/s^2 - 1/(1-s)^2`
    pub inv_square_diff: f64,
}

pub fn table2_terms(s: f64) -> Result<Table2Row> {
    if !(s > 0.0 && s <= 0.5) {
        return Err(domain(format!("s must lie in (0, 0.5], got {s}")));
    }
    let sin = (PI * s).sin();
    let cos = (PI * s).cos();
    Ok(Table2Row {
        s,
        pi_over_sin: PI / sin,
        inv_s_one_minus_s: 1.0 / (s * (1.0 - s)),
        pi2_cos_over_sin2: PI * PI * cos / (sin * sin),
        inv_square_diff: 1.0 / (s * s) - 1.0 / ((1.0 - s) * (1.0 - s)),
    })
}

/// Front factor `(tau-2)^2 / (alpha^{2-tau} - b^{2-tau})^2` shared by both closed forms.
pub fn front_factor(tau: f64, alpha: f64, b: f64) -> f64 {
    let s = tau - 2.0;
    s * s / (alpha.powf(-s) - b.powf(-s)).powi(2)
}

/// Clustering ratio `c_ab(0)` of the maximally random kernel `r(u) = u/(1+u)` in
/// closed form (no `A(tau)` factor), with `alpha = a h_min`:
///
/// ```text
/// front * { pi ln(b^2) / sin(pi s) - pi^2 cos(pi s) / sin^2(pi s)
///           + b^{-2s} Phi(-b^{-2}, 2, s)
///           + alpha^{2(1-s)} Phi(-alpha^2, 2, 1-s)
///           - 2 (alpha b)^{1-s} Phi(-alpha b, 2, 1-s) },   s = tau - 2
/// ```
pub fn c_maxrandom_closed(scheme: &CutoffScheme, tau: f64, h_min: f64, cfg: &AnalyticConfig) -> Result<f64> {
    if !(tau - 2.0 >= CLOSED_FORM_GUARD && 3.0 - tau >= CLOSED_FORM_GUARD) {
        return Err(domain(format!(
            "maximally random closed form needs tau in [2 + {CLOSED_FORM_GUARD}, 3 - {CLOSED_FORM_GUARD}], got {tau}"
        )));
    }
    scheme.check(h_min)?;
    let alpha = scheme.alpha(h_min);
    let b = scheme.b;
    let s = tau - 2.0;
    let p = 3.0 - tau;
    let tol = cfg.lerch_tol;
    let ln_b2 = (b * b).ln();
    let sin = (PI * s).sin();
    let cos = (PI * s).cos();

    let phi_b = lerch_phi(&LerchParams::new(-1.0 / (b * b), 2.0, s)?, tol)?;
    let phi_a = lerch_phi(&LerchParams::new(-alpha * alpha, 2.0, p)?, tol)?;
    let phi_ab = lerch_phi(&LerchParams::new(-alpha * b, 2.0, p)?, tol)?;

    let bracket =
        PI * ln_b2 / sin - PI * PI * cos / (sin * sin) + b.powf(-2.0 * s) * phi_b + alpha.powf(2.0 * p) * phi_a
            - 2.0 * (alpha * b).powf(p) * phi_ab;
    Ok(front_factor(tau, alpha, b) * bracket)
}
