//! Sampling grids shared by validators, monotonicity checks and the CLI.

use crate::error::{domain, Result};

/// `count` points spaced evenly in log between `lo` and `hi` (both included).
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(domain(format!("geometric grid needs 0 < lo <= hi, got [{lo}, {hi}]")));
    }
    if count == 0 {
        return Err(domain("geometric grid needs at least one point"));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (count - 1) as f64;
    let mut out: Vec<f64> = (0..count).map(|k| (llo + step * k as f64).exp()).collect();
    out[0] = lo;
    out[count - 1] = hi;
    Ok(out)
}

/// `count` points spaced evenly between `lo` and `hi` (both included).
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) || count == 0 {
        return Err(domain(format!("bad linear grid [{lo}, {hi}] x {count}")));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|k| lo + step * k as f64).collect())
}
