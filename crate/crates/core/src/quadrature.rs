//! Adaptive Gauss–Kronrod (7/15) quadrature in one dimension, and an iterated
//! two-dimensional rule built on it.
//!
//! Integrands with derivative jumps are handled by splitting at caller-supplied
//! breakpoints before refinement starts. In two dimensions the inner breakpoints
//! may depend on the outer variable, which is how cells get split along curves
//! such as `x * y = const`.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerances for every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Cap on the number of bisections per one-dimensional integral.
    pub max_subdivisions: usize,
    /// Absolute tolerance for Lerch series.
    pub lerch_tol: f64,
}

impl Default for AnalyticConfig {
    fn default() -> Self {
        AnalyticConfig { abs_tol: 1e-300, rel_tol: 1e-10, max_subdivisions: 2000, lerch_tol: 1e-13 }
    }
}

impl AnalyticConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol >= 1e-14 && self.rel_tol < 1.0) {
            return Err(domain(format!(
                "quadrature tolerances must be positive with rel_tol >= 1e-14, got abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 || !(self.lerch_tol > 0.0) {
            return Err(domain("max_subdivisions and lerch_tol must be positive"));
        }
        Ok(())
    }

    /// Same config with the relative tolerance replaced.
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// A quadrature value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.error
        } else {
            (self.error / self.value).abs()
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Segment { lo, hi, value: kronrod * half, error: ((kronrod - gauss) * half).abs(), abs_value: abs_k * half.abs() }
}

/// Adaptive integral of `f` over `[lo, hi]`, pre-split at every breakpoint
/// strictly inside the interval.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    cfg: &AnalyticConfig,
) -> Result<Estimate> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(domain(format!("integration limits must be finite, got [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    if lo > hi {
        return integrate(f, hi, lo, breakpoints, cfg).map(|e| Estimate { value: -e.value, error: e.error });
    }

    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|p| p.is_finite() && *p > lo && *p < hi).collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();

    let mut nodes = Vec::with_capacity(cuts.len() + 2);
    nodes.push(lo);
    nodes.extend(cuts);
    nodes.push(hi);
    let mut segments: Vec<Segment> = nodes.windows(2).map(|w| gk15(&mut f, w[0], w[1])).collect();

    let mut splits = 0usize;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let abs_value: f64 = segments.iter().map(|s| s.abs_value).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        // Below this level the Kronrod-Gauss difference is rounding noise.
        let noise = 50.0 * f64::EPSILON * abs_value;
        if error <= target || error <= noise {
            return Ok(Estimate { value, error });
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::Quadrature { estimate: value, error_bound: error });
        }
        let (worst, seg) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, s)| (i, *s))
            .expect("at least one segment");
        let mid = 0.5 * (seg.lo + seg.hi);
        if !(mid > seg.lo && mid < seg.hi) {
            return Err(Error::Quadrature { estimate: value, error_bound: error });
        }
        segments[worst] = gk15(&mut f, seg.lo, mid);
        segments.push(gk15(&mut f, mid, seg.hi));
        splits += 1;
    }
}

/// Iterated integral `int_{lo}^{hi} int_{lo}^{hi} g(s, t) dt ds` over a square.
///
/// `outer_breaks` lists the `s` where the inner integral as a function of `s`
/// has a kink; `inner_breaks(s)` lists the `t` where `g(s, .)` has one.
pub fn integrate_square<G, B>(
    g: G,
    lo: f64,
    hi: f64,
    outer_breaks: &[f64],
    inner_breaks: B,
    cfg: &AnalyticConfig,
) -> Result<Estimate>
where
    G: Fn(f64, f64) -> f64,
    B: Fn(f64) -> Vec<f64>,
{
    let inner_cfg = AnalyticConfig { rel_tol: (cfg.rel_tol * 0.1).max(1e-14), ..*cfg };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_err = RefCell::new(0.0f64);

    let outer = integrate(
        |s| {
            let breaks = inner_breaks(s);
            match integrate(|t| g(s, t), lo, hi, &breaks, &inner_cfg) {
                Ok(e) => {
                    let mut worst = inner_err.borrow_mut();
                    *worst = worst.max(e.error);
                    e.value
                }
                Err(err) => {
                    let mut slot = failure.borrow_mut();
                    let estimate = match &err {
                        Error::Quadrature { estimate, .. } => *estimate,
                        _ => f64::NAN,
                    };
                    slot.get_or_insert(err);
                    estimate
                }
            }
        },
        lo,
        hi,
        outer_breaks,
        cfg,
    );

    let outer = outer?;
    let error = outer.error + (hi - lo) * *inner_err.borrow();
    if let Some(Error::Quadrature { .. }) = failure.borrow().as_ref() {
        return Err(Error::Quadrature { estimate: outer.value, error_bound: f64::INFINITY });
    }
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    Ok(Estimate { value: outer.value, error })
}
