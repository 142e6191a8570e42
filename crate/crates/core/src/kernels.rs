//! Connection kernels.
//!
//! Two vertices with hidden variables `h` and `h'` are joined with probability
//! `r(u) = u * f(u)` where `u = h * h' / h_s^2`. Admissible `f` satisfy:
//!
//! * F1: `f(0) = 1` and `f` decreases to 0,
//! * F2: `r(u)` increases to 1,
//! * F3: `f` is continuous and piecewise twice differentiable (finitely many kinks),
//! * F4: `z(u) = -u f'(u) / f(u)` is nondecreasing.
//!
//! F1, F2 and F4 are checked numerically by [`validate_fclass`]. F3 is structural:
//! a custom kernel declares its kink points and the quadrature splits on them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Below this `u` the Poisson kernel is evaluated by its Taylor series.
const POISSON_SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelId {
    /// `r(u) = min(u, 1)`.
    MaxDense,
    /// `r(u) = 1 - exp(-u)`.
    Poisson,
    /// `r(u) = u / (1 + u)`.
    MaxRandom,
    Custom,
}

impl KernelId {
    pub fn name(self) -> &'static str {
        match self {
            KernelId::MaxDense => "max-dense",
            KernelId::Poisson => "poisson",
            KernelId::MaxRandom => "max-random",
            KernelId::Custom => "custom",
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max-dense" => Ok(KernelId::MaxDense),
            "poisson" => Ok(KernelId::Poisson),
            "max-random" => Ok(KernelId::MaxRandom),
            other => Err(domain(format!("unknown kernel {other:?} (expected max-dense, poisson or max-random)"))),
        }
    }
}

type CustomFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    MaxDense,
    Poisson,
    MaxRandom,
    Custom(CustomFn),
}

/// An immutable connection kernel `f` together with its kink points.
#[derive(Clone)]
pub struct Kernel {
    id: KernelId,
    repr: Repr,
    kinks: Vec<f64>,
    label: String,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel").field("id", &self.id).field("label", &self.label).field("kinks", &self.kinks).finish()
    }
}

impl Kernel {
    pub fn max_dense() -> Self {
        Kernel { id: KernelId::MaxDense, repr: Repr::MaxDense, kinks: vec![1.0], label: "max-dense".into() }
    }

    pub fn poisson() -> Self {
        Kernel { id: KernelId::Poisson, repr: Repr::Poisson, kinks: Vec::new(), label: "poisson".into() }
    }

    pub fn max_random() -> Self {
        Kernel { id: KernelId::MaxRandom, repr: Repr::MaxRandom, kinks: Vec::new(), label: "max-random".into() }
    }

    pub fn builtin(id: KernelId) -> Result<Self> {
        match id {
            KernelId::MaxDense => Ok(Self::max_dense()),
            KernelId::Poisson => Ok(Self::poisson()),
            KernelId::MaxRandom => Ok(Self::max_random()),
            KernelId::Custom => Err(domain("custom kernels must be built with Kernel::custom")),
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::builtin(name.parse()?)
    }

    /// A user-supplied `f`. Every point where `f'` may jump must be listed in `kinks`.
    ///
    /// The kernel is not required to be in the F-class; [`validate_fclass`] reports
    /// which conditions it breaks.
    pub fn custom<F>(label: impl Into<String>, f: F, mut kinks: Vec<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if kinks.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
            return Err(domain("kink points must be finite and positive"));
        }
        kinks.sort_by(|a, b| a.total_cmp(b));
        kinks.dedup();
        Ok(Kernel { id: KernelId::Custom, repr: Repr::Custom(Arc::new(f)), kinks, label: label.into() })
    }

    pub fn id(&self) -> KernelId {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    /// `f(u)` for `u >= 0`.
    pub fn eval_f(&self, u: f64) -> Result<f64> {
        check_u(u)?;
        Ok(self.f_raw(u))
    }

    /// `r(u) = u f(u)`, the edge probability.
    pub fn eval_r(&self, u: f64) -> Result<f64> {
        check_u(u)?;
        Ok(self.r_raw(u))
    }

    /// `f` without argument checks, for hot loops whose inputs are valid by construction.
    #[inline]
    pub(crate) fn f_raw(&self, u: f64) -> f64 {
        match &self.repr {
            Repr::MaxDense => {
                if u <= 1.0 {
                    1.0
                } else {
                    1.0 / u
                }
            }
            Repr::Poisson => poisson_f(u),
            Repr::MaxRandom => 1.0 / (1.0 + u),
            Repr::Custom(f) => f(u),
        }
    }

    #[inline]
    pub(crate) fn r_raw(&self, u: f64) -> f64 {
        let r = match &self.repr {
            Repr::MaxDense => u.min(1.0),
            Repr::Poisson => -(-u).exp_m1(),
            Repr::MaxRandom => u / (1.0 + u),
            Repr::Custom(f) => u * f(u),
        };
        r.clamp(0.0, 1.0)
    }
}

fn check_u(u: f64) -> Result<()> {
    if u.is_finite() && u >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("kernel argument must be finite and >= 0, got {u}")))
    }
}

#[inline]
fn poisson_f(u: f64) -> f64 {
    if u < POISSON_SERIES_CUTOFF {
        1.0 - u / 2.0 + u * u / 6.0 - u * u * u / 24.0
    } else {
        -(-u).exp_m1() / u
    }
}

/// Outcome of one numerical condition check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub passed: bool,
    /// First grid point where the condition failed.
    pub first_violation: Option<f64>,
}

impl ConditionCheck {
    fn pass() -> Self {
        ConditionCheck { passed: true, first_violation: None }
    }

    fn record(&mut self, u: f64) {
        if self.passed {
            self.passed = false;
            self.first_violation = Some(u);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FClassReport {
    pub f1: ConditionCheck,
    pub f2: ConditionCheck,
    pub f4: ConditionCheck,
    /// `r(u) <= min(1, u)` on the grid.
    pub envelope: ConditionCheck,
}

impl FClassReport {
    pub fn all_passed(&self) -> bool {
        self.f1.passed && self.f2.passed && self.f4.passed && self.envelope.passed
    }
}

/// Absolute slack (scaled by `max(1, |value|)`) allowed on monotonicity checks.
pub const MONOTONE_TOL: f64 = 1e-9;

/// Argument at which `r` must already be close to its limit 1.
const F2_LIMIT_PROBE: f64 = 1e8;
const F2_LIMIT_SLACK: f64 = 1e-3;

/// Finite-difference step used for `f'`.
fn fd_step(u: f64) -> f64 {
    (1e-6f64).max(1e-6 * u).min(u)
}

/// `z(u) = -u f'(u) / f(u)` by finite differences. Uses a one-sided stencil when a
/// kink lies inside the symmetric one; returns `None` exactly at a kink or at 0.
pub fn z_fd(kernel: &Kernel, u: f64) -> Option<f64> {
    if u <= 0.0 || kernel.kinks.contains(&u) {
        return None;
    }
    let h = fd_step(u);
    let straddled = kernel.kinks.iter().find(|&&k| k > u - h && k < u + h).copied();
    let deriv = match straddled {
        None => (kernel.f_raw(u + h) - kernel.f_raw(u - h)) / (2.0 * h),
        Some(k) if k > u => (kernel.f_raw(u) - kernel.f_raw(u - h)) / h,
        Some(_) => (kernel.f_raw(u + h) - kernel.f_raw(u)) / h,
    };
    Some(-u * deriv / kernel.f_raw(u))
}

/// Numerically checks F1, F2, F4 and the envelope `r <= min(1, u)` on `grid`.
///
/// Violations are reported, never returned as errors. `grid` should be sorted and
/// positive; points exactly on a declared kink are skipped for the F4 check.
pub fn validate_fclass(kernel: &Kernel, grid: &[f64]) -> FClassReport {
    let mut f1 = ConditionCheck::pass();
    let mut f2 = ConditionCheck::pass();
    let mut f4 = ConditionCheck::pass();
    let mut envelope = ConditionCheck::pass();

    if (kernel.f_raw(0.0) - 1.0).abs() > 1e-12 {
        f1.record(0.0);
    }

    let mut prev: Option<(f64, f64, f64)> = None;
    let mut prev_z: Option<f64> = None;
    for &u in grid {
        if !(u.is_finite() && u > 0.0) {
            continue;
        }
        let f = kernel.f_raw(u);
        let r = u * f;
        if !(f > 0.0 && f <= 1.0 + 1e-12) {
            f1.record(u);
        }
        if !(0.0..=1.0 + 1e-12).contains(&r) {
            f2.record(u);
        }
        if r > u.min(1.0) * (1.0 + 1e-12) {
            envelope.record(u);
        }
        if let Some((_, pf, pr)) = prev {
            if f > pf + MONOTONE_TOL * pf.abs().max(1.0) {
                f1.record(u);
            }
            if r < pr - MONOTONE_TOL * pr.abs().max(1.0) {
                f2.record(u);
            }
        }
        prev = Some((u, f, r));

        if let Some(z) = z_fd(kernel, u) {
            if let Some(pz) = prev_z {
                if z < pz - MONOTONE_TOL * pz.abs().max(1.0) {
                    f4.record(u);
                }
            }
            prev_z = Some(z);
        }
    }

    let probe = grid.last().copied().unwrap_or(0.0).max(F2_LIMIT_PROBE);
    if kernel.r_raw(probe) < 1.0 - F2_LIMIT_SLACK {
        f2.record(probe);
    }
    let f_probe = kernel.f_raw(probe);
    if f_probe > F2_LIMIT_SLACK {
        f1.record(probe);
    }

    FClassReport { f1, f2, f4, envelope }
}
