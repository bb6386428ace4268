//! Closed-form covariance kernels of the planar field catalog.
//!
//! Every separable field is an [`AxisKernel`] pair times a constant; the
//! bivariate Wiener bridge is the one kernel that does not factor. All
//! evaluators sort each coordinate pair before computing, so
//! `k(p, q) == k(q, p)` holds bit for bit, and every bridge-type kernel
//! returns an exact `0.0` on its zero set.

mod cdf;
mod matrix;
pub(crate) mod scaled;

pub use cdf::{CdfSpec, ScalarFn};
pub use matrix::covariance_matrix;
pub(crate) use matrix::axis_matrix;

use serde::Serialize;

use crate::error::{domain, Error, Result};

#[inline]
fn ordered(x1: f64, x2: f64) -> (f64, f64) {
    if x1 <= x2 {
        (x1, x2)
    } else {
        (x2, x1)
    }
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        domain(format!("{name}: non-finite argument {x}"))
    }
}

fn check_range(name: &str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if x.is_nan() || x < lo || x > hi {
        domain(format!("{name}: argument {x} outside [{lo}, {hi}]"))
    } else {
        Ok(())
    }
}

/// Parameters `(α, β, σ)` of a stationary Ornstein-Uhlenbeck field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OUParams {
    alpha: f64,
    beta: f64,
    sigma: f64,
}

impl OUParams {
    pub fn new(alpha: f64, beta: f64, sigma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("sigma", sigma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(OUParams { alpha, beta, sigma })
    }

    /// `(½, ½, 1)`, the field every representation in the catalog is built on.
    pub fn standard() -> Self {
        OUParams {
            alpha: 0.5,
            beta: 0.5,
            sigma: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Stationary variance `σ²/(4αβ)`.
    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma / (4.0 * self.alpha * self.beta)
    }
}

/// One-dimensional covariance building block of a separable planar kernel.
#[derive(Debug, Clone)]
pub enum AxisKernel {
    /// `min(x1, x2)` on `[0, ∞)`.
    Wiener,
    /// `min − product` on `[0, 1]`.
    Bridge,
    /// Scaled Wiener bridge covariance on `[0, horizon]`.
    ScaledBridge { horizon: f64, alpha: f64 },
    /// `exp(−rate·|x1 − x2|)` on the real line.
    Ou { rate: f64 },
    /// `F(min) − F(x1)F(x2)` on `[0, S_F)`.
    CdfBridge(CdfSpec),
}

impl AxisKernel {
    pub fn scaled_bridge(horizon: f64, alpha: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Parameter(format!("horizon must be positive and finite, got {horizon}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Parameter(format!("alpha must be positive and finite, got {alpha}")));
        }
        Ok(AxisKernel::ScaledBridge { horizon, alpha })
    }

    pub fn ou(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Parameter(format!("rate must be positive and finite, got {rate}")));
        }
        Ok(AxisKernel::Ou { rate })
    }

    /// Rejects points outside the kernel's closed domain.
    pub fn check(&self, x: f64) -> Result<()> {
        match self {
            AxisKernel::Wiener => check_range("wiener axis", x, 0.0, f64::INFINITY).and(check_finite("wiener axis", x)),
            AxisKernel::Bridge => check_range("bridge axis", x, 0.0, 1.0),
            AxisKernel::ScaledBridge { horizon, .. } => check_range("scaled bridge axis", x, 0.0, *horizon),
            AxisKernel::Ou { .. } => check_finite("ou axis", x),
            AxisKernel::CdfBridge(cdf) => cdf.check_arg(x),
        }
    }

    pub fn eval(&self, x1: f64, x2: f64) -> Result<f64> {
        self.check(x1)?;
        self.check(x2)?;
        let (a, b) = ordered(x1, x2);
        Ok(match self {
            AxisKernel::Wiener => a,
            AxisKernel::Bridge => a * (1.0 - b),
            AxisKernel::ScaledBridge { horizon, alpha } => scaled_bridge_ordered(*horizon, *alpha, a, b),
            AxisKernel::Ou { rate } => (-rate * (b - a)).exp(),
            AxisKernel::CdfBridge(cdf) => cdf.cdf(a) * cdf.survival(b),
        })
    }

    /// Short human-readable label used in report metadata.
    pub fn label(&self) -> String {
        match self {
            AxisKernel::Wiener => "wiener".into(),
            AxisKernel::Bridge => "bridge".into(),
            AxisKernel::ScaledBridge { horizon, alpha } => format!("scaled-bridge(S={horizon},alpha={alpha})"),
            AxisKernel::Ou { rate } => format!("ou(rate={rate})"),
            AxisKernel::CdfBridge(cdf) => format!("cdf-bridge({})", cdf.name()),
        }
    }
}

fn scaled_bridge_ordered(horizon: f64, alpha: f64, a: f64, b: f64) -> f64 {
    if b == horizon {
        return 0.0;
    }
    let prefactor = (horizon - a).powf(alpha) * (horizon - b).powf(alpha);
    prefactor * scaled::power_increment(horizon, a, 1.0 - 2.0 * alpha)
}

/// Covariance function of a planar Gaussian field.
#[derive(Debug, Clone)]
pub enum Kernel2D {
    /// `scale · s_axis(s1, s2) · t_axis(t1, t2)`.
    Separable {
        s_axis: AxisKernel,
        t_axis: AxisKernel,
        scale: f64,
    },
    /// `(s1∧s2)(t1∧t2) − s1 s2 t1 t2` on `[0, 1]²`; not of product type.
    BivariateBridge,
}

impl Kernel2D {
    pub fn separable(s_axis: AxisKernel, t_axis: AxisKernel, scale: f64) -> Self {
        Kernel2D::Separable { s_axis, t_axis, scale }
    }

    pub fn wiener() -> Self {
        Self::separable(AxisKernel::Wiener, AxisKernel::Wiener, 1.0)
    }

    pub fn ou(params: OUParams) -> Self {
        Self::separable(
            AxisKernel::Ou { rate: params.alpha },
            AxisKernel::Ou { rate: params.beta },
            params.variance(),
        )
    }

    pub fn bivariate_bridge() -> Self {
        Kernel2D::BivariateBridge
    }

    pub fn tied_down_bridge() -> Self {
        Self::separable(AxisKernel::Bridge, AxisKernel::Bridge, 1.0)
    }

    /// Tied-down scaled Wiener bridge on `[0, S] × [0, T]`.
    pub fn scaled_bridge(s_horizon: f64, alpha: f64, t_horizon: f64, beta: f64) -> Result<Self> {
        Ok(Self::separable(
            AxisKernel::scaled_bridge(s_horizon, alpha)?,
            AxisKernel::scaled_bridge(t_horizon, beta)?,
            1.0,
        ))
    }

    pub fn kiefer() -> Self {
        Self::separable(AxisKernel::Bridge, AxisKernel::Wiener, 1.0)
    }

    pub fn fg_bridge(f: CdfSpec, g: CdfSpec) -> Self {
        Self::separable(AxisKernel::CdfBridge(f), AxisKernel::CdfBridge(g), 1.0)
    }

    pub fn is_separable(&self) -> bool {
        matches!(self, Kernel2D::Separable { .. })
    }

    pub fn check_point(&self, s: f64, t: f64) -> Result<()> {
        match self {
            Kernel2D::Separable { s_axis, t_axis, .. } => {
                s_axis.check(s)?;
                t_axis.check(t)
            }
            Kernel2D::BivariateBridge => {
                check_range("bivariate bridge", s, 0.0, 1.0)?;
                check_range("bivariate bridge", t, 0.0, 1.0)
            }
        }
    }

    pub fn eval(&self, s1: f64, t1: f64, s2: f64, t2: f64) -> Result<f64> {
        match self {
            Kernel2D::Separable { s_axis, t_axis, scale } => {
                Ok(scale * s_axis.eval(s1, s2)? * t_axis.eval(t1, t2)?)
            }
            Kernel2D::BivariateBridge => eval_bivariate_bridge(s1, t1, s2, t2),
        }
    }

    pub fn variance(&self, s: f64, t: f64) -> Result<f64> {
        self.eval(s, t, s, t)
    }

    pub fn label(&self) -> String {
        match self {
            Kernel2D::Separable { s_axis, t_axis, scale } => {
                format!("separable[{} x {}; scale={scale}]", s_axis.label(), t_axis.label())
            }
            Kernel2D::BivariateBridge => "bivariate-bridge".into(),
        }
    }
}

/// Standard Wiener field: `min(s1,s2)·min(t1,t2)` on the quarter plane.
pub fn eval_wiener(s1: f64, t1: f64, s2: f64, t2: f64) -> Result<f64> {
    let k = AxisKernel::Wiener;
    Ok(k.eval(s1, s2)? * k.eval(t1, t2)?)
}

/// Stationary OU field: `σ²/(4αβ)·exp(−α|s1−s2| − β|t1−t2|)`.
pub fn eval_ou(params: &OUParams, s1: f64, t1: f64, s2: f64, t2: f64) -> Result<f64> {
    for x in [s1, t1, s2, t2] {
        check_finite("ou", x)?;
    }
    let (sa, sb) = ordered(s1, s2);
    let (ta, tb) = ordered(t1, t2);
    Ok(params.variance() * (-params.alpha * (sb - sa) - params.beta * (tb - ta)).exp())
}

/// Bivariate Wiener bridge `W(s,t) − st·W(1,1)` on `[0, 1]²`.
pub fn eval_bivariate_bridge(s1: f64, t1: f64, s2: f64, t2: f64) -> Result<f64> {
    for x in [s1, t1, s2, t2] {
        check_range("bivariate bridge", x, 0.0, 1.0)?;
    }
    let (sa, sb) = ordered(s1, s2);
    let (ta, tb) = ordered(t1, t2);
    Ok(sa * ta - (sa * sb) * (ta * tb))
}

/// Tied-down Wiener bridge on `[0, 1]²`, zero on the whole border.
pub fn eval_tied_down_bridge(s1: f64, t1: f64, s2: f64, t2: f64) -> Result<f64> {
    let k = AxisKernel::Bridge;
    Ok(k.eval(s1, s2)? * k.eval(t1, t2)?)
}

/// Scaled Wiener bridge covariance `R_S^{(α)}(s1, s2)` on `[0, S]`.
pub fn eval_scaled_bridge_axis(horizon: f64, alpha: f64, s1: f64, s2: f64) -> Result<f64> {
    AxisKernel::scaled_bridge(horizon, alpha)?.eval(s1, s2)
}

/// Kiefer process on `[0, 1] × [0, ∞)`.
pub fn eval_kiefer(s1: f64, s2: f64, t1: f64, t2: f64) -> Result<f64> {
    Ok(AxisKernel::Bridge.eval(s1, s2)? * AxisKernel::Wiener.eval(t1, t2)?)
}

/// `(F,G)`-Wiener bridge on `[0, S_F) × [0, T_G)`.
pub fn eval_fg_bridge(f: &CdfSpec, g: &CdfSpec, s1: f64, t1: f64, s2: f64, t2: f64) -> Result<f64> {
    f.check_arg(s1)?;
    f.check_arg(s2)?;
    g.check_arg(t1)?;
    g.check_arg(t2)?;
    let (sa, sb) = ordered(s1, s2);
    let (ta, tb) = ordered(t1, t2);
    Ok(f.cdf(sa) * f.survival(sb) * (g.cdf(ta) * g.survival(tb)))
}

#[cfg(test)]
mod tests;
