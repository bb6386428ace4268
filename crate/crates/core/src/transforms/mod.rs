//! Space-domain transforms that carry a standard stationary OU field onto
//! each bridge-type field of the catalog.
//!
//! A field `U` is represented as `U(s,t) = √(g(s)·g̃(t)) · X(ln f(s), ln f̃(t))`
//! on the open domain, and `0` on the closed boundary, where `X` is a
//! stationary OU field. Since `X` is itself a scaled Wiener field, every such
//! `U` also has the pathwise form `U(s,t) = scale(s,t) · W(u(s), v(t))`,
//! which is what [`reduced_wiener_form`] returns.

mod falsifier;
mod identity;

pub use falsifier::{
    product_form_falsifier, separability_falsifier, slice_candidates, rank_one_test, RankOneTest,
    SeparabilityVerdict, RANK_TOLERANCE,
};
pub use identity::identity_check;

use crate::error::{domain, Error, Result};
use crate::kernels::{scaled::power_increment, AxisKernel, CdfSpec, Kernel2D, OUParams};

/// Value a representation takes on the closed boundary of its domain.
pub const BOUNDARY_VALUE: f64 = 0.0;

/// The `(g, f)` pair of one axis.
#[derive(Debug, Clone)]
pub enum AxisMap {
    /// `g(x) = x(1−x)`, `f(x) = x/(1−x)` on `(0, 1)`.
    Logit,
    /// Scaled Wiener bridge transform on `(0, horizon)`.
    ScaledBridge { horizon: f64, alpha: f64 },
    /// `g(x) = x`, `f(x) = x` on `(0, ∞)`.
    Identity,
    /// `g = F(1−F)`, `f = F/(1−F)` on `(0, S_F)`.
    Cdf(CdfSpec),
}

/// Scale function `g` and domain function `f` on an open interval `(0, L)`.
#[derive(Debug, Clone)]
pub struct AxisTransform {
    map: AxisMap,
}

impl AxisTransform {
    pub fn new(map: AxisMap) -> Result<Self> {
        if let AxisMap::ScaledBridge { horizon, alpha } = map {
            AxisKernel::scaled_bridge(horizon, alpha)?;
        }
        Ok(AxisTransform { map })
    }

    pub fn map(&self) -> &AxisMap {
        &self.map
    }

    /// Right endpoint `L` of the open domain `(0, L)`.
    pub fn upper(&self) -> f64 {
        match &self.map {
            AxisMap::Logit => 1.0,
            AxisMap::ScaledBridge { horizon, .. } => *horizon,
            AxisMap::Identity => f64::INFINITY,
            AxisMap::Cdf(cdf) => cdf.horizon(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > 0.0 && x < self.upper()
    }

    /// `lim f(x)` as `x → L`.
    pub fn limit_at_upper(&self) -> f64 {
        match &self.map {
            AxisMap::ScaledBridge { horizon, alpha } if *alpha < 0.5 => horizon / (1.0 - 2.0 * alpha),
            _ => f64::INFINITY,
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            domain(format!("{}: {x} not in the open interval (0, {})", self.label(), self.upper()))
        }
    }

    pub fn g(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.map {
            AxisMap::Logit => x * (1.0 - x),
            AxisMap::ScaledBridge { horizon, alpha } => {
                (horizon - x).powf(2.0 * alpha) * power_increment(*horizon, x, 1.0 - 2.0 * alpha)
            }
            AxisMap::Identity => x,
            AxisMap::Cdf(cdf) => cdf.cdf(x) * cdf.survival(x),
        })
    }

    pub fn f(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.map {
            AxisMap::Logit => x / (1.0 - x),
            AxisMap::ScaledBridge { horizon, alpha } => {
                horizon.powf(2.0 * alpha) * power_increment(*horizon, x, 1.0 - 2.0 * alpha)
            }
            AxisMap::Identity => x,
            AxisMap::Cdf(cdf) => cdf.cdf(x) / cdf.survival(x),
        })
    }

    /// `ln f(x)`, the coordinate fed to the OU field.
    pub fn ln_f(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.map {
            AxisMap::Logit => x.ln() - (-x).ln_1p(),
            AxisMap::Cdf(cdf) => cdf.cdf(x).ln() - cdf.survival(x).ln(),
            _ => self.f(x)?.ln(),
        })
    }

    /// Verifies `f` is strictly increasing on `n` interior sample points.
    pub fn check_monotone(&self, n: usize) -> Result<()> {
        let upper = self.upper();
        let pts: Vec<f64> = (1..=n)
            .map(|k| {
                let u = k as f64 / (n as f64 + 1.0);
                if upper.is_finite() {
                    u * upper
                } else {
                    u / (1.0 - u)
                }
            })
            .collect();
        let mut prev = f64::NEG_INFINITY;
        for x in pts {
            let v = self.f(x)?;
            if !(v > prev) {
                return Err(Error::Domain(format!(
                    "{}: f not strictly increasing at x = {x} ({v} after {prev})",
                    self.label()
                )));
            }
            prev = v;
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match &self.map {
            AxisMap::Logit => "logit".into(),
            AxisMap::ScaledBridge { horizon, alpha } => format!("scaled(S={horizon},alpha={alpha})"),
            AxisMap::Identity => "identity".into(),
            AxisMap::Cdf(cdf) => format!("cdf({})", cdf.name()),
        }
    }
}

/// Two axis transforms applied to an OU field with parameters `ou`.
#[derive(Debug, Clone)]
pub struct OURepresentation {
    pub s_transform: AxisTransform,
    pub t_transform: AxisTransform,
    pub ou: OUParams,
}

impl OURepresentation {
    pub fn new(s_transform: AxisTransform, t_transform: AxisTransform, ou: OUParams) -> Self {
        OURepresentation {
            s_transform,
            t_transform,
            ou,
        }
    }

    /// True when `(s, t)` lies in the open domain of both transforms.
    pub fn contains(&self, s: f64, t: f64) -> bool {
        self.s_transform.contains(s) && self.t_transform.contains(t)
    }

    pub fn label(&self) -> String {
        format!("{} x {}", self.s_transform.label(), self.t_transform.label())
    }
}

/// Tied-down Wiener bridge: `g(s) = s(1−s)`, `f(s) = s/(1−s)` on both axes.
pub fn transform_tied_down() -> OURepresentation {
    let logit = AxisTransform { map: AxisMap::Logit };
    OURepresentation::new(logit.clone(), logit, OUParams::standard())
}

/// Scaled Wiener bridge axis with horizon `S` and parameter `α`.
pub fn transform_scaled(horizon: f64, alpha: f64) -> Result<AxisTransform> {
    AxisTransform::new(AxisMap::ScaledBridge { horizon, alpha })
}

/// Tied-down scaled Wiener bridge with parameters `(α, β)` on `[0,S]×[0,T]`.
pub fn transform_scaled_field(s_horizon: f64, alpha: f64, t_horizon: f64, beta: f64) -> Result<OURepresentation> {
    Ok(OURepresentation::new(
        transform_scaled(s_horizon, alpha)?,
        transform_scaled(t_horizon, beta)?,
        OUParams::standard(),
    ))
}

/// Kiefer process: logit transform in `s`, identity in `t`.
pub fn transform_kiefer() -> OURepresentation {
    OURepresentation::new(
        AxisTransform { map: AxisMap::Logit },
        AxisTransform { map: AxisMap::Identity },
        OUParams::standard(),
    )
}

/// `(F,G)`-Wiener bridge.
pub fn transform_fg(f: CdfSpec, g: CdfSpec) -> OURepresentation {
    OURepresentation::new(
        AxisTransform { map: AxisMap::Cdf(f) },
        AxisTransform { map: AxisMap::Cdf(g) },
        OUParams::standard(),
    )
}

fn ordered(x1: f64, x2: f64) -> (f64, f64) {
    if x1 <= x2 {
        (x1, x2)
    } else {
        (x2, x1)
    }
}

fn require_interior(rep: &OURepresentation, s: f64, t: f64) -> Result<()> {
    if rep.contains(s, t) {
        Ok(())
    } else {
        domain(format!(
            "point ({s}, {t}) outside the open domain (0, {}) x (0, {}) of {}",
            rep.s_transform.upper(),
            rep.t_transform.upper(),
            rep.label()
        ))
    }
}

/// Covariance of the represented field,
/// `√(g(s1)g(s2)g̃(t1)g̃(t2)) · σ²/(4αβ) · exp(−α|Δ ln f| − β|Δ ln f̃|)`.
///
/// Defined on the open domain only; boundary points are a domain error.
pub fn induced_covariance(rep: &OURepresentation, s1: f64, t1: f64, s2: f64, t2: f64) -> Result<f64> {
    require_interior(rep, s1, t1)?;
    require_interior(rep, s2, t2)?;
    let (sa, sb) = ordered(s1, s2);
    let (ta, tb) = ordered(t1, t2);
    let (st, tt) = (&rep.s_transform, &rep.t_transform);
    let scale = (st.g(sa)? * st.g(sb)? * (tt.g(ta)? * tt.g(tb)?)).sqrt();
    let lag_s = (st.ln_f(sb)? - st.ln_f(sa)?).abs();
    let lag_t = (tt.ln_f(tb)? - tt.ln_f(ta)?).abs();
    Ok(rep.ou.variance() * scale * (-rep.ou.alpha() * lag_s - rep.ou.beta() * lag_t).exp())
}

/// `(scale, u, v)` with `U(s,t) = scale · W(u, v)`.
///
/// For OU parameters `(α, β, σ)`: `scale = σ/(2√(αβ)) · √(g g̃) · f^{−α} f̃^{−β}`,
/// `u = f^{2α}`, `v = f̃^{2β}`; with `(½, ½, 1)` this is `√(g g̃/(f f̃))`, `f`, `f̃`.
pub fn reduced_wiener_form(rep: &OURepresentation, s: f64, t: f64) -> Result<(f64, f64, f64)> {
    require_interior(rep, s, t)?;
    let (alpha, beta) = (rep.ou.alpha(), rep.ou.beta());
    let (fs, ft) = (rep.s_transform.f(s)?, rep.t_transform.f(t)?);
    let (gs, gt) = (rep.s_transform.g(s)?, rep.t_transform.g(t)?);
    let c = rep.ou.sigma() / (2.0 * (alpha * beta).sqrt());
    let scale = c * (gs.sqrt() * fs.powf(-alpha)) * (gt.sqrt() * ft.powf(-beta));
    Ok((scale, fs.powf(2.0 * alpha), ft.powf(2.0 * beta)))
}

/// Target kernel that a representation is expected to reproduce, where known.
pub fn target_kernel(rep: &OURepresentation) -> Option<Kernel2D> {
    if rep.ou != OUParams::standard() {
        return None;
    }
    let axis = |t: &AxisTransform| match &t.map {
        AxisMap::Logit => AxisKernel::Bridge,
        AxisMap::ScaledBridge { horizon, alpha } => AxisKernel::ScaledBridge {
            horizon: *horizon,
            alpha: *alpha,
        },
        AxisMap::Identity => AxisKernel::Wiener,
        AxisMap::Cdf(cdf) => AxisKernel::CdfBridge(cdf.clone()),
    };
    Some(Kernel2D::separable(axis(&rep.s_transform), axis(&rep.t_transform), 1.0))
}

#[cfg(test)]
mod tests;
