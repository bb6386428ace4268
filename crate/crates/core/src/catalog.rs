//! Named catalog of field families with their kernels, representations,
//! default grids and default samplers.

use crate::error::Result;
use crate::grid::{linspace, GridSpec};
use crate::kernels::{CdfSpec, Kernel2D, OUParams};
use crate::sampling::{sample_bridge_via_wiener, sample_dense, sample_ou_via_wiener, FieldSample};
use crate::transforms::{transform_fg, transform_kiefer, transform_scaled_field, transform_tied_down, OURepresentation};

/// Extent used for axes whose natural domain is unbounded.
pub const UNBOUNDED_EXTENT: f64 = 5.0;

/// Extent of the default OU grid on each axis.
pub const OU_EXTENT: f64 = 2.5;

#[derive(Debug, Clone)]
pub enum Family {
    Wiener,
    Ou(OUParams),
    BivariateBridge,
    TiedDownBridge,
    ScaledBridge {
        s_horizon: f64,
        alpha: f64,
        t_horizon: f64,
        beta: f64,
    },
    Kiefer,
    FgBridge { f: CdfSpec, g: CdfSpec },
}

impl Family {
    pub const NAMES: [&'static str; 7] = ["wiener", "ou", "bivariate", "tied-down", "scaled", "kiefer", "fg"];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Wiener => "wiener",
            Family::Ou(_) => "ou",
            Family::BivariateBridge => "bivariate",
            Family::TiedDownBridge => "tied-down",
            Family::ScaledBridge { .. } => "scaled",
            Family::Kiefer => "kiefer",
            Family::FgBridge { .. } => "fg",
        }
    }

    pub fn kernel(&self) -> Result<Kernel2D> {
        Ok(match self {
            Family::Wiener => Kernel2D::wiener(),
            Family::Ou(p) => Kernel2D::ou(*p),
            Family::BivariateBridge => Kernel2D::bivariate_bridge(),
            Family::TiedDownBridge => Kernel2D::tied_down_bridge(),
            Family::ScaledBridge {
                s_horizon,
                alpha,
                t_horizon,
                beta,
            } => Kernel2D::scaled_bridge(*s_horizon, *alpha, *t_horizon, *beta)?,
            Family::Kiefer => Kernel2D::kiefer(),
            Family::FgBridge { f, g } => Kernel2D::fg_bridge(f.clone(), g.clone()),
        })
    }

    /// Space-domain scaled OU representation, for the bridge-type families.
    pub fn representation(&self) -> Result<Option<OURepresentation>> {
        Ok(match self {
            Family::Wiener | Family::Ou(_) | Family::BivariateBridge => None,
            Family::TiedDownBridge => Some(transform_tied_down()),
            Family::ScaledBridge {
                s_horizon,
                alpha,
                t_horizon,
                beta,
            } => Some(transform_scaled_field(*s_horizon, *alpha, *t_horizon, *beta)?),
            Family::Kiefer => Some(transform_kiefer()),
            Family::FgBridge { f, g } => Some(transform_fg(f.clone(), g.clone())),
        })
    }

    /// Closed box `[s_lo, s_hi] × [t_lo, t_hi]` used for default grids.
    /// Unbounded axes are cut at a finite extent.
    pub fn default_box(&self) -> ((f64, f64), (f64, f64)) {
        let cdf_extent = |c: &CdfSpec| {
            let h = c.horizon();
            if h.is_finite() {
                h
            } else {
                // Five mean lifetimes of an exponential-like tail.
                match c.density(0.0) {
                    Some(d) if d > 0.0 => UNBOUNDED_EXTENT / d,
                    _ => UNBOUNDED_EXTENT,
                }
            }
        };
        match self {
            Family::Wiener | Family::BivariateBridge | Family::TiedDownBridge => ((0.0, 1.0), (0.0, 1.0)),
            Family::Ou(_) => ((0.0, OU_EXTENT), (0.0, OU_EXTENT)),
            Family::ScaledBridge { s_horizon, t_horizon, .. } => ((0.0, *s_horizon), (0.0, *t_horizon)),
            Family::Kiefer => ((0.0, 1.0), (0.0, UNBOUNDED_EXTENT)),
            Family::FgBridge { f, g } => ((0.0, cdf_extent(f)), (0.0, cdf_extent(g))),
        }
    }

    /// Equally spaced `n_s × n_t` grid kept a relative `margin` away from
    /// the zero set of the family. Axes without a zero at the right end keep
    /// their right endpoint; the OU grid starts at 0.
    pub fn default_grid(&self, n_s: usize, n_t: usize, margin: f64) -> Result<GridSpec> {
        let ((s_lo, s_hi), (t_lo, t_hi)) = self.default_box();
        let inset = |lo: f64, hi: f64, n: usize, right_zero: bool| {
            let w = hi - lo;
            let b = if right_zero { hi - margin * w } else { hi };
            linspace(n, lo + margin * w, b)
        };
        let (s, t) = match self {
            Family::Ou(_) => (linspace(n_s, s_lo, s_hi), linspace(n_t, t_lo, t_hi)),
            Family::Wiener => (inset(s_lo, s_hi, n_s, false), inset(t_lo, t_hi, n_t, false)),
            Family::Kiefer => (inset(s_lo, s_hi, n_s, true), inset(t_lo, t_hi, n_t, false)),
            Family::FgBridge { f, g } => (
                inset(s_lo, s_hi, n_s, f.horizon().is_finite()),
                inset(t_lo, t_hi, n_t, g.horizon().is_finite()),
            ),
            _ => (inset(s_lo, s_hi, n_s, true), inset(t_lo, t_hi, n_t, true)),
        };
        GridSpec::new(s, t)
    }

    /// Samples with the path suited to the family: pathwise through a
    /// Wiener field for represented families and OU, dense otherwise.
    pub fn sample(&self, grid: &GridSpec, seed: u64, n_replicates: usize) -> Result<Vec<FieldSample>> {
        match self {
            Family::Ou(p) => sample_ou_via_wiener(p, grid, seed, n_replicates),
            _ => match self.representation()? {
                Some(rep) => sample_bridge_via_wiener(&rep, grid, seed, n_replicates),
                None => sample_dense(&self.kernel()?, grid, seed, n_replicates),
            },
        }
    }

    /// One representative of each family with standard parameters.
    pub fn standard_members() -> Vec<Family> {
        vec![
            Family::Wiener,
            Family::Ou(OUParams::standard()),
            Family::BivariateBridge,
            Family::TiedDownBridge,
            Family::ScaledBridge {
                s_horizon: 2.0,
                alpha: 0.3,
                t_horizon: 1.0,
                beta: 0.7,
            },
            Family::Kiefer,
            Family::FgBridge {
                f: CdfSpec::uniform(),
                g: CdfSpec::exponential(1.0).expect("rate 1 is valid"),
            },
        ]
    }
}
