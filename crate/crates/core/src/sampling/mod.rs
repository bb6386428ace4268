//! Exact Gaussian sampling of catalog fields on rectangular grids.
//!
//! Four paths are available:
//!
//! * [`sample_dense`] factors the full `(n_s·n_t)²` covariance.
//! * [`sample_kronecker`] factors the two axis covariances of a separable
//!   kernel and forms `√scale · L_s·Z·L_tᵀ`.
//! * [`sample_ou_via_wiener`] draws a Wiener field on exponentially
//!   stretched coordinates and rescales it into a stationary OU field.
//! * [`sample_bridge_via_wiener`] draws a Wiener field on the image grid of
//!   a representation and applies the pathwise multipliers.
//!
//! Points where the target variance is exactly zero are never sampled and
//! come out as exact zeros.

mod csv;
mod factor;
mod rng;

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

pub use self::csv::{read_samples_csv, write_samples_csv, SampleTable};
pub use factor::{factorize, Factorization, MaskedFactor, JITTER_SCHEDULE};
pub use rng::{replicate_rng, standard_normals, GENERATOR_ID};

pub use crate::grid::GridSpec;
use crate::error::{domain, Error, Result};
use crate::kernels::{axis_matrix, covariance_matrix, AxisKernel, Kernel2D, OUParams};
use crate::transforms::{reduced_wiener_form, OURepresentation};

/// Largest `|2α s|` or `|2β t|` accepted before `exp` would overflow.
pub const MAX_EXPONENT: f64 = 700.0;

/// Largest Wiener-field coordinate accepted on a representation's image grid.
pub const MAX_IMAGE_COORD: f64 = 1e12;

/// One realization of a field on a grid, stored row-major in `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub grid: Arc<GridSpec>,
    pub values: Vec<f64>,
    pub seed: u64,
    pub replicate_index: u64,
}

impl FieldSample {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_t() + j]
    }

    /// Values as an `n_s × n_t` matrix.
    pub fn as_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.grid.n_s(), self.grid.n_t(), &self.values)
    }
}

fn collect_replicates(
    grid: &GridSpec,
    seed: u64,
    n_replicates: usize,
    draw: impl Fn(u64) -> Vec<f64> + Sync,
) -> Vec<FieldSample> {
    let grid = Arc::new(grid.clone());
    (0..n_replicates as u64)
        .into_par_iter()
        .map(|k| FieldSample {
            grid: Arc::clone(&grid),
            values: draw(k),
            seed,
            replicate_index: k,
        })
        .collect()
}

/// Samples by factoring the full grid covariance of `kernel`.
pub fn sample_dense(kernel: &Kernel2D, grid: &GridSpec, seed: u64, n_replicates: usize) -> Result<Vec<FieldSample>> {
    if n_replicates == 0 {
        return Ok(Vec::new());
    }
    let cov = covariance_matrix(kernel, grid)?;
    let factor = MaskedFactor::new(&cov)?;
    let m = factor.active.len();
    Ok(collect_replicates(grid, seed, n_replicates, |k| {
        factor.apply(&standard_normals(seed, k, m))
    }))
}

/// Row/column factors of a separable kernel on `grid`.
#[derive(Debug, Clone)]
pub struct KroneckerFactors {
    pub s: MaskedFactor,
    pub t: MaskedFactor,
    pub scale: f64,
}

impl KroneckerFactors {
    pub fn new(s_axis: &AxisKernel, t_axis: &AxisKernel, scale: f64, grid: &GridSpec) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::Parameter(format!("kernel scale must be non-negative, got {scale}")));
        }
        Ok(KroneckerFactors {
            s: MaskedFactor::new(&axis_matrix(s_axis, grid.s_points())?)?,
            t: MaskedFactor::new(&axis_matrix(t_axis, grid.t_points())?)?,
            scale,
        })
    }

    /// `scale · (L_s ⊗ L_t)(L_s ⊗ L_t)ᵀ` over the full grid.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let l = self.s.full_factor().kronecker(&self.t.full_factor());
        (&l * l.transpose()) * self.scale
    }

    /// One replicate from `a_s·a_t` normals laid out row-major.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let (a_s, a_t) = (self.s.active.len(), self.t.active.len());
        let zm = DMatrix::from_row_slice(a_s, a_t, z);
        let y = &self.s.factor * zm * self.t.factor.transpose() * self.scale.sqrt();
        let n_t = self.t.n;
        let mut out = vec![0.0; self.s.n * n_t];
        for (a, &i) in self.s.active.iter().enumerate() {
            for (b, &j) in self.t.active.iter().enumerate() {
                out[i * n_t + j] = y[(a, b)];
            }
        }
        out
    }
}

/// Samples a separable field through its axis factors.
pub fn sample_kronecker(
    s_axis: &AxisKernel,
    t_axis: &AxisKernel,
    scale: f64,
    grid: &GridSpec,
    seed: u64,
    n_replicates: usize,
) -> Result<Vec<FieldSample>> {
    if n_replicates == 0 {
        return Ok(Vec::new());
    }
    let factors = KroneckerFactors::new(s_axis, t_axis, scale, grid)?;
    let m = factors.s.active.len() * factors.t.active.len();
    Ok(collect_replicates(grid, seed, n_replicates, |k| {
        factors.apply(&standard_normals(seed, k, m))
    }))
}

/// `σ/(2√(αβ)) · e^{−αs−βt}` for every grid point; multiplies `W(e^{2αs}, e^{2βt})`.
pub fn ou_multipliers(params: &OUParams, grid: &GridSpec) -> Vec<f64> {
    let c = params.sigma() / (2.0 * (params.alpha() * params.beta()).sqrt());
    grid.points()
        .map(|(s, t)| c * (-params.alpha() * s - params.beta() * t).exp())
        .collect()
}

/// Grid `(e^{2αs_i}, e^{2βt_j})` on which the Wiener field is drawn.
pub fn ou_image_grid(params: &OUParams, grid: &GridSpec) -> Result<GridSpec> {
    let stretch = |rate: f64, pts: &[f64], axis: &str| -> Result<Vec<f64>> {
        pts.iter()
            .map(|&x| {
                let e = 2.0 * rate * x;
                if e.abs() > MAX_EXPONENT {
                    domain(format!("{axis} = {x}: |2·rate·{axis}| = {} exceeds {MAX_EXPONENT}", e.abs()))
                } else {
                    Ok(e.exp())
                }
            })
            .collect()
    };
    GridSpec::new(
        stretch(params.alpha(), grid.s_points(), "s")?,
        stretch(params.beta(), grid.t_points(), "t")?,
    )
}

/// Stationary OU field as a space-domain scaled Wiener field.
pub fn sample_ou_via_wiener(params: &OUParams, grid: &GridSpec, seed: u64, n_replicates: usize) -> Result<Vec<FieldSample>> {
    let image = ou_image_grid(params, grid)?;
    let multipliers = ou_multipliers(params, grid);
    let grid = Arc::new(grid.clone());
    Ok(sample_dense(&Kernel2D::wiener(), &image, seed, n_replicates)?
        .into_iter()
        .map(|w| FieldSample {
            grid: Arc::clone(&grid),
            values: w.values.iter().zip(&multipliers).map(|(w, m)| m * w).collect(),
            seed: w.seed,
            replicate_index: w.replicate_index,
        })
        .collect())
}

/// Precomputed pathwise map from a Wiener draw on the image grid to the
/// represented field on the original grid.
#[derive(Debug, Clone)]
pub struct ReducedFormPlan {
    grid: GridSpec,
    image: GridSpec,
    s_interior: Vec<usize>,
    t_interior: Vec<usize>,
    /// Multiplier per interior point, row-major over the interior sub-grid.
    scales: Vec<f64>,
}

impl ReducedFormPlan {
    pub fn new(rep: &OURepresentation, grid: &GridSpec) -> Result<Self> {
        let split = |pts: &[f64], inside: &dyn Fn(f64) -> bool, axis: &str| -> Result<Vec<usize>> {
            let mut keep = Vec::new();
            for (i, &x) in pts.iter().enumerate() {
                if inside(x) {
                    keep.push(i);
                } else if !grid.include_boundary() {
                    return domain(format!(
                        "{axis} = {x} is not interior to {}; enable include_boundary to carry it as an exact zero",
                        rep.label()
                    ));
                }
            }
            Ok(keep)
        };
        let s_interior = split(grid.s_points(), &|x| rep.s_transform.contains(x), "s")?;
        let t_interior = split(grid.t_points(), &|x| rep.t_transform.contains(x), "t")?;
        if s_interior.is_empty() || t_interior.is_empty() {
            return Err(Error::Grid("grid has no interior points".into()));
        }
        let t_ref = grid.t_points()[t_interior[0]];
        let s_ref = grid.s_points()[s_interior[0]];
        let check_image = |v: f64, axis: &str, x: f64| -> Result<f64> {
            if v.is_finite() && v <= MAX_IMAGE_COORD {
                Ok(v)
            } else {
                domain(format!(
                    "image coordinate {v:e} at {axis} = {x} exceeds {MAX_IMAGE_COORD:e}: the grid is too close to the horizon, increase the grid margin"
                ))
            }
        };
        let mut u = Vec::with_capacity(s_interior.len());
        for &i in &s_interior {
            let s = grid.s_points()[i];
            u.push(check_image(reduced_wiener_form(rep, s, t_ref)?.1, "s", s)?);
        }
        let mut v = Vec::with_capacity(t_interior.len());
        for &j in &t_interior {
            let t = grid.t_points()[j];
            v.push(check_image(reduced_wiener_form(rep, s_ref, t)?.2, "t", t)?);
        }
        let image = GridSpec::new(u, v).map_err(|e| {
            Error::Domain(format!("image grid degenerate ({e}); increase the grid margin"))
        })?;
        let mut scales = Vec::with_capacity(s_interior.len() * t_interior.len());
        for &i in &s_interior {
            for &j in &t_interior {
                scales.push(reduced_wiener_form(rep, grid.s_points()[i], grid.t_points()[j])?.0);
            }
        }
        Ok(ReducedFormPlan {
            grid: grid.clone(),
            image,
            s_interior,
            t_interior,
            scales,
        })
    }

    /// Wiener-field grid `{(u(s_i), v(t_j))}` over interior points.
    pub fn image_grid(&self) -> &GridSpec {
        &self.image
    }

    /// Field values on the full grid from Wiener values on the image grid.
    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        let n_t = self.grid.n_t();
        let m_t = self.t_interior.len();
        let mut out = vec![0.0; self.grid.len()];
        for (a, &i) in self.s_interior.iter().enumerate() {
            for (b, &j) in self.t_interior.iter().enumerate() {
                let idx = a * m_t + b;
                out[i * n_t + j] = self.scales[idx] * w[idx];
            }
        }
        out
    }
}

/// Represented field drawn pathwise as `scale(s,t) · W(u(s), v(t))`.
pub fn sample_bridge_via_wiener(
    rep: &OURepresentation,
    grid: &GridSpec,
    seed: u64,
    n_replicates: usize,
) -> Result<Vec<FieldSample>> {
    let plan = ReducedFormPlan::new(rep, grid)?;
    let grid = Arc::new(grid.clone());
    Ok(sample_dense(&Kernel2D::wiener(), plan.image_grid(), seed, n_replicates)?
        .into_iter()
        .map(|w| FieldSample {
            grid: Arc::clone(&grid),
            values: plan.apply(&w.values),
            seed: w.seed,
            replicate_index: w.replicate_index,
        })
        .collect())
}
