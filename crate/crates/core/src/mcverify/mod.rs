//! Empirical covariance estimation and statistical gates.
//!
//! A gate compares each entry of an empirical covariance matrix with its
//! target `c` inside a band of `k` standard errors, where the standard error
//! of a Gaussian sample covariance is `√((c_xx·c_yy + c_xy²)/n)` computed
//! from the target. The sample mean is checked against `k·√(c_xx/n)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kernels::{covariance_matrix, Kernel2D, OUParams};
use crate::report::{ResidualLocation, VerificationReport};
use crate::sampling::{FieldSample, GENERATOR_ID};

/// Band half-width used by every gate unless overridden.
pub const DEFAULT_SIGMAS: f64 = 3.0;

/// Fraction of entries that must fall inside their band.
pub const MIN_PASS_FRACTION: f64 = 0.95;

/// Replicates per accumulation chunk. Fixed, so partial sums and their merge
/// order never depend on the thread count.
const CHUNK: usize = 1024;

/// Relative tolerance when deciding whether two grids differ by a translation.
const SHIFT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct EmpiricalCovariance {
    pub grid: Arc<GridSpec>,
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    pub n: usize,
    /// Common seed of all replicates, when they share one.
    pub seed: Option<u64>,
}

/// Unbiased (divisor `n − 1`) sample covariance about the sample mean.
pub fn empirical_covariance(samples: &[FieldSample]) -> Result<EmpiricalCovariance> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::Mismatch(format!("need at least 2 replicates, got {n}")));
    }
    let grid = Arc::clone(&samples[0].grid);
    if let Some(bad) = samples.iter().find(|s| !Arc::ptr_eq(&s.grid, &grid) && *s.grid != *grid) {
        return Err(Error::Mismatch(format!(
            "replicate {} lies on a different grid",
            bad.replicate_index
        )));
    }
    let p = grid.len();
    if let Some(bad) = samples.iter().find(|s| s.values.len() != p) {
        return Err(Error::Mismatch(format!(
            "replicate {} has {} values, grid has {p} points",
            bad.replicate_index,
            bad.values.len()
        )));
    }

    let sums: Vec<Vec<f64>> = samples
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; p];
            for s in chunk {
                for (a, v) in acc.iter_mut().zip(&s.values) {
                    *a += v;
                }
            }
            acc
        })
        .collect();
    let mut mean = DVector::zeros(p);
    for part in &sums {
        for (m, v) in mean.iter_mut().zip(part) {
            *m += v;
        }
    }
    mean /= n as f64;

    // Upper triangle (row-major, i ≤ j) of centred cross products.
    let tri = p * (p + 1) / 2;
    let partials: Vec<Vec<f64>> = samples
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; tri];
            let mut centred = vec![0.0; p];
            for s in chunk {
                for (c, (v, m)) in centred.iter_mut().zip(s.values.iter().zip(mean.iter())) {
                    *c = v - m;
                }
                let mut k = 0;
                for i in 0..p {
                    let ci = centred[i];
                    for &cj in &centred[i..] {
                        acc[k] += ci * cj;
                        k += 1;
                    }
                }
            }
            acc
        })
        .collect();
    let mut upper = vec![0.0; tri];
    for part in &partials {
        for (u, v) in upper.iter_mut().zip(part) {
            *u += v;
        }
    }
    let mut cov = DMatrix::zeros(p, p);
    let mut k = 0;
    for i in 0..p {
        for j in i..p {
            let v = upper[k] / (n as f64 - 1.0);
            cov[(i, j)] = v;
            cov[(j, i)] = v;
            k += 1;
        }
    }

    let seed = samples[0].seed;
    let common_seed = samples.iter().all(|s| s.seed == seed).then_some(seed);
    Ok(EmpiricalCovariance {
        grid,
        mean,
        cov,
        n,
        seed: common_seed,
    })
}

/// Entry-wise band comparison of `emp` against an explicit target matrix
/// laid out on `emp.grid`.
pub fn covariance_gate_matrix(
    name: impl Into<String>,
    emp: &EmpiricalCovariance,
    target: &DMatrix<f64>,
    confidence_sigmas: f64,
) -> VerificationReport {
    let name = name.into();
    let p = emp.grid.len();
    if target.shape() != (p, p) {
        return VerificationReport::failure(
            name,
            format!("target is {}x{}, empirical covariance is {p}x{p}", target.nrows(), target.ncols()),
        );
    }
    let n = emp.n as f64;
    let mut cov_outside = 0;
    let mut max = 0.0;
    let mut location = None;
    for i in 0..p {
        for j in 0..p {
            let c = target[(i, j)];
            let se = ((target[(i, i)] * target[(j, j)] + c * c) / n).sqrt();
            let d = (emp.cov[(i, j)] - c).abs();
            if !(d <= confidence_sigmas * se) {
                cov_outside += 1;
            }
            if d > max || location.is_none() {
                max = d;
                location = Some(ResidualLocation {
                    row: i,
                    col: j,
                    p: emp.grid.point(i),
                    q: emp.grid.point(j),
                });
            }
        }
    }
    let mut mean_outside = 0;
    for i in 0..p {
        let se = (target[(i, i)] / n).sqrt();
        if !(emp.mean[i].abs() <= confidence_sigmas * se) {
            mean_outside += 1;
        }
    }
    // Mean entries are pooled with covariance entries: an entrywise mean
    // requirement alone rejects a correct sampler ~4% of the time at p = 16.
    let total = p * p + p;
    let pass = (total - cov_outside - mean_outside) as f64 >= MIN_PASS_FRACTION * total as f64;
    let mut report = VerificationReport {
        pass,
        max_residual: max,
        residual_location: location,
        n_entries_tested: p * p + p,
        n_entries_outside_band: cov_outside + mean_outside,
        confidence_sigmas: Some(confidence_sigmas),
        min_pass_fraction: Some(MIN_PASS_FRACTION),
        ..VerificationReport::new(name)
    }
    .with_meta("replicates", emp.n)
    .with_meta("grid", format!("{}x{}", emp.grid.n_s(), emp.grid.n_t()))
    .with_meta("covariance_outside", format!("{cov_outside}/{}", p * p))
    .with_meta("mean_outside", format!("{mean_outside}/{p}"))
    .with_meta("generator", GENERATOR_ID);
    if let Some(seed) = emp.seed {
        report = report.with_meta("seed", seed);
    }
    report
}

/// Compares `emp` with `target` evaluated on the same grid.
///
/// Each covariance entry is tested against `confidence_sigmas` standard
/// errors and each mean entry against `confidence_sigmas·√(c_xx/n)`; the gate
/// passes iff at least 95% of all these entries lie inside their band.
pub fn covariance_gate(emp: &EmpiricalCovariance, target: &Kernel2D, confidence_sigmas: f64) -> VerificationReport {
    let name = format!("covariance-gate[{}]", target.label());
    match covariance_matrix(target, &emp.grid) {
        Ok(m) => covariance_gate_matrix(name, emp, &m, confidence_sigmas),
        Err(e) => VerificationReport::failure(name, e.to_string()),
    }
}

/// Common translation `(ds, dt)` taking grid `a` onto grid `b`.
pub fn grid_shift(a: &GridSpec, b: &GridSpec) -> Result<(f64, f64)> {
    if a.n_s() != b.n_s() || a.n_t() != b.n_t() {
        return Err(Error::Mismatch(format!(
            "grids have shapes {}x{} and {}x{}",
            a.n_s(),
            a.n_t(),
            b.n_s(),
            b.n_t()
        )));
    }
    let axis = |pa: &[f64], pb: &[f64], name: &str| -> Result<f64> {
        let d = pb[0] - pa[0];
        for (x, y) in pa.iter().zip(pb) {
            if ((y - x) - d).abs() > SHIFT_TOL * (1.0 + x.abs().max(y.abs())) {
                return Err(Error::Mismatch(format!("{name}-grids are not related by a common shift")));
            }
        }
        Ok(d)
    };
    Ok((axis(a.s_points(), b.s_points(), "s")?, axis(a.t_points(), b.t_points(), "t")?))
}

/// Stationarity gate: two independently seeded OU batches on grids that
/// differ by a translation must both match the single target evaluated on the
/// first grid.
pub fn ou_stationarity_gate(
    base: &EmpiricalCovariance,
    shifted: &EmpiricalCovariance,
    params: &OUParams,
    confidence_sigmas: f64,
) -> Result<VerificationReport> {
    let (ds, dt) = grid_shift(&base.grid, &shifted.grid)?;
    if let (Some(a), Some(b)) = (base.seed, shifted.seed) {
        if a == b {
            return Err(Error::Mismatch(format!("both batches use seed {a}; independent seeds are required")));
        }
    }
    let target = covariance_matrix(&Kernel2D::ou(*params), &base.grid)?;
    let a = covariance_gate_matrix("base", base, &target, confidence_sigmas);
    let b = covariance_gate_matrix("shifted", shifted, &target, confidence_sigmas);
    let (worst, loc) = if a.max_residual >= b.max_residual {
        (a.max_residual, a.residual_location.clone())
    } else {
        (b.max_residual, b.residual_location.clone())
    };
    let mut report = VerificationReport {
        pass: a.pass && b.pass,
        max_residual: worst,
        residual_location: loc,
        n_entries_tested: a.n_entries_tested + b.n_entries_tested,
        n_entries_outside_band: a.n_entries_outside_band + b.n_entries_outside_band,
        confidence_sigmas: Some(confidence_sigmas),
        min_pass_fraction: Some(MIN_PASS_FRACTION),
        ..VerificationReport::new(format!(
            "ou-stationarity[alpha={},beta={},sigma={}; shift=({ds},{dt})]",
            params.alpha(),
            params.beta(),
            params.sigma()
        ))
    }
    .with_meta("base_pass", a.pass)
    .with_meta("shifted_pass", b.pass)
    .with_meta("replicates", base.n)
    .with_meta("generator", GENERATOR_ID);
    if let (Some(sa), Some(sb)) = (base.seed, shifted.seed) {
        report = report.with_meta("seed", sa).with_meta("seed_shifted", sb);
    }
    Ok(report)
}
