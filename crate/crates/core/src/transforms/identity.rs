use rayon::prelude::*;

use super::{induced_covariance, OURepresentation};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::kernels::Kernel2D;
use crate::report::{ResidualLocation, VerificationReport};

/// Largest absolute gap between the induced covariance of `rep` and `target`
/// over every ordered pair of grid points; passes iff it is at most `tol`.
///
/// Domain violations do not panic or propagate: they produce a failed report
/// naming the offending point.
pub fn identity_check(rep: &OURepresentation, target: &Kernel2D, grid: &GridSpec, tol: f64) -> VerificationReport {
    let name = format!("identity[{}] vs {}", rep.label(), target.label());
    match residuals(rep, target, grid, tol) {
        Ok(r) => {
            let n = grid.len();
            VerificationReport {
                pass: r.max <= tol,
                max_residual: r.max,
                residual_location: r.location,
                n_entries_tested: n * n,
                n_entries_outside_band: r.outside,
                tolerance: Some(tol),
                ..VerificationReport::new(name)
            }
        }
        Err(e) => VerificationReport {
            tolerance: Some(tol),
            ..VerificationReport::failure(name, e.to_string())
        },
    }
    .with_meta("grid", format!("{}x{}", grid.n_s(), grid.n_t()))
}

struct Residuals {
    max: f64,
    location: Option<ResidualLocation>,
    outside: usize,
}

fn residuals(rep: &OURepresentation, target: &Kernel2D, grid: &GridSpec, tol: f64) -> Result<Residuals> {
    let points: Vec<(f64, f64)> = grid.points().collect();
    let n = points.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = points[i];
            (0..n)
                .map(|j| {
                    let q = points[j];
                    let induced = induced_covariance(rep, p.0, p.1, q.0, q.1)?;
                    let expected = target.eval(p.0, p.1, q.0, q.1)?;
                    let d = (induced - expected).abs();
                    Ok(if d.is_nan() { f64::INFINITY } else { d })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    // Sequential reduction in index order; ties keep the first location.
    let mut out = Residuals {
        max: 0.0,
        location: None,
        outside: 0,
    };
    for (i, row) in rows.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if d > tol {
                out.outside += 1;
            }
            if d > out.max || out.location.is_none() {
                out.max = d;
                out.location = Some(ResidualLocation {
                    row: i,
                    col: j,
                    p: points[i],
                    q: points[j],
                });
            }
        }
    }
    Ok(out)
}
