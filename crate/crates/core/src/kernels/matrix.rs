use nalgebra::DMatrix;
use rayon::prelude::*;

use super::Kernel2D;
use crate::error::Result;
use crate::grid::GridSpec;

/// Dense covariance of `kernel` over `grid`, indexed row-major in `(i, j)`.
///
/// Each unordered pair is evaluated once and mirrored, so the result is
/// exactly symmetric. Rows are filled in parallel; the values do not depend
/// on the partitioning.
pub fn covariance_matrix(kernel: &Kernel2D, grid: &GridSpec) -> Result<DMatrix<f64>> {
    let n = grid.len();
    let points: Vec<(f64, f64)> = grid.points().collect();
    for &(s, t) in &points {
        kernel.check_point(s, t)?;
    }
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (s1, t1) = points[i];
            (i..n)
                .map(|j| {
                    let (s2, t2) = points[j];
                    kernel.eval(s1, t1, s2, t2)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut cov = DMatrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        for (offset, &v) in row.iter().enumerate() {
            let j = i + offset;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(cov)
}

/// Covariance matrix of a single axis kernel over a list of points.
pub(crate) fn axis_matrix(kernel: &super::AxisKernel, pts: &[f64]) -> Result<DMatrix<f64>> {
    let n = pts.len();
    let mut cov = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval(pts[i], pts[j])?;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(cov)
}
