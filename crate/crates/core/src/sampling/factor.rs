use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Jitter multipliers of `trace/n`, tried in order.
pub const JITTER_SCHEDULE: [f64; 6] = [0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8];

/// Lower-triangular `L` with `L·Lᵀ = cov + jitter·I`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub factor: DMatrix<f64>,
    pub jitter: f64,
}

/// In-place right-looking Cholesky on the lower triangle of `a`.
/// On failure returns the index of the first non-positive pivot.
fn cholesky_in_place(a: &mut DMatrix<f64>) -> std::result::Result<(), usize> {
    let n = a.nrows();
    for j in 0..n {
        let pivot = a[(j, j)];
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(j);
        }
        let d = pivot.sqrt();
        {
            let col = &mut a.column_mut(j);
            col[j] = d;
            for i in j + 1..n {
                col[i] /= d;
            }
        }
        for k in j + 1..n {
            let lkj = a[(k, j)];
            if lkj == 0.0 {
                continue;
            }
            let (left, mut right) = a.columns_range_pair_mut(j, k..);
            let mut target = right.column_mut(0);
            for i in k..n {
                target[i] -= lkj * left[i];
            }
        }
    }
    for j in 1..n {
        for i in 0..j {
            a[(i, j)] = 0.0;
        }
    }
    Ok(())
}

/// Cholesky factor with the jitter schedule `0, 1e−12·τ, …, 1e−8·τ`, `τ = trace/n`.
pub fn factorize(cov: &DMatrix<f64>) -> Result<Factorization> {
    let n = cov.nrows();
    if n != cov.ncols() {
        return Err(Error::Mismatch(format!("covariance is {}x{}, not square", n, cov.ncols())));
    }
    if n == 0 {
        return Ok(Factorization {
            factor: DMatrix::zeros(0, 0),
            jitter: 0.0,
        });
    }
    let tau = cov.trace() / n as f64;
    let mut last = (0, 0.0);
    for mult in JITTER_SCHEDULE {
        let jitter = mult * tau;
        let mut a = cov.clone();
        for i in 0..n {
            a[(i, i)] += jitter;
        }
        match cholesky_in_place(&mut a) {
            Ok(()) => return Ok(Factorization { factor: a, jitter }),
            Err(minor) => last = (minor, jitter),
        }
    }
    Err(Error::NotPsd {
        minor: last.0,
        jitter: last.1,
    })
}

/// Factor of the sub-matrix of points with nonzero variance; the remaining
/// points are deterministic zeros.
#[derive(Debug, Clone)]
pub struct MaskedFactor {
    pub n: usize,
    pub active: Vec<usize>,
    pub factor: DMatrix<f64>,
    pub jitter: f64,
}

impl MaskedFactor {
    pub fn new(cov: &DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        let mut active = Vec::with_capacity(n);
        for i in 0..n {
            if cov[(i, i)] == 0.0 {
                if let Some(j) = (0..n).find(|&j| cov[(i, j)] != 0.0) {
                    return Err(Error::NotPsd {
                        minor: i.min(j),
                        jitter: 0.0,
                    });
                }
            } else {
                active.push(i);
            }
        }
        let sub = cov.select_rows(&active).select_columns(&active);
        let Factorization { factor, jitter } = factorize(&sub)?;
        Ok(MaskedFactor {
            n,
            active,
            factor,
            jitter,
        })
    }

    /// Full-size `L·Lᵀ` with zero rows and columns restored.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let sub = &self.factor * self.factor.transpose();
        let mut out = DMatrix::zeros(self.n, self.n);
        for (a, &i) in self.active.iter().enumerate() {
            for (b, &j) in self.active.iter().enumerate() {
                out[(i, j)] = sub[(a, b)];
            }
        }
        out
    }

    /// Full-size lower factor with zero rows for inactive points.
    pub fn full_factor(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (a, &i) in self.active.iter().enumerate() {
            for (b, &j) in self.active.iter().enumerate() {
                out[(i, j)] = self.factor[(a, b)];
            }
        }
        out
    }

    /// `L·z` scattered to full size; `z` has one entry per active point.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let m = self.active.len();
        debug_assert_eq!(z.len(), m);
        let mut y = vec![0.0; m];
        for (k, &zk) in z.iter().enumerate() {
            let col = self.factor.column(k);
            for i in k..m {
                y[i] += col[i] * zk;
            }
        }
        let mut out = vec![0.0; self.n];
        for (a, &i) in self.active.iter().enumerate() {
            out[i] = y[a];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_factor() {
        let f = factorize(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(f.factor, DMatrix::identity(4, 4));
        assert_eq!(f.jitter, 0.0);
    }

    #[test]
    fn scalar_square_root() {
        let f = factorize(&DMatrix::from_element(1, 1, 0.0625)).unwrap();
        assert_eq!(f.factor[(0, 0)], 0.25);
    }

    #[test]
    fn reconstructs_spd_matrix() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 2.0, 0.4, 2.0, 5.0, 1.0, 0.4, 1.0, 3.0]);
        let f = factorize(&a).unwrap();
        assert_eq!(f.jitter, 0.0);
        assert!((&f.factor * f.factor.transpose() - &a).amax() < 1e-14);
        for j in 1..3 {
            for i in 0..j {
                assert_eq!(f.factor[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn singular_psd_matrix_needs_jitter() {
        // Rank one: [1 1; 1 1].
        let a = DMatrix::from_element(2, 2, 1.0);
        let f = factorize(&a).unwrap();
        assert!(f.jitter > 0.0 && f.jitter <= 1e-8);
    }

    #[test]
    fn indefinite_matrix_reports_minor() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        match factorize(&a) {
            Err(Error::NotPsd { minor, jitter }) => {
                assert_eq!(minor, 1);
                assert!((jitter - 1e-8).abs() < 1e-20);
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn masked_factor_drops_zero_variance_points() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let m = MaskedFactor::new(&a).unwrap();
        assert_eq!(m.active, vec![1, 2]);
        assert!((m.reconstruct() - &a).amax() < 1e-15);
        let y = m.apply(&[1.0, -1.0]);
        assert_eq!(y[0], 0.0);

        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 1.0]);
        assert!(matches!(MaskedFactor::new(&bad), Err(Error::NotPsd { .. })));
    }
}
