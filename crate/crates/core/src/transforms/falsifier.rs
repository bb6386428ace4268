//! Numerical obstruction to product-form representations.
//!
//! If a field had a representation `√(g(s)g̃(t))·X(ln f(s), ln f̃(t))` with
//! increasing `f`, `f̃`, then for a fixed anchor `(s0, t0)` below every grid
//! point the cross-covariance `k((s0,t0), (s_i,t_j))` would factor as
//! `a_i · b_j`, i.e. the matrix would have rank one. A second singular value
//! that is not negligible relative to the first rules the representation out.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{eval_bivariate_bridge, Kernel2D};

/// Ratio `σ₂/σ₁` above which a matrix is declared not rank one.
pub const RANK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparabilityVerdict {
    Separable,
    NotSeparable,
}

impl std::fmt::Display for SeparabilityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeparabilityVerdict::Separable => "separable",
            SeparabilityVerdict::NotSeparable => "not separable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankOneTest {
    pub largest_singular_value: f64,
    pub second_singular_value: f64,
    pub verdict: SeparabilityVerdict,
}

/// Rank-one test on an arbitrary matrix with at least two rows and columns.
pub fn rank_one_test(m: &DMatrix<f64>) -> Result<RankOneTest> {
    if m.nrows() < 2 || m.ncols() < 2 {
        return Err(Error::Grid(format!("rank test needs at least 2x2, got {}x{}", m.nrows(), m.ncols())));
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let (s1, s2) = (sv[0], sv[1]);
    let verdict = if s2 > RANK_TOLERANCE * s1 {
        SeparabilityVerdict::NotSeparable
    } else {
        SeparabilityVerdict::Separable
    };
    Ok(RankOneTest {
        largest_singular_value: s1,
        second_singular_value: s2,
        verdict,
    })
}

fn check_axis(name: &str, pts: &[f64], lo: f64) -> Result<()> {
    if pts.len() < 2 {
        return Err(Error::Grid(format!("{name}: at least two points required")));
    }
    if let Some(w) = pts.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::Grid(format!("{name}: points must be strictly increasing, got {} then {}", w[0], w[1])));
    }
    if pts.iter().any(|&x| !(x >= lo)) {
        return Err(Error::Grid(format!("{name}: every point must be at least the anchor {lo}")));
    }
    Ok(())
}

/// Cross-covariance matrix `k((s0,t0), (s_i,t_j))` from an anchor dominated
/// by the grid, followed by the rank-one test.
pub fn product_form_falsifier(kernel: &Kernel2D, anchor: (f64, f64), grid_s: &[f64], grid_t: &[f64]) -> Result<RankOneTest> {
    check_axis("s-grid", grid_s, anchor.0)?;
    check_axis("t-grid", grid_t, anchor.1)?;
    let mut m = DMatrix::zeros(grid_s.len(), grid_t.len());
    for (i, &s) in grid_s.iter().enumerate() {
        for (j, &t) in grid_t.iter().enumerate() {
            m[(i, j)] = kernel.eval(anchor.0, anchor.1, s, t)?;
        }
    }
    rank_one_test(&m)
}

/// Residual factor `1 − s·t` of the bivariate Wiener bridge at anchor `(½, ½)`.
fn bridge_residual(s: f64, t: f64) -> Result<f64> {
    Ok(eval_bivariate_bridge(0.5, 0.5, s, t)? / 0.25)
}

/// Rank test of `M[i][j] = 1 − s_i t_j` on a grid in `[½, 1]`.
///
/// A product-form representation of the bivariate Wiener bridge would make
/// `M` rank one; it has rank two.
pub fn separability_falsifier(grid_s: &[f64], grid_t: &[f64]) -> Result<(f64, SeparabilityVerdict)> {
    check_axis("s-grid", grid_s, 0.5)?;
    check_axis("t-grid", grid_t, 0.5)?;
    if grid_s.iter().chain(grid_t).any(|&x| x > 1.0) {
        return Err(Error::Grid("falsifier grid must lie in [1/2, 1]".into()));
    }
    let mut m = DMatrix::zeros(grid_s.len(), grid_t.len());
    for (i, &s) in grid_s.iter().enumerate() {
        for (j, &t) in grid_t.iter().enumerate() {
            m[(i, j)] = bridge_residual(s, t)?;
        }
    }
    let test = rank_one_test(&m)?;
    Ok((test.second_singular_value, test.verdict))
}

/// The two candidate profiles `G(s₂)` implied by a product-form
/// representation, read off the slices `t₂ = ½` and `t₂ = 1` of the residual
/// factor and normalized to 1 at `s₂ = ½`. They must coincide if the
/// representation exists.
pub fn slice_candidates(s2: f64) -> Result<(f64, f64)> {
    let from_half = bridge_residual(s2, 0.5)? / bridge_residual(0.5, 0.5)?;
    let from_one = bridge_residual(s2, 1.0)? / bridge_residual(0.5, 1.0)?;
    Ok((from_half, from_one))
}
