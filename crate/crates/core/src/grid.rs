use serde::Serialize;

use crate::error::{Error, Result};

/// Rectangular grid of field locations.
///
/// Points are stored per axis; the flattened index of `(s_i, t_j)` is
/// `i * n_t + j` everywhere in the crate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    s_points: Vec<f64>,
    t_points: Vec<f64>,
    include_boundary: bool,
}

impl GridSpec {
    pub fn new(s_points: Vec<f64>, t_points: Vec<f64>) -> Result<Self> {
        check_axis("s", &s_points)?;
        check_axis("t", &t_points)?;
        Ok(GridSpec {
            s_points,
            t_points,
            include_boundary: false,
        })
    }

    /// Allows points on a field's zero set; they are carried as exact zeros.
    pub fn with_boundary(mut self, include_boundary: bool) -> Self {
        self.include_boundary = include_boundary;
        self
    }

    /// `n_s × n_t` points strictly inside `(s_lo, s_hi) × (t_lo, t_hi)`, equally spaced.
    pub fn interior(n_s: usize, s_range: (f64, f64), n_t: usize, t_range: (f64, f64)) -> Result<Self> {
        GridSpec::new(
            interior_points(n_s, s_range.0, s_range.1),
            interior_points(n_t, t_range.0, t_range.1),
        )
    }

    pub fn s_points(&self) -> &[f64] {
        &self.s_points
    }

    pub fn t_points(&self) -> &[f64] {
        &self.t_points
    }

    pub fn include_boundary(&self) -> bool {
        self.include_boundary
    }

    pub fn n_s(&self) -> usize {
        self.s_points.len()
    }

    pub fn n_t(&self) -> usize {
        self.t_points.len()
    }

    pub fn len(&self) -> usize {
        self.n_s() * self.n_t()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(s, t)` at flattened index `idx`.
    pub fn point(&self, idx: usize) -> (f64, f64) {
        let n_t = self.n_t();
        (self.s_points[idx / n_t], self.t_points[idx % n_t])
    }

    /// All points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.s_points
            .iter()
            .flat_map(move |&s| self.t_points.iter().map(move |&t| (s, t)))
    }

    /// The same grid translated by `(ds, dt)`.
    pub fn shifted(&self, ds: f64, dt: f64) -> Result<Self> {
        let g = GridSpec::new(
            self.s_points.iter().map(|s| s + ds).collect(),
            self.t_points.iter().map(|t| t + dt).collect(),
        )?;
        Ok(g.with_boundary(self.include_boundary))
    }
}

fn check_axis(name: &str, pts: &[f64]) -> Result<()> {
    if pts.is_empty() {
        return Err(Error::Grid(format!("{name}-axis has no points")));
    }
    if let Some(p) = pts.iter().find(|p| !p.is_finite()) {
        return Err(Error::Grid(format!("{name}-axis contains non-finite point {p}")));
    }
    if let Some(w) = pts.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Grid(format!(
            "{name}-axis not strictly increasing at {} >= {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `n` equally spaced points strictly inside `(lo, hi)`: `lo + (hi − lo)·k/(n+1)`.
pub fn interior_points(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let step = (hi - lo) / (n as f64 + 1.0);
    (1..=n).map(|k| lo + step * k as f64).collect()
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n as f64 - 1.0);
            (0..n)
                .map(|k| if k == n - 1 { hi } else { lo + step * k as f64 })
                .collect()
        }
    }
}
