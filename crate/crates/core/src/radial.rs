//! Log-spaced radial grids in the variable `s = r^2` and sampled profiles
//! with finite-difference stencils.

use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RadialError {
    #[error("grid must be strictly increasing and positive")]
    BadGrid,
    #[error("evaluation point {0} outside grid range [{1}, {2}]")]
    OutOfRange(f64, f64, f64),
    #[error("profile values must be finite")]
    NonFinite,
}

/// Strictly increasing, log-spaced grid of `s`-values.
#[derive(Clone, Debug)]
pub struct Grid {
    s: Arc<Vec<f64>>,
}

impl Grid {
    pub fn log_spaced(s_min: f64, s_max: f64, nodes: usize) -> Result<Self, RadialError> {
        if !(s_min > 0.0 && s_max > s_min && nodes >= 8) {
            return Err(RadialError::BadGrid);
        }
        let l0 = s_min.ln();
        let l1 = s_max.ln();
        let s: Vec<f64> = (0..nodes)
            .map(|i| (l0 + (l1 - l0) * i as f64 / (nodes - 1) as f64).exp())
            .collect();
        Ok(Grid { s: Arc::new(s) })
    }

    pub fn from_values(s: Vec<f64>) -> Result<Self, RadialError> {
        if s.len() < 8 || s[0] <= 0.0 || s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(RadialError::BadGrid);
        }
        Ok(Grid { s: Arc::new(s) })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn s_min(&self) -> f64 {
        self.s[0]
    }

    pub fn s_max(&self) -> f64 {
        *self.s.last().unwrap()
    }

    pub fn same_grid(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.s, &other.s) || *self.s == *other.s
    }

    /// Largest index i with s[i] <= x (clamped into [0, len-2]).
    fn bracket(&self, x: f64) -> usize {
        let s = &self.s;
        match s.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(s.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(s.len() - 2),
        }
    }
}

/// A function of `s` sampled on a grid. Values are immutable after build.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    grid: Grid,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, RadialError> {
        if values.len() != grid.len() {
            return Err(RadialError::BadGrid);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(RadialError::NonFinite);
        }
        Ok(RadialProfile { grid, values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self, RadialError> {
        let values = grid.s().iter().map(|&s| f(s)).collect();
        Self::new(grid.clone(), values)
    }

    pub fn zeros(grid: &Grid) -> Self {
        RadialProfile { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Nodewise first derivative by 3-point stencils on the nonuniform grid
    /// (one-sided at the ends).
    pub fn derivative(&self) -> RadialProfile {
        let s = self.grid.s();
        let v = &self.values;
        let n = s.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            out[i] = if i == 0 {
                stencil_d1(s[0], s[1], s[2], v[0], v[1], v[2], s[0])
            } else if i == n - 1 {
                stencil_d1(s[n - 3], s[n - 2], s[n - 1], v[n - 3], v[n - 2], v[n - 1], s[n - 1])
            } else {
                stencil_d1(s[i - 1], s[i], s[i + 1], v[i - 1], v[i], v[i + 1], s[i])
            };
        }
        RadialProfile { grid: self.grid.clone(), values: out }
    }

    pub fn second_derivative(&self) -> RadialProfile {
        let s = self.grid.s();
        let v = &self.values;
        let n = s.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let (a, b, c) = if i == 0 {
                (0, 1, 2)
            } else if i == n - 1 {
                (n - 3, n - 2, n - 1)
            } else {
                (i - 1, i, i + 1)
            };
            out[i] = stencil_d2(s[a], s[b], s[c], v[a], v[b], v[c]);
        }
        RadialProfile { grid: self.grid.clone(), values: out }
    }

    /// Linear interpolation inside the grid range.
    pub fn eval(&self, x: f64) -> Result<f64, RadialError> {
        let s = self.grid.s();
        if x < s[0] * (1.0 - 1e-12) || x > s[s.len() - 1] * (1.0 + 1e-12) {
            return Err(RadialError::OutOfRange(x, s[0], s[s.len() - 1]));
        }
        let i = self.grid.bracket(x);
        let t = ((x - s[i]) / (s[i + 1] - s[i])).clamp(0.0, 1.0);
        Ok(self.values[i] * (1.0 - t) + self.values[i + 1] * t)
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> RadialProfile {
        let values = self
            .grid
            .s()
            .iter()
            .zip(&self.values)
            .map(|(&s, &v)| f(s, v))
            .collect();
        RadialProfile { grid: self.grid.clone(), values }
    }
}

/// Derivative of the quadratic through `(x0,y0),(x1,y1),(x2,y2)` at `x`.
fn stencil_d1(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64, x: f64) -> f64 {
    let l0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
    y0 * l0 + y1 * l1 + y2 * l2
}

/// Second derivative of the quadratic through the three nodes (constant).
fn stencil_d2(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    2.0 * (y0 / ((x0 - x1) * (x0 - x2))
        + y1 / ((x1 - x0) * (x1 - x2))
        + y2 / ((x2 - x0) * (x2 - x1)))
}

/// Composite Simpson quadrature of a closure over `[a, b]`.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2) & !1; // even
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Simpson quadrature on a log-transformed axis, suited to the radial
/// grids used here: integrates `f(s) ds` over `[a, b]` with `a > 0`.
pub fn simpson_log(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    simpson(|t: f64| {
        let s = t.exp();
        f(s) * s
    }, a.ln(), b.ln(), panels)
}

/// Least-squares slope of `ln y` against `ln x`, with the residual stderr.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    let dof = (pts.len() as f64 - 2.0).max(1.0);
    let stderr = (ss_res / dof / sxx).sqrt();
    Some((slope, stderr))
}
