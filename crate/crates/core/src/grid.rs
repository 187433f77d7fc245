//! Uniform node grids, trapezoidal quadrature and finite-difference stencils.

use crate::error::{Error, Result};

/// Uniform grid of `n` nodes from `x_min` to `x_max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
    h: f64,
}

impl SpatialGrid {
    pub const MIN_NODES: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < Self::MIN_NODES {
            return Err(Error::Config(format!(
                "grid needs at least {} nodes, got {n}",
                Self::MIN_NODES
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::Config(format!(
                "grid bounds must be finite with x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n,
            h: (x_max - x_min) / (n - 1) as f64,
        })
    }

    /// Grid symmetric about zero.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn spacing(&self) -> f64 {
        self.h
    }
    pub fn span(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }

    /// Trapezoidal weight of node `i` (the width of its dual cell).
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5 * self.h
        } else {
            self.h
        }
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n);
        let inner: f64 = values[1..self.n - 1].iter().sum();
        self.h * (inner + 0.5 * (values[0] + values[self.n - 1]))
    }

    pub fn integrate_with(&self, values: &[f64], f: impl Fn(f64, f64) -> f64) -> f64 {
        debug_assert_eq!(values.len(), self.n);
        let mut acc = 0.0;
        for (i, &v) in values.iter().enumerate() {
            acc += self.weight(i) * f(self.node(i), v);
        }
        acc
    }
}

/// First derivative: central in the interior, one-sided second order at the ends.
pub fn first_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut g = vec![0.0; n];
    for i in 1..n - 1 {
        g[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    g[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    g
}

/// Second derivative: central in the interior, one-sided second order at the ends.
pub fn second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let h2 = h * h;
    let mut g = vec![0.0; n];
    for i in 1..n - 1 {
        g[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    g[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    g[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    g
}
