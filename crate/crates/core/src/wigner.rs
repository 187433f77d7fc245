//! Phase-space quasi-probability fields on an `(x, p)` grid.

use crate::density::{DensityProfile, NORMALIZATION_TOL};
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;

/// Real field `W(x_i, p_j)` stored row-major in `x` (index `i * np + j`).
/// Normalized to unit 2D trapezoidal integral; the sign is unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    x: SpatialGrid,
    p: SpatialGrid,
    values: Vec<f64>,
}

impl WignerField {
    pub fn new(x: SpatialGrid, p: SpatialGrid, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != x.len() * p.len() {
            return Err(Error::Config(format!(
                "Wigner field has {} values for a {}x{} grid",
                values.len(),
                x.len(),
                p.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integrity("Wigner field has non-finite values".into()));
        }
        let mass = integrate_2d(&x, &p, &values);
        if !(mass > 0.0) {
            return Err(Error::Integrity(format!("Wigner field mass {mass} is not positive")));
        }
        values.iter_mut().for_each(|v| *v /= mass);
        Ok(Self { x, p, values })
    }

    /// Samples `f(x, p)` and normalizes.
    pub fn from_fn(x: SpatialGrid, p: SpatialGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(x.len() * p.len());
        for xi in x.nodes() {
            for pj in p.nodes() {
                values.push(f(xi, pj));
            }
        }
        Self::new(x, p, values)
    }

    /// Uncorrelated Gaussian with the given position and momentum variances.
    pub fn product_gaussian(
        x: SpatialGrid,
        p: SpatialGrid,
        sigma2_x: f64,
        sigma2_p: f64,
    ) -> Result<Self> {
        if !(sigma2_x > 0.0 && sigma2_p > 0.0) {
            return Err(Error::domain(
                "sigma2",
                sigma2_x.min(sigma2_p),
                "variances must be > 0",
            ));
        }
        Self::from_fn(x, p, |xi, pj| {
            (-xi * xi / (2.0 * sigma2_x) - pj * pj / (2.0 * sigma2_p)).exp()
        })
    }

    /// Wraps integrator state whose mass is already 1 up to round-off.
    pub(crate) fn from_state(x: SpatialGrid, p: SpatialGrid, values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Integrity(format!(
                "non-finite Wigner value at (x, p) = ({}, {})",
                x.node(i / p.len()),
                p.node(i % p.len())
            )));
        }
        Ok(Self { x, p, values })
    }

    pub fn x_grid(&self) -> &SpatialGrid {
        &self.x
    }
    pub fn p_grid(&self) -> &SpatialGrid {
        &self.p
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p.len() + j]
    }

    pub fn mass(&self) -> f64 {
        integrate_2d(&self.x, &self.p, &self.values)
    }

    /// Position variance of the field (about its mean).
    pub fn sigma2_x(&self) -> f64 {
        let rho = raw_marginal_x(&self.x, &self.p, &self.values);
        central_second_moment(&self.x, &rho)
    }

    /// Momentum variance of the field (about its mean).
    pub fn sigma2_p(&self) -> f64 {
        let np = self.p.len();
        let mut marg = vec![0.0; np];
        for i in 0..self.x.len() {
            let wx = self.x.weight(i);
            let row = &self.values[i * np..(i + 1) * np];
            for (m, v) in marg.iter_mut().zip(row) {
                *m += wx * v;
            }
        }
        central_second_moment(&self.p, &marg)
    }
}

fn central_second_moment(grid: &SpatialGrid, f: &[f64]) -> f64 {
    let mass = grid.integrate(f);
    let mean = grid.integrate_with(f, |x, v| x * v) / mass;
    grid.integrate_with(f, |x, v| (x - mean) * (x - mean) * v) / mass
}

pub(crate) fn integrate_2d(x: &SpatialGrid, p: &SpatialGrid, values: &[f64]) -> f64 {
    let np = p.len();
    (0..x.len())
        .map(|i| x.weight(i) * p.integrate(&values[i * np..(i + 1) * np]))
        .sum()
}

/// `rho(x_i) = int W(x_i, p) dp` by trapezoidal quadrature, unnormalized.
pub(crate) fn raw_marginal_x(x: &SpatialGrid, p: &SpatialGrid, values: &[f64]) -> Vec<f64> {
    let np = p.len();
    (0..x.len())
        .map(|i| p.integrate(&values[i * np..(i + 1) * np]))
        .collect()
}

/// Position marginal of a Wigner field.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalX {
    pub density: DensityProfile,
    /// Factor the raw quadrature was divided by; should be within 1e-6 of 1.
    pub renormalization: f64,
}

/// Absolute threshold below which negative marginal values are clipped to zero.
pub const MARGINAL_CLIP: f64 = 1e-10;

pub fn marginal_x(w: &WignerField) -> Result<MarginalX> {
    let mut rho = raw_marginal_x(&w.x, &w.p, &w.values);
    for (i, r) in rho.iter_mut().enumerate() {
        if *r < -MARGINAL_CLIP {
            return Err(Error::Integrity(format!(
                "negative marginal {r:e} at x = {}",
                w.x.node(i)
            )));
        }
        *r = r.max(0.0);
    }
    let renormalization = w.x.integrate(&rho);
    let density = DensityProfile::new(w.x, rho)?;
    debug_assert!((density.mass() - 1.0).abs() < NORMALIZATION_TOL);
    Ok(MarginalX {
        density,
        renormalization,
    })
}
