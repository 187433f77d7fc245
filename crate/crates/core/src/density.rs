//! Position-space probability densities and their moments.

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;

/// Tolerance on the trapezoidal integral of any normalized profile.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Nonnegative density sampled on a [`SpatialGrid`], normalized to unit
/// trapezoidal integral.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    grid: SpatialGrid,
    values: Vec<f64>,
}

impl DensityProfile {
    /// Normalizes `values`. Negative, non-finite or all-zero input is rejected.
    pub fn new(grid: SpatialGrid, mut values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::Integrity(format!(
                "density value {v} at x = {} is negative or non-finite",
                grid.node(i)
            )));
        }
        let mass = grid.integrate(&values);
        if !(mass > 0.0) {
            return Err(Error::Integrity("density has zero mass".into()));
        }
        values.iter_mut().for_each(|v| *v /= mass);
        Ok(Self { grid, values })
    }

    /// Wraps solver output whose mass is already 1 up to round-off.
    /// Negatives smaller in magnitude than `clip * max` are set to zero;
    /// larger ones are an integrity error.
    pub(crate) fn from_solver(grid: SpatialGrid, raw: &[f64], clip: f64) -> Result<Self> {
        check_len(&grid, raw.len())?;
        let max = raw.iter().cloned().fold(0.0, f64::max);
        let mut values = Vec::with_capacity(raw.len());
        for (i, &v) in raw.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Integrity(format!(
                    "non-finite density at x = {}",
                    grid.node(i)
                )));
            }
            if v < -clip * max {
                return Err(Error::Integrity(format!(
                    "density {v:e} at x = {} is below the clipping threshold",
                    grid.node(i)
                )));
            }
            values.push(v.max(0.0));
        }
        let mass = grid.integrate(&values);
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::Integrity(format!("mass drifted to {mass}")));
        }
        values.iter_mut().for_each(|v| *v /= mass);
        Ok(Self { grid, values })
    }

    /// Gaussian with the given mean and variance, sampled and renormalized.
    pub fn gaussian(grid: SpatialGrid, mean: f64, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) {
            return Err(Error::domain("sigma2", sigma2, "must be > 0"));
        }
        let values = grid
            .nodes()
            .map(|x| (-(x - mean) * (x - mean) / (2.0 * sigma2)).exp())
            .collect();
        Self::new(grid, values)
    }

    /// Samples `f` on the grid and normalizes.
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
    pub fn mass(&self) -> f64 {
        self.grid.integrate(&self.values)
    }
}

fn check_len(grid: &SpatialGrid, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(Error::Config(format!(
            "value count {len} does not match grid size {}",
            grid.len()
        )));
    }
    Ok(())
}

/// Mean, variance and excess kurtosis of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub sigma2: f64,
    pub excess_kurtosis: f64,
    /// Set when `sigma2 < 4 h^2`: the density spans too few nodes to trust.
    pub under_resolved: bool,
}

pub fn moments(rho: &DensityProfile) -> Moments {
    let grid = rho.grid();
    let v = rho.values();
    let mean = grid.integrate_with(v, |x, r| x * r);
    let (mut m2, mut m4) = (0.0, 0.0);
    for (i, &r) in v.iter().enumerate() {
        let dx = grid.node(i) - mean;
        let w = grid.weight(i) * r;
        let dx2 = dx * dx;
        m2 += w * dx2;
        m4 += w * dx2 * dx2;
    }
    let h = grid.spacing();
    Moments {
        mean,
        sigma2: m2,
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
        under_resolved: m2 < 4.0 * h * h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moments() {
        let g = SpatialGrid::new(-8.0, 8.0, 257).unwrap();
        let m = moments(&DensityProfile::gaussian(g, 0.0, 1.0).unwrap());
        assert!(m.mean.abs() < 1e-6);
        assert!((m.sigma2 - 1.0).abs() < 1e-6);
        assert!(m.excess_kurtosis.abs() < 1e-6);
        assert!(!m.under_resolved);
    }

    #[test]
    fn shifted_gaussian_mean() {
        let g = SpatialGrid::new(-8.0, 8.0, 257).unwrap();
        let m = moments(&DensityProfile::gaussian(g, 1.0, 0.25).unwrap());
        assert!((m.mean - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bimodal_is_platykurtic() {
        let g = SpatialGrid::new(-4.0, 4.0, 401).unwrap();
        let rho = DensityProfile::from_fn(g, |x| {
            (-(x - 2.0).powi(2) / 0.02).exp() + (-(x + 2.0).powi(2) / 0.02).exp()
        })
        .unwrap();
        let m = moments(&rho);
        assert!(m.mean.abs() < 1e-12);
        assert!(m.excess_kurtosis < 0.0);
    }

    #[test]
    fn under_resolved_flag() {
        let g = SpatialGrid::new(-1.0, 1.0, 11).unwrap();
        let m = moments(&DensityProfile::gaussian(g, 0.0, 0.01).unwrap());
        assert!(m.under_resolved);
    }

    #[test]
    fn rejects_negative_values() {
        let g = SpatialGrid::new(0.0, 1.0, 8).unwrap();
        let mut v = vec![1.0; 8];
        v[3] = -1e-3;
        assert!(matches!(DensityProfile::new(g, v), Err(Error::Integrity(_))));
        assert!(DensityProfile::new(g, vec![0.0; 8]).is_err());
    }

    #[test]
    fn normalizes() {
        let g = SpatialGrid::new(0.0, 1.0, 8).unwrap();
        let rho = DensityProfile::new(g, vec![3.0; 8]).unwrap();
        assert!((rho.mass() - 1.0).abs() < NORMALIZATION_TOL);
    }
}
