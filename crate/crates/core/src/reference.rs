//! Classical reference densities: the free-particle heat kernel and the Boltzmann distribution.

use std::f64::consts::PI;

use crate::density::DensityProfile;
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::params::PhysicalParams;
use crate::potential::Potential;

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceKind {
    /// `exp(-x^2 / 4Dt') / sqrt(4 pi D t')` with `t' = t + time_offset`.
    FreeParticle { time_offset: f64 },
    /// `exp(-V/kT) / Z`, static.
    Boltzmann(Potential),
}

/// Classical density whose log-curvature feeds the semiclassical corrections.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDensity {
    kind: ReferenceKind,
    params: PhysicalParams,
}

impl ReferenceDensity {
    pub fn free_particle(params: PhysicalParams, time_offset: f64) -> Result<Self> {
        if !time_offset.is_finite() {
            return Err(Error::domain("time_offset", time_offset, "must be finite"));
        }
        Ok(Self {
            kind: ReferenceKind::FreeParticle { time_offset },
            params,
        })
    }

    pub fn boltzmann(params: PhysicalParams, potential: Potential) -> Self {
        Self {
            kind: ReferenceKind::Boltzmann(potential),
            params,
        }
    }

    pub fn kind(&self) -> &ReferenceKind {
        &self.kind
    }
    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    fn free_time(&self, t: f64) -> Result<Option<f64>> {
        match self.kind {
            ReferenceKind::FreeParticle { time_offset } => {
                let te = t + time_offset;
                if te > 0.0 {
                    Ok(Some(te))
                } else {
                    Err(Error::domain(
                        "t",
                        t,
                        "free-particle reference is a delta function at nonpositive time",
                    ))
                }
            }
            ReferenceKind::Boltzmann(_) => Ok(None),
        }
    }

    /// Whether the reference can be evaluated at time `t`.
    pub fn check_time(&self, t: f64) -> Result<()> {
        self.free_time(t).map(|_| ())
    }

    /// Variance of the free-particle kernel at time `t` (`2 D t'`).
    pub fn free_variance(&self, t: f64) -> Result<Option<f64>> {
        Ok(self.free_time(t)?.map(|te| 2.0 * self.params.d() * te))
    }

    /// Pointwise density. The Boltzmann kind is unnormalized here; use
    /// [`ReferenceDensity::sample`] for a normalized profile.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        match &self.kind {
            ReferenceKind::FreeParticle { .. } => {
                let var = self.free_variance(t)?.unwrap();
                Ok((-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt())
            }
            ReferenceKind::Boltzmann(v) => Ok((-v.value(x) * self.params.beta()).exp()),
        }
    }

    /// Samples the reference at time `t`; the Boltzmann partition function is
    /// the trapezoidal integral over `grid`.
    pub fn sample(&self, grid: SpatialGrid, t: f64) -> Result<DensityProfile> {
        let values = grid
            .nodes()
            .map(|x| self.eval(x, t))
            .collect::<Result<Vec<_>>>()?;
        DensityProfile::new(grid, values)
    }

    /// Analytic `d^2/dx^2 ln rho_cl` at `x`: `-1/(2 D t')` or `-V''(x)/kT`.
    pub fn log_curvature_at(&self, x: f64, t: f64) -> Result<f64> {
        match &self.kind {
            ReferenceKind::FreeParticle { .. } => Ok(-1.0 / self.free_variance(t)?.unwrap()),
            ReferenceKind::Boltzmann(v) => Ok(-v.d2(x) * self.params.beta()),
        }
    }

    pub fn log_curvature(&self, grid: &SpatialGrid, t: f64) -> Result<Vec<f64>> {
        grid.nodes().map(|x| self.log_curvature_at(x, t)).collect()
    }
}
