//! Overdamped position-space dynamics on a bounded grid.
//!
//! Every variant is stepped in conservative flux form on trapezoid dual cells
//! (half cells at the two ends) with zero-flux boundaries and forward Euler
//! in time, so the trapezoidal mass is preserved to round-off:
//!
//! - classical: `F = D rho'`
//! - eq7: `F = D (1 + lambda_T^2 / 6 D t) rho'`, coefficient at the step midpoint
//! - eq5: `F = (D_eff rho)'` with `D_eff = D - (hbar^2/12mb) (ln rho_cl)''`
//! - eq12: `F = D rho' + rho Q' / 3b`, `Q` the Bohm potential of `rho`
//!
//! The eq12 quantum flux is switched off on faces touching a node at or below
//! `floor * max(rho)`; there `Q` is dominated by the clamp, not the density.

use crate::curve::DispersionCurve;
use crate::density::{moments, DensityProfile};
use crate::error::{Error, Result};
use crate::functionals::{active_nodes, bohm_values, check_floor, masked_log_curvature, FieldOnGrid};
use crate::grid::SpatialGrid;
use crate::params::PhysicalParams;
use crate::reference::{ReferenceDensity, ReferenceKind};

/// Safety factor of the explicit stability rule.
pub const CFL: f64 = 0.4;

/// Relative size of negative values tolerated (and zeroed) in solver output.
pub const CLIP: f64 = 1e-10;

/// Relative density above which a nonpositive eq12 diffusivity aborts a run.
pub const RESOLVED: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum SmoluchowskiVariant {
    Classical,
    Eq5Reference(ReferenceDensity),
    Eq7Semiclassical,
    Eq12Nonlinear,
}

impl SmoluchowskiVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::Eq5Reference(_) => "eq5",
            Self::Eq7Semiclassical => "eq7",
            Self::Eq12Nonlinear => "eq12",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoluchowskiModel {
    variant: SmoluchowskiVariant,
    params: PhysicalParams,
    floor: f64,
}

/// Trace of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_density: DensityProfile,
    /// `sigma^2(t)` at every output time.
    pub moments: DispersionCurve,
    /// `(t, excess kurtosis)`.
    pub kurtosis: Vec<(f64, f64)>,
    /// `(t, trapezoidal mass)` of the unnormalized solver state.
    pub mass: Vec<(f64, f64)>,
    pub dt: f64,
    pub steps: usize,
}

impl RunResult {
    pub fn max_mass_drift(&self) -> f64 {
        self.mass.iter().map(|(_, m)| (m - 1.0).abs()).fold(0.0, f64::max)
    }
    pub fn max_abs_kurtosis(&self) -> f64 {
        self.kurtosis.iter().map(|(_, k)| k.abs()).fold(0.0, f64::max)
    }
}

impl SmoluchowskiModel {
    pub fn new(variant: SmoluchowskiVariant, params: PhysicalParams, floor: f64) -> Result<Self> {
        check_floor(floor)?;
        if let SmoluchowskiVariant::Eq5Reference(r) = &variant {
            if r.params() != &params {
                return Err(Error::Config(
                    "reference density was built with different parameters".into(),
                ));
            }
        }
        Ok(Self {
            variant,
            params,
            floor,
        })
    }

    pub fn classical(params: PhysicalParams) -> Self {
        Self::new(SmoluchowskiVariant::Classical, params, crate::functionals::DEFAULT_FLOOR)
            .expect("default floor is valid")
    }

    pub fn variant(&self) -> &SmoluchowskiVariant {
        &self.variant
    }
    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }
    pub fn floor(&self) -> f64 {
        self.floor
    }

    fn check_time(&self, t: f64) -> Result<()> {
        match &self.variant {
            SmoluchowskiVariant::Eq7Semiclassical => {
                let tc = self.params.semiclassical_threshold();
                if !(t > tc) {
                    return Err(Error::domain(
                        "t",
                        t,
                        format!("the semiclassical diffusion equation needs t > lambda_T^2/2D = {tc}"),
                    ));
                }
                Ok(())
            }
            SmoluchowskiVariant::Eq5Reference(r) => r.check_time(t),
            _ => Ok(()),
        }
    }

    /// Raw `D_eff` values; eq7 uses time `t` as given.
    fn diffusivity_values(&self, grid: &SpatialGrid, rho: &[f64], t: f64) -> Result<Vec<f64>> {
        let p = &self.params;
        let d = p.d();
        let k = p.quantum_diffusivity_scale();
        let out = match &self.variant {
            SmoluchowskiVariant::Classical => vec![d; grid.len()],
            SmoluchowskiVariant::Eq7Semiclassical => {
                let lam2 = p.lambda_t() * p.lambda_t();
                vec![d * (1.0 + lam2 / (6.0 * d * t)); grid.len()]
            }
            SmoluchowskiVariant::Eq5Reference(r) => r
                .log_curvature(grid, t)?
                .into_iter()
                .map(|c| d - k * c)
                .collect(),
            SmoluchowskiVariant::Eq12Nonlinear => {
                if p.is_classical() {
                    vec![d; grid.len()]
                } else {
                    masked_log_curvature(rho, grid.spacing(), self.floor)
                        .into_iter()
                        .map(|c| d - k * c)
                        .collect()
                }
            }
        };
        // In the far tail of an evolved density the log-curvature is round-off
        // noise; only resolved nodes can signal a genuine sign change.
        let cut = match self.variant {
            SmoluchowskiVariant::Eq12Nonlinear => RESOLVED * rho.iter().cloned().fold(0.0, f64::max),
            _ => f64::NEG_INFINITY,
        };
        if let Some((i, &v)) = out
            .iter()
            .enumerate()
            .find(|&(i, v)| !(*v > 0.0) && rho[i] > cut)
        {
            return Err(Error::Instability {
                model: self.variant.name(),
                what: "effective diffusivity",
                value: v,
                x: grid.node(i),
            });
        }
        Ok(out)
    }

    /// Pointwise effective diffusivity (length^2/time).
    pub fn effective_diffusivity(&self, rho: &DensityProfile, t: f64) -> Result<FieldOnGrid> {
        self.check_time(t)?;
        let grid = *rho.grid();
        Ok(FieldOnGrid {
            grid,
            values: self.diffusivity_values(&grid, rho.values(), t)?,
        })
    }

    /// Largest stable step for state `rho` at time `t`.
    fn bound(&self, grid: &SpatialGrid, rho: &[f64], t: f64) -> Result<f64> {
        let h = grid.spacing();
        let dmax = self
            .diffusivity_values(grid, rho, t)?
            .into_iter()
            .fold(0.0, f64::max);
        let mut b = h * h / dmax;
        if matches!(self.variant, SmoluchowskiVariant::Eq12Nonlinear) && !self.params.is_classical() {
            let k = self.params.quantum_diffusivity_scale();
            b = b.min(h.powi(4) / (8.0 * k));
        }
        Ok(CFL * b)
    }

    /// Explicit stability bound for `rho` at time `t`.
    pub fn stability_bound(&self, rho: &DensityProfile, t: f64) -> Result<f64> {
        self.check_time(t)?;
        self.bound(rho.grid(), rho.values(), t)
    }

    /// Face fluxes `F_{i+1/2}` for `i = 0..n-1`.
    fn fluxes(&self, grid: &SpatialGrid, rho: &[f64], t: f64, dt: f64) -> Result<Vec<f64>> {
        let h = grid.spacing();
        let n = rho.len();
        let d = self.params.d();
        let grad = |c: f64| -> Vec<f64> { (0..n - 1).map(|i| c * (rho[i + 1] - rho[i]) / h).collect() };
        Ok(match &self.variant {
            SmoluchowskiVariant::Classical => grad(d),
            SmoluchowskiVariant::Eq7Semiclassical => {
                let de = self.diffusivity_values(grid, rho, t + 0.5 * dt)?;
                grad(de[0])
            }
            SmoluchowskiVariant::Eq5Reference(_) => {
                let de = self.diffusivity_values(grid, rho, t + 0.5 * dt)?;
                let p: Vec<f64> = de.iter().zip(rho).map(|(a, r)| a * r).collect();
                (0..n - 1).map(|i| (p[i + 1] - p[i]) / h).collect()
            }
            SmoluchowskiVariant::Eq12Nonlinear => {
                let mut f = grad(d);
                if !self.params.is_classical() {
                    self.diffusivity_values(grid, rho, t)?;
                    let q = bohm_values(rho, h, self.floor, &self.params);
                    let active = active_nodes(rho, self.floor);
                    let c = 1.0 / (3.0 * self.params.b() * h);
                    // Q at the wall nodes comes from one-sided stencils; the
                    // outermost faces carry only the diffusive flux
                    for i in 1..n - 2 {
                        if active[i] && active[i + 1] {
                            f[i] += 0.5 * (rho[i] + rho[i + 1]) * (q[i + 1] - q[i]) * c;
                        }
                    }
                }
                f
            }
        })
    }

    /// One forward-Euler step of the raw state in place.
    fn advance(&self, grid: &SpatialGrid, rho: &mut [f64], t: f64, dt: f64) -> Result<()> {
        let f = self.fluxes(grid, rho, t, dt)?;
        let h = grid.spacing();
        let n = rho.len();
        rho[0] += dt * f[0] / (0.5 * h);
        for i in 1..n - 1 {
            rho[i] += dt * (f[i] - f[i - 1]) / h;
        }
        rho[n - 1] -= dt * f[n - 2] / (0.5 * h);
        Ok(())
    }

    /// Advances `rho` from `t` to `t + dt`.
    pub fn step(&self, rho: &DensityProfile, t: f64, dt: f64) -> Result<DensityProfile> {
        self.check_time(t)?;
        let grid = *rho.grid();
        let bound = self.bound(&grid, rho.values(), t)?;
        if !(dt > 0.0 && dt <= bound) {
            return Err(Error::StepTooLarge { dt, bound });
        }
        let mut raw = rho.values().to_vec();
        self.advance(&grid, &mut raw, t, dt)?;
        DensityProfile::from_solver(grid, &raw, CLIP)
    }

    /// Fixed-step march from `t0` to `t1`, recording moments every
    /// `output_every` time units and at `t1`.
    pub fn run(&self, rho0: &DensityProfile, t0: f64, t1: f64, output_every: f64) -> Result<RunResult> {
        if !(t1 > t0) {
            return Err(Error::domain("t1", t1, "must exceed t0"));
        }
        if !(output_every > 0.0) {
            return Err(Error::domain("output_every", output_every, "must be > 0"));
        }
        self.check_time(t0)?;
        self.check_time(t1)?;
        let grid = *rho0.grid();
        let m0 = moments(rho0);
        let predicted = (m0.sigma2 + 2.0 * self.params.d() * (t1 - t0)).sqrt();
        if predicted > grid.span() / 8.0 {
            return Err(Error::Config(format!(
                "predicted final width {predicted} exceeds 1/8 of the domain span {}",
                grid.span()
            )));
        }

        // worst case over the run: t0 for eq7 and the free-particle reference,
        // the initial (narrowest) state for eq12
        let mut dt = self.bound(&grid, rho0.values(), t0)?;
        if matches!(self.variant, SmoluchowskiVariant::Eq5Reference(_)) {
            dt = dt.min(self.bound(&grid, rho0.values(), t1)?);
        }
        let steps = ((t1 - t0) / dt).ceil() as usize;
        let dt = (t1 - t0) / steps as f64;

        let mut rho = rho0.values().to_vec();
        let mut times = Vec::new();
        let mut sig = Vec::new();
        let mut kurt = Vec::new();
        let mut mass = Vec::new();
        let mut record = |t: f64, raw: &[f64]| -> Result<()> {
            let m = grid.integrate(raw);
            let prof = DensityProfile::from_solver(grid, raw, CLIP)?;
            let mo = moments(&prof);
            times.push(t);
            sig.push((t, mo.sigma2));
            kurt.push((t, mo.excess_kurtosis));
            mass.push((t, m));
            Ok(())
        };
        record(t0, &rho)?;
        let mut next_out = t0 + output_every;
        for k in 0..steps {
            let t = t0 + k as f64 * dt;
            self.advance(&grid, &mut rho, t, dt)?;
            let tn = t0 + (k + 1) as f64 * dt;
            if k + 1 == steps {
                record(t1, &rho)?;
            } else if tn >= next_out {
                record(tn, &rho)?;
                while next_out <= tn {
                    next_out += output_every;
                }
            }
        }
        let final_density = DensityProfile::from_solver(grid, &rho, CLIP)?;
        Ok(RunResult {
            final_density,
            moments: DispersionCurve::new(self.variant.name(), sig)?,
            kurtosis: kurt,
            mass,
            dt,
            steps,
        })
    }
}

/// Free-particle reference matching a Gaussian start of variance `sigma0_sq`
/// at time `t0` (`2 D (t0 + offset) = sigma0_sq`).
pub fn matched_free_reference(params: PhysicalParams, sigma0_sq: f64, t0: f64) -> Result<ReferenceDensity> {
    let r = ReferenceDensity::free_particle(params, sigma0_sq / (2.0 * params.d()) - t0)?;
    debug_assert!(matches!(r.kind(), ReferenceKind::FreeParticle { .. }));
    Ok(r)
}
