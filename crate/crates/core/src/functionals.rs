//! Information-theoretic and quantum functionals of a position density:
//! Fisher and Shannon information, log-density curvature, the Bohm quantum
//! potential and the local quantum temperature.
//!
//! Logarithms and square roots are taken after clamping the density from
//! below at `floor * max(rho)`. Derivatives use central differences with
//! one-sided second-order stencils at the two boundary nodes.

use crate::density::DensityProfile;
use crate::error::{Error, Result};
use crate::grid::{first_derivative, second_derivative, SpatialGrid};
use crate::params::PhysicalParams;

/// Default relative density floor.
pub const DEFAULT_FLOOR: f64 = 1e-12;

/// Real values on a grid; units depend on the producing operation.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOnGrid {
    pub grid: SpatialGrid,
    pub values: Vec<f64>,
}

impl FieldOnGrid {
    /// `int rho * field dx`.
    pub fn mean_over(&self, rho: &DensityProfile) -> f64 {
        let mut acc = 0.0;
        for (i, (f, r)) in self.values.iter().zip(rho.values()).enumerate() {
            acc += self.grid.weight(i) * f * r;
        }
        acc
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn check_floor(floor: f64) -> Result<()> {
    if floor > 0.0 && floor <= 1e-3 {
        Ok(())
    } else {
        Err(Error::domain("floor", floor, "must lie in (0, 1e-3]"))
    }
}

fn floored(values: &[f64], floor: f64) -> Vec<f64> {
    let cut = floor * values.iter().cloned().fold(0.0, f64::max);
    values.iter().map(|&v| v.max(cut)).collect()
}

fn log_floored(values: &[f64], floor: f64) -> Vec<f64> {
    floored(values, floor).into_iter().map(f64::ln).collect()
}

/// `d^2/dx^2 ln rho` (1/length^2).
pub fn log_curvature(rho: &DensityProfile, floor: f64) -> Result<FieldOnGrid> {
    check_floor(floor)?;
    let grid = *rho.grid();
    let ln = log_floored(rho.values(), floor);
    Ok(FieldOnGrid {
        grid,
        values: second_derivative(&ln, grid.spacing()),
    })
}

/// Log-curvature of a raw nonnegative profile, zeroed wherever the stencil
/// touches a node at or below `floor * max`. Used by the solvers so that
/// quantum corrections act only where the density is resolved.
pub(crate) fn masked_log_curvature(values: &[f64], h: f64, floor: f64) -> Vec<f64> {
    let above = active_nodes(values, floor);
    let ln = log_floored(values, floor);
    let mut c = second_derivative(&ln, h);
    let n = values.len();
    for i in 0..n {
        let ok = match i {
            0 => above[..4].iter().all(|&a| a),
            _ if i + 1 == n => above[n - 4..].iter().all(|&a| a),
            _ => above[i - 1] && above[i] && above[i + 1],
        };
        if !ok {
            c[i] = 0.0;
        }
    }
    c
}

/// Nodes strictly above `floor * max`.
pub(crate) fn active_nodes(values: &[f64], floor: f64) -> Vec<bool> {
    let cut = floor * values.iter().cloned().fold(0.0, f64::max);
    values.iter().map(|&v| v > cut).collect()
}

/// Fisher information `int rho (d/dx ln rho)^2 dx`, gradient form.
pub fn fisher_information(rho: &DensityProfile) -> f64 {
    let grid = rho.grid();
    let ln = log_floored(rho.values(), DEFAULT_FLOOR);
    let g = first_derivative(&ln, grid.spacing());
    let mut acc = 0.0;
    for (i, (r, gi)) in rho.values().iter().zip(&g).enumerate() {
        acc += grid.weight(i) * r * gi * gi;
    }
    acc
}

/// Fisher information via `-int rho d^2/dx^2 ln rho dx`.
pub fn fisher_information_curvature_form(rho: &DensityProfile) -> f64 {
    let c = log_curvature(rho, DEFAULT_FLOOR).expect("default floor is valid");
    -c.mean_over(rho)
}

/// Shannon information `-int rho ln rho dx`, with `0 ln 0 = 0`.
pub fn shannon_information(rho: &DensityProfile) -> f64 {
    -rho.grid()
        .integrate_with(rho.values(), |_, r| if r > 0.0 { r * r.ln() } else { 0.0 })
}

/// Bohm quantum potential `Q = -hbar^2 (sqrt rho)'' / (2 m sqrt rho)` (energy).
pub fn bohm_potential(
    rho: &DensityProfile,
    floor: f64,
    params: &PhysicalParams,
) -> Result<FieldOnGrid> {
    check_floor(floor)?;
    Ok(FieldOnGrid {
        grid: *rho.grid(),
        values: bohm_values(rho.values(), rho.grid().spacing(), floor, params),
    })
}

pub(crate) fn bohm_values(values: &[f64], h: f64, floor: f64, params: &PhysicalParams) -> Vec<f64> {
    let sq: Vec<f64> = floored(values, floor).into_iter().map(f64::sqrt).collect();
    let lap = second_derivative(&sq, h);
    let coef = -params.hbar() * params.hbar() / (2.0 * params.m());
    lap.iter().zip(&sq).map(|(l, s)| coef * l / s).collect()
}

/// Local quantum temperature `k_B T_Q = -(hbar^2 / 4m) d^2/dx^2 ln rho` (energy).
pub fn quantum_temperature(
    rho: &DensityProfile,
    floor: f64,
    params: &PhysicalParams,
) -> Result<FieldOnGrid> {
    let mut c = log_curvature(rho, floor)?;
    let coef = quantum_temperature_coefficient(params);
    c.values.iter_mut().for_each(|v| *v *= coef);
    Ok(c)
}

/// `-hbar^2 / 4m`, the factor relating log-curvature to quantum temperature.
pub fn quantum_temperature_coefficient(params: &PhysicalParams) -> f64 {
    -params.hbar() * params.hbar() / (4.0 * params.m())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(sigma2: f64, n: usize) -> DensityProfile {
        let half = 10.0 * sigma2.sqrt();
        DensityProfile::gaussian(SpatialGrid::symmetric(half, n).unwrap(), 0.0, sigma2).unwrap()
    }

    #[test]
    fn gaussian_log_curvature_is_constant() {
        let rho = gaussian(2.0, 401);
        let c = log_curvature(&rho, DEFAULT_FLOOR).unwrap();
        // Interior where the density is above the floor.
        for (i, x) in rho.grid().nodes().enumerate() {
            if x.abs() < 8.0 {
                assert!((c.values[i] + 0.5).abs() < 0.01, "x = {x}: {}", c.values[i]);
            }
        }
    }

    #[test]
    fn uniform_interior_has_zero_curvature() {
        let g = SpatialGrid::symmetric(1.0, 64).unwrap();
        let rho = DensityProfile::new(g, vec![1.0; 64]).unwrap();
        let c = log_curvature(&rho, DEFAULT_FLOOR).unwrap();
        assert!(c.values.iter().all(|v| v.abs() < 1e-9));
        assert!(fisher_information_curvature_form(&rho).abs() < 1e-9);
        let p = PhysicalParams::nondimensional(1.0).unwrap();
        let q = bohm_potential(&rho, DEFAULT_FLOOR, &p).unwrap();
        assert!(q.values[1..63].iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn floor_is_validated() {
        let rho = gaussian(1.0, 64);
        assert!(log_curvature(&rho, 0.0).is_err());
        assert!(log_curvature(&rho, 1e-2).is_err());
        assert!(log_curvature(&rho, 1e-3).is_ok());
    }

    #[test]
    fn classical_limit_zeroes_quantum_fields() {
        let rho = gaussian(1.0, 201);
        let p = PhysicalParams::nondimensional(0.0).unwrap();
        assert!(bohm_potential(&rho, DEFAULT_FLOOR, &p)
            .unwrap()
            .values
            .iter()
            .all(|v| *v == 0.0));
        assert!(quantum_temperature(&rho, DEFAULT_FLOOR, &p)
            .unwrap()
            .values
            .iter()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn quantum_temperature_is_rescaled_curvature_bitwise() {
        let rho = gaussian(0.7, 301);
        let p = crate::params::derive_params(1.3, 0.4, 2.0, 0.9).unwrap();
        let c = log_curvature(&rho, DEFAULT_FLOOR).unwrap();
        let t = quantum_temperature(&rho, DEFAULT_FLOOR, &p).unwrap();
        let k = quantum_temperature_coefficient(&p);
        for (a, b) in c.values.iter().zip(&t.values) {
            assert_eq!((k * a).to_bits(), b.to_bits());
        }
    }

    #[test]
    fn narrow_spike_has_negative_entropy() {
        let rho = gaussian(1e-4, 401);
        assert!(shannon_information(&rho) < -2.0);
    }

    #[test]
    fn masked_curvature_ignores_tails() {
        let rho = gaussian(0.04, 201);
        let c = masked_log_curvature(rho.values(), rho.grid().spacing(), DEFAULT_FLOOR);
        let raw = log_curvature(&rho, DEFAULT_FLOOR).unwrap();
        let active = active_nodes(rho.values(), DEFAULT_FLOOR);
        for i in 1..200 {
            if active[i - 1] && active[i] && active[i + 1] {
                assert_eq!(c[i], raw.values[i]);
            } else {
                assert_eq!(c[i], 0.0);
            }
        }
        // The unmasked field has a large positive spike at the floor edge.
        assert!(raw.max() > 10.0);
        assert!(c.iter().all(|v| *v <= 0.0));
    }

    #[test]
    fn gaussian_fisher_information() {
        for s2 in [0.04, 1.0, 9.0] {
            let rho = gaussian(s2, 801);
            assert!((fisher_information(&rho) * s2 - 1.0).abs() < 1e-3);
            let a = fisher_information(&rho);
            let b = fisher_information_curvature_form(&rho);
            assert!((a - b).abs() < 1e-3 * a, "{a} {b}");
        }
    }

    #[test]
    fn fisher_forms_agree_on_a_mixture() {
        let grid = SpatialGrid::symmetric(8.0, 1601).unwrap();
        let g = |x: f64, m: f64, s2: f64| (-(x - m).powi(2) / (2.0 * s2)).exp() / s2.sqrt();
        let rho = DensityProfile::from_fn(grid, |x| 0.3 * g(x, -1.0, 0.5) + 0.7 * g(x, 1.2, 0.8)).unwrap();
        let a = fisher_information(&rho);
        let b = fisher_information_curvature_form(&rho);
        assert!((a - b).abs() < 1e-3 * a, "{a} {b}");
    }

    #[test]
    fn fisher_scales_inversely_with_width_squared() {
        let narrow = DensityProfile::from_fn(SpatialGrid::symmetric(6.0, 1201).unwrap(), |x| {
            (-x * x / 2.0 - x.powi(4) / 8.0).exp()
        })
        .unwrap();
        let wide = DensityProfile::from_fn(SpatialGrid::symmetric(12.0, 1201).unwrap(), |x| {
            let y = x / 2.0;
            (-y * y / 2.0 - y.powi(4) / 8.0).exp() / 2.0
        })
        .unwrap();
        let ratio = fisher_information(&narrow) / fisher_information(&wide);
        assert!((ratio - 4.0).abs() < 1e-6, "{ratio}");
    }

    #[test]
    fn gaussian_shannon_information() {
        for s2 in [0.25, 1.0, 4.0] {
            let si = shannon_information(&gaussian(s2, 801));
            let exact = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * s2).ln();
            assert!((si - exact).abs() < 1e-6, "{si} {exact}");
        }
        let d = shannon_information(&gaussian(std::f64::consts::E.powi(2), 801))
            - shannon_information(&gaussian(1.0, 801));
        assert!((d - 1.0).abs() < 1e-6);
    }

    #[test]
    fn gaussian_quantum_temperature() {
        let p = crate::params::derive_params(2.0, 1.0, 1.0, 1.5).unwrap();
        let s2 = 0.3;
        let rho = gaussian(s2, 801);
        let tq = quantum_temperature(&rho, DEFAULT_FLOOR, &p).unwrap();
        let expected = p.hbar().powi(2) / (4.0 * p.m() * s2);
        let mid = tq.values[400];
        assert!((mid - expected).abs() < 0.02 * expected, "{mid} {expected}");
    }

    #[test]
    fn mean_quantum_fields_are_fisher_multiples() {
        let p = crate::params::derive_params(1.5, 1.0, 1.0, 0.7).unwrap();
        let grid = SpatialGrid::symmetric(8.0, 1601).unwrap();
        let rho = DensityProfile::from_fn(grid, |x| (-x * x / 2.0 - x.powi(4) / 4.0).exp() * (1.0 + 0.3 * x.sin())).unwrap();
        let fi = fisher_information(&rho);
        let h2 = p.hbar().powi(2);
        let q = bohm_potential(&rho, DEFAULT_FLOOR, &p).unwrap().mean_over(&rho);
        let t = quantum_temperature(&rho, DEFAULT_FLOOR, &p).unwrap().mean_over(&rho);
        let q_exact = h2 * fi / (8.0 * p.m());
        let t_exact = h2 * fi / (4.0 * p.m());
        assert!((q - q_exact).abs() < 0.02 * q_exact, "{q} {q_exact}");
        assert!((t - t_exact).abs() < 0.02 * t_exact, "{t} {t_exact}");
    }
}
