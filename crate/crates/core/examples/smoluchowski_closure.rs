//! Overdamped dispersion of a narrow Gaussian packet.
//!
//! The nonlinear quantum Smoluchowski run stays Gaussian and follows the
//! implicit law for sigma^2(t); the classical run follows 2Dt. The
//! semiclassical and reference-density runs are compared at late times.

use qfp::dispersion::{solve_eq13, EQ13_TOL};
use qfp::smoluchowski::{matched_free_reference, SmoluchowskiModel, SmoluchowskiVariant};
use qfp::{derive_params, DensityProfile, SpatialGrid};

fn main() -> qfp::Result<()> {
    let p = derive_params(1.0, 1.0, 1.0, 1.0)?;
    let s0 = 0.04;
    let t0 = qfp::dispersion::eq13_residual(&p, 0.0, s0) / (2.0 * p.d());
    let t1 = 10.0 * t0;
    let grid = SpatialGrid::symmetric(3.0, 151)?;
    let rho0 = DensityProfile::gaussian(grid, 0.0, s0)?;

    let quantum = SmoluchowskiModel::new(SmoluchowskiVariant::Eq12Nonlinear, p, 1e-12)?.run(&rho0, t0, t1, (t1 - t0) / 5.0)?;
    let classical = SmoluchowskiModel::classical(p).run(&rho0, t0, t1, (t1 - t0) / 5.0)?;
    println!("{:>10} {:>12} {:>12} {:>12}", "t", "nonlinear", "implicit", "classical");
    for (q, c) in quantum.moments.samples().iter().zip(classical.moments.samples()) {
        println!("{:>10.5} {:>12.6} {:>12.6} {:>12.6}", q.0, q.1, solve_eq13(&p, q.0, EQ13_TOL)?, c.1);
    }
    println!(
        "{} steps, max |excess kurtosis| {:.2e}, mass drift {:.1e}",
        quantum.steps,
        quantum.max_abs_kurtosis(),
        quantum.max_mass_drift()
    );

    // late-time pair: semiclassical closure against a frozen free reference
    let (t0, t1, s0) = (0.5, 2.0, 1.0);
    let grid = SpatialGrid::symmetric(12.0, 241)?;
    let rho0 = DensityProfile::gaussian(grid, 0.0, s0)?;
    let eq7 = SmoluchowskiModel::new(SmoluchowskiVariant::Eq7Semiclassical, p, 1e-12)?.run(&rho0, t0, t1, t1 - t0)?;
    let eq5 = SmoluchowskiModel::new(SmoluchowskiVariant::Eq5Reference(matched_free_reference(p, s0, t0)?), p, 1e-12)?
        .run(&rho0, t0, t1, t1 - t0)?;
    let a = eq7.moments.last().unwrap().1;
    let b = eq5.moments.last().unwrap().1;
    println!("\nsigma^2({t1}): semiclassical {a:.6}, reference-density {b:.6}");
    let law = s0 + 2.0 * p.d() * (t1 - t0) + p.lambda_t().powi(2) / 3.0 * (t1 / t0).ln();
    println!("logarithmic law {law:.6}");
    Ok(())
}
