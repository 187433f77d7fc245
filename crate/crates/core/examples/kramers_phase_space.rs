//! Klein-Kramers dynamics of the Wigner function.
//!
//! 1. For a free particle the semiclassical (Coffey-type) collision term
//!    carries no quantum correction, so its trajectory is the classical one.
//! 2. In a harmonic well the stationary state of that equation is a thermal
//!    Gaussian at the raised temperature kT + hbar^2 w^2 / 12 kT.
//! 3. The nonlinear log-density variant disperses faster than the classical
//!    equation.

use qfp::kleinkramers::{default_grids, thermal_state, KramersModel, KramersVariant};
use qfp::{derive_params, Potential, WignerField};

fn main() -> qfp::Result<()> {
    let p = derive_params(1.0, 4.0, 1.0, 3f64.sqrt())?;

    let (x, pg) = default_grids(&p, 1.0, 1.0, 64, 64)?;
    let w0 = WignerField::product_gaussian(x, pg, 0.5, 1.0)?;
    let run = |v| KramersModel::new(v, Potential::free(), p, 1e-12)?.run_kk(&w0, 0.0, 0.5, 0.5);
    let a = run(KramersVariant::Classical)?;
    let b = run(KramersVariant::Coffey)?;
    println!("free particle, coffey == classical: {}", a.final_field == b.final_field);

    let pot = Potential::harmonic(1.0, 1.0);
    let model = KramersModel::new(KramersVariant::Coffey, pot.clone(), p, 1e-12)?;
    let raised = p.kt() + p.hbar().powi(2) / (12.0 * p.kt());
    let (x, pg) = default_grids(&p, raised, raised.sqrt(), 128, 128)?;
    for (name, theta) in [("kT", p.kt()), ("kT*", raised)] {
        let w = thermal_state(x, pg, &p, &pot, theta)?;
        println!("harmonic well, thermal state at {name} = {theta}: residual {:.2e}", model.stationarity_residual(&w, 0.0)?);
    }

    let p = derive_params(1.0, 10.0, 1.0, 1.0)?;
    let (x, pg) = default_grids(&p, 1.0 + 1.0 / 1.2, 2.0, 96, 64)?;
    let w0 = WignerField::product_gaussian(x, pg, 0.1, 1.0 + 1.0 / 1.2)?;
    println!("\nfree dispersion from sigma_x^2 = 0.1, b = 10:");
    for v in [KramersVariant::Classical, KramersVariant::Nonlinear] {
        let name = v.name();
        let r = KramersModel::new(v, Potential::free(), p, 1e-12)?.run_kk(&w0, 0.0, 0.5, 0.5)?;
        let s = r.trace.last().unwrap();
        println!("  {name:>9}: sigma_x^2 = {:.5}, sigma_p^2 = {:.5}, {} steps", s.sigma2_x, s.sigma2_p, r.steps);
    }
    Ok(())
}
