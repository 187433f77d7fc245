//! Fisher and Shannon information, Bohm potential and quantum temperature of
//! a Gaussian and of a skewed two-hump density.

use qfp::functionals::{
    bohm_potential, fisher_information, fisher_information_curvature_form, quantum_temperature,
    shannon_information, DEFAULT_FLOOR,
};
use qfp::{derive_params, DensityProfile, SpatialGrid};

fn report(name: &str, rho: &DensityProfile) -> qfp::Result<()> {
    let p = derive_params(1.0, 1.0, 1.0, 1.0)?;
    let fi = fisher_information(rho);
    let q = bohm_potential(rho, DEFAULT_FLOOR, &p)?.mean_over(rho);
    let tq = quantum_temperature(rho, DEFAULT_FLOOR, &p)?.mean_over(rho);
    println!("{name}");
    println!("  FI = {fi:.6} (curvature form {:.6})", fisher_information_curvature_form(rho));
    println!("  SI = {:.6}", shannon_information(rho));
    println!("  <Q> = {q:.6}, hbar^2 FI / 8m = {:.6}", fi / 8.0);
    println!("  <kT_Q> = {tq:.6}, hbar^2 FI / 4m = {:.6}", fi / 4.0);
    Ok(())
}

fn main() -> qfp::Result<()> {
    let grid = SpatialGrid::symmetric(8.0, 1601)?;
    report("gaussian, sigma^2 = 0.5", &DensityProfile::gaussian(grid, 0.0, 0.5)?)?;
    let humps = DensityProfile::from_fn(grid, |x| {
        0.4 * (-(x + 1.5).powi(2) / 0.6).exp() + (-(x - 1.0).powi(2) / 1.2).exp()
    })?;
    report("two humps", &humps)
}
