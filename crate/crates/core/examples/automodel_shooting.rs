//! Shooting for the self-similar dispersion profile y(x).
//!
//! y(x) starts from the regular series 1 + c2 x^2 - 2 c2 x^3 and must grow
//! like 2x at large x. Too small c2 undershoots, too large blows up.

use qfp::automodel::{integrate_from, shoot_with, ShootConfig, StepControl};

fn main() -> qfp::Result<()> {
    let ctrl = StepControl::default();
    for c2 in [1.0, 4.0, 4.5] {
        match integrate_from(c2, 1e-3, 20.0, &ctrl) {
            Ok(sol) => {
                let (x, y, yp) = sol.end();
                println!("c2 = {c2}: y({x}) = {y:.4}, y' = {yp:.4}");
            }
            Err(e) => println!("c2 = {c2}: {e}"),
        }
    }

    let (c2, sol) = shoot_with(&ShootConfig::default())?;
    let (x, _, yp) = sol.end();
    println!("\nc2* = {c2:.6}, y'({x}) = {yp:.6}, {} mesh points", sol.len());
    println!("max scaled residual {:.2e}", sol.max_scaled_residual());
    Ok(())
}
