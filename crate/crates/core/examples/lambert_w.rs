//! The lower real branch of the Lambert W function and the closed-form
//! dispersion approximation built on it.

use qfp::dispersion::{lambert_u, lambert_w_minus1, lambert_w_minus1_from_log};

fn main() -> qfp::Result<()> {
    for z in [-1.0 / std::f64::consts::E, -0.3, -0.1, -1e-3, -1e-8] {
        let w = lambert_w_minus1(z)?;
        println!("W-1({z:.3e}) = {w:.12}   w e^w - z = {:.1e}", w * w.exp() - z);
    }
    // arguments far below f64 range are passed as ln(-z)
    println!("W-1(-e^-1000) = {:.12}", lambert_w_minus1_from_log(-1000.0)?);

    println!("\n{:>10} {:>14}", "s", "u_lambert");
    for s in [1e-4, 1e-2, 1.0, 1e2, 1e4] {
        println!("{s:>10.0e} {:>14.6e}", lambert_u(s)?);
    }
    Ok(())
}
