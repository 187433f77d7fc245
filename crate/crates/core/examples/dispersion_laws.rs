//! Tabulates the dispersion laws for a free quantum Brownian particle.
//!
//! `cargo run --example dispersion_laws`

use qfp::dispersion::{DispersionLaw, LawKind};
use qfp::derive_params;

fn main() -> qfp::Result<()> {
    let params = derive_params(1.0, 1.0, 1.0, 1.0)?;
    let th = params.semiclassical_threshold();
    println!("D = {}, lambda_T = {}, eq9 needs t > {th}", params.d(), params.lambda_t());

    let laws = [LawKind::Classical, LawKind::Eq13, LawKind::Lambert, LawKind::Improved];
    print!("{:>10}", "t");
    for l in &laws {
        print!("{:>14}", l.name());
    }
    println!("{:>14}", "eq9");
    for k in -4..=2 {
        let t = 10f64.powi(k);
        print!("{t:>10.0e}");
        for l in &laws {
            print!("{:>14.6e}", DispersionLaw::new(*l, params).eval(t)?);
        }
        // eq9 refuses early times
        match DispersionLaw::new(LawKind::Eq9, params).eval(t) {
            Ok(v) => println!("{v:>14.6e}"),
            Err(_) => println!("{:>14}", "-"),
        }
    }
    Ok(())
}
