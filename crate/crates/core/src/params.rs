//! Physical parameters of a quantum Brownian particle and the scales derived from them.

use crate::error::{Error, Result};

/// Mass, friction, thermal energy and Planck constant, plus the derived
/// diffusion constant `D = kT/b`, thermal de Broglie wavelength
/// `lambda_T = hbar / (2 sqrt(m kT))` and inverse thermal energy `beta = 1/kT`.
///
/// Any consistent unit system works; all results depend only on `D` and `lambda_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    m: f64,
    b: f64,
    kt: f64,
    hbar: f64,
    d: f64,
    lambda_t: f64,
    beta: f64,
}

/// Builds a [`PhysicalParams`] record. `hbar = 0` is the classical limit.
pub fn derive_params(m: f64, b: f64, kt: f64, hbar: f64) -> Result<PhysicalParams> {
    positive("m", m)?;
    positive("b", b)?;
    positive("kT", kt)?;
    if !(hbar >= 0.0) || !hbar.is_finite() {
        return Err(Error::domain("hbar", hbar, "must be finite and >= 0"));
    }
    Ok(PhysicalParams {
        m,
        b,
        kt,
        hbar,
        d: kt / b,
        lambda_t: hbar / (2.0 * (m * kt).sqrt()),
        beta: 1.0 / kt,
    })
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, v, "must be finite and > 0"))
    }
}

impl PhysicalParams {
    /// `m = b = kT = 1`, so that `D = 1` and `lambda_T = hbar/2`.
    pub fn nondimensional(hbar: f64) -> Result<Self> {
        derive_params(1.0, 1.0, 1.0, hbar)
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn kt(&self) -> f64 {
        self.kt
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    /// Einstein diffusion constant `kT/b`.
    pub fn d(&self) -> f64 {
        self.d
    }
    /// Thermal de Broglie wavelength.
    pub fn lambda_t(&self) -> f64 {
        self.lambda_t
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Same particle with a different Planck constant.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        derive_params(self.m, self.b, self.kt, hbar)
    }

    /// Time `lambda_T^2 / 2D` above which the large-time semiclassical law applies.
    pub fn semiclassical_threshold(&self) -> f64 {
        self.lambda_t * self.lambda_t / (2.0 * self.d)
    }

    /// `hbar^2 / (12 m b)`, the prefactor of the quantum correction to the diffusivity.
    pub fn quantum_diffusivity_scale(&self) -> f64 {
        self.hbar * self.hbar / (12.0 * self.m * self.b)
    }

    pub fn is_classical(&self) -> bool {
        self.hbar == 0.0
    }
}
