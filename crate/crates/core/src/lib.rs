//! Solvers for the semiclassical and nonlinear quantum Fokker-Planck
//! equations of a free or confined quantum Brownian particle.
//!
//! - [`kleinkramers`]: phase-space dynamics of the Wigner function
//!   (classical, Coffey-type semiclassical, log-density and nonlinear variants).
//! - [`smoluchowski`]: overdamped position-space dynamics.
//! - [`dispersion`]: closed-form, implicit and Lambert-W dispersion laws.
//! - [`automodel`]: the self-similar dispersion ODE solved by shooting.
//! - [`functionals`]: Fisher/Shannon information, Bohm potential, quantum temperature.
//! - [`cli`]: CSV/SVG front end used by the `qfp` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod automodel;
pub mod cli;
pub mod curve;
pub mod density;
pub mod dispersion;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod kleinkramers;
pub mod params;
pub mod potential;
pub mod reference;
pub mod smoluchowski;
pub mod wigner;

pub use curve::DispersionCurve;
pub use density::{moments, DensityProfile, Moments};
pub use error::{Error, Result};
pub use grid::SpatialGrid;
pub use params::{derive_params, PhysicalParams};
pub use potential::Potential;
pub use reference::{ReferenceDensity, ReferenceKind};
pub use wigner::{marginal_x, MarginalX, WignerField};
