//! Dispersion laws `sigma^2(t)` of a free quantum Brownian particle.
//!
//! All laws depend on the particle only through `D` and `lambda_T`
//! (plus `hbar / sqrt(m b)` for the short-time laws).

mod lambert;

use std::fmt;
use std::str::FromStr;

pub use lambert::{lambert_w_minus1, lambert_w_minus1_from_log, BRANCH_POINT};

use crate::curve::DispersionCurve;
use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Default residual tolerance for [`solve_eq13`].
pub const EQ13_TOL: f64 = 1e-12;

/// `x - ln(1 + x)` without cancellation for small `x`.
pub fn x_minus_log1p(x: f64) -> f64 {
    if x.abs() < 0.05 {
        // sum_{k>=2} (-1)^k x^k / k
        let mut term = x * x;
        let mut acc = 0.0;
        for k in 2..40 {
            let c = term / k as f64;
            acc += if k % 2 == 0 { c } else { -c };
            term *= x;
            if c.abs() < 1e-18 * acc.abs() {
                break;
            }
        }
        acc
    } else {
        x - x.ln_1p()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("t", t, "must be finite and >= 0"))
    }
}

/// Classical Einstein law `2 D t`.
pub fn eval_classical(params: &PhysicalParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(2.0 * params.d() * t)
}

/// Large-time semiclassical law `2Dt + lambda_T^2 ln(6Dt / lambda_T^2) / 3`,
/// valid only for `t > lambda_T^2 / 2D`.
pub fn eval_eq9(params: &PhysicalParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let (d, l2) = (params.d(), params.lambda_t().powi(2));
    if l2 == 0.0 {
        return Ok(2.0 * d * t);
    }
    let bound = params.semiclassical_threshold();
    if t <= bound {
        return Err(Error::domain(
            "t",
            t,
            format!("the semiclassical law is applicable for large times only (t > lambda_T^2/2D = {bound})"),
        ));
    }
    Ok(2.0 * d * t + l2 * (6.0 * d * t / l2).ln() / 3.0)
}

/// Improved semiclassical law `2Dt + lambda_T^2 ln(1 + 6Dt / lambda_T^2) / 3`.
pub fn eval_improved(params: &PhysicalParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let (d, l2) = (params.d(), params.lambda_t().powi(2));
    if l2 == 0.0 {
        return Ok(2.0 * d * t);
    }
    Ok(2.0 * d * t + l2 * (6.0 * d * t / l2).ln_1p() / 3.0)
}

/// Root of `sigma^2 - lambda_T^2 ln(1 + 3 sigma^2 / lambda_T^2) / 3 = 2 D t`,
/// the dispersion of the nonlinear quantum Smoluchowski equation.
/// The returned value has residual below `tol * max(sigma^2, lambda_T^2)`;
/// an absolute bound is unreachable in floating point once `2Dt` is large.
pub fn solve_eq13(params: &PhysicalParams, t: f64, tol: f64) -> Result<f64> {
    check_time(t)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "must be > 0"));
    }
    let (d, l2) = (params.d(), params.lambda_t().powi(2));
    if l2 == 0.0 || t == 0.0 {
        return Ok(2.0 * d * t);
    }
    // v = 3 sigma^2 / lambda_T^2 solves v - ln(1 + v) = r
    let r = 6.0 * d * t / l2;
    let v = solve_x_minus_log1p(r)?;
    let sigma2 = l2 * v / 3.0;
    let residual = eq13_residual(params, t, sigma2);
    if residual.abs() >= tol * sigma2.max(l2) {
        return Err(Error::Config(format!(
            "implicit dispersion law: residual {residual:e} above tolerance {tol:e} at t = {t}"
        )));
    }
    Ok(sigma2)
}

/// `sigma^2 - lambda_T^2 ln(1 + 3 sigma^2/lambda_T^2)/3 - 2Dt`.
pub fn eq13_residual(params: &PhysicalParams, t: f64, sigma2: f64) -> f64 {
    let (d, l2) = (params.d(), params.lambda_t().powi(2));
    if l2 == 0.0 {
        return sigma2 - 2.0 * d * t;
    }
    l2 / 3.0 * x_minus_log1p(3.0 * sigma2 / l2) - 2.0 * d * t
}

/// Positive root of `v - ln(1 + v) = r` for `r >= 0`, by safeguarded Newton.
fn solve_x_minus_log1p(r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    let g = |v: f64| x_minus_log1p(v) - r;
    let (mut lo, mut hi) = (0.0, (2.0 * r).max((2.0 * r).sqrt()).max(4.0));
    let mut tries = 0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
        tries += 1;
        assert!(tries < 2000, "v - ln(1+v) is unbounded; bracket must exist");
    }
    let mut v = if r < 1.0 { (2.0 * r).sqrt() } else { r + r.ln_1p() };
    if !(v > lo && v < hi) {
        v = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let gv = g(v);
        if gv == 0.0 {
            return Ok(v);
        }
        if gv < 0.0 {
            lo = v;
        } else {
            hi = v;
        }
        let slope = v / (1.0 + v);
        let mut next = v - gv / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - v).abs() <= 2.0 * f64::EPSILON * v {
            return Ok(next);
        }
        v = next;
    }
    Ok(v)
}

/// Which short-time law to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShortTime {
    /// `hbar sqrt(t / 3 m b)`, the small-time limit of [`solve_eq13`].
    Third,
    /// `hbar sqrt(t / m b)`, purely quantum diffusion.
    Exact,
}

pub fn eval_short_time(params: &PhysicalParams, t: f64, kind: ShortTime) -> Result<f64> {
    check_time(t)?;
    let mb = params.m() * params.b();
    Ok(match kind {
        ShortTime::Third => params.hbar() * (t / (3.0 * mb)).sqrt(),
        ShortTime::Exact => params.hbar() * (t / mb).sqrt(),
    })
}

/// `sigma^2 = lambda_T^2 u` with `u = -1 - W_{-1}(-exp(-1 - 2Dt/lambda_T^2))`,
/// i.e. the root of `u - ln(1 + u) = 2Dt / lambda_T^2`.
pub fn eval_lambert_approx(params: &PhysicalParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let (d, l2) = (params.d(), params.lambda_t().powi(2));
    if l2 == 0.0 {
        return Ok(2.0 * d * t);
    }
    Ok(l2 * lambert_u(2.0 * d * t / l2)?)
}

/// `u(s) = -1 - W_{-1}(-exp(-1 - s))` for `s >= 0` (Figure-1 ordinate of the
/// analytical approximation).
pub fn lambert_u(s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain("s", s, "must be >= 0"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(-1.0 - lambert_w_minus1_from_log(-1.0 - s)?)
}

/// A named dispersion law bound to a particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawKind {
    Classical,
    Eq9,
    Improved,
    Eq13,
    Lambert,
    ShortTimeThird,
    ShortTimeExact,
}

impl LawKind {
    pub const ALL: [LawKind; 7] = [
        LawKind::Classical,
        LawKind::Eq9,
        LawKind::Improved,
        LawKind::Eq13,
        LawKind::Lambert,
        LawKind::ShortTimeThird,
        LawKind::ShortTimeExact,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LawKind::Classical => "classical",
            LawKind::Eq9 => "eq9",
            LawKind::Improved => "improved",
            LawKind::Eq13 => "eq13",
            LawKind::Lambert => "lambert",
            LawKind::ShortTimeThird => "short-third",
            LawKind::ShortTimeExact => "short-exact",
        }
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown dispersion law '{s}' (expected one of: {})",
                    LawKind::ALL.map(|k| k.name()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionLaw {
    pub kind: LawKind,
    pub params: PhysicalParams,
}

impl DispersionLaw {
    pub fn new(kind: LawKind, params: PhysicalParams) -> Self {
        Self { kind, params }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let p = &self.params;
        match self.kind {
            LawKind::Classical => eval_classical(p, t),
            LawKind::Eq9 => eval_eq9(p, t),
            LawKind::Improved => eval_improved(p, t),
            LawKind::Eq13 => solve_eq13(p, t, EQ13_TOL),
            LawKind::Lambert => eval_lambert_approx(p, t),
            LawKind::ShortTimeThird => eval_short_time(p, t, ShortTime::Third),
            LawKind::ShortTimeExact => eval_short_time(p, t, ShortTime::Exact),
        }
    }

    /// Evaluates at each time; times must be increasing and give positive `sigma^2`.
    pub fn curve(&self, times: &[f64]) -> Result<DispersionCurve> {
        let samples = times
            .iter()
            .map(|&t| self.eval(t).map(|s| (t, s)))
            .collect::<Result<Vec<_>>>()?;
        DispersionCurve::new(self.kind.name(), samples)
    }
}
