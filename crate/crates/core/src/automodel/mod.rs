//! Self-similar dispersion of the thermo-quantum Smoluchowski equation.
//!
//! With `sigma^2 = hbar sqrt(t / m b) y(x)` and `x = sqrt(D t) / (2 lambda_T)`
//! the Gaussian-closure dispersion law becomes
//!
//! ```text
//! y y'' - y'^2 - y^2/x^2 + 4 y' + 1/x^2 = 0,   y(0) = 1,  y'(inf) = 2.
//! ```
//!
//! Near `x = 0` a power series `1 + c1 x + c2 x^2 + c3 x^3` is forced to
//! `c1 = 0`, `c3 = -2 c2` with `c2` free, so the problem is shot from a small
//! `x0` on `c2` until `y'(x_max) = 2`.
//!
//! In the Figure-1 coordinates `s = 2Dt / lambda_T^2`, `u = sigma^2 / lambda_T^2`
//! one has `s = 8 x^2` and `u = 4 x y`.

mod dopri;

pub use dopri::StepControl;

use crate::curve::DispersionCurve;
use crate::dispersion::lambert_u;
use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Trajectories with `y` at or below this value are rejected.
pub const Y_FLOOR: f64 = 1e-12;

/// Left-hand side of the self-similar ODE, exactly as written.
pub fn ode16_residual(x: f64, y: f64, yp: f64, ypp: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("x", x, "must be > 0"));
    }
    Ok(y * ypp - yp * yp - y * y / (x * x) + 4.0 * yp + 1.0 / (x * x))
}

/// Residual bound used by the audit: `1e-6 (1 + y^2/x^2)`.
pub fn residual_scale(x: f64, y: f64) -> f64 {
    1.0 + y * y / (x * x)
}

/// `y''` solved from the ODE.
#[inline]
fn second_derivative(x: f64, y: f64, yp: f64) -> f64 {
    let x2 = x * x;
    (yp * yp + y * y / x2 - 4.0 * yp - 1.0 / x2) / y
}

/// Truncated series `(y, y')` at `x0`: `y = 1 + c2 x0^2 - 2 c2 x0^3`.
pub fn series_start(c2: f64, x0: f64) -> Result<(f64, f64)> {
    if !(x0 > 0.0 && x0 <= 0.1) {
        return Err(Error::domain("x0", x0, "series start must lie in (0, 0.1]"));
    }
    let y = 1.0 + c2 * x0 * x0 - 2.0 * c2 * x0 * x0 * x0;
    let yp = 2.0 * c2 * x0 - 6.0 * c2 * x0 * x0;
    Ok((y, yp))
}

/// Solution of the self-similar ODE from the series start.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomodelSolution {
    pub c2: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub y_prime: Vec<f64>,
    pub y_second: Vec<f64>,
}

impl AutomodelSolution {
    pub fn len(&self) -> usize {
        self.x.len()
    }
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `(x, y, y')` at the last node.
    pub fn end(&self) -> (f64, f64, f64) {
        let n = self.x.len() - 1;
        (self.x[n], self.y[n], self.y_prime[n])
    }

    /// ODE residual at node `i`.
    pub fn residual(&self, i: usize) -> f64 {
        ode16_residual(self.x[i], self.y[i], self.y_prime[i], self.y_second[i])
            .expect("nodes are positive")
    }

    /// Largest `|residual| / (1 + y^2/x^2)` over all nodes.
    pub fn max_scaled_residual(&self) -> f64 {
        (0..self.len())
            .map(|i| self.residual(i).abs() / residual_scale(self.x[i], self.y[i]))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug)]
enum Stop {
    Floor { x: f64, y: f64 },
    Overflow,
}

/// Integrates from the series start at `x0` up to the last mesh point.
/// `mesh` must start at `x0` and increase; if `record_steps` every accepted
/// step is stored too.
fn integrate(
    c2: f64,
    mesh: &[f64],
    ctrl: &StepControl,
    record_steps: bool,
) -> Result<std::result::Result<AutomodelSolution, Stop>> {
    let x0 = mesh[0];
    let (y0, yp0) = series_start(c2, x0)?;
    let rhs = |x: f64, s: &[f64; 2]| [s[1], second_derivative(x, s[0], s[1])];

    let mut sol = AutomodelSolution {
        c2,
        x: vec![x0],
        y: vec![y0],
        y_prime: vec![yp0],
        y_second: vec![second_derivative(x0, y0, yp0)],
    };
    let mut x = x0;
    let mut state = [y0, yp0];
    let mut k1 = rhs(x, &state);
    let mut h = ctrl.h_init;
    let mut steps = 0usize;

    for &target in &mesh[1..] {
        while x < target {
            if steps >= ctrl.max_steps {
                return Err(Error::Stiffness { x, h });
            }
            let last = x + h >= target;
            let h_try = if last { target - x } else { h };
            let (next, k7, err) = dopri::try_step(&rhs, x, &state, &k1, h_try, ctrl);
            steps += 1;
            if !err.is_finite() || !next.iter().all(|v| v.is_finite()) {
                if state.iter().any(|v| v.abs() > 1e150) {
                    return Ok(Err(Stop::Overflow));
                }
                h = h_try * 0.2;
                if h < ctrl.h_min {
                    return Err(Error::Stiffness { x, h });
                }
                continue;
            }
            if err <= 1.0 {
                x = if last { target } else { x + h_try };
                state = next;
                k1 = k7;
                if state[0] <= Y_FLOOR {
                    return Ok(Err(Stop::Floor { x, y: state[0] }));
                }
                if record_steps || x == target {
                    sol.x.push(x);
                    sol.y.push(state[0]);
                    sol.y_prime.push(state[1]);
                    sol.y_second.push(k7[1]);
                }
                if !last {
                    h = h_try * dopri::step_factor(err);
                }
            } else {
                h = h_try * dopri::step_factor(err);
            }
            if h < ctrl.h_min {
                return Err(Error::Stiffness { x, h });
            }
        }
    }
    if record_steps {
        dedup_tail(&mut sol);
    }
    Ok(Ok(sol))
}

fn dedup_tail(sol: &mut AutomodelSolution) {
    // mesh targets are pushed once even when recording every step
    let n = sol.x.len();
    if n >= 2 && sol.x[n - 1] == sol.x[n - 2] {
        sol.x.pop();
        sol.y.pop();
        sol.y_prime.pop();
        sol.y_second.pop();
    }
}

fn check_range(x0: f64, x_max: f64) -> Result<()> {
    if !(x0 > 0.0 && x0 <= 0.01) {
        return Err(Error::domain("x0", x0, "must lie in (0, 0.01]"));
    }
    if !(x_max >= 10.0 && x_max.is_finite()) {
        return Err(Error::domain("x_max", x_max, "must be >= 10"));
    }
    Ok(())
}

fn unwrap_stop(r: std::result::Result<AutomodelSolution, Stop>) -> Result<AutomodelSolution> {
    match r {
        Ok(s) => Ok(s),
        Err(Stop::Floor { x, y }) => Err(Error::ShootingFailure { x, y }),
        Err(Stop::Overflow) => Err(Error::Integrity(
            "self-similar solution overflowed (shooting parameter too large)".into(),
        )),
    }
}

/// Integrates from `x0` to `x_max`, storing every accepted step.
pub fn integrate_from(
    c2: f64,
    x0: f64,
    x_max: f64,
    ctrl: &StepControl,
) -> Result<AutomodelSolution> {
    check_range(x0, x_max)?;
    unwrap_stop(integrate(c2, &[x0, x_max], ctrl, true)?)
}

/// Integrates from `x0` and reports the solution exactly at the mesh points
/// (`mesh[0]` must equal `x0`).
pub fn integrate_on_mesh(c2: f64, mesh: &[f64], ctrl: &StepControl) -> Result<AutomodelSolution> {
    if mesh.len() < 2 {
        return Err(Error::Config("mesh needs at least two points".into()));
    }
    if mesh.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("mesh must be strictly increasing".into()));
    }
    if !(mesh[0] > 0.0 && mesh[0] <= 0.1) {
        return Err(Error::domain("x0", mesh[0], "series start must lie in (0, 0.1]"));
    }
    unwrap_stop(integrate(c2, mesh, ctrl, false)?)
}

/// Shooting configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootConfig {
    pub x0: f64,
    pub x_max: f64,
    /// Stop when `|y'(x_max) - 2| < tol`.
    pub tol: f64,
    pub bracket: (f64, f64),
    pub max_doublings: usize,
    pub ctrl: StepControl,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            x0: 1e-3,
            x_max: 20.0,
            tol: 1e-3,
            bracket: (0.0, 64.0),
            max_doublings: 8,
            ctrl: StepControl::default(),
        }
    }
}

/// Shooting objective `y'(x_max) - 2`; overflow counts as overshoot.
fn objective(c2: f64, cfg: &ShootConfig) -> Result<f64> {
    match integrate(c2, &[cfg.x0, cfg.x_max], &cfg.ctrl, false)? {
        Ok(sol) => Ok(sol.end().2 - 2.0),
        Err(Stop::Overflow) => Ok(f64::INFINITY),
        Err(Stop::Floor { x, y }) => Err(Error::ShootingFailure { x, y }),
    }
}

/// Finds `c2` with `y'(x_max) = 2` using the default configuration.
pub fn shoot() -> Result<(f64, AutomodelSolution)> {
    shoot_with(&ShootConfig::default())
}

/// Bisection on `c2`. The objective must be increasing in `c2`; a violation
/// observed during bisection aborts with a configuration error.
pub fn shoot_with(cfg: &ShootConfig) -> Result<(f64, AutomodelSolution)> {
    check_range(cfg.x0, cfg.x_max)?;
    let (mut lo, mut hi) = cfg.bracket;
    let mut f_lo = objective(lo, cfg)?;
    let mut f_hi = objective(hi, cfg)?;
    let mut doublings = 0;
    while f_hi < 0.0 {
        if doublings == cfg.max_doublings {
            return Err(Error::Config(format!(
                "no sign change of y'(x_max) - 2 for c2 in [{lo}, {hi}] (f = {f_lo:e}, {f_hi:e})"
            )));
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = objective(hi, cfg)?;
        doublings += 1;
    }
    if f_lo > 0.0 {
        return Err(Error::Config(format!(
            "y'(x_max) already exceeds 2 at the lower bracket c2 = {lo} (f = {f_lo:e})"
        )));
    }

    let mut c2 = lo;
    let mut f = f_lo;
    for _ in 0..200 {
        if f.abs() < cfg.tol {
            break;
        }
        c2 = 0.5 * (lo + hi);
        f = objective(c2, cfg)?;
        if f < f_lo || f > f_hi {
            return Err(Error::Config(format!(
                "shooting objective not monotone: f({lo}) = {f_lo:e}, f({c2}) = {f:e}, f({hi}) = {f_hi:e}"
            )));
        }
        if f < 0.0 {
            lo = c2;
            f_lo = f;
        } else {
            hi = c2;
            f_hi = f;
        }
        if hi - lo <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    if !(f.abs() < cfg.tol) {
        return Err(Error::Config(format!(
            "shooting stalled at c2 = {c2} with y'(x_max) - 2 = {f:e}"
        )));
    }
    let sol = integrate_from(c2, cfg.x0, cfg.x_max, &cfg.ctrl)?;
    Ok((c2, sol))
}

/// Self-similar variable `x = sqrt(D t) / (2 lambda_T)`.
pub fn similarity_variable(params: &PhysicalParams, t: f64) -> f64 {
    (params.d() * t).sqrt() / (2.0 * params.lambda_t())
}

/// Converts a Figure-1 point `(s, u)` into physical `(t, sigma^2)`.
pub fn to_physical(params: &PhysicalParams, s: f64, u: f64) -> (f64, f64) {
    let l2 = params.lambda_t().powi(2);
    (s * l2 / (2.0 * params.d()), u * l2)
}

/// The three Figure-1 curves in `(s, u)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure1 {
    pub c2: f64,
    /// Numerical solution of the self-similar ODE.
    pub numeric: DispersionCurve,
    /// Lambert-W analytical approximation.
    pub lambert: DispersionCurve,
    /// Classical Einstein law `u = s`.
    pub classical: DispersionCurve,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Config {
    pub s_min: f64,
    pub s_max: f64,
    pub samples: usize,
    pub shoot: ShootConfig,
}

impl Figure1Config {
    pub fn new(s_max: f64, samples: usize) -> Self {
        Self {
            s_min: 1e-6 * s_max,
            s_max,
            samples,
            shoot: ShootConfig::default(),
        }
    }

    /// Log-spaced abscissae from `s_min` to `s_max`.
    pub fn abscissae(&self) -> Vec<f64> {
        let (a, b) = (self.s_min.ln(), self.s_max.ln());
        let n = self.samples;
        (0..n)
            .map(|k| match k {
                0 => self.s_min,
                _ if k + 1 == n => self.s_max,
                _ => (a + (b - a) * k as f64 / (n - 1) as f64).exp(),
            })
            .collect()
    }
}

/// Figure-1 curves over `s` in `(0, s_max]` with `n_samples` log-spaced points.
pub fn figure1_curves(s_max: f64, n_samples: usize) -> Result<Figure1> {
    figure1_with(&Figure1Config::new(s_max, n_samples))
}

pub fn figure1_with(cfg: &Figure1Config) -> Result<Figure1> {
    if !(cfg.s_max > 0.0 && cfg.s_max.is_finite()) {
        return Err(Error::domain("s_max", cfg.s_max, "must be > 0"));
    }
    if cfg.samples < 16 {
        return Err(Error::domain("samples", cfg.samples as f64, "need at least 16"));
    }
    if !(cfg.s_min > 0.0 && cfg.s_min < cfg.s_max) {
        return Err(Error::domain("s_min", cfg.s_min, "must lie in (0, s_max)"));
    }
    let x_max = cfg.shoot.x_max;
    if cfg.s_max > 8.0 * x_max * x_max {
        return Err(Error::domain(
            "s_max",
            cfg.s_max,
            format!("exceeds 8 x_max^2 = {}; extend x_max first", 8.0 * x_max * x_max),
        ));
    }
    let (c2, _) = shoot_with(&cfg.shoot)?;
    let s = cfg.abscissae();
    let x0 = cfg.shoot.x0;
    let xs: Vec<f64> = s.iter().map(|s| (s / 8.0).sqrt()).collect();

    // Below the series start the truncated series itself is the solution.
    let mut mesh = vec![x0];
    mesh.extend(xs.iter().copied().filter(|&x| x > x0));
    let sol = if mesh.len() > 1 {
        Some(integrate_on_mesh(c2, &mesh, &cfg.shoot.ctrl)?)
    } else {
        None
    };
    let mut numeric = Vec::with_capacity(s.len());
    let mut k = 1;
    for (&si, &xi) in s.iter().zip(&xs) {
        let y = if xi > x0 {
            let sol = sol.as_ref().expect("mesh has points above x0");
            let y = sol.y[k];
            k += 1;
            y
        } else {
            series_start(c2, xi.max(f64::MIN_POSITIVE))?.0
        };
        numeric.push((si, 4.0 * xi * y));
    }
    let lambert = s
        .iter()
        .map(|&si| lambert_u(si).map(|u| (si, u)))
        .collect::<Result<Vec<_>>>()?;
    let classical = s.iter().map(|&si| (si, si)).collect();
    Ok(Figure1 {
        c2,
        numeric: DispersionCurve::new("numeric", numeric)?,
        lambert: DispersionCurve::new("lambert", lambert)?,
        classical: DispersionCurve::new("classical", classical)?,
    })
}
