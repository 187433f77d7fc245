//! Phase-space dynamics of the Wigner function.
//!
//! ```text
//! dW/dt = -(p/m) dW/dx + V' dW/dp - (hbar^2/24) V''' d^3W/dp^3
//!         + b d/dp [ (p/m) W + Theta(x) dW/dp ]
//! ```
//!
//! with the effective temperature `Theta` depending on the variant:
//!
//! | variant   | `Theta(x)`                                   |
//! |-----------|----------------------------------------------|
//! | classical | `kT`                                         |
//! | coffey    | `kT + hbar^2 V''(x) / (12 m kT)`             |
//! | logref    | `kT - (hbar^2/12m) (ln rho_cl)''(x, t)`      |
//! | nonlinear | `kT - (hbar^2/12m) (ln rho)''(x)`, `rho = int W dp` |
//!
//! The `V'''` term is only present in the coffey variant.
//!
//! Discretization: every term is written as the divergence of a face flux on
//! dual cells, so mass is conserved to round-off. In `p` the cells are
//! trapezoidal with zero flux through the ends. In `x` the boundary is either
//! zero-flux (trapezoidal cells) or periodic (uniform cells, the last node
//! neighbouring the first). Time stepping is classical RK4.

use crate::error::{Error, Result};
use crate::functionals::check_floor;
use crate::grid::SpatialGrid;
use crate::params::PhysicalParams;
use crate::potential::Potential;
use crate::reference::ReferenceDensity;
use crate::wigner::{integrate_2d, raw_marginal_x, WignerField};

/// Safety factor of the explicit stability rule.
pub const CFL: f64 = 0.4;

/// The nonlinear quantum correction at a node is weighted by
/// `rho / (rho + RESOLVED * max rho)`, fading it out in the unresolved tail.
pub const RESOLVED: f64 = 1e-6;

/// Minimum number of momentum nodes (the `d^3/dp^3` stencil spans four).
pub const MIN_P_NODES: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub enum KramersVariant {
    Classical,
    Coffey,
    LogRef(ReferenceDensity),
    Nonlinear,
}

impl KramersVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::Coffey => "coffey",
            Self::LogRef(_) => "logref",
            Self::Nonlinear => "nonlinear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XBoundary {
    ZeroFlux,
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KramersModel {
    variant: KramersVariant,
    potential: Potential,
    params: PhysicalParams,
    floor: f64,
    x_boundary: XBoundary,
}

/// Which operators a rate evaluation includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parts {
    Streaming,
    Collision,
    Both,
}

/// Grid-dependent coefficients shared by all rate evaluations.
struct Layout {
    x: SpatialGrid,
    p: SpatialGrid,
    nx: usize,
    np: usize,
    inv_wx: Vec<f64>,
    periodic: bool,
    inv_wp: Vec<f64>,
    /// `p_j / m` at nodes and at faces `j + 1/2`.
    vel: Vec<f64>,
    vel_face: Vec<f64>,
    force: Vec<f64>,
    /// `(hbar^2/24) V'''(x_i) / (2 h_p^2)`; empty unless the term is active.
    third: Vec<f64>,
}

impl KramersModel {
    pub fn new(
        variant: KramersVariant,
        potential: Potential,
        params: PhysicalParams,
        floor: f64,
    ) -> Result<Self> {
        check_floor(floor)?;
        if let KramersVariant::LogRef(r) = &variant {
            if r.params() != &params {
                return Err(Error::Config(
                    "reference density was built with different parameters".into(),
                ));
            }
        }
        let x_boundary = if potential.is_free() {
            XBoundary::Periodic
        } else {
            XBoundary::ZeroFlux
        };
        let model = Self {
            variant,
            potential,
            params,
            floor,
            x_boundary,
        };
        // A quadratic potential has constant V'', so the coffey temperature
        // can be checked without a grid.
        if matches!(model.variant, KramersVariant::Coffey) && model.potential.coeffs().len() <= 3 {
            let th = model.coffey_theta(0.0);
            if !(th > 0.0) {
                return Err(model.negative_theta(th, 0.0));
            }
        }
        Ok(model)
    }

    /// Periodic `x` is only meaningful without a confining potential; the
    /// default is periodic for `V = 0` and zero-flux otherwise.
    pub fn with_x_boundary(mut self, b: XBoundary) -> Self {
        self.x_boundary = b;
        self
    }

    pub fn x_boundary(&self) -> XBoundary {
        self.x_boundary
    }

    pub fn variant(&self) -> &KramersVariant {
        &self.variant
    }
    pub fn potential(&self) -> &Potential {
        &self.potential
    }
    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    fn coffey_theta(&self, x: f64) -> f64 {
        let p = &self.params;
        p.kt() + p.hbar() * p.hbar() * self.potential.d2(x) / (12.0 * p.m() * p.kt())
    }

    fn negative_theta(&self, value: f64, x: f64) -> Error {
        Error::Instability {
            model: self.variant.name(),
            what: "effective temperature",
            value,
            x,
        }
    }

    fn quantum_streaming(&self) -> bool {
        matches!(self.variant, KramersVariant::Coffey) && self.params.hbar() > 0.0
    }

    fn layout(&self, x: SpatialGrid, p: SpatialGrid) -> Result<Layout> {
        if p.len() < MIN_P_NODES {
            return Err(Error::Config(format!(
                "momentum grid needs at least {MIN_P_NODES} nodes"
            )));
        }
        let m = self.params.m();
        let hp = p.spacing();
        let third = if self.quantum_streaming() {
            let c = self.params.hbar().powi(2) / 24.0 / (2.0 * hp * hp);
            x.nodes().map(|xi| c * self.potential.d3(xi)).collect()
        } else {
            Vec::new()
        };
        Ok(Layout {
            x,
            p,
            nx: x.len(),
            np: p.len(),
            inv_wx: match self.x_boundary {
                XBoundary::ZeroFlux => (0..x.len()).map(|i| 1.0 / x.weight(i)).collect(),
                XBoundary::Periodic => vec![1.0 / x.spacing(); x.len()],
            },
            periodic: self.x_boundary == XBoundary::Periodic,
            inv_wp: (0..p.len()).map(|j| 1.0 / p.weight(j)).collect(),
            vel: p.nodes().map(|pj| pj / m).collect(),
            vel_face: (0..p.len() - 1)
                .map(|j| 0.5 * (p.node(j) + p.node(j + 1)) / m)
                .collect(),
            force: x.nodes().map(|xi| self.potential.d1(xi)).collect(),
            third,
        })
    }

    /// Effective temperature at every x node for state `w` at time `t`.
    fn theta(&self, lay: &Layout, w: &[f64], t: f64) -> Result<Vec<f64>> {
        let p = &self.params;
        let kt = p.kt();
        let th: Vec<f64> = if p.hbar() == 0.0 {
            vec![kt; lay.nx]
        } else {
            let k = p.hbar() * p.hbar() / (12.0 * p.m());
            match &self.variant {
                KramersVariant::Classical => vec![kt; lay.nx],
                KramersVariant::Coffey => lay.x.nodes().map(|x| self.coffey_theta(x)).collect(),
                KramersVariant::LogRef(r) => r
                    .log_curvature(&lay.x, t)?
                    .into_iter()
                    .map(|c| kt - k * c)
                    .collect(),
                KramersVariant::Nonlinear => {
                    let mut rho = raw_marginal_x(&lay.x, &lay.p, w);
                    rho.iter_mut().for_each(|r| *r = r.max(0.0));
                    let cut = RESOLVED * rho.iter().cloned().fold(0.0, f64::max);
                    wide_log_curvature(&rho, lay.x.spacing(), self.floor, lay.periodic)
                        .into_iter()
                        .zip(&rho)
                        .map(|(c, &r)| kt - k * c * (r / (r + cut)))
                        .collect()
                }
            }
        };
        if let Some((i, &v)) = th.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(self.negative_theta(v, lay.x.node(i)));
        }
        Ok(th)
    }

    /// Accumulates the requested rates of `w` into `out` (overwritten).
    fn rate(&self, lay: &Layout, w: &[f64], theta: &[f64], parts: Parts, out: &mut [f64]) {
        let (nx, np) = (lay.nx, lay.np);
        let stream = parts != Parts::Collision;
        let coll = parts != Parts::Streaming;
        let hp = lay.p.spacing();
        let b = self.params.b();
        out.iter_mut().for_each(|v| *v = 0.0);

        if stream {
            let faces = if lay.periodic { nx } else { nx - 1 };
            for i in 0..faces {
                let ip = if i + 1 == nx { 0 } else { i + 1 };
                let (a, c) = (i * np, ip * np);
                let (ia, ic) = (lay.inv_wx[i], lay.inv_wx[ip]);
                for j in 0..np {
                    let g = lay.vel[j] * 0.5 * (w[a + j] + w[c + j]);
                    out[a + j] -= g * ia;
                    out[c + j] += g * ic;
                }
            }
        }

        for i in 0..nx {
            let row = &w[i * np..(i + 1) * np];
            let o = &mut out[i * np..(i + 1) * np];
            let f = lay.force[i];
            let th = theta[i];
            let q = if stream && !lay.third.is_empty() { lay.third[i] } else { 0.0 };
            for j in 0..np - 1 {
                let avg = 0.5 * (row[j] + row[j + 1]);
                let mut g = 0.0;
                if stream {
                    g -= f * avg;
                    if q != 0.0 && j >= 1 && j + 2 < np {
                        g += q * (row[j + 2] - row[j + 1] - row[j] + row[j - 1]);
                    }
                }
                if coll {
                    g -= b * (lay.vel_face[j] * avg + th * (row[j + 1] - row[j]) / hp);
                }
                o[j] -= g * lay.inv_wp[j];
                o[j + 1] += g * lay.inv_wp[j + 1];
            }
        }
    }

    fn field_rate(&self, w: &WignerField, t: f64, parts: Parts) -> Result<WignerField> {
        let lay = self.layout(*w.x_grid(), *w.p_grid())?;
        let th = self.theta(&lay, w.values(), t)?;
        let mut out = vec![0.0; w.values().len()];
        self.rate(&lay, w.values(), &th, parts, &mut out);
        WignerField::from_state(lay.x, lay.p, out)
    }

    /// Streaming rate `-(p/m) W_x + V' W_p - (hbar^2/24) V''' W_ppp`.
    pub fn streaming_apply(&self, w: &WignerField) -> Result<WignerField> {
        self.field_rate(w, 0.0, Parts::Streaming)
    }

    /// Collision rate `b d/dp [(p/m) W + Theta W_p]` at time `t` (only the
    /// logref variant depends on `t`).
    pub fn collision_apply(&self, w: &WignerField, t: f64) -> Result<WignerField> {
        self.field_rate(w, t, Parts::Collision)
    }

    /// Full rate (streaming plus collision).
    pub fn total_rate(&self, w: &WignerField, t: f64) -> Result<WignerField> {
        self.field_rate(w, t, Parts::Both)
    }

    /// Effective temperature field of `w` at time `t`.
    pub fn effective_temperature(&self, w: &WignerField, t: f64) -> Result<Vec<f64>> {
        let lay = self.layout(*w.x_grid(), *w.p_grid())?;
        self.theta(&lay, w.values(), t)
    }

    fn bound_from(&self, lay: &Layout, theta_max: f64) -> f64 {
        let p = &self.params;
        let (hx, hp) = (lay.x.spacing(), lay.p.spacing());
        let pmax = lay.p.x_min().abs().max(lay.p.x_max().abs());
        let mut b = f64::INFINITY;
        if pmax > 0.0 {
            b = b.min(hx * p.m() / pmax);
            b = b.min(hp * p.m() / (p.b() * pmax));
        }
        let fmax = lay.force.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if fmax > 0.0 {
            b = b.min(hp / fmax);
        }
        b = b.min(hp * hp / (2.0 * p.b() * theta_max));
        if !lay.third.is_empty() {
            let v3 = lay
                .x
                .nodes()
                .fold(0.0f64, |a, x| a.max(self.potential.d3(x).abs()));
            if v3 > 0.0 {
                b = b.min(24.0 * hp.powi(3) / (p.hbar() * p.hbar() * v3));
            }
        }
        CFL * b
    }

    /// Explicit stability bound for state `w` at time `t`.
    pub fn stability_bound(&self, w: &WignerField, t: f64) -> Result<f64> {
        let lay = self.layout(*w.x_grid(), *w.p_grid())?;
        let th = self.theta(&lay, w.values(), t)?;
        Ok(self.bound_from(&lay, th.iter().cloned().fold(0.0, f64::max)))
    }

    fn rk4(&self, lay: &Layout, st: &mut Stepper, t: f64, dt: f64, theta_limit: f64) -> Result<()> {
        let n = st.w.len();
        let stage = |src: &[f64], tt: f64, out: &mut Vec<f64>| -> Result<()> {
            let th = self.theta(lay, src, tt)?;
            let tmax = th.iter().cloned().fold(0.0, f64::max);
            if tmax > theta_limit {
                return Err(Error::StepTooLarge {
                    dt,
                    bound: CFL * dt * theta_limit / tmax,
                });
            }
            self.rate(lay, src, &th, Parts::Both, out);
            Ok(())
        };
        let mut k = std::mem::take(&mut st.k);
        let mut tmp = std::mem::take(&mut st.tmp);
        let mut acc = std::mem::take(&mut st.acc);
        let w = &st.w;

        stage(w, t, &mut k)?;
        for i in 0..n {
            acc[i] = k[i];
            tmp[i] = w[i] + 0.5 * dt * k[i];
        }
        stage(&tmp, t + 0.5 * dt, &mut k)?;
        for i in 0..n {
            acc[i] += 2.0 * k[i];
            tmp[i] = w[i] + 0.5 * dt * k[i];
        }
        stage(&tmp, t + 0.5 * dt, &mut k)?;
        for i in 0..n {
            acc[i] += 2.0 * k[i];
            tmp[i] = w[i] + dt * k[i];
        }
        stage(&tmp, t + dt, &mut k)?;
        let w = &mut st.w;
        for i in 0..n {
            w[i] += dt / 6.0 * (acc[i] + k[i]);
        }
        st.k = k;
        st.tmp = tmp;
        st.acc = acc;
        Ok(())
    }

    /// One RK4 step from `t` to `t + dt`.
    pub fn step_kk(&self, w: &WignerField, t: f64, dt: f64) -> Result<WignerField> {
        let lay = self.layout(*w.x_grid(), *w.p_grid())?;
        self.check_grid(&lay)?;
        let th = self.theta(&lay, w.values(), t)?;
        let bound = self.bound_from(&lay, th.iter().cloned().fold(0.0, f64::max));
        if !(dt > 0.0 && dt <= bound) {
            return Err(Error::StepTooLarge { dt, bound });
        }
        let m0 = w.mass();
        let mut st = Stepper::new(w.values().to_vec());
        self.rk4(&lay, &mut st, t, dt, theta_limit(&lay, &self.params, dt))?;
        let out = WignerField::from_state(lay.x, lay.p, st.w)?;
        let m1 = out.mass();
        if (m1 - m0).abs() > 1e-10 * m0.abs() {
            return Err(Error::Integrity(format!("mass changed from {m0} to {m1} in one step")));
        }
        Ok(out)
    }

    fn check_grid(&self, lay: &Layout) -> Result<()> {
        if matches!(self.variant, KramersVariant::Coffey) {
            for x in lay.x.nodes() {
                let th = self.coffey_theta(x);
                if !(th > 0.0) {
                    return Err(self.negative_theta(th, x));
                }
            }
        }
        Ok(())
    }

    /// Fixed-step RK4 march from `t0` to `t1`, recording moments every
    /// `output_every` time units and at `t1`.
    pub fn run_kk(&self, w0: &WignerField, t0: f64, t1: f64, output_every: f64) -> Result<KramersRun> {
        if !(t1 > t0) {
            return Err(Error::domain("t1", t1, "must exceed t0"));
        }
        if !(output_every > 0.0) {
            return Err(Error::domain("output_every", output_every, "must be > 0"));
        }
        if let KramersVariant::LogRef(r) = &self.variant {
            r.check_time(t0)?;
        }
        let lay = self.layout(*w0.x_grid(), *w0.p_grid())?;
        self.check_grid(&lay)?;
        let mut theta_max = self.theta(&lay, w0.values(), t0)?.into_iter().fold(0.0, f64::max);
        if matches!(self.variant, KramersVariant::LogRef(_)) {
            let th1 = self.theta(&lay, w0.values(), t1)?;
            theta_max = th1.into_iter().fold(theta_max, f64::max);
        }
        let dt = self.bound_from(&lay, theta_max);
        let steps = ((t1 - t0) / dt).ceil() as usize;
        let dt = (t1 - t0) / steps as f64;
        let limit = theta_limit(&lay, &self.params, dt);

        let mut st = Stepper::new(w0.values().to_vec());
        let mut trace = Vec::new();
        let sample = |t: f64, w: &[f64]| -> Result<KramersSample> {
            let f = WignerField::from_state(lay.x, lay.p, w.to_vec())?;
            Ok(KramersSample {
                t,
                sigma2_x: f.sigma2_x(),
                sigma2_p: f.sigma2_p(),
                mass: integrate_2d(&lay.x, &lay.p, w),
            })
        };
        trace.push(sample(t0, &st.w)?);
        let mut next_out = t0 + output_every;
        for k in 0..steps {
            let t = t0 + k as f64 * dt;
            self.rk4(&lay, &mut st, t, dt, limit)?;
            let tn = t0 + (k + 1) as f64 * dt;
            if k + 1 == steps {
                trace.push(sample(t1, &st.w)?);
            } else if tn >= next_out {
                trace.push(sample(tn, &st.w)?);
                while next_out <= tn {
                    next_out += output_every;
                }
            }
        }
        Ok(KramersRun {
            final_field: WignerField::from_state(lay.x, lay.p, st.w)?,
            trace,
            dt,
            steps,
        })
    }

    /// `||rate(W)|| / ||collision rate of W p^2 / <p^2>||`, trapezoid-weighted L2.
    pub fn stationarity_residual(&self, w: &WignerField, t: f64) -> Result<f64> {
        let r = self.total_rate(w, t)?;
        let s2 = w.sigma2_p();
        let pg = *w.p_grid();
        let np = pg.len();
        let pert: Vec<f64> = w
            .values()
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let p = pg.node(k % np);
                v * p * p / s2
            })
            .collect();
        let pert = WignerField::from_state(*w.x_grid(), pg, pert)?;
        let c = self.collision_apply(&pert, t)?;
        Ok(l2(&r) / l2(&c))
    }
}

/// `(ln rho)''` as the square of the central first difference, i.e. the
/// second difference over `2h`. Unlike the compact stencil it does not react to
/// odd-even modes, which the central streaming flux cannot damp. Nodes whose
/// five-point stencil touches a floored value get zero.
fn wide_log_curvature(rho: &[f64], h: f64, floor: f64, periodic: bool) -> Vec<f64> {
    let n = rho.len();
    let cut = floor * rho.iter().cloned().fold(0.0, f64::max);
    let ok: Vec<bool> = rho.iter().map(|&r| r > cut).collect();
    let ln: Vec<f64> = rho.iter().map(|&r| r.max(cut).ln()).collect();
    let at = |i: isize| -> Option<usize> {
        if periodic {
            Some(i.rem_euclid(n as isize) as usize)
        } else if i >= 0 && (i as usize) < n {
            Some(i as usize)
        } else {
            None
        }
    };
    (0..n as isize)
        .map(|i| match (at(i - 2), at(i + 2)) {
            (Some(a), Some(b)) if (i - 2..=i + 2).all(|k| ok[at(k).unwrap()]) => {
                (ln[b] - 2.0 * ln[i as usize] + ln[a]) / (4.0 * h * h)
            }
            _ => 0.0,
        })
        .collect()
}

fn theta_limit(lay: &Layout, params: &PhysicalParams, dt: f64) -> f64 {
    let hp = lay.p.spacing();
    hp * hp / (2.0 * params.b() * dt)
}

fn l2(w: &WignerField) -> f64 {
    let sq: Vec<f64> = w.values().iter().map(|v| v * v).collect();
    integrate_2d(w.x_grid(), w.p_grid(), &sq).sqrt()
}

struct Stepper {
    w: Vec<f64>,
    k: Vec<f64>,
    tmp: Vec<f64>,
    acc: Vec<f64>,
}

impl Stepper {
    fn new(w: Vec<f64>) -> Self {
        let n = w.len();
        Self {
            w,
            k: vec![0.0; n],
            tmp: vec![0.0; n],
            acc: vec![0.0; n],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KramersSample {
    pub t: f64,
    pub sigma2_x: f64,
    pub sigma2_p: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KramersRun {
    pub final_field: WignerField,
    pub trace: Vec<KramersSample>,
    pub dt: f64,
    pub steps: usize,
}

impl KramersRun {
    pub fn max_mass_drift(&self) -> f64 {
        let m0 = self.trace[0].mass;
        self.trace.iter().map(|s| (s.mass - m0).abs()).fold(0.0, f64::max)
    }
}

/// Grids spanning `+-6` widths: `sqrt(m theta)` in `p` and `sigma_x` in `x`.
pub fn default_grids(
    params: &PhysicalParams,
    theta: f64,
    sigma_x: f64,
    nx: usize,
    np: usize,
) -> Result<(SpatialGrid, SpatialGrid)> {
    Ok((
        SpatialGrid::symmetric(6.0 * sigma_x, nx)?,
        SpatialGrid::symmetric(6.0 * (params.m() * theta).sqrt(), np)?,
    ))
}

/// `exp(-(p^2/2m + V(x)) / theta)`, normalized on the grids.
pub fn thermal_state(
    x: SpatialGrid,
    p: SpatialGrid,
    params: &PhysicalParams,
    potential: &Potential,
    theta: f64,
) -> Result<WignerField> {
    if !(theta > 0.0) {
        return Err(Error::domain("theta", theta, "must be > 0"));
    }
    let m = params.m();
    WignerField::from_fn(x, p, |xi, pj| (-(pj * pj / (2.0 * m) + potential.value(xi)) / theta).exp())
}
