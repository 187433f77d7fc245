//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Runs without the libtest harness so the report is always visible:
//! `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qfp::automodel::{figure1_curves, integrate_from, integrate_on_mesh, ode16_residual, residual_scale, shoot, StepControl};
use qfp::dispersion::{
    eq13_residual, eval_eq9, eval_improved, lambert_w_minus1, solve_eq13, EQ13_TOL,
};
use qfp::functionals::{
    bohm_potential, fisher_information, fisher_information_curvature_form, quantum_temperature, DEFAULT_FLOOR,
};
use qfp::kleinkramers::{default_grids, thermal_state, KramersModel, KramersVariant};
use qfp::smoluchowski::{matched_free_reference, SmoluchowskiModel, SmoluchowskiVariant};
use qfp::{derive_params, DensityProfile, PhysicalParams, Potential, SpatialGrid, WignerField};

struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn that(&mut self, name: &str, ok: bool, detail: String) {
        let line = format!("{name}: {detail}");
        if ok {
            self.notes.push(line);
        } else {
            self.failures.push(line);
        }
    }

    fn within(&mut self, name: &str, elapsed: Duration, limit_s: f64) {
        let s = elapsed.as_secs_f64();
        self.that(name, s < limit_s, format!("{s:.2} s (limit {limit_s} s)"));
    }
}

type Criterion = (&'static str, fn(&mut Check) -> qfp::Result<()>);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 figure reproduction", figure),
        ("2 automodel boundary-value problem", automodel),
        ("3 dispersion-law consistency", dispersion),
        ("4 smoluchowski closure", smoluchowski),
        ("5 klein-kramers properties", kramers),
        ("6 functionals", functionals),
        ("7 determinism", determinism),
    ];
    let mut all = true;
    for (name, f) in criteria {
        let mut c = Check::new();
        if let Err(e) = f(&mut c) {
            c.failures.push(format!("error: {e}"));
        }
        let ok = c.failures.is_empty();
        all &= ok;
        println!("{} criterion {name}", if ok { "PASS" } else { "FAIL" });
        for f in &c.failures {
            println!("    FAIL {f}");
        }
        for n in &c.notes {
            println!("    ok   {n}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn figure(c: &mut Check) -> qfp::Result<()> {
    let start = Instant::now();
    let fig = figure1_curves(100.0, 200)?;
    c.within("(runtime)", start.elapsed(), 10.0);
    let s: Vec<f64> = fig.numeric.times().collect();
    let n: Vec<f64> = fig.numeric.values().collect();
    let l: Vec<f64> = fig.lambert.values().collect();

    let worst = n.iter().zip(&l).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min);
    c.that("(a) dashed >= solid", worst >= -1e-6, format!("min(dashed - solid) = {worst:.3e}, slack -1e-6"));

    let gap = |i: usize| (l[i] - n[i]).abs() / n[i];
    let (mut small, mut at) = (0.0f64, 0.0);
    for i in (0..s.len()).filter(|&i| s[i] < 0.5) {
        if gap(i) > small {
            small = gap(i);
            at = s[i];
        }
    }
    let overall = (0..s.len()).map(gap).fold(0.0, f64::max);
    c.that(
        "(b) solid vs dashed for s < 0.5",
        small < 0.03,
        format!("max relative gap {:.2}% at s = {at:.3e}, limit 3%", 100.0 * small),
    );
    c.that(
        "(b) gap bounded on [0, 100]",
        overall < 0.5,
        format!("max relative gap {:.2}%", 100.0 * overall),
    );

    let k = s.len() - 1;
    let slope = (n[k] - n[k - 1]) / (s[k] - s[k - 1]);
    c.that("(c) slope at s = 100", (slope - 1.0).abs() < 0.02, format!("{slope:.5}, limit 1 +- 2%"));
    Ok(())
}

fn automodel(c: &mut Check) -> qfp::Result<()> {
    let start = Instant::now();
    let (c2, sol) = shoot()?;
    let (xe, _, ype) = sol.end();
    c.that(
        "y'(x_max)",
        (ype - 2.0).abs() < 1e-3,
        format!("c2* = {c2:.6}, |y'({xe}) - 2| = {:.2e}, limit 1e-3", (ype - 2.0).abs()),
    );

    // y'' by central differences of y' on a fine uniform mesh, independent
    // of the right-hand side used by the integrator
    let h = 1e-3;
    let mesh: Vec<f64> = (0..=19990).map(|i| 0.01 + h * i as f64).collect();
    let fine = integrate_on_mesh(c2, &mesh, &StepControl::default())?;
    let mut worst = 0.0f64;
    for i in 1..mesh.len() - 1 {
        let ypp = (fine.y_prime[i + 1] - fine.y_prime[i - 1]) / (2.0 * h);
        let r = ode16_residual(mesh[i], fine.y[i], fine.y_prime[i], ypp)?;
        worst = worst.max(r.abs() / residual_scale(mesh[i], fine.y[i]));
    }
    c.that(
        "pointwise residual",
        worst < 1e-6,
        format!("max |R| / (1 + y^2/x^2) = {worst:.2e} with difference-quotient y'', limit 1e-6"),
    );

    let flat = integrate_from(0.0, 1e-3, 20.0, &StepControl::default())?;
    let dev = flat.y.iter().map(|y| (y - 1.0).abs()).fold(0.0, f64::max);
    c.that("c2 = 0 control", dev < 1e-12, format!("max |y - 1| = {dev:.1e}, limit 1e-12"));
    c.within("(runtime)", start.elapsed(), 5.0);
    Ok(())
}

fn dispersion(c: &mut Check) -> qfp::Result<()> {
    let start = Instant::now();
    let p = derive_params(1.0, 1.0, 1.0, 1.0)?;
    let mut worst = 0.0f64;
    for k in -10..=6 {
        let t = 10f64.powi(k);
        let s2 = solve_eq13(&p, t, EQ13_TOL)?;
        worst = worst.max(eq13_residual(&p, t, s2).abs() / s2);
    }
    c.that("implicit-law residual", worst < 1e-10, format!("max relative residual {worst:.1e} over t = 1e-10..1e6, limit 1e-10"));

    let mut worst = 0.0f64;
    for i in 0..20 {
        let z = -(1e-300f64.ln() + (i as f64 / 19.0) * ((1.0 / std::f64::consts::E).ln() - 1e-300f64.ln())).exp();
        let w = lambert_w_minus1(z)?;
        worst = worst.max((w * w.exp() - z).abs() / z.abs());
    }
    c.that("lambert identity", worst < 1e-12, format!("max |W e^W - z| / |z| = {worst:.1e} on 20 points, limit 1e-12"));

    let scale = p.m() * p.b() / p.hbar().powi(2) * p.lambda_t().powi(4);
    let t = 1e-8 * scale;
    let ratio = solve_eq13(&p, t, EQ13_TOL)? / (p.hbar() * (t / (3.0 * p.m() * p.b())).sqrt());
    c.that("small-t ratio", (0.999..=1.001).contains(&ratio), format!("{ratio:.6} at t = {t:.2e}, limit [0.999, 1.001]"));

    let mut worst = 0.0f64;
    for k in 0..20 {
        let t = 1e3 * p.lambda_t().powi(2) / (6.0 * p.d()) * 10f64.powf(k as f64 / 4.0) * 1.0001;
        let (a, b) = (eval_eq9(&p, t)?, eval_improved(&p, t)?);
        worst = worst.max((a - b).abs() / b);
    }
    c.that("large-t laws", worst < 1e-3, format!("max relative gap {worst:.1e} for 6Dt/lambda_T^2 > 1e3, limit 1e-3"));
    c.within("(runtime)", start.elapsed(), 1.0);
    Ok(())
}

/// Independent RK4 integration of d(sigma^2)/dt = 2 (D + hbar^2 / (12 m b sigma^2)).
fn closure_oracle(p: &PhysicalParams, s0: f64, t0: f64, t: f64) -> f64 {
    let k = p.hbar().powi(2) / (12.0 * p.m() * p.b());
    let f = |s: f64| 2.0 * (p.d() + k / s);
    let n = 20_000;
    let h = (t - t0) / n as f64;
    let mut s = s0;
    for _ in 0..n {
        let k1 = f(s);
        let k2 = f(s + 0.5 * h * k1);
        let k3 = f(s + 0.5 * h * k2);
        let k4 = f(s + h * k3);
        s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    s
}

fn smoluchowski(c: &mut Check) -> qfp::Result<()> {
    let start = Instant::now();
    let p = derive_params(1.0, 1.0, 1.0, 1.0)?;
    let s0 = 0.04;
    let t0 = eq13_residual(&p, 0.0, s0) / (2.0 * p.d());
    let t1 = 10.0 * t0;
    let rho0 = DensityProfile::gaussian(SpatialGrid::symmetric(3.0, 151)?, 0.0, s0)?;
    let run = SmoluchowskiModel::new(SmoluchowskiVariant::Eq12Nonlinear, p, 1e-12)?.run(&rho0, t0, t1, (t1 - t0) / 40.0)?;
    let worst = run
        .moments
        .samples()
        .iter()
        .map(|&(t, s)| {
            let o = closure_oracle(&p, s0, t0, t);
            (s - o).abs() / o
        })
        .fold(0.0, f64::max);
    c.that(
        "nonlinear run vs closure ODE",
        worst < 0.02,
        format!("max relative gap {worst:.2e} over t in [{t0:.4}, {t1:.4}], limit 2%"),
    );
    let kurt = run.max_abs_kurtosis();
    c.that("excess kurtosis", kurt < 0.02, format!("max |k| = {kurt:.2e}, limit 0.02"));
    let drift = run.max_mass_drift();
    c.that("mass drift", drift < 1e-8, format!("{drift:.1e}, limit 1e-8"));

    let (t0, t1, s0) = (0.5, 5.0, 1.0);
    let rho0 = DensityProfile::gaussian(SpatialGrid::symmetric(16.0, 321)?, 0.0, s0)?;
    let every = (t1 - t0) / 9.0;
    let eq7 = SmoluchowskiModel::new(SmoluchowskiVariant::Eq7Semiclassical, p, 1e-12)?.run(&rho0, t0, t1, every)?;
    let eq5 = SmoluchowskiModel::new(SmoluchowskiVariant::Eq5Reference(matched_free_reference(p, s0, t0)?), p, 1e-12)?
        .run(&rho0, t0, t1, every)?;
    let mut pair = 0.0f64;
    let mut law = 0.0f64;
    for (a, b) in eq7.moments.samples().iter().zip(eq5.moments.samples()) {
        pair = pair.max((a.1 - b.1).abs() / a.1);
        if a.0 > t0 {
            let lhs = a.1 - s0;
            let rhs = 2.0 * p.d() * (a.0 - t0) + p.lambda_t().powi(2) / 3.0 * (a.0 / t0).ln();
            law = law.max((lhs - rhs).abs() / rhs);
        }
    }
    c.that("reference vs semiclassical", pair < 0.03, format!("max relative gap {pair:.2e}, limit 3%"));
    c.that("logarithmic law", law < 0.02, format!("max relative gap {law:.2e}, limit 2%"));
    c.within("(runtime)", start.elapsed(), 60.0);
    Ok(())
}

fn kramers(c: &mut Check) -> qfp::Result<()> {
    let start = Instant::now();

    // (a)
    let p = derive_params(1.0, 2.0, 1.0, 1.5)?;
    let (x, pg) = default_grids(&p, 1.0, 1.0, 64, 64)?;
    let w0 = WignerField::product_gaussian(x, pg, 0.6, 1.3)?;
    let run = |v| KramersModel::new(v, Potential::free(), p, 1e-12)?.run_kk(&w0, 0.0, 1.0, 0.25);
    let (a, b) = (run(KramersVariant::Classical)?, run(KramersVariant::Coffey)?);
    let same = a.final_field == b.final_field && a.trace == b.trace;
    c.that("(a) free coffey == classical", same, format!("bitwise identical over {} steps: {same}", a.steps));

    // (b)
    let p = derive_params(1.0, 1.0, 1.0, 0.0)?;
    let t = 10.0 * p.m() / p.b();
    let x = SpatialGrid::symmetric(6.0 * 21f64.sqrt(), 128)?;
    let pg = SpatialGrid::symmetric(6.0 * 2f64.sqrt(), 128)?;
    let w0 = WignerField::product_gaussian(x, pg, 1.0, 2.0)?;
    let r = KramersModel::new(KramersVariant::Classical, Potential::free(), p, 1e-12)?.run_kk(&w0, 0.0, t, t)?;
    let sp = r.trace.last().expect("final sample").sigma2_p;
    let gap = (sp - p.m() * p.kt()).abs() / (p.m() * p.kt());
    c.that("(b) maxwellization", gap < 0.01, format!("sigma_p^2 = {sp:.5} at t = {t}, gap {:.2}%, limit 1%", 100.0 * gap));

    // (c)
    let p = derive_params(1.0, 4.0, 1.0, 3f64.sqrt())?;
    let omega = 1.0;
    let pot = Potential::harmonic(p.m(), omega);
    let raised = p.kt() + (p.hbar() * omega).powi(2) / (12.0 * p.kt());
    let model = KramersModel::new(KramersVariant::Coffey, pot.clone(), p, 1e-12)?;
    let (x, pg) = default_grids(&p, raised, (raised / (p.m() * omega * omega)).sqrt(), 128, 128)?;
    let good = model.stationarity_residual(&thermal_state(x, pg, &p, &pot, raised)?, 0.0)?;
    let plain = model.stationarity_residual(&thermal_state(x, pg, &p, &pot, p.kt())?, 0.0)?;
    c.that(
        "(c) raised-temperature stationarity",
        good < 1e-3 && plain > 10.0 * good,
        format!("residual {good:.2e} at kT* vs {plain:.2e} at kT (ratio {:.0}), limits 1e-3 and 10x", plain / good),
    );

    // (d)
    let p = derive_params(1.0, 25.0, 1.0, 1.0)?;
    let s0 = 0.1;
    let theta0 = p.kt() + p.hbar().powi(2) / (12.0 * p.m() * s0);
    let t0 = eq13_residual(&p, 0.0, s0) / (2.0 * p.d());
    let t1 = 10.0 * t0;
    let x = SpatialGrid::symmetric(4.5, 128)?;
    let pg = SpatialGrid::symmetric(6.0 * (p.m() * theta0).sqrt(), 128)?;
    let w0 = WignerField::product_gaussian(x, pg, s0, p.m() * theta0)?;
    let r = KramersModel::new(KramersVariant::Nonlinear, Potential::free(), p, 1e-12)?.run_kk(&w0, t0, t1, (t1 - t0) / 20.0)?;
    let mut worst = 0.0f64;
    for s in &r.trace {
        let e = solve_eq13(&p, s.t, EQ13_TOL)?;
        worst = worst.max((s.sigma2_x - e).abs() / e);
    }
    c.that(
        "(d) strong-friction nonlinear dispersion",
        worst < 0.10,
        format!("max relative gap to the implicit law {:.2}% (m/b = {:.1}% of run), limit 10%", 100.0 * worst, 100.0 * p.m() / p.b() / (t1 - t0)),
    );

    // (e)
    let pot = Potential::new(vec![0.0, 0.0, 0.5, 0.0, 0.1])?;
    let (x, pg) = (SpatialGrid::symmetric(5.0, 128)?, SpatialGrid::symmetric(6.0, 128)?);
    let w = WignerField::product_gaussian(x, pg, 0.8, 1.0)?;
    let excess = |hbar: f64| -> qfp::Result<f64> {
        let p = PhysicalParams::nondimensional(hbar)?;
        let q = KramersModel::new(KramersVariant::Coffey, pot.clone(), p, 1e-12)?.total_rate(&w, 0.0)?;
        let cl = KramersModel::new(KramersVariant::Classical, pot.clone(), p, 1e-12)?.total_rate(&w, 0.0)?;
        Ok(q.values().iter().zip(cl.values()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
    };
    let ratio = excess(0.8)? / excess(0.4)?;
    c.that("(e) hbar^2 scaling", (ratio - 4.0).abs() < 0.2, format!("ratio {ratio:.6}, limit 4 +- 5%"));

    c.within("(runtime)", start.elapsed(), 120.0);
    Ok(())
}

fn functionals(c: &mut Check) -> qfp::Result<()> {
    let start = Instant::now();
    let p = derive_params(1.3, 1.0, 0.7, 0.9)?;
    let s2: f64 = 0.5;
    let rho = DensityProfile::gaussian(SpatialGrid::symmetric(10.0 * s2.sqrt(), 801)?, 0.0, s2)?;
    let fi = fisher_information(&rho);
    c.that("gaussian FI sigma^2", (fi * s2 - 1.0).abs() < 1e-3, format!("{:.6}, limit 1 +- 1e-3", fi * s2));

    let grid = SpatialGrid::symmetric(8.0, 1601)?;
    let skew = DensityProfile::from_fn(grid, |x| {
        0.4 * (-(x + 1.5).powi(2) / 0.6).exp() + (-(x - 1.0).powi(2) / 1.2).exp()
    })?;
    for (name, r) in [("gaussian", &rho), ("two-hump", &skew)] {
        let (a, b) = (fisher_information(r), fisher_information_curvature_form(r));
        c.that(&format!("FI forms, {name}"), (a - b).abs() < 1e-3 * a, format!("{a:.6} vs {b:.6}, limit 1e-3 relative"));
    }

    let tq = quantum_temperature(&rho, DEFAULT_FLOOR, &p)?;
    let centre = tq.values[400];
    let expect = p.hbar().powi(2) / (4.0 * p.m() * s2);
    c.that(
        "gaussian kT_Q",
        (centre - expect).abs() < 0.02 * expect,
        format!("m kT_Q = {:.6} vs hbar^2/4 sigma^2 = {:.6}, limit 2%", p.m() * centre, p.m() * expect),
    );

    for (name, r) in [("gaussian", &rho), ("two-hump", &skew)] {
        let fi = fisher_information(r);
        let h2 = p.hbar().powi(2);
        let t = quantum_temperature(r, DEFAULT_FLOOR, &p)?.mean_over(r);
        let q = bohm_potential(r, DEFAULT_FLOOR, &p)?.mean_over(r);
        let (te, qe) = (h2 * fi / (4.0 * p.m()), h2 * fi / (8.0 * p.m()));
        c.that(
            &format!("<kT_Q> and <Q>, {name}"),
            (t - te).abs() < 0.02 * te && (q - qe).abs() < 0.02 * qe,
            format!("{t:.6} vs {te:.6}, {q:.6} vs {qe:.6}, limit 2%"),
        );
    }
    c.within("(runtime)", start.elapsed(), 1.0);
    Ok(())
}

fn determinism(c: &mut Check) -> qfp::Result<()> {
    let dir = std::env::temp_dir().join(format!("qfp-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let runs: [&[&str]; 6] = [
        &["params"],
        &["dispersion", "--laws", "eq13,lambert,classical", "--t_max", "10"],
        &["figure1"],
        &["smoluchowski", "--comparison", "eq13"],
        &["kramers", "--t1", "0.5"],
        &["automodel"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let csv = dir.join(format!("{}-{k}.csv", args[0]));
            let svg = dir.join(format!("{}-{k}.svg", args[0]));
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_qfp"));
            cmd.args(args);
            if args[0] != "params" {
                cmd.arg("--out").arg(&csv).arg("--svg").arg(&svg);
            }
            let out = cmd.output().expect("binary runs");
            let read = |p: &std::path::Path| std::fs::read(p).unwrap_or_default();
            outputs.push((out.status.code(), out.stdout, read(&csv), read(&svg)));
        }
        // the header records the output path, so compare with paths masked
        let mask = |b: &[u8], k: usize| {
            let path = dir.join(format!("{}-{k}.", args[0]));
            String::from_utf8_lossy(b).replace(&*path.to_string_lossy(), "#")
        };
        let same = outputs[0].0 == Some(0)
            && outputs[0].0 == outputs[1].0
            && outputs[0].1 == outputs[1].1
            && mask(&outputs[0].2, 0) == mask(&outputs[1].2, 1)
            && outputs[0].3 == outputs[1].3;
        c.that(args[0], same, format!("two runs byte-identical: {same}"));
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}
