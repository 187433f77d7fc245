//! Command-line front end.
//!
//! ```text
//! qfp <command> [--config FILE] [--key value]...
//! ```
//!
//! Commands: `params`, `dispersion`, `figure1`, `smoluchowski`, `kramers`,
//! `automodel`. Exit codes: 0 on success, 2 for configuration or validation
//! errors, 3 for numerical failures.

pub mod config;
pub mod output;

use std::fmt;

use crate::automodel::{self, Figure1Config, ShootConfig, StepControl};
use crate::density::DensityProfile;
use crate::dispersion::{eq13_residual, DispersionLaw, LawKind};
use crate::error::Error;
use crate::grid::SpatialGrid;
use crate::kleinkramers::{KramersModel, KramersVariant, XBoundary};
use crate::params::{derive_params, PhysicalParams};
use crate::potential::Potential;
use crate::reference::ReferenceDensity;
use crate::smoluchowski::{matched_free_reference, SmoluchowskiModel, SmoluchowskiVariant};
use crate::wigner::WignerField;

use config::{key, ConfigFile, KeySpec, Resolved};
use output::{format_number, line_chart, LineStyle, Series, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub const COMMANDS: [&str; 6] = ["params", "dispersion", "figure1", "smoluchowski", "kramers", "automodel"];

pub const USAGE: &str = "usage: qfp <command> [--config FILE] [--key value]...
commands: params, dispersion, figure1, smoluchowski, kramers, automodel";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_validation() { EXIT_CONFIG } else { EXIT_SOLVER },
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: the main text (CSV or report), an optional SVG,
/// and a one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    /// Where `text` goes; `-` is standard output.
    pub out: String,
    pub svg: Option<(String, String)>,
    pub summary: String,
}

impl Output {
    /// Writes the text and SVG to their destinations. Returns the text when it
    /// is meant for standard output.
    pub fn emit(&self) -> CliResult<Option<&str>> {
        if let Some((path, svg)) = &self.svg {
            write_file(path, svg)?;
        }
        if self.out == "-" {
            Ok(Some(&self.text))
        } else {
            write_file(&self.out, &self.text)?;
            Ok(None)
        }
    }
}

fn write_file(path: &str, content: &str) -> CliResult<()> {
    std::fs::write(path, content).map_err(|e| CliError::config(format!("cannot write {path}: {e}")))
}

/// Parsed command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub command: String,
    pub config_path: Option<String>,
    pub flags: Vec<(String, String)>,
}

pub fn parse_args(args: &[String]) -> CliResult<Invocation> {
    let mut it = args.iter();
    let command = it.next().ok_or_else(|| CliError::config(USAGE))?.clone();
    if !COMMANDS.contains(&command.as_str()) {
        return Err(CliError::config(format!("unknown command '{command}'\n{USAGE}")));
    }
    let mut config_path = None;
    let mut flags = Vec::new();
    while let Some(a) = it.next() {
        let k = a
            .strip_prefix("--")
            .ok_or_else(|| CliError::config(format!("expected --key, found '{a}'")))?;
        let v = it
            .next()
            .ok_or_else(|| CliError::config(format!("--{k} needs a value")))?
            .clone();
        if k == "config" {
            if config_path.replace(v).is_some() {
                return Err(CliError::config("--config given twice"));
            }
        } else if flags.iter().any(|(f, _)| f == k) {
            return Err(CliError::config(format!("--{k} given twice")));
        } else {
            flags.push((k.to_string(), v));
        }
    }
    Ok(Invocation {
        command,
        config_path,
        flags,
    })
}

/// Parses `args` (without the program name), runs the command and returns
/// its output. Nothing is written.
pub fn execute(args: &[String]) -> CliResult<Output> {
    let inv = parse_args(args)?;
    let file = match &inv.config_path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::config(format!("cannot read config {p}: {e}")))?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };
    let spec = spec_for(&inv.command);
    let mut cfg = Resolved::new(&inv.command, &spec, &file.for_command(&inv.command), &inv.flags)?;
    match inv.command.as_str() {
        "params" => cmd_params(&mut cfg),
        "dispersion" => cmd_dispersion(&mut cfg),
        "figure1" => cmd_figure1(&mut cfg),
        "smoluchowski" => cmd_smoluchowski(&mut cfg),
        "kramers" => cmd_kramers(&mut cfg),
        "automodel" => cmd_automodel(&mut cfg),
        _ => unreachable!("command was validated"),
    }
}

const PHYS: [KeySpec; 4] = [key("m", "1"), key("b", "1"), key("kT", "1"), key("hbar", "1")];
const OUT: [KeySpec; 2] = [key("out", "-"), key("svg", "")];

fn spec_for(command: &str) -> Vec<KeySpec> {
    let mut s: Vec<KeySpec> = match command {
        "params" => return PHYS.to_vec(),
        "dispersion" => [
            &PHYS[..],
            &[
                key("laws", "classical,eq13"),
                key("t_min", "0"),
                key("t_max", "1"),
                key("samples", "11"),
                key("spacing", "linear"),
            ],
        ]
        .concat(),
        "figure1" => vec![
            key("s_max", "100"),
            key("samples", "200"),
            key("x0", "0.001"),
            key("x_max", "20"),
            key("tol", "0.001"),
        ],
        "smoluchowski" => [
            &PHYS[..],
            &[
                key("variant", "eq12"),
                key("floor", "1e-12"),
                key("x_half", "3"),
                key("nodes", "151"),
                key("sigma0_sq", "0.04"),
                key("t0", "auto"),
                key("t1", "auto"),
                key("output_every", "auto"),
                key("comparison", "none"),
            ],
        ]
        .concat(),
        "kramers" => [
            &PHYS[..],
            &[
                key("variant", "classical"),
                key("potential", "0"),
                key("floor", "1e-12"),
                key("sigma2_x0", "1"),
                key("sigma2_p0", "auto"),
                key("nx", "128"),
                key("np", "128"),
                key("x_half", "auto"),
                key("p_half", "auto"),
                key("x_boundary", "auto"),
                key("t0", "0"),
                key("t1", "1"),
                key("output_every", "auto"),
                key("comparison", "none"),
            ],
        ]
        .concat(),
        "automodel" => vec![
            key("x0", "0.001"),
            key("x_max", "20"),
            key("tol", "0.001"),
            key("c2", "auto"),
        ],
        _ => Vec::new(),
    };
    s.extend_from_slice(&OUT);
    s
}

fn physical(cfg: &Resolved) -> CliResult<PhysicalParams> {
    Ok(derive_params(cfg.f64("m")?, cfg.f64("b")?, cfg.f64("kT")?, cfg.f64("hbar")?)?)
}

fn svg_target(cfg: &Resolved) -> Option<String> {
    cfg.optional("svg").map(str::to_string)
}

fn cmd_params(cfg: &mut Resolved) -> CliResult<Output> {
    let p = physical(cfg)?;
    let th = p.semiclassical_threshold();
    let mut s = String::new();
    s.push_str(&format!("D = {}\n", p.d()));
    s.push_str(&format!("lambda_T = {}\n", p.lambda_t()));
    s.push_str(&format!("beta = {}\n", p.beta()));
    s.push_str(&format!("threshold t = lambda_T^2/2D = {th}\n"));
    if p.is_classical() {
        s.push_str("note: hbar = 0, classical regime\n");
    } else {
        s.push_str(&format!(
            "note: the semiclassical laws are applicable for large times, t > {th}\n"
        ));
    }
    Ok(Output {
        text: s,
        out: "-".into(),
        svg: None,
        summary: format!("params: D = {}, lambda_T = {}", p.d(), p.lambda_t()),
    })
}

fn sample_times(t_min: f64, t_max: f64, n: usize, spacing: &str) -> CliResult<Vec<f64>> {
    if n < 2 {
        return Err(CliError::config("samples must be >= 2"));
    }
    if !(t_min >= 0.0 && t_max > t_min) {
        return Err(CliError::config(format!(
            "need 0 <= t_min < t_max (got {t_min}, {t_max})"
        )));
    }
    let last = (n - 1) as f64;
    match spacing {
        "linear" => Ok((0..n)
            .map(|k| if k + 1 == n { t_max } else { t_min + (t_max - t_min) * k as f64 / last })
            .collect()),
        "log" => {
            if t_min <= 0.0 {
                return Err(CliError::config("log spacing needs t_min > 0"));
            }
            let (a, b) = (t_min.ln(), t_max.ln());
            Ok((0..n)
                .map(|k| match k {
                    0 => t_min,
                    _ if k + 1 == n => t_max,
                    _ => (a + (b - a) * k as f64 / last).exp(),
                })
                .collect())
        }
        other => Err(CliError::config(format!("spacing must be linear or log, not '{other}'"))),
    }
}

fn parse_laws(cfg: &Resolved, k: &str) -> CliResult<Vec<LawKind>> {
    let laws = cfg
        .list(k)
        .iter()
        .map(|s| s.parse::<LawKind>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(laws)
}

fn cmd_dispersion(cfg: &mut Resolved) -> CliResult<Output> {
    let p = physical(cfg)?;
    let laws = parse_laws(cfg, "laws")?;
    if laws.is_empty() {
        return Err(CliError::config("laws: at least one law is required"));
    }
    let times = sample_times(cfg.f64("t_min")?, cfg.f64("t_max")?, cfg.usize("samples")?, cfg.raw("spacing"))?;
    let mut cols = vec!["t"];
    cols.extend(laws.iter().map(|l| l.name()));
    let mut table = Table::new(&cols);
    for &t in &times {
        let mut row = vec![t];
        for l in &laws {
            row.push(DispersionLaw::new(*l, p).eval(t)?);
        }
        table.push(row);
    }
    let styles = [LineStyle::Solid, LineStyle::Dashed, LineStyle::Dotted];
    let svg = svg_target(cfg).map(|path| {
        let series: Vec<Series> = laws
            .iter()
            .enumerate()
            .map(|(k, l)| Series {
                label: l.name().to_string(),
                points: table.rows.iter().map(|r| (r[0], r[k + 1])).collect(),
                style: styles[k % 3],
            })
            .collect();
        (path, line_chart("Dispersion laws", "t", "sigma^2", &series))
    });
    Ok(Output {
        text: table.to_csv(&cfg.header()),
        out: cfg.raw("out").to_string(),
        svg,
        summary: format!("dispersion: {} rows, laws {}", times.len(), cfg.raw("laws")),
    })
}

fn shoot_config(cfg: &Resolved) -> CliResult<ShootConfig> {
    Ok(ShootConfig {
        x0: cfg.f64("x0")?,
        x_max: cfg.f64("x_max")?,
        tol: cfg.f64("tol")?,
        ..ShootConfig::default()
    })
}

fn cmd_figure1(cfg: &mut Resolved) -> CliResult<Output> {
    let mut fc = Figure1Config::new(cfg.f64("s_max")?, cfg.usize("samples")?);
    fc.shoot = shoot_config(cfg)?;
    let fig = automodel::figure1_with(&fc)?;
    let mut table = Table::new(&["s", "u_numeric", "u_lambert", "u_classical"]);
    for ((a, b), c) in fig
        .numeric
        .samples()
        .iter()
        .zip(fig.lambert.samples())
        .zip(fig.classical.samples())
    {
        table.push(vec![a.0, a.1, b.1, c.1]);
    }
    let header = format!("{}# c2={}\n", cfg.header(), format_number(fig.c2));
    let svg = svg_target(cfg).map(|path| {
        let series = vec![
            Series {
                label: "numerical solution (solid)".into(),
                points: fig.numeric.samples().to_vec(),
                style: LineStyle::Solid,
            },
            Series {
                label: "Lambert W approximation (dashed)".into(),
                points: fig.lambert.samples().to_vec(),
                style: LineStyle::Dashed,
            },
            Series {
                label: "classical u = s (dotted)".into(),
                points: fig.classical.samples().to_vec(),
                style: LineStyle::Dotted,
            },
        ];
        (
            path,
            line_chart("Universal dependence of the dispersion", "s = 2Dt / lambda_T^2", "u = sigma^2 / lambda_T^2", &series),
        )
    });
    Ok(Output {
        text: table.to_csv(&header),
        out: cfg.raw("out").to_string(),
        svg,
        summary: format!("figure1: {} rows, c2 = {}", table.rows.len(), fig.c2),
    })
}

fn comparison(cfg: &Resolved) -> CliResult<Option<LawKind>> {
    cfg.optional("comparison").map(|s| s.parse::<LawKind>()).transpose().map_err(Into::into)
}

fn cmd_smoluchowski(cfg: &mut Resolved) -> CliResult<Output> {
    let p = physical(cfg)?;
    let floor = cfg.f64("floor")?;
    let s0 = cfg.f64("sigma0_sq")?;
    if !(s0 > 0.0) {
        return Err(CliError::config("sigma0_sq must be > 0"));
    }
    let name = cfg.raw("variant").to_string();
    let t0 = match cfg.f64_or_auto("t0")? {
        Some(t) => t,
        None if name == "eq12" => eq13_residual(&p, 0.0, s0) / (2.0 * p.d()),
        None => s0 / (2.0 * p.d()),
    };
    let t1 = cfg.f64_or_auto("t1")?.unwrap_or(10.0 * t0);
    let every = cfg.f64_or_auto("output_every")?.unwrap_or((t1 - t0) / 20.0);
    cfg.set("t0", format_number(t0));
    cfg.set("t1", format_number(t1));
    cfg.set("output_every", format_number(every));
    let variant = match name.as_str() {
        "classical" => SmoluchowskiVariant::Classical,
        "eq5" => SmoluchowskiVariant::Eq5Reference(matched_free_reference(p, s0, t0)?),
        "eq7" => SmoluchowskiVariant::Eq7Semiclassical,
        "eq12" => SmoluchowskiVariant::Eq12Nonlinear,
        other => {
            return Err(CliError::config(format!(
                "variant must be classical, eq5, eq7 or eq12, not '{other}'"
            )))
        }
    };
    let law = comparison(cfg)?;
    let grid = SpatialGrid::symmetric(cfg.f64("x_half")?, cfg.usize("nodes")?)?;
    let rho0 = DensityProfile::gaussian(grid, 0.0, s0)?;
    let model = SmoluchowskiModel::new(variant, p, floor)?;
    let run = model.run(&rho0, t0, t1, every)?;

    let mut cols = vec!["t", "sigma2", "mass", "excess_kurtosis"];
    if let Some(l) = law {
        cols.push(l.name());
    }
    let mut table = Table::new(&cols);
    for ((s, k), m) in run.moments.samples().iter().zip(&run.kurtosis).zip(&run.mass) {
        let mut row = vec![s.0, s.1, m.1, k.1];
        if let Some(l) = law {
            row.push(DispersionLaw::new(l, p).eval(s.0)?);
        }
        table.push(row);
    }
    let svg = svg_target(cfg).map(|path| {
        let mut series = vec![Series {
            label: format!("{name} solver"),
            points: run.moments.samples().to_vec(),
            style: LineStyle::Solid,
        }];
        if let Some(l) = law {
            series.push(Series {
                label: l.name().to_string(),
                points: table.rows.iter().map(|r| (r[0], r[4])).collect(),
                style: LineStyle::Dashed,
            });
        }
        (path, line_chart("Smoluchowski dispersion", "t", "sigma^2", &series))
    });
    let (tl, sl) = run.moments.last().expect("run records t1");
    Ok(Output {
        text: table.to_csv(&cfg.header()),
        out: cfg.raw("out").to_string(),
        svg,
        summary: format!(
            "smoluchowski {name}: {} steps, sigma2({tl}) = {sl}, max mass drift {:e}",
            run.steps,
            run.max_mass_drift()
        ),
    })
}

fn cmd_kramers(cfg: &mut Resolved) -> CliResult<Output> {
    let p = physical(cfg)?;
    let floor = cfg.f64("floor")?;
    let pot = Potential::new(cfg.f64_list("potential")?)?;
    let sx0 = cfg.f64("sigma2_x0")?;
    if !(sx0 > 0.0) {
        return Err(CliError::config("sigma2_x0 must be > 0"));
    }
    let name = cfg.raw("variant").to_string();
    let (t0, t1) = (cfg.f64("t0")?, cfg.f64("t1")?);
    if !(t1 > t0 && t0 >= 0.0) {
        return Err(CliError::config(format!("need 0 <= t0 < t1 (got {t0}, {t1})")));
    }
    let every = cfg.f64_or_auto("output_every")?.unwrap_or((t1 - t0) / 20.0);
    let quantum_log = name == "logref" || name == "nonlinear";
    let theta0 = if quantum_log {
        p.kt() + p.hbar() * p.hbar() / (12.0 * p.m() * sx0)
    } else {
        p.kt()
    };
    let sp0 = cfg.f64_or_auto("sigma2_p0")?.unwrap_or(p.m() * theta0);
    if !(sp0 > 0.0) {
        return Err(CliError::config("sigma2_p0 must be > 0"));
    }
    let x_half = cfg
        .f64_or_auto("x_half")?
        .unwrap_or_else(|| 6.0 * (sx0 + 2.0 * p.d() * (t1 - t0) + p.lambda_t().powi(2)).sqrt());
    let p_half = cfg
        .f64_or_auto("p_half")?
        .unwrap_or_else(|| 6.0 * sp0.max(p.m() * theta0).sqrt());
    cfg.set("sigma2_p0", format_number(sp0));
    cfg.set("x_half", format_number(x_half));
    cfg.set("p_half", format_number(p_half));
    cfg.set("output_every", format_number(every));
    let variant = match name.as_str() {
        "classical" => KramersVariant::Classical,
        "coffey" => KramersVariant::Coffey,
        "nonlinear" => KramersVariant::Nonlinear,
        "logref" => KramersVariant::LogRef(if pot.is_free() {
            ReferenceDensity::free_particle(p, sx0 / (2.0 * p.d()) - t0)?
        } else {
            ReferenceDensity::boltzmann(p, pot.clone())
        }),
        other => {
            return Err(CliError::config(format!(
                "variant must be classical, coffey, logref or nonlinear, not '{other}'"
            )))
        }
    };
    let mut model = KramersModel::new(variant, pot, p, floor)?;
    match cfg.raw("x_boundary") {
        "auto" => {}
        "periodic" => model = model.with_x_boundary(XBoundary::Periodic),
        "zero-flux" => model = model.with_x_boundary(XBoundary::ZeroFlux),
        other => {
            return Err(CliError::config(format!(
                "x_boundary must be auto, periodic or zero-flux, not '{other}'"
            )))
        }
    }
    cfg.set(
        "x_boundary",
        match model.x_boundary() {
            XBoundary::Periodic => "periodic".into(),
            XBoundary::ZeroFlux => "zero-flux".into(),
        },
    );
    let law = comparison(cfg)?;
    let xg = SpatialGrid::symmetric(x_half, cfg.usize("nx")?)?;
    let pg = SpatialGrid::symmetric(p_half, cfg.usize("np")?)?;
    let w0 = WignerField::product_gaussian(xg, pg, sx0, sp0)?;
    let run = model.run_kk(&w0, t0, t1, every)?;

    let mut cols = vec!["t", "sigma2_x", "sigma2_p", "mass"];
    if let Some(l) = law {
        cols.push(l.name());
    }
    let mut table = Table::new(&cols);
    for s in &run.trace {
        let mut row = vec![s.t, s.sigma2_x, s.sigma2_p, s.mass];
        if let Some(l) = law {
            row.push(DispersionLaw::new(l, p).eval(s.t)?);
        }
        table.push(row);
    }
    let svg = svg_target(cfg).map(|path| {
        let mut series = vec![
            Series {
                label: "sigma2_x".into(),
                points: run.trace.iter().map(|s| (s.t, s.sigma2_x)).collect(),
                style: LineStyle::Solid,
            },
            Series {
                label: "sigma2_p".into(),
                points: run.trace.iter().map(|s| (s.t, s.sigma2_p)).collect(),
                style: LineStyle::Dotted,
            },
        ];
        if let Some(l) = law {
            series.push(Series {
                label: l.name().to_string(),
                points: table.rows.iter().map(|r| (r[0], r[4])).collect(),
                style: LineStyle::Dashed,
            });
        }
        (path, line_chart("Klein-Kramers moments", "t", "variance", &series))
    });
    let last = run.trace.last().expect("run records t1");
    Ok(Output {
        text: table.to_csv(&cfg.header()),
        out: cfg.raw("out").to_string(),
        svg,
        summary: format!(
            "kramers {name}: {} steps, sigma2_x = {}, sigma2_p = {}, max mass drift {:e}",
            run.steps,
            last.sigma2_x,
            last.sigma2_p,
            run.max_mass_drift()
        ),
    })
}

fn cmd_automodel(cfg: &mut Resolved) -> CliResult<Output> {
    let sc = shoot_config(cfg)?;
    let sol = match cfg.f64_or_auto("c2")? {
        Some(c2) => automodel::integrate_from(c2, sc.x0, sc.x_max, &StepControl::default())?,
        None => automodel::shoot_with(&sc)?.1,
    };
    let mut table = Table::new(&["x", "y", "yprime", "residual"]);
    for i in 0..sol.len() {
        table.push(vec![sol.x[i], sol.y[i], sol.y_prime[i], sol.residual(i)]);
    }
    cfg.set("c2", format_number(sol.c2));
    let header = cfg.header();
    let svg = svg_target(cfg).map(|path| {
        let series = vec![
            Series {
                label: "y".into(),
                points: sol.x.iter().copied().zip(sol.y.iter().copied()).collect(),
                style: LineStyle::Solid,
            },
            Series {
                label: "y'".into(),
                points: sol.x.iter().copied().zip(sol.y_prime.iter().copied()).collect(),
                style: LineStyle::Dashed,
            },
        ];
        (path, line_chart("Self-similar solution", "x", "y", &series))
    });
    let (xe, _, ype) = sol.end();
    Ok(Output {
        text: table.to_csv(&header),
        out: cfg.raw("out").to_string(),
        svg,
        summary: format!(
            "automodel: c2 = {}, y'({xe}) = {ype}, max scaled residual {:e}",
            sol.c2,
            sol.max_scaled_residual()
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn run(s: &str) -> CliResult<Output> {
        execute(&args(s))
    }

    #[test]
    fn argument_parsing() {
        let inv = parse_args(&args("figure1 --s_max 10 --config f.cfg")).unwrap();
        assert_eq!(inv.config_path.as_deref(), Some("f.cfg"));
        assert_eq!(inv.flags, vec![("s_max".to_string(), "10".to_string())]);
        assert_eq!(parse_args(&[]).unwrap_err().code, 2);
        assert_eq!(parse_args(&args("bogus")).unwrap_err().code, 2);
        assert_eq!(parse_args(&args("params --m")).unwrap_err().code, 2);
        assert_eq!(parse_args(&args("params m 1")).unwrap_err().code, 2);
        assert_eq!(parse_args(&args("params --m 1 --m 2")).unwrap_err().code, 2);
    }

    #[test]
    fn params_report() {
        let o = run("params").unwrap();
        assert!(o.text.contains("D = 1\n"));
        assert!(o.text.contains("lambda_T = 0.5\n"));
        assert!(o.text.contains("= 0.125\n"));
        let o = run("params --hbar 0").unwrap();
        assert!(o.text.contains("= 0\n"));
        assert!(o.text.contains("classical regime"));
        let e = run("params --kT 0").unwrap_err();
        assert_eq!(e.code, 2);
        assert!(e.message.contains("kT"));
    }

    #[test]
    fn dispersion_table() {
        let o = run("dispersion --laws classical --t_min 0 --t_max 1 --samples 11").unwrap();
        let rows: Vec<&str> = o.text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "t,classical");
        assert_eq!(rows.len(), 12);
        for r in &rows[1..] {
            let v: Vec<f64> = r.split(',').map(|c| c.parse().unwrap()).collect();
            assert!((v[1] - 2.0 * v[0]).abs() < 1e-15);
        }
        let e = run("dispersion --laws eq9 --t_min 0.01 --t_max 1").unwrap_err();
        assert_eq!(e.code, 2);
        assert!(e.message.contains("applicable for large times"));
        assert_eq!(run("dispersion --laws nope").unwrap_err().code, 2);
        assert_eq!(run("dispersion --bogus 1").unwrap_err().code, 2);
    }

    #[test]
    fn header_records_resolved_config() {
        let o = run("dispersion --hbar 2").unwrap();
        for l in ["# command=dispersion", "# hbar=2", "# m=1", "# laws=classical,eq13", "# out=-"] {
            assert!(o.text.lines().any(|x| x == l), "{l}");
        }
    }

    #[test]
    fn solver_errors_exit_3() {
        // dt check cannot fail from the CLI; a negative coffey temperature can
        let e = run("kramers --variant coffey --potential 0,0,-7 --t1 0.01").unwrap_err();
        assert_eq!(e.code, 3);
    }

    #[test]
    fn automodel_fixed_c2() {
        let o = run("automodel --c2 0").unwrap();
        assert!(o.text.contains("# c2=0.0000000000000000e0"));
        let rows: Vec<&str> = o.text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "x,y,yprime,residual");
        assert!(rows[1..].iter().all(|r| r.split(',').nth(1).unwrap() == "1.0000000000000000e0"));
    }
}
