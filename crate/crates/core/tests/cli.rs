use std::process::{Command, Output};

fn qfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Numeric rows of a CSV, skipping the comment header and column names.
fn rows(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let cols = lines.next().unwrap().split(',').map(String::from).collect();
    let data = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (cols, data)
}

#[test]
fn exit_codes() {
    assert_eq!(qfp(&[]).status.code(), Some(2));
    assert_eq!(qfp(&["nope"]).status.code(), Some(2));
    assert_eq!(qfp(&["params", "--colour", "red"]).status.code(), Some(2));
    assert_eq!(qfp(&["params", "--m", "abc"]).status.code(), Some(2));
    assert_eq!(qfp(&["params", "--config", "/nonexistent/qfp.cfg"]).status.code(), Some(2));
    let o = qfp(&["params", "--kT", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kT"));
    let o = qfp(&["dispersion", "--laws", "eq9", "--t_min", "0.01"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("applicable for large times"));
    assert_eq!(qfp(&["figure1", "--s_max", "1e6"]).status.code(), Some(2));
    // a strongly anti-convex well makes the semiclassical temperature negative
    let o = qfp(&["kramers", "--variant", "coffey", "--potential", "0,0,-7", "--t1", "0.01"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(qfp(&["params"]).status.success());
}

#[test]
fn summary_goes_to_stderr() {
    let o = qfp(&["dispersion", "--laws", "classical"]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("dispersion:"));
    assert!(stdout(&o).starts_with("# command=dispersion\n"));
}

#[test]
fn config_file_sections_and_flag_override() {
    let dir = std::env::temp_dir().join(format!("qfp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# shared\nhbar = 2\n\n[dispersion]\nlaws = classical\nt_max = 4\nsamples = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = qfp(&["dispersion", "--config", cfg, "--samples", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for l in ["# hbar=2", "# t_max=4", "# samples=3", "# laws=classical"] {
        assert!(text.lines().any(|x| x == l), "{l}");
    }
    let (cols, data) = rows(&text);
    assert_eq!(cols, ["t", "classical"]);
    assert_eq!(data.iter().map(|r| r[0]).collect::<Vec<_>>(), [0.0, 2.0, 4.0]);
    // sections of other commands are ignored
    assert!(qfp(&["params", "--config", cfg]).status.success());
    std::fs::write(dir.join("bad.cfg"), "[dispersion]\nfoo = 1\n").unwrap();
    assert_eq!(qfp(&["dispersion", "--config", dir.join("bad.cfg").to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn header_lists_every_resolved_parameter() {
    let o = qfp(&["smoluchowski", "--variant", "classical", "--t1", "0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let keys: Vec<&str> = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .filter_map(|l| l[2..].split('=').next())
        .collect();
    for k in [
        "command", "m", "b", "kT", "hbar", "variant", "floor", "x_half", "nodes", "sigma0_sq", "t0", "t1",
        "output_every", "comparison", "out", "svg",
    ] {
        assert!(keys.contains(&k), "{k}");
    }
    // auto values are recorded as numbers
    assert!(text.contains("# t0=2.0000000000000000e-2\n"), "{text}");
}

#[test]
fn dispersion_ordering() {
    let o = qfp(&["dispersion", "--laws", "eq13,lambert,classical", "--t_max", "100", "--samples", "50"]);
    let (cols, data) = rows(&stdout(&o));
    assert_eq!(cols, ["t", "eq13", "lambert", "classical"]);
    assert_eq!(data.len(), 50);
    assert!(data.iter().all(|r| r[1] >= r[3]));
}

#[test]
fn figure1_rows() {
    let o = qfp(&["figure1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("# c2=4.23")));
    let (cols, d) = rows(&text);
    assert_eq!(cols, ["s", "u_numeric", "u_lambert", "u_classical"]);
    for r in &d {
        assert!(r[2] >= r[1] - 1e-6 && r[1] >= r[3], "{r:?}");
    }
    let first = d[0][1] / (2.0 * d[0][0]).sqrt();
    assert!((0.99..=1.01).contains(&first), "{first}");
    let k = d.len() - 1;
    let slope = (d[k][1] - d[k - 1][1]) / (d[k][0] - d[k - 1][0]);
    assert!((0.98..=1.05).contains(&slope), "{slope}");
}

#[test]
fn figure1_svg_styles() {
    let dir = std::env::temp_dir().join(format!("qfp-svg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("f.svg");
    let o = qfp(&["figure1", "--samples", "32", "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.contains(r#"viewBox="0 0 800 600""#));
    assert_eq!(s.matches("<polyline").count(), 3);
    for label in ["(solid)", "(dashed)", "(dotted)"] {
        assert!(s.contains(label), "{label}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn smoluchowski_tracks_comparison_law() {
    let o = qfp(&["smoluchowski", "--comparison", "eq13"]);
    assert!(o.status.success());
    let (cols, d) = rows(&stdout(&o));
    assert_eq!(cols, ["t", "sigma2", "mass", "excess_kurtosis", "eq13"]);
    let last = d.last().unwrap();
    assert!((last[1] - last[4]).abs() < 0.02 * last[4]);
    assert!(d.iter().all(|r| (r[2] - 1.0).abs() < 1e-7));
}

#[test]
fn kramers_maxwellizes() {
    let o = qfp(&["kramers", "--hbar", "0", "--sigma2_p0", "2", "--nx", "48", "--t1", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (cols, d) = rows(&stdout(&o));
    assert_eq!(cols, ["t", "sigma2_x", "sigma2_p", "mass"]);
    assert!((d.last().unwrap()[2] - 1.0).abs() < 0.01);
    assert!(d.iter().all(|r| (r[3] - 1.0).abs() < 1e-7));
}

#[test]
fn automodel_csv() {
    let o = qfp(&["automodel"]);
    let text = stdout(&o);
    let c2: f64 = text.lines().find_map(|l| l.strip_prefix("# c2=")).unwrap().parse().unwrap();
    assert!((c2 - 4.2328).abs() < 1e-3);
    let (cols, d) = rows(&text);
    assert_eq!(cols, ["x", "y", "yprime", "residual"]);
    let last = d.last().unwrap();
    assert!((last[2] - 2.0).abs() < 1e-3);
}

#[test]
fn repeated_runs_are_identical() {
    for args in [&["figure1", "--samples", "40"][..], &["kramers", "--t1", "0.2"], &["smoluchowski"]] {
        let (a, b) = (qfp(args), qfp(args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stderr, b.stderr);
    }
}
