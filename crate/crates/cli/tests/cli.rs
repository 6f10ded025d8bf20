use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logsurf")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn first_complex(out: &Output) -> (f64, f64) {
    let text = stdout(out);
    let line = text.lines().next().unwrap().trim_end_matches('i').to_string();
    let k = line.rfind(['+', '-']).filter(|&k| k > 0 && !line[..k].ends_with('e')).unwrap();
    (line[..k].parse().unwrap(), line[k..].parse().unwrap())
}

#[test]
fn gamma_of_five() {
    let out = run(&["gamma", "--z", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "24+0i");
}

#[test]
fn zeta_of_two() {
    let out = run(&["zeta", "--z", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("1.6449340"), "{}", stdout(&out));
    let (re, im) = first_complex(&out);
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-9 && im == 0.0);
    let out = run(&["zeta", "--z", "2", "--digits", "8"]);
    assert_eq!(stdout(&out).trim(), "1.6449341+0i");
}

#[test]
fn series_zeta_stays_within_its_tolerance() {
    let out = run(&["zeta", "--z", "2", "--method", "series", "--tol", "1e-7"]);
    let (re, _) = first_complex(&out);
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() <= 1e-7);
}

#[test]
fn negative_complex_argument_and_digits() {
    let out = run(&["gamma", "--z", "-0.5", "--digits", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "-3.54491+0i");
    let out = run(&["gamma", "--z", "1-1i"]);
    let (re, im) = first_complex(&out);
    assert!((re - 0.4980156681).abs() < 1e-9 && (im - 0.1549498283).abs() < 1e-9);
}

#[test]
fn phi_methods_agree() {
    let auto = first_complex(&run(&["phi", "--z", "10+3i"]));
    let binet = first_complex(&run(&["phi", "--z", "10+3i", "--method", "binet", "--theta", "-0.1"]));
    let series = first_complex(&run(&["phi", "--z", "10+3i", "--method", "asymptotic"]));
    for other in [binet, series] {
        assert!((auto.0 - other.0).abs() < 1e-11 && (auto.1 - other.1).abs() < 1e-11);
    }
}

#[test]
fn eval_reads_json_series() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(
        &path,
        r#"{"m":1,"n":1,"terms":[{"alpha":[0.5],"beta":[1],"re":2.0},{"alpha":[0],"beta":[0],"re":1,"im":-1}]}"#,
    )
    .unwrap();
    let out = run(&["eval", "--series", path.to_str().unwrap(), "--x", "4@3.141592653589793", "--y", "1", "--norm"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (re, im) = first_complex(&out);
    assert!((re - 1.0).abs() < 1e-12 && (im - 3.0).abs() < 1e-12);
    assert!(stdout(&out).contains("norm 5.414213562"));
}

#[test]
fn eval_dimension_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, r#"{"m":1,"n":0,"terms":[{"alpha":[1],"re":1}]}"#).unwrap();
    let out = run(&["eval", "--series", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_inside_and_outside() {
    let out = run(&["classify", "--fn", "gamma", "--z", "3+0.5i", "--R", "0.6667", "--alpha", "1.4"]);
    assert_eq!(stdout(&out).trim(), "0");
    let out = run(&["classify", "--fn", "gamma", "--z", "-3", "--R", "0.6667", "--alpha", "1.4"]);
    assert_eq!(stdout(&out).trim(), "outside");
    let out =
        run(&["classify", "--fn", "gamma", "--z", "1.2+0.1i", "--R", "0.6667", "--alpha", "1.4", "--right-of-x0"]);
    assert_eq!(stdout(&out).trim(), "outside");
}

#[test]
fn trace_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = run(&[
        "trace",
        "--kind",
        "mod",
        "--through",
        "2+1i",
        "--x0",
        "2",
        "--x1",
        "4",
        "--step",
        "0.1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,residual,A,|Gamma|"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r[2] < 1e-10 && (r[4] - rows[0][4]).abs() < 1e-10));
}

#[test]
fn render_with_overlays() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.png");
    let out = run(&[
        "render",
        "--fn",
        "gamma",
        "--style",
        "contour",
        "--width",
        "65",
        "--height",
        "65",
        "--overlay",
        "S",
        "--overlay",
        "Un=0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(path.exists());
    assert!(stdout(&out).contains("overlay Un=0"));
    assert!(stdout(&out).contains(" 1 components"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["gamma", "--z", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["gamma"]).status.code(), Some(2));
    assert_eq!(run(&["render", "--fn", "gamma", "--window", "1,0,0,1", "--out", "x.png"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_logsurf"))
        .args(["gamma", "--z", "1"])
        .env("LOGSURF_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_one() {
    let out = run(&["zeta", "--z", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
    assert_eq!(run(&["gamma", "--z", "-3"]).status.code(), Some(1));
}

#[test]
fn verify_sectors_passes_and_is_deterministic() {
    let a = run(&["verify", "--suite", "sectors", "--samples", "10000"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("PASS"));
    let b = run(&["verify", "--suite", "sectors", "--samples", "10000"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn verify_other_suites_pass() {
    for suite in ["stirling", "gamma", "split", "gfunc"] {
        let out = run(&["verify", "--suite", suite, "--samples", "20", "--seed", "7"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
    }
    let out = run(&["verify", "--suite", "zeta", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn probe_tables() {
    let out = run(&["probe", "phase", "--t-min", "50", "--t-max", "5000", "--points", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 7);
    let out = run(&["probe", "crossings", "--turns", "20,40", "--density", "32"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 7);
}
