use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const Z2: &str = r#"
[surface]
kind = "holomorphic"
params = [0.0, 0.0, 0.0, 0.0, 1.0, 0.0]
radius = 1.0
"#;

fn mgcl(dir: &Path, args: &[&str], config: &str) -> Output {
    let cfg = dir.join("config.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_mgcl"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .env("MGCL_THREADS", "2")
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

#[test]
fn analyze_z2_origin() {
    let d = tempfile::tempdir().unwrap();
    let o = mgcl(d.path(), &["analyze"], Z2);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(d.path(), "analyze.json");
    assert_eq!(v[0]["K_total"].as_f64().unwrap(), -8.0);
    for n in v[0]["per_normal"].as_array().unwrap() {
        assert_eq!(n["K"].as_f64().unwrap(), -4.0);
    }
    let m = json(d.path(), "manifest.json");
    assert_eq!(m["scenario"], "analyze");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["threads"], 2);
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
    assert!(m["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn analyze_with_theorem_check() {
    let d = tempfile::tempdir().unwrap();
    let cfg = format!("{Z2}\n[numeric]\nc1 = 2.0\nc2 = 2.0\n");
    let o = mgcl(d.path(), &["analyze", "--format", "json"], &cfg);
    assert_eq!(o.status.code(), Some(0));
    let v = json(d.path(), "analyze.json");
    let chain = &v["theorem_check"]["chain"];
    assert!((chain["two_w"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["theorem_check"]["satisfied"], true);
    assert!(!d.path().join("out/analyze.csv").exists());
}

#[test]
fn theta_sweep_z2_outputs() {
    let d = tempfile::tempdir().unwrap();
    let o = mgcl(d.path(), &["theta-sweep"], Z2);
    assert_eq!(o.status.code(), Some(0));
    let csv = read(d.path(), "theta-sweep.csv");
    assert_eq!(csv.lines().count(), 8);
    let ratios: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]));
    let svg = read(d.path(), "theta-sweep.svg");
    assert!(svg.contains("class=\"asymptote\""));
    assert!(svg.contains("y = 8"));
    assert!(!svg.contains("href"));
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = "[numeric]\nsamples = 50\nseed = 11\n";
    for d in [&a, &b] {
        assert_eq!(mgcl(d.path(), &["probe-heinz"], cfg).status.code(), Some(0));
        assert_eq!(mgcl(d.path(), &["theta-sweep"], Z2).status.code(), Some(0));
    }
    for name in ["probe-heinz.json", "probe-heinz.csv", "theta-sweep.json", "theta-sweep.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("<!--")).collect::<Vec<_>>().join("\n");
    assert_eq!(
        strip(read(a.path(), "theta-sweep.svg")),
        strip(read(b.path(), "theta-sweep.svg"))
    );
}

#[test]
fn seed_flag_overrides_config() {
    let d = tempfile::tempdir().unwrap();
    let o = mgcl(d.path(), &["probe-schauder", "--seed", "42"], "[numeric]\nsamples = 20\nseed = 1\n");
    assert_eq!(o.status.code(), Some(0));
    let v = json(d.path(), "probe-schauder.json");
    assert_eq!(v["seed"], 42);
    assert!(v["statistic"].as_f64().unwrap() >= 2.0);
    assert_eq!(json(d.path(), "manifest.json")["seed"], 42);
}

#[test]
fn misspelled_key_exits_2_and_names_it() {
    let d = tempfile::tempdir().unwrap();
    for (cfg, key) in [
        ("[numeric]\nomgea = 1.0\n", "omgea"),
        ("[surface]\nkind = \"scherk\"\nradius = 1.0\nparms = []\n", "parms"),
        ("[output]\nformat = [\"csv\"]\n", "format"),
    ] {
        let o = mgcl(d.path(), &["bernstein"], cfg);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains(key));
    }
    assert!(!d.path().join("out").exists());
}

#[test]
fn config_range_and_scenario_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let o = mgcl(d.path(), &["bernstein"], "[numeric]\nomega = 2.0\n");
    assert_eq!(o.status.code(), Some(2));
    let o = mgcl(d.path(), &["analyze"], "scenario = \"bernstein\"\n");
    assert_eq!(o.status.code(), Some(2));
    let o = mgcl(d.path(), &["analyze"], "");
    assert_eq!(o.status.code(), Some(2));
    let o = mgcl(d.path(), &["nonsense"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_thread_setting_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.toml");
    fs::write(&cfg, "").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mgcl"))
        .args(["bernstein", "--config"])
        .arg(&cfg)
        .env("MGCL_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bernstein_loglog_slope() {
    let d = tempfile::tempdir().unwrap();
    let o = mgcl(d.path(), &["bernstein"], "[numeric]\nomega = 1.0\n");
    assert_eq!(o.status.code(), Some(0));
    let v = json(d.path(), "bernstein.json");
    assert!((v["slope"].as_f64().unwrap() + 2.0).abs() < 1e-9);
    let svg = read(d.path(), "bernstein.svg");
    assert!(svg.contains("(log)"));
    assert!(!svg.contains("asymptote"));
}

#[test]
fn single_radius_pair_plots_two_markers() {
    let d = tempfile::tempdir().unwrap();
    let o = mgcl(d.path(), &["bernstein"], "[numeric]\nradii = [2.0, 4.0]\n");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(d.path(), "bernstein.svg").matches("class=\"marker\"").count(), 2);
}

#[test]
fn partial_sweep_failure_exits_1_with_marked_rows() {
    let d = tempfile::tempdir().unwrap();
    let cfg = r#"
[surface]
kind = "custom"
expressions = ["log(x + 12)"]
radius = 1.0

[numeric]
radii = [2.0, 4.0, 8.0, 16.0, 32.0]
"#;
    let o = mgcl(d.path(), &["theta-sweep"], cfg);
    assert_eq!(o.status.code(), Some(1));
    let csv = read(d.path(), "theta-sweep.csv");
    let status: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(&status[..3], ["ok", "ok", "ok"]);
    assert!(status[3..].iter().all(|s| *s != "ok"));
    assert_eq!(json(d.path(), "manifest.json")["exit_code"], 1);
}

#[test]
fn fully_failed_sweep_writes_no_svg() {
    let d = tempfile::tempdir().unwrap();
    let cfg = r#"
[surface]
kind = "custom"
expressions = ["log(x + 1.5)"]
radius = 1.0

[numeric]
radii = [2.0, 4.0, 8.0, 16.0]
"#;
    let o = mgcl(d.path(), &["theta-sweep"], cfg);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(!d.path().join("out/theta-sweep.svg").exists());
    assert!(d.path().join("out/theta-sweep.csv").exists());
}

#[test]
fn conformal_convergence_failure_exits_1() {
    let d = tempfile::tempdir().unwrap();
    let cfg = "[surface]\nkind = \"scherk\"\nradius = 1.0\n\n[numeric]\nmax_iterations = 2\n";
    let o = mgcl(d.path(), &["conformal"], cfg);
    assert_eq!(o.status.code(), Some(1));
    let m = json(d.path(), "manifest.json");
    assert!(m["error"].as_str().unwrap().contains("not converged"));
}

#[test]
fn conformal_scherk_chart() {
    let d = tempfile::tempdir().unwrap();
    let cfg = "[surface]\nkind = \"scherk\"\nradius = 1.0\n\n[numeric]\npoints = [[0.0, 0.0], [0.3, -0.2]]\n";
    let o = mgcl(d.path(), &["conformal"], cfg);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(d.path(), "conformal.json");
    assert!(v["residuals"]["conformality"].as_f64().unwrap() <= 1e-3);
    let reports = json(d.path(), "conformal_curvature.json");
    assert_eq!(reports.as_array().unwrap().len(), 2);
    assert!(reports[0]["K_intrinsic"].as_f64().is_some());
    assert!(read(d.path(), "conformal.csv").starts_with("u,v,X1,X2,X3\n"));
}

#[test]
fn verify_all_prints_table() {
    let d = tempfile::tempdir().unwrap();
    let o = mgcl(d.path(), &["verify-all", "--format", "csv"], "");
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count(), 9);
    assert_eq!(o.status.code(), Some(if stdout.contains("FAIL") { 1 } else { 0 }));
    assert_eq!(read(d.path(), "verify-all.csv").lines().count(), 10);
}
