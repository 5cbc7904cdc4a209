use spinmeter::output::parse_csv;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spinmeter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinmeter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn lists_all_scenarios() {
    let o = spinmeter(&["list-scenarios"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in [
        "ring_profile",
        "density_1d",
        "spread_1d",
        "trajectory_1d",
        "spiral_1d",
        "asymptotics",
        "trotter_check",
        "moments_2d",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn validate_applies_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", "scenario = \"trajectory_1d\"\n");
    let o = spinmeter(&["validate", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["theta"].as_f64().unwrap(), std::f64::consts::FRAC_PI_4);
    assert_eq!(v["beta"].as_f64().unwrap(), 0.0);
    assert_eq!(v["phi"].as_f64().unwrap(), 0.0);
    assert_eq!(v["v_sp_values"], serde_json::json!([0.0]));
}

#[test]
fn config_errors_exit_with_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("scenario = \"spread_1d\"\nw = 0\n", "w must be positive"),
        ("scenario = \"ring_profile\"\nw_over_rso = 0.2\n", "asymptotic"),
        ("scenario = \"density_1d\"\n\nbogus = 1\n", "line 3, key `bogus`: unknown key"),
        ("scenario = \"nope\"\n", "unknown scenario"),
        ("scenario = \"ring_profile\"\ntheta = 1\n", "not used by scenario"),
        ("scenario = \"spread_1d\"\n[table]\nx = 1\n", "flat key = value"),
        ("theta = 1\n", "missing required key `scenario`"),
        ("scenario = \"spread_1d\"\nt = \"many\"\n", "cannot read `many`"),
    ];
    for (i, (body, needle)) in cases.iter().enumerate() {
        let cfg = write_config(tmp.path(), &format!("bad{i}.toml"), body);
        for cmd in ["validate", "run"] {
            let o = spinmeter(&[cmd, &cfg]);
            assert_eq!(o.status.code(), Some(2), "{cmd} {body:?}: {}", stderr(&o));
            assert!(stderr(&o).contains(needle), "{body:?}: {}", stderr(&o));
        }
    }
}

#[test]
fn trotter_run_writes_round_trippable_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "t.toml",
        "scenario = \"trotter_check\"\nt = \"pi\"\nsteps = [16, 32, 64]\nformats = [\"csv\", \"json\", \"svg\"]\noutput_dir = \"out\"\n",
    );
    let o = spinmeter(&["run", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = tmp.path().join("out");
    let csv = fs::read_to_string(out.join("trotter_check.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let (headers, cols) = parse_csv(&csv).unwrap();
    assert_eq!(headers, ["steps [1]", "l2_error [1]", "ratio [1]"]);
    assert_eq!(cols[0], [16.0, 32.0, 64.0]);
    assert!(cols[2][0].is_nan());
    for r in &cols[2][1..] {
        assert!((1.7..2.3).contains(r), "ratio {r}");
    }
    // every value field carries 17 significant digits
    let field = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    assert_eq!(field.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);

    let s = summary(&out);
    let keys: Vec<&String> = s.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["scenario", "status", "config", "results", "checks", "warnings", "files"]);
    assert_eq!(s["status"], "ok");
    // the summary scalar equals the table's last ratio bit for bit
    assert_eq!(s["results"]["last_ratio"].as_f64().unwrap(), cols[2][2]);
    let svg = fs::read_to_string(out.join("trotter_check.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
}

#[test]
fn runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let body = "scenario = \"density_1d\"\nt = \"2 pi\"\nw_values = [1, 2]\n";
    let cfg = write_config(tmp.path(), "d.toml", body);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let o = spinmeter(&["run", &cfg, "--out", dir.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in ["density_1d.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn coarse_time_step_is_an_accuracy_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.toml",
        "scenario = \"trajectory_1d\"\nw = 1\nt = 6\ndt = 0.5\noutput_dir = \"out\"\n",
    );
    let o = spinmeter(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("accuracy checks failed"));
    // outputs are still written, with the failure recorded
    let s = summary(&tmp.path().join("out"));
    assert_eq!(s["status"], "accuracy_failure");
    assert_eq!(s["checks"][0]["passed"], false);
}

#[test]
fn ring_profile_extrema_sit_on_the_ring() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "r.toml", "scenario = \"ring_profile\"\nsamples = 401\noutput_dir = \"o\"\n");
    let o = spinmeter(&["run", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = summary(&tmp.path().join("o"));
    let r = &s["results"];
    for k in ["max_offset_over_w", "min_offset_over_w"] {
        assert!(r[k].as_f64().unwrap().abs() < 3.0, "{k} = {}", r[k]);
    }
    assert!(r["abs_f_7w_outside"].as_f64().unwrap() < r["abs_f_7w_inside"].as_f64().unwrap());
    let (h, cols) = parse_csv(&fs::read_to_string(tmp.path().join("o/ring_profile.csv")).unwrap()).unwrap();
    assert_eq!(h, ["r_over_rso [R_so]", "F [1/R_so]"]);
    assert_eq!(cols[0].len(), 401);
}

#[test]
fn spread_has_columns_per_speed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "s.toml",
        "scenario = \"spread_1d\"\nt = \"4 pi\"\noutput_dir = \"o\"\n",
    );
    let o = spinmeter(&["run", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(tmp.path().join("o/spread_1d_sigma_x.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "x [length],sigma_x_density_vsp0 [1/length],sigma_x_density_vsp0.4 [1/length],sigma_x_density_vsp0.8 [1/length]"
    );
    let s = summary(&tmp.path().join("o"));
    let speeds = s["results"]["spreading_speeds"].as_object().unwrap();
    let widths: Vec<f64> = speeds.values().map(|v| v["width"].as_f64().unwrap()).collect();
    assert!(widths.windows(2).all(|p| p[1] > p[0]), "{widths:?}");
}
