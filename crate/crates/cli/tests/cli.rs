use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn heatlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> String {
    fs::read_to_string(dir.join("manifest.txt")).expect("manifest written")
}

#[test]
fn build_v_writes_profile_report_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("v");
    let o = heatlab(&["build", "V", "--rho", "1.25", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    for key in ["command=build", "config.rho=1.25", "verdict=pass", "wall_time_s="] {
        assert!(m.contains(key), "missing {key} in\n{m}");
    }
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("lower_bound_pass=true"));
    assert!(fs::read_to_string(out.join("profile.csv")).unwrap().starts_with("r,value\n"));
}

#[test]
fn twopoint_is_normalised() {
    let tmp = tempfile::tempdir().unwrap();
    let o = heatlab(&["build", "twopoint", "--eps", "0.05", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report = fs::read_to_string(tmp.path().join("report.txt")).unwrap();
    let residual: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("normalization_residual="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual.abs() < 1e-10);
}

#[test]
fn usage_errors_exit_2_and_write_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("never");
    let o = heatlab(&["build", "V", "--rho", "3.0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = heatlab(&["evolve", "--input", "/no/such/file.csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = heatlab(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evolve_round_trips_a_built_profile() {
    let tmp = tempfile::tempdir().unwrap();
    let built = tmp.path().join("v");
    let ev = tmp.path().join("ev");
    assert_eq!(heatlab(&["build", "V", "--cells", "128", "--out", built.to_str().unwrap()]).status.code(), Some(0));
    let input = built.join("profile.csv");
    let o = heatlab(&[
        "evolve",
        "--input",
        input.to_str().unwrap(),
        "--t-final",
        "0.2",
        "--snapshots",
        "uniform:4",
        "--out",
        ev.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let index = fs::read_to_string(ev.join("snapshots/index.csv")).unwrap();
    assert_eq!(index.lines().count(), 1 + 5);
    assert!(ev.join("snapshots/snapshot_00004.csv").exists());
    let m = manifest(&ev);
    assert!(m.contains("config.nr=128") && m.contains("input="));
}

#[test]
fn evolve_flags_a_stationary_run_and_a_long_startup() {
    let tmp = tempfile::tempdir().unwrap();
    // u = 1 − (r − 1) is harmonic in one dimension.
    let mut csv = String::from("r,value\n");
    for k in 0..=32 {
        let r = 1.0 + k as f64 / 32.0;
        csv.push_str(&format!("{r},{}\n", 2.0 - r));
    }
    let input = tmp.path().join("line.csv");
    fs::write(&input, csv).unwrap();
    let out = tmp.path().join("ev");
    let o = heatlab(&[
        "evolve", "--input", input.to_str().unwrap(), "--n", "1", "--dt", "0.05", "--snapshots", "0.01",
        "--t-final", "0.5", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let m = manifest(&out);
    assert!(m.contains("stationary"), "{m}");
    assert!(m.contains("startup phase"), "{m}");
}

#[test]
fn config_grid_must_match_input() {
    let tmp = tempfile::tempdir().unwrap();
    let built = tmp.path().join("v");
    heatlab(&["build", "V", "--cells", "64", "--out", built.to_str().unwrap()]);
    let cfg = tmp.path().join("solver.cfg");
    fs::write(&cfg, "# coarse\ndt=0.01\nnr=32\nt_final=0.1\n").unwrap();
    let out = tmp.path().join("ev");
    let o = heatlab(&[
        "evolve", "--input", built.join("profile.csv").to_str().unwrap(), "--config", cfg.to_str().unwrap(),
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn converge_steady_is_stationary() {
    let tmp = tempfile::tempdir().unwrap();
    let o = heatlab(&[
        "converge", "--fixture", "steady", "--grids", "32,64", "--t", "0.05", "--dt", "0.01", "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(tmp.path().join("errors.csv")).unwrap().starts_with("nr,error\n"));
}

#[test]
fn decay_lemma_on_a_supplied_profile() {
    let tmp = tempfile::tempdir().unwrap();
    // The planar steady state 1 − log r / log 2.
    let mut csv = String::from("r,value\n");
    for k in 0..=200 {
        let r = 1.0 + k as f64 / 200.0;
        csv.push_str(&format!("{r},{}\n", 1.0 - r.ln() / 2f64.ln()));
    }
    let input = tmp.path().join("steady.csv");
    fs::write(&input, csv).unwrap();
    let out = tmp.path().join("d");
    let o = heatlab(&["verify", "decay-lemma", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(out.join("decay_table.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 45);
}

#[test]
fn decay_lemma_is_inapplicable_to_an_increasing_profile() {
    let tmp = tempfile::tempdir().unwrap();
    let mut csv = String::from("r,value\n");
    for k in 0..=50 {
        let r = 1.0 + k as f64 / 50.0;
        csv.push_str(&format!("{r},{}\n", (r - 1.0) * (2.0 - r)));
    }
    let input = tmp.path().join("bump.csv");
    fs::write(&input, csv).unwrap();
    let o = heatlab(&["verify", "decay-lemma", "--input", input.to_str().unwrap(), "--out", tmp.path().join("d").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sec4_pipeline_reports_a_positive_gap() {
    let tmp = tempfile::tempdir().unwrap();
    let o = heatlab(&["verify", "sec4", "--auto", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["h_trace.csv", "y_trace.csv", "report.txt", "manifest.txt"] {
        assert!(tmp.path().join(f).exists(), "{f}");
    }
}

#[test]
fn identical_runs_give_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs: Vec<_> = ["a", "b"].iter().map(|d| tmp.path().join(d)).collect();
    for d in &dirs {
        let o = heatlab(&["build", "W", "--kappa", "0.05", "--nr", "48", "--ntheta", "48", "--out", d.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |d: &Path| fs::read(d.join("field.csv")).unwrap();
    assert_eq!(read(&dirs[0]), read(&dirs[1]));
}

#[test]
fn build_thm2_records_the_chosen_radius() {
    let tmp = tempfile::tempdir().unwrap();
    let o = heatlab(&["build", "thm2", "--n", "2", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(manifest(tmp.path()).contains("R="));
}
