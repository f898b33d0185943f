use crate::manifest::Run;
use crate::{core_err, usage};
use clap::Args;
use heatlab_core::analysis::{monitor_proposition, monitor_proposition_meridian, MonitorReport, Verdict};
use heatlab_core::io::{
    csv_string, export_meridian_snapshots, export_radial_snapshots, fmt_f64, kv_string, parse_kv,
    parse_solver_config, read_meridian_csv, read_radial_csv, solver_config_kv,
};
use heatlab_core::solver::{default_meridian_dt, evolve_meridian, evolve_radial_field, SolverConfig};
use std::fs;
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct EvolveArgs {
    /// Initial datum: `r,value` (radial) or `z,rho,value` (meridian) CSV.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// `key=value` solver config; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Comma-separated times or `uniform:K`.
    #[arg(long)]
    pub snapshots: Option<String>,
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub startup: Option<usize>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

enum Datum {
    Radial(heatlab_core::solver::RadialField),
    Meridian(heatlab_core::initial_data::MeridianField),
}

fn read_datum(text: &str, n: usize) -> anyhow::Result<Datum> {
    let header = text.lines().next().unwrap_or("").replace(' ', "");
    match header.as_str() {
        "r,value" => Ok(Datum::Radial(read_radial_csv(text, n).map_err(core_err)?)),
        "z,rho,value" => Ok(Datum::Meridian(read_meridian_csv(text, n).map_err(core_err)?)),
        other => Err(usage(format!("unrecognised CSV header `{other}`"))),
    }
}

fn set(kv: &mut Vec<(String, String)>, key: &str, value: String) {
    kv.retain(|(k, _)| k != key);
    kv.push((key.to_string(), value));
}

/// File entries, then flag overrides, then grid sizes from the datum.
fn solver_config(a: &EvolveArgs, datum: &Datum) -> anyhow::Result<SolverConfig> {
    let mut kv = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            parse_kv(&text).map_err(core_err)?
        }
        None => Vec::new(),
    };
    if let Some(v) = a.dt {
        set(&mut kv, "dt", v.to_string());
    }
    if let Some(v) = a.t_final {
        set(&mut kv, "t_final", v.to_string());
    }
    if let Some(v) = &a.snapshots {
        set(&mut kv, "snapshots", v.clone());
    }
    if let Some(v) = &a.scheme {
        set(&mut kv, "scheme", v.clone());
    }
    if let Some(v) = a.startup {
        set(&mut kv, "startup", v.to_string());
    }
    let (nr, ntheta, dt) = match datum {
        Datum::Radial(f) => (f.nr(), 0, f.h()),
        Datum::Meridian(f) => (f.nr, f.ntheta, default_meridian_dt(f)),
    };
    for (key, want) in [("nr", nr), ("ntheta", ntheta)] {
        if let Some((_, v)) = kv.iter().find(|(k, _)| k == key) {
            if v.parse::<usize>().ok() != Some(want) {
                return Err(usage(format!("config {key}={v} does not match the input grid ({want})")));
            }
        }
        set(&mut kv, key, want.to_string());
    }
    if !kv.iter().any(|(k, _)| k == "dt") {
        set(&mut kv, "dt", dt.to_string());
    }
    if !kv.iter().any(|(k, _)| k == "t_final") {
        set(&mut kv, "t_final", "1".into());
    }
    if !kv.iter().any(|(k, _)| k == "snapshots") {
        set(&mut kv, "snapshots", "uniform:20".into());
    }
    parse_solver_config(&kv_string(&kv)).map_err(core_err)
}

/// Rannacher steps much longer than the first requested snapshot smear it.
fn startup_warning(cfg: &SolverConfig) -> Option<String> {
    let first = cfg.targets().into_iter().next()?;
    let span = cfg.startup_steps as f64 * cfg.dt;
    (span > 0.1 * first).then(|| {
        format!(
            "startup phase {span:.3e} exceeds 10% of the first snapshot time {first:.3e}; consider a smaller dt"
        )
    })
}

fn monitor_csv(rep: &MonitorReport) -> String {
    csv_string(
        &["t", "min_u", "max_u", "min_u_t", "max_abs_u_t", "max_x_grad"],
        rep.snapshots
            .iter()
            .map(|s| [s.t, s.min_u, s.max_u, s.min_u_t, s.max_abs_u_t, s.max_x_grad]),
    )
}

pub fn run(a: &EvolveArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let text = fs::read_to_string(&a.input).map_err(|e| usage(format!("{}: {e}", a.input.display())))?;
    let datum = read_datum(&text, a.n)?;
    let cfg = solver_config(a, &datum)?;
    run.manifest.inputs.push(a.input.clone());
    if let Some(p) = &a.config {
        run.manifest.inputs.push(p.clone());
    }
    run.manifest.set("n", a.n);
    for (k, v) in solver_config_kv(&cfg) {
        run.manifest.set(&k, v);
    }
    if let Some(w) = startup_warning(&cfg) {
        run.manifest.warnings.push(w);
    }
    let snaps = run.dir.join("snapshots");
    let rep = match datum {
        Datum::Radial(f) => {
            let sol = evolve_radial_field(f, &cfg)?;
            export_radial_snapshots(&snaps, &sol)?;
            monitor_proposition(&sol)
        }
        Datum::Meridian(f) => {
            let sol = evolve_meridian(&f, &cfg)?;
            export_meridian_snapshots(&snaps, &sol)?;
            monitor_proposition_meridian(&sol)
        }
    };
    run.manifest.outputs.push(snaps);
    if rep.stationary {
        run.manifest
            .warnings
            .push("run is stationary; time-derivative sign checks were skipped".into());
    }
    let mut kv = vec![
        ("stationary".to_string(), rep.stationary.to_string()),
        ("violations".to_string(), rep.violations.len().to_string()),
    ];
    for v in &rep.violations {
        kv.push((format!("violation.{:?}", v.kind), format!("t={} value={}", fmt_f64(v.t), fmt_f64(v.value))));
    }
    run.write("monitor.csv", monitor_csv(&rep))?;
    run.write("monitor.txt", kv_string(&kv))?;
    Ok(Verdict::from_bool(rep.clean()))
}
