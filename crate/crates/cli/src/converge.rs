use crate::manifest::Run;
use crate::{core_err, usage};
use clap::{Args, ValueEnum};
use heatlab_core::analysis::Verdict;
use heatlab_core::io::{csv_string, fmt_f64, kv_string};
use heatlab_core::solver::{convergence_study, ConvergenceFixture};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Fixture {
    Sine,
    Steady,
    Meridian,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[arg(long, value_enum)]
    pub fixture: Fixture,
    /// Comma-separated radial grid sizes, coarse to fine.
    #[arg(long, default_value = "128,256,512")]
    pub grids: String,
    #[arg(long, default_value_t = 0.1)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    /// Dimension for the steady fixture.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub ntheta: usize,
    /// Lowest observed order accepted.
    #[arg(long, default_value_t = 1.8)]
    pub min_order: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

pub fn run(a: &ConvergeArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let grids = a
        .grids
        .split(',')
        .map(|g| g.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("--grids: {e}")))?;
    let fixture = match a.fixture {
        Fixture::Sine => ConvergenceFixture::Sine { t: a.t, dt: a.dt },
        Fixture::Steady => ConvergenceFixture::Steady { n: a.n, t: a.t, dt: a.dt },
        Fixture::Meridian => ConvergenceFixture::MeridianRadial { t: a.t, dt: a.dt, ntheta: a.ntheta },
    };
    run.manifest.set("fixture", format!("{fixture:?}"));
    run.manifest.set("grids", &a.grids);
    let rep = convergence_study(fixture, &grids).map_err(core_err)?;
    let rows = rep.grids.iter().zip(&rep.errors).map(|(&g, &e)| [g as f64, e]);
    run.write("errors.csv", csv_string(&["nr", "error"], rows))?;
    let orders: Vec<String> = rep.orders.iter().map(|o| fmt_f64(*o)).collect();
    let mut kv = vec![
        ("orders".to_string(), orders.join(",")),
        ("monotone".to_string(), rep.monotone.to_string()),
    ];
    let ok = match (a.fixture, rep.observed_order) {
        (Fixture::Steady, _) => {
            let worst = rep.errors.iter().cloned().fold(0.0, f64::max);
            kv.push(("max_drift".into(), fmt_f64(worst)));
            worst < 1e-10
        }
        (_, Some(p)) => {
            kv.push(("observed_order".into(), fmt_f64(p)));
            rep.monotone && p >= a.min_order
        }
        (_, None) => {
            kv.push(("observed_order".into(), "rounding".into()));
            true
        }
    };
    run.write("convergence.txt", kv_string(&kv))?;
    Ok(Verdict::from_bool(ok))
}
