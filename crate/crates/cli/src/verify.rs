use crate::manifest::Run;
use crate::{core_err, usage};
use clap::{Args, ValueEnum};
use heatlab_core::analysis::{
    decay_lattice, radial_decay_check, run_section4, run_theorem1, run_theorem2, DecayOutcome, Section4Config,
    Theorem1Config, Theorem1Variant, Theorem2Config, Verdict, W_RADIUS,
};
use heatlab_core::initial_data::{make_u0_twopoint, make_v};
use heatlab_core::io::{csv_string, fmt_f64, kv_string, read_radial_csv};
use heatlab_core::solver::{evolve_radial, RadialField, SolverConfig};
use heatlab_core::svg::{graph_plot, witness_figure};
use std::fs;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Target {
    Thm1,
    Thm2,
    Sec4,
    DecayLemma,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Pick every free parameter automatically.
    #[arg(long)]
    pub auto: bool,
    /// Replace `W` by the radial profile, where no witness may appear.
    #[arg(long)]
    pub control: bool,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 512)]
    pub nr: usize,
    #[arg(long, default_value_t = 512)]
    pub ntheta: usize,
    /// Radial profile CSV for `decay-lemma`; fixtures are used when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

pub fn run(a: &VerifyArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    run.manifest.set("target", format!("{:?}", a.target));
    run.manifest.set("n", a.n);
    run.manifest.set("auto", a.auto);
    if a.control && !matches!(a.target, Target::Thm1) {
        return Err(usage("--control only applies to thm1"));
    }
    if a.input.is_some() && !matches!(a.target, Target::DecayLemma) {
        return Err(usage("--input only applies to decay-lemma"));
    }
    match a.target {
        Target::Thm1 => thm1(a, run),
        Target::Thm2 => thm2(a, run),
        Target::Sec4 => sec4(a, run),
        Target::DecayLemma => decay(a, run),
    }
}

fn thm1(a: &VerifyArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let variant = if a.control {
        Theorem1Variant::RadialControl
    } else {
        Theorem1Variant::Ellipsoidal
    };
    if a.n < 2 {
        return Err(usage("thm1 needs n >= 2"));
    }
    let cfg = Theorem1Config::new(a.n, a.nr, a.ntheta).with_variant(variant);
    run.manifest.set("variant", variant.name());
    run.manifest.set("nr", a.nr);
    run.manifest.set("ntheta", a.ntheta);
    let out = run_theorem1(&cfg).map_err(core_err)?;
    run.write("witness.txt", kv_string(&out.key_values()))?;
    if let Some(st) = &out.state {
        run.write("alpha.csv", csv_string(&["t", "alpha"], st.alpha.iter().map(|&(t, v)| [t, v])))?;
        run.write("beta.csv", csv_string(&["t", "beta"], st.beta.iter().map(|&(t, v)| [t, v])))?;
    }
    let scans = csv_string(
        &["t", "certified", "raw_hits"],
        out.snapshot_scans
            .iter()
            .map(|s| [s.t, s.certified as f64, s.raw_hits as f64]),
    );
    run.write("snapshot_scans.csv", scans)?;
    let (inner, r_plus, pts) = match &out.triple {
        Some(tr) => {
            let p = |q: &heatlab_core::geometry::Point| [q.coords[0], q.coords[1]];
            (tr.inner_ellipsoid, tr.containing_sphere_radius, Some((p(&tr.x), p(&tr.y), p(&tr.z))))
        }
        None => (out.outer, W_RADIUS, None),
    };
    run.write("figure1.svg", witness_figure(&out.outer, &inner, r_plus, pts))?;
    if let Some(f) = &out.failure {
        run.manifest.note("failure", f);
    }
    Ok(match variant {
        Theorem1Variant::Ellipsoidal => Verdict::from_bool(out.certified()),
        Theorem1Variant::RadialControl => Verdict::from_bool(!out.any_witness()),
    })
}

fn thm2(a: &VerifyArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let cfg = Theorem2Config::new(a.n);
    run.manifest.set("nr", cfg.nr);
    run.manifest.set("dt", cfg.dt);
    run.manifest.set("t_final", cfg.t_final);
    let out = run_theorem2(&cfg).map_err(core_err)?;
    run.write("level_graph.csv", csv_string(&["r", "t"], out.graph.samples.iter().map(|&(r, t)| [r, t])))?;
    run.write("report.txt", kv_string(&out.key_values()))?;
    run.write("level_graph.svg", graph_plot(&out.graph.samples, "r", "t"))?;
    Ok(Verdict::from_bool(out.pass()))
}

fn sec4(a: &VerifyArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let cfg = Section4Config::new(a.eps, a.n);
    run.manifest.set("eps", a.eps);
    run.manifest.set("nr", cfg.nr);
    run.manifest.set("dt", cfg.dt);
    let out = run_section4(&cfg).map_err(core_err)?;
    run.write("h_trace.csv", csv_string(&["t", "H"], out.trace.iter().map(|&(t, _, h)| [t, h])))?;
    run.write("y_trace.csv", csv_string(&["t", "y1"], out.trace.iter().map(|&(t, y, _)| [t, y])))?;
    run.write("report.txt", kv_string(&out.key_values()))?;
    Ok(Verdict::from_bool(out.pass()))
}

/// Snapshots of the two built-in fixtures, or the single supplied profile.
fn decay_subjects(a: &VerifyArgs, run: &mut Run) -> anyhow::Result<Vec<(String, f64, RadialField)>> {
    if let Some(p) = &a.input {
        let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        let f = read_radial_csv(&text, a.n).map_err(core_err)?;
        run.manifest.inputs.push(p.clone());
        return Ok(vec![("input".into(), 0.0, f)]);
    }
    let cfg = SolverConfig::new(1e-3, 1000, 0, 1.0).with_uniform_snapshots(20);
    run.manifest.set("fixture_nr", cfg.nr);
    run.manifest.set("fixture_dt", cfg.dt);
    let fixtures = [
        ("V", make_v(a.n, 1.25).map_err(core_err)?),
        ("twopoint", make_u0_twopoint(a.eps, a.n).map_err(core_err)?.u0),
    ];
    let mut out = Vec::new();
    for (name, u0) in fixtures {
        let sol = evolve_radial(&u0, &cfg)?;
        out.extend(sol.snapshots.into_iter().map(|(t, f)| (name.to_string(), t, f)));
    }
    Ok(out)
}

fn decay(a: &VerifyArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let subjects = decay_subjects(a, run)?;
    let lattice = decay_lattice();
    let mut rows = String::from("fixture,t,r0,r1,status,slack\n");
    let (mut pass, mut fail, mut na) = (0usize, 0usize, 0usize);
    for (name, t, f) in &subjects {
        for (k, &r0) in lattice.iter().enumerate() {
            for &r1 in &lattice[k + 1..] {
                let (status, slack) = match radial_decay_check(f, r0, r1) {
                    DecayOutcome::Pass { slack } => {
                        pass += 1;
                        ("pass", fmt_f64(slack))
                    }
                    DecayOutcome::Fail { slack } => {
                        fail += 1;
                        ("fail", fmt_f64(slack))
                    }
                    DecayOutcome::Inapplicable(_) => {
                        na += 1;
                        ("inapplicable", String::new())
                    }
                };
                rows.push_str(&format!("{name},{},{},{},{status},{slack}\n", fmt_f64(*t), fmt_f64(r0), fmt_f64(r1)));
            }
        }
    }
    run.write("decay_table.csv", rows)?;
    run.manifest.note("checks_pass", pass);
    run.manifest.note("checks_fail", fail);
    run.manifest.note("checks_inapplicable", na);
    Ok(if fail > 0 {
        Verdict::Fail
    } else if pass == 0 {
        Verdict::Inapplicable
    } else {
        Verdict::Pass
    })
}
