use crate::manifest::Run;
use crate::{core_err, usage};
use clap::{Args, ValueEnum};
use heatlab_core::analysis::Verdict;
use heatlab_core::initial_data::{
    check_admissible, check_admissible_field, check_thm2_profile, choose_kappa, choose_r_thm2,
    laplacian_lower_bound_check, make_u0_twopoint, make_v, WConstruction,
};
use heatlab_core::io::{fmt_f64, kv_string, meridian_csv, profile_csv};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BuildKind {
    #[value(name = "V", alias = "v")]
    V,
    #[value(name = "W", alias = "w")]
    W,
    Thm2,
    Twopoint,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(value_enum)]
    pub kind: BuildKind,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Support radius of `V`.
    #[arg(long, default_value_t = 1.25)]
    pub rho: f64,
    /// Ellipsoid parameter for `W`; chosen automatically when absent.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 128)]
    pub nr: usize,
    #[arg(long, default_value_t = 128)]
    pub ntheta: usize,
    /// Cells used when sampling a radial profile to CSV.
    #[arg(long, default_value_t = 4096)]
    pub cells: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

pub fn run(a: &BuildArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let m = &mut run.manifest;
    m.set("kind", format!("{:?}", a.kind));
    m.set("n", a.n);
    if a.cells < 4 {
        return Err(usage("--cells must be at least 4"));
    }
    match a.kind {
        BuildKind::V => {
            m.set("rho", a.rho);
            let v = make_v(a.n, a.rho).map_err(core_err)?;
            let rep = check_admissible(&v);
            let lb = laplacian_lower_bound_check(&v, a.n, a.rho, 4096);
            let mut kv = rep.key_values();
            kv.push(("lower_bound_pass".into(), lb.pass.to_string()));
            kv.push(("lower_bound_worst_margin".into(), fmt_f64(lb.worst_margin)));
            run.write("profile.csv", profile_csv(&v, a.cells))?;
            run.write("report.txt", kv_string(&kv))?;
            Ok(Verdict::from_bool(rep.pass && lb.pass))
        }
        BuildKind::W => {
            m.set("nr", a.nr);
            m.set("ntheta", a.ntheta);
            let kappa = match a.kappa {
                Some(k) => k,
                None => {
                    let ch = choose_kappa(a.n, 1.25, 1.5, a.nr, a.ntheta, None).map_err(core_err)?;
                    let tried: Vec<String> = ch.attempts.iter().map(|(k, ok)| format!("{k}:{ok}")).collect();
                    m.note("kappa_attempts", tried.join(","));
                    ch.kappa
                }
            };
            m.set("kappa", kappa);
            let c = WConstruction::new(a.n, 1.25, 1.5, kappa).map_err(core_err)?;
            let field = c.field(a.nr, a.ntheta).map_err(core_err)?;
            let rep = check_admissible_field(&field);
            let mut kv = rep.key_values();
            kv.push(("kappa".into(), fmt_f64(kappa)));
            run.write("field.csv", meridian_csv(&field))?;
            run.write("b.csv", profile_csv(&c.b_profile(), a.cells))?;
            run.write("report.txt", kv_string(&kv))?;
            Ok(Verdict::from_bool(rep.pass))
        }
        BuildKind::Thm2 => {
            let ch = choose_r_thm2(a.n).map_err(core_err)?;
            let rep = check_admissible(&ch.profile);
            let chk = check_thm2_profile(&ch.profile);
            let mut kv = rep.key_values();
            kv.push(("R".into(), fmt_f64(ch.big_r)));
            kv.push(("max_slope".into(), fmt_f64(chk.max_slope)));
            kv.push(("curvature_at_mid".into(), fmt_f64(chk.curvature_at_mid)));
            kv.push(("r_checks_pass".into(), chk.pass.to_string()));
            run.manifest.note("R", ch.big_r);
            run.write("profile.csv", profile_csv(&ch.profile, a.cells))?;
            run.write("report.txt", kv_string(&kv))?;
            Ok(Verdict::from_bool(rep.pass && chk.pass))
        }
        BuildKind::Twopoint => {
            m.set("eps", a.eps);
            let d = make_u0_twopoint(a.eps, a.n).map_err(core_err)?;
            let rep = check_admissible(&d.u0);
            let mut kv = rep.key_values();
            kv.push(("normalization_residual".into(), fmt_f64(d.g.residual)));
            kv.push(("cutoff_width".into(), fmt_f64(d.g.theta)));
            kv.push(("u0_at_x".into(), fmt_f64(d.u0.value(1.0 + a.eps / 2.0))));
            run.write("profile.csv", profile_csv(&d.u0, a.cells))?;
            run.write("g.csv", profile_csv(&d.g.profile, a.cells))?;
            run.write("report.txt", kv_string(&kv))?;
            Ok(Verdict::from_bool(rep.pass && d.g.residual.abs() < 1e-10))
        }
    }
}
