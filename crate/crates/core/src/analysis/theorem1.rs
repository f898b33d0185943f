use super::decay::decay_sigma;
use super::superlevel::{superlevel_membership, witness_from_scan, ConvexityWitness};
use crate::error::{invalid, Result};
use crate::geometry::{
    find_witness_triple_with, EllipsoidSpec, PairSampler, Point, ScanOutcome, SweepPlan, WitnessTriple,
};
use crate::initial_data::{choose_kappa, make_v, MeridianField, WConstruction};
use crate::solver::{default_meridian_dt, evolve_meridian, Scheme, SolverConfig, SpaceTimeField};

/// Support radius of `V`.
pub const V_RADIUS: f64 = 1.25;
/// Support radius of `W`; `W` is radial inside `V_RADIUS`.
pub const W_RADIUS: f64 = 1.5;
/// Multiplier on the Richardson estimate that a witness margin must beat.
pub const BUDGET_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem1Variant {
    /// `W` with ellipsoidal level sets.
    Ellipsoidal,
    /// `W` replaced by the radial `V_{3/2}`.
    RadialControl,
}

impl Theorem1Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Theorem1Variant::Ellipsoidal => "ellipsoidal",
            Theorem1Variant::RadialControl => "radial-control",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Theorem1Config {
    pub n: usize,
    pub nr: usize,
    pub ntheta: usize,
    /// Defaults to `min(h, r_in·dθ)`.
    pub dt: Option<f64>,
    pub scheme: Scheme,
    pub snapshot_times: Vec<f64>,
    pub kappa_start: f64,
    pub variant: Theorem1Variant,
    pub eta1: Vec<f64>,
    pub eta2: Vec<f64>,
    /// `ε` values for the independent snapshot scan.
    pub eps_grid: Vec<f64>,
    /// Levels for the independent snapshot scan.
    pub level_grid: Vec<f64>,
    pub scan_radii: usize,
    pub scan_angles: usize,
    /// `dt` divisor for the re-run into `t₀`.
    pub refine_factor: usize,
}

/// 24 geometrically spaced times from `2⁻¹⁴` to `0.08`.
pub fn default_thm1_snapshots() -> Vec<f64> {
    let (lo, hi, k) = (2f64.powi(-14), 0.08f64, 24);
    let q = (hi / lo).powf(1.0 / (k - 1) as f64);
    let mut t: Vec<f64> = (0..k).map(|i| lo * q.powi(i)).collect();
    t[k as usize - 1] = hi;
    t
}

impl Theorem1Config {
    pub fn new(n: usize, nr: usize, ntheta: usize) -> Self {
        Theorem1Config {
            n,
            nr,
            ntheta,
            dt: None,
            scheme: Scheme::Trapezoidal,
            snapshot_times: default_thm1_snapshots(),
            kappa_start: 0.225,
            variant: Theorem1Variant::Ellipsoidal,
            eta1: (0..40).map(|k| 0.2 * 0.85f64.powi(k)).collect(),
            eta2: (1..=25).map(|k| 0.01 * k as f64).collect(),
            eps_grid: vec![0.05, 0.25, 0.5, 0.75, 0.95],
            level_grid: (1..=9).map(|k| 0.1 * k as f64).collect(),
            scan_radii: 16,
            scan_angles: 48,
            refine_factor: 4,
        }
    }

    pub fn with_variant(mut self, variant: Theorem1Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn t_final(&self) -> f64 {
        self.snapshot_times.last().copied().unwrap_or(0.0)
    }
}

/// The quantities of the proof along the stored snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1State {
    /// `W` on `E_{R⁻}`.
    pub s: f64,
    /// `(t, v(X,t)/s)`.
    pub alpha: Vec<(f64, f64)>,
    /// `(t, w(Z,t))`.
    pub beta: Vec<(f64, f64)>,
    pub sigma: f64,
    pub eps: Option<f64>,
    pub t0: Option<f64>,
    /// `α(t₀)`, `β(t₀)` after the refined re-run.
    pub refined: Option<(f64, f64)>,
}

/// Result of scanning one snapshot over the `(ε, c)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotScan {
    pub t: f64,
    /// Scans whose hit also beat its error budget.
    pub certified: usize,
    /// Scans reporting any midpoint outside the set.
    pub raw_hits: usize,
    pub best: Option<ConvexityWitness>,
}

#[derive(Debug, Clone)]
pub struct Theorem1Outcome {
    pub variant: Theorem1Variant,
    pub n: usize,
    pub kappa: f64,
    pub kappa_attempts: Vec<(f64, bool)>,
    pub outer: EllipsoidSpec,
    pub eta: Option<(f64, f64)>,
    /// Best clearance seen for each `η₁` tried.
    pub geometry_trace: Vec<(f64, f64)>,
    pub triple: Option<WitnessTriple>,
    pub state: Option<Theorem1State>,
    pub witness: Option<ConvexityWitness>,
    pub local_confirmation: Option<ScanOutcome>,
    pub snapshot_scans: Vec<SnapshotScan>,
    pub failure: Option<String>,
    pub dt: f64,
}

impl Theorem1Outcome {
    /// A witness from the proof's construction, confirmed by a local scan.
    pub fn certified(&self) -> bool {
        self.witness.as_ref().is_some_and(|w| w.holds())
            && self
                .local_confirmation
                .as_ref()
                .is_some_and(|s| s.witness.is_some())
    }

    /// Any certified witness from either route.
    pub fn any_witness(&self) -> bool {
        self.certified() || self.snapshot_scans.iter().any(|s| s.certified > 0)
    }

    pub fn key_values(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = vec![
            ("variant".into(), self.variant.name().into()),
            ("n".into(), self.n.to_string()),
            ("kappa".into(), format!("{:.16e}", self.kappa)),
            ("dt".into(), format!("{:.16e}", self.dt)),
        ];
        if let Some((e1, e2)) = self.eta {
            kv.push(("eta1".into(), format!("{e1:.16e}")));
            kv.push(("eta2".into(), format!("{e2:.16e}")));
        }
        if let Some(tr) = &self.triple {
            kv.push(("clearance".into(), format!("{:.16e}", tr.clearance)));
        }
        if let Some(st) = &self.state {
            kv.push(("s".into(), format!("{:.16e}", st.s)));
            kv.push(("sigma".into(), format!("{:.16e}", st.sigma)));
            if let (Some(e), Some(t0)) = (st.eps, st.t0) {
                kv.push(("eps".into(), format!("{e:.16e}")));
                kv.push(("t0".into(), format!("{t0:.16e}")));
            }
        }
        if let Some(w) = &self.witness {
            kv.extend(w.key_values());
        }
        let hits: usize = self.snapshot_scans.iter().map(|s| s.certified).sum();
        let raw: usize = self.snapshot_scans.iter().map(|s| s.raw_hits).sum();
        kv.push(("scan_certified_hits".into(), hits.to_string()));
        kv.push(("scan_raw_hits".into(), raw.to_string()));
        kv.push(("certified".into(), self.certified().to_string()));
        if let Some(f) = &self.failure {
            kv.push(("failure".into(), f.clone()));
        }
        kv
    }
}

struct Runs {
    fine: SpaceTimeField<MeridianField>,
    coarse: SpaceTimeField<MeridianField>,
}

fn read(f: &MeridianField, p: &Point) -> f64 {
    let (z, rho) = p.to_meridian();
    f.eval_meridian(z, rho).unwrap_or(0.0)
}

fn read2(f: &MeridianField, p: [f64; 2]) -> f64 {
    f.eval_meridian(p[0], p[1]).unwrap_or(0.0)
}

/// `10 × max |u_h − u_{2h}|/3` over the given points.
fn richardson_budget(fine: (&MeridianField, &MeridianField), coarse: (&MeridianField, &MeridianField), eps: f64, pts: &[[f64; 2]]) -> f64 {
    let comb = |pair: (&MeridianField, &MeridianField), p| (1.0 - eps) * read2(pair.0, p) + eps * read2(pair.1, p);
    BUDGET_FACTOR
        * pts
            .iter()
            .filter(|p| p[0].hypot(p[1]) >= fine.0.domain.r_in)
            .map(|&p| (comb(fine, p) - comb(coarse, p)).abs() / 3.0)
            .fold(0.0, f64::max)
}

fn search_geometry(
    c: &WConstruction,
    cfg: &Theorem1Config,
) -> Result<(Option<(f64, f64, WitnessTriple)>, Vec<(f64, f64)>)> {
    let outer = c.ellipsoid(W_RADIUS)?;
    let quick = SweepPlan {
        coarse: 64,
        rounds: 3,
        window: 2,
    };
    let mut trace = Vec::new();
    for &e1 in &cfg.eta1 {
        let inner = c.ellipsoid(W_RADIUS - e1)?;
        let mut best: Option<(f64, f64)> = None;
        for &e2 in &cfg.eta2 {
            let s = find_witness_triple_with(W_RADIUS + e2, &outer, &inner, quick)?;
            if best.map_or(true, |b| s.best_clearance > b.1) {
                best = Some((e2, s.best_clearance));
            }
        }
        let Some((e2, clearance)) = best else { continue };
        trace.push((e1, clearance));
        if clearance > 0.0 {
            let s = find_witness_triple_with(W_RADIUS + e2, &outer, &inner, SweepPlan::default())?;
            if let Some(t) = s.triple {
                return Ok((Some((e1, e2, t)), trace));
            }
        }
    }
    Ok((None, trace))
}

fn evolve_pair(v0: &MeridianField, w0: &MeridianField, cfg: &SolverConfig) -> Result<(SpaceTimeField<MeridianField>, SpaceTimeField<MeridianField>)> {
    Ok((evolve_meridian(v0, cfg)?, evolve_meridian(w0, cfg)?))
}

/// Builds `V` and `W`, picks the witness geometry, evolves both and follows
/// the proof to a certified superlevel set that is not convex. An
/// independent scan of every snapshot over an `(ε, c)` grid runs for both
/// variants.
pub fn run_theorem1(cfg: &Theorem1Config) -> Result<Theorem1Outcome> {
    let n = cfg.n;
    if n < 2 {
        return Err(invalid("n", "the meridian pipeline needs n >= 2"));
    }
    if cfg.nr < 8 || cfg.ntheta < 8 || cfg.nr % 2 != 0 || cfg.ntheta % 2 != 0 {
        return Err(invalid("grid", "need even nr, ntheta >= 8 for the Richardson grid"));
    }
    if cfg.snapshot_times.is_empty() {
        return Err(invalid("snapshots", "need at least one snapshot time"));
    }
    let (kappa, kappa_attempts) = match cfg.variant {
        Theorem1Variant::RadialControl => (0.0, vec![(0.0, true)]),
        Theorem1Variant::Ellipsoidal => {
            let ch = choose_kappa(n, V_RADIUS, W_RADIUS, cfg.nr, cfg.ntheta, Some(cfg.kappa_start))?;
            (ch.kappa, ch.attempts)
        }
    };
    let construction = WConstruction::new(n, V_RADIUS, W_RADIUS, kappa)?;
    let outer = construction.ellipsoid(W_RADIUS)?;
    let v = make_v(n, V_RADIUS)?;

    let (nr, nt) = (cfg.nr, cfg.ntheta);
    let v0 = MeridianField::from_radial(&v, nr, nt)?;
    let w0 = construction.field(nr, nt)?;
    let v0c = MeridianField::from_radial(&v, nr / 2, nt / 2)?;
    let w0c = construction.field(nr / 2, nt / 2)?;
    let dt = cfg.dt.unwrap_or_else(|| default_meridian_dt(&v0));
    let t_final = cfg.t_final();
    let solver = |nr, nt, dt| {
        SolverConfig::new(dt, nr, nt, t_final)
            .with_snapshots(cfg.snapshot_times.clone())
            .with_scheme(cfg.scheme)
    };
    let (vf, wf) = evolve_pair(&v0, &w0, &solver(nr, nt, dt))?;
    let (vc, wc) = evolve_pair(&v0c, &w0c, &solver(nr / 2, nt / 2, 2.0 * dt))?;
    let v_runs = Runs { fine: vf, coarse: vc };
    let w_runs = Runs { fine: wf, coarse: wc };

    let (found, geometry_trace) = search_geometry(&construction, cfg)?;
    let mut out = Theorem1Outcome {
        variant: cfg.variant,
        n,
        kappa,
        kappa_attempts,
        outer,
        eta: found.as_ref().map(|f| (f.0, f.1)),
        geometry_trace,
        triple: None,
        state: None,
        witness: None,
        local_confirmation: None,
        snapshot_scans: Vec::new(),
        failure: None,
        dt,
    };

    match found {
        None => {
            out.failure = Some("no witness triple: every (eta1, eta2) left Z inside the sphere or E_3/2".into());
        }
        Some((e1, _, triple)) => {
            follow_proof(&mut out, &construction, cfg, &v_runs, &w_runs, e1, &triple, dt)?;
            out.triple = Some(triple);
        }
    }
    let extra_eps = out.state.as_ref().and_then(|s| s.eps);
    out.snapshot_scans = scan_snapshots(cfg, &v_runs, &w_runs, extra_eps)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn follow_proof(
    out: &mut Theorem1Outcome,
    construction: &WConstruction,
    cfg: &Theorem1Config,
    v_runs: &Runs,
    w_runs: &Runs,
    eta1: f64,
    triple: &WitnessTriple,
    dt: f64,
) -> Result<()> {
    let r_minus = W_RADIUS - eta1;
    let s = construction.v.value(r_minus);
    let sigma = decay_sigma(triple.containing_sphere_radius, triple.z.norm());
    let snaps = &v_runs.fine.snapshots;
    let alpha: Vec<(f64, f64)> = snaps.iter().map(|(t, f)| (*t, read(f, &triple.x) / s)).collect();
    let beta: Vec<(f64, f64)> = w_runs
        .fine
        .snapshots
        .iter()
        .map(|(t, f)| (*t, read(f, &triple.z)))
        .collect();
    let ok = |a: f64, b: f64| a < 0.5 && b < sigma * s / 2.0;
    let k0 = (1..snaps.len()).find(|&k| ok(alpha[k].1, beta[k].1));
    let mut state = Theorem1State {
        s,
        alpha,
        beta,
        sigma,
        eps: None,
        t0: None,
        refined: None,
    };
    if !(s > 0.0) {
        out.failure = Some(format!("s = W on E_R- is {s:e}; not representable as a positive double"));
        out.state = Some(state);
        return Ok(());
    }
    let Some(k) = k0 else {
        out.failure = Some(format!(
            "no t0 with alpha < 1/2 and beta < sigma*s/2 = {:e} within T_final = {}",
            sigma * s / 2.0,
            cfg.t_final()
        ));
        out.state = Some(state);
        return Ok(());
    };

    // Re-run into t₀ from the previous snapshot with a finer step.
    let t0 = snaps[k].0;
    let (t_prev, v_prev) = &v_runs.fine.snapshots[k - 1];
    let w_prev = &w_runs.fine.snapshots[k - 1].1;
    let span = t0 - t_prev;
    let rcfg = SolverConfig::new((dt / cfg.refine_factor as f64).min(span), cfg.nr, cfg.ntheta, span)
        .with_scheme(cfg.scheme)
        .with_startup(0);
    let (vr, wr) = evolve_pair(v_prev, w_prev, &rcfg)?;
    let (v_t0, w_t0) = (vr.last().1.clone(), wr.last().1.clone());
    let (a_r, b_r) = (read(&v_t0, &triple.x) / s, read(&w_t0, &triple.z));
    state.refined = Some((a_r, b_r));
    let (v_use, w_use, a) = if ok(a_r, b_r) {
        (v_t0, w_t0, a_r)
    } else {
        (snaps[k].1.clone(), w_runs.fine.snapshots[k].1.clone(), state.alpha[k].1)
    };
    let eps = a;
    let level = (1.0 - eps) * s * eps;
    state.eps = Some(eps);
    state.t0 = Some(t0);

    let u = v_use.affine(1.0 - eps, &w_use, eps)?;
    let pts: Vec<[f64; 2]> = [&triple.x, &triple.y, &triple.z]
        .iter()
        .map(|p| {
            let (z, rho) = p.to_meridian();
            [z, rho]
        })
        .collect();
    let budget = richardson_budget(
        (&v_use, &w_use),
        (&v_runs.coarse.snapshots[k].1, &w_runs.coarse.snapshots[k].1),
        eps,
        &pts,
    );
    let (ux, uy, uz) = (read(&u, &triple.x), read(&u, &triple.y), read(&u, &triple.z));
    let w = ConvexityWitness {
        x: triple.x.clone(),
        y: triple.y.clone(),
        z: triple.z.clone(),
        level,
        t0,
        u_x: ux,
        u_y: uy,
        u_z: uz,
        margin: level - uz,
        error_budget: budget,
    };
    if !w.holds() {
        out.failure = Some(format!(
            "inequalities at t0 = {t0:e}: u(X)-c = {:e}, u(Y)-c = {:e}, margin = {:e}, budget = {budget:e}",
            ux - level,
            uy - level,
            w.margin
        ));
    } else {
        let h = u.h();
        let cloud = |p: [f64; 2]| -> Vec<[f64; 2]> {
            let mut v = Vec::new();
            for a in -2..=2 {
                for b in -2..=2 {
                    v.push([p[0] + 0.5 * h * a as f64, p[1] + 0.5 * h * b as f64]);
                }
            }
            v
        };
        let scan = superlevel_membership(&u, level).scan(&PairSampler::Clouds {
            a: cloud(pts[0]),
            b: cloud(pts[1]),
        });
        if scan.witness.is_none() {
            out.failure = Some("local convexity scan around (X, Y) found no violation".into());
        }
        out.local_confirmation = Some(scan);
        out.witness = Some(w);
    }
    out.state = Some(state);
    Ok(())
}

fn scan_snapshots(cfg: &Theorem1Config, v_runs: &Runs, w_runs: &Runs, extra_eps: Option<f64>) -> Result<Vec<SnapshotScan>> {
    let mut eps_grid = cfg.eps_grid.clone();
    if let Some(e) = extra_eps {
        eps_grid.push(e);
    }
    let (lo, hi) = (v_runs.fine.domain.r_in, v_runs.fine.domain.r_out);
    let m = cfg.scan_radii;
    let radii: Vec<f64> = (0..m).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / m as f64).collect();
    let sampler = PairSampler::Polar {
        radii,
        angles: cfg.scan_angles,
    };
    let mut out = Vec::new();
    for k in 1..v_runs.fine.len() {
        let (t, vf) = &v_runs.fine.snapshots[k];
        let wf = &w_runs.fine.snapshots[k].1;
        let (vc, wc) = (&v_runs.coarse.snapshots[k].1, &w_runs.coarse.snapshots[k].1);
        let mut rec = SnapshotScan {
            t: *t,
            certified: 0,
            raw_hits: 0,
            best: None,
        };
        for &eps in &eps_grid {
            let u = vf.affine(1.0 - eps, wf, eps)?;
            for &c in &cfg.level_grid {
                let scan = superlevel_membership(&u, c).scan(&sampler);
                let Some(hit) = scan.witness else { continue };
                rec.raw_hits += 1;
                let budget = richardson_budget((vf, wf), (vc, wc), eps, &[hit.x, hit.y, hit.z]);
                if let Some(w) = witness_from_scan(&u, c, *t, &hit, budget) {
                    if w.holds() {
                        rec.certified += 1;
                        if rec.best.as_ref().map_or(true, |b| w.margin > b.margin) {
                            rec.best = Some(w);
                        }
                    }
                }
            }
        }
        out.push(rec);
    }
    Ok(out)
}

/// Largest nodal gap over all snapshots between evolving
/// `(1−ε)V + εW` directly and combining the separate evolutions of `V`, `W`.
pub fn superposition_error(n: usize, nr: usize, ntheta: usize, kappa: f64, eps: f64, solver: &SolverConfig) -> Result<f64> {
    let c = WConstruction::new(n, V_RADIUS, W_RADIUS, kappa)?;
    let v = make_v(n, V_RADIUS)?;
    let v0 = MeridianField::from_radial(&v, nr, ntheta)?;
    let w0 = c.field(nr, ntheta)?;
    let u0 = v0.affine(1.0 - eps, &w0, eps)?;
    let (vs, ws) = evolve_pair(&v0, &w0, solver)?;
    let us = evolve_meridian(&u0, solver)?;
    let mut worst: f64 = 0.0;
    for k in 0..us.len() {
        let comb = vs.snapshots[k].1.affine(1.0 - eps, &ws.snapshots[k].1, eps)?;
        for (a, b) in comb.values.iter().zip(&us.snapshots[k].1.values) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}
