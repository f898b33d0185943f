use crate::error::{invalid, Error, Result};
use crate::initial_data::{choose_r_thm2, RadialProfile, RChecks};
use crate::solver::{evolve_radial, RadialField, Scheme, SolverConfig, SpaceTimeField};

/// The graph `t = f(r)` of the level set `u(r, f(r)) = c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelGraph {
    pub level: f64,
    pub r_start: f64,
    /// `(r, f(r))`, starting with `(r_start, 0)`.
    pub samples: Vec<(f64, f64)>,
    /// Some node never reached the level within the stored snapshots.
    pub truncated: bool,
    /// `f′(r_start)` and `f″(r_start)` from a one-sided quadratic fit.
    pub f_prime: f64,
    pub f_second: f64,
    pub formula_f_second: Option<f64>,
    /// Largest relative gap between centred differences of `f` and
    /// `−u_r/u_t` read at `(r, f(r))`.
    pub max_slope_mismatch: f64,
    pub strictly_increasing: bool,
}

impl LevelGraph {
    pub fn trace(&self) -> &[(f64, f64)] {
        &self.samples
    }
}

/// Default width of the window used for the derivative fit at `r_start`.
/// The level graph of the plateau datum picks up terms like `exp(−a/t)`
/// once the edges of the plateau are felt, so the window stays where
/// `f ≲ 3·10⁻³`. There the cubic Taylor term is below `10⁻¹²`, so a
/// quadratic fit suffices and amplifies solver rounding the least.
pub const FIT_WINDOW: f64 = 3e-4;
const TIME_BISECTIONS: usize = 80;

fn hermite(t0: f64, t1: f64, u0: f64, u1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let (s2, s3) = (s * s, s * s * s);
    (2.0 * s3 - 3.0 * s2 + 1.0) * u0 + (s3 - 2.0 * s2 + s) * h * d0 + (-2.0 * s3 + 3.0 * s2) * u1 + (s3 - s2) * h * d1
}

/// Least-squares polynomial of degree `deg` through `(x, y)`; coefficients
/// in increasing order.
pub fn polyfit(x: &[f64], y: &[f64], deg: usize) -> Result<Vec<f64>> {
    let m = deg + 1;
    if x.len() < m {
        return Err(invalid("samples", format!("need at least {m} points for degree {deg}")));
    }
    let mut a = vec![vec![0.0; m + 1]; m];
    for (&xi, &yi) in x.iter().zip(y) {
        let mut pw = vec![1.0; 2 * m];
        for k in 1..2 * m {
            pw[k] = pw[k - 1] * xi;
        }
        for r in 0..m {
            for c in 0..m {
                a[r][c] += pw[r + c];
            }
            a[r][m] += pw[r] * yi;
        }
    }
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::SingularSystem { row: col });
        }
        a.swap(col, piv);
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            for c in col..=m {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut out = vec![0.0; m];
    for r in (0..m).rev() {
        let s: f64 = (r + 1..m).map(|c| a[r][c] * out[c]).sum();
        out[r] = (a[r][m] - s) / a[r][r];
    }
    Ok(out)
}

/// Finds `f(r)` at every node `r ≥ r_start` by bracketing the level between
/// consecutive snapshots and bisecting a cubic Hermite interpolant in time
/// whose slopes are the discrete `u_t = Δu`.
pub fn level_graph(field: &SpaceTimeField<RadialField>, level: f64, r_start: f64) -> Result<LevelGraph> {
    level_graph_with(field, level, r_start, FIT_WINDOW)
}

pub fn level_graph_with(
    field: &SpaceTimeField<RadialField>,
    level: f64,
    r_start: f64,
    window: f64,
) -> Result<LevelGraph> {
    let first = &field.snapshots[0].1;
    let m = first.nr();
    let h = first.h();
    let i0 = ((r_start - first.domain.r_in) / h).round() as usize;
    if (first.radius(i0) - r_start).abs() > 1e-9 * h.max(1.0) {
        return Err(invalid("r_start", "must be a grid node"));
    }
    let lap: Vec<Vec<f64>> = (0..field.len()).map(|k| field.u_t(k)).collect();
    let grad: Vec<Vec<f64>> = field.snapshots.iter().map(|(_, f)| f.gradient()).collect();
    let mut samples = vec![(r_start, 0.0)];
    let mut truncated = false;
    let mut where_: Vec<(usize, f64)> = vec![(0, 0.0)];
    for i in i0 + 1..m {
        let u = |k: usize| field.snapshots[k].1.values[i];
        let Some(k) = (0..field.len() - 1).find(|&k| u(k) < level && u(k + 1) >= level) else {
            truncated = true;
            break;
        };
        let (t0, t1) = (field.snapshots[k].0, field.snapshots[k + 1].0);
        let p = |t| hermite(t0, t1, u(k), u(k + 1), lap[k][i], lap[k + 1][i], t);
        let (mut lo, mut hi) = (t0, t1);
        for _ in 0..TIME_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if p(mid) < level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        samples.push((first.radius(i), t));
        where_.push((k, (t - t0) / (t1 - t0)));
    }
    let strictly_increasing = samples.windows(2).all(|w| w[1].1 > w[0].1);

    let mut max_slope_mismatch: f64 = 0.0;
    for a in 1..samples.len().saturating_sub(1) {
        let fd = (samples[a + 1].1 - samples[a - 1].1) / (2.0 * h);
        let (k, s) = where_[a];
        let i = i0 + a;
        let lerp = |v: &Vec<Vec<f64>>| {
            let hi = (k + 1).min(field.len() - 1);
            v[k][i] + s * (v[hi][i] - v[k][i])
        };
        let exact = -lerp(&grad) / lerp(&lap);
        max_slope_mismatch = max_slope_mismatch.max(((fd - exact) / exact).abs());
    }

    let (f_prime, f_second) = fit_at_start(&samples, r_start, window)?;
    Ok(LevelGraph {
        level,
        r_start,
        samples,
        truncated,
        f_prime,
        f_second,
        formula_f_second: None,
        max_slope_mismatch,
        strictly_increasing,
    })
}

fn fit_at_start(samples: &[(f64, f64)], r_start: f64, window: f64) -> Result<(f64, f64)> {
    let (x, y): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|(r, _)| r - r_start <= window * (1.0 + 1e-9))
        .map(|&(r, t)| ((r - r_start) / window, t))
        .unzip();
    let c = polyfit(&x, &y, 2)?;
    Ok((c[1] / window, 2.0 * c[2] / (window * window)))
}

/// The curvature of the level graph at `(r0, 0)` from the initial profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaCurvature {
    pub u_r: f64,
    pub u_rr: f64,
    pub u_t: f64,
    pub u_rt: f64,
    pub u_tt: f64,
    pub f_prime: f64,
    pub f_second: f64,
}

/// `f″ = −(u_rr + 2u_rt f′ + u_tt f′²)/u_t` with `f′ = −u_r/u_t`, using
/// `u_t = Δu₀`, `u_rt = ∂_r Δu₀`, `u_tt = Δ²u₀`.
pub fn f_second_via_formula(profile: &RadialProfile, r0: f64) -> Result<FormulaCurvature> {
    let j = profile.jet(r0);
    let l = profile.laplacian_jet(r0);
    let k = profile.domain.n as f64 - 1.0;
    let u_t = l.v;
    if !(u_t > 0.0) {
        return Err(Error::Inapplicable(format!("u_t = {u_t:e} <= 0 at r = {r0}")));
    }
    let u_rt = l.d1;
    let u_tt = l.d2 + k * l.d1 / r0;
    let f_prime = -j.d1 / u_t;
    let f_second = -(j.d2 + 2.0 * u_rt * f_prime + u_tt * f_prime * f_prime) / u_t;
    Ok(FormulaCurvature {
        u_r: j.d1,
        u_rr: j.d2,
        u_t,
        u_rt,
        u_tt,
        f_prime,
        f_second,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Theorem2Config {
    pub n: usize,
    pub nr: usize,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_every: f64,
    pub fit_window: f64,
}

impl Theorem2Config {
    pub fn new(n: usize) -> Self {
        Theorem2Config {
            n,
            nr: 40_000,
            dt: 1e-5,
            t_final: 0.005,
            snapshot_every: 1e-4,
            fit_window: FIT_WINDOW,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Theorem2Outcome {
    pub big_r: f64,
    pub r_attempts: Vec<RChecks>,
    /// `u₀″(R+½)`.
    pub curvature: f64,
    pub formula: FormulaCurvature,
    /// `|f″_formula + 10 u₀″|`.
    pub identity_error: f64,
    pub graph: LevelGraph,
    /// `|f″_fit − f″_formula| / |f″_formula|`.
    pub fit_relative_gap: f64,
}

impl Theorem2Outcome {
    pub fn pass(&self) -> bool {
        self.curvature >= 0.099
            && self.identity_error < 1e-6
            && self.formula.f_second <= -0.99
            && self.fit_relative_gap <= 0.02
    }

    pub fn key_values(&self) -> Vec<(String, String)> {
        let e = |x: f64| format!("{x:.16e}");
        vec![
            ("R".into(), e(self.big_r)),
            ("u0_second".into(), e(self.curvature)),
            ("u_t".into(), e(self.formula.u_t)),
            ("u_rt".into(), e(self.formula.u_rt)),
            ("u_tt".into(), e(self.formula.u_tt)),
            ("f_prime_formula".into(), e(self.formula.f_prime)),
            ("f_second_formula".into(), e(self.formula.f_second)),
            ("identity_error".into(), e(self.identity_error)),
            ("f_prime_fit".into(), e(self.graph.f_prime)),
            ("f_second_fit".into(), e(self.graph.f_second)),
            ("fit_relative_gap".into(), e(self.fit_relative_gap)),
            ("max_slope_mismatch".into(), e(self.graph.max_slope_mismatch)),
            ("samples".into(), self.graph.samples.len().to_string()),
            ("pass".into(), self.pass().to_string()),
        ]
    }
}

/// Builds the plateau datum, evolves it and compares the curvature of the
/// level graph through `(R+½, 0)` from the formula and from the samples.
pub fn run_theorem2(cfg: &Theorem2Config) -> Result<Theorem2Outcome> {
    if cfg.nr % 2 != 0 {
        return Err(invalid("nr", "must be even so that R+1/2 is a node"));
    }
    let choice = choose_r_thm2(cfg.n)?;
    let u0 = &choice.profile;
    let r0 = choice.big_r + 0.5;
    let count = (cfg.t_final / cfg.snapshot_every).round() as usize;
    let solver = SolverConfig::new(cfg.dt, cfg.nr, 0, cfg.t_final)
        .with_scheme(Scheme::Trapezoidal)
        .with_uniform_snapshots(count);
    let run = evolve_radial(u0, &solver)?;
    let level = run.snapshots[0].1.values[cfg.nr / 2];
    let mut graph = level_graph_with(&run, level, r0, cfg.fit_window)?;
    let formula = f_second_via_formula(u0, r0)?;
    graph.formula_f_second = Some(formula.f_second);
    let curvature = u0.d2(r0);
    Ok(Theorem2Outcome {
        big_r: choice.big_r,
        r_attempts: choice.attempts,
        curvature,
        identity_error: (formula.f_second + 10.0 * curvature).abs(),
        fit_relative_gap: ((graph.f_second - formula.f_second) / formula.f_second).abs(),
        formula,
        graph,
    })
}
