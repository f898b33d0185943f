use crate::error::{invalid, Error, Result};
use crate::geometry::Point;
use crate::initial_data::{make_u0_twopoint, AnnulusDomain};
use crate::solver::{evolve_radial, steady_state, sup_distance, RadialField, Scheme, SolverConfig, SpaceTimeField};

/// Largest level mismatch accepted between the two points.
pub const TOL_LEVEL: f64 = 1e-9;
/// Bisection tolerance on the level value when locating `y(t)`.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointSample {
    pub x: Point,
    pub y: Point,
    pub s: f64,
    pub t: f64,
    pub h: f64,
    /// `|u(x,s) − u(y,t)|`.
    pub level_error: f64,
}

/// `u`, `u_r` and `u_t` of one snapshot as interpolable radial fields.
struct Jets {
    u: RadialField,
    ur: RadialField,
    ut: RadialField,
}

impl Jets {
    fn new(f: &RadialField) -> Self {
        let mk = |values| RadialField {
            domain: f.domain,
            values,
        };
        Jets {
            u: f.clone(),
            ur: mk(f.gradient()),
            ut: mk(f.laplacian()),
        }
    }
}

fn radial_gradient(ur: f64, p: &Point) -> Vec<f64> {
    let r = p.norm();
    p.coords.iter().map(|c| ur * c / r).collect()
}

fn h_value(gx: &[f64], gy: &[f64], x: &Point, y: &Point, utx: f64, uty: f64, s: f64, t: f64) -> f64 {
    let mut dot = 0.0;
    for k in 0..gx.len() {
        dot += (gy[k] - gx[k]) * (y.coords[k] - x.coords[k]);
    }
    dot + (uty - utx) * (t - s)
}

/// `H = (Du(y,t) − Du(x,s))·(y−x) + (u_t(y,t) − u_t(x,s))(t−s)` on a
/// radial run, with `(x, s)` and `(y, t)` taken at snapshots `ks`, `kt`.
/// Gradients come from centred differences, `u_t` from the discrete
/// Laplacian, both interpolated to the points.
pub fn two_point_h(
    field: &SpaceTimeField<RadialField>,
    x: &Point,
    ks: usize,
    y: &Point,
    kt: usize,
    tol_level: f64,
) -> Result<TwoPointSample> {
    if x.frame != y.frame {
        return Err(Error::FrameMismatch);
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    let (s, fs) = &field.snapshots[ks];
    let (t, ft) = &field.snapshots[kt];
    let (jx, jy) = (Jets::new(fs), Jets::new(ft));
    two_point_from_jets(&jx, *s, x, &jy, *t, y, tol_level)
}

fn two_point_from_jets(jx: &Jets, s: f64, x: &Point, jy: &Jets, t: f64, y: &Point, tol_level: f64) -> Result<TwoPointSample> {
    let (rx, ry) = (x.norm(), y.norm());
    let mismatch = (jx.u.eval(rx) - jy.u.eval(ry)).abs();
    if !(mismatch < tol_level) {
        return Err(Error::LevelMismatch {
            mismatch,
            tolerance: tol_level,
        });
    }
    let gx = radial_gradient(jx.ur.eval(rx), x);
    let gy = radial_gradient(jy.ur.eval(ry), y);
    let h = h_value(&gx, &gy, x, y, jx.ut.eval(rx), jy.ut.eval(ry), s, t);
    Ok(TwoPointSample {
        x: x.clone(),
        y: y.clone(),
        s,
        t,
        h,
        level_error: mismatch,
    })
}

/// `r` with `u_∞(r) = c` on the annulus `1 < r < 2`.
pub fn steady_inverse(n: usize, c: f64) -> f64 {
    match n {
        1 => 2.0 - c,
        2 => 2f64.powf(1.0 - c),
        _ => {
            let k = n as f64 - 2.0;
            2.0 / (1.0 + c * (2f64.powf(k) - 1.0)).powf(1.0 / k)
        }
    }
}

/// Bisection for the radius where a decreasing radial snapshot meets `c`.
pub fn level_radius(f: &RadialField, c: f64) -> Result<f64> {
    let (mut lo, mut hi) = (f.domain.r_in, f.domain.r_out);
    let g = |r| f.eval(r) - c;
    if g(lo) < 0.0 || g(hi) > 0.0 {
        return Err(Error::SearchExhausted(format!(
            "level {c} outside the range [{}, {}] of the snapshot",
            f.eval(hi),
            f.eval(lo)
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = g(mid);
        if v.abs() < ROOT_TOL {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy)]
pub struct Section4Config {
    pub eps: f64,
    pub n: usize,
    pub nr: usize,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_every: f64,
    /// Re-evaluate the best sample on a grid refined once in space and time.
    pub refine: bool,
}

impl Section4Config {
    pub fn new(eps: f64, n: usize) -> Self {
        Section4Config {
            eps,
            n,
            nr: 1280,
            dt: 1e-3,
            t_final: 4.0,
            snapshot_every: 0.01,
            refine: true,
        }
    }

    fn solver(&self, nr: usize, dt: f64) -> SolverConfig {
        let count = (self.t_final / self.snapshot_every).round() as usize;
        SolverConfig::new(dt, nr, 0, self.t_final)
            .with_scheme(Scheme::Trapezoidal)
            .with_uniform_snapshots(count)
    }
}

#[derive(Debug, Clone)]
pub struct Section4Outcome {
    pub eps: f64,
    pub x_radius: f64,
    /// `u(x, 0)`.
    pub level: f64,
    /// `u_∞(1+γ) = u(x, 0)`.
    pub gamma: f64,
    /// `(t, y₁(t), H(t))` per snapshot.
    pub trace: Vec<(f64, f64, f64)>,
    pub best: TwoPointSample,
    /// `|y₁(T) − (1+γ)|`.
    pub y_limit_error: f64,
    pub refined_h: Option<f64>,
}

impl Section4Outcome {
    pub fn pass(&self) -> bool {
        self.best.h > 0.0 && self.refined_h.map_or(true, |h| h > 0.0)
    }

    pub fn key_values(&self) -> Vec<(String, String)> {
        let e = |x: f64| format!("{x:.16e}");
        let mut kv = vec![
            ("eps".into(), e(self.eps)),
            ("x".into(), e(self.x_radius)),
            ("level".into(), e(self.level)),
            ("gamma".into(), e(self.gamma)),
            ("best_t".into(), e(self.best.t)),
            ("best_y".into(), e(self.best.y.norm())),
            ("best_h".into(), e(self.best.h)),
            ("best_level_error".into(), e(self.best.level_error)),
            ("y_limit_error".into(), e(self.y_limit_error)),
        ];
        if let Some(h) = self.refined_h {
            kv.push(("refined_h".into(), e(h)));
        }
        kv.push(("pass".into(), self.pass().to_string()));
        kv
    }
}

fn section4_trace(
    run: &SpaceTimeField<RadialField>,
    x: &Point,
    n: usize,
) -> Result<(f64, Vec<(f64, f64, f64)>, Vec<TwoPointSample>)> {
    let j0 = Jets::new(&run.snapshots[0].1);
    let level = j0.u.eval(x.norm());
    let mut trace = Vec::with_capacity(run.len());
    let mut samples = Vec::with_capacity(run.len());
    for (t, f) in &run.snapshots {
        let y1 = level_radius(f, level)?;
        let y = Point::planar([y1, 0.0], n.max(2));
        let y = if n == 1 { Point::full(vec![y1])? } else { y };
        let jt = Jets::new(f);
        let smp = two_point_from_jets(&j0, 0.0, x, &jt, *t, &y, TOL_LEVEL)?;
        trace.push((*t, y1, smp.h));
        samples.push(smp);
    }
    Ok((level, trace, samples))
}

/// Fixes `x = (1+ε/2, 0, …)` at `s = 0`, follows the point `y(t)` on the
/// same ray with `u(y(t), t) = u(x, 0)`, and records `H` along the way.
pub fn run_section4(cfg: &Section4Config) -> Result<Section4Outcome> {
    if !(cfg.eps > 0.0 && cfg.eps < 0.5) {
        return Err(invalid("eps", format!("must lie in (0, 1/2), got {}", cfg.eps)));
    }
    let datum = make_u0_twopoint(cfg.eps, cfg.n)?;
    let xr = 1.0 + cfg.eps / 2.0;
    let x = if cfg.n == 1 {
        Point::full(vec![xr])?
    } else {
        Point::planar([xr, 0.0], cfg.n)
    };
    let run = evolve_radial(&datum.u0, &cfg.solver(cfg.nr, cfg.dt))?;
    let (level, trace, samples) = section4_trace(&run, &x, cfg.n)?;
    let best_k = (0..samples.len())
        .fold(0, |b, k| if samples[k].h > samples[b].h { k } else { b });
    let gamma = steady_inverse(cfg.n, level) - 1.0;
    let y_limit_error = (trace.last().unwrap().1 - (1.0 + gamma)).abs();
    let refined_h = if cfg.refine {
        let fine = evolve_radial(&datum.u0, &cfg.solver(2 * cfg.nr, cfg.dt / 2.0))?;
        let (_, _, s2) = section4_trace(&fine, &x, cfg.n)?;
        Some(s2[best_k].h)
    } else {
        None
    };
    Ok(Section4Outcome {
        eps: cfg.eps,
        x_radius: xr,
        level,
        gamma,
        trace,
        best: samples[best_k].clone(),
        y_limit_error,
        refined_h,
    })
}

/// `(T, sup|u(·,T) − u_∞|)` for the two-point datum at integer times up to
/// `t_max`.
pub fn long_time_distance(eps: f64, n: usize, nr: usize, dt: f64, t_max: usize) -> Result<Vec<(f64, f64)>> {
    let datum = make_u0_twopoint(eps, n)?;
    let cfg = SolverConfig::new(dt, nr, 0, t_max as f64).with_uniform_snapshots(t_max);
    let run = evolve_radial(&datum.u0, &cfg)?;
    let d = AnnulusDomain::unit(n);
    let limit = steady_state(n, d.r_in, d.r_out)?;
    Ok(run
        .snapshots
        .iter()
        .skip(1)
        .map(|(t, f)| (*t, sup_distance(f, &limit)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        assert!((steady_inverse(2, 0.75) - 2f64.powf(0.25)).abs() < 1e-15);
        assert!((steady_inverse(1, 0.25) - 1.75).abs() < 1e-15);
        let u3 = steady_state(3, 1.0, 2.0).unwrap();
        assert!((u3.value(steady_inverse(3, 0.4)) - 0.4).abs() < 1e-14);
    }
}
