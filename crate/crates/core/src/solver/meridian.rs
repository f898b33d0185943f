use super::config::{Scheme, SolverConfig};
use super::SpaceTimeField;
use crate::error::{Error, Result};
use crate::initial_data::MeridianField;
use crate::par;
use crate::stencil::PolarStencil;
use crate::tridiag;

/// `out = (I − a L_r)⁻¹ (I + b L_θ) u`, one tridiagonal solve per angle.
fn sweep_r(st: &PolarStencil, u: &[f64], out: &mut [f64], a: f64, b: f64) -> Result<()> {
    let w = st.ntheta + 1;
    let m = st.nr - 1;
    let sub: Vec<f64> = (1..st.nr).map(|i| -a * st.rad_lo[i]).collect();
    let diag = vec![1.0 - a * st.rad_mid; m];
    let sup: Vec<f64> = (1..st.nr).map(|i| -a * st.rad_hi[i]).collect();
    let inner_bc = a * st.rad_lo[1];
    let columns = par::map_range(w, |j| -> Result<Vec<f64>> {
        let mut rhs: Vec<f64> = (1..st.nr)
            .map(|i| {
                let v = u[i * w + j];
                if b != 0.0 {
                    v + b * st.apply_theta(u, i, j)
                } else {
                    v
                }
            })
            .collect();
        rhs[0] += inner_bc;
        let mut scratch = vec![0.0; m];
        tridiag::solve_in_place(&sub, &diag, &sup, &mut rhs, &mut scratch)?;
        Ok(rhs)
    });
    out[..w].fill(1.0);
    out[st.nr * w..].fill(0.0);
    for (j, col) in columns.into_iter().enumerate() {
        for (k, v) in col?.into_iter().enumerate() {
            out[(k + 1) * w + j] = v;
        }
    }
    Ok(())
}

/// `out = (I − a L_θ)⁻¹ (I + b L_r) u`, one tridiagonal solve per radius.
fn sweep_theta(st: &PolarStencil, u: &[f64], out: &mut [f64], a: f64, b: f64) -> Result<()> {
    let w = st.ntheta + 1;
    let failure = std::sync::Mutex::new(None);
    par::for_each_chunk_mut(out, w, |i, row| {
        if i == 0 {
            row.fill(1.0);
            return;
        }
        if i == st.nr {
            row.fill(0.0);
            return;
        }
        let r = st.radius(i);
        let g = a / (r * r);
        let mut sub = vec![0.0; w];
        let mut diag = vec![0.0; w];
        let mut sup = vec![0.0; w];
        for j in 0..w {
            sub[j] = -g * st.ang_lo[j];
            sup[j] = -g * st.ang_hi[j];
            diag[j] = 1.0 + g * (st.ang_lo[j] + st.ang_hi[j]);
            let v = u[i * w + j];
            row[j] = if b != 0.0 { v + b * st.apply_r(u, i, j) } else { v };
        }
        let mut scratch = vec![0.0; w];
        if let Err(e) = tridiag::solve_in_place(&sub, &diag, &sup, row, &mut scratch) {
            *failure.lock().unwrap() = Some(e);
        }
    });
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// One time step of the meridian solver, in place.
pub(crate) struct MeridianStepper {
    pub(crate) stencil: PolarStencil,
    buf: Vec<f64>,
}

impl MeridianStepper {
    pub(crate) fn new(stencil: PolarStencil) -> Self {
        let len = (stencil.nr + 1) * (stencil.ntheta + 1);
        MeridianStepper {
            stencil,
            buf: vec![0.0; len],
        }
    }

    pub(crate) fn peaceman_rachford(&mut self, u: &mut [f64], dt: f64) -> Result<()> {
        let f = 0.5 * dt;
        sweep_r(&self.stencil, u, &mut self.buf, f, f)?;
        sweep_theta(&self.stencil, &self.buf, u, f, f)
    }

    pub(crate) fn backward(&mut self, u: &mut [f64], dt: f64) -> Result<()> {
        sweep_r(&self.stencil, u, &mut self.buf, dt, 0.0)?;
        sweep_theta(&self.stencil, &self.buf, u, dt, 0.0)
    }

    pub(crate) fn step(&mut self, u: &mut [f64], dt: f64, scheme: Scheme, startup: bool) -> Result<()> {
        match (scheme, startup) {
            (Scheme::BackwardStep, _) => self.backward(u, dt),
            (Scheme::Trapezoidal, true) => {
                self.backward(u, 0.5 * dt)?;
                self.backward(u, 0.5 * dt)
            }
            (Scheme::Trapezoidal, false) => self.peaceman_rachford(u, dt),
        }
    }
}

/// Evolves an axisymmetric field by alternating-direction implicit steps on
/// its polar meridian grid, with Dirichlet data 1 and 0 on the two circles.
pub fn evolve_meridian(u0: &MeridianField, cfg: &SolverConfig) -> Result<SpaceTimeField<MeridianField>> {
    cfg.validate()?;
    if cfg.nr != u0.nr || cfg.ntheta != u0.ntheta {
        return Err(Error::DimensionMismatch {
            expected: (cfg.nr + 1) * (cfg.ntheta + 1),
            got: u0.values.len(),
        });
    }
    let mut stepper = MeridianStepper::new(u0.stencil());
    let mut u = u0.values.clone();
    let mut snaps = vec![(0.0, u0.clone())];
    let mut t = 0.0;
    for (k, (dt, record)) in cfg.steps().into_iter().enumerate() {
        stepper.step(&mut u, dt, cfg.scheme, k < cfg.startup_steps)?;
        t += dt;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Unstable { t });
        }
        if let Some(target) = record {
            t = target;
            snaps.push((target, MeridianField::new(u0.domain, u0.nr, u0.ntheta, u.clone())?));
        }
    }
    Ok(SpaceTimeField {
        domain: u0.domain,
        snapshots: snaps,
    })
}

/// The default meridian time step `min(h, r_in·dθ)`.
pub fn default_meridian_dt(field: &MeridianField) -> f64 {
    field.h().min(field.domain.r_in * field.dtheta())
}
