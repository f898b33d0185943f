use super::config::{Scheme, SolverConfig};
use super::SpaceTimeField;
use crate::error::{Error, Result};
use crate::initial_data::{AnnulusDomain, RadialProfile};
use crate::tridiag;

/// Nodal values of a radial function on `nr` uniform cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub domain: AnnulusDomain,
    pub values: Vec<f64>,
}

impl RadialField {
    pub fn from_profile(p: &RadialProfile, nr: usize) -> Self {
        let values = (0..=nr).map(|k| p.value(p.domain.node(k, nr))).collect();
        RadialField {
            domain: p.domain,
            values,
        }
    }

    pub fn nr(&self) -> usize {
        self.values.len() - 1
    }

    pub fn h(&self) -> f64 {
        self.domain.width() / self.nr() as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.domain.node(i, self.nr())
    }

    pub fn operator(&self) -> RadialOperator {
        RadialOperator::new(self.domain, self.nr())
    }

    /// Discrete `u_rr + (n−1)u_r/r` at each node, zero on the boundary.
    pub fn laplacian(&self) -> Vec<f64> {
        let op = self.operator();
        let m = self.nr();
        (0..=m)
            .map(|i| if i == 0 || i == m { 0.0 } else { op.apply(&self.values, i) })
            .collect()
    }

    /// Central-difference `u_r` (one-sided, second order, at the ends).
    pub fn gradient(&self) -> Vec<f64> {
        let u = &self.values;
        let m = self.nr();
        let h = self.h();
        (0..=m)
            .map(|i| {
                if i == 0 {
                    (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
                } else if i == m {
                    (3.0 * u[m] - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * h)
                } else {
                    (u[i + 1] - u[i - 1]) / (2.0 * h)
                }
            })
            .collect()
    }

    /// Piecewise-cubic value at `r` through the four nearest nodes.
    pub fn eval(&self, r: f64) -> f64 {
        let m = self.nr();
        let x = ((r - self.domain.r_in) / self.h()).clamp(0.0, m as f64);
        let k = (x.floor() as usize).min(m - 1);
        let s = x - k as f64;
        let k0 = k.saturating_sub(1).min(m - 3);
        let mut acc = 0.0;
        for a in 0..4 {
            let xa = (k0 + a) as f64 - k as f64;
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    let xb = (k0 + b) as f64 - k as f64;
                    w *= (s - xb) / (xa - xb);
                }
            }
            acc += w * self.values[k0 + a];
        }
        acc
    }

    pub fn to_profile(&self, label: &str) -> Result<RadialProfile> {
        RadialProfile::sampled(self.domain, label, self.values.clone())
    }
}

/// Coefficients of the central radial Laplacian.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    pub lo: Vec<f64>,
    pub mid: f64,
    pub hi: Vec<f64>,
}

impl RadialOperator {
    pub fn new(domain: AnnulusDomain, nr: usize) -> Self {
        let h = domain.width() / nr as f64;
        let k = domain.n as f64 - 1.0;
        let lo = (0..=nr)
            .map(|i| 1.0 / (h * h) - k / (2.0 * h * domain.node(i, nr)))
            .collect();
        let hi = (0..=nr)
            .map(|i| 1.0 / (h * h) + k / (2.0 * h * domain.node(i, nr)))
            .collect();
        RadialOperator {
            lo,
            mid: -2.0 / (h * h),
            hi,
        }
    }

    #[inline]
    pub fn apply(&self, u: &[f64], i: usize) -> f64 {
        self.lo[i] * u[i - 1] + self.mid * u[i] + self.hi[i] * u[i + 1]
    }
}

pub(crate) struct RadialStepper {
    op: RadialOperator,
    m: usize,
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    rhs: Vec<f64>,
    scratch: Vec<f64>,
}

impl RadialStepper {
    pub(crate) fn new(domain: AnnulusDomain, nr: usize) -> Self {
        let m = nr - 1;
        RadialStepper {
            op: RadialOperator::new(domain, nr),
            m,
            sub: vec![0.0; m],
            diag: vec![0.0; m],
            sup: vec![0.0; m],
            rhs: vec![0.0; m],
            scratch: vec![0.0; m],
        }
    }

    /// `(I − a L) u_new = (I + b L) u` with Dirichlet data 1 and 0.
    pub(crate) fn theta_step(&mut self, u: &mut [f64], a: f64, b: f64) -> Result<()> {
        let m = self.m;
        for row in 0..m {
            let i = row + 1;
            self.sub[row] = -a * self.op.lo[i];
            self.diag[row] = 1.0 - a * self.op.mid;
            self.sup[row] = -a * self.op.hi[i];
            self.rhs[row] = u[i] + if b != 0.0 { b * self.op.apply(u, i) } else { 0.0 };
        }
        // Boundary values at the new level: 1 inside, 0 outside.
        self.rhs[0] += a * self.op.lo[1];
        tridiag::solve_in_place(&self.sub, &self.diag, &self.sup, &mut self.rhs, &mut self.scratch)?;
        u[0] = 1.0;
        u[1..=m].copy_from_slice(&self.rhs);
        u[m + 1] = 0.0;
        Ok(())
    }
}

/// Evolves `u_t = u_rr + (n−1)u_r/r` with `u = 1` on the inner and `u = 0`
/// on the outer circle.
pub fn evolve_radial(u0: &RadialProfile, cfg: &SolverConfig) -> Result<SpaceTimeField<RadialField>> {
    cfg.validate()?;
    let field = RadialField::from_profile(u0, cfg.nr);
    evolve_radial_field(field, cfg)
}

pub fn evolve_radial_field(
    initial: RadialField,
    cfg: &SolverConfig,
) -> Result<SpaceTimeField<RadialField>> {
    cfg.validate()?;
    let domain = initial.domain;
    let nr = initial.nr();
    let mut stepper = RadialStepper::new(domain, nr);
    let mut u = initial.values.clone();
    let mut snaps = vec![(0.0, initial)];
    let mut t = 0.0;
    for (k, (dt, record)) in cfg.steps().into_iter().enumerate() {
        if cfg.scheme == Scheme::BackwardStep {
            stepper.theta_step(&mut u, dt, 0.0)?;
        } else if k < cfg.startup_steps {
            stepper.theta_step(&mut u, 0.5 * dt, 0.0)?;
            stepper.theta_step(&mut u, 0.5 * dt, 0.0)?;
        } else {
            stepper.theta_step(&mut u, 0.5 * dt, 0.5 * dt)?;
        }
        t += dt;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Unstable { t });
        }
        if let Some(target) = record {
            t = target;
            snaps.push((
                target,
                RadialField {
                    domain,
                    values: u.clone(),
                },
            ));
        }
    }
    Ok(SpaceTimeField { domain, snapshots: snaps })
}
