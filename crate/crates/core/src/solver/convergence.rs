use super::config::SolverConfig;
use super::meridian::evolve_meridian;
use super::oracles::{discrete_steady_state, series_oracle_1d, steady_state};
use super::radial::{evolve_radial, evolve_radial_field, RadialField};
use crate::error::{invalid, Result};
use crate::initial_data::{AnnulusDomain, MeridianField, RadialProfile};
use crate::jet::Jet;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceFixture {
    /// `n = 1`, `u₀ = (1−x) + sin(πx)` against the series solution at `t`.
    Sine { t: f64, dt: f64 },
    /// The discrete steady state of dimension `n`, evolved to `t`.
    Steady { n: usize, t: f64, dt: f64 },
    /// A smooth radial `n = 2` datum on the meridian grid against a radial
    /// reference eight times finer.
    MeridianRadial { t: f64, dt: f64, ntheta: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub grids: Vec<usize>,
    pub errors: Vec<f64>,
    /// `log₂(e_h / e_{h/2})` for each successive pair.
    pub orders: Vec<f64>,
    /// Order of the last pair; `None` when errors are at rounding level.
    pub observed_order: Option<f64>,
    pub monotone: bool,
}

const ROUNDING: f64 = 1e-12;

fn smooth_planar_datum() -> RadialProfile {
    let steady = steady_state(2, 1.0, 2.0).unwrap();
    RadialProfile::analytic(AnnulusDomain::unit(2), "u_inf + 0.3 sin", move |r| {
        steady.jet(r) + (Jet::var(r) - 1.0).scale(PI).sin().scale(0.3)
    })
}

fn fixture_error(fixture: ConvergenceFixture, nr: usize, finest: usize) -> Result<f64> {
    match fixture {
        ConvergenceFixture::Sine { t, dt } => {
            let cfg = SolverConfig::new(dt, nr, 0, t);
            let sol = evolve_radial(&series_oracle_1d(&[1.0], 0.0), &cfg)?;
            let exact = series_oracle_1d(&[1.0], t);
            let (_, last) = sol.snapshots.last().unwrap();
            Ok((0..=nr)
                .map(|i| (last.values[i] - exact.value(last.radius(i))).abs())
                .fold(0.0, f64::max))
        }
        ConvergenceFixture::Steady { n, t, dt } => {
            let start = discrete_steady_state(AnnulusDomain::new(n, 1.0, 2.0)?, nr)?;
            let cfg = SolverConfig::new(dt, nr, 0, t);
            let sol = evolve_radial_field(start.clone(), &cfg)?;
            let (_, last) = sol.snapshots.last().unwrap();
            Ok(last
                .values
                .iter()
                .zip(&start.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max))
        }
        ConvergenceFixture::MeridianRadial { t, dt, ntheta } => {
            let datum = smooth_planar_datum();
            let mf = MeridianField::from_radial(&datum, nr, ntheta)?;
            let cfg = SolverConfig::new(dt, nr, ntheta, t);
            let sol = evolve_meridian(&mf, &cfg)?;
            let fine = 8 * finest;
            let reference = evolve_radial(&datum, &SolverConfig::new(dt, fine, 0, t))?;
            let (_, rf) = reference.snapshots.last().unwrap();
            let (_, last) = sol.snapshots.last().unwrap();
            let stride = fine / nr;
            let mut err: f64 = 0.0;
            for i in 0..=nr {
                for j in 0..=ntheta {
                    err = err.max((last.at(i, j) - rf.values[i * stride]).abs());
                }
            }
            Ok(err)
        }
    }
}

/// Sup-norm errors on a sequence of successively halved grids and the
/// observed order between neighbours.
pub fn convergence_study(fixture: ConvergenceFixture, grids: &[usize]) -> Result<ConvergenceReport> {
    if grids.len() < 2 {
        return Err(invalid("grids", "need at least two grids"));
    }
    let finest = *grids.iter().max().unwrap();
    if let ConvergenceFixture::MeridianRadial { .. } = fixture {
        if grids.iter().any(|&g| (8 * finest) % g != 0) {
            return Err(invalid("grids", "grids must divide the reference grid"));
        }
    }
    let errors = grids
        .iter()
        .map(|&g| fixture_error(fixture, g, finest))
        .collect::<Result<Vec<_>>>()?;
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let at_rounding = errors.iter().all(|&e| e < ROUNDING);
    let monotone = at_rounding || errors.windows(2).all(|w| w[1] < w[0]);
    Ok(ConvergenceReport {
        grids: grids.to_vec(),
        errors,
        observed_order: if at_rounding { None } else { orders.last().copied() },
        orders,
        monotone,
    })
}

/// Sup-norm distance between the solution on `field` and a radial profile.
pub fn sup_distance(field: &RadialField, profile: &RadialProfile) -> f64 {
    (0..=field.nr())
        .map(|i| (field.values[i] - profile.value(field.radius(i))).abs())
        .fold(0.0, f64::max)
}
