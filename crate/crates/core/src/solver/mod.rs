//! Finite-difference evolution of the heat equation with Dirichlet data 1
//! (inner circle) and 0 (outer circle).

mod config;
mod convergence;
mod meridian;
mod oracles;
mod radial;

pub use config::{Scheme, SolverConfig};
pub use convergence::{convergence_study, sup_distance, ConvergenceFixture, ConvergenceReport};
pub use meridian::{default_meridian_dt, evolve_meridian};
pub use oracles::{discrete_steady_state, series_oracle_1d, steady_state};
pub use radial::{evolve_radial, evolve_radial_field, RadialField, RadialOperator};

use crate::initial_data::{AnnulusDomain, MeridianField};

/// Time-stamped snapshots, starting with the initial datum at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField<F> {
    pub domain: AnnulusDomain,
    pub snapshots: Vec<(f64, F)>,
}

impl<F> SpaceTimeField<F> {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.0).collect()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn last(&self) -> &(f64, F) {
        self.snapshots.last().expect("a space-time field always holds t = 0")
    }
}

impl SpaceTimeField<RadialField> {
    /// `u_t = Δu` from the discrete operator applied to snapshot `k`.
    pub fn u_t(&self, k: usize) -> Vec<f64> {
        self.snapshots[k].1.laplacian()
    }
}

impl SpaceTimeField<MeridianField> {
    pub fn u_t(&self, k: usize) -> Vec<f64> {
        self.snapshots[k].1.laplacian_nodes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::RadialProfile;

    #[test]
    fn sine_fixture_is_second_order() {
        let rep = convergence_study(ConvergenceFixture::Sine { t: 0.1, dt: 1e-4 }, &[32, 64, 128]).unwrap();
        for o in &rep.orders {
            assert!((1.8..=2.2).contains(o), "{rep:?}");
        }
    }

    #[test]
    fn linear_steady_state_does_not_move() {
        let rep = convergence_study(ConvergenceFixture::Steady { n: 1, t: 0.05, dt: 0.01 }, &[16, 32]).unwrap();
        assert!(rep.observed_order.is_none(), "{rep:?}");
    }

    #[test]
    fn meridian_reduces_to_radial_on_radial_data() {
        let p = steady_state(2, 1.0, 2.0).unwrap();
        let bump = RadialProfile::analytic(p.domain, "bump", move |r| {
            p.jet(r) + (crate::jet::Jet::var(r) - 1.0).scale(std::f64::consts::PI).sin().scale(0.2)
        });
        let cfg = SolverConfig::new(1.0 / 32.0, 32, 16, 0.25);
        let mf = MeridianField::from_radial(&bump, 32, 16).unwrap();
        let m = evolve_meridian(&mf, &cfg).unwrap();
        let r = evolve_radial(&bump, &cfg).unwrap();
        let (_, a) = m.last();
        let (_, b) = r.last();
        for i in 0..=32 {
            for j in 0..=16 {
                assert!((a.at(i, j) - b.values[i]).abs() < 1e-12);
            }
        }
    }
}
