use crate::initial_data::MeridianField;
use crate::par;
use crate::solver::{RadialField, SpaceTimeField};

pub const RANGE_SLACK: f64 = 1e-9;
pub const MONITOR_TOL: f64 = 1e-8;
/// Largest `|u_t|` for which a run counts as stationary.
pub const STATIONARY_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotExtrema {
    pub t: f64,
    pub min_u: f64,
    pub max_u: f64,
    pub min_u_t: f64,
    pub max_abs_u_t: f64,
    /// Largest `x·∇u` over interior nodes.
    pub max_x_grad: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Range,
    TimeDerivative,
    RadialDerivative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub kind: ViolationKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorReport {
    pub snapshots: Vec<SnapshotExtrema>,
    pub violations: Vec<Violation>,
    /// `u_t` stays within [`STATIONARY_TOL`] of zero at every `t > 0`. Sign
    /// checks on `u_t` are then not reported.
    pub stationary: bool,
}

impl MonitorReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn assemble(snapshots: Vec<SnapshotExtrema>) -> Self {
        let later = || snapshots.iter().filter(|s| s.t > 0.0);
        let stationary = later().all(|s| s.max_abs_u_t <= STATIONARY_TOL);
        let mut violations = Vec::new();
        for s in later() {
            if s.min_u <= -RANGE_SLACK {
                violations.push(Violation { t: s.t, kind: ViolationKind::Range, value: s.min_u });
            }
            if s.max_u >= 1.0 + RANGE_SLACK {
                violations.push(Violation { t: s.t, kind: ViolationKind::Range, value: s.max_u });
            }
            if !stationary && s.min_u_t < -MONITOR_TOL {
                violations.push(Violation {
                    t: s.t,
                    kind: ViolationKind::TimeDerivative,
                    value: s.min_u_t,
                });
            }
            if s.max_x_grad > MONITOR_TOL {
                violations.push(Violation {
                    t: s.t,
                    kind: ViolationKind::RadialDerivative,
                    value: s.max_x_grad,
                });
            }
        }
        MonitorReport {
            snapshots,
            violations,
            stationary,
        }
    }
}

fn radial_extrema(t: f64, f: &RadialField) -> SnapshotExtrema {
    let lap = f.laplacian();
    let m = f.nr();
    let mut e = SnapshotExtrema {
        t,
        min_u: f64::INFINITY,
        max_u: f64::NEG_INFINITY,
        min_u_t: f64::INFINITY,
        max_abs_u_t: 0.0,
        max_x_grad: f64::NEG_INFINITY,
    };
    let h = f.h();
    for i in 1..m {
        let u = f.values[i];
        e.min_u = e.min_u.min(u);
        e.max_u = e.max_u.max(u);
        e.min_u_t = e.min_u_t.min(lap[i]);
        e.max_abs_u_t = e.max_abs_u_t.max(lap[i].abs());
        let ur = (f.values[i + 1] - f.values[i - 1]) / (2.0 * h);
        e.max_x_grad = e.max_x_grad.max(f.radius(i) * ur);
    }
    e
}

fn meridian_extrema(t: f64, f: &MeridianField) -> SnapshotExtrema {
    let st = f.stencil();
    let w = f.ntheta + 1;
    let rows = par::map_range(f.nr - 1, |k| {
        let i = k + 1;
        let mut e = SnapshotExtrema {
            t,
            min_u: f64::INFINITY,
            max_u: f64::NEG_INFINITY,
            min_u_t: f64::INFINITY,
            max_abs_u_t: 0.0,
            max_x_grad: f64::NEG_INFINITY,
        };
        for j in 0..w {
            let u = f.at(i, j);
            let l = st.laplacian(&f.values, i, j);
            e.min_u = e.min_u.min(u);
            e.max_u = e.max_u.max(u);
            e.min_u_t = e.min_u_t.min(l);
            e.max_abs_u_t = e.max_abs_u_t.max(l.abs());
            e.max_x_grad = e.max_x_grad.max(st.radial_derivative_of_position(&f.values, i, j));
        }
        e
    });
    rows.into_iter()
        .reduce(|a, b| SnapshotExtrema {
            t,
            min_u: a.min_u.min(b.min_u),
            max_u: a.max_u.max(b.max_u),
            min_u_t: a.min_u_t.min(b.min_u_t),
            max_abs_u_t: a.max_abs_u_t.max(b.max_abs_u_t),
            max_x_grad: a.max_x_grad.max(b.max_x_grad),
        })
        .expect("interior rows")
}

/// Per-snapshot extrema of `u`, `u_t = Δu` and `x·∇u` over interior nodes,
/// with every departure from `0 < u < 1`, `u_t ≥ 0`, `x·∇u ≤ 0` at `t > 0`.
pub fn monitor_proposition(field: &SpaceTimeField<RadialField>) -> MonitorReport {
    MonitorReport::assemble(field.snapshots.iter().map(|(t, f)| radial_extrema(*t, f)).collect())
}

pub fn monitor_proposition_meridian(field: &SpaceTimeField<MeridianField>) -> MonitorReport {
    MonitorReport::assemble(field.snapshots.iter().map(|(t, f)| meridian_extrema(*t, f)).collect())
}
