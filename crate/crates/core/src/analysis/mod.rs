//! Checks that turn solver output into statements about level sets.

mod decay;
mod level_graph;
mod monitor;
mod superlevel;
mod theorem1;
mod two_point;

pub use decay::{
    decay_lattice, decay_preconditions, decay_sigma, decay_suite, radial_decay_check, DecayOutcome, DecaySubject,
    DecaySuiteReport, DECAY_SLACK,
};
pub use level_graph::{
    f_second_via_formula, level_graph, level_graph_with, polyfit, run_theorem2, FormulaCurvature, LevelGraph, Theorem2Config,
    Theorem2Outcome, FIT_WINDOW,
};
pub use monitor::{
    monitor_proposition, monitor_proposition_meridian, MonitorReport, SnapshotExtrema, Violation, ViolationKind,
    MONITOR_TOL, RANGE_SLACK, STATIONARY_TOL,
};
pub use superlevel::{superlevel_membership, witness_from_scan, ConvexityWitness, Superlevel, REVALIDATE_TOL};
pub use theorem1::{
    default_thm1_snapshots, run_theorem1, superposition_error, SnapshotScan, Theorem1Config, Theorem1Outcome,
    Theorem1State, Theorem1Variant, BUDGET_FACTOR, V_RADIUS, W_RADIUS,
};
pub use two_point::{
    level_radius, long_time_distance, run_section4, steady_inverse, two_point_h, Section4Config, Section4Outcome,
    TwoPointSample, ROOT_TOL, TOL_LEVEL,
};

/// Outcome of a verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inapplicable => 3,
        }
    }
}
