//! Admissible initial data on annuli and their validators.

mod admissible;
mod ellipsoidal;
mod field;
mod plateau;
mod profile;
mod twopoint;

pub use admissible::{
    check_admissible, check_admissible_field, AdmissibilityReport, TOL_BC_ANALYTIC, TOL_MONO, TOL_SUB,
};
pub use ellipsoidal::{
    choose_kappa, combine_u0, laplacian_lower_bound_check, make_ramp_a, make_v, make_w, KappaChoice,
    LowerBoundCheck, WConstruction,
};
pub use field::MeridianField;
pub use plateau::{
    check_thm2_profile, choose_r_thm2, make_h, make_u0_thm2, smoothstep, solve_vr, OdeSolveParams,
    PlanarClosedForm, RChecks, RChoice, VrQuadrature, VrSolution, CURVATURE_TOL, H_SHARPNESS,
};
pub use profile::{AnnulusDomain, JetFn, RadialProfile, Samples};
pub use twopoint::{make_g, make_u0_twopoint, GProfile, TwoPointDatum};
