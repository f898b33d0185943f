use super::field::MeridianField;
use super::profile::RadialProfile;
use crate::par;

pub const TOL_BC_ANALYTIC: f64 = 1e-10;
pub const TOL_SUB: f64 = 1e-9;
pub const TOL_MONO: f64 = 1e-10;

/// Nodes used to validate closed-form profiles.
pub const ANALYTIC_CELLS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub min_laplacian: f64,
    pub laplacian_not_identically_zero: bool,
    /// Largest value of `x·∇u₀` over the grid.
    pub max_radial_derivative_of_position: f64,
    pub inner_boundary_error: f64,
    pub outer_boundary_error: f64,
    pub pass: bool,
}

impl AdmissibilityReport {
    fn assemble(lap_min: f64, lap_max: f64, mono: f64, inner: f64, outer: f64, tol_bc: f64) -> Self {
        let nonzero = lap_max > TOL_SUB;
        let pass = inner < tol_bc
            && outer < tol_bc
            && lap_min >= -TOL_SUB
            && nonzero
            && mono <= TOL_MONO;
        AdmissibilityReport {
            min_laplacian: lap_min,
            laplacian_not_identically_zero: nonzero,
            max_radial_derivative_of_position: mono,
            inner_boundary_error: inner,
            outer_boundary_error: outer,
            pass,
        }
    }

    pub fn key_values(&self) -> Vec<(String, String)> {
        vec![
            ("min_laplacian".into(), format!("{:.16e}", self.min_laplacian)),
            (
                "laplacian_not_identically_zero".into(),
                self.laplacian_not_identically_zero.to_string(),
            ),
            (
                "max_radial_derivative_of_position".into(),
                format!("{:.16e}", self.max_radial_derivative_of_position),
            ),
            ("inner_boundary_error".into(), format!("{:.16e}", self.inner_boundary_error)),
            ("outer_boundary_error".into(), format!("{:.16e}", self.outer_boundary_error)),
            ("pass".into(), self.pass.to_string()),
        ]
    }
}

/// Validates the admissibility conditions for a radial profile at its grid
/// nodes (or 4097 uniform nodes for closed-form data).
pub fn check_admissible(u0: &RadialProfile) -> AdmissibilityReport {
    let nodes = u0.nodes(ANALYTIC_CELLS);
    let tol_bc = match u0.grid_spacing() {
        Some(h) => 2.0 * h * h,
        None => TOL_BC_ANALYTIC,
    };
    let m = nodes.len() - 1;
    let (mut lap_min, mut lap_max, mut mono) = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (k, &r) in nodes.iter().enumerate() {
        let j = u0.jet(r);
        mono = mono.max(r * j.d1);
        if k > 0 && k < m {
            let l = u0.laplacian(r);
            lap_min = lap_min.min(l);
            lap_max = lap_max.max(l);
        }
    }
    let inner = (u0.value(u0.domain.r_in) - 1.0).abs();
    let outer = u0.value(u0.domain.r_out).abs();
    AdmissibilityReport::assemble(lap_min, lap_max, mono, inner, outer, tol_bc)
}

/// The same conditions for a meridian field, with the discrete Laplacian of
/// the solver's stencil and `x·∇u = r u_r` at interior nodes.
pub fn check_admissible_field(u0: &MeridianField) -> AdmissibilityReport {
    let st = u0.stencil();
    let h = st.h;
    let w = u0.ntheta + 1;
    let rows = par::map_range(u0.nr - 1, |k| {
        let i = k + 1;
        let mut acc = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for j in 0..w {
            let l = st.laplacian(&u0.values, i, j);
            acc.0 = acc.0.min(l);
            acc.1 = acc.1.max(l);
            acc.2 = acc.2.max(st.radial_derivative_of_position(&u0.values, i, j));
        }
        acc
    });
    let (lap_min, lap_max, mono) = rows.into_iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        |a, b| (a.0.min(b.0), a.1.max(b.1), a.2.max(b.2)),
    );
    let inner = (0..w).map(|j| (u0.at(0, j) - 1.0).abs()).fold(0.0, f64::max);
    let outer = (0..w).map(|j| u0.at(u0.nr, j).abs()).fold(0.0, f64::max);
    AdmissibilityReport::assemble(lap_min, lap_max, mono, inner, outer, 2.0 * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::AnnulusDomain;
    use crate::jet::Jet;

    #[test]
    fn linear_profile_is_not_admissible() {
        let p = RadialProfile::analytic(AnnulusDomain::unit(1), "2-r", |r| 2.0 - Jet::var(r));
        let rep = check_admissible(&p);
        assert_eq!(rep.min_laplacian, 0.0);
        assert!(!rep.laplacian_not_identically_zero);
        assert!(!rep.pass);
    }

    #[test]
    fn square_profile_depends_on_dimension() {
        let sq = |n| {
            RadialProfile::analytic(AnnulusDomain::unit(n), "(2-r)^2", |r| (2.0 - Jet::var(r)).powi(2))
        };
        let one = check_admissible(&sq(1));
        assert!(one.pass, "{one:?}");
        let three = check_admissible(&sq(3));
        assert!(!three.pass);
        assert!(three.min_laplacian < -1.9);
        assert!(three.max_radial_derivative_of_position <= 0.0);
    }
}
