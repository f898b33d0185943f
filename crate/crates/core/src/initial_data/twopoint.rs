//! The weight `g` and the profile `u₀ = 1 − ∫₁ʳ s¹⁻ⁿ g(s) ds`.

use super::plateau::smoothstep;
use super::profile::{AnnulusDomain, RadialProfile};
use crate::error::{invalid, Result};
use crate::jet::Jet;
use crate::quadrature::CumulativeTable;
use std::sync::Arc;

const CELLS: usize = 4096;
const CUTOFF_SHARPNESS: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct GProfile {
    pub profile: RadialProfile,
    pub eps: f64,
    /// Width of the cutoff's transition, found by bisection.
    pub theta: f64,
    /// `∫₁² r¹⁻ⁿ g dr − 1`.
    pub residual: f64,
    table: Arc<CumulativeTable>,
}

fn g_jet(r: f64, eps: f64, theta: f64) -> Jet {
    let t = (Jet::var(r) - (1.0 + eps)).scale(1.0 / theta);
    (1.0 - smoothstep(t, CUTOFF_SHARPNESS)).scale(0.5 / eps)
}

fn weighted(n: usize, eps: f64, theta: f64) -> impl Fn(f64) -> f64 {
    let k = 1.0 - n as f64;
    move |r: f64| r.powf(k) * g_jet(r, eps, theta).v
}

/// `g = χ/(2ε)` with `χ` equal to 1 on `[1, 1+ε]`, decreasing smoothly to 0
/// over `[1+ε, 1+ε+θ]`, and `θ` tuned so that `∫₁² r¹⁻ⁿ g = 1`.
pub fn make_g(eps: f64, n: usize) -> Result<GProfile> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(invalid("eps", format!("must lie in (0, 1/4), got {eps}")));
    }
    if n < 1 {
        return Err(invalid("n", "must be >= 1"));
    }
    let norm = |theta: f64| crate::quadrature::integrate(weighted(n, eps, theta), 1.0, 2.0, CELLS);
    let mut lo = 1e-9;
    let mut hi = 1.0 - 2.0 * eps;
    if norm(lo) > 1.0 || norm(hi) < 1.0 {
        return Err(invalid(
            "eps",
            format!(
                "normalization unreachable: integral ranges over [{}, {}]",
                norm(lo),
                norm(hi)
            ),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if norm(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    let table = Arc::new(CumulativeTable::build(weighted(n, eps, theta), 1.0, 2.0, CELLS));
    let residual = table.total() - 1.0;
    let profile = RadialProfile::analytic(AnnulusDomain::unit(n), format!("g(eps={eps})"), move |r| {
        g_jet(r, eps, theta)
    });
    Ok(GProfile {
        profile,
        eps,
        theta,
        residual,
        table,
    })
}

#[derive(Debug, Clone)]
pub struct TwoPointDatum {
    pub u0: RadialProfile,
    pub g: GProfile,
}

/// `u₀(r) = 1 − ∫₁ʳ s¹⁻ⁿ g(s) ds`, so `u₀' = −r¹⁻ⁿ g` and
/// `Δu₀ = −r¹⁻ⁿ g'`.
pub fn make_u0_twopoint(eps: f64, n: usize) -> Result<TwoPointDatum> {
    let g = make_g(eps, n)?;
    let table = g.table.clone();
    let theta = g.theta;
    let k = 1 - n as i32;
    let u0 = RadialProfile::analytic(AnnulusDomain::unit(n), format!("u0_twopoint(eps={eps})"), move |r| {
        let w = Jet::var(r).powi(k) * g_jet(r, eps, theta);
        Jet::new(1.0 - table.eval(r), -w.v, -w.d1)
    });
    Ok(TwoPointDatum { u0, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::check_admissible;

    #[test]
    fn g_plateau_and_normalization() {
        for n in [1, 2, 3] {
            let g = make_g(0.05, n).unwrap();
            assert_eq!(g.profile.value(1.0), 10.0);
            assert_eq!(g.profile.value(1.04), 10.0);
            assert_eq!(g.profile.value(2.0), 0.0);
            assert!(g.residual.abs() < 1e-10, "n={n}: {}", g.residual);
        }
    }

    #[test]
    fn u0_is_admissible_and_near_three_quarters() {
        let d = make_u0_twopoint(0.05, 2).unwrap();
        let rep = check_admissible(&d.u0);
        assert!(rep.pass, "{rep:?}");
        let mid = d.u0.value(1.025);
        assert!((0.70..=0.80).contains(&mid), "{mid}");
        assert!(d.u0.laplacian(1.03).abs() < 1e-12);
    }
}
