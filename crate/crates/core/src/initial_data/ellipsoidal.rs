//! Radial bumps `V_ρ`, the ramp `a`, and the ellipsoidal deformation `W`.

use super::admissible::{check_admissible_field, AdmissibilityReport};
use super::field::MeridianField;
use super::profile::{AnnulusDomain, RadialProfile};
use crate::error::{invalid, Error, Result};
use crate::geometry::EllipsoidSpec;
use crate::jet::Jet;
use crate::quadrature::CumulativeTable;
use std::sync::Arc;

/// Exponents below this are treated as exact zeros.
const EXP_FLOOR: f64 = -700.0;

fn v_jet(n: usize, rho: f64, r: f64) -> Jet {
    if r >= rho {
        return Jet::ZERO;
    }
    let nf = n as f64;
    let e = nf * (Jet::var(r) - rho).recip() - nf / (1.0 - rho);
    if e.v < EXP_FLOOR {
        Jet::ZERO
    } else {
        e.exp()
    }
}

/// `V_ρ(r) = exp(n/(r−ρ) − n/(1−ρ))` for `r < ρ`, zero beyond.
pub fn make_v(n: usize, rho: f64) -> Result<RadialProfile> {
    if n < 2 {
        return Err(invalid("n", "V_rho needs n >= 2"));
    }
    if !(rho > 1.0 && rho <= 1.5) {
        return Err(invalid("rho", format!("must lie in (1, 3/2], got {rho}")));
    }
    Ok(RadialProfile::analytic(
        AnnulusDomain::unit(n),
        format!("V_{rho}"),
        move |r| v_jet(n, rho, r),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundCheck {
    pub pass: bool,
    /// Smallest `ΔV − n V/(4r(r−ρ)⁴)` over the samples.
    pub worst_margin: f64,
    /// Smallest `ΔV / (n V/(4r(r−ρ)⁴))` where the bound is positive.
    pub worst_ratio: f64,
}

/// Checks `ΔV ≥ n V/(4r(r−ρ)⁴) − 1e−9` on `samples` equally spaced radii.
pub fn laplacian_lower_bound_check(v: &RadialProfile, n: usize, rho: f64, samples: usize) -> LowerBoundCheck {
    let nf = n as f64;
    let mut worst_margin = f64::INFINITY;
    let mut worst_ratio = f64::INFINITY;
    for k in 0..samples {
        let r = 1.0 + k as f64 / (samples - 1) as f64;
        let lap = v.laplacian(r);
        let bound = if r < rho {
            nf * v.value(r) / (4.0 * r * (r - rho).powi(4))
        } else {
            0.0
        };
        worst_margin = worst_margin.min(lap - bound);
        if bound > 0.0 {
            worst_ratio = worst_ratio.min(lap / bound);
        }
    }
    LowerBoundCheck {
        pass: worst_margin >= -1e-9,
        worst_margin,
        worst_ratio,
    }
}

/// The smooth ramp `a` on `[1, 2]`: zero up to `r0`, one from `r1`, and the
/// normalized integral of `exp(−1/((s−r0)(r1−s)))` in between.
pub fn make_ramp_a(r0: f64, r1: f64) -> Result<RadialProfile> {
    if !(r0 > 1.0 && r0 < r1 && r1 <= 1.5) {
        return Err(invalid("r0,r1", format!("need 1 < r0 < r1 <= 3/2, got ({r0}, {r1})")));
    }
    let bump = move |s: f64| {
        if s <= r0 || s >= r1 {
            return Jet::ZERO;
        }
        let q = (Jet::var(s) - r0) * (r1 - Jet::var(s));
        let e = -q.recip();
        if e.v < EXP_FLOOR {
            Jet::ZERO
        } else {
            e.exp()
        }
    };
    let table = Arc::new(CumulativeTable::build(|s| bump(s).v, r0, r1, 4096));
    let total = table.total();
    Ok(RadialProfile::analytic(AnnulusDomain::unit(1), "a", move |r| {
        if r <= r0 {
            Jet::ZERO
        } else if r >= r1 {
            Jet::constant(1.0)
        } else {
            let b = bump(r);
            Jet::new(table.eval(r) / total, b.v / total, b.d1 / total)
        }
    }))
}

/// The deformation `W(y) = V_{r1}(Ψ⁻¹(y))`, `Ψ(x) = (x₁/b(|x|), x₂, …)`,
/// `b = 1 − κa`. Level sets of `W` outside `r0` are the ellipsoids
/// `b(R)²x₁² + x₂² + ⋯ = R²`.
#[derive(Debug, Clone)]
pub struct WConstruction {
    pub n: usize,
    pub r0: f64,
    pub r1: f64,
    pub kappa: f64,
    pub a: RadialProfile,
    pub v: RadialProfile,
}

impl WConstruction {
    pub fn new(n: usize, r0: f64, r1: f64, kappa: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", "W needs n >= 2"));
        }
        let a = make_ramp_a(r0, r1)?;
        if !(kappa >= 0.0 && kappa < 1.0 - r1 / 2.0) {
            return Err(invalid(
                "kappa",
                format!("need 0 <= kappa < 1 - r1/2 = {}, got {kappa}", 1.0 - r1 / 2.0),
            ));
        }
        let v = make_v(n, r1)?;
        Ok(WConstruction {
            n,
            r0,
            r1,
            kappa,
            a,
            v,
        })
    }

    pub fn b(&self, r: f64) -> f64 {
        1.0 - self.kappa * self.a.value(r)
    }

    pub fn b_profile(&self) -> RadialProfile {
        let a = self.a.clone();
        let kappa = self.kappa;
        RadialProfile::analytic(AnnulusDomain::unit(self.n), "b", move |r| 1.0 - a.jet(r).scale(kappa))
    }

    pub fn ellipsoid(&self, radius: f64) -> Result<EllipsoidSpec> {
        EllipsoidSpec::new(self.b(radius), radius, self.n)
    }

    /// `|Ψ⁻¹(y)|` for the meridian point `(z, ρ)`, by bisection on
    /// `r² − b(r)²z² − ρ²`, which is increasing in `r`.
    pub fn preimage_radius(&self, z: f64, rho: f64) -> f64 {
        let norm = z.hypot(rho);
        if norm <= self.r0 || self.kappa == 0.0 {
            return norm;
        }
        let bmin = 1.0 - self.kappa;
        let mut lo = (rho * rho + bmin * bmin * z * z).sqrt();
        let mut hi = norm;
        if lo >= self.r1 {
            return lo;
        }
        let f = |r: f64| {
            let b = self.b(r);
            r * r - b * b * z * z - rho * rho
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn eval(&self, z: f64, rho: f64) -> f64 {
        let r = self.preimage_radius(z, rho);
        if r >= self.r1 {
            0.0
        } else {
            self.v.value(r)
        }
    }

    pub fn field(&self, nr: usize, ntheta: usize) -> Result<MeridianField> {
        MeridianField::from_fn(AnnulusDomain::unit(self.n), nr, ntheta, |r, th| {
            let (s, c) = th.sin_cos();
            self.eval(r * c, r * s)
        })
    }
}

/// `W` on the meridian grid together with `b`.
pub fn make_w(
    n: usize,
    r0: f64,
    r1: f64,
    kappa: f64,
    nr: usize,
    ntheta: usize,
) -> Result<(MeridianField, RadialProfile)> {
    let c = WConstruction::new(n, r0, r1, kappa)?;
    Ok((c.field(nr, ntheta)?, c.b_profile()))
}

#[derive(Debug, Clone)]
pub struct KappaChoice {
    pub kappa: f64,
    /// Every κ tried, with whether its `W` passed.
    pub attempts: Vec<(f64, bool)>,
    pub report: AdmissibilityReport,
}

/// Halves κ from `start` (default `min(0.05, (1 − r1/2)/2)`) until `W`
/// passes the admissibility validator on an `nr × ntheta` grid.
pub fn choose_kappa(
    n: usize,
    r0: f64,
    r1: f64,
    nr: usize,
    ntheta: usize,
    start: Option<f64>,
) -> Result<KappaChoice> {
    let mut kappa = start.unwrap_or_else(|| 0.05f64.min((1.0 - r1 / 2.0) / 2.0));
    let mut attempts = Vec::new();
    let mut last = None;
    while kappa >= 1e-6 {
        let c = WConstruction::new(n, r0, r1, kappa)?;
        let rep = check_admissible_field(&c.field(nr, ntheta)?);
        attempts.push((kappa, rep.pass));
        if rep.pass {
            return Ok(KappaChoice {
                kappa,
                attempts,
                report: rep,
            });
        }
        last = Some(rep);
        kappa *= 0.5;
    }
    Err(Error::SearchExhausted(format!(
        "no admissible kappa above 1e-6; attempts {:?}; last report {:?}",
        attempts, last
    )))
}

/// `(1−ε)V + εW` on `W`'s grid.
pub fn combine_u0(eps: f64, v: &RadialProfile, w: &MeridianField) -> Result<MeridianField> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid("eps", format!("must lie in [0, 1], got {eps}")));
    }
    if v.domain.r_in != w.domain.r_in || v.domain.r_out != w.domain.r_out {
        return Err(invalid("domain", "V and W live on different annuli"));
    }
    let vf = MeridianField::from_radial(v, w.nr, w.ntheta)?;
    vf.affine(1.0 - eps, w, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::check_admissible;

    #[test]
    fn v_examples() {
        let v = make_v(2, 1.25).unwrap();
        assert_eq!(v.value(1.0), 1.0);
        assert!((v.value(1.125) - (-8f64).exp()).abs() < 1e-18);
        assert_eq!(v.value(1.25), 0.0);
        assert_eq!(v.value(1.7), 0.0);
        assert!(make_v(2, 1.6).is_err());
        assert!(check_admissible(&v).pass);
    }

    #[test]
    fn ramp_endpoints_and_midpoint() {
        let a = make_ramp_a(1.25, 1.5).unwrap();
        assert_eq!(a.value(1.25), 0.0);
        assert_eq!(a.value(1.5), 1.0);
        assert!((a.value(1.375) - 0.5).abs() < 1e-12);
        assert_eq!(a.d1(1.25), 0.0);
        assert!(a.d1(1.3) > 0.0);
    }

    #[test]
    fn w_is_radial_inside_r0_and_vanishes_beyond_the_axis_tip() {
        let c = WConstruction::new(2, 1.25, 1.5, 0.1).unwrap();
        for &(z, rho) in &[(1.1, 0.3), (0.0, 1.2), (-0.7, 0.9)] {
            let r: f64 = f64::hypot(z, rho);
            assert!((c.eval(z, rho) - c.v.value(r)).abs() < 1e-15);
        }
        let tip = 1.5 / 0.9;
        assert_eq!(c.eval(tip + 1e-3, 0.0), 0.0);
    }

    #[test]
    fn w_level_sets_are_ellipsoids() {
        let c = WConstruction::new(2, 1.25, 1.5, 0.2).unwrap();
        let radius = 1.4;
        let e = c.ellipsoid(radius).unwrap();
        let target = c.v.value(radius);
        for k in 0..16 {
            let p = e.surface_point(k as f64 * 0.4);
            let w = c.eval(p[0], p[1]);
            assert!(((w - target) / target).abs() < 1e-9, "{k}: {w} vs {target}");
        }
    }
}
