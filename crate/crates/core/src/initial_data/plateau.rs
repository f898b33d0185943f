//! The plateau datum: `h`, the boundary value problem for `v_R`, and the
//! translated profile `u₀(r) = v_R(r − R)` on `[R, R+1]`.

use super::admissible::TOL_SUB;
use super::profile::{AnnulusDomain, RadialProfile};
use crate::error::{invalid, Error, Result};
use crate::jet::Jet;
use crate::quadrature::CumulativeTable;
use crate::tridiag;
use std::sync::Arc;

/// Sharpness of the smoothstep used for `h`.
pub const H_SHARPNESS: f64 = 8.0;

const QUAD_CELLS: usize = 4096;

/// `1/(1 + exp(c/t − c/(1−t)))` on `(0, 1)`, 0 below and 1 above. Flat to
/// all orders at both ends.
pub fn smoothstep(t: Jet, c: f64) -> Jet {
    if t.v <= 0.0 {
        return Jet::ZERO;
    }
    if t.v >= 1.0 {
        return Jet::constant(1.0);
    }
    let e = (t.recip() - (1.0 - t).recip()).scale(c);
    if e.v > 700.0 {
        Jet::ZERO
    } else if e.v < -700.0 {
        Jet::constant(1.0)
    } else {
        (1.0 + e.exp()).recip()
    }
}

fn h_jet(r: f64) -> Jet {
    let x = Jet::var(r);
    (smoothstep(x.scale(4.0), H_SHARPNESS) * smoothstep(4.0 - x.scale(4.0), H_SHARPNESS)).scale(0.1)
}

/// `h` on `[0, 1]`: equal to `1/10` on `[1/4, 3/4]`, positive inside, flat
/// to all orders at 0 and 1.
pub fn make_h() -> RadialProfile {
    RadialProfile::analytic(AnnulusDomain::interval(0.0, 1.0), "h", h_jet)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolveParams {
    pub big_r: f64,
    pub n: usize,
    pub grid_points: usize,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
}

impl OdeSolveParams {
    pub fn new(big_r: f64, n: usize, grid_points: usize) -> Result<Self> {
        if !(big_r > 1.0) {
            return Err(invalid("R", format!("must exceed 1, got {big_r}")));
        }
        if n < 1 {
            return Err(invalid("n", "must be >= 1"));
        }
        if grid_points < 4 {
            return Err(invalid("grid_points", "need at least 4"));
        }
        Ok(OdeSolveParams {
            big_r,
            n,
            grid_points,
            c1: None,
            c2: None,
        })
    }
}

/// The explicit n = 2 solution
/// `v = log(r+R) P(r) − Q(r) + c₁ log(r+R) + c₂`, where
/// `P = ∫₀ʳ (y+R)h` and `Q = ∫₀ʳ (y+R)h log(y+R)`.
#[derive(Debug, Clone)]
pub struct PlanarClosedForm {
    pub big_r: f64,
    pub c1: f64,
    pub c2: f64,
    p: Arc<CumulativeTable>,
    q: Arc<CumulativeTable>,
}

impl PlanarClosedForm {
    pub fn new(big_r: f64, h: &RadialProfile) -> Self {
        let p = CumulativeTable::build(|y| (y + big_r) * h.value(y), 0.0, 1.0, QUAD_CELLS);
        let q = CumulativeTable::build(
            |y| (y + big_r) * h.value(y) * (y + big_r).ln(),
            0.0,
            1.0,
            QUAD_CELLS,
        );
        let j1 = (1.0 + big_r).ln() * p.total() - q.total();
        let c1 = (-1.0 - j1) / ((1.0 + big_r) / big_r).ln();
        let c2 = 1.0 - c1 * big_r.ln();
        PlanarClosedForm {
            big_r,
            c1,
            c2,
            p: Arc::new(p),
            q: Arc::new(q),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        let l = (r + self.big_r).ln();
        l * self.p.eval(r) - self.q.eval(r) + self.c1 * l + self.c2
    }
}

/// `v_R` for any `n` through the first integral
/// `(r+R)ⁿ⁻¹ v' = c₁ + ∫₀ʳ (y+R)ⁿ⁻¹ h`, exact up to quadrature.
#[derive(Debug, Clone)]
pub struct VrQuadrature {
    pub big_r: f64,
    pub n: usize,
    pub c1: f64,
    moment: Arc<CumulativeTable>,
    slope: Arc<CumulativeTable>,
    h: RadialProfile,
}

impl VrQuadrature {
    pub fn new(big_r: f64, n: usize, h: &RadialProfile) -> Self {
        let k = n as f64 - 1.0;
        let moment = Arc::new(CumulativeTable::build(
            |y| (y + big_r).powf(k) * h.value(y),
            0.0,
            1.0,
            QUAD_CELLS,
        ));
        let m = moment.clone();
        let slope = CumulativeTable::build(
            move |x| m.eval(x) * (x + big_r).powf(-k),
            0.0,
            1.0,
            QUAD_CELLS,
        );
        let mut q = VrQuadrature {
            big_r,
            n,
            c1: 0.0,
            moment,
            slope: Arc::new(slope),
            h: h.clone(),
        };
        q.c1 = -(1.0 + q.slope.total()) / q.kernel(1.0);
        q
    }

    /// `∫₀ʳ (x+R)¹⁻ⁿ dx`.
    fn kernel(&self, r: f64) -> f64 {
        let big_r = self.big_r;
        match self.n {
            1 => r,
            2 => ((r + big_r) / big_r).ln(),
            n => {
                let e = 2.0 - n as f64;
                ((r + big_r).powf(e) - big_r.powf(e)) / e
            }
        }
    }

    pub fn jet(&self, r: f64) -> Jet {
        let k = self.n as f64 - 1.0;
        let v = 1.0 + self.slope.eval(r) + self.c1 * self.kernel(r);
        let d1 = (self.moment.eval(r) + self.c1) * (r + self.big_r).powf(-k);
        let d2 = self.h.value(r) - k * d1 / (r + self.big_r);
        Jet::new(v, d1, d2)
    }
}

#[derive(Debug, Clone)]
pub struct VrSolution {
    pub profile: RadialProfile,
    pub params: OdeSolveParams,
    /// Sup-norm gap to the explicit n = 2 solution, when `n = 2`.
    pub closed_form_error: Option<f64>,
}

/// Solves `v'' + (n−1)v'/(r+R) = h` on `[0, 1]` with `v(0) = 1`, `v(1) = 0`
/// by central differences and one tridiagonal solve.
pub fn solve_vr(params: &OdeSolveParams, h: &RadialProfile) -> Result<VrSolution> {
    let m = params.grid_points - 1;
    let step = 1.0 / m as f64;
    let k = params.n as f64 - 1.0;
    let x = |i: usize| i as f64 * step;
    let inner = m - 1;
    let mut sub = vec![0.0; inner];
    let diag = vec![-2.0 / (step * step); inner];
    let mut sup = vec![0.0; inner];
    let mut rhs = vec![0.0; inner];
    for row in 0..inner {
        let i = row + 1;
        let adv = k / (2.0 * step * (x(i) + params.big_r));
        sub[row] = 1.0 / (step * step) - adv;
        sup[row] = 1.0 / (step * step) + adv;
        rhs[row] = h.value(x(i));
    }
    rhs[0] -= sub[0];
    let interior = tridiag::solve(&sub, &diag, &sup, &rhs).map_err(|e| match e {
        Error::SingularSystem { row } => Error::SingularSystem { row: row + 1 },
        other => other,
    })?;
    let mut values = Vec::with_capacity(m + 1);
    values.push(1.0);
    values.extend(interior);
    values.push(0.0);
    let mut out = params.clone();
    let mut err = None;
    if params.n == 2 {
        let cf = PlanarClosedForm::new(params.big_r, h);
        out.c1 = Some(cf.c1);
        out.c2 = Some(cf.c2);
        err = Some(
            values
                .iter()
                .enumerate()
                .map(|(i, v)| (v - cf.value(x(i))).abs())
                .fold(0.0, f64::max),
        );
    }
    let profile = RadialProfile::sampled(AnnulusDomain::interval(0.0, 1.0), "v_R", values)?;
    Ok(VrSolution {
        profile,
        params: out,
        closed_form_error: err,
    })
}

/// `u₀(r) = v_R(r − R)` on the annulus `R < r < R+1`, with `Δu₀ = h(r − R)`
/// attached exactly.
pub fn make_u0_thm2(big_r: f64, n: usize) -> Result<RadialProfile> {
    if !(big_r > 1.0) {
        return Err(invalid("R", format!("must exceed 1, got {big_r}")));
    }
    let domain = AnnulusDomain::new(n, big_r, big_r + 1.0)?;
    let h = make_h();
    let vr = VrQuadrature::new(big_r, n, &h);
    Ok(
        RadialProfile::analytic(domain, format!("u0_thm2(R={big_r})"), move |r| vr.jet(r - big_r))
            .with_laplacian(move |r| h_jet(r - big_r)),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct RChecks {
    pub big_r: f64,
    pub max_slope: f64,
    pub curvature_at_mid: f64,
    pub min_laplacian: f64,
    pub max_laplacian: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct RChoice {
    pub big_r: f64,
    pub attempts: Vec<RChecks>,
    pub profile: RadialProfile,
}

/// Tolerance on `u₀''(R+1/2) ≥ 1/10`.
pub const CURVATURE_TOL: f64 = 1e-3;

pub fn check_thm2_profile(u0: &RadialProfile) -> RChecks {
    let big_r = u0.domain.r_in;
    let cells = 4096;
    let mut max_slope = f64::NEG_INFINITY;
    let mut lmin = f64::INFINITY;
    let mut lmax = f64::NEG_INFINITY;
    for k in 0..=cells {
        let r = u0.domain.node(k, cells);
        max_slope = max_slope.max(u0.d1(r));
        if k > 0 && k < cells {
            let l = u0.laplacian(r);
            lmin = lmin.min(l);
            lmax = lmax.max(l);
        }
    }
    let curvature_at_mid = u0.d2(big_r + 0.5);
    let pass = max_slope <= -0.8
        && curvature_at_mid >= 0.1 - CURVATURE_TOL
        && lmin >= -TOL_SUB
        && lmax > TOL_SUB;
    RChecks {
        big_r,
        max_slope,
        curvature_at_mid,
        min_laplacian: lmin,
        max_laplacian: lmax,
        pass,
    }
}

/// Doubles `R` from 16 until the plateau profile is strictly decreasing
/// with slope at most `−4/5`, has `u₀''(R+1/2) ≥ 1/10`, and is subharmonic.
pub fn choose_r_thm2(n: usize) -> Result<RChoice> {
    let mut big_r = 16.0;
    let mut attempts = Vec::new();
    while big_r <= (1u64 << 20) as f64 {
        let u0 = make_u0_thm2(big_r, n)?;
        let c = check_thm2_profile(&u0);
        let pass = c.pass;
        attempts.push(c);
        if pass {
            return Ok(RChoice {
                big_r,
                attempts,
                profile: u0,
            });
        }
        big_r *= 2.0;
    }
    Err(Error::SearchExhausted(format!("no R up to 2^20 passed: {attempts:?}")))
}
