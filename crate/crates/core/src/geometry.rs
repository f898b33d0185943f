//! Points, ellipsoids and midpoint-convexity searches.
//!
//! Everything here lives in the plane spanned by the first two coordinates.
//! The fields we look at are axisymmetric about `x₁`, so a non-convex planar
//! slice through the axis is already a certificate for the full set.

use crate::error::{invalid, Error, Result};
use crate::par;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Cartesian coordinates in ℝⁿ.
    Full,
    /// `(z, ρ)` with `ρ ≥ 0`.
    Meridian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
    pub frame: Frame,
}

impl Point {
    pub fn full(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("coords", "full-frame point needs n >= 1"));
        }
        Ok(Point {
            coords,
            frame: Frame::Full,
        })
    }

    pub fn meridian(z: f64, rho: f64) -> Result<Self> {
        if rho < 0.0 {
            return Err(invalid("rho", format!("must be >= 0, got {rho}")));
        }
        Ok(Point {
            coords: vec![z, rho],
            frame: Frame::Meridian,
        })
    }

    /// Full-frame point of dimension `n` lying in the `x₁x₂`-plane.
    pub fn planar(p: [f64; 2], n: usize) -> Self {
        let mut coords = vec![0.0; n.max(2)];
        coords[0] = p[0];
        coords[1] = p[1];
        Point {
            coords,
            frame: Frame::Full,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Meridian coordinates `(x₁, |(x₂, …, xₙ)|)`.
    pub fn to_meridian(&self) -> (f64, f64) {
        match self.frame {
            Frame::Meridian => (self.coords[0], self.coords[1]),
            Frame::Full => {
                let rest = self.coords[1..].iter().map(|c| c * c).sum::<f64>();
                (self.coords[0], rest.sqrt())
            }
        }
    }
}

/// The ellipsoid `b²x₁² + x₂² + ⋯ + xₙ² = R²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidSpec {
    pub b: f64,
    pub radius: f64,
    pub n: usize,
}

impl EllipsoidSpec {
    pub fn new(b: f64, radius: f64, n: usize) -> Result<Self> {
        if !(b > 0.0 && b <= 1.0) {
            return Err(invalid("b", format!("must lie in (0, 1], got {b}")));
        }
        if !(radius > 0.0) {
            return Err(invalid("R", format!("must be positive, got {radius}")));
        }
        if n < 2 {
            return Err(invalid("n", format!("must be >= 2, got {n}")));
        }
        Ok(EllipsoidSpec { b, radius, n })
    }

    pub fn is_sphere(&self) -> bool {
        self.b == 1.0
    }

    /// Semi-axis along `x₁`.
    pub fn major_semi_axis(&self) -> f64 {
        self.radius / self.b
    }

    /// Signed quadratic form at a planar point.
    pub fn form(&self, p: [f64; 2]) -> f64 {
        let bx = self.b * p[0];
        bx * bx + p[1] * p[1] - self.radius * self.radius
    }

    /// Surface point at parameter `phi` in the `x₁x₂`-plane.
    pub fn surface_point(&self, phi: f64) -> [f64; 2] {
        let (s, c) = phi.sin_cos();
        [self.radius / self.b * c, self.radius * s]
    }
}

/// `b²p₁² + Σ_{i≥2} pᵢ² − R²`: negative inside, positive outside.
pub fn ellipsoid_membership(spec: &EllipsoidSpec, p: &Point) -> Result<f64> {
    let (x1, rest2) = match p.frame {
        Frame::Full => {
            if p.dim() != spec.n {
                return Err(Error::DimensionMismatch {
                    expected: spec.n,
                    got: p.dim(),
                });
            }
            (p.coords[0], p.coords[1..].iter().map(|c| c * c).sum::<f64>())
        }
        Frame::Meridian => (p.coords[0], p.coords[1] * p.coords[1]),
    };
    let bx = spec.b * x1;
    Ok(bx * bx + rest2 - spec.radius * spec.radius)
}

pub fn midpoint(p: &Point, q: &Point) -> Result<Point> {
    if p.frame != q.frame {
        return Err(Error::FrameMismatch);
    }
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    let coords = p
        .coords
        .iter()
        .zip(&q.coords)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    Ok(Point {
        coords,
        frame: p.frame,
    })
}

fn mid2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessTriple {
    pub x: Point,
    pub y: Point,
    pub z: Point,
    pub containing_sphere_radius: f64,
    pub outer_ellipsoid: EllipsoidSpec,
    pub inner_ellipsoid: EllipsoidSpec,
    /// `min(|Z|² − R⁺², outer(Z))`, positive for a valid triple.
    pub clearance: f64,
    /// Boundary parameters `(θ, φ)` of `X` and `Y`.
    pub params: (f64, f64),
}

impl WitnessTriple {
    /// Recomputes the clearance from the stored points.
    pub fn recheck(&self) -> f64 {
        let (z1, z2) = self.z.to_meridian();
        let sphere = z1 * z1 + z2 * z2 - self.containing_sphere_radius.powi(2);
        sphere.min(self.outer_ellipsoid.form([z1, z2]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSearch {
    pub triple: Option<WitnessTriple>,
    pub best_clearance: f64,
    pub best_params: (f64, f64),
}

#[derive(Debug, Clone, Copy)]
pub struct SweepPlan {
    pub coarse: usize,
    pub rounds: usize,
    /// Half-width of each refinement window, in coarse cells of the previous level.
    pub window: usize,
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan {
            coarse: 256,
            rounds: 3,
            window: 2,
        }
    }
}

struct Sweep {
    r_plus: f64,
    outer: EllipsoidSpec,
    inner: EllipsoidSpec,
}

impl Sweep {
    fn points(&self, theta: f64, phi: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let (s, c) = theta.sin_cos();
        let x = [self.r_plus * c, self.r_plus * s];
        let y = self.inner.surface_point(phi);
        (x, y, mid2(x, y))
    }

    fn clearance(&self, theta: f64, phi: f64) -> f64 {
        let (_, _, z) = self.points(theta, phi);
        let sphere = z[0] * z[0] + z[1] * z[1] - self.r_plus * self.r_plus;
        sphere.min(self.outer.form(z))
    }

    /// Best `(clearance, θ, φ)` on a tensor grid. Ties go to the smallest
    /// `(θ, φ)` pair since rows are scanned in increasing order.
    fn grid(&self, t0: f64, dt: f64, nt: usize, p0: f64, dp: f64, np: usize) -> (f64, f64, f64) {
        let rows = par::map_range(nt, |i| {
            let theta = t0 + i as f64 * dt;
            let mut best = (f64::NEG_INFINITY, theta, p0);
            for j in 0..np {
                let phi = p0 + j as f64 * dp;
                let c = self.clearance(theta, phi);
                if c > best.0 {
                    best = (c, theta, phi);
                }
            }
            best
        });
        rows.into_iter()
            .fold((f64::NEG_INFINITY, t0, p0), |acc, r| if r.0 > acc.0 { r } else { acc })
    }
}

/// Searches for `X` on `|x| = R⁺` and `Y` on `inner` with `Z = (X+Y)/2`
/// strictly outside both the sphere and `outer`.
pub fn find_witness_triple(
    r_plus: f64,
    outer: &EllipsoidSpec,
    inner: &EllipsoidSpec,
) -> Result<WitnessSearch> {
    find_witness_triple_with(r_plus, outer, inner, SweepPlan::default())
}

pub fn find_witness_triple_with(
    r_plus: f64,
    outer: &EllipsoidSpec,
    inner: &EllipsoidSpec,
    plan: SweepPlan,
) -> Result<WitnessSearch> {
    if !(r_plus > 0.0) {
        return Err(invalid("R_plus", format!("must be positive, got {r_plus}")));
    }
    if inner.n != outer.n {
        return Err(Error::DimensionMismatch {
            expected: outer.n,
            got: inner.n,
        });
    }
    if inner.radius > outer.radius {
        return Err(invalid("inner", "inner ellipsoid must not exceed outer"));
    }
    if plan.coarse < 2 {
        return Err(invalid("coarse", "sweep grid needs at least 2 cells"));
    }
    let sweep = Sweep {
        r_plus,
        outer: *outer,
        inner: *inner,
    };
    let m = plan.coarse;
    let mut step = 2.0 * PI / m as f64;
    let (mut best, mut theta, mut phi) = sweep.grid(0.0, step, m, 0.0, step, m);
    let half = plan.window.max(1);
    for _ in 0..plan.rounds {
        let fine = step / 4.0;
        let k = 8 * half + 1;
        let lo_t = theta - 4.0 * half as f64 * fine;
        let lo_p = phi - 4.0 * half as f64 * fine;
        let cand = sweep.grid(lo_t, fine, k, lo_p, fine, k);
        if cand.0 > best {
            (best, theta, phi) = cand;
        }
        step = fine;
    }
    let theta = theta.rem_euclid(2.0 * PI);
    let phi = phi.rem_euclid(2.0 * PI);
    let best = sweep.clearance(theta, phi);
    let triple = if best > 0.0 {
        let (x, y, z) = sweep.points(theta, phi);
        Some(WitnessTriple {
            x: Point::planar(x, outer.n),
            y: Point::planar(y, outer.n),
            z: Point::planar(z, outer.n),
            containing_sphere_radius: r_plus,
            outer_ellipsoid: *outer,
            inner_ellipsoid: *inner,
            clearance: best,
            params: (theta, phi),
        })
    } else {
        None
    };
    Ok(WitnessSearch {
        triple,
        best_clearance: best,
        best_params: (theta, phi),
    })
}

/// Which pairs of planar points a convexity scan examines.
#[derive(Debug, Clone)]
pub enum PairSampler {
    /// Tensor grid in polar coordinates: all radii × `angles` equally spaced
    /// angles on `[0, 2π)`.
    Polar { radii: Vec<f64>, angles: usize },
    /// Every point of `a` against every point of `b`.
    Clouds { a: Vec<[f64; 2]>, b: Vec<[f64; 2]> },
    /// All unordered pairs of the given points.
    Points(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarWitness {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub z: [f64; 2],
    /// How far the set's excess at `Z` lies below zero.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome {
    pub witness: Option<PlanarWitness>,
    pub members: usize,
    pub pairs: usize,
    pub diagnostic: Option<String>,
}

/// Looks for two members of `{excess ≥ 0} ∪ {|p| < r_in}` whose midpoint is
/// not a member. Returns the pair with the largest deficit at the midpoint;
/// ties go to the smallest pair index.
pub fn convexity_scan<F>(excess: F, r_in: f64, sampler: &PairSampler) -> ScanOutcome
where
    F: Fn([f64; 2]) -> f64 + Sync + Send,
{
    let in_set = |p: [f64; 2]| p[0].hypot(p[1]) < r_in || excess(p) >= 0.0;
    let deficit = |p: [f64; 2]| {
        if p[0].hypot(p[1]) < r_in {
            f64::NEG_INFINITY
        } else {
            -excess(p)
        }
    };
    let (left, right, all_pairs): (Vec<[f64; 2]>, Vec<[f64; 2]>, bool) = match sampler {
        PairSampler::Polar { radii, angles } => {
            let pts: Vec<[f64; 2]> = radii
                .iter()
                .flat_map(|&r| {
                    (0..*angles).map(move |k| {
                        let a = 2.0 * PI * k as f64 / *angles as f64;
                        [r * a.cos(), r * a.sin()]
                    })
                })
                .collect();
            (pts.clone(), pts, true)
        }
        PairSampler::Clouds { a, b } => (a.clone(), b.clone(), false),
        PairSampler::Points(p) => (p.clone(), p.clone(), true),
    };
    let left: Vec<[f64; 2]> = left.into_iter().filter(|&p| in_set(p)).collect();
    let right: Vec<[f64; 2]> = right.into_iter().filter(|&p| in_set(p)).collect();
    let members = if all_pairs { left.len() } else { left.len() + right.len() };
    if left.is_empty() || right.is_empty() {
        return ScanOutcome {
            witness: None,
            members,
            pairs: 0,
            diagnostic: Some("sampled set is empty".into()),
        };
    }
    let rows = par::map_range(left.len(), |i| {
        let start = if all_pairs { i + 1 } else { 0 };
        let mut best: Option<(f64, usize)> = None;
        for (j, &q) in right.iter().enumerate().skip(start) {
            let d = deficit(mid2(left[i], q));
            if d > 0.0 && best.map_or(true, |(b, _)| d > b) {
                best = Some((d, j));
            }
        }
        best
    });
    let pairs = if all_pairs {
        left.len() * (left.len() - 1) / 2
    } else {
        left.len() * right.len()
    };
    let mut winner: Option<(f64, usize, usize)> = None;
    for (i, r) in rows.into_iter().enumerate() {
        if let Some((d, j)) = r {
            if winner.map_or(true, |(b, _, _)| d > b) {
                winner = Some((d, i, j));
            }
        }
    }
    let witness = winner.map(|(d, i, j)| PlanarWitness {
        x: left[i],
        y: right[j],
        z: mid2(left[i], right[j]),
        margin: d,
    });
    ScanOutcome {
        witness,
        members,
        pairs,
        diagnostic: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let s = EllipsoidSpec::new(1.0, 2.0, 2).unwrap();
        assert_eq!(ellipsoid_membership(&s, &Point::full(vec![2.0, 0.0]).unwrap()).unwrap(), 0.0);
        let e = EllipsoidSpec::new(0.8, 1.5, 2).unwrap();
        let m = ellipsoid_membership(&e, &Point::full(vec![1.875, 0.0]).unwrap()).unwrap();
        assert!(m.abs() < 1e-12);
        let m = ellipsoid_membership(&e, &Point::full(vec![0.0, 1.5]).unwrap()).unwrap();
        assert!(m.abs() < 1e-12);
        let m = ellipsoid_membership(&e, &Point::full(vec![2.0, 0.0]).unwrap()).unwrap();
        assert!((m - 0.31).abs() < 1e-12);
    }

    #[test]
    fn membership_rejects_wrong_dimension() {
        let e = EllipsoidSpec::new(0.8, 1.5, 3).unwrap();
        let r = ellipsoid_membership(&e, &Point::full(vec![1.0, 0.0]).unwrap());
        assert_eq!(r, Err(Error::DimensionMismatch { expected: 3, got: 2 }));
    }

    #[test]
    fn midpoint_examples() {
        let m = midpoint(&Point::full(vec![1.6, 0.0]).unwrap(), &Point::full(vec![1.2, 0.9]).unwrap())
            .unwrap();
        assert!((m.coords[0] - 1.4).abs() < 1e-15 && (m.coords[1] - 0.45).abs() < 1e-15);
        let a = Point::full(vec![0.0, 1.0]).unwrap();
        let b = Point::meridian(0.0, 1.0).unwrap();
        assert_eq!(midpoint(&a, &b), Err(Error::FrameMismatch));
    }

    #[test]
    fn concentric_balls_have_no_witness() {
        let outer = EllipsoidSpec::new(1.0, 1.5, 2).unwrap();
        let inner = EllipsoidSpec::new(1.0, 1.4, 2).unwrap();
        let s = find_witness_triple(2.0, &outer, &inner).unwrap();
        assert!(s.triple.is_none());
        assert!(s.best_clearance < 0.0);
    }

    #[test]
    fn ball_scan_is_clean_and_caps_are_not() {
        let sampler = PairSampler::Polar {
            radii: (0..12).map(|k| 1.0 + k as f64 / 11.0).collect(),
            angles: 48,
        };
        let ball = convexity_scan(|p| 1.5 - p[0].hypot(p[1]), 1.0, &sampler);
        assert!(ball.witness.is_none());

        let caps = |p: [f64; 2]| {
            let r = p[0].hypot(p[1]);
            if r >= 1.0 && r <= 2.0 && p[0].abs() > 1.2 { 1.0 } else { -1.0 }
        };
        let out = convexity_scan(caps, 0.0, &sampler);
        let w = out.witness.expect("two caps are not convex");
        assert!(w.z[0].abs() <= 1.2);
    }
}
