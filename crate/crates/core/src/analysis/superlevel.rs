use crate::geometry::{convexity_scan, PairSampler, Point, ScanOutcome};
use crate::initial_data::MeridianField;

/// `{u ≥ c} ∪ {|x| < r_in}` for one meridian snapshot, with `u` read by
/// bilinear interpolation and extended by zero outside the outer circle.
#[derive(Debug, Clone, Copy)]
pub struct Superlevel<'a> {
    pub field: &'a MeridianField,
    pub level: f64,
}

pub fn superlevel_membership(field: &MeridianField, level: f64) -> Superlevel<'_> {
    Superlevel { field, level }
}

impl Superlevel<'_> {
    /// `u(p) − c`; `+∞` in the hole.
    pub fn excess(&self, p: [f64; 2]) -> f64 {
        let r = p[0].hypot(p[1]);
        if r < self.field.domain.r_in {
            return f64::INFINITY;
        }
        match self.field.eval_meridian(p[0], p[1]) {
            Some(u) => u - self.level,
            None => -self.level,
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.excess(p) >= 0.0
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        let (z, rho) = p.to_meridian();
        self.contains([z, rho])
    }

    pub fn scan(&self, sampler: &PairSampler) -> ScanOutcome {
        convexity_scan(|p| self.excess(p), self.field.domain.r_in, sampler)
    }
}

/// Two points of a superlevel set whose midpoint falls below the level by
/// more than the error budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityWitness {
    pub x: Point,
    pub y: Point,
    pub z: Point,
    pub level: f64,
    pub t0: f64,
    pub u_x: f64,
    pub u_y: f64,
    pub u_z: f64,
    /// `c − u(Z)`.
    pub margin: f64,
    pub error_budget: f64,
}

pub const REVALIDATE_TOL: f64 = 1e-10;

impl ConvexityWitness {
    pub fn holds(&self) -> bool {
        self.u_x >= self.level
            && self.u_y >= self.level
            && self.level - self.u_z >= self.margin
            && self.margin > self.error_budget
    }

    /// Re-reads `u` at `X`, `Y`, `Z` from the snapshot and checks that the
    /// stored values and all three inequalities are reproduced.
    pub fn revalidate(&self, snapshot: &MeridianField) -> bool {
        let read = |p: &Point| {
            let (z, rho) = p.to_meridian();
            hole_aware(snapshot, [z, rho])
        };
        let (Some(ux), Some(uy), Some(uz)) = (read(&self.x), read(&self.y), read(&self.z)) else {
            return false;
        };
        let close = |a: f64, b: f64| a == b || (a - b).abs() <= REVALIDATE_TOL;
        close(ux, self.u_x)
            && close(uy, self.u_y)
            && close(uz, self.u_z)
            && ux >= self.level - REVALIDATE_TOL
            && uy >= self.level - REVALIDATE_TOL
            && uz <= self.level - self.margin + REVALIDATE_TOL
    }

    pub fn key_values(&self) -> Vec<(String, String)> {
        let p = |q: &Point| {
            let (z, rho) = q.to_meridian();
            format!("{z:.16e};{rho:.16e}")
        };
        vec![
            ("x".into(), p(&self.x)),
            ("y".into(), p(&self.y)),
            ("z".into(), p(&self.z)),
            ("level".into(), format!("{:.16e}", self.level)),
            ("t0".into(), format!("{:.16e}", self.t0)),
            ("u_x".into(), format!("{:.16e}", self.u_x)),
            ("u_y".into(), format!("{:.16e}", self.u_y)),
            ("u_z".into(), format!("{:.16e}", self.u_z)),
            ("margin".into(), format!("{:.16e}", self.margin)),
            ("error_budget".into(), format!("{:.16e}", self.error_budget)),
        ]
    }
}

/// `u` with the hole read as `+∞`.
fn hole_aware(snapshot: &MeridianField, p: [f64; 2]) -> Option<f64> {
    if p[0].hypot(p[1]) < snapshot.domain.r_in {
        Some(f64::INFINITY)
    } else {
        snapshot.eval_meridian(p[0], p[1])
    }
}

/// Turns a planar scan hit on `snapshot` into a witness carrying `budget`.
pub fn witness_from_scan(
    snapshot: &MeridianField,
    level: f64,
    t0: f64,
    hit: &crate::geometry::PlanarWitness,
    budget: f64,
) -> Option<ConvexityWitness> {
    let n = snapshot.domain.n;
    let read = |p: [f64; 2]| hole_aware(snapshot, p);
    let (ux, uy, uz) = (read(hit.x)?, read(hit.y)?, read(hit.z)?);
    Some(ConvexityWitness {
        x: Point::planar(hit.x, n),
        y: Point::planar(hit.y, n),
        z: Point::planar(hit.z, n),
        level,
        t0,
        u_x: ux,
        u_y: uy,
        u_z: uz,
        margin: level - uz,
        error_budget: budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::steady_state;

    #[test]
    fn membership_examples() {
        let u = steady_state(2, 1.0, 2.0).unwrap();
        let f = MeridianField::from_radial(&u, 64, 32).unwrap();
        let s = superlevel_membership(&f, 0.5);
        let r = 2f64.sqrt();
        assert!(s.excess([r, 0.0]).abs() < 1e-3);
        assert!(s.contains([0.3, 0.2]));
        let empty = superlevel_membership(&f, 1.5);
        assert!(!empty.contains([1.2, 0.0]));
        assert!(empty.contains([0.0, 0.9]));
        assert!(!s.contains([2.5, 0.0]));
    }
}
