//! The discrete Laplacian on a polar `(r, θ)` grid over a half-annulus.
//!
//! An axisymmetric function on ℝⁿ is stored on its meridian half-plane,
//! parametrized by `r ∈ [r_in, r_out]` and `θ ∈ [0, π]` (angle from the
//! `x₁`-axis). The Laplacian is
//!
//! ```text
//! u_rr + (n−1)/r u_r + r⁻² (u_θθ + (n−2) cot θ u_θ)
//! ```
//!
//! The angular part is differenced in flux form with weight `sinⁿ⁻²θ`, which
//! keeps the stencil bounded up to the axis. On the axis itself an even ghost
//! value gives `(n−1)·2(u₁ − u₀)/dθ²`.
//!
//! Both the admissibility validator and the time stepper call into this
//! module so that `u_t` and `Δu₀` are the same discrete object.

use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct PolarStencil {
    pub n: usize,
    pub r_in: f64,
    pub r_out: f64,
    pub nr: usize,
    pub ntheta: usize,
    pub h: f64,
    pub dtheta: f64,
    /// Radial coefficients of `u_{i-1}`, `u_i`, `u_{i+1}` at each radius.
    pub rad_lo: Vec<f64>,
    pub rad_mid: f64,
    pub rad_hi: Vec<f64>,
    /// Angular coefficients of `u_{j-1}`, `u_{j+1}` (before the `r⁻²` factor);
    /// the centre coefficient is minus their sum.
    pub ang_lo: Vec<f64>,
    pub ang_hi: Vec<f64>,
}

impl PolarStencil {
    pub fn new(n: usize, r_in: f64, r_out: f64, nr: usize, ntheta: usize) -> Self {
        let h = (r_out - r_in) / nr as f64;
        let dtheta = PI / ntheta as f64;
        let k = (n as f64) - 1.0;
        let radius = |i: usize| r_in + i as f64 * h;
        let rad_lo = (0..=nr)
            .map(|i| 1.0 / (h * h) - k / (2.0 * h * radius(i)))
            .collect();
        let rad_hi = (0..=nr)
            .map(|i| 1.0 / (h * h) + k / (2.0 * h * radius(i)))
            .collect();
        let weight = |theta: f64| theta.sin().powi(n as i32 - 2);
        let d2 = dtheta * dtheta;
        let mut ang_lo = vec![0.0; ntheta + 1];
        let mut ang_hi = vec![0.0; ntheta + 1];
        for j in 0..=ntheta {
            if j == 0 {
                ang_hi[j] = 2.0 * k / d2;
            } else if j == ntheta {
                ang_lo[j] = 2.0 * k / d2;
            } else if n == 2 {
                ang_lo[j] = 1.0 / d2;
                ang_hi[j] = 1.0 / d2;
            } else {
                let th = j as f64 * dtheta;
                let s = weight(th);
                ang_lo[j] = weight(th - 0.5 * dtheta) / (s * d2);
                ang_hi[j] = weight(th + 0.5 * dtheta) / (s * d2);
            }
        }
        PolarStencil {
            n,
            r_in,
            r_out,
            nr,
            ntheta,
            h,
            dtheta,
            rad_lo,
            rad_mid: -2.0 / (h * h),
            rad_hi,
            ang_lo,
            ang_hi,
        }
    }

    pub fn radius(&self, i: usize) -> f64 {
        if i == self.nr {
            self.r_out
        } else {
            self.r_in + i as f64 * self.h
        }
    }

    pub fn theta(&self, j: usize) -> f64 {
        if j == self.ntheta {
            PI
        } else {
            j as f64 * self.dtheta
        }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.ntheta + 1) + j
    }

    /// Radial part of the Laplacian at an interior radius.
    #[inline]
    pub fn apply_r(&self, u: &[f64], i: usize, j: usize) -> f64 {
        let w = self.ntheta + 1;
        let c = i * w + j;
        self.rad_lo[i] * u[c - w] + self.rad_mid * u[c] + self.rad_hi[i] * u[c + w]
    }

    /// Angular part of the Laplacian, including the `r⁻²` factor.
    #[inline]
    pub fn apply_theta(&self, u: &[f64], i: usize, j: usize) -> f64 {
        let c = self.idx(i, j);
        let r = self.radius(i);
        let (lo, hi) = (self.ang_lo[j], self.ang_hi[j]);
        let left = if j > 0 { u[c - 1] } else { 0.0 };
        let right = if j < self.ntheta { u[c + 1] } else { 0.0 };
        (lo * left + hi * right - (lo + hi) * u[c]) / (r * r)
    }

    pub fn laplacian(&self, u: &[f64], i: usize, j: usize) -> f64 {
        self.apply_r(u, i, j) + self.apply_theta(u, i, j)
    }

    /// `x·∇u = r u_r` by central differences at an interior radius.
    pub fn radial_derivative_of_position(&self, u: &[f64], i: usize, j: usize) -> f64 {
        let w = self.ntheta + 1;
        let c = self.idx(i, j);
        self.radius(i) * (u[c + w] - u[c - w]) / (2.0 * self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(s: &PolarStencil, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut u = Vec::with_capacity((s.nr + 1) * (s.ntheta + 1));
        for i in 0..=s.nr {
            for j in 0..=s.ntheta {
                u.push(f(s.radius(i), s.theta(j)));
            }
        }
        u
    }

    #[test]
    fn harmonic_polynomials_are_nearly_annihilated() {
        // x₁² − x₂² in the plane and 2x₁² − x₂² − x₃² in space.
        let s = PolarStencil::new(2, 1.0, 2.0, 64, 64);
        let u = field(&s, |r, t| r * r * (2.0 * t).cos());
        let s3 = PolarStencil::new(3, 1.0, 2.0, 64, 64);
        let u3 = field(&s3, |r, t| r * r * (3.0 * t.cos().powi(2) - 1.0));
        for i in 1..64 {
            for j in 0..=64 {
                assert!(s.laplacian(&u, i, j).abs() < 2e-2, "n=2 ({i},{j})");
                assert!(s3.laplacian(&u3, i, j).abs() < 2e-2, "n=3 ({i},{j})");
            }
        }
    }

    #[test]
    fn radial_function_matches_radial_formula() {
        let n = 4;
        let s = PolarStencil::new(n, 1.0, 2.0, 128, 32);
        let u = field(&s, |r, _| r * r);
        for j in 0..=32 {
            let exact = 2.0 * n as f64;
            assert!((s.laplacian(&u, 64, j) - exact).abs() < 1e-9);
        }
    }
}
