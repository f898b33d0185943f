use super::profile::{AnnulusDomain, RadialProfile};
use crate::error::{invalid, Error, Result};
use crate::par;
use crate::stencil::PolarStencil;
use std::f64::consts::PI;

/// An axisymmetric function on an n-dimensional annulus, stored on the polar
/// grid of its meridian half-plane. Node `(i, j)` sits at radius
/// `r_in + i·h` and angle `j·π/ntheta` from the `x₁`-axis; values are
/// row-major in `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeridianField {
    pub domain: AnnulusDomain,
    pub nr: usize,
    pub ntheta: usize,
    pub values: Vec<f64>,
}

impl MeridianField {
    pub fn new(domain: AnnulusDomain, nr: usize, ntheta: usize, values: Vec<f64>) -> Result<Self> {
        if domain.n < 2 {
            return Err(invalid("n", "meridian fields need n >= 2"));
        }
        if nr < 2 || ntheta < 2 {
            return Err(invalid("grid", "need at least 2 cells per direction"));
        }
        let expected = (nr + 1) * (ntheta + 1);
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(MeridianField {
            domain,
            nr,
            ntheta,
            values,
        })
    }

    /// Samples `f(r, θ)` on the grid.
    pub fn from_fn<F>(domain: AnnulusDomain, nr: usize, ntheta: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        let st = PolarStencil::new(domain.n, domain.r_in, domain.r_out, nr, ntheta);
        let rows = par::map_range(nr + 1, |i| {
            let r = st.radius(i);
            (0..=ntheta).map(|j| f(r, st.theta(j))).collect::<Vec<_>>()
        });
        MeridianField::new(domain, nr, ntheta, rows.concat())
    }

    pub fn from_radial(profile: &RadialProfile, nr: usize, ntheta: usize) -> Result<Self> {
        MeridianField::from_fn(profile.domain, nr, ntheta, |r, _| profile.value(r))
    }

    pub fn stencil(&self) -> PolarStencil {
        PolarStencil::new(self.domain.n, self.domain.r_in, self.domain.r_out, self.nr, self.ntheta)
    }

    pub fn symmetry_exponent(&self) -> usize {
        self.domain.n - 2
    }

    pub fn h(&self) -> f64 {
        self.domain.width() / self.nr as f64
    }

    pub fn dtheta(&self) -> f64 {
        PI / self.ntheta as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.domain.node(i, self.nr)
    }

    pub fn theta(&self, j: usize) -> f64 {
        if j == self.ntheta {
            PI
        } else {
            j as f64 * self.dtheta()
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.ntheta + 1) + j]
    }

    /// Bilinear interpolation in `(r, θ)`; `None` outside the closed annulus.
    pub fn eval_polar(&self, r: f64, theta: f64) -> Option<f64> {
        let d = &self.domain;
        if !(r >= d.r_in && r <= d.r_out) {
            return None;
        }
        let theta = theta.clamp(0.0, PI);
        let x = (r - d.r_in) / self.h();
        let y = theta / self.dtheta();
        let i = (x.floor() as usize).min(self.nr - 1);
        let j = (y.floor() as usize).min(self.ntheta - 1);
        let (s, t) = (x - i as f64, y - j as f64);
        let v = (1.0 - s) * (1.0 - t) * self.at(i, j)
            + s * (1.0 - t) * self.at(i + 1, j)
            + (1.0 - s) * t * self.at(i, j + 1)
            + s * t * self.at(i + 1, j + 1);
        Some(v)
    }

    /// Value at the meridian point `(z, ρ)`; the sign of `ρ` is ignored.
    pub fn eval_meridian(&self, z: f64, rho: f64) -> Option<f64> {
        self.eval_polar(z.hypot(rho), rho.abs().atan2(z))
    }

    /// `a·self + b·other` on a shared grid.
    pub fn affine(&self, a: f64, other: &MeridianField, b: f64) -> Result<MeridianField> {
        if self.nr != other.nr || self.ntheta != other.ntheta || self.domain != other.domain {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        MeridianField::new(self.domain, self.nr, self.ntheta, values)
    }

    /// Discrete Laplacian at every node; boundary rows are zero.
    pub fn laplacian_nodes(&self) -> Vec<f64> {
        let st = self.stencil();
        let w = self.ntheta + 1;
        let rows = par::map_range(self.nr + 1, |i| {
            if i == 0 || i == self.nr {
                vec![0.0; w]
            } else {
                (0..w).map(|j| st.laplacian(&self.values, i, j)).collect()
            }
        });
        rows.concat()
    }

    /// `(z, ρ, value)` rows for export.
    pub fn rows(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.values.len());
        for i in 0..=self.nr {
            let r = self.radius(i);
            for j in 0..=self.ntheta {
                let th = self.theta(j);
                out.push([r * th.cos(), r * th.sin(), self.at(i, j)]);
            }
        }
        out
    }
}
