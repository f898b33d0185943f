use crate::error::{invalid, Result};
use crate::jet::Jet;
use std::fmt;
use std::sync::Arc;

/// The region `r_in < |x| < r_out` in ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusDomain {
    pub n: usize,
    pub r_in: f64,
    pub r_out: f64,
}

impl AnnulusDomain {
    pub fn new(n: usize, r_in: f64, r_out: f64) -> Result<Self> {
        if n < 1 {
            return Err(invalid("n", "dimension must be >= 1"));
        }
        if !(r_in > 0.0 && r_in < r_out) {
            return Err(invalid(
                "radii",
                format!("need 0 < r_in < r_out, got ({r_in}, {r_out})"),
            ));
        }
        Ok(AnnulusDomain { n, r_in, r_out })
    }

    /// The annulus `1 < r < 2`.
    pub fn unit(n: usize) -> Self {
        AnnulusDomain {
            n,
            r_in: 1.0,
            r_out: 2.0,
        }
    }

    /// A closed interval that is not necessarily an annulus, e.g. `[0, 1]`
    /// for auxiliary one-variable functions.
    pub fn interval(lo: f64, hi: f64) -> Self {
        AnnulusDomain {
            n: 1,
            r_in: lo,
            r_out: hi,
        }
    }

    pub fn width(&self) -> f64 {
        self.r_out - self.r_in
    }

    pub fn node(&self, k: usize, cells: usize) -> f64 {
        if k == cells {
            self.r_out
        } else {
            self.r_in + k as f64 * self.width() / cells as f64
        }
    }
}

pub type JetFn = Arc<dyn Fn(f64) -> Jet + Send + Sync>;

#[derive(Debug, Clone)]
pub struct Samples {
    pub values: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub step: f64,
}

impl Samples {
    fn new(values: Vec<f64>, step: f64) -> Self {
        let m = values.len() - 1;
        let u = &values;
        let mut d1 = vec![0.0; m + 1];
        let mut d2 = vec![0.0; m + 1];
        for i in 1..m {
            d1[i] = (u[i + 1] - u[i - 1]) / (2.0 * step);
            d2[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (step * step);
        }
        d1[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * step);
        d1[m] = (3.0 * u[m] - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * step);
        d2[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (step * step);
        d2[m] = (2.0 * u[m] - 5.0 * u[m - 1] + 4.0 * u[m - 2] - u[m - 3]) / (step * step);
        Samples {
            values,
            d1,
            d2,
            step,
        }
    }
}

#[derive(Clone)]
enum Repr {
    Analytic(JetFn),
    Sampled(Samples),
}

/// A scalar function of the radius with first and second derivatives.
///
/// Closed-form profiles carry exact jets. Sampled profiles live on a uniform
/// grid; their derivatives are second-order differences at the nodes and are
/// interpolated in between.
#[derive(Clone)]
pub struct RadialProfile {
    pub domain: AnnulusDomain,
    pub label: String,
    repr: Repr,
    known_laplacian: Option<JetFn>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Analytic(_) => "analytic".to_string(),
            Repr::Sampled(s) => format!("sampled({} nodes)", s.values.len()),
        };
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("repr", &kind)
            .finish()
    }
}

impl RadialProfile {
    pub fn analytic<F>(domain: AnnulusDomain, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        RadialProfile {
            domain,
            label: label.into(),
            repr: Repr::Analytic(Arc::new(f)),
            known_laplacian: None,
        }
    }

    /// Values at the `values.len()` equally spaced nodes of `domain`.
    pub fn sampled(domain: AnnulusDomain, label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.len() < 4 {
            return Err(invalid("values", "a sampled profile needs at least 4 nodes"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("values", "non-finite sample"));
        }
        let step = domain.width() / (values.len() - 1) as f64;
        Ok(RadialProfile {
            domain,
            label: label.into(),
            repr: Repr::Sampled(Samples::new(values, step)),
            known_laplacian: None,
        })
    }

    /// Attaches an exact expression for `u'' + (n−1)u'/r`, used when its
    /// radial derivatives are needed.
    pub fn with_laplacian<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        self.known_laplacian = Some(Arc::new(f));
        self
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.repr, Repr::Sampled(_))
    }

    pub fn samples(&self) -> Option<&Samples> {
        match &self.repr {
            Repr::Sampled(s) => Some(s),
            Repr::Analytic(_) => None,
        }
    }

    pub fn grid_spacing(&self) -> Option<f64> {
        self.samples().map(|s| s.step)
    }

    pub fn jet(&self, r: f64) -> Jet {
        let r = r.clamp(self.domain.r_in, self.domain.r_out);
        match &self.repr {
            Repr::Analytic(f) => f(r),
            Repr::Sampled(s) => {
                let m = s.values.len() - 1;
                let x = (r - self.domain.r_in) / s.step;
                let k = (x.floor() as usize).min(m - 1);
                let t = x - k as f64;
                let (y0, y1) = (s.values[k], s.values[k + 1]);
                let (m0, m1) = (s.d1[k] * s.step, s.d1[k + 1] * s.step);
                let t2 = t * t;
                let t3 = t2 * t;
                let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                    + (t3 - 2.0 * t2 + t) * m0
                    + (-2.0 * t3 + 3.0 * t2) * y1
                    + (t3 - t2) * m1;
                let lerp = |a: &[f64]| a[k] + t * (a[k + 1] - a[k]);
                Jet::new(v, lerp(&s.d1), lerp(&s.d2))
            }
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.jet(r).v
    }

    pub fn d1(&self, r: f64) -> f64 {
        self.jet(r).d1
    }

    pub fn d2(&self, r: f64) -> f64 {
        self.jet(r).d2
    }

    /// `u'' + (n−1)u'/r`.
    pub fn laplacian(&self, r: f64) -> f64 {
        if let Some(l) = &self.known_laplacian {
            return l(r.clamp(self.domain.r_in, self.domain.r_out)).v;
        }
        let j = self.jet(r);
        j.d2 + (self.domain.n as f64 - 1.0) * j.d1 / r
    }

    /// The Laplacian with its first two radial derivatives. Uses the attached
    /// exact expression when present, otherwise central differences of
    /// [`RadialProfile::laplacian`] at spacing `1e-3`.
    pub fn laplacian_jet(&self, r: f64) -> Jet {
        if let Some(l) = &self.known_laplacian {
            return l(r);
        }
        let d = 1e-3;
        let (a, b, c) = (self.laplacian(r - d), self.laplacian(r), self.laplacian(r + d));
        Jet::new(b, (c - a) / (2.0 * d), (c - 2.0 * b + a) / (d * d))
    }

    pub fn has_known_laplacian(&self) -> bool {
        self.known_laplacian.is_some()
    }

    /// Sampling nodes: the stored grid, or `cells + 1` uniform nodes.
    pub fn nodes(&self, cells: usize) -> Vec<f64> {
        let m = match &self.repr {
            Repr::Sampled(s) => s.values.len() - 1,
            Repr::Analytic(_) => cells,
        };
        (0..=m).map(|k| self.domain.node(k, m)).collect()
    }

    pub fn resample(&self, cells: usize) -> Result<RadialProfile> {
        let values = (0..=cells)
            .map(|k| self.value(self.domain.node(k, cells)))
            .collect();
        RadialProfile::sampled(self.domain, self.label.clone(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_cubic_has_second_order_derivatives() {
        let d = AnnulusDomain::unit(1);
        let f = |r: f64| r * r * r;
        let values: Vec<f64> = (0..=200).map(|k| f(d.node(k, 200))).collect();
        let p = RadialProfile::sampled(d, "cubic", values).unwrap();
        for &r in &[1.0, 1.3, 1.5, 2.0] {
            assert!((p.value(r) - f(r)).abs() < 1e-8);
            assert!((p.d1(r) - 3.0 * r * r).abs() < 1e-3, "{r}");
            assert!((p.d2(r) - 6.0 * r).abs() < 1e-2, "{r}");
        }
    }

    #[test]
    fn analytic_laplacian_uses_dimension() {
        let d = AnnulusDomain::unit(3);
        let p = RadialProfile::analytic(d, "r^2", |r| Jet::var(r).powi(2));
        assert!((p.laplacian(1.5) - 6.0).abs() < 1e-14);
    }
}
