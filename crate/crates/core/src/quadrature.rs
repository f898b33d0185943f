//! Composite Gauss-Legendre quadrature and cumulative-integral tables.

use std::f64::consts::PI;
use std::sync::OnceLock;

const ORDER: usize = 10;

/// Nodes and weights of the `m`-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_m.
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(m, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Integral of `f` over `[a, b]` with one 10-point panel.
pub fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    x.iter().zip(w).map(|(xi, wi)| wi * f(c + h * xi)).sum::<f64>() * h
}

/// Composite rule with `panels` equal panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| panel(&f, a + k as f64 * h, a + (k + 1) as f64 * h))
        .sum()
}

/// Running integral `F(x) = ∫_lo^x f` tabulated on a uniform grid and
/// evaluated between nodes by cubic Hermite interpolation with the exact
/// integrand as slope data.
#[derive(Debug, Clone)]
pub struct CumulativeTable {
    lo: f64,
    hi: f64,
    step: f64,
    cumulative: Vec<f64>,
    integrand: Vec<f64>,
}

impl CumulativeTable {
    pub fn build<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cells: usize) -> Self {
        let step = (hi - lo) / cells as f64;
        let node = |k: usize| if k == cells { hi } else { lo + k as f64 * step };
        let mut cumulative = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 0..cells {
            acc += panel(&f, node(k), node(k + 1));
            cumulative.push(acc);
        }
        let integrand = (0..=cells).map(|k| f(node(k))).collect();
        CumulativeTable {
            lo,
            hi,
            step,
            cumulative,
            integrand,
        }
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return self.total();
        }
        let cells = self.cumulative.len() - 1;
        let k = (((x - self.lo) / self.step) as usize).min(cells - 1);
        let t = (x - self.lo) / self.step - k as f64;
        let (y0, y1) = (self.cumulative[k], self.cumulative[k + 1]);
        let (m0, m1) = (self.integrand[k] * self.step, self.integrand[k + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_degree_19_exactly() {
        let v = integrate(|x| x.powi(19) + x.powi(18), -1.0, 1.0, 1);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn composite_exponential() {
        let v = integrate(f64::exp, 0.0, 3.0, 8);
        assert!((v - (3f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn cumulative_table_interpolates_between_nodes() {
        let t = CumulativeTable::build(f64::cos, 0.0, 2.0, 64);
        for &x in &[0.013, 0.5, 1.2345, 1.999] {
            assert!((t.eval(x) - x.sin()).abs() < 5e-9, "{x}");
        }
        assert!((t.total() - 2f64.sin()).abs() < 1e-14);
    }
}
