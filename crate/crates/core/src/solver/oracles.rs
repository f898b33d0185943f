use super::radial::{RadialField, RadialOperator};
use crate::error::Result;
use crate::initial_data::{AnnulusDomain, RadialProfile};
use crate::jet::Jet;
use crate::tridiag;
use std::f64::consts::PI;

/// The harmonic profile with value 1 at `r_in` and 0 at `r_out`.
pub fn steady_state(n: usize, r_in: f64, r_out: f64) -> Result<RadialProfile> {
    let domain = AnnulusDomain::new(n, r_in, r_out)?;
    let label = format!("u_inf(n={n})");
    Ok(match n {
        1 => RadialProfile::analytic(domain, label, move |r| {
            (r_out - Jet::var(r)).scale(1.0 / (r_out - r_in))
        }),
        2 => {
            let denom = (r_out / r_in).ln();
            RadialProfile::analytic(domain, label, move |r| {
                (Jet::var(r).scale(1.0 / r_out).ln()).scale(-1.0 / denom)
            })
        }
        _ => {
            let e = 2 - n as i32;
            let outer = r_out.powi(e);
            let denom = r_in.powi(e) - outer;
            RadialProfile::analytic(domain, label, move |r| {
                (Jet::var(r).powi(e) - outer).scale(1.0 / denom)
            })
        }
    })
}

/// The exact steady state of the discrete radial operator.
pub fn discrete_steady_state(domain: AnnulusDomain, nr: usize) -> Result<RadialField> {
    let op = RadialOperator::new(domain, nr);
    let m = nr - 1;
    let sub: Vec<f64> = (1..nr).map(|i| op.lo[i]).collect();
    let sup: Vec<f64> = (1..nr).map(|i| op.hi[i]).collect();
    let diag = vec![op.mid; m];
    let mut rhs = vec![0.0; m];
    rhs[0] = -op.lo[1];
    let inner = tridiag::solve(&sub, &diag, &sup, &rhs)?;
    let mut values = vec![1.0];
    values.extend(inner);
    values.push(0.0);
    Ok(RadialField { domain, values })
}

/// `(1−x) + Σ c_k e^{−k²π²t} sin(kπx)` with `x = r − 1` on the annulus
/// `1 < r < 2` in one dimension.
pub fn series_oracle_1d(coeffs: &[f64], t: f64) -> RadialProfile {
    let amps: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let k = (i + 1) as f64;
            (k * PI, c * (-k * k * PI * PI * t).exp())
        })
        .collect();
    RadialProfile::analytic(AnnulusDomain::unit(1), format!("series(t={t})"), move |r| {
        let x = Jet::var(r) - 1.0;
        amps.iter()
            .fold(1.0 - x, |acc, &(w, a)| acc + x.scale(w).sin().scale(a))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steady_examples() {
        let s2 = steady_state(2, 1.0, 2.0).unwrap();
        assert!((s2.value(2f64.sqrt()) - 0.5).abs() < 1e-15);
        assert!(s2.laplacian(1.3).abs() < 1e-14);
        let s1 = steady_state(1, 1.0, 2.0).unwrap();
        assert!((s1.value(1.5) - 0.5).abs() < 1e-15);
        let s3 = steady_state(3, 1.0, 2.0).unwrap();
        assert!(s3.value(2.0).abs() < 1e-15);
        assert!((s3.value(1.0) - 1.0).abs() < 1e-15);
        assert!(s3.laplacian(1.7).abs() < 1e-13);
    }

    #[test]
    fn series_examples() {
        let p0 = series_oracle_1d(&[0.5, 0.25], 0.0);
        let x: f64 = 0.3;
        let expect = 1.0 - x + 0.5 * (PI * x).sin() + 0.25 * (2.0 * PI * x).sin();
        assert!((p0.value(1.0 + x) - expect).abs() < 1e-15);
        let half = series_oracle_1d(&[1.0], 2f64.ln() / (PI * PI));
        assert!((half.value(1.5) - 0.5 - 0.5).abs() < 1e-15);
        let late = series_oracle_1d(&[1.0, 1.0], 50.0);
        assert!((late.value(1.25) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn discrete_steady_is_annihilated() {
        let f = discrete_steady_state(AnnulusDomain::unit(2), 64).unwrap();
        assert!(f.laplacian().iter().all(|l| l.abs() < 1e-9));
    }
}
