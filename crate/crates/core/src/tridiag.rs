//! Thomas algorithm for tridiagonal systems.

use crate::error::{Error, Result};

/// Solves `A x = rhs` in place, where row `i` of `A` is
/// `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1]` (`sub[0]` and the last
/// `sup` entry are ignored). `scratch` must hold `rhs.len()` values.
pub fn solve_in_place(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    rhs: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let m = rhs.len();
    debug_assert!(sub.len() >= m && diag.len() >= m && sup.len() >= m && scratch.len() >= m);
    if m == 0 {
        return Ok(());
    }
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return Err(Error::SingularSystem { row: 0 });
    }
    scratch[0] = sup[0] / pivot;
    rhs[0] /= pivot;
    for i in 1..m {
        pivot = diag[i] - sub[i] * scratch[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularSystem { row: i });
        }
        scratch[i] = sup[i] / pivot;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / pivot;
    }
    for i in (0..m - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
    Ok(())
}

/// Allocating convenience wrapper around [`solve_in_place`].
pub fn solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let mut x = rhs.to_vec();
    let mut scratch = vec![0.0; rhs.len()];
    solve_in_place(sub, diag, sup, &mut x, &mut scratch)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_poisson_matrix() {
        let m = 50;
        let sub = vec![-1.0; m];
        let diag = vec![2.0; m];
        let sup = vec![-1.0; m];
        let exact: Vec<f64> = (0..m).map(|i| (i as f64 * 0.1).sin()).collect();
        let rhs: Vec<f64> = (0..m)
            .map(|i| {
                let l = if i > 0 { exact[i - 1] } else { 0.0 };
                let r = if i + 1 < m { exact[i + 1] } else { 0.0 };
                2.0 * exact[i] - l - r
            })
            .collect();
        let x = solve(&sub, &diag, &sup, &rhs).unwrap();
        for (a, b) in x.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let r = solve(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]);
        assert_eq!(r, Err(Error::SingularSystem { row: 0 }));
    }
}
