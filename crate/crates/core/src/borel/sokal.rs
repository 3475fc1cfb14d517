use rayon::prelude::*;
use serde::Serialize;

use super::zero_dim::{asymptotic_coeffs, z_quadrature, Z_TOLERANCE};
use crate::error::{Error, Result};
use crate::valuation::linear_fit;

pub const SOKAL_MAX_N: usize = 25;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SokalCell {
    pub n: usize,
    pub eps: f64,
    pub partial_sum: f64,
    pub remainder: f64,
    /// `(ε/4)^n (4n-1)!! √(2π) / n!`, which equals `|a_n| ε^n`.
    pub bound: f64,
    pub above_noise: bool,
    pub within_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SokalReport {
    pub cells: Vec<SokalCell>,
    /// Fit of `log(|R_n| / (n! ε^n)) ≈ log C + n log r` over the cells above
    /// the noise floor.
    pub c: f64,
    pub r: f64,
    pub passed: bool,
}

/// Remainders `R_n(ε) = Z(ε) - Σ_{k<n} a_k ε^k` for `1 ≤ n ≤ n_max`. A cell
/// counts only when `|R_n|` exceeds `10³` ulps of the partial sum plus the
/// quadrature tolerance.
pub fn sokal_scan(n_max: usize, eps_grid: &[f64]) -> Result<SokalReport> {
    if !(1..=SOKAL_MAX_N).contains(&n_max) {
        return Err(Error::OrderCap {
            order: n_max,
            min: 1,
            max: SOKAL_MAX_N,
        });
    }
    let a = asymptotic_coeffs(n_max + 1)?;
    let zs: Vec<f64> = eps_grid.par_iter().map(|&e| z_quadrature(e)).collect::<Result<_>>()?;
    let mut cells = Vec::new();
    for (&eps, &z) in eps_grid.iter().zip(&zs) {
        for n in 1..=n_max {
            let partial_sum = a.partial_sum(n, eps);
            let remainder = z - partial_sum;
            let bound = a.coeffs[n].abs() * eps.powi(n as i32);
            let floor = 1e3 * f64::EPSILON * partial_sum.abs() + Z_TOLERANCE;
            let above_noise = remainder.abs() > floor;
            cells.push(SokalCell {
                n,
                eps,
                partial_sum,
                remainder,
                bound,
                above_noise,
                within_bound: remainder.abs() <= bound,
            });
        }
    }
    let fitted: Vec<(f64, f64)> = cells
        .iter()
        .filter(|c| c.above_noise)
        .map(|c| {
            let log_fact: f64 = (1..=c.n).map(|k| (k as f64).ln()).sum();
            (c.n as f64, c.remainder.abs().ln() - log_fact - c.n as f64 * c.eps.ln())
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = fitted.into_iter().unzip();
    let fit = linear_fit(&xs, &ys);
    let passed = cells.iter().filter(|c| c.above_noise).all(|c| c.within_bound);
    Ok(SokalReport {
        cells,
        c: fit.intercept.exp(),
        r: fit.slope.exp(),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borel::zero_dim::sqrt_two_pi;

    #[test]
    fn first_order_remainder() {
        let r = sokal_scan(1, &[0.1]).unwrap();
        let cell = r.cells[0];
        assert!(cell.remainder.abs() <= 0.75 * sqrt_two_pi() * 0.1);
        assert!((cell.bound - 0.75 * sqrt_two_pi() * 0.1).abs() < 1e-15);
    }

    #[test]
    fn explicit_bound_holds() {
        let r = sokal_scan(15, &[0.05, 0.1, 0.2]).unwrap();
        assert!(r.passed);
        assert!(r.cells.iter().all(|c| c.remainder.is_finite()));
        assert!(r.r > 2.0 && r.r < 8.0, "r = {}", r.r);
        assert!(sokal_scan(26, &[0.1]).is_err());
    }

    /// Partial sums first approach `Z` and then run away; the best truncation
    /// moves out as the coupling shrinks.
    #[test]
    fn optimal_truncation_grows() {
        let best = |eps: f64| {
            let r = sokal_scan(25, &[eps]).unwrap();
            r.cells
                .iter()
                .min_by(|a, b| a.remainder.abs().total_cmp(&b.remainder.abs()))
                .unwrap()
                .n
        };
        let (b1, b2, b3) = (best(0.2), best(0.1), best(0.04));
        assert!(b1 < b2 && b2 < b3, "{b1} {b2} {b3}");
    }
}
