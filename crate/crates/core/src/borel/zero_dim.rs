//! The zero-dimensional model `Z(ε) = ∫ e^{-φ²/2 - εφ⁴/4} dφ` and its
//! asymptotic and Borel coefficients.

use std::f64::consts::{PI, SQRT_2};

use num_traits::Signed;
use serde::Serialize;
use statrs::function::gamma::gamma;

use super::quadrature::integrate_half_line;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const Z_TOLERANCE: f64 = 1e-12;
pub const MAX_ORDER: usize = 60;

pub fn sqrt_two_pi() -> f64 {
    (2.0 * PI).sqrt()
}

/// `Z(ε) = 2√2 ∫_0^∞ e^{-u² - εu⁴} du`, the Laplace form after `t = u²`.
pub fn z_quadrature(eps: f64) -> Result<f64> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidSelection(format!("coupling must be non-negative, got {eps}")));
    }
    let q = integrate_half_line(
        |u| {
            let u2 = u * u;
            (-u2 - eps * u2 * u2).exp()
        },
        Z_TOLERANCE / (2.0 * SQRT_2),
        0.0,
    )?;
    Ok(2.0 * SQRT_2 * q.value)
}

/// Second route: double-exponential quadrature of the symmetric `φ` form
/// on `[0, 12]`, where the Gaussian tail is below `e^{-72}`.
pub fn z_phi_form(eps: f64) -> f64 {
    let out = quadrature::double_exponential::integrate(
        |phi| {
            let p2 = phi * phi;
            (-0.5 * p2 - 0.25 * eps * p2 * p2).exp()
        },
        0.0,
        12.0,
        1e-14,
    );
    2.0 * out.integral
}

/// `a_n / √(2π) = (-1/4)^n (4n-1)!! / n!`.
pub fn asymptotic_ratio(n: usize) -> Rational {
    rational::pow(&rational::ratio(-1, 4), n as u32) * rational::from_bigint(rational::odd_double_factorial(2 * n as u64))
        / rational::from_bigint(rational::factorial(n as u64))
}

/// `a_n = √2 (-1)^n Γ(2n + ½) / Γ(n + 1)`.
pub fn asymptotic_gamma(n: usize) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut v = SQRT_2 * sign * gamma(2.0 * n as f64 + 0.5);
    v /= gamma(n as f64 + 1.0);
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticSeries {
    pub coeffs: Vec<f64>,
    /// `a_n / √(2π)` as exact fractions.
    #[serde(serialize_with = "crate::json::rationals")]
    pub exact: Vec<Rational>,
    /// Largest relative gap between the two routes.
    pub route_gap: f64,
}

impl AsymptoticSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ_{k<n} a_k ε^k`.
    pub fn partial_sum(&self, n: usize, eps: f64) -> f64 {
        self.coeffs[..n].iter().rev().fold(0.0, |acc, a| acc * eps + a)
    }
}

/// `a_0 .. a_{order-1}`; the factorial and `Γ`-ratio routes must agree to
/// `1e-12` relative.
pub fn asymptotic_coeffs(order: usize) -> Result<AsymptoticSeries> {
    if order > MAX_ORDER {
        return Err(Error::OrderCap {
            order,
            min: 0,
            max: MAX_ORDER,
        });
    }
    let exact: Vec<Rational> = (0..order).map(asymptotic_ratio).collect();
    let mut coeffs = Vec::with_capacity(order);
    let mut route_gap: f64 = 0.0;
    for (n, r) in exact.iter().enumerate() {
        let a = rational::to_f64(r) * sqrt_two_pi();
        let g = asymptotic_gamma(n);
        let gap = ((a - g) / a).abs();
        if n <= 40 && (gap.is_nan() || gap > 1e-12) {
            return Err(Error::Precision(format!("a_{n}: {a:e} vs {g:e}")));
        }
        route_gap = route_gap.max(gap);
        coeffs.push(a);
    }
    Ok(AsymptoticSeries { coeffs, exact, route_gap })
}

#[derive(Clone, Debug, Serialize)]
pub struct BorelSeries {
    pub coeffs: Vec<f64>,
    /// `b_n / √(2π) = (-1/4)^n (4n-1)!! / (n!)²`.
    #[serde(serialize_with = "crate::json::rationals")]
    pub exact: Vec<Rational>,
}

impl BorelSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `b_{n+1} / b_n` as an exact fraction.
    pub fn ratio(&self, n: usize) -> Rational {
        &self.exact[n + 1] / &self.exact[n]
    }

    /// `|b_n| n √π / 4^n`, which tends to one.
    pub fn normalised_growth(&self, n: usize) -> f64 {
        self.coeffs[n].abs() * n as f64 * PI.sqrt() / 4f64.powi(n as i32)
    }
}

/// `b_n = (1/√π) (-4)^n Γ(n+¼) Γ(n+¾) / Γ(n+1)²`.
pub fn borel_closed_form(n: usize) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let x = n as f64;
    let g1 = gamma(x + 1.0);
    sign * 4f64.powi(n as i32) * (gamma(x + 0.25) / g1) * (gamma(x + 0.75) / g1) / PI.sqrt()
}

/// `b_n = a_n / n!`, checked against the closed form, with alternating signs.
pub fn borel_coeffs(order: usize) -> Result<BorelSeries> {
    let a = asymptotic_coeffs(order)?;
    let exact: Vec<Rational> = a
        .exact
        .iter()
        .enumerate()
        .map(|(n, r)| r / rational::from_bigint(rational::factorial(n as u64)))
        .collect();
    let mut coeffs = Vec::with_capacity(order);
    for (n, r) in exact.iter().enumerate() {
        let b = rational::to_f64(r) * sqrt_two_pi();
        let closed = borel_closed_form(n);
        if ((b - closed) / b).abs() > 1e-11 {
            return Err(Error::Precision(format!("b_{n}: {b:e} vs closed form {closed:e}")));
        }
        if r.is_negative() != (n % 2 == 1) {
            return Err(Error::Precision(format!("b_{n} has the wrong sign")));
        }
        coeffs.push(b);
    }
    Ok(BorelSeries { coeffs, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn gaussian_value() {
        assert!((z_quadrature(0.0).unwrap() - sqrt_two_pi()).abs() < 1e-12);
        assert!((z_phi_form(0.0) - sqrt_two_pi()).abs() < 1e-12);
        assert!(z_quadrature(-0.1).is_err());
    }

    #[test]
    fn two_quadratures_agree() {
        for eps in [0.01, 0.1, 0.5, 3.0] {
            let (a, b) = (z_quadrature(eps).unwrap(), z_phi_form(eps));
            assert!((a - b).abs() < 1e-11, "eps={eps}: {a} vs {b}");
        }
    }

    #[test]
    fn decreasing_in_coupling() {
        let zs: Vec<f64> = [0.0, 0.05, 0.1, 0.2, 0.5, 1.0].iter().map(|&e| z_quadrature(e).unwrap()).collect();
        assert!(zs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn low_coefficients() {
        let a = asymptotic_coeffs(3).unwrap();
        assert_eq!(a.exact[1], ratio(-3, 4));
        assert_eq!(a.exact[2], ratio(105, 32));
        assert!((a.coeffs[1] + 1.879_971_2).abs() < 1e-7);
        assert!((a.coeffs[0] - sqrt_two_pi()).abs() < 1e-15);
    }

    #[test]
    fn order_cap() {
        assert!(asymptotic_coeffs(61).is_err());
        assert_eq!(asymptotic_coeffs(60).unwrap().order(), 60);
    }

    #[test]
    fn borel_growth() {
        let b = borel_coeffs(30).unwrap();
        assert!((b.coeffs[0] - sqrt_two_pi()).abs() < 1e-15);
        let g = b.normalised_growth(12);
        assert!((0.85..=1.15).contains(&g), "{g}");
        for n in 5..29 {
            let dev = (rational::to_f64(&b.ratio(n)) + 4.0).abs();
            assert!(dev <= 4.0 / n as f64, "n={n}: {dev}");
        }
    }
}
