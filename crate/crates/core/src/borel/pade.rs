//! Padé approximants of the Borel transform and the Laplace integral back.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::quadrature::integrate_half_line;
use super::zero_dim::{borel_coeffs, sqrt_two_pi};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `[L/M]` approximant `P/Q` of `Σ c_n x^n` with `Q(0) = 1`, solved exactly.
pub fn pade_exact(c: &[Rational], l: usize, m: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if l + m >= c.len() {
        return Err(Error::OrderCap {
            order: l + m,
            min: 0,
            max: c.len().saturating_sub(1),
        });
    }
    let singular = || Error::SingularPade {
        numerator: l,
        denominator: m,
    };
    let coeff = |i: isize| if i < 0 { Rational::zero() } else { c[i as usize].clone() };
    // Row k: Σ_{j=1..M} q_j c_{L+k-j} = -c_{L+k}.
    let mut a: Vec<Vec<Rational>> = (1..=m)
        .map(|k| {
            let mut row: Vec<Rational> = (1..=m).map(|j| coeff((l + k) as isize - j as isize)).collect();
            row.push(-coeff((l + k) as isize));
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !a[r][col].is_zero()).ok_or_else(singular)?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=m {
                    let delta = &f * &a[col][j];
                    a[r][j] -= delta;
                }
            }
        }
    }
    let mut q = vec![Rational::one()];
    q.extend(a.into_iter().map(|row| row[m].clone()));
    let p = (0..=l)
        .map(|i| {
            (0..=i.min(m)).fold(Rational::zero(), |acc, j| acc + &q[j] * coeff((i - j) as isize))
        })
        .collect();
    Ok((p, q))
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Roots of `Σ coeffs[i] x^i` from the companion matrix.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let Some(deg) = coeffs.iter().rposition(|c| *c != 0.0) else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -coeffs[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion.complex_eigenvalues().iter().copied().collect()
}

/// Padé approximant of `ℬZ(t)`, built in the variable `u = 4t` where the
/// coefficients stay of order one.
#[derive(Clone, Debug, Serialize)]
pub struct BorelPade {
    pub degrees: (usize, usize),
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    /// Poles in `t`, sorted by distance from the origin.
    #[serde(serialize_with = "complex_list")]
    pub poles: Vec<Complex64>,
}

fn complex_list<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

const SCALE: i64 = 4;

impl BorelPade {
    pub fn new(order: usize, degrees: (usize, usize)) -> Result<Self> {
        let borel = borel_coeffs(order)?;
        let scaled: Vec<Rational> = borel
            .exact
            .iter()
            .enumerate()
            .map(|(n, b)| b / rational::pow(&rational::int(SCALE), n as u32))
            .collect();
        let (p, q) = pade_exact(&scaled, degrees.0, degrees.1)?;
        let numerator: Vec<f64> = p.iter().map(|x| rational::to_f64(x) * sqrt_two_pi()).collect();
        let denominator: Vec<f64> = q.iter().map(rational::to_f64).collect();
        let mut poles: Vec<Complex64> = polynomial_roots(&denominator).into_iter().map(|z| z / SCALE as f64).collect();
        poles.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        Ok(BorelPade {
            degrees,
            numerator,
            denominator,
            poles,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = SCALE as f64 * t;
        horner(&self.numerator, u) / horner(&self.denominator, u)
    }

    pub fn nearest_pole(&self) -> Option<Complex64> {
        self.poles.first().copied()
    }

    /// First pole on `[0, ∞)`, if any.
    pub fn positive_real_pole(&self) -> Option<f64> {
        self.poles
            .iter()
            .find(|z| z.re >= 0.0 && z.im.abs() <= 1e-9 * (1.0 + z.re.abs()))
            .map(|z| z.re)
    }
}

/// `(⌊(o-1)/2⌋, ⌈(o-1)/2⌉)` for `o` coefficients.
pub fn default_degrees(order: usize) -> (usize, usize) {
    let k = order.saturating_sub(1);
    (k / 2, k - k / 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct PadeBorelResult {
    pub eps: f64,
    pub order: usize,
    pub value: f64,
    pub quadrature_error: f64,
    pub approximant: BorelPade,
}

/// `(1/ε) ∫_0^∞ e^{-t/ε} [L/M](t) dt` from `b_0 .. b_{order-1}`. Without
/// explicit degrees, falls back through nearby degree pairs when the
/// approximant has a pole on the integration path.
pub fn pade_borel(eps: f64, order: usize, degrees: Option<(usize, usize)>) -> Result<PadeBorelResult> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidSelection(format!("coupling {eps} outside (0, 0.5]")));
    }
    if order < 8 {
        return Err(Error::OrderCap {
            order,
            min: 8,
            max: super::zero_dim::MAX_ORDER,
        });
    }
    let candidates = match degrees {
        Some(d) => vec![d],
        None => {
            let (l, m) = default_degrees(order);
            vec![(l, m), (m, l), (l - 1, m), (l, m - 1)]
        }
    };
    let mut first_err = None;
    for d in candidates {
        match attempt(eps, order, d) {
            Ok(r) => return Ok(r),
            Err(e @ (Error::SpuriousPole { .. } | Error::SingularPade { .. })) => {
                first_err.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(first_err.expect("at least one candidate"))
}

fn attempt(eps: f64, order: usize, degrees: (usize, usize)) -> Result<PadeBorelResult> {
    let approximant = BorelPade::new(order, degrees)?;
    if let Some(location) = approximant.positive_real_pole() {
        return Err(Error::SpuriousPole {
            numerator: degrees.0,
            denominator: degrees.1,
            location,
        });
    }
    // t = εs turns the kernel into e^{-s}.
    let q = integrate_half_line(|s| (-s).exp() * approximant.eval(eps * s), 1e-13, 1e-13)?;
    Ok(PadeBorelResult {
        eps,
        order,
        value: q.value,
        quadrature_error: q.error,
        approximant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borel::z_quadrature;
    use crate::rational::int;

    #[test]
    fn geometric_series_is_reproduced() {
        // 1/(1-x) = Σ x^n.
        let c = vec![int(1); 6];
        let (p, q) = pade_exact(&c, 1, 1).unwrap();
        assert_eq!(p, vec![int(1), int(0)]);
        assert_eq!(q, vec![int(1), int(-1)]);
        assert!(matches!(pade_exact(&c, 3, 3), Err(Error::OrderCap { .. })));
    }

    #[test]
    fn singular_system() {
        let c = vec![int(1), int(0), int(0), int(0), int(0)];
        assert!(matches!(pade_exact(&c, 1, 2), Err(Error::SingularPade { .. })));
    }

    #[test]
    fn roots_of_known_polynomial() {
        let mut r = polynomial_roots(&[6.0, -5.0, 1.0]);
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn resummation_matches_quadrature() {
        for eps in [0.05, 0.1, 0.2] {
            let r = pade_borel(eps, 20, None).unwrap();
            let z = z_quadrature(eps).unwrap();
            assert!(((r.value - z) / z).abs() <= 1e-4, "eps={eps}: {} vs {z}", r.value);
        }
    }

    #[test]
    fn nearest_pole_is_at_minus_a_quarter() {
        let a = BorelPade::new(20, default_degrees(20)).unwrap();
        let p = a.nearest_pole().unwrap();
        assert!((p.re + 0.25).abs() < 0.025 && p.im.abs() < 1e-6, "{p}");
        assert!(a.positive_real_pole().is_none());
    }

    #[test]
    fn small_coupling_limit() {
        let r = pade_borel(1e-6, 12, None).unwrap();
        assert!((r.value - sqrt_two_pi()).abs() < 1e-5);
        assert!(pade_borel(0.0, 12, None).is_err());
        assert!(pade_borel(0.1, 7, None).is_err());
    }

    #[test]
    fn error_shrinks_with_order() {
        let z = z_quadrature(0.1).unwrap();
        let err = |o| (pade_borel(0.1, o, None).unwrap().value - z).abs();
        let (e8, e16, e24) = (err(8), err(16), err(24));
        assert!(e16 < e8 && e24 < e16, "{e8:e} {e16:e} {e24:e}");
    }
}
