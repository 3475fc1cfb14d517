//! The polynomial Hopf algebra spanned by `X^{n₁} Y^{n₂}`, with coefficients
//! in Laurent polynomials of `α`, `β`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::series::Laurent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HMonomial {
    pub x: u32,
    pub y: u32,
}

impl HMonomial {
    pub const ONE: HMonomial = HMonomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        HMonomial { x, y }
    }

    pub fn mul(self, other: HMonomial) -> HMonomial {
        HMonomial::new(self.x + other.x, self.y + other.y)
    }

    /// `ε`-degree: `X` counts one, `Y` counts two.
    pub fn weight(self) -> u32 {
        self.x + 2 * self.y
    }
}

impl fmt::Display for HMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (0, 0) => write!(f, "1"),
            (x, 0) => write!(f, "X^{x}"),
            (0, y) => write!(f, "Y^{y}"),
            (x, y) => write!(f, "X^{x}Y^{y}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HPolynomial {
    terms: BTreeMap<HMonomial, Laurent>,
}

impl HPolynomial {
    pub fn zero() -> Self {
        HPolynomial::default()
    }

    pub fn monomial(m: HMonomial) -> Self {
        let mut out = HPolynomial::zero();
        out.add_term(m, &Laurent::one());
        out
    }

    pub fn add_term(&mut self, m: HMonomial, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        entry.add_assign(c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &HPolynomial) {
        for (m, c) in &other.terms {
            self.add_term(*m, c);
        }
    }

    pub fn scale(&self, c: &Laurent) -> HPolynomial {
        let mut out = HPolynomial::zero();
        for (m, d) in &self.terms {
            out.add_term(*m, &d.mul(c));
        }
        out
    }

    pub fn coefficient(&self, m: HMonomial) -> Laurent {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HMonomial, &Laurent)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HTensor {
    terms: BTreeMap<(HMonomial, HMonomial), Laurent>,
}

impl HTensor {
    pub fn zero() -> Self {
        HTensor::default()
    }

    pub fn add_term(&mut self, l: HMonomial, r: HMonomial, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((l, r)).or_default();
        entry.add_assign(c);
        if entry.is_zero() {
            self.terms.remove(&(l, r));
        }
    }

    pub fn coefficient(&self, l: HMonomial, r: HMonomial) -> Laurent {
        self.terms.get(&(l, r)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(HMonomial, HMonomial), &Laurent)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `Δ̂ X^n Y^m = Σ C(n,k) C(m,l) X^k Y^l ⊗ X^{n-k} Y^{m-l}`.
pub fn coproduct_hat(m: HMonomial) -> HTensor {
    let mut out = HTensor::zero();
    for k in 0..=m.x {
        for l in 0..=m.y {
            let c = rational::from_bigint(
                rational::binomial(m.x as u64, k as u64) * rational::binomial(m.y as u64, l as u64),
            );
            out.add_term(
                HMonomial::new(k, l),
                HMonomial::new(m.x - k, m.y - l),
                &Laurent::constant(c),
            );
        }
    }
    out
}

/// `Â(X^{2ℓ}) = (2ℓ-1)!! (-2ηY)^ℓ`, zero on every other monomial except 𝟏.
pub fn antipode_hat(m: HMonomial) -> HPolynomial {
    if m.y != 0 || !m.x.is_multiple_of(2) {
        return HPolynomial::zero();
    }
    let l = m.x / 2;
    let c = rational::from_bigint(rational::odd_double_factorial(l as u64))
        * rational::pow(&rational::int(-2), l);
    let mut out = HPolynomial::zero();
    out.add_term(HMonomial::new(0, l), &Laurent::eta_power(c, l));
    out
}

/// `χ_η = (Â ⊗ id) Δ̂`, extended linearly.
pub fn chi_eta(p: &HPolynomial) -> HTensor {
    let mut out = HTensor::zero();
    for (m, c) in p.iter() {
        for ((l, r), d) in coproduct_hat(*m).iter() {
            for (al, ac) in antipode_hat(*l).iter() {
                out.add_term(*al, *r, &c.mul(d).mul(ac));
            }
        }
    }
    out
}

/// Multiplies the two tensor slots.
pub fn m_mult(t: &HTensor) -> HPolynomial {
    let mut out = HPolynomial::zero();
    for ((l, r), c) in t.iter() {
        out.add_term(l.mul(*r), c);
    }
    out
}

pub fn m_chi(p: &HPolynomial) -> HPolynomial {
    m_mult(&chi_eta(p))
}

pub const EXP_ORDER_CAP: usize = 12;

/// `(ℳ∘χ_η) Σ_{n ≤ order} (-α)^n X^n / n!`.
pub fn exp_deform(order: usize) -> Result<HPolynomial> {
    if order > EXP_ORDER_CAP {
        return Err(Error::OrderCap {
            order,
            min: 0,
            max: EXP_ORDER_CAP,
        });
    }
    let mut out = HPolynomial::zero();
    for n in 0..=order as u32 {
        let c = rational::pow(&-Rational::one(), n)
            / rational::from_bigint(rational::factorial(n as u64));
        let term = HPolynomial::monomial(HMonomial::new(n, 0)).scale(&Laurent::mono(c, n as i32, 0));
        out.add_assign(&m_chi(&term));
    }
    Ok(out)
}

/// `exp(-αX - βY)` truncated at `ε`-weight `order`.
pub fn exp_target(order: usize) -> HPolynomial {
    let mut out = HPolynomial::zero();
    for p in 0..=order as u32 {
        for q in 0..=((order as u32 - p) / 2) {
            let c = rational::pow(&-Rational::one(), p + q)
                / rational::from_bigint(
                    rational::factorial(p as u64) * rational::factorial(q as u64),
                );
            out.add_term(HMonomial::new(p, q), &Laurent::mono(c, p as i32, q));
        }
    }
    out
}

/// Exact comparison of the two sides, plus the absence of negative `α`
/// powers on the deformed side.
pub fn exp_deform_check(order: usize) -> Result<bool> {
    let lhs = exp_deform(order)?;
    let no_eta = lhs
        .iter()
        .all(|(_, c)| c.min_alpha_power().is_none_or(|a| a >= 0));
    Ok(no_eta && lhs == exp_target(order))
}

/// Closed form `Σ_ℓ n!/(ℓ!(n-2ℓ)!) (-ηY)^ℓ X^{n-2ℓ}`.
pub fn m_chi_pure_closed_form(n: u32) -> HPolynomial {
    let mut out = HPolynomial::zero();
    for l in 0..=n / 2 {
        let c = rational::from_bigint(rational::factorial(n as u64))
            / rational::from_bigint(
                rational::factorial(l as u64) * rational::factorial((n - 2 * l) as u64),
            )
            * rational::pow(&-Rational::one(), l);
        out.add_term(HMonomial::new(n - 2 * l, l), &Laurent::eta_power(c, l));
    }
    out
}

pub fn is_unit_coefficient(c: &Laurent) -> bool {
    c.iter().count() == 1 && c.coefficient((0, 0)).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x(a: u32, b: u32) -> HMonomial {
        HMonomial::new(a, b)
    }

    #[test]
    fn binomial_coproduct() {
        let d = coproduct_hat(x(2, 1));
        assert_eq!(d.len(), 6);
        assert!(is_unit_coefficient(&d.coefficient(x(2, 1), x(0, 0))));
        assert!(is_unit_coefficient(&d.coefficient(x(2, 0), x(0, 1))));
        assert_eq!(d.coefficient(x(1, 1), x(1, 0)), Laurent::constant(int(2)));
        assert_eq!(d.coefficient(x(1, 0), x(1, 1)), Laurent::constant(int(2)));
        assert_eq!(coproduct_hat(HMonomial::ONE).len(), 1);
        let d = coproduct_hat(x(2, 0));
        assert_eq!(d.coefficient(x(1, 0), x(1, 0)), Laurent::constant(int(2)));
    }

    #[test]
    fn antipode_table() {
        assert_eq!(antipode_hat(x(2, 0)).coefficient(x(0, 1)), Laurent::eta_power(int(-2), 1));
        assert_eq!(antipode_hat(x(4, 0)).coefficient(x(0, 2)), Laurent::eta_power(int(12), 2));
        assert!(antipode_hat(x(3, 0)).is_zero());
        assert!(antipode_hat(x(1, 1)).is_zero());
        assert!(is_unit_coefficient(&antipode_hat(HMonomial::ONE).coefficient(HMonomial::ONE)));
    }

    #[test]
    fn deformed_monomials() {
        let p = m_chi(&HPolynomial::monomial(x(3, 0)));
        assert_eq!(p.len(), 2);
        assert!(is_unit_coefficient(&p.coefficient(x(3, 0))));
        assert_eq!(p.coefficient(x(1, 1)), Laurent::eta_power(int(-6), 1));

        let p = m_chi(&HPolynomial::monomial(x(2, 1)));
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(x(0, 2)), Laurent::eta_power(int(-2), 1));

        for n in 0..=8 {
            assert_eq!(m_chi(&HPolynomial::monomial(x(n, 0))), m_chi_pure_closed_form(n));
        }
    }

    #[test]
    fn exponential_deformation() {
        for order in [0, 1, 2, 5, 12] {
            assert!(exp_deform_check(order).unwrap(), "order {order}");
        }
        assert_eq!(exp_deform(0).unwrap(), HPolynomial::monomial(HMonomial::ONE));
        assert!(exp_deform(13).is_err());
    }
}
