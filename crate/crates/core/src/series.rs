//! Polynomials in the couplings `α` (any integer power) and `β`, with
//! rational or diagrammatic coefficients, and truncated power series in `ε`.
//!
//! `η = β α⁻²` is never a separate symbol: it is expanded on construction.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::diagram_sum::DiagramSum;
use crate::rational::{self, Rational};

/// Exponents `(i, j)` of `α^i β^j`.
pub type Signature = (i32, u32);

/// `Σ c α^i β^j` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent {
    terms: BTreeMap<Signature, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::mono(Rational::one(), 0, 0)
    }

    pub fn constant(c: Rational) -> Self {
        Laurent::mono(c, 0, 0)
    }

    pub fn mono(c: Rational, alpha: i32, beta: u32) -> Self {
        let mut out = Laurent::zero();
        out.add_term((alpha, beta), c);
        out
    }

    /// `c η^k = c β^k α^{-2k}`.
    pub fn eta_power(c: Rational, k: u32) -> Self {
        Laurent::mono(c, -2 * k as i32, k)
    }

    pub fn add_term(&mut self, sig: Signature, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(sig).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&sig);
        }
    }

    pub fn add_assign(&mut self, other: &Laurent) {
        for (s, c) in &other.terms {
            self.add_term(*s, c.clone());
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, f: &Rational) -> Laurent {
        let mut out = Laurent::zero();
        for (s, c) in &self.terms {
            out.add_term(*s, c * f);
        }
        out
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Signature, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, sig: Signature) -> Rational {
        self.terms.get(&sig).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_alpha_power(&self) -> Option<i32> {
        self.terms.keys().map(|s| s.0).min()
    }

    pub fn eval(&self, alpha: f64, beta: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| rational::to_f64(c) * alpha.powi(i) * beta.powi(j as i32))
            .sum()
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            alpha_pow: i32,
            beta_pow: u32,
            coeff: String,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (&(alpha_pow, beta_pow), c) in &self.terms {
            seq.serialize_element(&Term {
                alpha_pow,
                beta_pow,
                coeff: rational::format(c),
            })?;
        }
        seq.end()
    }
}

/// `Σ α^i β^j D_{ij}` with `D_{ij}` diagram sums.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSum {
    parts: BTreeMap<Signature, DiagramSum>,
}

impl GradedSum {
    pub fn zero() -> Self {
        GradedSum::default()
    }

    pub fn one() -> Self {
        GradedSum::mono(0, 0, DiagramSum::one())
    }

    pub fn mono(alpha: i32, beta: u32, part: DiagramSum) -> Self {
        let mut out = GradedSum::zero();
        out.add_part((alpha, beta), &part);
        out
    }

    pub fn add_part(&mut self, sig: Signature, part: &DiagramSum) {
        self.add_part_scaled(sig, part, &Rational::one());
    }

    pub fn add_part_scaled(&mut self, sig: Signature, part: &DiagramSum, factor: &Rational) {
        if part.is_zero() || factor.is_zero() {
            return;
        }
        let entry = self.parts.entry(sig).or_default();
        entry.add_scaled(part, factor);
        if entry.is_zero() {
            self.parts.remove(&sig);
        }
    }

    pub fn add_scaled(&mut self, other: &GradedSum, factor: &Rational) {
        for (s, d) in &other.parts {
            self.add_part_scaled(*s, d, factor);
        }
    }

    pub fn add(&self, other: &GradedSum) -> GradedSum {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &GradedSum) -> GradedSum {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, f: &Rational) -> GradedSum {
        let mut out = GradedSum::zero();
        out.add_scaled(self, f);
        out
    }

    /// Convolution in the signatures, disjoint union on diagrams.
    pub fn mul(&self, other: &GradedSum) -> GradedSum {
        let mut out = GradedSum::zero();
        for (&(a1, b1), d1) in &self.parts {
            for (&(a2, b2), d2) in &other.parts {
                out.add_part((a1 + a2, b1 + b2), &d1.mul(d2));
            }
        }
        out
    }

    /// Multiplies by a scalar Laurent polynomial.
    pub fn mul_scalar(&self, s: &Laurent) -> GradedSum {
        let mut out = GradedSum::zero();
        for (&(a1, b1), d) in &self.parts {
            for (&(a2, b2), c) in s.iter() {
                out.add_part_scaled((a1 + a2, b1 + b2), d, c);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, alpha: i32, beta: u32) -> DiagramSum {
        self.parts.get(&(alpha, beta)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Signature, &DiagramSum)> {
        self.parts.iter()
    }

    pub fn all_connected(&self) -> bool {
        self.parts.values().all(DiagramSum::all_connected)
    }

    pub fn disconnected_part(&self) -> GradedSum {
        GradedSum {
            parts: self
                .parts
                .iter()
                .map(|(s, d)| (*s, d.disconnected_part()))
                .filter(|(_, d)| !d.is_zero())
                .collect(),
        }
    }
}

impl Serialize for GradedSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Part<'a> {
            alpha_pow: i32,
            beta_pow: u32,
            diagrams: &'a DiagramSum,
        }
        let mut seq = s.serialize_seq(Some(self.parts.len()))?;
        for (&(alpha_pow, beta_pow), diagrams) in &self.parts {
            seq.serialize_element(&Part {
                alpha_pow,
                beta_pow,
                diagrams,
            })?;
        }
        seq.end()
    }
}

/// Truncated series `Σ_{k ≤ order} c_k ε^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerSeries<T> {
    pub coeffs: Vec<T>,
}

impl<T> PowerSeries<T> {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k)
    }
}

impl PowerSeries<f64> {
    pub fn eval(&self, eps: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * eps + c)
    }
}

/// Commutative algebra operations needed by the moment/cumulant recursion.
pub trait MomentAlgebra: Clone {
    fn additive_zero() -> Self;
    fn multiplicative_one() -> Self;
    fn add_scaled(&mut self, other: &Self, factor: &Rational);
    fn product(&self, other: &Self) -> Self;
    fn vanishes(&self) -> bool;
}

impl MomentAlgebra for Rational {
    fn additive_zero() -> Self {
        Zero::zero()
    }

    fn multiplicative_one() -> Self {
        One::one()
    }

    fn add_scaled(&mut self, other: &Self, factor: &Rational) {
        *self += other * factor;
    }

    fn product(&self, other: &Self) -> Self {
        self * other
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl MomentAlgebra for GradedSum {
    fn additive_zero() -> Self {
        GradedSum::zero()
    }

    fn multiplicative_one() -> Self {
        GradedSum::one()
    }

    fn add_scaled(&mut self, other: &Self, factor: &Rational) {
        GradedSum::add_scaled(self, other, factor);
    }

    fn product(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn vanishes(&self) -> bool {
        GradedSum::is_zero(self)
    }
}

impl MomentAlgebra for Laurent {
    fn additive_zero() -> Self {
        Laurent::zero()
    }

    fn multiplicative_one() -> Self {
        Laurent::one()
    }

    fn add_scaled(&mut self, other: &Self, factor: &Rational) {
        self.add_assign(&other.scale(factor));
    }

    fn product(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn vanishes(&self) -> bool {
        Laurent::is_zero(self)
    }
}
