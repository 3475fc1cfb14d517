use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use super::cutoff::{propagator, Cutoff};
use super::grid::{pi_grid_with, required_grid};
use super::momentum::pi_momentum_with;
use super::spectral::{pi_spectral_with, SpectralKernels};
use super::sum::Compensated;
use super::{Method, DEFAULT_WORK_BUDGET};
use crate::canon::{canonicalize, CanonicalKey};
use crate::diagram_sum::DiagramSum;
use crate::error::{Error, Result};
use crate::graph::{named, Multigraph};
use crate::hopf::BphzReduction;
use crate::rational;
use crate::series::GradedSum;

/// Linear, multiplicative extension of `Π_N` to diagram sums, with a cache
/// of connected values.
pub struct Valuator {
    cutoff: Cutoff,
    method: Method,
    budget: f64,
    kernels: SpectralKernels,
    cache: Mutex<HashMap<CanonicalKey, f64>>,
}

impl Valuator {
    pub fn new(cutoff: Cutoff) -> Self {
        Valuator {
            cutoff,
            method: Method::Spectral,
            budget: DEFAULT_WORK_BUDGET,
            kernels: SpectralKernels::new(cutoff),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_budget(mut self, budget: f64) -> Self {
        self.budget = budget;
        self
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn method(&self) -> Method {
        self.method
    }

    fn connected(&self, key: &CanonicalKey) -> Result<f64> {
        if let Some(&v) = self.cache.lock().expect("valuation cache").get(key) {
            return Ok(v);
        }
        let g = key.to_graph();
        let value = match self.method {
            Method::Momentum => pi_momentum_with(&g, self.cutoff, self.budget)?.value,
            Method::Spectral => pi_spectral_with(&g, &self.kernels, self.budget)?.value,
            Method::Grid => {
                let side = required_grid(&g, self.cutoff);
                pi_grid_with(&g, self.cutoff, side, self.budget)?.value
            }
        };
        self.cache.lock().expect("valuation cache").insert(key.clone(), value);
        Ok(value)
    }

    /// `Π_N` of a class, as the product over its components.
    pub fn key(&self, key: &CanonicalKey) -> Result<f64> {
        key.split().iter().try_fold(1.0, |acc, c| Ok(acc * self.connected(c)?))
    }

    pub fn graph(&self, g: &Multigraph) -> Result<f64> {
        self.key(&canonicalize(g)?)
    }

    pub fn diagram_sum(&self, s: &DiagramSum) -> Result<f64> {
        let mut acc = Compensated::default();
        for (k, c) in s.iter() {
            acc.add(rational::to_f64(c) * self.key(k)?);
        }
        Ok(acc.value())
    }

    pub fn bubble(&self) -> Result<f64> {
        self.graph(&named::bubble())
    }

    /// Substitutes the numeric bubble value into a bubble reduction.
    pub fn bphz(&self, r: &BphzReduction) -> Result<f64> {
        let b = self.bubble()?;
        r.evaluate(b, |g| self.graph(g))
    }

    /// `Σ α^a β^b Π_N(part)`; symbols that occur must be bound.
    pub fn graded(&self, s: &GradedSum, bindings: &Bindings) -> Result<f64> {
        let mut acc = Compensated::default();
        for (&(a, b), part) in s.iter() {
            let mut scalar = 1.0;
            if a != 0 {
                scalar *= bindings.alpha.ok_or_else(|| Error::UnboundSymbol("alpha".into()))?.powi(a);
            }
            if b != 0 {
                scalar *= bindings.beta.ok_or_else(|| Error::UnboundSymbol("beta".into()))?.powi(b as i32);
            }
            acc.add(scalar * self.diagram_sum(part)?);
        }
        Ok(acc.value())
    }

    pub fn counterterms(&self) -> Result<Counterterms> {
        Ok(Counterterms {
            cutoff: self.cutoff,
            c1: Compensated::total(self.cutoff.modes().into_iter().map(propagator)),
            c2: 6.0 * self.graph(&named::bubble())?,
            c3: 0.75 * self.graph(&named::sunset())?,
            c4: 4.5 * self.graph(&named::double_triangle())?,
        })
    }
}

/// Numeric values for `α`, `β`, `γ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Bindings {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
}

impl Bindings {
    /// `α = ε/4`, `β = ε² C⁽²⁾/2`, `γ = ε² C⁽³⁾ - ε³ C⁽⁴⁾`.
    pub fn from_eps(eps: f64, c: &Counterterms) -> Self {
        Bindings {
            alpha: Some(eps / 4.0),
            beta: Some(0.5 * eps * eps * c.c2),
            gamma: Some(eps * eps * c.c3 - eps.powi(3) * c.c4),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Counterterms {
    #[serde(rename = "N")]
    pub cutoff: Cutoff,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// `C⁽¹⁾ = Σ (λ_k+1)⁻¹`, `C⁽²⁾ = 6 Π(bubble)`, `C⁽³⁾ = ¾ Π(sunset)`,
/// `C⁽⁴⁾ = 9/2 Π(double triangle)`.
pub fn counterterms(cutoff: Cutoff) -> Result<Counterterms> {
    Valuator::new(cutoff).counterterms()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::hopf::bphz_reduce;
    use crate::rational::int;
    use crate::series::Laurent;

    #[test]
    fn counterterms_at_zero_cutoff() {
        let c = counterterms(Cutoff(0)).unwrap();
        assert_eq!((c.c1, c.c2, c.c3, c.c4), (1.0, 6.0, 0.75, 4.5));
    }

    #[test]
    fn unit_and_products() {
        let v = Valuator::new(Cutoff(2));
        assert_eq!(v.diagram_sum(&DiagramSum::one()).unwrap(), 1.0);
        let pair = bubble().disjoint_union(&sunset());
        let prod = v.graph(&bubble()).unwrap() * v.graph(&sunset()).unwrap();
        assert!((v.graph(&pair).unwrap() - prod).abs() < 1e-14 * prod);
    }

    #[test]
    fn renormalised_mixed_diagram() {
        let v = Valuator::new(Cutoff(2));
        let r = bphz_reduce(&bubble_with_leg()).unwrap();
        let expect = v.graph(&bubble_with_leg()).unwrap() - v.bubble().unwrap() * v.graph(&double_edge()).unwrap();
        assert!((v.bphz(&r).unwrap() - expect).abs() < 1e-13 * expect.abs().max(1.0));
    }

    #[test]
    fn unbound_symbols() {
        let v = Valuator::new(Cutoff(1));
        let s = GradedSum::mono(2, 0, DiagramSum::from_graph(&sunset(), int(1)).unwrap());
        assert_eq!(v.graded(&s, &Bindings::default()), Err(Error::UnboundSymbol("alpha".into())));
        let s = s.mul_scalar(&Laurent::mono(int(1), -2, 1));
        let b = Bindings {
            beta: Some(2.0),
            ..Bindings::default()
        };
        assert!((v.graded(&s, &b).unwrap() - 2.0 * v.graph(&sunset()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn bubble_identity() {
        for n in [1, 2] {
            let v = Valuator::new(Cutoff(n)).with_method(Method::Momentum);
            let c = counterterms(Cutoff(n)).unwrap();
            for eps in [0.05, 0.3, 1.7] {
                let b = Bindings::from_eps(eps, &c);
                let ratio = b.beta.unwrap() / (48.0 * b.alpha.unwrap().powi(2));
                let direct = v.bubble().unwrap();
                assert!((ratio - direct).abs() < 1e-12 * direct);
            }
        }
    }
}
