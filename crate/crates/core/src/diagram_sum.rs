//! Finite rational linear combinations of isomorphism classes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::canon::{canonicalize, CanonicalKey};
use crate::error::Result;
use crate::graph::Multigraph;
use crate::rational::{self, Rational};

/// `Σ c_Γ Γ` over canonical classes. Products are disjoint unions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramSum {
    terms: BTreeMap<CanonicalKey, Rational>,
}

impl DiagramSum {
    pub fn zero() -> Self {
        DiagramSum::default()
    }

    /// The empty graph with coefficient one.
    pub fn one() -> Self {
        DiagramSum::from_key(CanonicalKey::unit(), Rational::one())
    }

    pub fn from_key(key: CanonicalKey, coeff: Rational) -> Self {
        let mut out = DiagramSum::zero();
        out.add_term(key, coeff);
        out
    }

    pub fn from_graph(g: &Multigraph, coeff: Rational) -> Result<Self> {
        Ok(DiagramSum::from_key(canonicalize(g)?, coeff))
    }

    pub fn add_term(&mut self, key: CanonicalKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &DiagramSum) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &DiagramSum, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn add(&self, other: &DiagramSum) -> DiagramSum {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &DiagramSum) -> DiagramSum {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, factor: &Rational) -> DiagramSum {
        let mut out = DiagramSum::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn neg(&self) -> DiagramSum {
        self.scale(&-Rational::one())
    }

    /// Bilinear product with disjoint union on basis elements.
    pub fn mul(&self, other: &DiagramSum) -> DiagramSum {
        let mut out = DiagramSum::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(ka.union(kb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> DiagramSum {
        (0..exp).fold(DiagramSum::one(), |acc, _| acc.mul(self))
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

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalKey, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.terms.keys()
    }

    pub fn coefficient(&self, key: &CanonicalKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient_of(&self, g: &Multigraph) -> Result<Rational> {
        Ok(self.coefficient(&canonicalize(g)?))
    }

    pub fn total(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn connected_part(&self) -> DiagramSum {
        self.filter(|k| k.is_connected())
    }

    pub fn disconnected_part(&self) -> DiagramSum {
        self.filter(|k| !k.is_connected())
    }

    pub fn all_connected(&self) -> bool {
        self.terms.keys().all(CanonicalKey::is_connected)
    }

    pub fn filter(&self, keep: impl Fn(&CanonicalKey) -> bool) -> DiagramSum {
        DiagramSum {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a linear map defined on basis elements.
    pub fn map_linear(
        &self,
        mut f: impl FnMut(&CanonicalKey) -> Result<DiagramSum>,
    ) -> Result<DiagramSum> {
        let mut out = DiagramSum::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }
}

impl FromIterator<(CanonicalKey, Rational)> for DiagramSum {
    fn from_iter<I: IntoIterator<Item = (CanonicalKey, Rational)>>(iter: I) -> Self {
        let mut out = DiagramSum::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

#[derive(Serialize)]
struct Entry {
    graph: Multigraph,
    coeff: String,
}

impl Serialize for DiagramSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            seq.serialize_element(&Entry {
                graph: k.to_graph(),
                coeff: rational::format(c),
            })?;
        }
        seq.end()
    }
}
