//! Extraction–contraction Hopf algebra on vacuum diagrams.
//!
//! Products are disjoint unions, the unit is the empty graph. A coproduct
//! term `Γ̄ ⊗ Γ/Γ̄` runs over the full divergent selections of
//! [`crate::subgraph`].

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::canon::{canonicalize, CanonicalKey};
use crate::diagram_sum::DiagramSum;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::rational::{self, Rational};
use crate::series::{GradedSum, Laurent};
use crate::subgraph::{self, contract_unchecked, divergent_candidates, mask_vertices};

/// Recursion depth at which the antipode gives up.
pub const MAX_ANTIPODE_DEPTH: usize = 64;

/// `Σ c (left ⊗ right)` over pairs of classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphTensorSum {
    terms: BTreeMap<(CanonicalKey, CanonicalKey), Rational>,
}

impl GraphTensorSum {
    pub fn zero() -> Self {
        GraphTensorSum::default()
    }

    pub fn add_term(&mut self, left: CanonicalKey, right: CanonicalKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, left: &CanonicalKey, right: &CanonicalKey) -> Rational {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(CanonicalKey, CanonicalKey), &Rational)> {
        self.terms.iter()
    }

    /// Product in the tensor square.
    pub fn mul(&self, other: &GraphTensorSum) -> GraphTensorSum {
        let mut out = GraphTensorSum::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                out.add_term(l1.union(l2), r1.union(r2), c1 * c2);
            }
        }
        out
    }
}

impl Serialize for GraphTensorSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            left: Vec<Multigraph>,
            right: Multigraph,
            coeff: String,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for ((l, r), c) in &self.terms {
            seq.serialize_element(&Term {
                left: l.split().iter().map(CanonicalKey::to_graph).collect(),
                right: r.to_graph(),
                coeff: rational::format(c),
            })?;
        }
        seq.end()
    }
}

/// `Σ c (a ⊗ b ⊗ c)`, used for coassociativity.
pub type TripleTensorSum = BTreeMap<(CanonicalKey, CanonicalKey, CanonicalKey), Rational>;

fn add_triple(t: &mut TripleTensorSum, key: (CanonicalKey, CanonicalKey, CanonicalKey), c: Rational) {
    let entry = t.entry(key.clone()).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        t.remove(&key);
    }
}

/// `Γ ⊗ 𝟏 + 𝟏 ⊗ Γ + Σ Γ̄ ⊗ Γ/Γ̄` for connected `Γ`.
pub fn coproduct(g: &Multigraph) -> Result<GraphTensorSum> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut out = GraphTensorSum::zero();
    let unit = CanonicalKey::unit();
    if g.is_empty() {
        out.add_term(unit.clone(), unit, Rational::one());
        return Ok(out);
    }
    let key = canonicalize(g)?;
    out.add_term(key.clone(), unit.clone(), Rational::one());
    out.add_term(unit, key, Rational::one());
    for s in subgraph::divergent_subgraphs(g)? {
        let left = canonicalize(&s.subgraph(g))?;
        let right = canonicalize(&contract_unchecked(g, s.components()))?;
        out.add_term(left, right, Rational::one());
    }
    Ok(out)
}

/// Multiplicative extension of [`coproduct`] to any class.
pub fn coproduct_key(key: &CanonicalKey) -> Result<GraphTensorSum> {
    let mut out = GraphTensorSum::zero();
    out.add_term(CanonicalKey::unit(), CanonicalKey::unit(), Rational::one());
    for comp in key.split() {
        out = out.mul(&coproduct(&comp.to_graph())?);
    }
    Ok(out)
}

/// `(Δ ⊗ id)ΔΓ` and `(id ⊗ Δ)ΔΓ`.
pub fn coassociativity_sides(g: &Multigraph) -> Result<(TripleTensorSum, TripleTensorSum)> {
    let delta = coproduct(g)?;
    let mut left = TripleTensorSum::new();
    let mut right = TripleTensorSum::new();
    for ((l, r), c) in delta.iter() {
        for ((l1, l2), c1) in coproduct_key(l)?.iter() {
            add_triple(&mut left, (l1.clone(), l2.clone(), r.clone()), c * c1);
        }
        for ((r1, r2), c2) in coproduct_key(r)?.iter() {
            add_triple(&mut right, (l.clone(), r1.clone(), r2.clone()), c * c2);
        }
    }
    Ok((left, right))
}

pub fn is_coassociative_on(g: &Multigraph) -> Result<bool> {
    let (l, r) = coassociativity_sides(g)?;
    Ok(l == r)
}

/// Memo table for the recursive antipode, keyed by connected class.
#[derive(Default)]
pub struct AntipodeCache {
    memo: HashMap<CanonicalKey, DiagramSum>,
}

impl AntipodeCache {
    pub fn new() -> Self {
        AntipodeCache::default()
    }

    /// `𝒜(Γ) = -Γ - Σ 𝒜(Γ̄) · Γ/Γ̄`, extended multiplicatively.
    pub fn antipode_key(&mut self, key: &CanonicalKey) -> Result<DiagramSum> {
        self.antipode_at_depth(key, 0)
    }

    fn antipode_at_depth(&mut self, key: &CanonicalKey, depth: usize) -> Result<DiagramSum> {
        if depth > MAX_ANTIPODE_DEPTH {
            return Err(Error::RecursionDepth(MAX_ANTIPODE_DEPTH));
        }
        if key.is_unit() {
            return Ok(DiagramSum::one());
        }
        if !key.is_connected() {
            let mut out = DiagramSum::one();
            for comp in key.split() {
                out = out.mul(&self.antipode_at_depth(&comp, depth + 1)?);
            }
            return Ok(out);
        }
        if let Some(hit) = self.memo.get(key) {
            return Ok(hit.clone());
        }
        let g = key.to_graph();
        let mut out = DiagramSum::from_key(key.clone(), -Rational::one());
        for s in subgraph::divergent_subgraphs(&g)? {
            let left = canonicalize(&s.subgraph(&g))?;
            let right = canonicalize(&contract_unchecked(&g, s.components()))?;
            let a = self.antipode_at_depth(&left, depth + 1)?;
            out.add_scaled(&a.mul(&DiagramSum::from_key(right, Rational::one())), &-Rational::one());
        }
        self.memo.insert(key.clone(), out.clone());
        Ok(out)
    }
}

pub fn antipode(g: &Multigraph) -> Result<DiagramSum> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    AntipodeCache::new().antipode_key(&canonicalize(g)?)
}

/// Zimmermann's form `𝒜(Γ) = -Σ_F (-1)^{|F|} C_F Γ` over forests of proper
/// divergent subgraphs that are pairwise nested or vertex-disjoint.
pub fn forest_antipode(g: &Multigraph) -> Result<DiagramSum> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.is_empty() {
        return Ok(DiagramSum::one());
    }
    let candidates = divergent_candidates(g);
    let whole = (1u32 << g.vertex_count()) - 1;
    let mut forests = Vec::new();
    collect_forests(&candidates, 0, &mut Vec::new(), &mut forests);
    let mut out = DiagramSum::zero();
    for forest in forests {
        let mut product = DiagramSum::one();
        let mut nodes = forest.clone();
        nodes.push(whole);
        for &node in &nodes {
            let children: Vec<u32> = forest
                .iter()
                .copied()
                .filter(|&c| c != node && c & node == c)
                .filter(|&c| {
                    !forest
                        .iter()
                        .any(|&d| d != c && d != node && d & node == d && c & d == c)
                })
                .collect();
            let verts = mask_vertices(node);
            let local = g.induced(&verts);
            let index: HashMap<usize, usize> =
                verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let child_sets: Vec<Vec<usize>> = children
                .iter()
                .map(|&c| mask_vertices(c).iter().map(|v| index[v]).collect())
                .collect();
            let contracted = contract_unchecked(&local, &child_sets);
            product = product.mul(&DiagramSum::from_graph(&contracted, Rational::one())?);
        }
        let sign = if forest.len() % 2 == 0 { -Rational::one() } else { Rational::one() };
        out.add_scaled(&product, &sign);
    }
    Ok(out)
}

fn collect_forests(candidates: &[u32], start: usize, chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    out.push(chosen.clone());
    for i in start..candidates.len() {
        let c = candidates[i];
        let compatible = chosen
            .iter()
            .all(|&d| c & d == 0 || c & d == c || c & d == d);
        if compatible {
            chosen.push(c);
            collect_forests(candidates, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// `𝒜̃(Γ) = 𝒜(Γ)` if `deg Γ ≤ 0`, else zero; multiplicative on products.
pub fn twisted_antipode_key(cache: &mut AntipodeCache, key: &CanonicalKey) -> Result<DiagramSum> {
    let mut out = DiagramSum::one();
    for comp in key.split() {
        if comp.to_graph().degree() > 0 {
            return Ok(DiagramSum::zero());
        }
        out = out.mul(&cache.antipode_key(&comp)?);
    }
    Ok(out)
}

pub fn twisted_antipode(g: &Multigraph) -> Result<DiagramSum> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    twisted_antipode_key(&mut AntipodeCache::new(), &canonicalize(g)?)
}

/// `(𝒜̃ ⊗ id)ΔΓ` multiplied out: a linear combination of products whose
/// valuation is the renormalised value of `Γ`.
pub fn bphz_expansion(g: &Multigraph) -> Result<DiagramSum> {
    let mut cache = AntipodeCache::new();
    let mut out = DiagramSum::zero();
    for ((l, r), c) in coproduct(g)?.iter() {
        let left = twisted_antipode_key(&mut cache, l)?;
        out.add_scaled(&left.mul(&DiagramSum::from_key(r.clone(), Rational::one())), c);
    }
    Ok(out)
}

/// One term `coeff · b^{bubble_power} · contracted` of a bubble reduction,
/// `b` standing for the value of the bubble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BphzTerm {
    pub bubble_power: usize,
    pub contracted: Multigraph,
    #[serde(serialize_with = "serialize_rational")]
    pub coeff: Rational,
}

fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BphzReduction {
    pub terms: Vec<BphzTerm>,
}

impl BphzReduction {
    /// Replaces `b` by `η/48 = β α⁻² / 48`.
    pub fn with_symbolic_bubble(&self) -> Result<GradedSum> {
        let mut out = GradedSum::zero();
        for t in &self.terms {
            let scalar = Laurent::eta_power(
                t.coeff.clone() / rational::pow(&rational::int(48), t.bubble_power as u32),
                t.bubble_power as u32,
            );
            let diagram = DiagramSum::from_graph(&t.contracted, Rational::one())?;
            out = out.add(&GradedSum::mono(0, 0, diagram).mul_scalar(&scalar));
        }
        Ok(out)
    }

    /// `Σ coeff · b^k · value(contracted)`.
    pub fn evaluate(&self, bubble_value: f64, value: impl Fn(&Multigraph) -> Result<f64>) -> Result<f64> {
        let mut total = 0.0;
        for t in &self.terms {
            total += rational::to_f64(&t.coeff)
                * bubble_value.powi(t.bubble_power as i32)
                * value(&t.contracted)?;
        }
        Ok(total)
    }
}

/// Bubble form of the renormalised value: `Σ_S (-b)^{|S|} C_S Γ` over sets
/// `S` of pairwise disjoint bubbles (full two-vertex, three-edge
/// subgraphs, `Γ` itself included when it is a bubble).
///
/// For graphs of positive degree this is the valuation of
/// [`bphz_expansion`]; for the sunset and the double triangle it keeps
/// the bare graph and omits the twisted-antipode counterterm, which the
/// `γ` shift handles separately.
pub fn bphz_reduce(g: &Multigraph) -> Result<BphzReduction> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let m = g.multiplicities();
    let mut bubbles = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if m[u][v] == 3 {
                bubbles.push(vec![u, v]);
            }
        }
    }
    for mask in divergent_candidates(g) {
        let verts = mask_vertices(mask);
        if !(verts.len() == 2 && m[verts[0]][verts[1]] == 3) {
            return Err(Error::Internal(format!(
                "divergent subgraph {verts:?} is not a bubble"
            )));
        }
    }
    let mut acc: BTreeMap<(usize, CanonicalKey), Rational> = BTreeMap::new();
    let mut stack = Vec::new();
    bubble_sets(&bubbles, 0, 0u32, &mut stack, &mut |chosen| -> Result<()> {
        let comps: Vec<Vec<usize>> = chosen.iter().map(|&i| bubbles[i].clone()).collect();
        let contracted = contract_unchecked(g, &comps);
        let key = canonicalize(&contracted)?;
        let sign = if chosen.len() % 2 == 0 { Rational::one() } else { -Rational::one() };
        *acc.entry((chosen.len(), key)).or_insert_with(Rational::zero) += sign;
        Ok(())
    })?;
    let terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((bubble_power, key), coeff)| BphzTerm {
            bubble_power,
            contracted: key.to_graph(),
            coeff,
        })
        .collect();
    Ok(BphzReduction { terms })
}

fn bubble_sets(
    bubbles: &[Vec<usize>],
    start: usize,
    used: u32,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    visit(chosen)?;
    for i in start..bubbles.len() {
        let mask = bubbles[i].iter().fold(0u32, |acc, &v| acc | 1 << v);
        if mask & used == 0 {
            chosen.push(i);
            bubble_sets(bubbles, i + 1, used | mask, chosen, visit)?;
            chosen.pop();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::rational::int;

    fn key(g: &Multigraph) -> CanonicalKey {
        canonicalize(g).unwrap()
    }

    #[test]
    fn coproduct_of_bubble_with_leg() {
        let g = bubble_with_leg();
        let d = coproduct(&g).unwrap();
        assert_eq!(d.len(), 3);
        let unit = CanonicalKey::unit();
        assert_eq!(d.coefficient(&key(&g), &unit), int(1));
        assert_eq!(d.coefficient(&unit, &key(&g)), int(1));
        assert_eq!(d.coefficient(&key(&bubble()), &key(&double_edge())), int(1));
    }

    #[test]
    fn primitive_coproducts() {
        for g in [double_edge(), bubble(), double_triangle()] {
            assert_eq!(coproduct(&g).unwrap().len(), 2);
        }
    }

    #[test]
    fn antipode_of_bubble_with_leg() {
        let g = bubble_with_leg();
        let mut expected = DiagramSum::from_graph(&g, int(-1)).unwrap();
        expected.add_term(key(&bubble().disjoint_union(&double_edge())), int(1));
        assert_eq!(antipode(&g).unwrap(), expected);
        assert_eq!(forest_antipode(&g).unwrap(), expected);
    }

    #[test]
    fn primitive_antipodes() {
        for g in [bubble(), double_triangle(), sunset()] {
            let expected = DiagramSum::from_graph(&g, int(-1)).unwrap();
            assert_eq!(antipode(&g).unwrap(), expected);
            assert_eq!(forest_antipode(&g).unwrap(), expected);
        }
    }

    #[test]
    fn twisted_antipode_by_degree() {
        assert_eq!(twisted_antipode(&bubble()).unwrap(), DiagramSum::from_graph(&bubble(), int(-1)).unwrap());
        assert!(twisted_antipode(&double_edge()).unwrap().is_zero());
        assert_eq!(twisted_antipode(&sunset()).unwrap(), DiagramSum::from_graph(&sunset(), int(-1)).unwrap());
    }

    #[test]
    fn reductions() {
        let r = bphz_reduce(&bubble_with_leg()).unwrap();
        assert_eq!(r.terms.len(), 2);
        assert_eq!((r.terms[0].bubble_power, r.terms[0].coeff.clone()), (0, int(1)));
        assert_eq!(key(&r.terms[0].contracted), key(&bubble_with_leg()));
        assert_eq!((r.terms[1].bubble_power, r.terms[1].coeff.clone()), (1, int(-1)));
        assert_eq!(key(&r.terms[1].contracted), key(&double_edge()));

        let r = bphz_reduce(&double_triangle()).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert_eq!(key(&r.terms[0].contracted), key(&double_triangle()));

        let r = bphz_reduce(&bubble()).unwrap();
        assert_eq!(r.terms.len(), 2);
        assert_eq!(r.terms[1].contracted, Multigraph::point());
        assert_eq!(r.terms[1].coeff, int(-1));
    }

    #[test]
    fn expansion_matches_reduction_for_convergent_graph() {
        let g = bubble_with_leg();
        let e = bphz_expansion(&g).unwrap();
        let mut expected = DiagramSum::from_graph(&g, int(1)).unwrap();
        expected.add_term(key(&bubble().disjoint_union(&double_edge())), int(-1));
        assert_eq!(e, expected);
    }

    #[test]
    fn coassociative_on_small_graphs() {
        let necklace = Multigraph::new(
            4,
            [(0, 1), (0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (2, 3), (0, 3)],
        )
        .unwrap();
        for g in [bubble_with_leg(), bubble(), necklace] {
            assert!(is_coassociative_on(&g).unwrap());
        }
    }
}
