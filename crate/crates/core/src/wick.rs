//! Non-flat Wick matchings of `X^a Y^b` and the diagram maps built on them.
//!
//! Vertices `0..a` carry four legs (`X`), vertices `a..a+b` carry two (`Y`).
//! A matching pairs all legs with no pair inside a single vertex; the
//! induced multigraph has one edge per pair.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::canon::canonicalize;
use crate::diagram_sum::DiagramSum;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::rational;

/// Maximum number of legs enumerated by default.
pub const DEFAULT_LEG_CAP: usize = 24;

/// Legs as `(vertex, leg)` pairs, vertex-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegSet {
    x_count: usize,
    y_count: usize,
    legs: Vec<(usize, usize)>,
}

impl LegSet {
    pub fn new(a: usize, b: usize) -> Self {
        let mut legs = Vec::with_capacity(4 * a + 2 * b);
        for v in 0..a + b {
            let k = if v < a { 4 } else { 2 };
            legs.extend((0..k).map(|l| (v, l)));
        }
        LegSet {
            x_count: a,
            y_count: b,
            legs,
        }
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.x_count + self.y_count
    }

    pub fn leg(&self, index: usize) -> (usize, usize) {
        self.legs[index]
    }

    pub fn vertex_of(&self, index: usize) -> usize {
        self.legs[index].0
    }
}

/// A perfect non-flat matching as pairs of leg indices, each pair ordered
/// and the list ordered by first leg.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn to_graph(&self, legs: &LegSet) -> Multigraph {
        Multigraph::new(
            legs.vertex_count(),
            self.pairs
                .iter()
                .map(|&(i, j)| (legs.vertex_of(i), legs.vertex_of(j))),
        )
        .expect("non-flat matchings have no self-loops")
    }
}

fn check_cap(a: usize, b: usize, cap: usize) -> Result<()> {
    if a + b == 0 {
        return Err(Error::InvalidGraph("need at least one factor".into()));
    }
    let legs = 4 * a + 2 * b;
    if legs > cap {
        return Err(Error::LegCapExceeded { legs, cap });
    }
    Ok(())
}

/// Streams every non-flat perfect matching of the legs of `X^a Y^b`,
/// pairing the lowest unmatched leg first.
pub fn enumerate_matchings(a: usize, b: usize) -> Result<MatchingIter> {
    enumerate_matchings_with_cap(a, b, DEFAULT_LEG_CAP)
}

pub fn enumerate_matchings_with_cap(a: usize, b: usize, cap: usize) -> Result<MatchingIter> {
    check_cap(a, b, cap)?;
    let legs = LegSet::new(a, b);
    let n = legs.len();
    Ok(MatchingIter {
        vertex: (0..n).map(|i| legs.vertex_of(i)).collect(),
        legs,
        mate: vec![None; n],
        stack: Vec::with_capacity(n / 2),
        started: false,
        done: false,
    })
}

pub struct MatchingIter {
    legs: LegSet,
    vertex: Vec<usize>,
    mate: Vec<Option<usize>>,
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

impl MatchingIter {
    pub fn legs(&self) -> &LegSet {
        &self.legs
    }

    fn next_partner(&self, low: usize, after: usize) -> Option<usize> {
        (after + 1..self.vertex.len())
            .find(|&j| self.mate[j].is_none() && self.vertex[j] != self.vertex[low])
    }

    fn push(&mut self, low: usize, j: usize) {
        self.mate[low] = Some(j);
        self.mate[j] = Some(low);
        self.stack.push((low, j));
    }

    /// Extends the partial matching greedily; false on a dead end.
    fn descend(&mut self) -> bool {
        loop {
            let Some(low) = self.mate.iter().position(Option::is_none) else {
                return true;
            };
            match self.next_partner(low, low) {
                Some(j) => self.push(low, j),
                None => return false,
            }
        }
    }

    fn backtrack(&mut self) -> bool {
        while let Some((low, j)) = self.stack.pop() {
            self.mate[low] = None;
            self.mate[j] = None;
            if let Some(k) = self.next_partner(low, j) {
                self.push(low, k);
                return true;
            }
        }
        false
    }
}

impl Iterator for MatchingIter {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.done {
            return None;
        }
        let mut ok = if self.started {
            false
        } else {
            self.started = true;
            self.descend()
        };
        loop {
            if ok {
                return Some(Matching {
                    pairs: self.stack.clone(),
                });
            }
            if !self.backtrack() {
                self.done = true;
                return None;
            }
            ok = self.descend();
        }
    }
}

fn cache() -> &'static RwLock<HashMap<(usize, usize), DiagramSum>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), DiagramSum>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// All matchings of `X^a Y^b` bucketed by diagram class, connected or not.
pub fn p0(a: usize, b: usize) -> Result<DiagramSum> {
    p0_with_cap(a, b, DEFAULT_LEG_CAP)
}

/// Counts matchings per labelled multiplicity matrix instead of streaming
/// them: a symmetric loopless matrix `m` with row sums `d_v` is produced by
/// exactly `Π d_v! / Π_{u<v} m_uv!` matchings.
pub fn p0_with_cap(a: usize, b: usize, cap: usize) -> Result<DiagramSum> {
    check_cap(a, b, cap)?;
    if let Some(hit) = cache().read().expect("cache lock").get(&(a, b)) {
        return Ok(hit.clone());
    }
    let degrees: Vec<usize> = (0..a + b).map(|v| if v < a { 4 } else { 2 }).collect();
    let leg_weight: BigInt = degrees
        .iter()
        .map(|&d| rational::factorial(d as u64))
        .product();
    let mut counts: HashMap<Vec<Vec<u8>>, BigInt> = HashMap::new();
    let n = degrees.len();
    let mut m = vec![vec![0u8; n]; n];
    let mut remaining = degrees.clone();
    fill_matrices(&mut m, &mut remaining, 0, 1, &mut |m| {
        let denom: BigInt = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| rational::factorial(m[u][v] as u64))
            .product();
        *counts.entry(m.to_vec()).or_insert_with(BigInt::zero) += &leg_weight / denom;
    });
    let mut out = DiagramSum::zero();
    for (matrix, count) in counts {
        let g = Multigraph::from_multiplicities(
            &matrix
                .iter()
                .map(|r| r.iter().map(|&x| x as usize).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        );
        out.add_term(canonicalize(&g)?, rational::from_bigint(count));
    }
    cache()
        .write()
        .expect("cache lock")
        .insert((a, b), out.clone());
    Ok(out)
}

fn fill_matrices(
    m: &mut Vec<Vec<u8>>,
    remaining: &mut Vec<usize>,
    u: usize,
    v: usize,
    visit: &mut impl FnMut(&[Vec<u8>]),
) {
    let n = remaining.len();
    if u == n {
        visit(m);
        return;
    }
    if v == n {
        if remaining[u] == 0 {
            fill_matrices(m, remaining, u + 1, u + 2, visit);
        }
        return;
    }
    let max = remaining[u].min(remaining[v]);
    for k in 0..=max {
        remaining[u] -= k;
        remaining[v] -= k;
        m[u][v] = k as u8;
        m[v][u] = k as u8;
        fill_matrices(m, remaining, u, v + 1, visit);
        remaining[u] += k;
        remaining[v] += k;
    }
    m[u][v] = 0;
    m[v][u] = 0;
}

/// The same bucketing as [`p0`], driven by the streamed matchings.
pub fn p0_by_matchings(a: usize, b: usize, cap: usize) -> Result<DiagramSum> {
    let iter = enumerate_matchings_with_cap(a, b, cap)?;
    let legs = iter.legs().clone();
    let mut labelled: HashMap<Vec<(usize, usize)>, u64> = HashMap::new();
    for matching in iter {
        let g = matching.to_graph(&legs);
        *labelled.entry(g.edges().to_vec()).or_insert(0) += 1;
    }
    let mut out = DiagramSum::zero();
    for (edges, count) in labelled {
        let g = Multigraph::new(legs.vertex_count(), edges)?;
        out.add_term(canonicalize(&g)?, rational::int(count as i64));
    }
    Ok(out)
}

/// Connected part of [`p0`].
pub fn p(a: usize, b: usize) -> Result<DiagramSum> {
    Ok(p0(a, b)?.connected_part())
}

pub fn p_with_cap(a: usize, b: usize, cap: usize) -> Result<DiagramSum> {
    Ok(p0_with_cap(a, b, cap)?.connected_part())
}

/// `((4a+2b-1)!!, number of non-flat matchings)`.
pub fn matching_count_check(a: usize, b: usize) -> Result<(BigInt, BigInt)> {
    let legs = 4 * a + 2 * b;
    let total = rational::odd_double_factorial((legs / 2) as u64);
    if a + b == 1 {
        return Ok((total, BigInt::zero()));
    }
    let nonflat = p0(a, b)?.total();
    Ok((total, nonflat.to_integer()))
}

/// Independent oracle: walks every perfect pairing of the legs and counts
/// the ones without a same-vertex pair. Exponential; small inputs only.
pub fn brute_force_nonflat_count(a: usize, b: usize) -> u64 {
    let legs = LegSet::new(a, b);
    let vertex: Vec<usize> = (0..legs.len()).map(|i| legs.vertex_of(i)).collect();
    let mut free: Vec<usize> = (0..legs.len()).collect();
    let mut count = 0u64;
    all_pairings(&mut free, &mut |pairs| {
        if pairs.iter().all(|&(i, j)| vertex[i] != vertex[j]) {
            count += 1;
        }
    }, &mut Vec::new());
    count
}

fn all_pairings(
    free: &mut Vec<usize>,
    visit: &mut impl FnMut(&[(usize, usize)]),
    acc: &mut Vec<(usize, usize)>,
) {
    if free.is_empty() {
        visit(acc);
        return;
    }
    let first = free.remove(0);
    for idx in 0..free.len() {
        let partner = free.remove(idx);
        acc.push((first, partner));
        all_pairings(free, visit, acc);
        acc.pop();
        free.insert(idx, partner);
    }
    free.insert(0, first);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::rational::int;

    fn key(g: &Multigraph) -> crate::canon::CanonicalKey {
        canonicalize(g).unwrap()
    }

    #[test]
    fn two_y_vertices_have_two_matchings() {
        assert_eq!(enumerate_matchings(0, 2).unwrap().count(), 2);
        assert_eq!(enumerate_matchings(1, 0).unwrap().count(), 0);
    }

    #[test]
    fn two_x_vertices_give_the_sunset() {
        let legs = LegSet::new(2, 0);
        let all: Vec<_> = enumerate_matchings(2, 0).unwrap().collect();
        assert_eq!(all.len(), 24);
        for m in &all {
            assert_eq!(key(&m.to_graph(&legs)), key(&sunset()));
        }
        assert_eq!(p0(2, 0).unwrap(), DiagramSum::from_graph(&sunset(), int(24)).unwrap());
    }

    #[test]
    fn matchings_are_distinct_and_non_flat() {
        let iter = enumerate_matchings(1, 3).unwrap();
        let legs = iter.legs().clone();
        let all: Vec<_> = iter.collect();
        let unique: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), all.len());
        for m in &all {
            assert_eq!(m.pairs.len(), legs.len() / 2);
            assert!(m.pairs.iter().all(|&(i, j)| legs.vertex_of(i) != legs.vertex_of(j)));
        }
        assert_eq!(all.len() as u64, brute_force_nonflat_count(1, 3));
    }

    #[test]
    fn connected_maps() {
        assert_eq!(p(2, 1).unwrap(), DiagramSum::from_graph(&bubble_with_leg(), int(192)).unwrap());
        assert_eq!(p(0, 2).unwrap(), DiagramSum::from_graph(&double_edge(), int(2)).unwrap());
        assert_eq!(p(0, 3).unwrap(), DiagramSum::from_graph(&triangle(), int(8)).unwrap());
        assert_eq!(p(3, 0).unwrap(), DiagramSum::from_graph(&double_triangle(), int(1728)).unwrap());
    }

    #[test]
    fn disconnected_sunset_pair_in_four_x() {
        let s = p0(4, 0).unwrap();
        let two = sunset().disjoint_union(&sunset());
        assert_eq!(s.coefficient_of(&two).unwrap(), int(3 * 24 * 24));
    }

    #[test]
    fn fast_path_agrees_with_stream() {
        for (a, b) in [(2, 0), (0, 2), (2, 1), (1, 2), (0, 4), (3, 0), (2, 2), (3, 1), (1, 4)] {
            assert_eq!(
                p0(a, b).unwrap(),
                p0_by_matchings(a, b, DEFAULT_LEG_CAP).unwrap(),
                "a={a} b={b}"
            );
        }
    }

    #[test]
    fn count_check() {
        let (total, nonflat) = matching_count_check(2, 0).unwrap();
        assert_eq!((total, nonflat), (BigInt::from(105), BigInt::from(24)));
        let (total, nonflat) = matching_count_check(0, 2).unwrap();
        assert_eq!((total, nonflat), (BigInt::from(3), BigInt::from(2)));
        let (total, nonflat) = matching_count_check(1, 0).unwrap();
        assert_eq!((total, nonflat), (BigInt::from(3), BigInt::from(0)));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            p0_with_cap(4, 0, 12),
            Err(Error::LegCapExceeded { legs: 16, cap: 12 })
        ));
        assert!(enumerate_matchings(7, 0).is_err());
    }

    #[test]
    fn connected_classes_have_the_right_shape() {
        for (a, b) in [(3, 1), (2, 2), (4, 0), (1, 3)] {
            for k in p(a, b).unwrap().keys() {
                let g = k.to_graph();
                let mut vals = g.valences();
                vals.sort_unstable();
                let mut expected = vec![2; b];
                expected.extend(vec![4; a]);
                assert_eq!(vals, expected);
                assert_eq!(g.edge_count(), 2 * a + b);
                assert_eq!(g.degree(), a as i64 + 2 * b as i64 - 3);
            }
        }
    }
}
