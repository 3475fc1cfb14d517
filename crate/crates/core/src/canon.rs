//! Canonical labelling of multigraphs up to vertex relabelling.
//!
//! Each connected component is encoded as `[n, m(0,1), m(0,2), m(1,2), ...]`
//! (the column-wise upper triangle of its multiplicity matrix) under the
//! lexicographically smallest admissible vertex order. The key of a graph is
//! the sorted concatenation of its component codes, so the key of a disjoint
//! union is the merge of the component code lists.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Largest connected component accepted by [`canonicalize`].
pub const MAX_COMPONENT_VERTICES: usize = 12;

/// Components up to this size are minimized over all valence-respecting
/// vertex orders; larger ones use colour refinement with individualization.
pub const EXHAUSTIVE_LIMIT: usize = 8;

/// Byte string identifying an isomorphism class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    /// Key of the empty graph.
    pub fn unit() -> Self {
        CanonicalKey(Vec::new())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Component codes in sorted order.
    pub fn components(&self) -> Vec<&[u8]> {
        let mut out = Vec::new();
        let mut rest = self.0.as_slice();
        while let Some(&n) = rest.first() {
            let len = code_len(n as usize);
            out.push(&rest[..len]);
            rest = &rest[len..];
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn vertex_count(&self) -> usize {
        self.components().iter().map(|c| c[0] as usize).sum()
    }

    /// Key of the disjoint union.
    pub fn union(&self, other: &CanonicalKey) -> CanonicalKey {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let mut codes = self.components();
        codes.extend(other.components());
        from_codes(codes)
    }

    /// The canonical representative of the class.
    pub fn to_graph(&self) -> Multigraph {
        let mut g = Multigraph::empty();
        for code in self.components() {
            g = g.disjoint_union(&decode_component(code));
        }
        g
    }

    /// Keys of the individual components.
    pub fn split(&self) -> Vec<CanonicalKey> {
        self.components()
            .into_iter()
            .map(|c| CanonicalKey(c.to_vec()))
            .collect()
    }

    pub fn to_hex(&self) -> String {
        if self.0.is_empty() {
            return "unit".into();
        }
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        if text == "unit" {
            return Ok(CanonicalKey::unit());
        }
        if !text.len().is_multiple_of(2) {
            return Err(Error::Parse(format!("odd-length key {text:?}")));
        }
        let bytes = (0..text.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&text[i..i + 2], 16))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("bad key {text:?}: {e}")))?;
        let mut rest = bytes.as_slice();
        while let Some(&n) = rest.first() {
            let len = code_len(n as usize);
            if n == 0 || rest.len() < len {
                return Err(Error::Parse(format!("truncated key {text:?}")));
            }
            rest = &rest[len..];
        }
        let key = CanonicalKey(bytes);
        if canonicalize(&key.to_graph())? != key {
            return Err(Error::Parse(format!("non-canonical key {text:?}")));
        }
        Ok(key)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        CanonicalKey::from_hex(&text).map_err(serde::de::Error::custom)
    }
}

fn code_len(n: usize) -> usize {
    1 + n * (n - 1) / 2
}

fn from_codes(mut codes: Vec<&[u8]>) -> CanonicalKey {
    codes.sort_unstable();
    CanonicalKey(codes.concat())
}

fn decode_component(code: &[u8]) -> Multigraph {
    let n = code[0] as usize;
    let mut m = vec![vec![0usize; n]; n];
    let mut idx = 1;
    for j in 1..n {
        for i in 0..j {
            m[i][j] = code[idx] as usize;
            m[j][i] = code[idx] as usize;
            idx += 1;
        }
    }
    Multigraph::from_multiplicities(&m)
}

/// Canonical key of `g`; invariant under relabelling.
pub fn canonicalize(g: &Multigraph) -> Result<CanonicalKey> {
    let m = g.multiplicities();
    if m.iter().flatten().any(|&x| x > u8::MAX as usize) {
        return Err(Error::InvalidGraph("edge multiplicity above 255".into()));
    }
    let mut codes = Vec::new();
    for comp in g.components() {
        if comp.len() > MAX_COMPONENT_VERTICES {
            return Err(Error::SizeExceeded {
                vertices: comp.len(),
                limit: MAX_COMPONENT_VERTICES,
            });
        }
        let sub: Vec<Vec<u8>> = comp
            .iter()
            .map(|&u| comp.iter().map(|&v| m[u][v] as u8).collect())
            .collect();
        codes.push(component_code(&sub));
    }
    let refs: Vec<&[u8]> = codes.iter().map(Vec::as_slice).collect();
    Ok(from_codes(refs))
}

/// Relabels `g` into its canonical representative.
pub fn canonical_form(g: &Multigraph) -> Result<Multigraph> {
    Ok(canonicalize(g)?.to_graph())
}

pub fn are_isomorphic(a: &Multigraph, b: &Multigraph) -> Result<bool> {
    Ok(canonicalize(a)? == canonicalize(b)?)
}

fn component_code(m: &[Vec<u8>]) -> Vec<u8> {
    if m.len() <= EXHAUSTIVE_LIMIT {
        exhaustive_code(m)
    } else {
        refined_code(m)
    }
}

fn code_for_order(m: &[Vec<u8>], order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut code = Vec::with_capacity(code_len(n));
    code.push(n as u8);
    for j in 1..n {
        for i in 0..j {
            code.push(m[order[i]][order[j]]);
        }
    }
    code
}

fn valence(m: &[Vec<u8>], v: usize) -> usize {
    m[v].iter().map(|&x| x as usize).sum()
}

/// Minimum code over all orders listing vertices by non-decreasing valence.
pub(crate) fn exhaustive_code(m: &[Vec<u8>]) -> Vec<u8> {
    let n = m.len();
    let mut cells: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut by_valence: Vec<(usize, usize)> = (0..n).map(|v| (valence(m, v), v)).collect();
    by_valence.sort_unstable();
    for (val, v) in by_valence {
        match cells.last_mut() {
            Some((cv, cell)) if *cv == val => cell.push(v),
            _ => cells.push((val, vec![v])),
        }
    }
    let slots: Vec<usize> = cells
        .iter()
        .enumerate()
        .flat_map(|(c, (_, cell))| std::iter::repeat_n(c, cell.len()))
        .collect();
    let mut search = Exhaustive {
        m,
        cells: cells.into_iter().map(|(_, c)| c).collect(),
        slots,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        current: vec![n as u8],
        best: None,
    };
    search.run();
    search.best.expect("at least one order")
}

struct Exhaustive<'a> {
    m: &'a [Vec<u8>],
    cells: Vec<Vec<usize>>,
    slots: Vec<usize>,
    order: Vec<usize>,
    used: Vec<bool>,
    current: Vec<u8>,
    best: Option<Vec<u8>>,
}

impl Exhaustive<'_> {
    fn run(&mut self) {
        let depth = self.order.len();
        if depth == self.slots.len() {
            if self.best.as_ref().is_none_or(|b| self.current < *b) {
                self.best = Some(self.current.clone());
            }
            return;
        }
        let cell = self.slots[depth];
        for idx in 0..self.cells[cell].len() {
            let v = self.cells[cell][idx];
            if self.used[v] {
                continue;
            }
            let mark = self.current.len();
            for i in 0..depth {
                self.current.push(self.m[self.order[i]][v]);
            }
            let prune = match &self.best {
                Some(b) => self.current.as_slice().cmp(&b[..self.current.len()]) == Ordering::Greater,
                None => false,
            };
            if !prune {
                self.used[v] = true;
                self.order.push(v);
                self.run();
                self.order.pop();
                self.used[v] = false;
            }
            self.current.truncate(mark);
        }
    }
}

/// Refines an ordered colouring until equitable. Colours are ranks in
/// `0..k`; the refined colouring is a function of the input colouring and
/// the multigraph only, so it commutes with relabelling.
fn refine(m: &[Vec<u8>], colors: &mut [usize]) {
    let n = m.len();
    loop {
        let k = colors.iter().max().map_or(0, |&c| c + 1);
        let mut signatures: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut counts = vec![0usize; k];
                for w in 0..n {
                    counts[colors[w]] += m[v][w] as usize;
                }
                (colors[v], counts, v)
            })
            .collect();
        signatures.sort_unstable();
        let mut next = vec![0usize; n];
        let mut rank = 0;
        for i in 0..n {
            if i > 0 && (signatures[i].0, &signatures[i].1) != (signatures[i - 1].0, &signatures[i - 1].1) {
                rank += 1;
            }
            next[signatures[i].2] = rank;
        }
        let changed = rank + 1 != k;
        colors.copy_from_slice(&next);
        if !changed {
            return;
        }
    }
}

fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    let raw: Vec<usize> = colors
        .iter()
        .enumerate()
        .map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 })
        .collect();
    let mut distinct = raw.clone();
    distinct.sort_unstable();
    distinct.dedup();
    raw.iter()
        .map(|c| distinct.binary_search(c).expect("present"))
        .collect()
}

/// Minimum code over the leaves of the individualization-refinement tree.
pub(crate) fn refined_code(m: &[Vec<u8>]) -> Vec<u8> {
    let n = m.len();
    let mut colors = vec![0usize; n];
    refine(m, &mut colors);
    let mut best = None;
    search_refined(m, colors, &mut best);
    best.expect("at least one leaf")
}

fn search_refined(m: &[Vec<u8>], colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
    let n = m.len();
    let k = colors.iter().max().map_or(0, |&c| c + 1);
    if k == n {
        let mut order = vec![0; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let code = code_for_order(m, &order);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    let mut sizes = vec![0usize; k];
    for &c in &colors {
        sizes[c] += 1;
    }
    let target = (0..k).find(|&c| sizes[c] > 1).expect("non-discrete colouring");
    for v in 0..n {
        if colors[v] == target {
            let mut next = individualize(&colors, v);
            refine(m, &mut next);
            search_refined(m, next, best);
        }
    }
}
