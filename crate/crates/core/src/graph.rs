//! Vacuum Feynman diagrams as loopless multigraphs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite multigraph without self-loops.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically, so
/// two graphs with the same labelled structure compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Multigraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawGraph> for Multigraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        Multigraph::new(raw.vertices, raw.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Multigraph> for RawGraph {
    fn from(g: Multigraph) -> Self {
        RawGraph {
            vertices: g.vertices,
            edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Multigraph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{vertices}"
                )));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        Ok(Multigraph {
            vertices,
            edges: normalized,
        })
    }

    /// The empty graph, unit of the disjoint-union product.
    pub fn empty() -> Self {
        Multigraph {
            vertices: 0,
            edges: Vec::new(),
        }
    }

    /// A single vertex without edges.
    pub fn point() -> Self {
        Multigraph {
            vertices: 1,
            edges: Vec::new(),
        }
    }

    /// Two vertices joined by `multiplicity` parallel edges.
    pub fn dipole(multiplicity: usize) -> Self {
        Multigraph {
            vertices: 2,
            edges: vec![(0, 1); multiplicity],
        }
    }

    /// Builds a graph from a symmetric multiplicity matrix (diagonal ignored).
    pub fn from_multiplicities(matrix: &[Vec<usize>]) -> Self {
        let n = matrix.len();
        let mut edges = Vec::new();
        for (u, row) in matrix.iter().enumerate() {
            for v in u + 1..n {
                edges.extend(std::iter::repeat_n((u, v), row[v]));
            }
        }
        Multigraph { vertices: n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices == 0
    }

    /// Power-counting degree `3(|V| - 1) - |E|`. The empty graph has degree 0.
    pub fn degree(&self) -> i64 {
        if self.vertices == 0 {
            return 0;
        }
        3 * (self.vertices as i64 - 1) - self.edges.len() as i64
    }

    pub fn is_divergent(&self) -> bool {
        self.degree() <= 0
    }

    /// Number of edge endpoints at `v` (the leg count).
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut out = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            out[u] += 1;
            out[v] += 1;
        }
        out
    }

    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.vertices]; self.vertices];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            m[v][u] += 1;
        }
        m
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex. Isolated vertices form their own components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut out = Vec::new();
        for start in 0..self.vertices {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True iff the underlying simple graph is connected. The empty graph
    /// and the single vertex count as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// `|E| - |V| + 1` for connected graphs.
    pub fn loop_number(&self) -> Result<usize> {
        if !self.is_connected() || self.vertices == 0 {
            return Err(Error::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.vertices)
    }

    /// Subgraph induced on `vertices` (all edges between them), relabelled
    /// in the order given.
    pub fn induced(&self, vertices: &[usize]) -> Multigraph {
        let mut index = vec![usize::MAX; self.vertices];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Multigraph::new(vertices.len(), edges).expect("induced subgraph of a valid graph")
    }

    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let shift = self.vertices;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Multigraph::new(self.vertices + other.vertices, edges).expect("union of valid graphs")
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Multigraph> {
        if perm.len() != self.vertices {
            return Err(Error::InvalidGraph(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.vertices
            )));
        }
        let mut seen = vec![false; self.vertices];
        for &p in perm {
            if p >= self.vertices || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidGraph("not a permutation".into()));
            }
        }
        Multigraph::new(
            self.vertices,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
        )
    }

    /// Graphviz text with deterministic ordering.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.vertices {
            let _ = writeln!(out, "  {v};");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// Named diagrams appearing throughout the expansion.
pub mod named {
    use super::Multigraph;

    /// Two vertices, three edges: the only divergent proper subdiagram.
    pub fn bubble() -> Multigraph {
        Multigraph::dipole(3)
    }

    /// Two two-valent vertices joined by a double edge.
    pub fn double_edge() -> Multigraph {
        Multigraph::dipole(2)
    }

    /// Two four-valent vertices joined by four edges.
    pub fn sunset() -> Multigraph {
        Multigraph::dipole(4)
    }

    /// Three four-valent vertices, a double edge between every pair.
    pub fn double_triangle() -> Multigraph {
        Multigraph::new(3, [(0, 1), (0, 1), (0, 2), (0, 2), (1, 2), (1, 2)]).unwrap()
    }

    /// Three two-valent vertices on a cycle.
    pub fn triangle() -> Multigraph {
        Multigraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    /// The connected diagram of `X^2 Y`: a bubble between the two
    /// four-valent vertices, each also joined once to the two-valent vertex.
    pub fn bubble_with_leg() -> Multigraph {
        Multigraph::new(3, [(0, 1), (0, 1), (0, 1), (0, 2), (1, 2)]).unwrap()
    }

    /// The connected diagram of `X Y^2`.
    pub fn double_edge_chain() -> Multigraph {
        Multigraph::new(3, [(0, 1), (0, 1), (0, 2), (0, 2)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn rejects_self_loops_and_out_of_range() {
        assert!(Multigraph::new(2, [(1, 1)]).is_err());
        assert!(Multigraph::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn edges_are_normalized() {
        let g = Multigraph::new(3, [(2, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 1), (1, 2)]);
    }

    #[test]
    fn degrees_of_named_diagrams() {
        assert_eq!(bubble().degree(), 0);
        assert_eq!(sunset().degree(), -1);
        assert_eq!(double_triangle().degree(), 0);
        assert_eq!(double_edge().degree(), 1);
    }

    #[test]
    fn connectivity() {
        assert!(bubble().is_connected());
        assert!(Multigraph::point().is_connected());
        let two = sunset().disjoint_union(&sunset());
        assert!(!two.is_connected());
        assert_eq!(two.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn loop_numbers() {
        assert_eq!(bubble().loop_number().unwrap(), 2);
        assert_eq!(sunset().loop_number().unwrap(), 3);
        assert_eq!(double_triangle().loop_number().unwrap(), 4);
        assert_eq!(
            sunset().disjoint_union(&bubble()).loop_number(),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn dot_export() {
        let dot = bubble().to_dot();
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert_eq!(dot.lines().filter(|l| l.trim().ends_with(';') && !l.contains("--")).count(), 2);
        assert_eq!(Multigraph::empty().to_dot(), "graph G {\n}\n");
        let dot = bubble_with_leg().to_dot();
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert_eq!(dot, bubble_with_leg().to_dot());
    }

    #[test]
    fn json_shape() {
        let g = Multigraph::new(3, [(1, 2), (0, 1)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"vertices":3,"edges":[[0,1],[1,2]]}"#);
        let back: Multigraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Multigraph>(r#"{"vertices":1,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn valences() {
        assert_eq!(bubble_with_leg().valences(), vec![4, 4, 2]);
    }
}
