//! Full subgraph selections, divergent subdiagrams and contraction.

use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// A family of pairwise vertex-disjoint vertex sets of a parent graph.
///
/// Every component carries all parent edges between its vertices, so the
/// selected edge set is determined by the vertex sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgraphSelection {
    components: Vec<Vec<usize>>,
}

impl SubgraphSelection {
    /// Normalizes the order of vertices and components.
    pub fn new(components: Vec<Vec<usize>>) -> Self {
        let mut components: Vec<Vec<usize>> = components
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        components.sort();
        SubgraphSelection { components }
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.components.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// Indices into `parent.edges()` of the selected edges.
    pub fn edge_indices(&self, parent: &Multigraph) -> Vec<usize> {
        let owner = self.owner(parent.vertex_count());
        parent
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| owner[u].is_some() && owner[u] == owner[v])
            .map(|(i, _)| i)
            .collect()
    }

    fn owner(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for (c, comp) in self.components.iter().enumerate() {
            for &v in comp {
                if v < n {
                    owner[v] = Some(c);
                }
            }
        }
        owner
    }

    /// The selected subgraph as a standalone (possibly disconnected) graph.
    pub fn subgraph(&self, parent: &Multigraph) -> Multigraph {
        self.components
            .iter()
            .fold(Multigraph::empty(), |acc, c| acc.disjoint_union(&parent.induced(c)))
    }

    pub fn validate(&self, parent: &Multigraph) -> Result<()> {
        let n = parent.vertex_count();
        if self.components.is_empty() {
            return Err(Error::InvalidSelection("empty selection".into()));
        }
        let mut seen = vec![false; n];
        for comp in &self.components {
            if comp.len() < 2 {
                return Err(Error::InvalidSelection(
                    "components need at least two vertices".into(),
                ));
            }
            for &v in comp {
                if v >= n {
                    return Err(Error::InvalidSelection(format!("vertex {v} out of range")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidSelection(format!("vertex {v} selected twice")));
                }
            }
            if !parent.induced(comp).is_connected() {
                return Err(Error::InvalidSelection(format!(
                    "component {comp:?} is not connected"
                )));
            }
        }
        if self.edge_indices(parent).len() == parent.edge_count() && seen.iter().all(|&s| s) {
            return Err(Error::InvalidSelection("selection is not proper".into()));
        }
        Ok(())
    }
}

/// Connected full vertex subsets with at least two vertices and degree
/// `<= 0`, excluding the whole vertex set. Bitmask-encoded.
pub fn divergent_candidates(g: &Multigraph) -> Vec<u32> {
    let n = g.vertex_count();
    assert!(n <= 20, "divergent subgraph scan limited to 20 vertices");
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let m = g.multiplicities();
    let mut out = Vec::new();
    for mask in 1..full {
        if mask.count_ones() < 2 {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut edges = 0i64;
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                edges += m[u][v] as i64;
            }
        }
        if 3 * (verts.len() as i64 - 1) - edges > 0 {
            continue;
        }
        if g.induced(&verts).is_connected() {
            out.push(mask);
        }
    }
    out
}

pub(crate) fn mask_vertices(mask: u32) -> Vec<usize> {
    (0..32).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Every non-empty family of pairwise vertex-disjoint divergent candidates.
pub fn divergent_subgraphs(g: &Multigraph) -> Result<Vec<SubgraphSelection>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let candidates = divergent_candidates(g);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    disjoint_families(&candidates, 0, 0, &mut chosen, &mut out);
    let mut selections: Vec<SubgraphSelection> = out
        .into_iter()
        .map(|family| SubgraphSelection::new(family.into_iter().map(mask_vertices).collect()))
        .collect();
    selections.sort();
    Ok(selections)
}

fn disjoint_families(
    candidates: &[u32],
    start: usize,
    used: u32,
    chosen: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    for i in start..candidates.len() {
        let c = candidates[i];
        if c & used != 0 {
            continue;
        }
        chosen.push(c);
        out.push(chosen.clone());
        disjoint_families(candidates, i + 1, used | c, chosen, out);
        chosen.pop();
    }
}

/// Collapses every component of `s` to one vertex. Internal edges vanish,
/// external edges reattach. Vertices are numbered by first occurrence.
pub fn contract(g: &Multigraph, s: &SubgraphSelection) -> Result<Multigraph> {
    s.validate(g)?;
    Ok(contract_unchecked(g, s.components()))
}

pub(crate) fn contract_unchecked(g: &Multigraph, components: &[Vec<usize>]) -> Multigraph {
    let n = g.vertex_count();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            owner[v] = Some(c);
        }
    }
    let mut new_index = vec![usize::MAX; n];
    let mut comp_index = vec![usize::MAX; components.len()];
    let mut next = 0;
    for v in 0..n {
        match owner[v] {
            Some(c) => {
                if comp_index[c] == usize::MAX {
                    comp_index[c] = next;
                    next += 1;
                }
                new_index[v] = comp_index[c];
            }
            None => {
                new_index[v] = next;
                next += 1;
            }
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| owner[u].is_none() || owner[u] != owner[v])
        .map(|&(u, v)| (new_index[u], new_index[v]));
    Multigraph::new(next, edges).expect("contraction of a valid selection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonicalize;
    use crate::graph::named::*;

    #[test]
    fn bubble_with_leg_has_exactly_its_bubble() {
        let g = bubble_with_leg();
        let sels = divergent_subgraphs(&g).unwrap();
        assert_eq!(sels.len(), 1);
        assert_eq!(sels[0].components(), &[vec![0, 1]]);
        assert_eq!(
            canonicalize(&sels[0].subgraph(&g)).unwrap(),
            canonicalize(&bubble()).unwrap()
        );
        assert_eq!(sels[0].edge_indices(&g), vec![0, 1, 2]);
    }

    #[test]
    fn bubble_has_no_proper_divergent_subgraph() {
        assert!(divergent_subgraphs(&bubble()).unwrap().is_empty());
        assert!(divergent_subgraphs(&double_triangle()).unwrap().is_empty());
        assert!(divergent_subgraphs(&double_edge()).unwrap().is_empty());
    }

    #[test]
    fn contracting_the_bubble_leaves_a_double_edge() {
        let g = bubble_with_leg();
        let s = SubgraphSelection::new(vec![vec![0, 1]]);
        let c = contract(&g, &s).unwrap();
        assert_eq!(canonicalize(&c).unwrap(), canonicalize(&double_edge()).unwrap());
        assert_eq!(c.degree(), g.degree());
    }

    #[test]
    fn contracting_a_pair_of_the_double_triangle() {
        let s = SubgraphSelection::new(vec![vec![0, 1]]);
        let c = contract(&double_triangle(), &s).unwrap();
        assert_eq!(canonicalize(&c).unwrap(), canonicalize(&sunset()).unwrap());
    }

    #[test]
    fn invalid_selections_are_rejected() {
        let g = bubble_with_leg();
        assert!(contract(&g, &SubgraphSelection::new(vec![])).is_err());
        assert!(contract(&g, &SubgraphSelection::new(vec![vec![0]])).is_err());
        assert!(contract(&g, &SubgraphSelection::new(vec![vec![0, 1, 2]])).is_err());
        assert!(contract(&g, &SubgraphSelection::new(vec![vec![0, 1], vec![1, 2]])).is_err());
        let two = sunset().disjoint_union(&sunset());
        assert!(contract(&two, &SubgraphSelection::new(vec![vec![0, 2]])).is_err());
    }

    #[test]
    fn necklace_has_two_disjoint_bubbles() {
        let necklace = Multigraph::new(
            4,
            [(0, 1), (0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (2, 3), (0, 3)],
        )
        .unwrap();
        let sels = divergent_subgraphs(&necklace).unwrap();
        assert_eq!(sels.len(), 3);
        let both = sels.iter().find(|s| s.components().len() == 2).unwrap();
        let c = contract(&necklace, both).unwrap();
        assert_eq!(canonicalize(&c).unwrap(), canonicalize(&double_edge()).unwrap());
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let two = sunset().disjoint_union(&bubble());
        assert_eq!(divergent_subgraphs(&two), Err(Error::Disconnected));
    }
}
