//! Momentum routing on a connected graph and the pruned loop-momentum sum.

use rayon::prelude::*;

use super::cutoff::{ball, l1, Mode};
use super::sum::Compensated;
use crate::error::{Error, Result};

/// A real function on the integer points of an ℓ¹ ball, zero outside.
#[derive(Clone, Debug)]
pub(crate) struct KernelTable {
    radius: i32,
    side: usize,
    values: Vec<f64>,
    support: Vec<Mode>,
}

impl KernelTable {
    pub fn from_fn(radius: i32, f: impl Fn(Mode) -> f64) -> Self {
        let side = 2 * radius as usize + 1;
        let mut values = vec![0.0; side * side * side];
        let support = ball(radius);
        for &k in &support {
            values[Self::index(radius, side, k)] = f(k);
        }
        KernelTable {
            radius,
            side,
            values,
            support,
        }
    }

    fn index(radius: i32, side: usize, k: Mode) -> usize {
        let s = |c: i32| (c + radius) as usize;
        (s(k[0]) * side + s(k[1])) * side + s(k[2])
    }

    #[inline]
    pub fn get(&self, k: Mode) -> Option<f64> {
        if l1(k) > self.radius as i64 {
            return None;
        }
        Some(self.values[Self::index(self.radius, self.side, k)])
    }

    pub fn support(&self) -> &[Mode] {
        &self.support
    }
}

/// Spanning tree plus one independent momentum per non-tree edge. Edge
/// `(u, v)` is oriented `u → v`; `coeffs[e]` lists `(loop, ±1)` pairs.
#[derive(Clone, Debug)]
pub(crate) struct Routing {
    pub loops: Vec<usize>,
    pub tree: Vec<usize>,
    pub coeffs: Vec<Vec<(usize, i32)>>,
}

/// Kruskal on edges sorted by decreasing `priority`, so the tree prefers
/// high-priority edges.
pub(crate) fn route(vertices: usize, edges: &[(usize, usize)], priority: &[usize]) -> Result<Routing> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| priority[b].cmp(&priority[a]).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let (mut tree, mut loops) = (Vec::new(), Vec::new());
    for e in order {
        let (u, v) = edges[e];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            loops.push(e);
        } else {
            parent[ru] = rv;
            tree.push(e);
        }
    }
    if tree.len() + 1 != vertices.max(1) {
        return Err(Error::Disconnected);
    }
    tree.sort_unstable();
    loops.sort_unstable();

    // Root the tree at 0: parent edge and depth for every vertex.
    let mut adj = vec![Vec::new(); vertices];
    for &e in &tree {
        let (u, v) = edges[e];
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut up = vec![None; vertices];
    let mut depth = vec![0usize; vertices];
    let mut seen = vec![false; vertices];
    let mut stack = vec![0];
    if vertices > 0 {
        seen[0] = true;
    }
    while let Some(x) = stack.pop() {
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                up[y] = Some((x, e));
                depth[y] = depth[x] + 1;
                stack.push(y);
            }
        }
    }

    let mut coeffs = vec![Vec::new(); edges.len()];
    for (li, &f) in loops.iter().enumerate() {
        coeffs[f].push((li, 1));
        // The loop momentum enters at `b` and must return to `a` along the tree.
        let (a, b) = edges[f];
        let (mut x, mut y) = (b, a);
        let mut down = Vec::new();
        while x != y {
            if depth[x] >= depth[y] {
                let (px, e) = up[x].expect("non-root vertex has a parent");
                // Traversed x → px.
                let s = if edges[e].0 == x { 1 } else { -1 };
                coeffs[e].push((li, s));
                x = px;
            } else {
                let (py, e) = up[y].expect("non-root vertex has a parent");
                down.push((py, y, e));
                y = py;
            }
        }
        for (from, _to, e) in down {
            // Traversed from → to on the way down to `a`.
            let s = if edges[e].0 == from { 1 } else { -1 };
            coeffs[e].push((li, s));
        }
    }
    Ok(Routing { loops, tree, coeffs })
}

/// `Σ_{loop momenta} Π_e K_e(k_e)`, where each tree momentum is the signed sum
/// of the loop momenta through it and configurations with a tree momentum
/// outside its kernel's support contribute zero.
pub(crate) struct LoopSum<'a> {
    routing: &'a Routing,
    kernels: Vec<&'a KernelTable>,
    /// Tree edges whose momentum is fixed once loop `d` is assigned.
    ready: Vec<Vec<usize>>,
    constant: f64,
}

impl<'a> LoopSum<'a> {
    pub fn new(routing: &'a Routing, kernels: Vec<&'a KernelTable>) -> Result<Self> {
        let l = routing.loops.len();
        let mut ready = vec![Vec::new(); l];
        let mut constant = 1.0;
        for &e in &routing.tree {
            match routing.coeffs[e].iter().map(|&(i, _)| i).max() {
                Some(d) => ready[d].push(e),
                None => constant *= kernels[e].get([0, 0, 0]).unwrap_or(0.0),
            }
        }
        Ok(LoopSum {
            routing,
            kernels,
            ready,
            constant,
        })
    }

    pub fn estimated_work(&self) -> f64 {
        self.routing
            .loops
            .iter()
            .map(|&f| self.kernels[f].support().len() as f64)
            .product()
    }

    pub fn evaluate(&self, budget: f64) -> Result<(f64, u64)> {
        let estimated = self.estimated_work();
        if estimated > budget {
            return Err(Error::BudgetExceeded { estimated, budget });
        }
        if self.routing.loops.is_empty() {
            return Ok((self.constant, 1));
        }
        let first = self.kernels[self.routing.loops[0]].support();
        let parts: Vec<(Compensated, u64)> = first
            .par_iter()
            .map(|&q| {
                let mut acc = Compensated::default();
                let mut work = 0u64;
                let mut k = vec![[0i32; 3]; self.routing.loops.len()];
                self.visit(0, q, &mut k, self.constant, &mut acc, &mut work);
                (acc, work)
            })
            .collect();
        let mut total = Compensated::default();
        let mut work = 0;
        for (acc, w) in &parts {
            total.merge(acc);
            work += w;
        }
        Ok((total.value(), work))
    }

    fn visit(&self, d: usize, q: Mode, k: &mut [Mode], w: f64, acc: &mut Compensated, work: &mut u64) {
        *work += 1;
        k[d] = q;
        let f = self.routing.loops[d];
        let mut w = w * self.kernels[f].get(q).unwrap_or(0.0);
        for &e in &self.ready[d] {
            let mut m = [0i32; 3];
            for &(i, s) in &self.routing.coeffs[e] {
                for c in 0..3 {
                    m[c] += s * k[i][c];
                }
            }
            match self.kernels[e].get(m) {
                Some(v) => w *= v,
                None => return,
            }
        }
        if d + 1 == k.len() {
            acc.add(w);
            return;
        }
        let next = self.routing.loops[d + 1];
        for &q in self.kernels[next].support() {
            self.visit(d + 1, q, k, w, acc, work);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every vertex conserves momentum for arbitrary loop momenta.
    #[test]
    fn routing_conserves_momentum() {
        let edges = [(0, 1), (0, 1), (1, 2), (0, 2), (2, 3), (2, 3), (0, 3), (1, 3)];
        let r = route(4, &edges, &[1; 8]).unwrap();
        assert_eq!(r.loops.len(), edges.len() - 3);
        let loop_k: Vec<i32> = (0..r.loops.len()).map(|i| 3 * i as i32 + 1).collect();
        let mut net = [0i32; 4];
        for (e, &(u, v)) in edges.iter().enumerate() {
            let m: i32 = r.coeffs[e].iter().map(|&(i, s)| s * loop_k[i]).sum();
            net[u] -= m;
            net[v] += m;
        }
        assert_eq!(net, [0; 4]);
    }

    #[test]
    fn priority_keeps_heavy_edges_in_tree() {
        let r = route(3, &[(0, 1), (1, 2), (0, 2)], &[1, 2, 2]).unwrap();
        assert_eq!(r.loops, vec![0]);
    }

    #[test]
    fn disconnected_is_rejected() {
        assert!(route(3, &[(0, 1)], &[1]).is_err());
    }
}
