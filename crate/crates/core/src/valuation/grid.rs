use rayon::prelude::*;

use super::cutoff::Cutoff;
use super::fft::green_grid;
use super::sum::Compensated;
use super::{Method, ValuationResult, DEFAULT_WORK_BUDGET};
use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Smallest grid side on which the position-space average is exact: a
/// vertex of valence `d` sees frequencies up to `dN` per coordinate.
pub fn required_grid(g: &Multigraph, cutoff: Cutoff) -> usize {
    let n = cutoff.n() as usize;
    let dmax = g.valences().into_iter().max().unwrap_or(0).max(2);
    dmax * n + 1
}

/// `Π_N(Γ)` as the average of `Π_e G_N(x_u - x_v)` over `M^{3(|V|-1)}` grid
/// points, with vertex 0 fixed at the origin.
pub fn pi_grid(g: &Multigraph, cutoff: Cutoff, side: usize) -> Result<ValuationResult> {
    pi_grid_with(g, cutoff, side, DEFAULT_WORK_BUDGET)
}

pub fn pi_grid_with(g: &Multigraph, cutoff: Cutoff, side: usize, budget: f64) -> Result<ValuationResult> {
    if !g.is_connected() || g.is_empty() {
        return Err(Error::Disconnected);
    }
    let required = required_grid(g, cutoff);
    if side < required {
        return Err(Error::GridTooSmall {
            grid: side,
            cutoff: cutoff.n(),
            required,
        });
    }
    let free = g.vertex_count() - 1;
    let cells = side * side * side;
    let estimated = (cells as f64).powi(free as i32);
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let green = green_grid(cutoff, side);
    if free == 0 {
        return Ok(ValuationResult {
            value: 1.0,
            method: Method::Grid,
            cutoff,
            work: 1,
        });
    }
    // Edges become evaluable once their later endpoint is placed.
    let mut ready = vec![Vec::new(); g.vertex_count()];
    for &(u, v) in g.edges() {
        ready[u.max(v)].push(u.min(v));
    }
    let coords: Vec<[usize; 3]> = (0..cells)
        .map(|i| [i / (side * side), (i / side) % side, i % side])
        .collect();
    let walker = Walker {
        side,
        green: &green,
        coords: &coords,
        ready: &ready,
    };
    let parts: Vec<(Compensated, u64)> = (0..cells)
        .into_par_iter()
        .map(|p| {
            let mut pos = vec![0usize; g.vertex_count()];
            let mut acc = Compensated::default();
            let mut work = 0;
            walker.place(1, p, &mut pos, 1.0, &mut acc, &mut work);
            (acc, work)
        })
        .collect();
    let mut total = Compensated::default();
    let mut work = 0;
    for (acc, w) in &parts {
        total.merge(acc);
        work += w;
    }
    Ok(ValuationResult {
        value: total.value() / estimated,
        method: Method::Grid,
        cutoff,
        work,
    })
}

struct Walker<'a> {
    side: usize,
    green: &'a [f64],
    coords: &'a [[usize; 3]],
    ready: &'a [Vec<usize>],
}

impl Walker<'_> {
    fn place(&self, v: usize, p: usize, pos: &mut [usize], w: f64, acc: &mut Compensated, work: &mut u64) {
        pos[v] = p;
        let mut w = w;
        let a = self.coords[p];
        for &u in &self.ready[v] {
            let b = self.coords[pos[u]];
            let s = self.side;
            let d = |c: usize| (a[c] + s - b[c]) % s;
            w *= self.green[(d(0) * s + d(1)) * s + d(2)];
        }
        if v + 1 == pos.len() {
            *work += 1;
            acc.add(w);
            return;
        }
        for q in 0..self.coords.len() {
            self.place(v + 1, q, pos, w, acc, work);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::valuation::pi_momentum;

    #[test]
    fn single_vertex() {
        assert_eq!(pi_grid(&Multigraph::point(), Cutoff(2), 9).unwrap().value, 1.0);
    }

    #[test]
    fn grid_too_small() {
        let err = pi_grid(&bubble(), Cutoff(2), 6).unwrap_err();
        assert_eq!(
            err,
            Error::GridTooSmall {
                grid: 6,
                cutoff: 2,
                required: 7
            }
        );
    }

    #[test]
    fn matches_momentum_sum_on_small_graphs() {
        for g in [double_edge(), bubble(), triangle(), double_edge_chain()] {
            for n in [1, 3] {
                let c = Cutoff(n);
                let a = pi_grid(&g, c, required_grid(&g, c)).unwrap().value;
                let b = pi_momentum(&g, c).unwrap().value;
                assert!((a - b).abs() <= 1e-10 * b, "{g:?} N={n}: {a} vs {b}");
            }
        }
    }
}
