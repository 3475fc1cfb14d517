use super::cutoff::{propagator, Cutoff};
use super::routing::{route, KernelTable, LoopSum};
use super::{Method, ValuationResult, DEFAULT_WORK_BUDGET};
use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// `Π_N(Γ)` as a sum over the `L` loop momenta of a connected graph, each
/// edge carrying one propagator. Costs `|K_N|^L` summands.
pub fn pi_momentum(g: &Multigraph, cutoff: Cutoff) -> Result<ValuationResult> {
    pi_momentum_with(g, cutoff, DEFAULT_WORK_BUDGET)
}

pub fn pi_momentum_with(g: &Multigraph, cutoff: Cutoff, budget: f64) -> Result<ValuationResult> {
    if !g.is_connected() || g.is_empty() {
        return Err(Error::Disconnected);
    }
    let table = KernelTable::from_fn(cutoff.n() as i32, propagator);
    let routing = route(g.vertex_count(), g.edges(), &vec![1; g.edge_count()])?;
    let kernels = vec![&table; g.edge_count()];
    let (value, work) = LoopSum::new(&routing, kernels)?.evaluate(budget)?;
    Ok(ValuationResult {
        value,
        method: Method::Momentum,
        cutoff,
        work,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn trivial_values() {
        let r = pi_momentum(&Multigraph::point(), Cutoff(3)).unwrap();
        assert_eq!((r.value, r.work), (1.0, 1));
        for g in [bubble(), sunset(), double_triangle(), bubble_with_leg()] {
            assert!((pi_momentum(&g, Cutoff(0)).unwrap().value - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn double_edge_is_sum_of_squares() {
        let c = Cutoff(2);
        let direct: f64 = c.modes().into_iter().map(|k| propagator(k).powi(2)).sum();
        let r = pi_momentum(&double_edge(), c).unwrap();
        assert!((r.value - direct).abs() < 1e-14 * direct);
        assert_eq!(r.work, 25);
    }

    #[test]
    fn budget_is_enforced() {
        let err = pi_momentum_with(&double_triangle(), Cutoff(4), 1e3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert!(pi_momentum(&Multigraph::point().disjoint_union(&bubble()), Cutoff(1)).is_err());
    }

    #[test]
    fn monotone_in_cutoff() {
        let vals: Vec<f64> = (0..4).map(|n| pi_momentum(&bubble(), Cutoff(n)).unwrap().value).collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
    }
}
