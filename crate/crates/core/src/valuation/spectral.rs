use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rustfft::FftDirection;

use super::cutoff::{propagator, Cutoff};
use super::fft::{fft3, green_grid, wrap_index};
use super::routing::{route, KernelTable, LoopSum};
use super::{Method, ValuationResult, DEFAULT_WORK_BUDGET};
use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Fourier coefficients `Ĥ_m(q)` of `G_N^m`, supported on `|q| ≤ mN`.
/// `G_N^m` has per-axis frequencies at most `mN`, so a grid of side
/// `2mN + 1` recovers them without aliasing.
pub struct SpectralKernels {
    cutoff: Cutoff,
    tables: Mutex<BTreeMap<usize, Arc<KernelTable>>>,
}

impl SpectralKernels {
    pub fn new(cutoff: Cutoff) -> Self {
        SpectralKernels {
            cutoff,
            tables: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub(crate) fn kernel(&self, m: usize) -> Arc<KernelTable> {
        if let Some(t) = self.tables.lock().expect("kernel cache").get(&m) {
            return t.clone();
        }
        let table = Arc::new(self.build(m));
        self.tables.lock().expect("kernel cache").insert(m, table.clone());
        table
    }

    /// `Ĥ_m(q)`; zero outside the support.
    pub fn coefficient(&self, m: usize, q: [i32; 3]) -> f64 {
        self.kernel(m).get(q).unwrap_or(0.0)
    }

    fn build(&self, m: usize) -> KernelTable {
        let n = self.cutoff.n() as i32;
        if m <= 1 || n == 0 {
            let radius = n * m as i32;
            return KernelTable::from_fn(radius, |k| if m == 0 { 1.0 } else { propagator(k) });
        }
        let radius = m as i32 * n;
        let side = 2 * radius as usize + 1;
        let g = green_grid(self.cutoff, side);
        let mut data: Vec<Complex64> = g.iter().map(|&x| Complex64::new(x.powi(m as i32), 0.0)).collect();
        fft3(&mut data, side, FftDirection::Forward);
        let norm = (side * side * side) as f64;
        KernelTable::from_fn(radius, |q| data[wrap_index(q, side)].re / norm)
    }
}

/// `Π_N(Γ)` on the simple graph underlying `Γ`, with each edge of
/// multiplicity `m` carrying `Ĥ_m`. The spanning tree keeps the heaviest
/// edges so loops run over the smallest supports.
pub fn pi_spectral(g: &Multigraph, cutoff: Cutoff) -> Result<ValuationResult> {
    pi_spectral_with(g, &SpectralKernels::new(cutoff), DEFAULT_WORK_BUDGET)
}

pub fn pi_spectral_with(g: &Multigraph, kernels: &SpectralKernels, budget: f64) -> Result<ValuationResult> {
    if !g.is_connected() || g.is_empty() {
        return Err(Error::Disconnected);
    }
    let mult = g.multiplicities();
    let mut edges = Vec::new();
    let mut weight = Vec::new();
    for (u, row) in mult.iter().enumerate() {
        for (v, &m) in row.iter().enumerate().skip(u + 1) {
            if m > 0 {
                edges.push((u, v));
                weight.push(m);
            }
        }
    }
    let routing = route(g.vertex_count(), &edges, &weight)?;
    let tables: Vec<Arc<KernelTable>> = weight.iter().map(|&m| kernels.kernel(m)).collect();
    let refs: Vec<&KernelTable> = tables.iter().map(|t| t.as_ref()).collect();
    let (value, work) = LoopSum::new(&routing, refs)?.evaluate(budget)?;
    Ok(ValuationResult {
        value,
        method: Method::Spectral,
        cutoff: kernels.cutoff(),
        work,
    })
}
