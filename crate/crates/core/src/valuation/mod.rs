//! Values `Π_N(Γ)` of vacuum diagrams at finite cutoff, the counterterms,
//! cutoff scans and a Gaussian free field sampler.
//!
//! Three evaluators compute the same integral:
//!
//! * [`pi_momentum`] sums over loop momenta with one propagator per edge;
//! * [`pi_grid`] averages the position-space integrand over a uniform grid
//!   fine enough that the average is exact;
//! * [`pi_spectral`] collapses each multi-edge into the Fourier coefficients
//!   of a power of `G_N` and then sums over the loops of the simple graph.
//!   It is much cheaper on the dipole-shaped diagrams used for counterterms.

mod cutoff;
mod fft;
mod grid;
mod mc;
mod momentum;
mod routing;
mod scan;
mod spectral;
mod sum;
mod valuate;

use serde::Serialize;

pub use cutoff::{ball, green_value, l1, lambda, propagator, Cutoff, Mode};
pub use grid::{pi_grid, pi_grid_with, required_grid};
pub use mc::{gff_moments, gff_samples, GffReport, GffSampleConfig, MomentEstimate};
pub use momentum::{pi_momentum, pi_momentum_with};
pub use scan::{
    bphz_boundedness_scan, counterterm_scan, linear_fit, BoundednessRow, BoundednessScan,
    CountertermScan, GrowthFit, LinearFit,
};
pub use spectral::{pi_spectral, pi_spectral_with, SpectralKernels};
pub use sum::Compensated;
pub use valuate::{counterterms, Bindings, Counterterms, Valuator};

/// Default cap on the number of summand evaluations per diagram.
pub const DEFAULT_WORK_BUDGET: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Momentum,
    Grid,
    Spectral,
}

impl std::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "momentum" => Ok(Method::Momentum),
            "grid" => Ok(Method::Grid),
            "spectral" => Ok(Method::Spectral),
            other => Err(crate::Error::Parse(format!("unknown valuation method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValuationResult {
    pub value: f64,
    pub method: Method,
    pub cutoff: Cutoff,
    pub work: u64,
}
