//! Perturbative analysis of the Φ⁴₃ partition function.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`], [`canon`], [`subgraph`]: vacuum multigraphs, canonical keys,
//!   divergent subdiagrams and contraction.
//! * [`wick`], [`diagram_sum`]: Wick matchings of `X^a Y^b` bucketed into
//!   exact linear combinations of diagram classes.
//! * [`series`], [`cumulants`]: moments and cumulants as polynomials in the
//!   couplings `α`, `β` with diagrammatic coefficients.
//! * [`hopf`]: the extraction–contraction Hopf algebra on graphs, the
//!   polynomial Hopf algebra on `X`, `Y`, and the commutativity check
//!   between them.
//! * [`valuation`]: numerical values of diagrams at finite cutoff, the
//!   counterterms, BPHZ scans and a Gaussian free field sampler.
//! * [`borel`]: the zero-dimensional model, its asymptotic and Borel series,
//!   Padé–Borel resummation and remainder scans.
//! * [`verify`]: the acceptance checks shared by the test suite and the CLI.

pub mod borel;
pub mod canon;
pub mod cumulants;
pub mod diagram_sum;
pub mod error;
pub mod graph;
pub mod hopf;
pub mod json;
pub mod rational;
pub mod series;
pub mod subgraph;
pub mod valuation;
pub mod verify;
pub mod wick;

pub use canon::{canonicalize, CanonicalKey};
pub use diagram_sum::DiagramSum;
pub use error::{Error, Result};
pub use graph::Multigraph;
pub use rational::Rational;
pub use subgraph::{contract, divergent_subgraphs, SubgraphSelection};
