//! Hopf-algebraic renormalisation: the graph algebra, the polynomial algebra
//! on `X`, `Y`, and the maps relating them.

pub mod commutativity;
pub mod graph;
pub mod poly;

pub use commutativity::{verify_commutativity, verify_mixed, CommutativityReport};
pub use graph::{
    antipode, bphz_expansion, bphz_reduce, coproduct, forest_antipode, twisted_antipode,
    BphzReduction, BphzTerm, GraphTensorSum,
};
pub use poly::{antipode_hat, chi_eta, coproduct_hat, exp_deform, m_mult, HMonomial, HPolynomial};
