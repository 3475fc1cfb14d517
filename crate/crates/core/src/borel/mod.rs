//! The zero-dimensional `φ⁴` model: quadrature of `Z(ε)`, its divergent
//! asymptotic series, the Borel transform and Padé–Borel resummation, plus a
//! small remainder scan for the three-dimensional model.

pub mod pade;
pub mod quadrature;
pub mod remainder;
pub mod sokal;
pub mod zero_dim;

pub use pade::{default_degrees, pade_borel, BorelPade, PadeBorelResult};
pub use remainder::{phi43_remainder_scan, RemainderConfig, RemainderScan};
pub use sokal::{sokal_scan, SokalCell, SokalReport};
pub use zero_dim::{
    asymptotic_coeffs, borel_coeffs, sqrt_two_pi, z_phi_form, z_quadrature, AsymptoticSeries, BorelSeries,
};
