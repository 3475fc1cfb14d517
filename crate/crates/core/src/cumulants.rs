//! Moments `μ_n = E[(-αX - βY)^n]` and cumulants `κ_n` as polynomials in
//! `α`, `β` with diagrammatic coefficients.

use num_traits::{One, Zero};

use crate::canon::canonicalize;
use crate::diagram_sum::DiagramSum;
use crate::error::{Error, Result};
use crate::graph::named;
use crate::rational::{self, Rational};
use crate::series::{GradedSum, MomentAlgebra, PowerSeries};
use crate::wick;

pub const DEFAULT_ORDER_CAP: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CumulantConfig {
    pub order_cap: usize,
    pub leg_cap: usize,
}

impl Default for CumulantConfig {
    fn default() -> Self {
        CumulantConfig {
            order_cap: DEFAULT_ORDER_CAP,
            leg_cap: wick::DEFAULT_LEG_CAP,
        }
    }
}

impl CumulantConfig {
    fn check(&self, n: usize) -> Result<()> {
        if n < 2 || n > self.order_cap {
            return Err(Error::OrderCap {
                order: n,
                min: 2,
                max: self.order_cap,
            });
        }
        Ok(())
    }
}

fn sign(n: usize) -> Rational {
    if n.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn dressed(
    n: usize,
    cfg: &CumulantConfig,
    diagrams: impl Fn(usize, usize, usize) -> Result<DiagramSum>,
) -> Result<GradedSum> {
    let mut out = GradedSum::zero();
    for m in 0..=n {
        let factor = sign(n) * rational::from_bigint(rational::binomial(n as u64, m as u64));
        let part = diagrams(m, n - m, cfg.leg_cap)?;
        out.add_part_scaled((m as i32, (n - m) as u32), &part, &factor);
    }
    Ok(out)
}

/// `(-1)^n Σ_m C(n,m) α^m β^{n-m} P₀(X^m Y^{n-m})`.
pub fn moment(n: usize) -> Result<GradedSum> {
    moment_with(n, &CumulantConfig::default())
}

pub fn moment_with(n: usize, cfg: &CumulantConfig) -> Result<GradedSum> {
    cfg.check(n)?;
    dressed(n, cfg, wick::p0_with_cap)
}

/// Cumulants from moments, `κ_n = μ_n - Σ_{m=1}^{n-1} C(n-1, m-1) κ_m μ_{n-m}`.
/// `mu[0]` is ignored; the output has `κ_0 = 0`.
pub fn leonov_shiryaev<T: MomentAlgebra>(mu: &[T]) -> Vec<T> {
    let mut kappa: Vec<T> = vec![T::additive_zero(); mu.len()];
    for n in 1..mu.len() {
        let mut k = mu[n].clone();
        for m in 1..n {
            if kappa[m].vanishes() || mu[n - m].vanishes() {
                continue;
            }
            let c = rational::from_bigint(rational::binomial(n as u64 - 1, m as u64 - 1));
            k.add_scaled(&kappa[m].product(&mu[n - m]), &-c);
        }
        kappa[n] = k;
    }
    kappa
}

/// Moments from cumulants through the coefficients of
/// `exp(Σ κ_n t^n / n!)`, via `n f_n = Σ_k k g_k f_{n-k}`.
pub fn moments_from_exponential<T: MomentAlgebra>(kappa: &[T]) -> Vec<T> {
    let len = kappa.len();
    let fact = |k: usize| rational::from_bigint(rational::factorial(k as u64));
    let mut f: Vec<T> = vec![T::additive_zero(); len];
    if len > 0 {
        f[0] = T::multiplicative_one();
    }
    for n in 1..len {
        let mut acc = T::additive_zero();
        for k in 1..=n {
            if kappa[k].vanishes() || f[n - k].vanishes() {
                continue;
            }
            let w = rational::int(k as i64) / (fact(k) * rational::int(n as i64));
            acc.add_scaled(&kappa[k].product(&f[n - k]), &w);
        }
        f[n] = acc;
    }
    f.into_iter()
        .enumerate()
        .map(|(n, fn_)| {
            let mut out = T::additive_zero();
            out.add_scaled(&fn_, &fact(n));
            out
        })
        .collect()
}

/// `μ_0 .. μ_order` with the centred seeds `μ_0 = 1`, `μ_1 = 0`.
pub fn moments_up_to(order: usize, cfg: &CumulantConfig) -> Result<Vec<GradedSum>> {
    let mut mu = vec![GradedSum::one(), GradedSum::zero()];
    for n in 2..=order {
        mu.push(moment_with(n, cfg)?);
    }
    mu.truncate(order + 1);
    Ok(mu)
}

/// `κ_0 .. κ_order` by the recursion; each is checked to be connected.
pub fn cumulants_up_to(order: usize, cfg: &CumulantConfig) -> Result<Vec<GradedSum>> {
    if order >= 2 {
        cfg.check(order)?;
    }
    let mu = moments_up_to(order, cfg)?;
    let kappa = leonov_shiryaev(&mu);
    for (n, k) in kappa.iter().enumerate().skip(2) {
        if !k.all_connected() {
            return Err(Error::Internal(format!(
                "disconnected diagram survived in cumulant {n}"
            )));
        }
    }
    Ok(kappa)
}

pub fn cumulant(n: usize) -> Result<GradedSum> {
    cumulant_with(n, &CumulantConfig::default())
}

pub fn cumulant_with(n: usize, cfg: &CumulantConfig) -> Result<GradedSum> {
    cfg.check(n)?;
    Ok(cumulants_up_to(n, cfg)?.swap_remove(n))
}

/// `(-1)^n Σ_m C(n,m) α^m β^{n-m} P(X^m Y^{n-m})`, connected matchings only.
pub fn cumulant_direct(n: usize) -> Result<GradedSum> {
    cumulant_direct_with(n, &CumulantConfig::default())
}

pub fn cumulant_direct_with(n: usize, cfg: &CumulantConfig) -> Result<GradedSum> {
    cfg.check(n)?;
    dressed(n, cfg, wick::p_with_cap)
}

/// True iff every class in the `α^m β^{n-m}` part of `kappa_n` has degree
/// `2n - m - 3`.
pub fn degree_law_holds(n: usize, kappa_n: &GradedSum) -> bool {
    kappa_n.iter().all(|(&(m, j), part)| {
        m >= 0
            && m as usize + j as usize == n
            && part
                .keys()
                .all(|k| k.to_graph().degree() == 2 * n as i64 - m as i64 - 3)
    })
}

/// `-log E[exp(-αX - βY - γ)] = γ - Σ_{n≥2} κ_n / n!` as a series in `ε`
/// after `α = ε/4`, `β = 3ε² B` and `γ = (3/4)ε² S - (9/2)ε³ T`, where
/// `B`, `S`, `T` stand for the values of the bubble, sunset and double
/// triangle and products of them are disjoint unions.
pub fn log_partition_series(order: usize, include_gamma: bool) -> Result<PowerSeries<DiagramSum>> {
    log_partition_series_with(order, include_gamma, &CumulantConfig::default())
}

pub fn log_partition_series_with(
    order: usize,
    include_gamma: bool,
    cfg: &CumulantConfig,
) -> Result<PowerSeries<DiagramSum>> {
    if order > cfg.order_cap {
        return Err(Error::OrderCap {
            order,
            min: 0,
            max: cfg.order_cap,
        });
    }
    let mut coeffs = vec![DiagramSum::zero(); order + 1];
    if include_gamma {
        let sunset = DiagramSum::from_graph(&named::sunset(), rational::ratio(3, 4))?;
        let triangle = DiagramSum::from_graph(&named::double_triangle(), rational::ratio(-9, 2))?;
        if order >= 2 {
            coeffs[2].add_assign(&sunset);
        }
        if order >= 3 {
            coeffs[3].add_assign(&triangle);
        }
    }
    if order < 2 {
        return Ok(PowerSeries { coeffs });
    }
    let kappa = cumulants_up_to(order, cfg)?;
    let bubble = canonicalize(&named::bubble())?;
    for (n, k) in kappa.iter().enumerate().skip(2) {
        let inv_fact = Rational::one() / rational::from_bigint(rational::factorial(n as u64));
        for (&(m, j), part) in k.iter() {
            let eps_power = m as usize + 2 * j as usize;
            if eps_power > order {
                continue;
            }
            let scalar = -inv_fact.clone()
                / rational::pow(&rational::int(4), m as u32)
                * rational::pow(&rational::int(3), j);
            let bubbles = DiagramSum::from_key(bubble.clone(), Rational::one()).pow(j);
            coeffs[eps_power].add_scaled(&part.mul(&bubbles), &scalar);
        }
    }
    Ok(PowerSeries { coeffs })
}

/// Scalar check of the recursion against the exponential formula on a
/// generic sequence of rationals.
pub fn recursion_matches_exponential(mu: &[Rational]) -> bool {
    let kappa = leonov_shiryaev(mu);
    let back = moments_from_exponential(&kappa);
    back.iter().zip(mu).skip(1).all(|(a, b)| a == b) && mu.first().is_none_or(|m| m.is_one() || m.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::rational::int;

    #[test]
    fn second_moment() {
        let mu2 = moment(2).unwrap();
        assert_eq!(mu2.part(2, 0), DiagramSum::from_graph(&sunset(), int(24)).unwrap());
        assert_eq!(mu2.part(0, 2), DiagramSum::from_graph(&double_edge(), int(2)).unwrap());
        assert!(mu2.part(1, 1).is_zero());
    }

    #[test]
    fn third_moment_coefficients() {
        let mu3 = moment(3).unwrap();
        assert_eq!(mu3.part(3, 0).coefficient_of(&double_triangle()).unwrap(), int(-1728));
        assert_eq!(mu3.part(2, 1).coefficient_of(&bubble_with_leg()).unwrap(), int(-576));
        assert_eq!(mu3.part(1, 2).coefficient_of(&double_edge_chain()).unwrap(), int(-72));
        assert_eq!(mu3.part(0, 3).coefficient_of(&triangle()).unwrap(), int(-8));
    }

    #[test]
    fn fourth_cumulant_cancels_disconnected_sunsets() {
        let mu2 = moment(2).unwrap();
        let mu4 = moment(4).unwrap();
        let k4 = cumulant(4).unwrap();
        assert_eq!(k4, mu4.sub(&mu2.mul(&mu2).scale(&int(3))));
        let two = sunset().disjoint_union(&sunset());
        assert_eq!(mu4.part(4, 0).coefficient_of(&two).unwrap(), int(3 * 576));
        assert!(k4.all_connected());
    }

    #[test]
    fn direct_route_agrees() {
        for n in 2..=4 {
            assert_eq!(cumulant(n).unwrap(), cumulant_direct(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn degree_law() {
        for n in 2..=4 {
            assert!(degree_law_holds(n, &cumulant(n).unwrap()));
        }
    }

    #[test]
    fn exponential_identity_on_scalars() {
        let mu: Vec<Rational> = [1, 0, 3, -5, 17, 2, 41].iter().map(|&x| int(x)).collect();
        assert!(recursion_matches_exponential(&mu));
    }

    #[test]
    fn cap_errors() {
        assert!(matches!(moment(1), Err(Error::OrderCap { .. })));
        assert!(matches!(cumulant(6), Err(Error::OrderCap { .. })));
    }

    #[test]
    fn counterterms_cancel_low_orders() {
        let s = log_partition_series(3, true).unwrap();
        assert!(s.coeffs[0].is_zero() && s.coeffs[1].is_zero());
        assert!(s.coeffs[2].is_zero());
        assert!(s.coeffs[3].is_zero());
        let raw = log_partition_series(3, false).unwrap();
        assert_eq!(raw.coeffs[2].coefficient_of(&sunset()).unwrap(), rational::ratio(-3, 4));
        assert!(raw.coeffs[0].is_zero());
    }
}
