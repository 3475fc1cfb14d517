//! Exact checks that Wick contraction intertwines the two Hopf algebras:
//! contracting `m` bubbles in the diagrams of `X^n` reproduces the diagrams
//! of `Y^m X^{n-2m}` with a fixed combinatorial weight.

use std::collections::BTreeSet;

use num_traits::One;
use serde::Serialize;

use crate::canon::CanonicalKey;
use crate::cumulants::{self, CumulantConfig};
use crate::diagram_sum::DiagramSum;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::hopf::graph::bphz_reduce;
use crate::hopf::poly::{m_chi, HMonomial, HPolynomial};
use crate::rational::{self, Rational};
use crate::series::{GradedSum, Laurent};
use crate::wick;

#[derive(Clone, Debug, Serialize)]
pub struct ClassCheck {
    pub m: usize,
    pub graph: Multigraph,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutativityReport {
    pub n: usize,
    pub checks: Vec<ClassCheck>,
    /// `𝒫 ∘ ℳ ∘ χ_η (X^n)` equals the bubble-reduced `𝒫(X^n)` with the
    /// bubble valued `η/48`.
    pub deformation_identity: bool,
    pub passed: bool,
}

/// `Σ_Γ c_Γ Σ_{|S| = m} C_S Γ` over sets of `m` disjoint bubbles.
pub fn bubble_contractions(sum: &DiagramSum, m: usize) -> Result<DiagramSum> {
    let sign = if m.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    sum.map_linear(|key| {
        let mut out = DiagramSum::zero();
        for t in bphz_reduce(&key.to_graph())?.terms {
            if t.bubble_power == m {
                out.add_term(crate::canon::canonicalize(&t.contracted)?, t.coeff * &sign);
            }
        }
        Ok(out)
    })
}

/// Both sides of `𝒫(Y^m X^{n-2m}) = (n-2m)! m! / (48^m n!) Σ_{|S|=m} C_S 𝒫(X^n)`.
pub fn combi_sides(n: usize, m: usize) -> Result<(DiagramSum, DiagramSum)> {
    if 2 * m > n {
        return Err(Error::OrderCap {
            order: m,
            min: 0,
            max: n / 2,
        });
    }
    let lhs = if n - 2 * m + m == 1 {
        DiagramSum::zero()
    } else {
        wick::p(n - 2 * m, m)?
    };
    let weight = rational::from_bigint(
        rational::factorial((n - 2 * m) as u64) * rational::factorial(m as u64),
    ) / rational::from_bigint(
        rational::factorial(n as u64) * num_bigint::BigInt::from(48).pow(m as u32),
    );
    let rhs = bubble_contractions(&wick::p(n, 0)?, m)?.scale(&weight);
    Ok((lhs, rhs))
}

fn class_rows(m: usize, lhs: &DiagramSum, rhs: &DiagramSum) -> Vec<ClassCheck> {
    let keys: BTreeSet<&CanonicalKey> = lhs.keys().chain(rhs.keys()).collect();
    keys.into_iter()
        .map(|k| {
            let (l, r) = (lhs.coefficient(k), rhs.coefficient(k));
            ClassCheck {
                m,
                graph: k.to_graph(),
                lhs: rational::format(&l),
                rhs: rational::format(&r),
                equal: l == r,
            }
        })
        .collect()
}

/// `𝒫` applied monomial-wise to a polynomial with Laurent coefficients.
pub fn wick_image(p: &HPolynomial) -> Result<GradedSum> {
    let mut out = GradedSum::zero();
    for (mono, c) in p.iter() {
        if mono.x + mono.y < 2 {
            continue;
        }
        let diagrams = wick::p(mono.x as usize, mono.y as usize)?;
        out = out.add(&GradedSum::mono(0, 0, diagrams).mul_scalar(c));
    }
    Ok(out)
}

/// `𝒫 ∘ ℳ ∘ χ_η` on one monomial.
pub fn deformed_path(mono: HMonomial) -> Result<GradedSum> {
    wick_image(&m_chi(&HPolynomial::monomial(mono)))
}

/// Bubble reduction of every diagram of `𝒫(mono)`, bubble valued `η/48`.
pub fn bphz_path(mono: HMonomial) -> Result<GradedSum> {
    let mut out = GradedSum::zero();
    for (key, c) in wick::p(mono.x as usize, mono.y as usize)?.iter() {
        let reduced = bphz_reduce(&key.to_graph())?.with_symbolic_bubble()?;
        out.add_scaled(&reduced, c);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MixedReport {
    pub monomial: HMonomial,
    pub deformed: GradedSum,
    pub reduced: GradedSum,
    pub equal: bool,
}

/// Compares the two paths on a mixed monomial.
pub fn verify_mixed(mono: HMonomial) -> Result<MixedReport> {
    let deformed = deformed_path(mono)?;
    let reduced = bphz_path(mono)?;
    let equal = deformed == reduced;
    Ok(MixedReport {
        monomial: mono,
        deformed,
        reduced,
        equal,
    })
}

pub fn verify_commutativity(n: usize) -> Result<CommutativityReport> {
    if !(2..=5).contains(&n) {
        return Err(Error::OrderCap {
            order: n,
            min: 2,
            max: 5,
        });
    }
    let mut checks = Vec::new();
    for m in 0..=n / 2 {
        let (lhs, rhs) = combi_sides(n, m)?;
        checks.extend(class_rows(m, &lhs, &rhs));
    }
    let mono = HMonomial::new(n as u32, 0);
    let deformation_identity = deformed_path(mono)? == bphz_path(mono)?;
    let passed = deformation_identity && checks.iter().all(|c| c.equal);
    Ok(CommutativityReport {
        n,
        checks,
        deformation_identity,
        passed,
    })
}

/// Both sides of the renormalised cumulant expansion at `ε`-order `p`:
/// the part of `Σ_n κ_n / n!` of weight `m + 2j = p`, and
/// `(-α)^p / p! Σ_Γ b_Γ Σ_S (-η/48)^{|S|} C_S Γ` over the diagrams of `X^p`.
pub fn expansion_sides(p: usize, cfg: &CumulantConfig) -> Result<(GradedSum, GradedSum)> {
    let kappa = cumulants::cumulants_up_to(p, cfg)?;
    let mut lhs = GradedSum::zero();
    for (n, k) in kappa.iter().enumerate().skip(2) {
        let inv = Rational::one() / rational::from_bigint(rational::factorial(n as u64));
        for (&(m, j), part) in k.iter() {
            if m as usize + 2 * j as usize == p {
                lhs.add_part_scaled((m, j), part, &inv);
            }
        }
    }
    let sign = if p.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let scalar = Laurent::mono(
        sign / rational::from_bigint(rational::factorial(p as u64)),
        p as i32,
        0,
    );
    let rhs = bphz_path(HMonomial::new(p as u32, 0))?.mul_scalar(&scalar);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::rational::int;

    #[test]
    fn small_orders_are_trivial() {
        for n in [2, 3] {
            let report = verify_commutativity(n).unwrap();
            assert!(report.passed);
            assert!(report.checks.iter().all(|c| c.m == 0));
        }
    }

    #[test]
    fn four_vertices() {
        let report = verify_commutativity(4).unwrap();
        assert!(report.passed, "{report:#?}");
        let (lhs, _) = combi_sides(4, 2).unwrap();
        assert_eq!(lhs, DiagramSum::from_graph(&double_edge(), int(2)).unwrap());
    }

    #[test]
    fn mixed_example() {
        let r = verify_mixed(HMonomial::new(2, 1)).unwrap();
        assert!(r.equal);
        let fgii = crate::canon::canonicalize(&double_edge()).unwrap();
        assert_eq!(r.reduced.part(-2, 1).coefficient(&fgii), int(-4));
        let g = crate::canon::canonicalize(&bubble_with_leg()).unwrap();
        assert_eq!(r.reduced.part(0, 0).coefficient(&g), int(192));
    }

    #[test]
    fn expansion_at_order_four() {
        let (l, r) = expansion_sides(4, &CumulantConfig::default()).unwrap();
        assert_eq!(l, r);
    }
}
