//! Small-order remainder scan for the three-dimensional model: the
//! Cauchy–Schwarz bound on `E[R_n]` next to a Monte Carlo estimate of it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::poly::m_chi_pure_closed_form;
use crate::valuation::{gff_samples, Bindings, Compensated, Cutoff, GffSampleConfig, Valuator};
use crate::wick;

#[derive(Clone, Debug, Serialize)]
pub struct RemainderConfig {
    pub n_max: usize,
    pub cutoffs: Vec<u32>,
    pub eps_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub budget: f64,
}

impl Default for RemainderConfig {
    fn default() -> Self {
        RemainderConfig {
            n_max: 3,
            cutoffs: vec![1, 2],
            eps_grid: vec![0.05, 0.1, 0.2],
            samples: 20_000,
            seed: 1,
            budget: 1e8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RemainderTerm {
    pub q: usize,
    /// `|α|^{n-2q} |β|^q / ((n-2q)! q!)`.
    pub prefactor: f64,
    /// `E[X^{2(n-2q)} Y^{2q}]` from the diagram expansion; `None` when over budget.
    pub moment: Option<f64>,
    pub contribution: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RemainderRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub cutoff: u32,
    pub eps: f64,
    pub terms: Vec<RemainderTerm>,
    pub bound: Option<f64>,
    pub mc_mean: f64,
    pub mc_stderr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RemainderScan {
    pub config: RemainderConfig,
    /// How the `√E[r_nq²]` factor is treated.
    pub r_factor: &'static str,
    pub rows: Vec<RemainderRow>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Tabulates, for `1 ≤ n ≤ 3` and `N ≤ 2`,
/// `Σ_q |α|^{n-2q}|β|^q/((n-2q)!q!) √E[X^{2(n-2q)}Y^{2q}]` next to the sampled
/// `|E[e^{-αX-βY} - S_n]|`, where `S_n` is the deformed Taylor polynomial.
pub fn phi43_remainder_scan(cfg: &RemainderConfig) -> Result<RemainderScan> {
    if !(1..=3).contains(&cfg.n_max) {
        return Err(Error::OrderCap {
            order: cfg.n_max,
            min: 1,
            max: 3,
        });
    }
    if let Some(&n) = cfg.cutoffs.iter().find(|&&n| n > 2) {
        return Err(Error::OrderCap {
            order: n as usize,
            min: 0,
            max: 2,
        });
    }
    let mut rows = Vec::new();
    for &cut in &cfg.cutoffs {
        let valuator = Valuator::new(Cutoff(cut)).with_budget(cfg.budget);
        let counterterms = valuator.counterterms()?;
        let mut moments: BTreeMap<(usize, usize), Option<f64>> = BTreeMap::new();
        for n in 1..=cfg.n_max {
            for q in 0..=n / 2 {
                let key = (2 * (n - 2 * q), 2 * q);
                if moments.contains_key(&key) {
                    continue;
                }
                let value = match valuator.diagram_sum(&wick::p0(key.0, key.1)?) {
                    Ok(v) => Some(v),
                    Err(Error::BudgetExceeded { .. }) => None,
                    Err(e) => return Err(e),
                };
                moments.insert(key, value);
            }
        }
        let samples = gff_samples(&GffSampleConfig::new(Cutoff(cut), cfg.samples, cfg.seed))?;
        for &eps in &cfg.eps_grid {
            let b = Bindings::from_eps(eps, &counterterms);
            let (alpha, beta) = (b.alpha.expect("bound"), b.beta.expect("bound"));
            for n in 1..=cfg.n_max {
                let terms: Vec<RemainderTerm> = (0..=n / 2)
                    .map(|q| {
                        let prefactor = alpha.abs().powi((n - 2 * q) as i32) * beta.abs().powi(q as i32)
                            / (factorial(n - 2 * q) * factorial(q));
                        let moment = moments[&(2 * (n - 2 * q), 2 * q)];
                        RemainderTerm {
                            q,
                            prefactor,
                            moment,
                            contribution: moment.map(|m| prefactor * m.max(0.0).sqrt()),
                        }
                    })
                    .collect();
                let bound = terms.iter().map(|t| t.contribution).sum::<Option<f64>>();
                let (mc_mean, mc_stderr) = remainder_estimate(&samples, n, alpha, beta);
                rows.push(RemainderRow {
                    n,
                    cutoff: cut,
                    eps,
                    terms,
                    bound,
                    mc_mean,
                    mc_stderr,
                });
            }
        }
    }
    Ok(RemainderScan {
        config: cfg.clone(),
        r_factor: "sqrt(E[r_nq^2]) replaced by 1",
        rows,
    })
}

/// Sample mean and standard error of `e^{-αX-βY} - Σ_{p<n} (-α)^p/p! (ℳ∘χ)(X^p)`.
fn remainder_estimate(samples: &[(f64, f64)], n: usize, alpha: f64, beta: f64) -> (f64, f64) {
    let mut poly = Vec::new();
    for p in 0..n as u32 {
        let scale = (-alpha).powi(p as i32) / factorial(p as usize);
        for (mono, c) in m_chi_pure_closed_form(p).iter() {
            poly.push((mono.x as i32, mono.y as i32, scale * c.eval(alpha, beta)));
        }
    }
    let values: Vec<f64> = samples
        .iter()
        .map(|&(x, y)| {
            let s: f64 = poly.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum();
            (-alpha * x - beta * y).exp() - s
        })
        .collect();
    let m = values.len() as f64;
    let mean = Compensated::total(values.iter().copied()) / m;
    let var = Compensated::total(values.iter().map(|v| (v - mean).powi(2))) / (m - 1.0);
    (mean, (var / m).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_table_at_unit_cutoff() {
        let cfg = RemainderConfig {
            n_max: 2,
            cutoffs: vec![1],
            samples: 4000,
            ..RemainderConfig::default()
        };
        let scan = phi43_remainder_scan(&cfg).unwrap();
        assert_eq!(scan.rows.len(), 2 * cfg.eps_grid.len());
        for row in &scan.rows {
            assert_eq!(row.terms.len(), row.n / 2 + 1);
            let bound = row.bound.unwrap();
            assert!(bound.is_finite() && bound > 0.0);
            assert!(row.mc_mean.is_finite());
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let cfg = RemainderConfig {
            n_max: 4,
            ..RemainderConfig::default()
        };
        assert!(phi43_remainder_scan(&cfg).is_err());
        let cfg = RemainderConfig {
            cutoffs: vec![3],
            ..RemainderConfig::default()
        };
        assert!(phi43_remainder_scan(&cfg).is_err());
    }
}
