//! Cutoff scans: counterterm growth rates and renormalised values of the
//! low-order classes.

use serde::Serialize;

use super::cutoff::Cutoff;
use super::valuate::{Counterterms, Valuator};
use crate::canon::CanonicalKey;
use crate::cumulants;
use crate::error::{Error, Result};
use crate::hopf::bphz_reduce;
use crate::rational;
use crate::wick;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    LinearFit { slope, intercept, r2 }
}

/// Fits of a cutoff sequence against `N` and against `log N`, plus the
/// secant slopes between consecutive points of the upper half of the range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub linear: LinearFit,
    pub log: LinearFit,
    pub top_half_slopes: Vec<f64>,
    /// `max/min - 1` over `top_half_slopes`.
    pub slope_spread: f64,
}

impl GrowthFit {
    pub fn new(ns: &[u32], values: &[f64]) -> Self {
        let x: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let start = ns.len() / 2;
        let top_half_slopes: Vec<f64> = (start + 1..ns.len())
            .map(|i| (values[i] - values[i - 1]) / (x[i] - x[i - 1]))
            .collect();
        let max = top_half_slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = top_half_slopes.iter().cloned().fold(f64::INFINITY, f64::min);
        GrowthFit {
            linear: linear_fit(&x, values),
            log: linear_fit(&lx, values),
            slope_spread: if min > 0.0 { max / min - 1.0 } else { f64::INFINITY },
            top_half_slopes,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountertermScan {
    pub rows: Vec<Counterterms>,
    pub c1: GrowthFit,
    pub c2: GrowthFit,
    pub c3: GrowthFit,
    pub c4: GrowthFit,
}

pub fn counterterm_scan(ns: &[u32]) -> Result<CountertermScan> {
    if ns.len() < 3 || ns.contains(&0) {
        return Err(Error::InvalidSelection("scan needs at least three positive cutoffs".into()));
    }
    let rows = ns
        .iter()
        .map(|&n| Valuator::new(Cutoff(n)).counterterms())
        .collect::<Result<Vec<_>>>()?;
    let col = |f: fn(&Counterterms) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    Ok(CountertermScan {
        c1: GrowthFit::new(ns, &col(|c| c.c1)),
        c2: GrowthFit::new(ns, &col(|c| c.c2)),
        c3: GrowthFit::new(ns, &col(|c| c.c3)),
        c4: GrowthFit::new(ns, &col(|c| c.c4)),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessRow {
    pub class: CanonicalKey,
    /// Coefficient of the class in the diagrams of `X^p`.
    pub multiplicity: String,
    /// Bare `Π_N(Γ)`; `None` where the cutoff is over budget.
    pub raw: Vec<Option<f64>>,
    /// Bubble-subtracted value for `p = 4`; for `p ≤ 3` the `ε^p` coefficient
    /// of the log partition function including the `γ` shift.
    pub renormalised: Vec<Option<f64>>,
    /// Relative change of `renormalised` between the two largest
    /// evaluated cutoffs.
    pub top_change: Option<f64>,
    /// Strictly increasing with a top relative change above 5%.
    pub monotone_blowup: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessScan {
    pub order: usize,
    pub cutoffs: Vec<u32>,
    pub rows: Vec<BoundednessRow>,
    /// Growth fit of the raw values, for `p ≤ 3`.
    pub raw_fit: Option<GrowthFit>,
}

pub fn bphz_boundedness_scan(order: usize, ns: &[u32], budget: f64) -> Result<BoundednessScan> {
    if !(2..=4).contains(&order) {
        return Err(Error::OrderCap {
            order,
            min: 2,
            max: 4,
        });
    }
    let valuators: Vec<Valuator> = ns.iter().map(|&n| Valuator::new(Cutoff(n)).with_budget(budget)).collect();
    let over_budget = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let compensated = if order <= 3 {
        Some(cumulants::log_partition_series(order, true)?.coeffs[order].clone())
    } else {
        None
    };
    let mut rows = Vec::new();
    for (key, coeff) in wick::p(order, 0)?.iter() {
        let g = key.to_graph();
        let reduction = bphz_reduce(&g)?;
        let mut raw = Vec::new();
        let mut renormalised = Vec::new();
        for v in &valuators {
            raw.push(over_budget(v.key(key))?);
            renormalised.push(match &compensated {
                Some(s) => over_budget(v.diagram_sum(s))?,
                None => over_budget(v.bphz(&reduction))?,
            });
        }
        let evaluated: Vec<f64> = renormalised.iter().flatten().copied().collect();
        let top_change = match evaluated.as_slice() {
            [.., a, b] => Some(((b - a) / a).abs()),
            _ => None,
        };
        let increasing = evaluated.windows(2).all(|w| w[1] > w[0]);
        rows.push(BoundednessRow {
            class: key.clone(),
            multiplicity: rational::format(coeff),
            monotone_blowup: increasing && top_change.is_some_and(|c| c > 0.05),
            raw,
            renormalised,
            top_change,
        });
    }
    let raw_fit = if order <= 3 && rows.len() == 1 {
        let pts: Vec<(u32, f64)> = ns.iter().zip(&rows[0].raw).filter_map(|(&n, v)| v.map(|v| (n, v))).collect();
        let (xs, ys): (Vec<u32>, Vec<f64>) = pts.into_iter().unzip();
        (xs.len() >= 3).then(|| GrowthFit::new(&xs, &ys))
    } else {
        None
    };
    Ok(BoundednessScan {
        order,
        cutoffs: ns.to_vec(),
        rows,
        raw_fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = linear_fit(&[1.0, 2.0, 3.0, 4.0], &[3.0, 5.0, 7.0, 9.0]);
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r2 - 1.0).abs() < 1e-14);
        let g = GrowthFit::new(&[2, 4, 6, 8, 10, 12], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(g.top_half_slopes.len(), 2);
        assert!(g.slope_spread.abs() < 1e-12);
        let bent = GrowthFit::new(&[1, 2, 3, 4, 5, 6], &[0.0, 0.0, 0.0, 1.0, 2.0, 4.0]);
        assert_eq!(bent.top_half_slopes, vec![1.0, 2.0]);
        assert!((bent.slope_spread - 1.0).abs() < 1e-12);
    }

    #[test]
    fn low_orders_compensate() {
        let s = bphz_boundedness_scan(2, &[1, 2, 3], 1e9).unwrap();
        assert_eq!(s.rows.len(), 1);
        let row = &s.rows[0];
        assert!(row.renormalised.iter().all(|v| v.unwrap().abs() < 1e-14));
        assert!(row.raw.windows(2).all(|w| w[1].unwrap() > w[0].unwrap()));
        assert!(s.raw_fit.is_some());
    }

    #[test]
    fn over_budget_cells_are_empty() {
        let s = bphz_boundedness_scan(4, &[1, 2], 1e3).unwrap();
        assert_eq!(s.rows.len(), 3);
        assert!(s.rows.iter().any(|r| r.raw[1].is_none()));
        assert!(bphz_boundedness_scan(5, &[1], 1e9).is_err());
    }
}
