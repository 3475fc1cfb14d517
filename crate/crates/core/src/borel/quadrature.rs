//! Adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub const MAX_INTERVALS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    Piece {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// `∫_a^b f` to `max(abs_tol, rel_tol·|I|)`, bisecting the interval with
/// the largest error estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Quadrature> {
    integrate_with_limit(f, a, b, abs_tol, rel_tol, MAX_INTERVALS)
}

pub fn integrate_with_limit(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<Quadrature> {
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= max_intervals {
            return Err(Error::Quadrature {
                error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        let (l, r) = (gk15(&f, worst.a, mid), gk15(&f, mid, worst.b));
        value += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to shed the drift of the running updates.
    let value = super::super::valuation::Compensated::total(heap.iter().map(|p| p.value));
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Quadrature {
        value,
        error,
        intervals: heap.len(),
    })
}

/// `∫_0^∞ f` through `s = x/(1-x)`.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, abs_tol: f64, rel_tol: f64) -> Result<Quadrature> {
    integrate(
        |x| {
            if x >= 1.0 {
                return 0.0;
            }
            let s = x / (1.0 - x);
            let v = f(s) / ((1.0 - x) * (1.0 - x));
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x| x.powi(9) - 3.0 * x * x, -1.0, 2.0, 1e-14, 0.0).unwrap();
        assert!((q.value - (102.3 - 9.0)).abs() < 1e-12);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn gaussian_half_line() {
        let q = integrate_half_line(|s| (-s * s).exp(), 1e-13, 0.0).unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn interval_limit() {
        let r = integrate_with_limit(|x| (1.0 / x).sin(), 1e-3, 1.0, 1e-14, 0.0, 8);
        assert!(matches!(r, Err(Error::Quadrature { intervals: 8, .. })));
    }
}
