//! The ℓ¹ mode set `K_N` and the truncated Green function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub type Mode = [i32; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cutoff(pub u32);

impl Cutoff {
    pub fn n(self) -> u32 {
        self.0
    }

    /// `|K_N| = (2N+1)(2N²+2N+3)/3`.
    pub fn mode_count(self) -> usize {
        let n = self.0 as usize;
        (2 * n + 1) * (2 * n * n + 2 * n + 3) / 3
    }

    pub fn contains(self, k: Mode) -> bool {
        l1(k) <= self.0 as i64
    }

    /// Modes in lexicographic order.
    pub fn modes(self) -> Vec<Mode> {
        ball(self.0 as i32)
    }
}

pub fn l1(k: Mode) -> i64 {
    k.iter().map(|&c| (c as i64).abs()).sum()
}

/// Integer points of the ℓ¹ ball of the given radius.
pub fn ball(radius: i32) -> Vec<Mode> {
    let mut out = Vec::new();
    for a in -radius..=radius {
        let ra = radius - a.abs();
        for b in -ra..=ra {
            let rb = ra - b.abs();
            for c in -rb..=rb {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// `λ_k = (2π)² ‖k‖₂²`.
pub fn lambda(k: Mode) -> f64 {
    let s: i64 = k.iter().map(|&c| (c as i64) * (c as i64)).sum();
    4.0 * PI * PI * s as f64
}

pub fn propagator(k: Mode) -> f64 {
    1.0 / (lambda(k) + 1.0)
}

/// `G_N(x) = Σ_{k ∈ K_N} cos(2πk·x) / (λ_k + 1)`.
pub fn green_value(cutoff: Cutoff, x: [f64; 3]) -> f64 {
    let mut acc = super::Compensated::default();
    for k in cutoff.modes() {
        let phase = 2.0 * PI * (k[0] as f64 * x[0] + k[1] as f64 * x[1] + k[2] as f64 * x[2]);
        acc.add(phase.cos() * propagator(k));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_count_formula() {
        for n in 0..12 {
            assert_eq!(Cutoff(n).modes().len(), Cutoff(n).mode_count());
        }
        assert_eq!(Cutoff(2).mode_count(), 25);
    }

    #[test]
    fn green_function_basics() {
        assert_eq!(green_value(Cutoff(0), [0.3, 0.1, 0.7]), 1.0);
        let x = [0.12, 0.4, 0.83];
        let y = [1.0 - 0.12, 1.0 - 0.4, 1.0 - 0.83];
        let c = Cutoff(5);
        assert!((green_value(c, x) - green_value(c, y)).abs() < 1e-13);
        let direct: f64 = c.modes().into_iter().map(propagator).sum();
        assert!((green_value(c, [0.0; 3]) - direct).abs() < 1e-12);
    }
}
