//! Three-dimensional FFTs on cubic grids, and `G_N` sampled on them.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::cutoff::{propagator, Cutoff, Mode};

/// Index of mode `k` on a periodic grid of side `side`.
pub(crate) fn wrap_index(k: Mode, side: usize) -> usize {
    let s = side as i64;
    let w = |c: i32| (c as i64).rem_euclid(s) as usize;
    (w(k[0]) * side + w(k[1])) * side + w(k[2])
}

/// Unnormalised transform along all three axes, in place.
pub(crate) fn fft3(data: &mut Vec<Complex64>, side: usize, direction: FftDirection) {
    let fft = FftPlanner::new().plan_fft(side, direction);
    let mut scratch = vec![Complex64::default(); data.len()];
    for _ in 0..3 {
        fft.process(data);
        // (i, j, k) -> (j, k, i), so the next pass runs along the old first axis.
        for i in 0..side {
            for j in 0..side {
                for k in 0..side {
                    scratch[(j * side + k) * side + i] = data[(i * side + j) * side + k];
                }
            }
        }
        std::mem::swap(data, &mut scratch);
    }
}

/// `G_N(j/side)` for every grid point `j`, row-major.
pub(crate) fn green_grid(cutoff: Cutoff, side: usize) -> Vec<f64> {
    debug_assert!(side > 2 * cutoff.n() as usize);
    let mut data = vec![Complex64::default(); side * side * side];
    for k in cutoff.modes() {
        data[wrap_index(k, side)] = Complex64::new(propagator(k), 0.0);
    }
    fft3(&mut data, side, FftDirection::Inverse);
    data.into_iter().map(|z| z.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::green_value;

    #[test]
    fn grid_matches_direct_sum() {
        let c = Cutoff(2);
        let side = 7;
        let g = green_grid(c, side);
        for (i, j, k) in [(0, 0, 0), (1, 2, 3), (6, 0, 5)] {
            let x = [i as f64 / 7.0, j as f64 / 7.0, k as f64 / 7.0];
            let direct = green_value(c, x);
            assert!((g[(i * side + j) * side + k] - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn round_trip() {
        let side = 5;
        let orig: Vec<Complex64> = (0..125).map(|i| Complex64::new(i as f64, -(i as f64) / 3.0)).collect();
        let mut data = orig.clone();
        fft3(&mut data, side, FftDirection::Forward);
        fft3(&mut data, side, FftDirection::Inverse);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a / 125.0 - b).norm() < 1e-10);
        }
    }
}
