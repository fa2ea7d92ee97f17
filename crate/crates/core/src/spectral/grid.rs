use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform cubic grid on the box `[-L/2, L/2)³` with `n` points per axis.
///
/// Linear indices are x-fastest: `i + n·(j + n·k)` for coordinates
/// `(x_i, y_j, z_k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::contract(format!(
                "points per axis must be a positive even integer, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::contract(format!(
                "box length must be finite and positive, got {length}"
            )));
        }
        Ok(Grid { n, length })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Number of grid points, `n³`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of one cell, `dx³`.
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(3)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    /// Splits a linear index into `(i, j, k)`.
    #[inline]
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let i = idx % self.n;
        let j = (idx / self.n) % self.n;
        let k = idx / (self.n * self.n);
        (i, j, k)
    }

    /// Signed mode number of FFT slot `m`, in `[-n/2, n/2)`.
    #[inline]
    pub fn mode(&self, m: usize) -> i64 {
        let half = (self.n / 2) as i64;
        let m = m as i64;
        if m < half {
            m
        } else {
            m - self.n as i64
        }
    }

    #[inline]
    pub fn wavenumber(&self, m: usize) -> f64 {
        2.0 * PI * self.mode(m) as f64 / self.length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.wavenumber(m)).collect()
    }

    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coordinate(i)).collect()
    }

    /// Largest per-axis wavenumber magnitude, `π n / L`.
    pub fn max_wavenumber(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    /// Smallest nonzero wavenumber magnitude, `2π / L`.
    pub fn min_wavenumber(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Inclusive range of Littlewood–Paley indices the grid can resolve:
    /// `[⌈log₂(2π/L)⌉ − 2, ⌈log₂(πn/L)⌉]`.
    pub fn dyadic_range(&self) -> (i32, i32) {
        let lo = self.min_wavenumber().log2().ceil() as i32 - 2;
        let hi = self.max_wavenumber().log2().ceil() as i32;
        (lo, hi)
    }

    /// True when the FFT slot `m` is the unpaired Nyquist mode.
    #[inline]
    pub fn is_nyquist(&self, m: usize) -> bool {
        m == self.n / 2
    }

    /// Iterates over `(linear index, [x, y, z])` for every grid point.
    pub fn points(&self) -> impl Iterator<Item = (usize, [f64; 3])> + '_ {
        let coords = self.coordinates();
        let n = self.n;
        (0..self.len()).map(move |idx| {
            let i = idx % n;
            let j = (idx / n) % n;
            let k = idx / (n * n);
            (idx, [coords[i], coords[j], coords[k]])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_times_points_is_length() {
        let g = Grid::new(48, 7.5).unwrap();
        assert!((g.dx() * 48.0 - 7.5).abs() < 1e-14);
    }

    #[test]
    fn wavenumbers_symmetric_except_nyquist() {
        let g = Grid::new(16, 3.0).unwrap();
        let ks = g.wavenumbers();
        for m in 1..16 {
            if g.is_nyquist(m) {
                assert!((ks[m] + g.max_wavenumber()).abs() < 1e-12);
                continue;
            }
            let partner = (16 - m) % 16;
            assert_eq!(ks[m], -ks[partner]);
        }
        let kmax = ks.iter().fold(0.0f64, |a, k| a.max(k.abs()));
        assert!((kmax - g.max_wavenumber()).abs() < 1e-12);
    }

    #[test]
    fn rejects_odd_or_empty_grids() {
        assert!(Grid::new(15, 1.0).is_err());
        assert!(Grid::new(0, 1.0).is_err());
        assert!(Grid::new(8, -1.0).is_err());
        assert!(Grid::new(8, f64::NAN).is_err());
    }

    #[test]
    fn dyadic_range_covers_grid_shells() {
        let g = Grid::new(64, 32.0).unwrap();
        let (lo, hi) = g.dyadic_range();
        assert_eq!(lo, -4);
        assert_eq!(hi, 3);
        assert!(2f64.powi(lo) < g.min_wavenumber());
        assert!(2f64.powi(hi) >= g.max_wavenumber());
    }

    #[test]
    fn unravel_inverts_index() {
        let g = Grid::new(6, 1.0).unwrap();
        for idx in 0..g.len() {
            let (i, j, k) = g.unravel(idx);
            assert_eq!(g.index(i, j, k), idx);
        }
    }
}
