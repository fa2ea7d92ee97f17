use std::ops::{Add, Sub};

use num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Which side of the Fourier transform a [`Field`]'s values live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Physical,
    Spectral,
}

/// Complex scalar samples on a [`Grid`], tagged with their [`Space`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    space: Space,
    values: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: Grid, space: Space) -> Self {
        Field {
            grid,
            space,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: Grid, space: Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::contract(format!(
                "field needs {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Field {
            grid,
            space,
            values,
        })
    }

    /// Samples `f` at every physical grid point.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        let values = grid.points().map(|(_, x)| f(x)).collect();
        Field {
            grid,
            space: Space::Physical,
            values,
        }
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn space(&self) -> Space {
        self.space
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn expect_space(&self, space: Space) -> Result<()> {
        if self.space != space {
            return Err(Error::contract(format!(
                "expected a {space:?} field, got {:?}",
                self.space
            )));
        }
        Ok(())
    }

    pub fn expect_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::contract("fields live on different grids"));
        }
        Ok(())
    }

    /// Transforms to spectral space (no-op if already spectral).
    pub fn to_spectral(&self) -> Field {
        match self.space {
            Space::Spectral => self.clone(),
            Space::Physical => fft::transform(self, Space::Spectral),
        }
    }

    /// Transforms to physical space (no-op if already physical).
    pub fn to_physical(&self) -> Field {
        match self.space {
            Space::Physical => self.clone(),
            Space::Spectral => fft::transform(self, Space::Physical),
        }
    }

    /// Plain ℓ² norm of the sample vector.
    pub fn l2_discrete(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// Largest imaginary part relative to the largest modulus (0 for the
    /// zero field).
    pub fn imag_residue(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        self.values.iter().fold(0.0f64, |m, v| m.max(v.im.abs())) / scale
    }

    /// Copy with imaginary parts discarded.
    pub fn real_part(&self) -> Field {
        let values = self
            .values
            .iter()
            .map(|v| Complex64::new(v.re, 0.0))
            .collect();
        Field {
            grid: self.grid,
            space: self.space,
            values,
        }
    }

    pub fn conj(&self) -> Field {
        self.map(|v| v.conj())
    }

    /// Arithmetic mean of the physical samples.
    pub fn mean(&self) -> Complex64 {
        let sum: Complex64 = self.values.iter().sum();
        sum / self.values.len() as f64
    }

    pub fn scale(&self, c: Complex64) -> Field {
        self.map(|v| v * c)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field {
            grid: self.grid,
            space: self.space,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise product (physical space).
    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.binary(other, |a, b| a * b)
    }

    pub fn binary(&self, other: &Field, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Field> {
        self.expect_same_grid(other)?;
        if self.space != other.space {
            return Err(Error::contract("fields are in different spaces"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Field {
            grid: self.grid,
            space: self.space,
            values,
        })
    }

    /// Zeroes every mode with a Nyquist index on any axis (spectral space).
    pub fn zero_nyquist(&mut self) {
        debug_assert_eq!(self.space, Space::Spectral);
        zero_nyquist_in_place(self.grid, &mut self.values);
    }

    /// 2/3-rule dealiasing: zeroes modes with any `|m| > n/3` (spectral
    /// space).
    pub fn dealias_two_thirds(&mut self) {
        debug_assert_eq!(self.space, Space::Spectral);
        dealias_in_place(self.grid, &mut self.values);
    }
}

pub(crate) fn zero_nyquist_in_place(grid: Grid, values: &mut [Complex64]) {
    let n = grid.n();
    let h = n / 2;
    for k in 0..n {
        for j in 0..n {
            let row = grid.index(0, j, k);
            if j == h || k == h {
                values[row..row + n].fill(Complex64::new(0.0, 0.0));
            } else {
                values[row + h] = Complex64::new(0.0, 0.0);
            }
        }
    }
}

pub(crate) fn dealias_in_place(grid: Grid, values: &mut [Complex64]) {
    let n = grid.n();
    let cut = n as i64 / 3;
    for idx in 0..values.len() {
        let (i, j, k) = grid.unravel(idx);
        if grid.mode(i).abs() > cut || grid.mode(j).abs() > cut || grid.mode(k).abs() > cut {
            values[idx] = Complex64::new(0.0, 0.0);
        }
    }
}

impl Add for &Field {
    type Output = Field;

    fn add(self, rhs: &Field) -> Field {
        self.binary(rhs, |a, b| a + b)
            .expect("adding fields on mismatched grids or spaces")
    }
}

impl Sub for &Field {
    type Output = Field;

    fn sub(self, rhs: &Field) -> Field {
        self.binary(rhs, |a, b| a - b)
            .expect("subtracting fields on mismatched grids or spaces")
    }
}
