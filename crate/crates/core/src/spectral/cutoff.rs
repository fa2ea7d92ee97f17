use super::field::{Field, Space};
use super::lp::theta;
use crate::error::{Error, Result};

/// Radial cutoff `ρ(y)`: 1 on the unit ball, 0 outside the ball of radius 2.
pub fn rho(y: [f64; 3]) -> f64 {
    theta((y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt())
}

/// Splits a physical field into `f·ρ(x/K)` and the remainder.
///
/// `K = 0` yields an all-zero low part.
pub fn spatial_split(field: &Field, k: f64) -> Result<(Field, Field)> {
    field.expect_space(Space::Physical)?;
    let grid = field.grid();
    let half = 0.5 * grid.length();
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::contract(format!("cutoff radius must be nonnegative, got {k}")));
    }
    if k >= half {
        return Err(Error::CutoffExceedsBox { radius: k, half });
    }
    let mut low = field.clone();
    if k == 0.0 {
        low.values_mut().iter_mut().for_each(|v| *v = num_complex::Complex64::new(0.0, 0.0));
    } else {
        let inv = 1.0 / k;
        for ((_, x), v) in grid.points().zip(low.values_mut()) {
            *v *= rho([x[0] * inv, x[1] * inv, x[2] * inv]);
        }
    }
    let high = field - &low;
    Ok((low, high))
}
