use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Field, Space, SpectralTables};

/// Time quadrature of the Duhamel source term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Quadrature {
    /// Source sampled at both ends of the step.
    #[default]
    Trapezoid,
    /// Source sampled once, at the middle of the step.
    Midpoint,
}

impl Quadrature {
    pub fn samples(self) -> usize {
        match self {
            Quadrature::Trapezoid => 2,
            Quadrature::Midpoint => 1,
        }
    }
}

/// Advances `(n̂, n̂ₜ)` by `tau` under `□n = S` with `S` given at the
/// quadrature nodes. The zero mode is left untouched.
pub(crate) fn wave_update(
    tables: &SpectralTables,
    n: &mut [Complex64],
    nt: &mut [Complex64],
    source: &[&[Complex64]],
    tau: f64,
    quadrature: Quadrature,
) {
    for idx in 1..n.len() {
        let w = tables.kabs[idx];
        let (s, c) = (w * tau).sin_cos();
        let n0 = n[idx];
        let nt0 = nt[idx];
        let mut n1 = n0 * c + nt0 * (s / w);
        let mut nt1 = -n0 * (w * s) + nt0 * c;
        match quadrature {
            Quadrature::Trapezoid => {
                let s0 = source[0][idx];
                let s1 = source[1][idx];
                n1 += s0 * (0.5 * tau * s / w);
                nt1 += (s0 * c + s1) * (0.5 * tau);
            }
            Quadrature::Midpoint => {
                let (sh, ch) = (0.5 * w * tau).sin_cos();
                let sm = source[0][idx];
                n1 += sm * (tau * sh / w);
                nt1 += sm * (tau * ch);
            }
        }
        n[idx] = n1;
        nt[idx] = nt1;
    }
}

/// One exact-linear, quadrature-forced step of the wave equation in Fourier
/// space. `n`, `n_t` and the `source` samples are spectral fields.
pub fn wave_duhamel_step(
    n: &Field,
    n_t: &Field,
    source: &[Field],
    h: f64,
    quadrature: Quadrature,
) -> Result<(Field, Field)> {
    if source.len() != quadrature.samples() {
        return Err(Error::contract(format!(
            "{quadrature:?} quadrature needs {} source samples, got {}",
            quadrature.samples(),
            source.len()
        )));
    }
    for f in std::iter::once(n).chain(std::iter::once(n_t)).chain(source) {
        f.expect_space(Space::Spectral)?;
        n.expect_same_grid(f)?;
    }
    let tables = SpectralTables::new(n.grid());
    let mut n_out = n.clone();
    let mut nt_out = n_t.clone();
    let samples: Vec<&[Complex64]> = source.iter().map(|f| f.values()).collect();
    wave_update(
        &tables,
        n_out.values_mut(),
        nt_out.values_mut(),
        &samples,
        h,
        quadrature,
    );
    Ok((n_out, nt_out))
}
