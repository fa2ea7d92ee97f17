use num_complex::Complex64;

use super::field::{Field, Space};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Built-in Fourier symbols.
///
/// Propagators follow `e^{itΔ} ↔ e^{-it|ξ|²}` and `e^{-itΛ} ↔ e^{-it|ξ|}`.
/// Symbols that are singular at `ξ = 0` (negative powers of `Λ`, Riesz
/// transforms) map the zero mode to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Symbol {
    /// `Λ^s = |ξ|^s`.
    LambdaPow(f64),
    /// `⟨Λ⟩^s = (1 + |ξ|²)^{s/2}`.
    JapanesePow(f64),
    /// `ξ_j / |ξ|`.
    Riesz(usize),
    /// `∂_j ↔ i ξ_j`.
    Derivative(usize),
    /// `Δ ↔ −|ξ|²`.
    Laplacian,
    /// `e^{itΔ}`, the free Schrödinger group at time `t`.
    Schrodinger(f64),
    /// `e^{-itΛ}`, the half-wave group at time `t`.
    HalfWave(f64),
}

impl Symbol {
    pub fn eval(&self, xi: [f64; 3]) -> Complex64 {
        let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        let r = r2.sqrt();
        let re = |x: f64| Complex64::new(x, 0.0);
        match *self {
            Symbol::LambdaPow(s) => {
                if s == 0.0 {
                    re(1.0)
                } else if r == 0.0 {
                    re(0.0)
                } else {
                    re(r.powf(s))
                }
            }
            Symbol::JapanesePow(s) => re((1.0 + r2).powf(0.5 * s)),
            Symbol::Riesz(j) => {
                if r == 0.0 {
                    re(0.0)
                } else {
                    re(xi[j] / r)
                }
            }
            Symbol::Derivative(j) => Complex64::new(0.0, xi[j]),
            Symbol::Laplacian => re(-r2),
            Symbol::Schrodinger(t) => Complex64::from_polar(1.0, -t * r2),
            Symbol::HalfWave(t) => Complex64::from_polar(1.0, -t * r),
        }
    }

    /// True when the symbol has modulus one at every wavenumber.
    pub fn is_unimodular(&self) -> bool {
        matches!(self, Symbol::Schrodinger(_) | Symbol::HalfWave(_))
    }
}

/// Multiplies a spectral field pointwise by a built-in symbol.
pub fn apply_multiplier(field: &Field, symbol: &Symbol) -> Result<Field> {
    apply_multiplier_fn(field, |xi| symbol.eval(xi), None)
}

/// Multiplies a spectral field pointwise by `symbol(ξ)`.
///
/// `zero_mode`, when given, replaces the symbol value at `ξ = 0`. A
/// non-finite value anywhere else is a [`Error::SingularSymbol`].
pub fn apply_multiplier_fn(
    field: &Field,
    symbol: impl Fn([f64; 3]) -> Complex64,
    zero_mode: Option<Complex64>,
) -> Result<Field> {
    field.expect_space(Space::Spectral)?;
    let grid = field.grid();
    let ks = grid.wavenumbers();
    let n = grid.n();
    let mut out = field.clone();
    let values = out.values_mut();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let idx = grid.index(i, j, k);
                let xi = [ks[i], ks[j], ks[k]];
                let m = if idx == 0 {
                    zero_mode.unwrap_or_else(|| symbol(xi))
                } else {
                    symbol(xi)
                };
                if !(m.re.is_finite() && m.im.is_finite()) {
                    return Err(Error::SingularSymbol(xi[0], xi[1], xi[2]));
                }
                values[idx] *= m;
            }
        }
    }
    Ok(out)
}

/// Per-point wavenumber tables reused by the time steppers.
#[derive(Clone, Debug)]
pub struct SpectralTables {
    pub grid: Grid,
    /// `|ξ|²` per linear index.
    pub ksq: Vec<f64>,
    /// `|ξ|` per linear index.
    pub kabs: Vec<f64>,
    /// Per-linear-index mask of modes with a Nyquist index on some axis.
    pub nyquist: Vec<bool>,
    /// Per-linear-index mask of modes removed by the 2/3 rule.
    pub aliased: Vec<bool>,
}

impl SpectralTables {
    pub fn new(grid: Grid) -> Self {
        let ks = grid.wavenumbers();
        let len = grid.len();
        let mut ksq = Vec::with_capacity(len);
        let mut nyquist = Vec::with_capacity(len);
        let mut aliased = Vec::with_capacity(len);
        let cut = grid.n() as i64 / 3;
        for idx in 0..len {
            let (i, j, k) = grid.unravel(idx);
            ksq.push(ks[i] * ks[i] + ks[j] * ks[j] + ks[k] * ks[k]);
            nyquist.push(grid.is_nyquist(i) || grid.is_nyquist(j) || grid.is_nyquist(k));
            aliased.push(
                grid.mode(i).abs() > cut || grid.mode(j).abs() > cut || grid.mode(k).abs() > cut,
            );
        }
        let kabs = ksq.iter().map(|v| v.sqrt()).collect();
        SpectralTables {
            grid,
            ksq,
            kabs,
            nyquist,
            aliased,
        }
    }

    /// Zeroes the modes a nonlinear product must not populate.
    pub fn filter(&self, values: &mut [Complex64], dealias: bool) {
        let mask = if dealias { &self.aliased } else { &self.nyquist };
        for (v, &drop) in values.iter_mut().zip(mask) {
            if drop {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    fn plane_wave(grid: Grid, m: [f64; 3]) -> Field {
        let l = grid.length();
        Field::from_fn(grid, |x| {
            let phase = 2.0 * PI / l * (m[0] * x[0] + m[1] * x[1] + m[2] * x[2]);
            Complex64::from_polar(1.0, phase)
        })
    }

    #[test]
    fn lambda_squared_on_single_mode() {
        let grid = Grid::new(16, 5.0).unwrap();
        let f = plane_wave(grid, [1.0, 0.0, 0.0]);
        let out = apply_multiplier(&f.to_spectral(), &Symbol::LambdaPow(2.0))
            .unwrap()
            .to_physical();
        let k2 = (2.0 * PI / 5.0).powi(2);
        let err = (&out - &f.scale(Complex64::new(k2, 0.0))).max_abs();
        assert!(err < 1e-12 * k2, "err {err}");
    }

    #[test]
    fn inverse_lambda_on_zero_mean_field() {
        let grid = Grid::new(16, 4.0).unwrap();
        let f = Field::from_real_fn(grid, |x| (PI * x[0] / 2.0).sin() + (PI * x[1]).cos() * 0.3);
        let spec = f.to_spectral();
        let back = apply_multiplier(
            &apply_multiplier(&spec, &Symbol::LambdaPow(-1.0)).unwrap(),
            &Symbol::LambdaPow(1.0),
        )
        .unwrap();
        let err = (&back - &spec).l2_discrete() / spec.l2_discrete();
        assert!(err < 1e-12);
    }

    #[test]
    fn schrodinger_propagator_preserves_l2() {
        let grid = Grid::new(16, 6.0).unwrap();
        let f = Field::from_fn(grid, |x| {
            Complex64::new((-x[0] * x[0]).exp(), x[1].sin() * (-x[2] * x[2]).exp())
        });
        let spec = f.to_spectral();
        for t in [0.1, 1.0, 17.3] {
            let out = apply_multiplier(&spec, &Symbol::Schrodinger(t)).unwrap();
            let rel = (out.l2_discrete() - spec.l2_discrete()).abs() / spec.l2_discrete();
            assert!(rel < 1e-12);
        }
    }

    #[test]
    fn singular_symbol_is_rejected_without_override() {
        let grid = Grid::new(4, 1.0).unwrap();
        let f = Field::zeros(grid, Space::Spectral);
        let sym = |xi: [f64; 3]| {
            let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            Complex64::new(1.0 / r, 0.0)
        };
        assert!(matches!(
            apply_multiplier_fn(&f, sym, None),
            Err(Error::SingularSymbol(..))
        ));
        assert!(apply_multiplier_fn(&f, sym, Some(Complex64::new(0.0, 0.0))).is_ok());
    }

    #[test]
    fn physical_input_is_a_contract_violation() {
        let grid = Grid::new(4, 1.0).unwrap();
        let f = Field::zeros(grid, Space::Physical);
        assert!(matches!(
            apply_multiplier(&f, &Symbol::Laplacian),
            Err(Error::Contract(_))
        ));
    }
}
