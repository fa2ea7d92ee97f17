use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{apply_multiplier, apply_multiplier_fn, Field, Grid, Space, Symbol};

/// Largest tolerated relative imaginary residue of a density field.
pub const REALITY_TOL: f64 = 1e-10;

/// Zero modes of `n` and `∂ₜn`, evolved as scalars.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ZeroModes {
    pub n_mean: f64,
    pub nt_mean: f64,
}

impl ZeroModes {
    /// Exact linear dynamics: the wave source has zero mean.
    pub fn advance(self, dt: f64) -> Self {
        ZeroModes {
            n_mean: self.n_mean + dt * self.nt_mean,
            nt_mean: self.nt_mean,
        }
    }
}

/// Physical variables `(u, n, ∂ₜn)` at time `t`.
///
/// `n` and `n_t` are real, zero-mean, physical-space fields; their means live
/// in `means`.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub u: Field,
    pub n: Field,
    pub n_t: Field,
    pub means: ZeroModes,
    pub t: f64,
}

fn split_mean(field: &Field) -> (Field, f64) {
    let m = field.mean().re;
    let out = field.map(|v| Complex64::new(v.re - m, 0.0));
    (out, m)
}

impl State {
    pub fn zero(grid: Grid) -> Self {
        State {
            u: Field::zeros(grid, Space::Physical),
            n: Field::zeros(grid, Space::Physical),
            n_t: Field::zeros(grid, Space::Physical),
            means: ZeroModes::default(),
            t: 0.0,
        }
    }

    /// Builds a state from raw physical fields, moving the means of `n` and
    /// `n_t` into the zero-mode scalars.
    pub fn from_fields(u: Field, n: Field, n_t: Field, t: f64) -> Result<Self> {
        for f in [&u, &n, &n_t] {
            f.expect_space(Space::Physical)?;
            u.expect_same_grid(f)?;
        }
        for f in [&n, &n_t] {
            let residue = f.imag_residue();
            if residue > REALITY_TOL {
                return Err(Error::Reality(residue));
            }
        }
        let (n, n_mean) = split_mean(&n);
        let (n_t, nt_mean) = split_mean(&n_t);
        Ok(State {
            u,
            n,
            n_t,
            means: ZeroModes { n_mean, nt_mean },
            t,
        })
    }

    pub fn grid(&self) -> Grid {
        self.u.grid()
    }

    /// Full density including its zero mode.
    pub fn density(&self) -> Field {
        let m = self.means.n_mean;
        self.n.map(|v| v + m)
    }

    pub fn check_invariants(&self) -> Result<()> {
        for f in [&self.u, &self.n, &self.n_t] {
            f.expect_space(Space::Physical)?;
            self.u.expect_same_grid(f)?;
            if f.values().iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return Err(Error::contract("state holds non-finite values"));
            }
        }
        for f in [&self.n, &self.n_t] {
            if f.values().iter().any(|v| v.im != 0.0) {
                return Err(Error::Reality(f.imag_residue()));
            }
            let scale = f.max_abs().max(f64::MIN_POSITIVE);
            if f.mean().norm() > 1e-12 * scale {
                return Err(Error::contract("density fields must be zero-mean"));
            }
        }
        Ok(())
    }
}

/// Half-wave variables `w± = iΛ⁻¹∂ₜn ± n` in physical space.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfWave {
    pub w_plus: Field,
    pub w_minus: Field,
    pub t: f64,
}

impl HalfWave {
    /// Relative size of `conj(w₊) + w₋`, zero for real densities.
    pub fn conjugacy_residue(&self) -> f64 {
        let diff = self
            .w_plus
            .binary(&self.w_minus, |a, b| a.conj() + b)
            .expect("half-wave components share a grid");
        let scale = self.w_plus.max_abs().max(self.w_minus.max_abs());
        if scale == 0.0 {
            0.0
        } else {
            diff.max_abs() / scale
        }
    }

    /// Recovers the zero-mean `(n, ∂ₜn)` pair.
    pub fn densities(&self) -> Result<(Field, Field)> {
        let wp = self.w_plus.to_spectral();
        let wm = self.w_minus.to_spectral();
        let half = Complex64::new(0.5, 0.0);
        let n = (&wp - &wm).scale(half);
        let sum = (&wp + &wm).scale(Complex64::new(0.0, -0.5));
        let n_t = apply_multiplier(&sum, &Symbol::LambdaPow(1.0))?;
        let mut out = Vec::with_capacity(2);
        for mut f in [n, n_t] {
            f.values_mut()[0] = Complex64::new(0.0, 0.0);
            let f = f.to_physical();
            let residue = f.imag_residue();
            if residue > REALITY_TOL {
                return Err(Error::Reality(residue));
            }
            out.push(f.real_part());
        }
        let n_t = out.pop().unwrap();
        let n = out.pop().unwrap();
        Ok((n, n_t))
    }
}

/// Profiles `f = e^{−itΔ}u`, `g± = e^{±itΛ}w±` in physical space.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfilePair {
    pub f: Field,
    pub g_plus: Field,
    pub g_minus: Field,
    pub t: f64,
}

fn inverse_lambda_i() -> impl Fn([f64; 3]) -> Complex64 {
    |xi| {
        let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        Complex64::new(0.0, 1.0 / r)
    }
}

pub fn to_halfwave(state: &State) -> Result<HalfWave> {
    let nt_hat = state.n_t.to_spectral();
    let term = apply_multiplier_fn(&nt_hat, inverse_lambda_i(), Some(Complex64::new(0.0, 0.0)))?
        .to_physical();
    Ok(HalfWave {
        w_plus: &term + &state.n,
        w_minus: &term - &state.n,
        t: state.t,
    })
}

pub fn from_halfwave(u: Field, hw: &HalfWave, means: ZeroModes) -> Result<State> {
    u.expect_space(Space::Physical)?;
    let (n, n_t) = hw.densities()?;
    u.expect_same_grid(&n)?;
    Ok(State {
        u,
        n,
        n_t,
        means,
        t: hw.t,
    })
}

fn check_time(a: f64, b: f64) -> Result<()> {
    if a != b {
        return Err(Error::contract(format!("time stamps differ: {a} vs {b}")));
    }
    Ok(())
}

fn propagate(field: &Field, symbol: Symbol) -> Result<Field> {
    Ok(apply_multiplier(&field.to_spectral(), &symbol)?.to_physical())
}

pub fn to_profiles(u: &Field, hw: &HalfWave, t: f64) -> Result<ProfilePair> {
    check_time(hw.t, t)?;
    Ok(ProfilePair {
        f: propagate(u, Symbol::Schrodinger(-t))?,
        g_plus: propagate(&hw.w_plus, Symbol::HalfWave(-t))?,
        g_minus: propagate(&hw.w_minus, Symbol::HalfWave(t))?,
        t,
    })
}

/// Returns `u` and the half-wave pair at the profile time.
pub fn from_profiles(p: &ProfilePair) -> Result<(Field, HalfWave)> {
    let t = p.t;
    let u = propagate(&p.f, Symbol::Schrodinger(t))?;
    let hw = HalfWave {
        w_plus: propagate(&p.g_plus, Symbol::HalfWave(t))?,
        w_minus: propagate(&p.g_minus, Symbol::HalfWave(-t))?,
        t,
    };
    Ok((u, hw))
}

impl State {
    pub fn to_halfwave(&self) -> Result<HalfWave> {
        to_halfwave(self)
    }

    pub fn to_profiles(&self) -> Result<ProfilePair> {
        to_profiles(&self.u, &self.to_halfwave()?, self.t)
    }

    pub fn from_profiles(p: &ProfilePair, means: ZeroModes) -> Result<State> {
        let (u, hw) = from_profiles(p)?;
        from_halfwave(u, &hw, means)
    }
}
