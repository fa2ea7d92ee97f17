use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{State, ZeroModes};
use crate::spectral::{Complex64, Field, Grid};

/// Radial shape of one data component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    /// `a·exp(−|x|²/2σ²)`.
    Gaussian,
    /// Gaussian times the carrier `e^{ik₀·x}` (`cos(k₀·x)` for real components).
    ModulatedGaussian,
    /// `a·exp(1 − 1/(1 − |x|²/σ²))` inside the ball of radius `σ`, zero outside.
    SmoothBump,
    /// `a·(1 − |x|²/3σ²)·exp(−|x|²/2σ²)`, which has zero integral over ℝ³.
    Ricker,
}

impl ProfileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Gaussian => "gaussian",
            ProfileKind::ModulatedGaussian => "modulated_gaussian",
            ProfileKind::SmoothBump => "smooth_bump",
            ProfileKind::Ricker => "ricker",
        }
    }

    /// Value at `x` (without the carrier).
    pub fn envelope(self, x: [f64; 3], sigma: f64) -> f64 {
        let r2 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (sigma * sigma);
        match self {
            ProfileKind::Gaussian | ProfileKind::ModulatedGaussian => (-0.5 * r2).exp(),
            ProfileKind::SmoothBump => {
                if r2 < 1.0 {
                    (1.0 - 1.0 / (1.0 - r2)).exp()
                } else {
                    0.0
                }
            }
            ProfileKind::Ricker => (1.0 - r2 / 3.0) * (-0.5 * r2).exp(),
        }
    }
}

impl FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(ProfileKind::Gaussian),
            "modulated_gaussian" => Ok(ProfileKind::ModulatedGaussian),
            "smooth_bump" => Ok(ProfileKind::SmoothBump),
            "ricker" => Ok(ProfileKind::Ricker),
            other => Err(Error::Config(format!("unknown data family `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Component {
    pub kind: ProfileKind,
    /// Peak value of the envelope.
    pub amplitude: f64,
    pub sigma: f64,
    pub carrier: [f64; 3],
}

impl Component {
    pub fn new(kind: ProfileKind, amplitude: f64, sigma: f64) -> Self {
        Component {
            kind,
            amplitude,
            sigma,
            carrier: [0.0; 3],
        }
    }

    pub fn gaussian(amplitude: f64, sigma: f64) -> Self {
        Component::new(ProfileKind::Gaussian, amplitude, sigma)
    }

    pub fn zero() -> Self {
        Component::gaussian(0.0, 1.0)
    }

    pub fn with_carrier(mut self, k0: [f64; 3]) -> Self {
        self.carrier = k0;
        self
    }

    fn check_fit(&self, grid: Grid) -> Result<()> {
        let limit = grid.length() / 8.0;
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::Config(format!("width must be positive, got {}", self.sigma)));
        }
        if self.sigma >= limit {
            return Err(Error::BoxFit {
                sigma: self.sigma,
                limit,
            });
        }
        if !self.amplitude.is_finite() {
            return Err(Error::Config(format!("amplitude must be finite, got {}", self.amplitude)));
        }
        Ok(())
    }

    fn carrier_phase(&self, x: [f64; 3]) -> f64 {
        match self.kind {
            ProfileKind::ModulatedGaussian => {
                self.carrier[0] * x[0] + self.carrier[1] * x[1] + self.carrier[2] * x[2]
            }
            _ => 0.0,
        }
    }

    fn complex_field(&self, grid: Grid, global_phase: f64) -> Field {
        Field::from_fn(grid, |x| {
            let a = self.amplitude * self.kind.envelope(x, self.sigma);
            Complex64::from_polar(a, self.carrier_phase(x) + global_phase)
        })
    }

    fn real_field(&self, grid: Grid) -> Field {
        let f = Field::from_real_fn(grid, |x| {
            self.amplitude * self.kind.envelope(x, self.sigma) * self.carrier_phase(x).cos()
        });
        let mean = f.mean().re;
        f.map(|v| Complex64::new(v.re - mean, 0.0))
    }
}

/// Initial data `(u₀, n₀, n₁)` built from three radial components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DataFamily {
    pub u: Component,
    pub n0: Component,
    pub n1: Component,
    /// Seeds the constant phase `e^{iθ}` applied to `u₀`.
    pub seed: u64,
}

impl DataFamily {
    pub fn new(u: Component, n0: Component, n1: Component, seed: u64) -> Self {
        DataFamily { u, n0, n1, seed }
    }

    /// Schrödinger data only.
    pub fn schrodinger(u: Component) -> Self {
        DataFamily::new(u, Component::zero(), Component::zero(), 0)
    }

    /// Phase `θ ∈ [0, 2π)` applied to `u₀`.
    pub fn phase(&self) -> f64 {
        ChaCha8Rng::seed_from_u64(self.seed).gen_range(0.0..2.0 * PI)
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.u.amplitude *= factor;
        self.n0.amplitude *= factor;
        self.n1.amplitude *= factor;
        self
    }
}

/// Samples `family` on `grid` at `t = 0`; `n₀` and `n₁` have their box
/// means removed.
pub fn generate_initial_data(family: &DataFamily, grid: Grid) -> Result<State> {
    for c in [&family.u, &family.n0, &family.n1] {
        c.check_fit(grid)?;
    }
    let u = family.u.complex_field(grid, family.phase());
    let n = family.n0.real_field(grid);
    let n_t = family.n1.real_field(grid);
    let mut state = State::from_fields(u, n, n_t, 0.0)?;
    state.means = ZeroModes {
        n_mean: 0.0,
        nt_mean: 0.0,
    };
    Ok(state)
}
