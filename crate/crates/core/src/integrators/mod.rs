//! Time integration of the coupled system.
//!
//! Two independent schemes share the [`Stepper`] interface: a Strang
//! splitting in the physical variables and a Lawson Heun method on the
//! profiles. [`run`] drives either one and records a [`Trajectory`].

mod lawson;
mod run;
mod strang;
mod wave;

use num_complex::Complex64;

pub use run::{run, snapshot_file_name, DiagnosticsConfig, RunOptions, Snapshot, Storage, Trajectory};
pub use wave::{wave_duhamel_step, Quadrature};

use crate::error::{Error, Result};
use crate::model::{ProfilePair, State, ZeroModes};
use crate::spectral::{fft3_in_place, Direction, Field, Grid, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    StrangSplit,
    ProfileLawson,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::StrangSplit => "strang_split",
            Scheme::ProfileLawson => "profile_lawson",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strang_split" | "strang" => Ok(Scheme::StrangSplit),
            "profile_lawson" | "lawson" => Ok(Scheme::ProfileLawson),
            other => Err(Error::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Per-step numerical options shared by both schemes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepOptions {
    /// Apply the 2/3 rule instead of only clearing the Nyquist modes.
    pub dealias: bool,
    pub quadrature: Quadrature,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepConfig {
    pub h: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    pub quadrature: Quadrature,
    pub t_end: f64,
    pub snapshot_stride: usize,
}

impl StepConfig {
    pub fn new(scheme: Scheme, h: f64, t_end: f64, snapshot_stride: usize) -> Self {
        StepConfig {
            h,
            scheme,
            dealias: false,
            quadrature: Quadrature::Trapezoid,
            t_end,
            snapshot_stride,
        }
    }

    pub fn options(&self) -> StepOptions {
        StepOptions {
            dealias: self.dealias,
            quadrature: self.quadrature,
        }
    }

    /// Number of steps needed to reach `t_end`, rounding to the nearest step.
    pub fn steps(&self) -> usize {
        (self.t_end / self.h).round() as usize
    }

    /// Advisory bound `h ≤ dx²/π` for accurate nonlinear phases.
    pub fn stability_advisory(&self, grid: Grid) -> f64 {
        grid.dx() * grid.dx() / std::f64::consts::PI
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::Config(format!("step size must be positive, got {}", self.h)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Config(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Config("snapshot_stride must be positive".into()));
        }
        let steps = self.t_end / self.h;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::Config(format!(
                "t_end = {} is not a whole number of steps of size {}",
                self.t_end, self.h
            )));
        }
        Ok(())
    }
}

pub(crate) trait Stepper {
    fn step(&mut self, h: f64) -> Result<()>;
    /// Current state and the relative imaginary residue removed from `n`, `∂ₜn`.
    fn state(&self) -> (State, f64);
}

pub(crate) fn make_stepper(scheme: Scheme, state: &State, opts: StepOptions) -> Result<Box<dyn Stepper>> {
    Ok(match scheme {
        Scheme::StrangSplit => Box::new(strang::StrangStepper::new(state, opts)?),
        Scheme::ProfileLawson => Box::new(lawson::LawsonStepper::new(state, opts)?),
    })
}

pub(crate) fn spectral_of(field: &Field) -> Vec<Complex64> {
    field.to_spectral().into_values()
}

/// Inverse transform of a spectral density, projected onto real values.
pub(crate) fn realify(grid: Grid, spectral: &[Complex64]) -> (Field, f64) {
    let mut v = spectral.to_vec();
    fft3_in_place(&mut v, grid.n(), Direction::Inverse);
    let field = Field::from_values(grid, Space::Physical, v).expect("buffer matches grid");
    let residue = field.imag_residue();
    (field.real_part(), residue)
}

pub(crate) fn ensure_finite(values: &[Complex64], step: usize, t: f64) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Divergence { step, t })
    }
}

/// One Strang step of size `h`.
pub fn strang_step(state: &State, h: f64, opts: StepOptions) -> Result<State> {
    let mut s = strang::StrangStepper::new(state, opts)?;
    s.step(h)?;
    Ok(s.state().0)
}

/// One Lawson step of size `h` on the profiles; returns the new profiles
/// and the advanced zero modes.
pub fn profile_step(
    p: &ProfilePair,
    means: ZeroModes,
    h: f64,
    opts: StepOptions,
) -> Result<(ProfilePair, ZeroModes)> {
    let mut s = lawson::LawsonStepper::from_profiles(p, means, opts);
    s.step(h)?;
    Ok((s.profiles(), means.advance(h)))
}
