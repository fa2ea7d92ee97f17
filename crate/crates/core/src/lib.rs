//! Pseudospectral simulation and diagnostics for the three-dimensional
//! Zakharov system
//!
//! ```text
//! i ∂t u + Δu = n u,      □n = Δ|u|²
//! ```
//!
//! on a periodic box that emulates ℝ³ until wrap-around. The crate is organised
//! bottom-up:
//!
//! * [`spectral`]: grids, unitary 3D DFTs, Fourier multipliers,
//!   Littlewood–Paley projections and smooth spatial cutoffs.
//! * [`model`]: physical / half-wave / profile representations, the bilinear
//!   phases with their gradients, null-structure identities, resonance scans
//!   and the exponent bookkeeping of the bootstrap.
//! * [`integrators`]: a Strang splitting in physical variables and a Lawson
//!   (interaction-picture) RK2 on the profile equations, plus the run driver.
//! * [`diagnostics`]: norms, Duhamel extraction, spatial splittings, decay
//!   fits, X-norm reports, scattering and dispersive checks.
//! * [`data_io`]: initial-data families, data-norm validation, the snapshot
//!   format, run manifests and the key=value run configuration.

pub mod data_io;
pub mod diagnostics;
pub mod error;
pub mod integrators;
pub mod model;
pub mod spectral;

#[cfg(test)]
mod properties;

pub use error::{Error, FormatError, Result};
pub use spectral::{Field, Grid, Space};

pub use model::params::Parameters;
pub use model::phase::{Phase, PhaseSign, Vec3};
pub use model::state::{HalfWave, ProfilePair, State, ZeroModes};

pub use integrators::{Scheme, StepConfig, Trajectory};
