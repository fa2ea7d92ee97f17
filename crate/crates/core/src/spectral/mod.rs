//! Periodic-box grids, unitary discrete Fourier transforms, Fourier
//! multipliers, Littlewood–Paley projections and smooth spatial cutoffs.

mod cutoff;
mod fft;
mod field;
mod grid;
mod lp;
mod multiplier;

pub use cutoff::{rho, spatial_split};
pub use fft::{dft_forward, dft_inverse, fft3_in_place, Direction};
pub use field::{Field, Space};
pub use grid::Grid;
pub use lp::{lp_project, lp_symbol, theta, LpMode};
pub use multiplier::{apply_multiplier, apply_multiplier_fn, SpectralTables, Symbol};

pub use num_complex::Complex64;
