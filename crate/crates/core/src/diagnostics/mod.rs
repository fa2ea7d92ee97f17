//! Norms, Duhamel extraction, splittings, decay fits and monitors.
//!
//! All continuum norms use `dx³` cell weights on a box-centred grid;
//! weighted norms use `|x|` without periodic unwrapping, which is why
//! every time-dependent check is restricted to the [`TrustWindow`].

mod decay;
mod dispersive;
mod duhamel;
mod norms;
mod row;
mod scattering;
mod split;
mod trust;
mod xnorm;

pub use decay::{decay_fit, DecayFit, MIN_SAMPLES};
pub use dispersive::{
    dispersive_check, free_halfwave, free_schrodinger, free_wave_density, wave_profile, DispersiveKind,
    DispersiveReport, FLATNESS,
};
pub use duhamel::{duhamel_extract, duhamel_from_profiles, DuhamelExtract};
pub use norms::{
    besov_norm, l2_norm, lp_norm, norm, shell_norms, sobolev_norm, weighted_h1_norm, weighted_norm, NormKind,
    NormRequest, Target,
};
pub use row::{compute_row, csv_header, format_value, parse_rows_csv, rows_to_csv, DiagnosticsRow, CSV_COLUMNS};
pub use scattering::{nonincreasing_within_slack, scattering_monitor, scattering_monitor_until, ScatteringReport, SLACK};
pub use split::{split_diagnostics, split_growth_series, SplitExponent, SplitReport};
pub use trust::{mass_radius, spectral_radius, trust_window, TrustWindow, MASS_FRACTION};
pub use xnorm::{x_norm_report, XComponent, XNormOptions, XNormReport};

use crate::error::Result;
use crate::integrators::Trajectory;
use crate::spectral::Field;

/// Evaluates `request` on the snapshot stored at `t`.
pub fn norm_at(traj: &Trajectory, t: f64, request: NormRequest) -> Result<f64> {
    let idx = traj.index_of(t)?;
    let field: Field = match request.target {
        Target::U => traj.state(idx)?.u,
        Target::N => traj.state(idx)?.n,
        Target::Nt => traj.state(idx)?.n_t,
        Target::F => traj.profiles(idx)?.f,
        Target::GPlus => traj.profiles(idx)?.g_plus,
        Target::GMinus => traj.profiles(idx)?.g_minus,
        Target::DuhamelPlus => duhamel_extract(traj, t)?.g_plus,
        Target::DuhamelMinus => duhamel_extract(traj, t)?.g_minus,
        Target::DuhamelF => duhamel_extract(traj, t)?.f_combined,
    };
    norm(&field, request.kind)
}
