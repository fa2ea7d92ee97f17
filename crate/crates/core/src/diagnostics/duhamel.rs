use crate::error::Result;
use crate::integrators::Trajectory;
use crate::model::ProfilePair;
use crate::spectral::{Complex64, Field};

/// Duhamel pieces recovered from stored profiles.
///
/// Only the signed sum `F = f(t) − f(0)` of the two Schrödinger
/// contributions is observable from a trajectory.
#[derive(Clone, Debug)]
pub struct DuhamelExtract {
    pub t: f64,
    pub f_combined: Field,
    pub g_plus: Field,
    pub g_minus: Field,
}

/// Extracts from two profile snapshots, `start` at time zero.
pub fn duhamel_from_profiles(start: &ProfilePair, now: &ProfilePair) -> DuhamelExtract {
    let i = Complex64::new(0.0, 1.0);
    DuhamelExtract {
        t: now.t,
        f_combined: &now.f - &start.f,
        g_plus: (&now.g_plus - &start.g_plus).scale(i),
        g_minus: (&now.g_minus - &start.g_minus).scale(i),
    }
}

/// `F = f(t) − f(0)` and `G± = i(g±(t) − g±(0))` at a stored time `t`.
pub fn duhamel_extract(traj: &Trajectory, t: f64) -> Result<DuhamelExtract> {
    let idx = traj.index_of(t)?;
    let start = traj.profiles(0)?;
    let now = if idx == 0 { start.clone() } else { traj.profiles(idx)? };
    Ok(duhamel_from_profiles(&start, &now))
}
