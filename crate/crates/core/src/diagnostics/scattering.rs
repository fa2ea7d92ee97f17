use super::norms::l2_norm;
use crate::error::{Error, Result};
use crate::integrators::Trajectory;

/// Allowed growth between consecutive increments.
pub const SLACK: f64 = 0.2;

/// Consecutive profile increments over the tail of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringReport {
    pub tail_start: f64,
    /// Right end point of each increment.
    pub times: Vec<f64>,
    pub f_increments: Vec<f64>,
    pub g_plus_increments: Vec<f64>,
    pub g_minus_increments: Vec<f64>,
}

/// True when every entry is at most `(1 + SLACK)` times its predecessor.
pub fn nonincreasing_within_slack(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= (1.0 + SLACK) * w[0])
}

impl ScatteringReport {
    pub fn f_nonincreasing(&self) -> bool {
        nonincreasing_within_slack(&self.f_increments)
    }

    pub fn g_nonincreasing(&self) -> bool {
        nonincreasing_within_slack(&self.g_plus_increments) && nonincreasing_within_slack(&self.g_minus_increments)
    }

    pub fn passed(&self) -> bool {
        self.f_nonincreasing() && self.g_nonincreasing()
    }
}

/// `‖f(tᵢ₊₁) − f(tᵢ)‖_{L²}` and the same for `g±` over snapshots with
/// `tᵢ ≥ tail_start`.
pub fn scattering_monitor(traj: &Trajectory, tail_start: f64) -> Result<ScatteringReport> {
    scattering_monitor_until(traj, tail_start, f64::INFINITY)
}

/// As [`scattering_monitor`], restricted to snapshots with `tᵢ ≤ tail_end`.
pub fn scattering_monitor_until(traj: &Trajectory, tail_start: f64, tail_end: f64) -> Result<ScatteringReport> {
    let tol = 1e-9 * tail_start.abs().max(1.0);
    let indices: Vec<usize> = traj
        .times()
        .iter()
        .enumerate()
        .filter(|&(_, &t)| t >= tail_start - tol && t <= tail_end + tol)
        .map(|(i, _)| i)
        .collect();
    if indices.len() < 3 || !traj.has_snapshots() {
        return Err(Error::InsufficientData(format!(
            "scattering monitor needs 3 stored snapshots in [{tail_start}, {tail_end}], found {}",
            if traj.has_snapshots() { indices.len() } else { 0 }
        )));
    }
    let mut report = ScatteringReport {
        tail_start,
        times: Vec::new(),
        f_increments: Vec::new(),
        g_plus_increments: Vec::new(),
        g_minus_increments: Vec::new(),
    };
    let mut prev = traj.profiles(indices[0])?;
    for &i in &indices[1..] {
        let p = traj.profiles(i)?;
        report.times.push(p.t);
        report.f_increments.push(l2_norm(&(&p.f - &prev.f)));
        report.g_plus_increments.push(l2_norm(&(&p.g_plus - &prev.g_plus)));
        report.g_minus_increments.push(l2_norm(&(&p.g_minus - &prev.g_minus)));
        prev = p;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_rule() {
        assert!(nonincreasing_within_slack(&[1.0, 1.19, 1.0, 0.5]));
        assert!(!nonincreasing_within_slack(&[1.0, 1.21]));
        assert!(nonincreasing_within_slack(&[0.0, 0.0, 0.0]));
        assert!(nonincreasing_within_slack(&[]));
    }
}
