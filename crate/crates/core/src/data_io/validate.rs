use std::fmt;

use crate::diagnostics::{besov_norm, l2_norm, sobolev_norm};
use crate::error::{Error, Result};
use crate::model::{Parameters, State};
use crate::spectral::{apply_multiplier_fn, Complex64, Field};

/// Largest Sobolev index used in place of the very large regularity index.
pub const MAX_SOBOLEV: f64 = 10.0;
pub const DEFAULT_SOBOLEV: f64 = 4.0;

/// Relative slack when comparing a data norm with `ε₀`.
const COMPARE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DataNorm {
    pub name: &'static str,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DataNormReport {
    pub eps0: f64,
    pub sobolev: f64,
    pub norms: Vec<DataNorm>,
}

impl DataNormReport {
    pub fn passed(&self) -> bool {
        self.norms.iter().all(|n| n.pass)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.norms.iter().find(|n| n.name == name).map(|n| n.value)
    }

    /// Larger of the two hypothesis totals.
    pub fn worst_total(&self) -> f64 {
        self.get("u_total").unwrap_or(0.0).max(self.get("wave_total").unwrap_or(0.0))
    }

    pub fn summary(&self) -> String {
        self.norms
            .iter()
            .filter(|n| !n.pass)
            .map(|n| format!("{}={:.6e} > eps0={:.6e}", n.name, n.value, self.eps0))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for DataNormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.norms {
            writeln!(
                f,
                "{} {} value={:.17e} bound={:.17e}",
                if n.pass { "PASS" } else { "FAIL" },
                n.name,
                n.value,
                self.eps0
            )?;
        }
        Ok(())
    }
}

fn japanese_x(field: &Field, power: i32) -> Field {
    let mut out = field.to_physical();
    let grid = field.grid();
    for ((_, x), v) in grid.points().zip(out.values_mut()) {
        *v *= (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt().powi(power);
    }
    out
}

fn radial(field: &Field, symbol: impl Fn(f64) -> f64) -> Result<Field> {
    apply_multiplier_fn(
        &field.to_spectral(),
        |xi| Complex64::new(symbol((xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()), 0.0),
        None,
    )
}

fn pair(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Discrete analogues of the smallness hypotheses on `(u₀, n₀, n₁)`.
///
/// The regularity index is replaced by `s`: `u₀` is measured in `H^{s+1}`
/// and `(Λn₀, n₁)` in `H^{s−1}`.
pub fn validate_data_norms_with(state: &State, params: &Parameters, s: f64) -> Result<DataNormReport> {
    if !(0.0..=MAX_SOBOLEV).contains(&s) {
        return Err(Error::Config(format!(
            "Sobolev index must lie in [0, {MAX_SOBOLEV}], got {s}"
        )));
    }
    let eps0 = params.eps0;
    let u_hs = sobolev_norm(&state.u, s + 1.0);
    let u_x2 = l2_norm(&japanese_x(&state.u, 2));

    let lam_n0 = radial(&state.n, |r| r)?;
    let wave_hs = pair(sobolev_norm(&lam_n0, s - 1.0), sobolev_norm(&state.n_t, s - 1.0));
    let jl = |r: f64| (1.0 + r * r).sqrt();
    let b0 = radial(&state.n, |r| jl(r) * r)?;
    let b1 = radial(&state.n_t, jl)?;
    let wave_besov = besov_norm(&b0, 0.0, 1.0, 1.0)? + besov_norm(&b1, 0.0, 1.0, 1.0)?;
    let wave_weighted = pair(
        sobolev_norm(&japanese_x(&state.n, 1), 1.0),
        sobolev_norm(&japanese_x(&state.n_t, 2), 1.0),
    );

    let within = |v: f64| v <= eps0 * (1.0 + COMPARE_TOL);
    let mut norms = Vec::new();
    let mut push = |name, value: f64| {
        norms.push(DataNorm {
            name,
            value,
            pass: within(value),
        })
    };
    push("u_hs1", u_hs);
    push("u_x2_l2", u_x2);
    push("u_total", u_hs + u_x2);
    push("wave_hs", wave_hs);
    push("wave_besov11", wave_besov);
    push("wave_x_h1", wave_weighted);
    push("wave_total", wave_hs + wave_besov + wave_weighted);
    Ok(DataNormReport { eps0, sobolev: s, norms })
}

/// [`validate_data_norms_with`] at the default Sobolev index.
pub fn validate_data_norms(state: &State, params: &Parameters) -> DataNormReport {
    validate_data_norms_with(state, params, DEFAULT_SOBOLEV).expect("default Sobolev index is admissible")
}

/// Rescales all data by one factor, making the larger hypothesis total
/// equal to `fraction·ε₀`. Zero data are returned unchanged.
pub fn scale_to_eps0(state: &State, params: &Parameters, fraction: f64, s: f64) -> Result<State> {
    if !(fraction.is_finite() && fraction > 0.0) {
        return Err(Error::Config(format!("scale fraction must be positive, got {fraction}")));
    }
    let total = validate_data_norms_with(state, params, s)?.worst_total();
    if total == 0.0 {
        return Ok(state.clone());
    }
    let c = Complex64::new(fraction * params.eps0 / total, 0.0);
    State::from_fields(state.u.scale(c), state.n.scale(c), state.n_t.scale(c), state.t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_io::{generate_initial_data, Component, DataFamily};
    use crate::spectral::Grid;

    fn family() -> DataFamily {
        DataFamily::new(Component::gaussian(1.0, 1.0), Component::zero(), Component::gaussian(0.5, 1.0), 1)
    }

    #[test]
    fn zero_state_passes() {
        let grid = Grid::new(16, 16.0).unwrap();
        let r = validate_data_norms(&State::zero(grid), &Parameters::default());
        assert!(r.passed());
        assert!(r.norms.iter().all(|n| n.value == 0.0));
        assert_eq!(r.norms.len(), 7);
    }

    #[test]
    fn doubling_amplitude_doubles_every_norm() {
        let grid = Grid::new(32, 16.0).unwrap();
        let p = Parameters::default();
        let a = validate_data_norms(&generate_initial_data(&family(), grid).unwrap(), &p);
        let b = validate_data_norms(&generate_initial_data(&family().scaled(2.0), grid).unwrap(), &p);
        for (x, y) in a.norms.iter().zip(&b.norms) {
            assert!((y.value - 2.0 * x.value).abs() <= 1e-12 * y.value, "{}", x.name);
        }
    }

    #[test]
    fn scaled_data_pass_with_margin() {
        let grid = Grid::new(32, 16.0).unwrap();
        let p = Parameters::default();
        let raw = generate_initial_data(&family(), grid).unwrap();
        assert!(!validate_data_norms(&raw, &p).passed());
        let scaled = scale_to_eps0(&raw, &p, 0.1, DEFAULT_SOBOLEV).unwrap();
        let r = validate_data_norms(&scaled, &p);
        assert!(r.passed());
        assert!(r.worst_total() <= 0.5 * p.eps0);
        assert!((r.worst_total() - 0.1 * p.eps0).abs() < 1e-12);
    }

    #[test]
    fn sobolev_cap_enforced() {
        let grid = Grid::new(8, 8.0).unwrap();
        assert!(validate_data_norms_with(&State::zero(grid), &Parameters::default(), 11.0).is_err());
    }
}
