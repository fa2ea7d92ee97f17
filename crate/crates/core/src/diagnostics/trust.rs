use crate::model::State;
use crate::spectral::Field;

pub const MASS_FRACTION: f64 = 0.99;

/// Interval `[0, t_trust]` on which the periodic box emulates free space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrustWindow {
    /// Largest 99%-mass radius over the nonzero data components.
    pub r0: f64,
    /// 99%-energy spectral radius of `u₀`.
    pub k_energy: f64,
    /// `max(1, 2·k_energy)`.
    pub v_max: f64,
    pub t_trust: f64,
}

fn quantile_radius(mut pairs: Vec<(f64, f64)>, fraction: f64) -> f64 {
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    if total == 0.0 {
        return 0.0;
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = 0.0;
    for (r, w) in &pairs {
        acc += w;
        if acc >= fraction * total {
            return *r;
        }
    }
    pairs.last().map_or(0.0, |p| p.0)
}

/// Radius of the centred ball holding `fraction` of `∫|f|²`.
pub fn mass_radius(field: &Field, fraction: f64) -> f64 {
    let phys = field.to_physical();
    let pairs = field
        .grid()
        .points()
        .zip(phys.values())
        .map(|((_, x), v)| ((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt(), v.norm_sqr()))
        .collect();
    quantile_radius(pairs, fraction)
}

/// Radius of the frequency ball holding `fraction` of `∫|f̂|²`.
pub fn spectral_radius(field: &Field, fraction: f64) -> f64 {
    let spec = field.to_spectral();
    let grid = field.grid();
    let ks = grid.wavenumbers();
    let pairs = spec
        .values()
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let (i, j, k) = grid.unravel(idx);
            ((ks[i] * ks[i] + ks[j] * ks[j] + ks[k] * ks[k]).sqrt(), v.norm_sqr())
        })
        .collect();
    quantile_radius(pairs, fraction)
}

pub fn trust_window(state: &State) -> TrustWindow {
    let r0 = [&state.u, &state.n, &state.n_t]
        .into_iter()
        .map(|f| mass_radius(f, MASS_FRACTION))
        .fold(0.0f64, f64::max);
    let k_energy = spectral_radius(&state.u, MASS_FRACTION);
    let v_max = (2.0 * k_energy).max(1.0);
    let t_trust = ((0.5 * state.grid().length() - r0) / v_max).max(0.0);
    TrustWindow {
        r0,
        k_energy,
        v_max,
        t_trust,
    }
}
