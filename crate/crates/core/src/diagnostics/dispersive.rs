use std::str::FromStr;

use num_complex::Complex64;

use super::norms::{besov_norm, lp_norm, weighted_norm};
use super::trust::trust_window;
use crate::error::{Error, Result};
use crate::model::State;
use crate::spectral::{apply_multiplier, Field, Symbol};

/// Linear dispersive estimate to probe.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DispersiveKind {
    /// `‖e^{itΔ}f‖_{L⁶} ≲ t⁻¹‖xf‖_{L²}`.
    SchrodingerL6,
    /// `‖e^{itΔ}f‖_{L∞} ≲ t^{−3/2}‖xf‖^{1/2}‖x²f‖^{1/2}`.
    SchrodingerLinf,
    /// `‖e^{−itΛ}h‖_{Ḃ⁰_{∞,1}} ≲ t⁻¹‖h‖_{Ḃ²_{1,1}}`.
    WaveBesov,
    /// `‖e^{−itΛ}h‖_{L^p} ≲ t^{−(1−2/p)}‖Λ^{2(1−2/p)}h‖_{L^{p'}}`.
    WaveLp(f64),
}

impl DispersiveKind {
    pub fn name(self) -> String {
        match self {
            DispersiveKind::SchrodingerL6 => "schrodinger_L6".into(),
            DispersiveKind::SchrodingerLinf => "schrodinger_Linf".into(),
            DispersiveKind::WaveBesov => "wave_Besov".into(),
            DispersiveKind::WaveLp(p) => format!("wave_Lp({p})"),
        }
    }

    /// Decay exponent of the bound.
    pub fn rate(self) -> f64 {
        match self {
            DispersiveKind::SchrodingerL6 | DispersiveKind::WaveBesov => 1.0,
            DispersiveKind::SchrodingerLinf => 1.5,
            DispersiveKind::WaveLp(p) => 1.0 - 2.0 / p,
        }
    }
}

impl FromStr for DispersiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schrodinger_L6" => Ok(DispersiveKind::SchrodingerL6),
            "schrodinger_Linf" => Ok(DispersiveKind::SchrodingerLinf),
            "wave_Besov" => Ok(DispersiveKind::WaveBesov),
            "wave_Lp" => Ok(DispersiveKind::WaveLp(f64::INFINITY)),
            other => {
                if let Some(p) = other.strip_prefix("wave_Lp").and_then(|r| r.strip_prefix(':')) {
                    let p: f64 = p
                        .parse()
                        .map_err(|_| Error::Config(format!("bad exponent in `{other}`")))?;
                    if p < 2.0 {
                        return Err(Error::Config(format!("wave_Lp needs p ≥ 2, got {p}")));
                    }
                    return Ok(DispersiveKind::WaveLp(p));
                }
                Err(Error::Config(format!("unknown dispersive kind `{other}`")))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DispersiveReport {
    pub kind: DispersiveKind,
    pub times: Vec<f64>,
    /// Measured left-hand sides.
    pub lhs: Vec<f64>,
    /// Time-independent norm of the data on the right-hand side.
    pub data_norm: f64,
    /// `lhs · t^{rate} / data_norm`.
    pub ratios: Vec<f64>,
    /// `(max − min) / max` of the ratios.
    pub spread: f64,
    pub trust_window_end: f64,
}

/// Largest tolerated relative spread of the ratio series.
pub const FLATNESS: f64 = 0.25;

impl DispersiveReport {
    pub fn flat(&self) -> bool {
        self.spread <= FLATNESS
    }

    pub fn series(&self) -> Vec<(f64, f64)> {
        self.times.iter().copied().zip(self.lhs.iter().copied()).collect()
    }
}

/// Free Schrödinger evolution `e^{itΔ}f`.
pub fn free_schrodinger(f: &Field, t: f64) -> Result<Field> {
    Ok(apply_multiplier(&f.to_spectral(), &Symbol::Schrodinger(t))?.to_physical())
}

/// Free half-wave evolution `e^{−itΛ}h`.
pub fn free_halfwave(h: &Field, t: f64) -> Result<Field> {
    Ok(apply_multiplier(&h.to_spectral(), &Symbol::HalfWave(t))?.to_physical())
}

/// `n(t) = cos(tΛ)n₀ + Λ⁻¹sin(tΛ)n₁` for zero-mean data.
pub fn free_wave_density(n0: &Field, n1: &Field, t: f64) -> Result<Field> {
    let a = n0.to_spectral();
    let b = n1.to_spectral();
    let grid = n0.grid();
    let ks = grid.wavenumbers();
    let mut out = a.clone();
    for (idx, v) in out.values_mut().iter_mut().enumerate() {
        let (i, j, k) = grid.unravel(idx);
        let w = (ks[i] * ks[i] + ks[j] * ks[j] + ks[k] * ks[k]).sqrt();
        *v = if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            a.values()[idx] * (w * t).cos() + b.values()[idx] * ((w * t).sin() / w)
        };
    }
    Ok(out.to_physical().real_part())
}

/// `h = g₊(0) = n₀ + iΛ⁻¹n₁`.
pub fn wave_profile(data: &State) -> Result<Field> {
    Ok(data.to_halfwave()?.w_plus)
}

pub fn dispersive_check(kind: DispersiveKind, data: &State, times: &[f64]) -> Result<DispersiveReport> {
    let window = trust_window(data);
    if let Some(&bad) = times.iter().find(|&&t| !(t > 0.0 && t <= window.t_trust)) {
        return Err(Error::Range(format!(
            "time {bad} lies outside the trust window (0, {}]",
            window.t_trust
        )));
    }
    let (data_norm, lhs): (f64, Vec<f64>) = match kind {
        DispersiveKind::SchrodingerL6 | DispersiveKind::SchrodingerLinf => {
            let f = &data.u;
            let x1 = weighted_norm(f, 1, false)?;
            let (p, rhs) = if kind == DispersiveKind::SchrodingerL6 {
                (6.0, x1)
            } else {
                (f64::INFINITY, (x1 * weighted_norm(f, 2, false)?).sqrt())
            };
            let lhs = times
                .iter()
                .map(|&t| lp_norm(&free_schrodinger(f, t)?, p))
                .collect::<Result<_>>()?;
            (rhs, lhs)
        }
        DispersiveKind::WaveBesov => {
            let h = wave_profile(data)?;
            let rhs = besov_norm(&h, 2.0, 1.0, 1.0)?;
            let lhs = times
                .iter()
                .map(|&t| besov_norm(&free_halfwave(&h, t)?, 0.0, f64::INFINITY, 1.0))
                .collect::<Result<_>>()?;
            (rhs, lhs)
        }
        DispersiveKind::WaveLp(p) => {
            let h = wave_profile(data)?;
            let sigma = 2.0 * (1.0 - 2.0 / p);
            let dual = if p.is_infinite() { 1.0 } else { p / (p - 1.0) };
            let lifted = apply_multiplier(&h.to_spectral(), &Symbol::LambdaPow(sigma))?;
            let rhs = lp_norm(&lifted, dual)?;
            let lhs = times
                .iter()
                .map(|&t| lp_norm(&free_halfwave(&h, t)?, p))
                .collect::<Result<_>>()?;
            (rhs, lhs)
        }
    };
    let rate = kind.rate();
    let ratios: Vec<f64> = times
        .iter()
        .zip(&lhs)
        .map(|(t, v)| if data_norm > 0.0 { v * t.powf(rate) / data_norm } else { 0.0 })
        .collect();
    let max = ratios.iter().copied().fold(0.0f64, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if max > 0.0 { (max - min) / max } else { 0.0 };
    Ok(DispersiveReport {
        kind,
        times: times.to_vec(),
        lhs,
        data_norm,
        ratios,
        spread,
        trust_window_end: window.t_trust,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, Space};

    fn gaussian_state(grid: Grid) -> State {
        let u = Field::from_real_fn(grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2.0).exp());
        let z = Field::zeros(grid, Space::Physical);
        State::from_fields(u, z.clone(), z, 0.0).unwrap()
    }

    #[test]
    fn gaussian_sup_at_unit_time() {
        let grid = Grid::new(32, 16.0).unwrap();
        let state = gaussian_state(grid);
        let r = dispersive_check(DispersiveKind::SchrodingerLinf, &state, &[1.0]).unwrap();
        let exact = 5f64.powf(-0.75);
        assert!((r.lhs[0] - exact).abs() < 0.01 * exact);
        assert!((exact - 0.2991).abs() < 1e-4);
    }

    #[test]
    fn times_outside_trust_window_are_rejected() {
        let grid = Grid::new(16, 8.0).unwrap();
        let state = gaussian_state(grid);
        assert!(matches!(
            dispersive_check(DispersiveKind::SchrodingerL6, &state, &[1e3]),
            Err(Error::Range(_))
        ));
        assert!(dispersive_check(DispersiveKind::SchrodingerL6, &state, &[0.0]).is_err());
    }

    #[test]
    fn kind_names_parse() {
        assert_eq!("wave_Besov".parse::<DispersiveKind>().unwrap(), DispersiveKind::WaveBesov);
        assert_eq!("wave_Lp:6".parse::<DispersiveKind>().unwrap(), DispersiveKind::WaveLp(6.0));
        assert!("wave_Lp:1".parse::<DispersiveKind>().is_err());
        assert!("heat".parse::<DispersiveKind>().is_err());
    }

    #[test]
    fn free_wave_single_mode() {
        let grid = Grid::new(8, 2.0 * std::f64::consts::PI).unwrap();
        let n0 = Field::from_real_fn(grid, |x| x[0].cos());
        let z = Field::zeros(grid, Space::Physical);
        let n = free_wave_density(&n0, &z, 0.7).unwrap();
        let expected = n0.scale(Complex64::new(0.7f64.cos(), 0.0));
        assert!((&n - &expected).max_abs() < 1e-13);
    }
}
