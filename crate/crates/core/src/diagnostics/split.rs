use super::norms::{l2_norm, weighted_norm};
use crate::error::{Error, Result};
use crate::integrators::Trajectory;
use crate::model::PhaseSign;
use crate::spectral::{apply_multiplier, apply_multiplier_fn, lp_project, spatial_split, Complex64, Field, LpMode, Space, Symbol};

/// Exponent `e` of the spatial cutoff radius `K = s^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitExponent {
    /// `K = s^{1/8}`, the `G = G₁ + G₂` decomposition.
    Eighth,
    /// `K = s^{1/4}`, the `g₁/g₂` decomposition.
    Quarter,
}

impl SplitExponent {
    pub fn value(self) -> f64 {
        match self {
            SplitExponent::Eighth => 0.125,
            SplitExponent::Quarter => 0.25,
        }
    }
}

/// Norms of the split Duhamel integrals at one time.
#[derive(Clone, Debug)]
pub struct SplitReport {
    pub t: f64,
    pub exponent: SplitExponent,
    pub sign: PhaseSign,
    /// Cutoff radius `t^e` at the report time.
    pub cutoff: f64,
    /// `‖x²·piece₁‖_{L²}`.
    pub x2_localized: f64,
    pub localized_l2: f64,
    pub remainder_l2: f64,
    /// `(k, ‖P_{≤k} piece₂‖_{L²})` over the grid's dyadic range.
    pub low_frequency: Vec<(i32, f64)>,
    /// `‖(piece₁ + piece₂) − G‖_{L²}` against the extracted Duhamel term.
    pub complementarity: f64,
}

impl SplitReport {
    /// Least-squares slope of `log₂‖P_{≤k} piece₂‖` against `k` over the
    /// shells with `2^k ≤ k_max`.
    pub fn low_frequency_slope(&self, k_max: f64) -> Result<f64> {
        let pts: Vec<(f64, f64)> = self
            .low_frequency
            .iter()
            .filter(|&&(k, v)| 2f64.powi(k) <= k_max && v > 0.0)
            .map(|&(k, v)| (k as f64, v.log2()))
            .collect();
        if pts.len() < 2 {
            return Err(Error::InsufficientData(format!("fewer than two shells below {k_max}")));
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Ok(sxy / sxx)
    }
}

fn integrand(density: &Field, s: f64, sign: PhaseSign) -> Result<Field> {
    let sg = sign.value();
    apply_multiplier_fn(
        &density.to_spectral(),
        |xi| {
            let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            Complex64::from_polar(r, sg * s * r)
        },
        Some(Complex64::new(0.0, 0.0)),
    )
}

fn abs2(f: &Field) -> Field {
    f.map(|v| Complex64::new(v.norm_sqr(), 0.0))
}

struct Pieces {
    localized: Field,
    remainder: Field,
}

/// Trapezoid accumulation of both split integrals at every stored time up
/// to and including `t_stop`.
fn accumulate(
    traj: &Trajectory,
    t_stop: f64,
    exponent: SplitExponent,
    sign: PhaseSign,
    mut visit: impl FnMut(f64, &Pieces) -> Result<()>,
) -> Result<()> {
    let last = traj.index_of(t_stop)?;
    if last < 2 {
        return Err(Error::InsufficientData(format!(
            "split integrals need at least 3 snapshots up to t = {t_stop}, found {}",
            last + 1
        )));
    }
    let grid = traj.grid;
    let mut acc = Pieces {
        localized: Field::zeros(grid, Space::Spectral),
        remainder: Field::zeros(grid, Space::Spectral),
    };
    let mut prev: Option<(f64, Field, Field)> = None;
    for idx in 0..=last {
        let state = traj.state(idx)?;
        let s = state.t;
        let f = apply_multiplier(&state.u.to_spectral(), &Symbol::Schrodinger(-s))?.to_physical();
        let (f_low, _) = spatial_split(&f, s.powf(exponent.value()))?;
        let u_low = apply_multiplier(&f_low.to_spectral(), &Symbol::Schrodinger(s))?.to_physical();
        let full = abs2(&state.u);
        let low = abs2(&u_low);
        let high = &full - &low;
        let a = integrand(&low, s, sign)?;
        let b = integrand(&high, s, sign)?;
        if let Some((s0, a0, b0)) = &prev {
            let w = Complex64::new(0.5 * (s - s0), 0.0);
            acc.localized = &acc.localized + &(&a + a0).scale(w);
            acc.remainder = &acc.remainder + &(&b + b0).scale(w);
        }
        if idx > 0 {
            visit(s, &acc)?;
        }
        prev = Some((s, a, b));
    }
    Ok(())
}

fn report(
    traj: &Trajectory,
    t: f64,
    exponent: SplitExponent,
    sign: PhaseSign,
    pieces: &Pieces,
    start: &crate::model::ProfilePair,
) -> Result<SplitReport> {
    let localized = pieces.localized.to_physical();
    let remainder = pieces.remainder.to_physical();
    let (lo, hi) = traj.grid.dyadic_range();
    let low_frequency = (lo..=hi)
        .map(|k| Ok((k, l2_norm(&lp_project(&pieces.remainder, k, LpMode::Below)?))))
        .collect::<Result<Vec<_>>>()?;
    let now = traj.profiles_at(t)?;
    let extract = super::duhamel::duhamel_from_profiles(start, &now);
    let g = match sign {
        PhaseSign::Plus => extract.g_plus,
        PhaseSign::Minus => extract.g_minus,
    };
    let complementarity = l2_norm(&(&(&localized + &remainder) - &g));
    Ok(SplitReport {
        t,
        exponent,
        sign,
        cutoff: t.powf(exponent.value()),
        x2_localized: weighted_norm(&localized, 2, false)?,
        localized_l2: l2_norm(&localized),
        remainder_l2: l2_norm(&remainder),
        low_frequency,
        complementarity,
    })
}

/// Split Duhamel integrals of `G±` at the stored time `t`.
///
/// At each stored time `s ≤ t` the profile is cut as
/// `f = f_{≤K} + f_{>K}` with `K = s^e`; the localized piece integrates
/// `e^{±isΛ}Λ|e^{isΔ}f_{≤K}|²` and the remainder integrates the rest of
/// `e^{±isΛ}Λ|u|²`, both by the trapezoid rule over snapshots.
pub fn split_diagnostics(traj: &Trajectory, t: f64, exponent: SplitExponent, sign: PhaseSign) -> Result<SplitReport> {
    let start = traj.profiles(0)?;
    let mut last = None;
    accumulate(traj, t, exponent, sign, |s, acc| {
        if s == traj.times()[traj.index_of(t)?] {
            last = Some(report(traj, s, exponent, sign, acc, &start)?);
        }
        Ok(())
    })?;
    last.ok_or_else(|| Error::InsufficientData(format!("no snapshot at t = {t}")))
}

/// `‖x²·piece₁‖_{L²}` at every stored time in `(0, t_stop]`.
pub fn split_growth_series(
    traj: &Trajectory,
    t_stop: f64,
    exponent: SplitExponent,
    sign: PhaseSign,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    accumulate(traj, t_stop, exponent, sign, |s, acc| {
        out.push((s, weighted_norm(&acc.localized.to_physical(), 2, false)?));
        Ok(())
    })?;
    Ok(out)
}
