use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{apply_multiplier, lp_project, Field, LpMode, Symbol};

/// Which norm to evaluate. All norms are continuum analogues with `dx³`
/// cell weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    /// `L^p`, `p ∈ [1, ∞]`.
    Lp(f64),
    /// `H^s` through the `⟨Λ⟩^s` multiplier.
    Sobolev(f64),
    /// Homogeneous Besov `Ḃ^s_{p,q}` over the grid's dyadic shells.
    Besov { s: f64, p: f64, q: f64 },
    /// `‖|x|^power f‖_{L²}`, or `‖Λ(|x|^power f)‖_{L²}` when `lambda` is set.
    Weighted { power: u32, lambda: bool },
    /// `(Σ_j ‖x_j f‖²_{H¹})^{1/2}`.
    WeightedH1,
}

/// Field a norm is taken of, resolved against a trajectory snapshot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    U,
    N,
    Nt,
    F,
    GPlus,
    GMinus,
    /// `G₊ = i(g₊(t) − g₊(0))`.
    DuhamelPlus,
    /// `G₋ = i(g₋(t) − g₋(0))`.
    DuhamelMinus,
    /// `f(t) − f(0)`.
    DuhamelF,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormRequest {
    pub kind: NormKind,
    pub target: Target,
}

fn check_exponent(p: f64, what: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("{what} exponent must lie in [1, ∞], got {p}")));
    }
    Ok(())
}

fn lp_of_values(values: &[Complex64], p: f64, cell: f64) -> f64 {
    if p.is_infinite() {
        values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    } else if p == 2.0 {
        (values.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell).sqrt()
    } else {
        (values.iter().map(|v| v.norm().powf(p)).sum::<f64>() * cell).powf(1.0 / p)
    }
}

pub fn lp_norm(field: &Field, p: f64) -> Result<f64> {
    check_exponent(p, "Lebesgue")?;
    let phys = field.to_physical();
    Ok(lp_of_values(phys.values(), p, field.grid().cell_volume()))
}

pub fn l2_norm(field: &Field) -> f64 {
    field.l2_discrete() * field.grid().cell_volume().sqrt()
}

pub fn sobolev_norm(field: &Field, s: f64) -> f64 {
    let spec = field.to_spectral();
    let grid = field.grid();
    let ks = grid.wavenumbers();
    let n = grid.n();
    let mut acc = 0.0;
    for (idx, v) in spec.values().iter().enumerate() {
        let (i, j, k) = (idx % n, (idx / n) % n, idx / (n * n));
        let k2 = ks[i] * ks[i] + ks[j] * ks[j] + ks[k] * ks[k];
        acc += (1.0 + k2).powf(s) * v.norm_sqr();
    }
    (acc * grid.cell_volume()).sqrt()
}

/// Per-shell `‖P_k f‖_{L^p}` for every `k` in the grid's dyadic range.
pub fn shell_norms(field: &Field, p: f64) -> Result<Vec<(i32, f64)>> {
    check_exponent(p, "Lebesgue")?;
    let spec = field.to_spectral();
    let (lo, hi) = field.grid().dyadic_range();
    if lo > hi {
        return Err(Error::Range("empty Littlewood–Paley range".into()));
    }
    (lo..=hi)
        .map(|k| {
            let piece = lp_project(&spec, k, LpMode::At)?.to_physical();
            Ok((k, lp_of_values(piece.values(), p, field.grid().cell_volume())))
        })
        .collect()
}

pub fn besov_norm(field: &Field, s: f64, p: f64, q: f64) -> Result<f64> {
    check_exponent(q, "summation")?;
    let shells = shell_norms(field, p)?;
    let terms = shells.iter().map(|&(k, v)| 2f64.powf(s * k as f64) * v);
    Ok(if q.is_infinite() {
        terms.fold(0.0f64, f64::max)
    } else {
        terms.map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q)
    })
}

fn weighted_field(field: &Field, power: u32) -> Field {
    let phys = field.to_physical();
    let grid = field.grid();
    let mut out = phys.clone();
    for ((_, x), v) in grid.points().zip(out.values_mut()) {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let w = match power {
            0 => 1.0,
            1 => r2.sqrt(),
            2 => r2,
            p => r2.sqrt().powi(p as i32),
        };
        *v *= w;
    }
    out
}

pub fn weighted_norm(field: &Field, power: u32, lambda: bool) -> Result<f64> {
    let w = weighted_field(field, power);
    if lambda {
        let lw = apply_multiplier(&w.to_spectral(), &Symbol::LambdaPow(1.0))?;
        Ok(l2_norm(&lw))
    } else {
        Ok(l2_norm(&w))
    }
}

pub fn weighted_h1_norm(field: &Field) -> f64 {
    let phys = field.to_physical();
    let grid = field.grid();
    let mut acc = 0.0;
    for axis in 0..3 {
        let mut comp = phys.clone();
        for ((_, x), v) in grid.points().zip(comp.values_mut()) {
            *v *= x[axis];
        }
        acc += sobolev_norm(&comp, 1.0).powi(2);
    }
    acc.sqrt()
}

pub fn norm(field: &Field, kind: NormKind) -> Result<f64> {
    match kind {
        NormKind::Lp(p) => lp_norm(field, p),
        NormKind::Sobolev(s) => Ok(sobolev_norm(field, s)),
        NormKind::Besov { s, p, q } => besov_norm(field, s, p, q),
        NormKind::Weighted { power, lambda } => {
            if power > 2 {
                return Err(Error::Domain(format!("weight power must be 1 or 2, got {power}")));
            }
            weighted_norm(field, power, lambda)
        }
        NormKind::WeightedH1 => Ok(weighted_h1_norm(field)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, Space};
    use std::f64::consts::PI;

    fn gaussian(grid: Grid) -> Field {
        Field::from_real_fn(grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2.0).exp())
    }

    #[test]
    fn first_moment_of_gaussian() {
        let grid = Grid::new(64, 16.0).unwrap();
        let v = norm(&gaussian(grid), NormKind::Weighted { power: 1, lambda: false }).unwrap();
        let exact = (1.5f64).sqrt() * PI.powf(0.75);
        assert!((v - exact).abs() < 1e-6, "{v} vs {exact}");
        assert!((exact - 2.8901).abs() < 1e-4);
    }

    #[test]
    fn h0_is_l2() {
        let grid = Grid::new(16, 8.0).unwrap();
        let f = Field::from_fn(grid, |x| Complex64::new(x[0].sin(), (-x[1] * x[1]).exp()));
        let a = norm(&f, NormKind::Sobolev(0.0)).unwrap();
        let b = norm(&f, NormKind::Lp(2.0)).unwrap();
        assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn single_shell_besov_matches_sup() {
        let grid = Grid::new(32, 2.0 * PI).unwrap();
        let f = Field::from_real_fn(grid, |x| (4.0 * x[0]).cos() + (4.0 * x[1]).sin());
        let besov = norm(&f, NormKind::Besov { s: 0.0, p: f64::INFINITY, q: 1.0 }).unwrap();
        let sup = norm(&f, NormKind::Lp(f64::INFINITY)).unwrap();
        assert!(besov >= sup * (1.0 - 1e-12) && besov <= 2.0 * sup);
    }

    #[test]
    fn lp_of_constant_is_volume_power() {
        let grid = Grid::new(8, 2.0).unwrap();
        let one = Field::from_real_fn(grid, |_| 1.0);
        for p in [1.0, 2.0, 6.0] {
            let v = lp_norm(&one, p).unwrap();
            assert!((v - 8f64.powf(1.0 / p)).abs() < 1e-12);
        }
        assert!(lp_norm(&one, 0.5).is_err());
    }

    #[test]
    fn lambda_weighted_uses_outer_lambda() {
        let grid = Grid::new(32, 16.0).unwrap();
        let f = gaussian(grid);
        let direct = {
            let w = weighted_field(&f, 2).to_spectral();
            l2_norm(&apply_multiplier(&w, &Symbol::LambdaPow(1.0)).unwrap())
        };
        let v = norm(&f, NormKind::Weighted { power: 2, lambda: true }).unwrap();
        assert_eq!(v, direct);
        assert_eq!(f.space(), Space::Physical);
    }

    #[test]
    fn weighted_h1_reduces_to_moment_at_low_frequency() {
        let grid = Grid::new(64, 32.0).unwrap();
        let sigma = 4.0;
        let f = Field::from_real_fn(grid, |x| {
            (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * sigma * sigma)).exp()
        });
        let h1 = weighted_h1_norm(&f);
        let l2 = weighted_norm(&f, 1, false).unwrap();
        assert!(h1 >= l2 && h1 <= 1.1 * l2);
    }
}
