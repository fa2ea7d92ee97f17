use num_complex::Complex64;

use super::field::{Field, Space};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Which Littlewood–Paley piece to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpMode {
    /// `P_k`, frequencies `|ξ| ∼ 2^k`.
    At,
    /// `P_{≤k}`, all nonzero frequencies up to the `k`-th shell.
    Below,
    /// `P_{>k} = I − P_{≤k}`, which keeps the zero mode.
    Above,
}

fn smooth_edge(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth radial bump: 1 on `[0, 1]`, 0 on `[2, ∞)`, monotone in between.
pub fn theta(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        return 1.0;
    }
    if t >= 2.0 {
        return 0.0;
    }
    let a = smooth_edge(2.0 - t);
    let b = smooth_edge(t - 1.0);
    a / (a + b)
}

/// Weight of the LP multiplier at radius `r` for shell `k` inside `[k_min, k_max]`.
///
/// The end shells absorb everything below `k_min` and above `k_max`, so the
/// `P_k` sum to one at every nonzero frequency.
pub fn lp_symbol(r: f64, k: i32, mode: LpMode, range: (i32, i32)) -> f64 {
    let (lo, hi) = range;
    let below = |j: i32| -> f64 {
        if r == 0.0 {
            0.0
        } else if j >= hi {
            1.0
        } else if j < lo {
            0.0
        } else {
            theta(r / 2f64.powi(j))
        }
    };
    match mode {
        LpMode::Below => below(k),
        LpMode::Above => 1.0 - below(k),
        LpMode::At => {
            if k == lo {
                below(k)
            } else {
                below(k) - below(k - 1)
            }
        }
    }
}

fn check_range(grid: &Grid, k: i32) -> Result<(i32, i32)> {
    let (min, max) = grid.dyadic_range();
    if k < min || k > max {
        return Err(Error::DyadicRange { k, min, max });
    }
    Ok((min, max))
}

/// Applies `P_k`, `P_{≤k}` or `P_{>k}`; the result is in the same space as the input.
pub fn lp_project(field: &Field, k: i32, mode: LpMode) -> Result<Field> {
    let grid = field.grid();
    let range = check_range(&grid, k)?;
    let mut spec = field.to_spectral();
    let ks = grid.wavenumbers();
    let n = grid.n();
    let values = spec.values_mut();
    for kk in 0..n {
        for j in 0..n {
            let row = grid.index(0, j, kk);
            let base = ks[j] * ks[j] + ks[kk] * ks[kk];
            for i in 0..n {
                let r = (base + ks[i] * ks[i]).sqrt();
                let w = lp_symbol(r, k, mode, range);
                values[row + i] *= Complex64::new(w, 0.0);
            }
        }
    }
    Ok(match field.space() {
        Space::Spectral => spec,
        Space::Physical => spec.to_physical(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::from_values(grid, Space::Physical, values).unwrap()
    }

    #[test]
    fn theta_is_a_monotone_bump() {
        assert_eq!(theta(0.0), 1.0);
        assert_eq!(theta(1.0), 1.0);
        assert_eq!(theta(2.0), 0.0);
        assert!((theta(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = theta(1.0 + i as f64 / 1000.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn shells_sum_to_field_minus_mean() {
        let grid = Grid::new(16, 7.0).unwrap();
        let f = random_field(grid, 3);
        let (lo, hi) = grid.dyadic_range();
        let mut acc = Field::zeros(grid, Space::Physical);
        for k in lo..=hi {
            acc = &acc + &lp_project(&f, k, LpMode::At).unwrap();
        }
        let mean = f.mean();
        let target = f.map(|v| v - mean);
        let err = (&acc - &target).l2_discrete() / target.l2_discrete();
        assert!(err < 1e-12, "err {err}");
    }

    #[test]
    fn below_plus_above_is_identity() {
        let grid = Grid::new(16, 5.0).unwrap();
        let f = random_field(grid, 11).to_spectral();
        let (lo, hi) = grid.dyadic_range();
        for k in lo..=hi {
            let s = &lp_project(&f, k, LpMode::Below).unwrap()
                + &lp_project(&f, k, LpMode::Above).unwrap();
            assert!((&s - &f).l2_discrete() < 1e-12 * f.l2_discrete());
        }
    }

    #[test]
    fn low_projection_is_a_contraction() {
        let grid = Grid::new(16, 9.0).unwrap();
        let (lo, hi) = grid.dyadic_range();
        for seed in 0..4 {
            let g = random_field(grid, seed);
            for k in lo..=hi {
                let p = lp_project(&g, k, LpMode::Below).unwrap();
                assert!(p.l2_discrete() <= g.l2_discrete() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn single_mode_recovered_by_partition() {
        let grid = Grid::new(32, 2.0 * std::f64::consts::PI).unwrap();
        let f = Field::from_fn(grid, |x| Complex64::from_polar(1.0, 4.0 * x[0]));
        let (lo, hi) = grid.dyadic_range();
        let pieces: Vec<Field> = (lo..=hi)
            .map(|k| lp_project(&f, k, LpMode::At).unwrap())
            .collect();
        let at_two = &pieces[(2 - lo) as usize];
        assert!((&at_two.clone() - &f).max_abs() < 1e-12);
        let total = pieces.iter().fold(Field::zeros(grid, Space::Physical), |a, p| &a + p);
        assert!((&total - &f).max_abs() < 1e-12);
    }

    #[test]
    fn out_of_range_shell_is_rejected() {
        let grid = Grid::new(8, 4.0).unwrap();
        let f = Field::zeros(grid, Space::Physical);
        let (lo, hi) = grid.dyadic_range();
        assert!(matches!(
            lp_project(&f, hi + 1, LpMode::At),
            Err(Error::DyadicRange { .. })
        ));
        assert!(lp_project(&f, lo - 1, LpMode::Below).is_err());
    }
}
