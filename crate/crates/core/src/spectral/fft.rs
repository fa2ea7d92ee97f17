use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::field::{Field, Space};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, dir: Direction) -> Plan {
    static PLANS: OnceLock<Mutex<HashMap<(usize, Direction), Plan>>> = OnceLock::new();
    let mut cache = PLANS
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("fft plan cache poisoned");
    cache
        .entry((n, dir))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            match dir {
                Direction::Forward => planner.plan_fft_forward(n),
                Direction::Inverse => planner.plan_fft_inverse(n),
            }
        })
        .clone()
}

/// Unitary forward transform of a physical field.
pub fn dft_forward(field: &Field) -> Result<Field> {
    field.expect_space(Space::Physical)?;
    Ok(transform(field, Space::Spectral))
}

/// Unitary inverse transform of a spectral field.
pub fn dft_inverse(field: &Field) -> Result<Field> {
    field.expect_space(Space::Spectral)?;
    Ok(transform(field, Space::Physical))
}

pub(crate) fn transform(field: &Field, target: Space) -> Field {
    let grid = field.grid();
    let dir = match target {
        Space::Spectral => Direction::Forward,
        Space::Physical => Direction::Inverse,
    };
    let mut values = field.values().to_vec();
    fft3_in_place(&mut values, grid.n(), dir);
    Field::from_values(grid, target, values).expect("transform preserves length")
}

#[derive(Clone, Copy)]
struct SendPtr(*mut Complex64);
// SAFETY: the pointer is only dereferenced at indices partitioned by outer
// loop index, so concurrent accesses never alias.
unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

/// In-place 3D DFT of an x-fastest `n³` buffer, scaled by `n^{-3/2}`.
/// Forward and inverse transforms are both unitary.
pub fn fft3_in_place(values: &mut [Complex64], n: usize, dir: Direction) {
    assert_eq!(values.len(), n * n * n, "buffer is not n³ long");
    let fft = plan(n, dir);
    let plane = n * n;

    // Axes 0 and 1 live inside each z-slab.
    values.par_chunks_mut(plane).for_each_init(
        || {
            (
                vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()],
                vec![Complex64::new(0.0, 0.0); plane],
            )
        },
        |(scratch, buf), slab| {
            fft.process_with_scratch(slab, scratch);
            for j in 0..n {
                for i in 0..n {
                    buf[i * n + j] = slab[i + n * j];
                }
            }
            fft.process_with_scratch(buf, scratch);
            for j in 0..n {
                for i in 0..n {
                    slab[i + n * j] = buf[i * n + j];
                }
            }
        },
    );

    // Axis 2: each y-index owns a disjoint set of elements.
    let ptr = SendPtr(values.as_mut_ptr());
    (0..n).into_par_iter().for_each_init(
        || {
            (
                vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()],
                vec![Complex64::new(0.0, 0.0); plane],
            )
        },
        |(scratch, buf), j| {
            let p = ptr;
            for k in 0..n {
                let base = n * j + plane * k;
                for i in 0..n {
                    // SAFETY: index base + i < n³ and only this j touches it.
                    buf[i * n + k] = unsafe { *p.0.add(base + i) };
                }
            }
            fft.process_with_scratch(buf, scratch);
            for k in 0..n {
                let base = n * j + plane * k;
                for i in 0..n {
                    unsafe { *p.0.add(base + i) = buf[i * n + k] };
                }
            }
        },
    );

    let scale = (n as f64).powf(-1.5);
    values.par_iter_mut().for_each(|v| *v *= scale);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_field(grid: Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        Field::from_values(grid, Space::Physical, values).unwrap()
    }

    /// Direct O(N²) DFT with the same unitary scaling.
    fn naive_dft(field: &Field) -> Vec<Complex64> {
        let grid = field.grid();
        let n = grid.n();
        let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (kidx, slot) in out.iter_mut().enumerate() {
            let (a, b, c) = grid.unravel(kidx);
            let mut acc = Complex64::new(0.0, 0.0);
            for (xidx, v) in field.values().iter().enumerate() {
                let (i, j, k) = grid.unravel(xidx);
                let phase = -2.0 * PI * ((a * i + b * j + c * k) % n) as f64 / n as f64;
                acc += v * Complex64::from_polar(1.0, phase);
            }
            *slot = acc / (grid.len() as f64).sqrt();
        }
        out
    }

    #[test]
    fn constant_field_maps_to_zero_mode() {
        let grid = Grid::new(8, 2.0).unwrap();
        let one = Field::from_real_fn(grid, |_| 1.0);
        let spec = dft_forward(&one).unwrap();
        let expected = (grid.len() as f64).sqrt();
        assert!((spec.values()[0] - expected).norm() < 1e-12);
        let rest = spec.values()[1..].iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(rest < 1e-12);
    }

    #[test]
    fn matches_direct_summation_and_parseval() {
        let grid = Grid::new(8, 1.0).unwrap();
        let f = random_field(grid, 11);
        let spec = dft_forward(&f).unwrap();
        let direct = naive_dft(&f);
        let err: f64 = spec
            .values()
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err / f.l2_discrete() < 1e-12);

        let direct_norm = direct.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!((direct_norm - f.l2_discrete()).abs() / f.l2_discrete() < 1e-12);
        assert!((spec.l2_discrete() - f.l2_discrete()).abs() / f.l2_discrete() < 1e-12);
    }

    #[test]
    fn round_trip_is_identity() {
        let grid = Grid::new(16, 3.0).unwrap();
        let f = random_field(grid, 5);
        let back = dft_inverse(&dft_forward(&f).unwrap()).unwrap();
        let err = (&back - &f).l2_discrete() / f.l2_discrete();
        assert!(err < 1e-12, "round trip error {err}");
    }

    #[test]
    fn space_tag_is_checked() {
        let grid = Grid::new(4, 1.0).unwrap();
        let f = Field::zeros(grid, Space::Spectral);
        assert!(dft_forward(&f).is_err());
        assert!(dft_inverse(&f.to_physical()).is_err());
    }
}
