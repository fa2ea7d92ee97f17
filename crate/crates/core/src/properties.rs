use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data_io::{
    decode_snapshot, encode_snapshot, generate_initial_data, sha256_hex, validate_data_norms, Component, DataFamily,
    ProfileKind, RunConfig,
};
use crate::diagnostics::{decay_fit, l2_norm};
use crate::integrators::{strang_step, StepOptions};
use crate::model::{
    null_identity_phi_residual, null_identity_psi_residual, phase_phi, to_profiles, validate_parameters,
    Parameters, PhaseSign, State, Vec3, ZeroModes,
};
use crate::spectral::{apply_multiplier, dft_forward, dft_inverse, lp_project, spatial_split, Field, Grid, LpMode, Space, Symbol};

fn grid(n: usize) -> Grid {
    Grid::new(n, n as f64).unwrap()
}

fn noise(grid: Grid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Field::from_values(grid, Space::Physical, values).unwrap()
}

/// Smooth real bump centred at `c` with width `s`.
fn bump(grid: Grid, c: Vec3, s: f64, zero_mean: bool) -> Field {
    let f = Field::from_real_fn(grid, |x| {
        let r2 = (0..3).map(|i| (x[i] - c[i]).powi(2)).sum::<f64>();
        (-r2 / (2.0 * s * s)).exp()
    });
    if zero_mean {
        let m = f.mean();
        f.map(|v| v - m)
    } else {
        f
    }
}

fn smooth_state(seed: u64) -> State {
    let g = grid(16);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centre = || [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let (a, b, c) = (centre(), centre(), centre());
    let u = bump(g, a, 1.2, false).map(|v| v * Complex64::new(0.02, 0.01));
    let n = bump(g, b, 1.5, true).scale(Complex64::new(0.01, 0.0));
    let n_t = bump(g, c, 1.5, true).scale(Complex64::new(0.02, 0.0));
    State::from_fields(u, n, n_t, 0.0).unwrap()
}

fn rel(a: &Field, b: &Field) -> f64 {
    l2_norm(&(a - b)) / l2_norm(b).max(f64::MIN_POSITIVE)
}

fn unit_vec() -> impl Strategy<Value = Vec3> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
}

fn sign() -> impl Strategy<Value = PhaseSign> {
    prop_oneof![Just(PhaseSign::Plus), Just(PhaseSign::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_round_trip(seed in any::<u64>(), n in prop_oneof![Just(4usize), Just(8), Just(16)]) {
        let f = noise(grid(n), seed);
        let hat = dft_forward(&f).unwrap();
        let energy_x: f64 = f.values().iter().map(|v| v.norm_sqr()).sum();
        let energy_k: f64 = hat.values().iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((energy_x - energy_k).abs() <= 1e-12 * energy_x);
        let back = dft_inverse(&hat).unwrap();
        prop_assert!(rel(&back, &f) <= 1e-12);
    }

    #[test]
    fn propagators_are_unimodular(seed in any::<u64>(), t in -20.0f64..20.0) {
        let f = noise(grid(8), seed).to_spectral();
        for symbol in [Symbol::Schrodinger(t), Symbol::HalfWave(t)] {
            prop_assert!(symbol.is_unimodular());
            let g = apply_multiplier(&f, &symbol).unwrap();
            let (a, b) = (l2_norm(&g), l2_norm(&f));
            prop_assert!((a - b).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn projections_commute_with_multipliers(seed in any::<u64>(), k in -2i32..=2, t in -5.0f64..5.0) {
        let f = noise(grid(16), seed).to_spectral();
        let m = Symbol::Schrodinger(t);
        let a = lp_project(&apply_multiplier(&f, &m).unwrap(), k, LpMode::At).unwrap();
        let b = apply_multiplier(&lp_project(&f, k, LpMode::At).unwrap(), &m).unwrap();
        let a = a.to_physical();
        let b = b.to_physical();
        prop_assert!(l2_norm(&(&a - &b)) <= 1e-12 * l2_norm(&f));
    }

    #[test]
    fn spatial_split_is_a_partition(seed in any::<u64>(), k in 0.1f64..3.9) {
        let f = noise(grid(8), seed);
        let (low, high) = spatial_split(&f, k).unwrap();
        let sum = &low + &high;
        for (s, v) in sum.values().iter().zip(f.values()) {
            prop_assert!((s - v).norm() <= 4.0 * f64::EPSILON * v.norm().max(1.0));
        }
    }

    #[test]
    fn below_projection_is_monotone_in_k(seed in any::<u64>()) {
        let f = noise(grid(16), seed);
        let (lo, hi) = f.grid().dyadic_range();
        let mut prev = 0.0;
        for k in lo..=hi {
            let v = l2_norm(&lp_project(&f, k, LpMode::Below).unwrap().to_physical());
            prop_assert!(v >= prev * (1.0 - 1e-12));
            prev = v;
        }
        let m = f.mean();
        let centred = f.map(|v| v - m);
        prop_assert!((prev - l2_norm(&centred)).abs() <= 1e-10 * l2_norm(&centred));
    }

    #[test]
    fn null_identities_vanish(xi in unit_vec(), eta in unit_vec(), s in sign()) {
        prop_assume!(eta.iter().map(|v| v * v).sum::<f64>() > 1e-6);
        prop_assert!(null_identity_psi_residual(xi, eta, s).unwrap().abs() <= 1e-12);
        let r = null_identity_phi_residual(xi, eta, s).unwrap();
        prop_assert!(r.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1e-12);
    }

    #[test]
    fn phases_depend_on_xi_through_xi_dot_eta(xi in unit_vec(), eta in unit_vec(), shift in -1.0f64..1.0, s in sign()) {
        let ortho = [eta[1], -eta[0], 0.0];
        let xi2 = [xi[0] + shift * ortho[0], xi[1] + shift * ortho[1], xi[2]];
        prop_assert!((phase_phi(xi, eta, s) - phase_phi(xi2, eta, s)).abs() <= 1e-12);
    }

    #[test]
    fn halfwave_and_profile_round_trips(seed in any::<u64>(), t in 0.0f64..5.0) {
        let mut s = smooth_state(seed);
        s.t = t;
        let hw = s.to_halfwave().unwrap();
        let back = crate::model::from_halfwave(s.u.clone(), &hw, s.means).unwrap();
        prop_assert!(rel(&back.n, &s.n) <= 1e-12);
        prop_assert!(rel(&back.n_t, &s.n_t) <= 1e-12);
        let conj = hw.w_plus.conj();
        prop_assert!(rel(&conj.scale(Complex64::new(-1.0, 0.0)), &hw.w_minus) <= 1e-10);
        let p = s.to_profiles().unwrap();
        prop_assert!((l2_norm(&p.f) - l2_norm(&s.u)).abs() <= 1e-12 * l2_norm(&s.u));
        let again = State::from_profiles(&p, s.means).unwrap();
        prop_assert!(rel(&again.u, &s.u) <= 1e-12);
        prop_assert!(rel(&again.n, &s.n) <= 1e-12);
    }

    #[test]
    fn free_evolution_has_constant_profiles(seed in any::<u64>(), t in 0.0f64..6.3) {
        let s = smooth_state(seed);
        let p0 = s.to_profiles().unwrap();
        let hw = s.to_halfwave().unwrap();
        let w_plus = apply_multiplier(&hw.w_plus.to_spectral(), &Symbol::HalfWave(t)).unwrap().to_physical();
        let w_minus = apply_multiplier(&hw.w_minus.to_spectral(), &Symbol::HalfWave(-t)).unwrap().to_physical();
        let u = apply_multiplier(&s.u.to_spectral(), &Symbol::Schrodinger(t)).unwrap().to_physical();
        let moved = crate::model::HalfWave { w_plus, w_minus, t };
        let p = to_profiles(&u, &moved, t).unwrap();
        prop_assert!(rel(&p.f, &p0.f) <= 1e-12);
        prop_assert!(rel(&p.g_plus, &p0.g_plus) <= 1e-12);
        prop_assert!(rel(&p.g_minus, &p0.g_minus) <= 1e-12);
    }

    #[test]
    fn strang_step_is_an_isometry_on_u(seed in any::<u64>(), h in 1e-3f64..5e-2) {
        let s = smooth_state(seed);
        let next = strang_step(&s, h, StepOptions::default()).unwrap();
        let (a, b) = (l2_norm(&next.u), l2_norm(&s.u));
        prop_assert!((a - b).abs() <= 1e-12 * b);
        prop_assert!(next.n.imag_residue() <= 1e-10);
    }

    #[test]
    fn linear_flow_is_time_reversible(seed in any::<u64>(), h in 1e-3f64..0.1) {
        let mut s = smooth_state(seed);
        s.u = Field::zeros(s.u.grid(), Space::Physical);
        let forward = strang_step(&s, h, StepOptions::default()).unwrap();
        let back = strang_step(&forward, -h, StepOptions::default()).unwrap();
        prop_assert!(rel(&back.n, &s.n) <= 1e-12);
        prop_assert!(rel(&back.n_t, &s.n_t) <= 1e-12);
    }

    #[test]
    fn decay_fit_recovers_power_laws(p in -3.0f64..0.0, c in 0.01f64..100.0) {
        let series: Vec<(f64, f64)> = (0..12).map(|i| {
            let t = 1.0 + 0.5 * i as f64;
            (t, c * t.powf(p))
        }).collect();
        let fit = decay_fit(&series, (1.0, 6.5), 10.0).unwrap();
        prop_assert!((fit.exponent - p).abs() <= 1e-12);
    }

    #[test]
    fn snapshots_round_trip_bit_exactly(seed in any::<u64>(), t in -1e3f64..1e3) {
        let mut s = smooth_state(seed);
        s.t = t;
        s.means = ZeroModes { n_mean: t * 1e-3, nt_mean: -t };
        let bytes = encode_snapshot(&s);
        let back = decode_snapshot(&bytes).unwrap();
        prop_assert_eq!(encode_snapshot(&back), bytes);
    }

    #[test]
    fn any_single_byte_corruption_changes_the_hash(seed in any::<u64>(), pos in any::<prop::sample::Index>(), flip in 1u8..=255) {
        let bytes = encode_snapshot(&smooth_state(seed));
        let mut bad = bytes.clone();
        let i = pos.index(bad.len());
        bad[i] ^= flip;
        prop_assert_ne!(sha256_hex(&bad), sha256_hex(&bytes));
    }

    #[test]
    fn generated_wave_data_is_zero_mean(
        kind in prop_oneof![Just(ProfileKind::Gaussian), Just(ProfileKind::SmoothBump), Just(ProfileKind::Ricker)],
        amp in 0.001f64..10.0,
        sigma in 0.5f64..1.9,
    ) {
        let family = DataFamily::new(
            Component::gaussian(amp, 1.0),
            Component::new(kind, amp, sigma),
            Component::new(kind, -amp, sigma),
            3,
        );
        let s = generate_initial_data(&family, grid(16)).unwrap();
        for f in [&s.n, &s.n_t] {
            prop_assert!(f.mean().norm() <= 1e-14 * f.max_abs().max(f64::MIN_POSITIVE));
        }
        prop_assert_eq!(s.means, ZeroModes::default());
    }

    #[test]
    fn data_norms_are_homogeneous(amp in 0.001f64..1.0, sigma in 0.8f64..1.5) {
        let make = |a: f64| {
            let family = DataFamily::new(Component::gaussian(a, sigma), Component::zero(), Component::gaussian(a, sigma), 0);
            generate_initial_data(&family, grid(16)).unwrap()
        };
        let params = Parameters::default();
        let one = validate_data_norms(&make(amp), &params);
        let two = validate_data_norms(&make(2.0 * amp), &params);
        for (a, b) in one.norms.iter().zip(&two.norms) {
            prop_assert!((b.value - 2.0 * a.value).abs() <= 1e-12 * b.value.max(1e-300), "{}", a.name);
        }
    }

    #[test]
    fn admissible_parameters_satisfy_relations(big_n in 2400u32..20_000, frac in 0.0f64..1.0) {
        let lo = (5.0 / big_n as f64).max(4.0 / (big_n as f64 - 2.0));
        let delta = lo + frac * (1.0 / 480.0 - lo);
        let p = Parameters::new(0.05, delta, big_n);
        prop_assert!((p.alpha - (1.0 / 6.0 - 2.0 * delta)).abs() <= 1e-15);
        prop_assert!((p.beta - (1.0 - 3.0 * p.alpha)).abs() <= 1e-15);
        prop_assert!(validate_parameters(&p).passed());
    }

    #[test]
    fn grid_wavenumbers_are_symmetric(n in (1usize..=32).prop_map(|k| 2 * k), length in 1.0f64..100.0) {
        let g = Grid::new(n, length).unwrap();
        prop_assert!((g.dx() * n as f64 - length).abs() <= 1e-12 * length);
        let ks = g.wavenumbers();
        let kmax = ks.iter().fold(0.0f64, |m, k| m.max(k.abs()));
        prop_assert!((kmax - std::f64::consts::PI * n as f64 / length).abs() <= 1e-12 * kmax);
        for m in 1..n {
            if m != n / 2 {
                prop_assert!((ks[m] + ks[n - m]).abs() <= 1e-12 * kmax);
            }
        }
    }

    #[test]
    fn config_text_round_trips(n in (4usize..=32).prop_map(|k| 2 * k), steps in 1u32..500, seed in any::<u64>()) {
        let text = format!(
            "grid.n = {n}\ngrid.length = {}\nt_end = {}\nh = 0.01\nseed = {seed}\nu.kind = ricker\nu.sigma = 0.7\n",
            2 * n,
            0.01 * steps as f64,
        );
        let cfg = RunConfig::parse(&text).unwrap();
        let again = RunConfig::parse(&cfg.to_text()).unwrap();
        prop_assert_eq!(again.to_text(), cfg.to_text());
    }
}
