use num_complex::Complex64;

use super::wave::{wave_update, Quadrature};
use super::{ensure_finite, realify, spectral_of, StepOptions, Stepper};
use crate::error::Result;
use crate::model::{State, ZeroModes};
use crate::spectral::{fft3_in_place, Direction, SpectralTables};

/// Strang splitting `L(h/2) ∘ N(h) ∘ L(h/2)` in physical variables.
///
/// `L` is the exact linear flow with a quadrature-forced wave update, `N`
/// the pointwise phase rotation `u ← e^{−ih(n + n̄)}u`. All fields stay in
/// Fourier space between steps; `|u|²` is cached across substeps. With
/// dealiasing on, only the increment of the rotation is filtered.
pub(crate) struct StrangStepper {
    tables: SpectralTables,
    opts: StepOptions,
    u_hat: Vec<Complex64>,
    n_hat: Vec<Complex64>,
    nt_hat: Vec<Complex64>,
    rho_hat: Vec<Complex64>,
    u_phys: Vec<Complex64>,
    s0: Vec<Complex64>,
    s1: Vec<Complex64>,
    scratch: Vec<Complex64>,
    means: ZeroModes,
    t0: f64,
    t: f64,
    steps: usize,
}

impl StrangStepper {
    pub fn new(state: &State, opts: StepOptions) -> Result<Self> {
        state.check_invariants()?;
        let grid = state.grid();
        let tables = SpectralTables::new(grid);
        let u_hat = spectral_of(&state.u);
        let mut n_hat = spectral_of(&state.n);
        let mut nt_hat = spectral_of(&state.n_t);
        n_hat[0] = Complex64::new(0.0, 0.0);
        nt_hat[0] = Complex64::new(0.0, 0.0);
        let len = grid.len();
        let mut stepper = StrangStepper {
            tables,
            opts,
            u_hat,
            n_hat,
            nt_hat,
            rho_hat: vec![Complex64::new(0.0, 0.0); len],
            u_phys: state.u.values().to_vec(),
            s0: vec![Complex64::new(0.0, 0.0); len],
            s1: vec![Complex64::new(0.0, 0.0); len],
            scratch: vec![Complex64::new(0.0, 0.0); len],
            means: state.means,
            t0: state.t,
            t: state.t,
            steps: 0,
        };
        stepper.refresh_density();
        Ok(stepper)
    }

    fn n(&self) -> usize {
        self.tables.grid.n()
    }

    /// Recomputes `F(|u|²)` from `u_phys`.
    fn refresh_density(&mut self) {
        for (r, u) in self.rho_hat.iter_mut().zip(&self.u_phys) {
            *r = Complex64::new(u.norm_sqr(), 0.0);
        }
        let n = self.n();
        fft3_in_place(&mut self.rho_hat, n, Direction::Forward);
        self.tables.filter(&mut self.rho_hat, self.opts.dealias);
    }

    fn source_into(tables: &SpectralTables, rho_hat: &[Complex64], out: &mut [Complex64]) {
        for ((o, r), k2) in out.iter_mut().zip(rho_hat).zip(&tables.ksq) {
            *o = -r * k2;
        }
    }

    fn free_schrodinger(&mut self, tau: f64) {
        for (u, k2) in self.u_hat.iter_mut().zip(&self.tables.ksq) {
            *u *= Complex64::from_polar(1.0, -tau * k2);
        }
    }

    fn sync_physical(&mut self) {
        self.u_phys.copy_from_slice(&self.u_hat);
        let n = self.n();
        fft3_in_place(&mut self.u_phys, n, Direction::Inverse);
    }

    fn linear(&mut self, tau: f64) {
        match self.opts.quadrature {
            Quadrature::Trapezoid => {
                Self::source_into(&self.tables, &self.rho_hat, &mut self.s0);
                self.free_schrodinger(tau);
                self.sync_physical();
                self.refresh_density();
                Self::source_into(&self.tables, &self.rho_hat, &mut self.s1);
                wave_update(
                    &self.tables,
                    &mut self.n_hat,
                    &mut self.nt_hat,
                    &[&self.s0, &self.s1],
                    tau,
                    Quadrature::Trapezoid,
                );
            }
            Quadrature::Midpoint => {
                self.free_schrodinger(0.5 * tau);
                self.sync_physical();
                self.refresh_density();
                Self::source_into(&self.tables, &self.rho_hat, &mut self.s0);
                self.free_schrodinger(0.5 * tau);
                self.sync_physical();
                wave_update(
                    &self.tables,
                    &mut self.n_hat,
                    &mut self.nt_hat,
                    &[&self.s0],
                    tau,
                    Quadrature::Midpoint,
                );
            }
        }
        self.means = self.means.advance(tau);
        self.t += tau;
    }

    fn nonlinear(&mut self, h: f64) {
        self.scratch.copy_from_slice(&self.n_hat);
        let n = self.n();
        fft3_in_place(&mut self.scratch, n, Direction::Inverse);
        let mean = self.means.n_mean;
        if self.opts.dealias {
            for (u, n) in self.u_phys.iter().zip(self.scratch.iter_mut()) {
                *n = u * (Complex64::from_polar(1.0, -h * (n.re + mean)) - 1.0);
            }
            fft3_in_place(&mut self.scratch, n, Direction::Forward);
            self.tables.filter(&mut self.scratch, true);
            for (u, d) in self.u_hat.iter_mut().zip(&self.scratch) {
                *u += d;
            }
            self.sync_physical();
            self.refresh_density();
        } else {
            for (u, n) in self.u_phys.iter_mut().zip(&self.scratch) {
                *u *= Complex64::from_polar(1.0, -h * (n.re + mean));
            }
            self.u_hat.copy_from_slice(&self.u_phys);
            fft3_in_place(&mut self.u_hat, n, Direction::Forward);
        }
    }
}

impl Stepper for StrangStepper {
    fn step(&mut self, h: f64) -> Result<()> {
        self.linear(0.5 * h);
        self.nonlinear(h);
        self.linear(0.5 * h);
        self.steps += 1;
        self.t = self.t0 + self.steps as f64 * h;
        ensure_finite(&self.u_hat, self.steps, self.t)?;
        ensure_finite(&self.n_hat, self.steps, self.t)
    }

    fn state(&self) -> (State, f64) {
        let grid = self.tables.grid;
        let mut u = self.u_hat.clone();
        fft3_in_place(&mut u, grid.n(), Direction::Inverse);
        let (n, r1) = realify(grid, &self.n_hat);
        let (n_t, r2) = realify(grid, &self.nt_hat);
        let u = crate::spectral::Field::from_values(grid, crate::spectral::Space::Physical, u)
            .expect("stepper buffers match the grid");
        (
            State {
                u,
                n,
                n_t,
                means: self.means,
                t: self.t,
            },
            r1.max(r2),
        )
    }
}
