use num_complex::Complex64;

use super::{ensure_finite, realify, spectral_of, StepOptions, Stepper};
use crate::error::Result;
use crate::model::{ProfilePair, State, ZeroModes};
use crate::spectral::{fft3_in_place, Direction, Field, Space, SpectralTables};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Lawson (interaction-picture) Heun method on the profile equations
///
/// ```text
/// ∂ₜ f̂  = −i e^{it|ξ|²} F(n u)
/// ∂ₜ ĝ± = −i e^{±it|ξ|} |ξ| F(|u|²)
/// ```
///
/// with the zero modes of `n` advanced exactly.
pub(crate) struct LawsonStepper {
    tables: SpectralTables,
    opts: StepOptions,
    f: Vec<Complex64>,
    gp: Vec<Complex64>,
    gm: Vec<Complex64>,
    means0: ZeroModes,
    t0: f64,
    t: f64,
    steps: usize,
    u: Vec<Complex64>,
    n: Vec<Complex64>,
    rho: Vec<Complex64>,
}

struct Rhs {
    f: Vec<Complex64>,
    gp: Vec<Complex64>,
    gm: Vec<Complex64>,
}

impl LawsonStepper {
    pub fn new(state: &State, opts: StepOptions) -> Result<Self> {
        let p = state.to_profiles()?;
        Ok(Self::from_profiles(&p, state.means, opts))
    }

    pub fn from_profiles(p: &ProfilePair, means: ZeroModes, opts: StepOptions) -> Self {
        let grid = p.f.grid();
        let len = grid.len();
        let mut gp = spectral_of(&p.g_plus);
        let mut gm = spectral_of(&p.g_minus);
        gp[0] = Complex64::new(0.0, 0.0);
        gm[0] = Complex64::new(0.0, 0.0);
        LawsonStepper {
            tables: SpectralTables::new(grid),
            opts,
            f: spectral_of(&p.f),
            gp,
            gm,
            means0: means,
            t0: p.t,
            t: p.t,
            steps: 0,
            u: vec![Complex64::new(0.0, 0.0); len],
            n: vec![Complex64::new(0.0, 0.0); len],
            rho: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    fn means_at(&self, t: f64) -> ZeroModes {
        self.means0.advance(t - self.t0)
    }

    fn rhs(&mut self, t: f64, f: &[Complex64], gp: &[Complex64], gm: &[Complex64]) -> Rhs {
        let nn = self.tables.grid.n();
        for idx in 0..f.len() {
            let k2 = self.tables.ksq[idx];
            let k = self.tables.kabs[idx];
            self.u[idx] = f[idx] * Complex64::from_polar(1.0, -t * k2);
            let e = Complex64::from_polar(1.0, -t * k);
            self.n[idx] = 0.5 * (gp[idx] * e - gm[idx] * e.conj());
        }
        self.n[0] = Complex64::new(0.0, 0.0);
        fft3_in_place(&mut self.u, nn, Direction::Inverse);
        fft3_in_place(&mut self.n, nn, Direction::Inverse);
        let mean = self.means_at(t).n_mean;
        for idx in 0..f.len() {
            let u = self.u[idx];
            self.rho[idx] = Complex64::new(u.norm_sqr(), 0.0);
            self.u[idx] = u * (self.n[idx].re + mean);
        }
        fft3_in_place(&mut self.u, nn, Direction::Forward);
        fft3_in_place(&mut self.rho, nn, Direction::Forward);
        if self.opts.dealias {
            self.tables.filter(&mut self.u, true);
        }
        self.tables.filter(&mut self.rho, self.opts.dealias);
        let len = f.len();
        let mut out = Rhs {
            f: Vec::with_capacity(len),
            gp: Vec::with_capacity(len),
            gm: Vec::with_capacity(len),
        };
        for idx in 0..len {
            let k2 = self.tables.ksq[idx];
            let k = self.tables.kabs[idx];
            out.f.push(-I * Complex64::from_polar(1.0, t * k2) * self.u[idx]);
            let e = Complex64::from_polar(1.0, t * k);
            let src = -I * k * self.rho[idx];
            out.gp.push(src * e);
            out.gm.push(src * e.conj());
        }
        out
    }

    pub fn profiles(&self) -> ProfilePair {
        let grid = self.tables.grid;
        let phys = |v: &[Complex64]| {
            let mut w = v.to_vec();
            fft3_in_place(&mut w, grid.n(), Direction::Inverse);
            Field::from_values(grid, Space::Physical, w).expect("stepper buffers match the grid")
        };
        ProfilePair {
            f: phys(&self.f),
            g_plus: phys(&self.gp),
            g_minus: phys(&self.gm),
            t: self.t,
        }
    }
}

fn axpy(y: &[Complex64], a: f64, x: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(x).map(|(y, x)| y + x * a).collect()
}

impl Stepper for LawsonStepper {
    fn step(&mut self, h: f64) -> Result<()> {
        let t = self.t;
        let (f, gp, gm) = (self.f.clone(), self.gp.clone(), self.gm.clone());
        let k1 = self.rhs(t, &f, &gp, &gm);
        let f1 = axpy(&f, h, &k1.f);
        let gp1 = axpy(&gp, h, &k1.gp);
        let gm1 = axpy(&gm, h, &k1.gm);
        let k2 = self.rhs(t + h, &f1, &gp1, &gm1);
        for idx in 0..f.len() {
            self.f[idx] += 0.5 * h * (k1.f[idx] + k2.f[idx]);
            self.gp[idx] += 0.5 * h * (k1.gp[idx] + k2.gp[idx]);
            self.gm[idx] += 0.5 * h * (k1.gm[idx] + k2.gm[idx]);
        }
        self.steps += 1;
        self.t = self.t0 + self.steps as f64 * h;
        ensure_finite(&self.f, self.steps, self.t)?;
        ensure_finite(&self.gp, self.steps, self.t)
    }

    fn state(&self) -> (State, f64) {
        let grid = self.tables.grid;
        let t = self.t;
        let len = self.f.len();
        let mut u = Vec::with_capacity(len);
        let mut n = Vec::with_capacity(len);
        let mut nt = Vec::with_capacity(len);
        for idx in 0..len {
            let k2 = self.tables.ksq[idx];
            let k = self.tables.kabs[idx];
            u.push(self.f[idx] * Complex64::from_polar(1.0, -t * k2));
            let e = Complex64::from_polar(1.0, -t * k);
            let wp = self.gp[idx] * e;
            let wm = self.gm[idx] * e.conj();
            n.push(0.5 * (wp - wm));
            nt.push(-0.5 * I * k * (wp + wm));
        }
        n[0] = Complex64::new(0.0, 0.0);
        nt[0] = Complex64::new(0.0, 0.0);
        fft3_in_place(&mut u, grid.n(), Direction::Inverse);
        let (n, r1) = realify(grid, &n);
        let (n_t, r2) = realify(grid, &nt);
        let u = Field::from_values(grid, Space::Physical, u).expect("stepper buffers match the grid");
        (
            State {
                u,
                n,
                n_t,
                means: self.means_at(t),
                t,
            },
            r1.max(r2),
        )
    }

}
