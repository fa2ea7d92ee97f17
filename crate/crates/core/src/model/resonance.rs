//! Space-time resonance scans on the coplanar slice `ξ = (a, b, 0)`,
//! `η = (c, d, 0)` of frequency space.
//!
//! A scan point belongs to the time-resonant set `T` when
//! `|phase| ≤ c·|∇phase|·h` (gradient over the four slice coordinates) and to
//! the space-resonant set `S` when its Gauss–Newton projection onto
//! `{∇_η phase = 0}` lies within `c·h`. Near `η = 0` the two surfaces meet
//! tangentially (`φ± = |η|²` on `S`), so a point of `T ∩ S` enters the
//! resonant set `R` only if the time test also holds at its projection
//! onto `S`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::phase::{Phase, PhaseSign, Vec3};
use crate::error::{Error, Result};

/// Threshold constant `c` of both set tests.
pub const THRESHOLD: f64 = 0.8;
const MAX_NEWTON: usize = 40;
const BAIL_FACTOR: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetTag {
    T,
    S,
    R,
}

impl SetTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SetTag::T => "T",
            SetTag::S => "S",
            SetTag::R => "R",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub xi: Vec3,
    pub eta: Vec3,
    pub in_t: bool,
    pub in_s: bool,
    /// In `T ∩ S`, with the time test also passed at the projection onto `S`.
    pub in_r: bool,
}

/// Result of [`resonance_scan`]; stores only points in `T ∪ S`.
#[derive(Clone, Debug)]
pub struct ResonanceScan {
    pub phase: Phase,
    pub sign: PhaseSign,
    pub range: f64,
    pub resolution: usize,
    pub points: Vec<ScanPoint>,
}

type Z = [f64; 4];

fn lift(z: &Z) -> (Vec3, Vec3) {
    ([z[0], z[1], 0.0], [z[2], z[3], 0.0])
}

/// `F = ∇_η phase` restricted to the slice, with its 2×4 Jacobian.
fn eta_gradient_system(phase: Phase, s: PhaseSign, z: &Z) -> Option<([f64; 2], [[f64; 4]; 2])> {
    match phase {
        Phase::Psi => Some(([2.0 * z[0], 2.0 * z[1]], [[2.0, 0.0, 0.0, 0.0], [0.0, 2.0, 0.0, 0.0]])),
        Phase::Phi => {
            let r = (z[2] * z[2] + z[3] * z[3]).sqrt();
            if r == 0.0 {
                return None;
            }
            let e = [z[2] / r, z[3] / r];
            let sv = s.value();
            let f = [
                2.0 * z[0] - 2.0 * z[2] + sv * e[0],
                2.0 * z[1] - 2.0 * z[3] + sv * e[1],
            ];
            let mut j = [[0.0; 4]; 2];
            for a in 0..2 {
                j[a][a] = 2.0;
                for b in 0..2 {
                    let proj = if a == b { 1.0 } else { 0.0 } - e[a] * e[b];
                    j[a][2 + b] = if a == b { -2.0 } else { 0.0 } + sv * proj / r;
                }
            }
            Some((f, j))
        }
    }
}

/// Distance from `z0` to the zero set of `F`, or `None` when it exceeds `limit`.
fn projected_distance(phase: Phase, s: PhaseSign, z0: &Z, limit: f64) -> Option<(f64, Z)> {
    let mut z = *z0;
    for _ in 0..MAX_NEWTON {
        let (f, j) = eta_gradient_system(phase, s, &z)?;
        let fn2 = f[0] * f[0] + f[1] * f[1];
        let scale = j.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        if fn2.sqrt() <= 1e-14 * scale.max(1.0) {
            break;
        }
        let a = dot4(&j[0], &j[0]);
        let b = dot4(&j[0], &j[1]);
        let c = dot4(&j[1], &j[1]);
        let det = a * c - b * b;
        if det.abs() <= f64::EPSILON * (a * c).abs() {
            return None;
        }
        let y0 = (c * f[0] - b * f[1]) / det;
        let y1 = (a * f[1] - b * f[0]) / det;
        for k in 0..4 {
            z[k] -= j[0][k] * y0 + j[1][k] * y1;
        }
        let moved = dist4(&z, z0);
        if moved > limit {
            return None;
        }
    }
    let (f, _) = eta_gradient_system(phase, s, &z)?;
    if (f[0] * f[0] + f[1] * f[1]).sqrt() > 1e-8 {
        return None;
    }
    Some((dist4(&z, z0), z))
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist4(a: &Z, b: &Z) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Scans `[−range, range]⁴` with `resolution` cell-centred points per axis.
pub fn resonance_scan(phase: Phase, sign: PhaseSign, range: f64, resolution: usize) -> Result<ResonanceScan> {
    resonance_scan_with_threshold(phase, sign, range, resolution, THRESHOLD)
}

/// [`resonance_scan`] with an explicit threshold constant.
pub fn resonance_scan_with_threshold(
    phase: Phase,
    sign: PhaseSign,
    range: f64,
    resolution: usize,
    threshold: f64,
) -> Result<ResonanceScan> {
    if !(range.is_finite() && range > 0.0) {
        return Err(Error::Range(format!("scan range must be positive, got {range}")));
    }
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::Range(format!("threshold constant must be positive, got {threshold}")));
    }
    if resolution < 8 {
        return Err(Error::Range(format!(
            "scan needs at least 8 points per axis, got {resolution}"
        )));
    }
    let h = 2.0 * range / resolution as f64;
    let axis: Vec<f64> = (0..resolution).map(|i| -range + (i as f64 + 0.5) * h).collect();
    let mut points = Vec::new();
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                for &d in &axis {
                    let z = [a, b, c, d];
                    let (xi, eta) = lift(&z);
                    let in_t = time_resonant(phase, sign, &z, threshold * h);
                    let foot = projected_distance(phase, sign, &z, BAIL_FACTOR * threshold * h)
                        .filter(|(dist, _)| *dist <= threshold * h)
                        .map(|(_, foot)| foot);
                    let in_s = foot.is_some();
                    let in_r = in_t
                        && foot.is_some_and(|f| time_resonant(phase, sign, &f, threshold * h));
                    if in_t || in_s {
                        points.push(ScanPoint {
                            xi,
                            eta,
                            in_t,
                            in_s,
                            in_r,
                        });
                    }
                }
            }
        }
    }
    Ok(ResonanceScan {
        phase,
        sign,
        range,
        resolution,
        points,
    })
}

/// Linear time-resonance test `|phase| ≤ c·|∇phase|·h` over the slice coordinates.
fn time_resonant(phase: Phase, s: PhaseSign, z: &Z, threshold_h: f64) -> bool {
    let (xi, eta) = lift(z);
    let value = phase.eval(xi, eta, s);
    let (Ok(gx), Ok(ge)) = (phase.grad_xi(xi, eta, s), phase.grad_eta(xi, eta, s)) else {
        return value == 0.0;
    };
    let g = (gx[0] * gx[0] + gx[1] * gx[1] + ge[0] * ge[0] + ge[1] * ge[1]).sqrt();
    value.abs() <= threshold_h * g
}

impl ResonanceScan {
    /// Grid spacing of the scan.
    pub fn cell(&self) -> f64 {
        2.0 * self.range / self.resolution as f64
    }

    /// Diagonal of one four-dimensional scan cell.
    pub fn cell_diagonal(&self) -> f64 {
        2.0 * self.cell()
    }

    pub fn set(&self, tag: SetTag) -> impl Iterator<Item = &ScanPoint> + '_ {
        self.points.iter().filter(move |p| match tag {
            SetTag::T => p.in_t,
            SetTag::S => p.in_s,
            SetTag::R => p.in_r,
        })
    }

    /// Distance from a slice point to the expected resonant set.
    pub fn distance_to_expected(&self, xi: Vec3, eta: Vec3) -> f64 {
        let nx = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let ne = (eta[0] * eta[0] + eta[1] * eta[1] + eta[2] * eta[2]).sqrt();
        match self.phase {
            Phase::Phi => (ne * ne + (nx - 0.5) * (nx - 0.5)).sqrt(),
            Phase::Psi => nx,
        }
    }

    fn expected_samples(&self) -> Vec<(Vec3, Vec3)> {
        match self.phase {
            Phase::Phi => {
                let m = 8 * self.resolution;
                (0..m)
                    .map(|i| {
                        let a = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                        ([0.5 * a.cos(), 0.5 * a.sin(), 0.0], [0.0; 3])
                    })
                    .collect()
            }
            Phase::Psi => {
                let h = self.cell();
                let axis: Vec<f64> = (0..=self.resolution)
                    .map(|i| -self.range + i as f64 * h)
                    .collect();
                let mut out = Vec::with_capacity(axis.len() * axis.len());
                for &c in &axis {
                    for &d in &axis {
                        out.push(([0.0; 3], [c, d, 0.0]));
                    }
                }
                out
            }
        }
    }

    /// Two-sided Hausdorff distance between `R` and the expected resonant set.
    pub fn hausdorff_to_expected(&self) -> f64 {
        let r: Vec<&ScanPoint> = self.set(SetTag::R).collect();
        if r.is_empty() {
            return f64::INFINITY;
        }
        let forward = r
            .iter()
            .map(|p| self.distance_to_expected(p.xi, p.eta))
            .fold(0.0f64, f64::max);
        let backward = self
            .expected_samples()
            .iter()
            .map(|(xi, eta)| {
                r.iter()
                    .map(|p| {
                        let z = [p.xi[0], p.xi[1], p.eta[0], p.eta[1]];
                        dist4(&z, &[xi[0], xi[1], eta[0], eta[1]])
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max);
        forward.max(backward)
    }

    /// CSV with header `xi1,xi2,xi3,eta1,eta2,eta3,set_tag`; a point in
    /// several sets appears once per set.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi1,xi2,xi3,eta1,eta2,eta3,set_tag\n");
        for tag in [SetTag::T, SetTag::S, SetTag::R] {
            for p in self.set(tag) {
                let _ = writeln!(
                    out,
                    "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}",
                    p.xi[0],
                    p.xi[1],
                    p.xi[2],
                    p.eta[0],
                    p.eta[1],
                    p.eta[2],
                    tag.as_str()
                );
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(self.to_csv().as_bytes())
            .map_err(|e| Error::io(path, e))
    }
}
