//! The bilinear phases
//!
//! ```text
//! φ±(ξ, η) = 2ξ·η − |η|² ± |η|        ψ±(ξ, η) = ∓|ξ| − |ξ|² + 2ξ·η
//! ```
//!
//! with their gradients and the two null-structure identities. Gradients are
//! the exact derivatives of these formulas; a finite-difference test pins them.

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            PhaseSign::Plus => PhaseSign::Minus,
            PhaseSign::Minus => PhaseSign::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Phi,
    Psi,
}

impl Phase {
    pub fn eval(self, xi: Vec3, eta: Vec3, s: PhaseSign) -> f64 {
        match self {
            Phase::Phi => phase_phi(xi, eta, s),
            Phase::Psi => phase_psi(xi, eta, s),
        }
    }

    pub fn grad_xi(self, xi: Vec3, eta: Vec3, s: PhaseSign) -> Result<Vec3> {
        match self {
            Phase::Phi => Ok(grad_xi_phi(xi, eta, s)),
            Phase::Psi => grad_xi_psi(xi, eta, s),
        }
    }

    pub fn grad_eta(self, xi: Vec3, eta: Vec3, s: PhaseSign) -> Result<Vec3> {
        match self {
            Phase::Phi => grad_eta_phi(xi, eta, s),
            Phase::Psi => Ok(grad_eta_psi(xi, eta, s)),
        }
    }
}

#[inline]
fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn unit(a: Vec3, what: &'static str) -> Result<(Vec3, f64)> {
    let r = norm(a);
    if r == 0.0 || !r.is_finite() {
        return Err(Error::SingularDirection(what));
    }
    Ok(([a[0] / r, a[1] / r, a[2] / r], r))
}

pub fn phase_phi(xi: Vec3, eta: Vec3, s: PhaseSign) -> f64 {
    let r = norm(eta);
    2.0 * dot(xi, eta) - r * r + s.value() * r
}

pub fn phase_psi(xi: Vec3, eta: Vec3, s: PhaseSign) -> f64 {
    let r = norm(xi);
    -s.value() * r - r * r + 2.0 * dot(xi, eta)
}

/// `∇_η φ± = 2ξ − 2η ± η/|η|`.
pub fn grad_eta_phi(xi: Vec3, eta: Vec3, s: PhaseSign) -> Result<Vec3> {
    let (e, _) = unit(eta, "eta = 0 in grad_eta_phi")?;
    let sv = s.value();
    Ok(std::array::from_fn(|i| 2.0 * xi[i] - 2.0 * eta[i] + sv * e[i]))
}

/// `∇_ξ φ± = 2η`.
pub fn grad_xi_phi(_xi: Vec3, eta: Vec3, _s: PhaseSign) -> Vec3 {
    [2.0 * eta[0], 2.0 * eta[1], 2.0 * eta[2]]
}

/// `∇_η ψ± = 2ξ`.
pub fn grad_eta_psi(xi: Vec3, _eta: Vec3, _s: PhaseSign) -> Vec3 {
    [2.0 * xi[0], 2.0 * xi[1], 2.0 * xi[2]]
}

/// `∇_ξ ψ± = ∓ξ/|ξ| − 2ξ + 2η`.
pub fn grad_xi_psi(xi: Vec3, eta: Vec3, s: PhaseSign) -> Result<Vec3> {
    let (e, _) = unit(xi, "xi = 0 in grad_xi_psi")?;
    let sv = s.value();
    Ok(std::array::from_fn(|i| -sv * e[i] - 2.0 * xi[i] + 2.0 * eta[i]))
}

/// `|ξ| − ½ (ξ/|ξ|)·∇_η ψ±`, identically zero.
pub fn null_identity_psi_residual(xi: Vec3, eta: Vec3, s: PhaseSign) -> Result<f64> {
    let (e, r) = unit(xi, "xi = 0 in the psi null identity")?;
    Ok(r - 0.5 * dot(e, grad_eta_psi(xi, eta, s)))
}

/// `∇_ξ φ± − [2(φ±/|η|) η̂ − 2 η̂ (η̂·∇_η φ±)]`, identically the zero vector.
///
/// The bracket rests on `η̂·∇_η φ± − φ±/|η| = −|η|`.
pub fn null_identity_phi_residual(xi: Vec3, eta: Vec3, s: PhaseSign) -> Result<Vec3> {
    let (e, r) = unit(eta, "eta = 0 in the phi null identity")?;
    let g = grad_eta_phi(xi, eta, s)?;
    let along = dot(e, g);
    let ratio = phase_phi(xi, eta, s) / r;
    let gx = grad_xi_phi(xi, eta, s);
    Ok(std::array::from_fn(|i| gx[i] - (2.0 * ratio * e[i] - 2.0 * along * e[i])))
}
