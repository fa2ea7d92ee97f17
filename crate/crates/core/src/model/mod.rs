//! State representations, bilinear phases, null-structure identities,
//! resonance scans and parameter bookkeeping.

pub mod params;
pub mod phase;
pub mod resonance;
pub mod state;

pub use params::{validate_parameters, ParameterReport, Parameters, RelationCheck};
pub use phase::{
    grad_eta_phi, grad_eta_psi, grad_xi_phi, grad_xi_psi, null_identity_phi_residual,
    null_identity_psi_residual, phase_phi, phase_psi, Phase, PhaseSign, Vec3,
};
pub use resonance::{resonance_scan, resonance_scan_with_threshold, ResonanceScan, ScanPoint, SetTag};
pub use state::{
    from_halfwave, from_profiles, to_halfwave, to_profiles, HalfWave, ProfilePair, State,
    ZeroModes, REALITY_TOL,
};
