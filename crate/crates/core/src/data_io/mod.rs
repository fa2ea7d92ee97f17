//! Initial data, data validation, snapshot files, manifests and run configs.

mod config;
mod family;
mod manifest;
mod snapshot;
mod validate;

pub use config::{parse_key_values, RunConfig, TimeSamples};
pub use family::{generate_initial_data, Component, DataFamily, ProfileKind};
pub use manifest::{
    file_sha256, load_trajectory, sha256_hex, RunManifest, CODE_VERSION, DIAGNOSTICS_FILE, MANIFEST_FILE,
};
pub use snapshot::{
    decode_header, decode_snapshot, encode_snapshot, read_snapshot, read_snapshot_header, write_snapshot,
    SnapshotHeader, HEADER_LEN, MAGIC, VERSION,
};
pub use validate::{
    scale_to_eps0, validate_data_norms, validate_data_norms_with, DataNorm, DataNormReport, DEFAULT_SOBOLEV,
    MAX_SOBOLEV,
};

use crate::error::Result;
use crate::model::State;

/// Initial state described by `config`, rescaled when it asks for it.
pub fn initial_state(config: &RunConfig) -> Result<State> {
    let raw = generate_initial_data(&config.family, config.grid)?;
    match config.scale_to_eps0 {
        Some(fraction) => scale_to_eps0(&raw, &config.params, fraction, config.sobolev),
        None => Ok(raw),
    }
}
