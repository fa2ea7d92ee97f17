use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::config::RunConfig;
use super::snapshot::read_snapshot_header;
use super::validate::DataNormReport;
use crate::diagnostics::{parse_rows_csv, TrustWindow};
use crate::error::{Error, Result};
use crate::integrators::{Snapshot, Trajectory};

pub const MANIFEST_FILE: &str = "manifest.txt";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CODE_VERSION: &str = concat!("zakharov-core ", env!("CARGO_PKG_VERSION"));

/// Flat `key=value` record written before a run starts stepping.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub code_version: String,
    pub config: RunConfig,
    pub data_norms: Vec<(String, f64)>,
    pub trust: TrustWindow,
    pub initial_snapshot: String,
    /// Hex SHA-256 of the initial snapshot file.
    pub initial_hash: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

impl RunManifest {
    pub fn new(config: &RunConfig, norms: &DataNormReport, trust: TrustWindow) -> Self {
        RunManifest {
            code_version: CODE_VERSION.to_string(),
            config: config.clone(),
            data_norms: norms.norms.iter().map(|n| (n.name.to_string(), n.value)).collect(),
            trust,
            initial_snapshot: crate::integrators::snapshot_file_name(0),
            initial_hash: String::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("code_version={}\n", self.code_version));
        for (k, v) in self.config.to_key_values() {
            out.push_str(&format!("config.{k}={v}\n"));
        }
        for (k, v) in &self.data_norms {
            out.push_str(&format!("data_norm.{k}={v:e}\n"));
        }
        out.push_str(&format!("trust.r0={:e}\n", self.trust.r0));
        out.push_str(&format!("trust.k_energy={:e}\n", self.trust.k_energy));
        out.push_str(&format!("trust.v_max={:e}\n", self.trust.v_max));
        out.push_str(&format!("trust.t_trust={:e}\n", self.trust.t_trust));
        out.push_str(&format!("initial_snapshot={}\n", self.initial_snapshot));
        out.push_str(&format!("initial_sha256={}\n", self.initial_hash));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut config = BTreeMap::new();
        let mut fields = BTreeMap::new();
        let mut data_norms = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("manifest line `{line}` lacks `=`")))?;
            if let Some(ck) = k.strip_prefix("config.") {
                config.insert(ck.to_string(), v.to_string());
            } else if let Some(nk) = k.strip_prefix("data_norm.") {
                data_norms.push((nk.to_string(), parse_f64(k, v)?));
            } else {
                fields.insert(k.to_string(), v.to_string());
            }
        }
        let get = |k: &str| {
            fields
                .get(k)
                .cloned()
                .ok_or_else(|| Error::Config(format!("manifest lacks `{k}`")))
        };
        let num = |k: &str| get(k).and_then(|v| parse_f64(k, &v));
        Ok(RunManifest {
            code_version: get("code_version")?,
            config: RunConfig::from_map(&config)?,
            data_norms,
            trust: TrustWindow {
                r0: num("trust.r0")?,
                k_energy: num("trust.k_energy")?,
                v_max: num("trust.v_max")?,
                t_trust: num("trust.t_trust")?,
            },
            initial_snapshot: get("initial_snapshot")?,
            initial_hash: get("initial_sha256")?,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunManifest::parse(&text)
    }

    /// True when the initial snapshot under `dir` still has the recorded hash.
    pub fn verify(&self, dir: &Path) -> Result<bool> {
        Ok(file_sha256(&dir.join(&self.initial_snapshot))? == self.initial_hash)
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse()
        .map_err(|e| Error::Config(format!("manifest key `{key}`: cannot parse `{v}`: {e}")))
}

/// Reopens a run directory written by a disk-backed run.
pub fn load_trajectory(dir: &Path) -> Result<Trajectory> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest = RunManifest::read(&manifest_path)?;
    let cfg = &manifest.config;
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("snap_") && n.ends_with(".zaks"))
        })
        .collect();
    paths.sort();
    let mut times = Vec::with_capacity(paths.len());
    for p in &paths {
        times.push(read_snapshot_header(p)?.t);
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::contract(format!("{}: snapshot times are not increasing", dir.display())));
    }
    let mut traj = Trajectory::new(cfg.grid, cfg.step, cfg.params, manifest.trust);
    traj.set_snapshots(times, paths.into_iter().map(Snapshot::Disk).collect());
    let csv = dir.join(DIAGNOSTICS_FILE);
    if csv.exists() {
        let text = std::fs::read_to_string(&csv).map_err(|e| Error::io(&csv, e))?;
        traj.set_rows(parse_rows_csv(&text)?);
    }
    traj.manifest_path = Some(manifest_path);
    Ok(traj)
}
