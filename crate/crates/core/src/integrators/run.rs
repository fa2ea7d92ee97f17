use std::path::{Path, PathBuf};

use super::{make_stepper, StepConfig};
use crate::data_io::{self, RunManifest};
use crate::diagnostics::{compute_row, trust_window, DiagnosticsRow, TrustWindow};
use crate::error::{Error, Result};
use crate::model::{Parameters, ProfilePair, State};
use crate::spectral::{Field, Grid};

/// Where snapshots go during a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Storage {
    /// Keep every snapshot in memory.
    #[default]
    Memory,
    /// Write snapshots under a directory and keep only their paths.
    Disk(PathBuf),
    /// Keep no snapshots; only diagnostics rows survive.
    Discard,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsConfig {
    /// Sobolev index `s` of the `H^s`-type columns.
    pub sobolev: f64,
    /// Compute a diagnostics row per snapshot.
    pub rows: bool,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            sobolev: 4.0,
            rows: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub storage: Storage,
    /// Print one progress line per snapshot to standard error.
    pub progress: bool,
    pub diagnostics: DiagnosticsConfig,
    /// Refuse initial data that fail the smallness hypotheses.
    pub enforce_data_norms: bool,
    /// Manifest written next to the snapshots before stepping (disk storage only).
    pub manifest: Option<RunManifest>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            storage: Storage::Memory,
            progress: false,
            diagnostics: DiagnosticsConfig::default(),
            enforce_data_norms: true,
            manifest: None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Snapshot {
    Memory(Box<State>),
    Disk(PathBuf),
}

/// Ordered snapshots of one run plus its diagnostics rows.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub grid: Grid,
    pub config: StepConfig,
    pub params: Parameters,
    pub trust: TrustWindow,
    /// Largest relative imaginary residue projected out of `n`, `∂ₜn`.
    pub max_reality_residue: f64,
    /// Manifest file of the run, when it was written to disk.
    pub manifest_path: Option<PathBuf>,
    times: Vec<f64>,
    snapshots: Vec<Snapshot>,
    rows: Vec<DiagnosticsRow>,
}

/// Name of the snapshot file with the given index.
pub fn snapshot_file_name(index: usize) -> String {
    format!("snap_{index:06}.zaks")
}

impl Trajectory {
    pub fn new(grid: Grid, config: StepConfig, params: Parameters, trust: TrustWindow) -> Self {
        Trajectory {
            grid,
            config,
            params,
            trust,
            max_reality_residue: 0.0,
            manifest_path: None,
            times: Vec::new(),
            snapshots: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Appends a snapshot; times must increase strictly.
    pub fn push(&mut self, t: f64, snapshot: Option<Snapshot>, row: Option<DiagnosticsRow>) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::contract(format!(
                    "snapshot times must increase: {t} after {last}"
                )));
            }
        }
        self.times.push(t);
        if let Some(s) = snapshot {
            self.snapshots.push(s);
        }
        if let Some(r) = row {
            self.rows.push(r);
        }
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn rows(&self) -> &[DiagnosticsRow] {
        &self.rows
    }

    pub fn has_snapshots(&self) -> bool {
        !self.snapshots.is_empty() && self.snapshots.len() == self.times.len()
    }

    /// Index of the snapshot stored at `t` (relative tolerance `1e-9`).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= tol)
            .filter(|&i| i < self.snapshots.len())
            .ok_or(Error::Lookup(t))
    }

    pub fn state(&self, index: usize) -> Result<State> {
        match self.snapshots.get(index) {
            Some(Snapshot::Memory(s)) => Ok((**s).clone()),
            Some(Snapshot::Disk(path)) => data_io::read_snapshot(path),
            None => Err(Error::Lookup(self.times.get(index).copied().unwrap_or(f64::NAN))),
        }
    }

    pub fn state_at(&self, t: f64) -> Result<State> {
        self.state(self.index_of(t)?)
    }

    pub fn profiles(&self, index: usize) -> Result<ProfilePair> {
        self.state(index)?.to_profiles()
    }

    pub fn profiles_at(&self, t: f64) -> Result<ProfilePair> {
        self.profiles(self.index_of(t)?)
    }

    /// Diagnostics table in CSV form.
    pub fn diagnostics_csv(&self) -> String {
        crate::diagnostics::rows_to_csv(&self.rows)
    }

    pub fn write_diagnostics_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.diagnostics_csv()).map_err(|e| Error::io(path, e))
    }

    pub(crate) fn set_rows(&mut self, rows: Vec<DiagnosticsRow>) {
        self.rows = rows;
    }

    pub(crate) fn set_snapshots(&mut self, times: Vec<f64>, snapshots: Vec<Snapshot>) {
        self.times = times;
        self.snapshots = snapshots;
    }
}

struct Recorder<'a> {
    opts: &'a RunOptions,
    g0: Field,
    prev_f: Option<Field>,
    index: usize,
}

impl Recorder<'_> {
    fn record(&mut self, traj: &mut Trajectory, state: State, residue: f64) -> Result<()> {
        traj.max_reality_residue = traj.max_reality_residue.max(residue);
        let t = state.t;
        let row = if self.opts.diagnostics.rows || self.opts.progress {
            let profiles = state.to_profiles()?;
            let row = compute_row(
                &state,
                &profiles,
                &self.g0,
                self.prev_f.as_ref(),
                self.opts.diagnostics.sobolev,
            )?;
            self.prev_f = Some(profiles.f);
            Some(row)
        } else {
            None
        };
        if self.opts.progress {
            if let Some(r) = &row {
                eprintln!(
                    "t={} mass={} linf_u={} linf_n={}",
                    r.t, r.mass, r.linf_u, r.linf_n
                );
            }
        }
        let snapshot = match &self.opts.storage {
            Storage::Memory => Some(Snapshot::Memory(Box::new(state))),
            Storage::Disk(dir) => {
                let path = dir.join(snapshot_file_name(self.index));
                data_io::write_snapshot(&state, &path)?;
                Some(Snapshot::Disk(path))
            }
            Storage::Discard => None,
        };
        self.index += 1;
        let row = row.filter(|_| self.opts.diagnostics.rows);
        traj.push(t, snapshot, row)
    }
}

/// Steps `initial` to `cfg.t_end`, recording a snapshot every
/// `cfg.snapshot_stride` steps (and at `t = t₀`).
pub fn run(initial: &State, cfg: &StepConfig, params: &Parameters, opts: &RunOptions) -> Result<Trajectory> {
    cfg.validate()?;
    initial.check_invariants()?;
    if opts.enforce_data_norms {
        let report = data_io::validate_data_norms(initial, params);
        if !report.passed() {
            return Err(Error::DataValidation(report.summary()));
        }
    }
    let grid = initial.grid();
    let mut traj = Trajectory::new(grid, *cfg, *params, trust_window(initial));
    if let Storage::Disk(dir) = &opts.storage {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let g0 = initial.to_profiles()?.g_plus;
    let mut recorder = Recorder {
        opts,
        g0,
        prev_f: None,
        index: 0,
    };
    recorder.record(&mut traj, initial.clone(), 0.0)?;
    if let (Storage::Disk(dir), Some(manifest)) = (&opts.storage, &opts.manifest) {
        let snapshot0 = dir.join(snapshot_file_name(0));
        let mut manifest = manifest.clone();
        manifest.initial_hash = data_io::file_sha256(&snapshot0)?;
        let path = dir.join(data_io::MANIFEST_FILE);
        manifest.write(&path)?;
        traj.manifest_path = Some(path);
    }
    let steps = cfg.steps();
    if steps > 0 {
        let mut stepper = make_stepper(cfg.scheme, initial, cfg.options())?;
        for step in 1..=steps {
            stepper.step(cfg.h)?;
            if step % cfg.snapshot_stride == 0 {
                let (state, residue) = stepper.state();
                recorder.record(&mut traj, state, residue)?;
            }
        }
    }
    if let Storage::Disk(dir) = &opts.storage {
        if opts.diagnostics.rows {
            traj.write_diagnostics_csv(&dir.join(data_io::DIAGNOSTICS_FILE))?;
        }
    }
    Ok(traj)
}
