//! Batch entry points of the `zak` binary.
//!
//! [`dispatch`] parses an argument vector, runs one subcommand and returns
//! the process exit code: [`EXIT_OK`], [`EXIT_FAIL`] when a check or report
//! fails, [`EXIT_USAGE`] for malformed invocations. Every failure prints a
//! line `FAIL <check> <value> <bound>` on standard output.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zakharov_core::data_io::{self, load_trajectory, RunConfig, RunManifest};
use zakharov_core::diagnostics::{
    decay_fit, dispersive_check, scattering_monitor_until, split_diagnostics, trust_window, x_norm_report,
    DispersiveKind, SplitExponent, XNormOptions, CSV_COLUMNS,
};
use zakharov_core::integrators::{run, DiagnosticsConfig, RunOptions, Storage};
use zakharov_core::model::{
    grad_eta_phi, grad_eta_psi, null_identity_phi_residual, null_identity_psi_residual, phase_phi, phase_psi,
    resonance_scan, validate_parameters, Phase, PhaseSign, SetTag, Vec3, REALITY_TOL,
};
use zakharov_core::{Error, Scheme, State};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest tolerated null-identity residual.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Tolerance of the central-difference gradient check.
pub const GRADIENT_TOL: f64 = 1e-6;
/// Resonant rows must lie within this many grid spacings of the target set.
pub const RESONANCE_CELLS: f64 = 2.0;
/// Two-scheme agreement bound on `u`.
pub const SCHEME_AGREEMENT: f64 = 1e-6;
/// Accepted self-convergence orders.
pub const ORDER_RANGE: (f64, f64) = (1.7, 2.3);

#[derive(Parser, Debug)]
#[command(name = "zak", version, about = "Pseudospectral Zakharov workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhaseArg {
    Phi,
    Psi,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a simulation and write snapshots, manifest and diagnostics.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// X-norm report, split integrals and scattering monitor of a stored run.
    Analyze {
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Scan a bilinear phase for its resonant sets.
    Resonance {
        #[arg(long, value_enum)]
        phase: PhaseArg,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: PhaseSign,
        #[arg(long)]
        range: f64,
        #[arg(long)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Randomized sweep of the null identities and phase gradients.
    VerifyIdentities {
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Linear dispersive estimate along sampled times.
    VerifyDispersive {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        config: PathBuf,
    },
    /// Cross-check the two time integrators and their convergence orders.
    CompareIntegrators {
        #[arg(long)]
        config: PathBuf,
    },
    /// Power-law fit of one diagnostics column of a stored run.
    FitDecay {
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        column: String,
        #[arg(long)]
        window: String,
    },
}

fn parse_sign(s: &str) -> Result<PhaseSign, String> {
    match s {
        "+" | "plus" => Ok(PhaseSign::Plus),
        "-" | "minus" => Ok(PhaseSign::Minus),
        other => Err(format!("expected + or -, got `{other}`")),
    }
}

/// Failed check `value > bound` (or outside it).
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub check: String,
    pub value: f64,
    pub bound: f64,
}

impl Failure {
    fn new(check: impl Into<String>, value: f64, bound: f64) -> Self {
        Failure {
            check: check.into(),
            value,
            bound,
        }
    }

    pub fn line(&self) -> String {
        format!("FAIL {} {:e} {:e}", self.check, self.value, self.bound)
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    failures: Vec<Failure>,
}

impl Ctx<'_> {
    fn say(&mut self, msg: impl Display) {
        let _ = writeln!(self.out, "{msg}");
    }

    fn check_le(&mut self, check: &str, value: f64, bound: f64) {
        let ok = value <= bound;
        self.say(format!(
            "{} {check} {value:e} {bound:e}",
            if ok { "PASS" } else { "FAIL" }
        ));
        if !ok {
            self.failures.push(Failure::new(check, value, bound));
        }
    }

    fn check_range(&mut self, check: &str, value: f64, lo: f64, hi: f64) {
        let ok = (lo..=hi).contains(&value);
        self.say(format!(
            "{} {check} {value:e} [{lo:e},{hi:e}]",
            if ok { "PASS" } else { "FAIL" }
        ));
        if !ok {
            let bound = if value < lo { lo } else { hi };
            self.failures.push(Failure::new(check, value, bound));
        }
    }
}

fn error_check(e: &Error) -> &'static str {
    match e {
        Error::Config(_) => "config",
        Error::Io { .. } => "io",
        Error::Format(_) => "format",
        Error::Divergence { .. } => "divergence",
        Error::DataValidation(_) => "data_validation",
        Error::Lookup(_) => "lookup",
        Error::BoxFit { .. } => "box_fit",
        Error::InsufficientData(_) => "insufficient_data",
        Error::Range(_) => "range",
        Error::Domain(_) => "domain",
        Error::Reality(_) => "reality",
        _ => "error",
    }
}

/// Caps internal parallelism from `ZAK_THREADS`.
fn configure_threads(err: &mut dyn Write) -> Result<(), i32> {
    let Ok(v) = std::env::var("ZAK_THREADS") else {
        return Ok(());
    };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
        _ => {
            let _ = writeln!(err, "error: ZAK_THREADS must be a positive integer, got `{v}`");
            let _ = writeln!(err, "FAIL zak_threads NaN 1");
            Err(EXIT_USAGE)
        }
    }
}

/// Runs one invocation and returns its exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    let _ = writeln!(out, "FAIL usage NaN NaN");
                    EXIT_USAGE
                }
            };
        }
    };
    if let Err(code) = configure_threads(err) {
        return code;
    }
    let mut ctx = Ctx {
        out,
        failures: Vec::new(),
    };
    let result = match cli.command {
        Command::Simulate { config, out } => simulate(&mut ctx, &config, &out),
        Command::Analyze { traj, report } => analyze(&mut ctx, &traj, &report),
        Command::Resonance {
            phase,
            sign,
            range,
            res,
            out,
        } => resonance(&mut ctx, phase, sign, range, res, &out),
        Command::VerifyIdentities { samples, seed } => verify_identities(&mut ctx, samples, seed),
        Command::VerifyDispersive { kind, config } => verify_dispersive(&mut ctx, &kind, &config),
        Command::CompareIntegrators { config } => compare_integrators(&mut ctx, &config),
        Command::FitDecay { traj, column, window } => fit_decay(&mut ctx, &traj, &column, &window),
    };
    match result {
        Ok(()) if ctx.failures.is_empty() => EXIT_OK,
        Ok(()) => {
            let lines: Vec<String> = ctx.failures.iter().map(Failure::line).collect();
            let _ = writeln!(err, "{} check(s) failed", lines.len());
            EXIT_FAIL
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let code = if matches!(e, Error::Config(_)) { EXIT_USAGE } else { EXIT_FAIL };
            let _ = writeln!(ctx.out, "FAIL {} NaN NaN", error_check(&e));
            code
        }
    }
}

type CmdResult = Result<(), Error>;

fn simulate(ctx: &mut Ctx, config_path: &Path, out: &Path) -> CmdResult {
    let config = RunConfig::load(config_path)?;
    for c in validate_parameters(&config.params).failures() {
        ctx.failures.push(Failure::new(format!("parameter.{}", c.name), c.lhs, c.rhs));
        ctx.say(format!("FAIL parameter.{} {:e} {:e}", c.name, c.lhs, c.rhs));
    }
    let state = data_io::initial_state(&config)?;
    let norms = data_io::validate_data_norms_with(&state, &config.params, config.sobolev)?;
    for n in &norms.norms {
        ctx.say(format!(
            "{} data_norm.{} {:e} {:e}",
            if n.pass { "PASS" } else { "FAIL" },
            n.name,
            n.value,
            norms.eps0
        ));
        if !n.pass && config.enforce_data_norms {
            ctx.failures.push(Failure::new(format!("data_norm.{}", n.name), n.value, norms.eps0));
        }
    }
    if !ctx.failures.is_empty() {
        return Ok(());
    }
    let trust = trust_window(&state);
    ctx.say(format!("trust_window t_trust={:e} r0={:e} v_max={:e}", trust.t_trust, trust.r0, trust.v_max));
    let advisory = config.step.stability_advisory(config.grid);
    if config.step.h > advisory {
        ctx.say(format!("WARN step {:e} exceeds advisory {advisory:e}", config.step.h));
    }
    let opts = RunOptions {
        storage: Storage::Disk(out.to_path_buf()),
        progress: true,
        diagnostics: DiagnosticsConfig {
            sobolev: config.sobolev,
            rows: true,
        },
        enforce_data_norms: config.enforce_data_norms,
        manifest: Some(RunManifest::new(&config, &norms, trust)),
    };
    let traj = run(&state, &config.step, &config.params, &opts)?;
    ctx.say(format!("snapshots {}", traj.len()));
    ctx.check_le("reality_residue", traj.max_reality_residue, REALITY_TOL);
    Ok(())
}

fn report_row(out: &mut String, section: &str, t: f64, name: &str, value: f64, bound: Option<f64>, status: &str) {
    let b = bound.map(|b| format!("{b:e}")).unwrap_or_default();
    out.push_str(&format!("{section},{t:e},{name},{value:.16e},{b},{status}\n"));
}

fn analyze(ctx: &mut Ctx, dir: &Path, report: &Path) -> CmdResult {
    let traj = load_trajectory(dir)?;
    let manifest = RunManifest::read(&dir.join(data_io::MANIFEST_FILE))?;
    if !manifest.verify(dir)? {
        ctx.failures.push(Failure::new("manifest_hash", 1.0, 0.0));
        ctx.say("FAIL manifest_hash 1 0");
    }
    let mut csv = String::from("section,t,name,value,bound,status\n");
    let opts = XNormOptions {
        sobolev: manifest.config.sobolev,
        ..XNormOptions::default()
    };
    let t_trust = traj.trust.t_trust;
    for &t in traj.times() {
        let rep = x_norm_report(&traj, t, &traj.params, &opts)?;
        for c in &rep.components {
            let status = if c.exceeds { "FAIL" } else { "PASS" };
            report_row(&mut csv, "xnorm", t, c.name, c.weighted, Some(rep.bound), status);
            if c.exceeds {
                ctx.failures.push(Failure::new(format!("xnorm.{}@{t}", c.name), c.weighted, rep.bound));
                ctx.say(format!("FAIL xnorm.{}@{t} {:e} {:e}", c.name, c.weighted, rep.bound));
            }
        }
    }
    let t_last = *traj.times().last().unwrap_or(&0.0);
    for (tag, e) in [("split_eighth", SplitExponent::Eighth), ("split_quarter", SplitExponent::Quarter)] {
        match split_diagnostics(&traj, t_last, e, PhaseSign::Plus) {
            Ok(r) => {
                report_row(&mut csv, tag, r.t, "x2_localized", r.x2_localized, None, "INFO");
                report_row(&mut csv, tag, r.t, "localized_l2", r.localized_l2, None, "INFO");
                report_row(&mut csv, tag, r.t, "remainder_l2", r.remainder_l2, None, "INFO");
                report_row(&mut csv, tag, r.t, "complementarity", r.complementarity, None, "INFO");
                for (k, v) in &r.low_frequency {
                    report_row(&mut csv, tag, r.t, &format!("low_frequency_k{k}"), *v, None, "INFO");
                }
            }
            Err(Error::InsufficientData(msg)) => ctx.say(format!("SKIP {tag}: {msg}")),
            Err(e) => return Err(e),
        }
    }
    match scattering_monitor_until(&traj, 0.5 * t_trust, t_trust) {
        Ok(s) => {
            for (t, v) in s.times.iter().zip(&s.f_increments) {
                report_row(&mut csv, "scattering", *t, "cauchy_f", *v, None, "INFO");
            }
            for (t, v) in s.times.iter().zip(&s.g_plus_increments) {
                report_row(&mut csv, "scattering", *t, "cauchy_g_plus", *v, None, "INFO");
            }
            let ok = s.passed();
            report_row(
                &mut csv,
                "scattering",
                t_trust,
                "nonincreasing",
                if ok { 1.0 } else { 0.0 },
                Some(1.0),
                if ok { "PASS" } else { "FAIL" },
            );
            if !ok {
                ctx.failures.push(Failure::new("scattering_nonincreasing", 0.0, 1.0));
                ctx.say("FAIL scattering_nonincreasing 0 1");
            }
        }
        Err(Error::InsufficientData(msg)) => ctx.say(format!("SKIP scattering: {msg}")),
        Err(e) => return Err(e),
    }
    std::fs::write(report, csv).map_err(|e| Error::Io {
        path: report.to_path_buf(),
        source: e,
    })?;
    ctx.say(format!("report {}", report.display()));
    Ok(())
}

fn norm3(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn resonance(ctx: &mut Ctx, phase: PhaseArg, sign: PhaseSign, range: f64, res: usize, out: &Path) -> CmdResult {
    let phase = match phase {
        PhaseArg::Phi => Phase::Phi,
        PhaseArg::Psi => Phase::Psi,
    };
    let scan = resonance_scan(phase, sign, range, res)?;
    scan.write_csv(out)?;
    let h = scan.cell();
    let r_set: Vec<_> = scan.set(SetTag::R).collect();
    ctx.say(format!(
        "T={} S={} R={} cell={h:e}",
        scan.set(SetTag::T).count(),
        scan.set(SetTag::S).count(),
        r_set.len()
    ));
    if r_set.is_empty() {
        ctx.failures.push(Failure::new("r_set_size", 0.0, 1.0));
        ctx.say("FAIL r_set_size 0 1");
        return Ok(());
    }
    let bound = RESONANCE_CELLS * h;
    match phase {
        Phase::Phi => {
            let eta = r_set.iter().map(|p| norm3(p.eta)).fold(0.0, f64::max);
            let xi = r_set.iter().map(|p| (norm3(p.xi) - 0.5).abs()).fold(0.0, f64::max);
            ctx.check_le("r_set_max_abs_eta", eta, bound);
            ctx.check_le("r_set_max_abs_xi_minus_half", xi, bound);
        }
        Phase::Psi => {
            let xi = r_set.iter().map(|p| norm3(p.xi)).fold(0.0, f64::max);
            ctx.check_le("r_set_max_abs_xi", xi, bound);
        }
    }
    ctx.say(format!("INFO hausdorff_cells {:e}", scan.hausdorff_to_expected() / h));
    Ok(())
}

fn unit_sample(rng: &mut ChaCha8Rng) -> Vec3 {
    [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]
}

fn central_gradient(f: impl Fn(Vec3) -> f64, x: Vec3) -> Vec3 {
    let d = 1e-6;
    let mut g = [0.0; 3];
    for (i, gi) in g.iter_mut().enumerate() {
        let (mut a, mut b) = (x, x);
        a[i] += d;
        b[i] -= d;
        *gi = (f(a) - f(b)) / (2.0 * d);
    }
    g
}

fn verify_identities(ctx: &mut Ctx, samples: usize, seed: u64) -> CmdResult {
    if samples == 0 {
        return Err(Error::Config("--samples must be positive".into()));
    }
    let e1 = [1.0, 0.0, 0.0];
    let hand_phi = phase_phi(e1, e1, PhaseSign::Plus);
    let hand_psi = phase_psi(e1, e1, PhaseSign::Plus);
    ctx.check_le("hand_phi_plus_e1_e1", (hand_phi - 2.0).abs(), IDENTITY_TOL);
    ctx.check_le("hand_psi_plus_e1_e1", hand_psi.abs(), IDENTITY_TOL);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut psi_max, mut phi_max, mut grad_max) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let xi = unit_sample(&mut rng);
        let eta = unit_sample(&mut rng);
        for s in [PhaseSign::Plus, PhaseSign::Minus] {
            psi_max = psi_max.max(null_identity_psi_residual(xi, eta, s)?.abs());
            phi_max = phi_max.max(norm3(null_identity_phi_residual(xi, eta, s)?));
        }
    }
    let grad_samples = samples.min(1000);
    for _ in 0..grad_samples {
        let xi = unit_sample(&mut rng);
        let eta = unit_sample(&mut rng);
        for s in [PhaseSign::Plus, PhaseSign::Minus] {
            let checks = [
                (grad_eta_phi(xi, eta, s)?, central_gradient(|e| phase_phi(xi, e, s), eta)),
                (Phase::Phi.grad_xi(xi, eta, s)?, central_gradient(|x| phase_phi(x, eta, s), xi)),
                (grad_eta_psi(xi, eta, s), central_gradient(|e| phase_psi(xi, e, s), eta)),
                (Phase::Psi.grad_xi(xi, eta, s)?, central_gradient(|x| phase_psi(x, eta, s), xi)),
            ];
            for (exact, approx) in checks {
                let d = [exact[0] - approx[0], exact[1] - approx[1], exact[2] - approx[2]];
                grad_max = grad_max.max(norm3(d));
            }
        }
    }
    ctx.say(format!("samples {samples} seed {seed}"));
    ctx.check_le("max_null_identity_psi_residual", psi_max, IDENTITY_TOL);
    ctx.check_le("max_null_identity_phi_residual", phi_max, IDENTITY_TOL);
    ctx.check_le("max_phase_gradient_error", grad_max, GRADIENT_TOL);
    Ok(())
}

fn verify_dispersive(ctx: &mut Ctx, kind: &str, config_path: &Path) -> CmdResult {
    let kind: DispersiveKind = kind.parse()?;
    let config = RunConfig::load(config_path)?;
    let state = data_io::initial_state(&config)?;
    let trust = trust_window(&state);
    let times = config.samples.times(trust.t_trust);
    let rep = dispersive_check(kind, &state, &times)?;
    for (t, (v, r)) in rep.times.iter().zip(rep.lhs.iter().zip(&rep.ratios)) {
        ctx.say(format!("t={t:e} lhs={v:e} ratio={r:e}"));
    }
    ctx.say(format!("kind {} trust_window_end {:e} data_norm {:e}", kind.name(), trust.t_trust, rep.data_norm));
    let window = (times[0], *times.last().unwrap_or(&times[0]));
    let fit = decay_fit(&rep.series(), window, trust.t_trust)?;
    ctx.say(format!(
        "exponent {:e} expected {:e} residual {:e}",
        fit.exponent,
        -kind.rate(),
        fit.residual
    ));
    ctx.check_le("ratio_spread", rep.spread, zakharov_core::diagnostics::FLATNESS);
    Ok(())
}

fn final_state(state: &State, config: &RunConfig, scheme: Scheme, h: f64) -> Result<State, Error> {
    let mut step = config.step;
    step.scheme = scheme;
    step.h = h;
    step.snapshot_stride = step.steps().max(1);
    let opts = RunOptions {
        storage: Storage::Memory,
        progress: false,
        diagnostics: DiagnosticsConfig {
            sobolev: config.sobolev,
            rows: false,
        },
        enforce_data_norms: config.enforce_data_norms,
        manifest: None,
    };
    let traj = run(state, &step, &config.params, &opts)?;
    traj.state(traj.len() - 1)
}

fn relative_difference(a: &State, b: &State) -> f64 {
    let d = zakharov_core::diagnostics::l2_norm(&(&a.u - &b.u));
    let n = zakharov_core::diagnostics::l2_norm(&b.u);
    if n == 0.0 {
        d
    } else {
        d / n
    }
}

fn compare_integrators(ctx: &mut Ctx, config_path: &Path) -> CmdResult {
    let config = RunConfig::load(config_path)?;
    let state = data_io::initial_state(&config)?;
    let h = config.step.h;
    let strang = final_state(&state, &config, Scheme::StrangSplit, h)?;
    let lawson = final_state(&state, &config, Scheme::ProfileLawson, h)?;
    ctx.check_le("scheme_difference_u", relative_difference(&strang, &lawson), SCHEME_AGREEMENT);
    for scheme in [Scheme::StrangSplit, Scheme::ProfileLawson] {
        let coarse: Vec<State> = [20.0 * h, 10.0 * h, 5.0 * h]
            .iter()
            .map(|&k| final_state(&state, &config, scheme, k))
            .collect::<Result<_, _>>()?;
        let e1 = relative_difference(&coarse[0], &coarse[1]);
        let e2 = relative_difference(&coarse[1], &coarse[2]);
        let order = (e1 / e2).log2();
        ctx.say(format!("{} richardson e1={e1:e} e2={e2:e}", scheme.as_str()));
        ctx.check_range(
            &format!("order_{}", scheme.as_str()),
            order,
            ORDER_RANGE.0,
            ORDER_RANGE.1,
        );
    }
    Ok(())
}

fn parse_window(s: &str) -> Result<(f64, f64), Error> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("window must be t0:t1, got `{s}`")))?;
    let p = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|e| Error::Config(format!("window bound `{v}`: {e}")))
    };
    Ok((p(a)?, p(b)?))
}

fn fit_decay(ctx: &mut Ctx, dir: &Path, column: &str, window: &str) -> CmdResult {
    if !CSV_COLUMNS.contains(&column) || column == "t" {
        return Err(Error::Config(format!(
            "unknown column `{column}`; expected one of {}",
            CSV_COLUMNS[1..].join(", ")
        )));
    }
    let window = parse_window(window)?;
    let traj = load_trajectory(dir)?;
    let series: Vec<(f64, f64)> = traj
        .rows()
        .iter()
        .filter_map(|r| r.column(column).map(|v| (r.t, v)))
        .collect();
    let fit = decay_fit(&series, window, traj.trust.t_trust)?;
    ctx.say(format!(
        "column {column} window [{:e},{:e}] exponent {:.6} intercept {:e} residual {:e} samples {} trust_window_end {:e}",
        fit.window.0, fit.window.1, fit.exponent, fit.intercept, fit.residual, fit.samples, fit.trust_window_end
    ));
    Ok(())
}
