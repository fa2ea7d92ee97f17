use std::path::Path;
use std::process::Command;

use zakharov_cli::{dispatch, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use zakharov_core::data_io::{load_trajectory, RunManifest, MANIFEST_FILE};

fn zak(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zak").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fail_lines(out: &str) -> Vec<&str> {
    out.lines().filter(|l| l.starts_with("FAIL ")).collect()
}

fn assert_fail_lines_parse(out: &str) {
    for line in fail_lines(out) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(parts.len(), 4, "{line}");
        assert!(parts[2].parse::<f64>().is_ok(), "{line}");
        assert!(parts[3].parse::<f64>().is_ok(), "{line}");
    }
}

const SMALL: &str = "\
# coupled run on a coarse box
grid.n = 16
grid.length = 16
h = 0.01
eps0 = 0.05
u.kind = gaussian
u.amplitude = 1
u.sigma = 1
n1.kind = gaussian
n1.amplitude = 1
n1.sigma = 1
scale_to_eps0 = 1.0
";

fn write_config(dir: &Path, name: &str, extra: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, format!("{SMALL}{extra}")).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn identity_sweep_reports_small_residuals() {
    let (code, out, _) = zak(&["verify-identities", "--samples", "100000", "--seed", "7"]);
    assert_eq!(code, EXIT_OK, "{out}");
    for check in ["max_null_identity_psi_residual", "max_null_identity_phi_residual"] {
        let line = out.lines().find(|l| l.contains(check)).unwrap();
        let value: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
        assert!(value <= 1e-12, "{line}");
    }
}

#[test]
fn identity_sweep_is_deterministic() {
    let a = zak(&["verify-identities", "--samples", "500", "--seed", "3"]);
    let b = zak(&["verify-identities", "--samples", "500", "--seed", "3"]);
    assert_eq!(a, b);
}

#[test]
fn resonance_csv_rows_lie_near_expected_set() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("phi.csv");
    let (code, out, _) = zak(&[
        "resonance", "--phase", "phi", "--sign", "+", "--range", "1", "--res", "64", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let h = 2.0 / 64.0;
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1).filter(|l| l.ends_with(",R")) {
        let v: Vec<f64> = line.split(',').take(6).map(|x| x.parse().unwrap()).collect();
        let xi = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let eta = (v[3] * v[3] + v[4] * v[4] + v[5] * v[5]).sqrt();
        assert!(eta <= 2.0 * h, "{line}");
        assert!((xi - 0.5).abs() <= 2.0 * h, "{line}");
        rows += 1;
    }
    assert!(rows > 0);
}

#[test]
fn resonance_accepts_minus_sign_for_psi() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("psi.csv");
    let (code, out, _) = zak(&[
        "resonance", "--phase", "psi", "--sign", "-", "--range", "1", "--res", "16", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(csv.exists());
}

#[test]
fn simulate_with_zero_end_time_writes_one_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", "t_end = 0\n");
    let run = dir.path().join("run");
    let (code, out, _) = zak(&["simulate", "--config", &cfg, "--out", run.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    let manifest = RunManifest::read(&run.join(MANIFEST_FILE)).unwrap();
    assert!(manifest.verify(&run).unwrap());
    let traj = load_trajectory(&run).unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(traj.rows().len(), 1);
}

#[test]
fn simulate_is_bit_reproducible_and_analyze_reads_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", "t_end = 0.3\nsnapshot_stride = 5\n");
    let runs = [dir.path().join("a"), dir.path().join("b")];
    for run in &runs {
        let (code, out, _) = zak(&["simulate", "--config", &cfg, "--out", run.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{out}");
    }
    let mut names: Vec<_> = std::fs::read_dir(&runs[0])
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 9);
    for name in &names {
        let a = std::fs::read(runs[0].join(name)).unwrap();
        let b = std::fs::read(runs[1].join(name)).unwrap();
        assert!(a == b, "{name:?} differs");
    }

    let report = dir.path().join("report.csv");
    let (code, out, _) = zak(&[
        "analyze", "--traj", runs[0].to_str().unwrap(), "--report", report.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("section,t,name,value,bound,status\n"));
    for section in ["xnorm,", "split_eighth,", "split_quarter,"] {
        assert!(text.lines().any(|l| l.starts_with(section)), "{section}");
    }

    let (code, out, _) = zak(&[
        "fit-decay", "--traj", runs[0].to_str().unwrap(), "--column", "linf_u", "--window", "0.05:0.3",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("exponent"));
}

#[test]
fn analyze_detects_corrupted_initial_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", "t_end = 0\n");
    let run = dir.path().join("run");
    assert_eq!(zak(&["simulate", "--config", &cfg, "--out", run.to_str().unwrap()]).0, EXIT_OK);
    let snap = run.join("snap_000000.zaks");
    let mut bytes = std::fs::read(&snap).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x01;
    std::fs::write(&snap, bytes).unwrap();
    let report = dir.path().join("r.csv");
    let (code, out, _) = zak(&["analyze", "--traj", run.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.lines().any(|l| l.starts_with("FAIL manifest_hash")), "{out}");
    assert_fail_lines_parse(&out);
}

#[test]
fn oversized_data_is_rejected_with_norm_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("big.cfg");
    let text = SMALL.replace("scale_to_eps0 = 1.0\n", "t_end = 0.1\n");
    std::fs::write(&cfg, text).unwrap();
    let run = dir.path().join("run");
    let (code, out, _) = zak(&["simulate", "--config", cfg.to_str().unwrap(), "--out", run.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.lines().any(|l| l.starts_with("FAIL data_norm.")), "{out}");
    assert_fail_lines_parse(&out);
    assert!(!run.exists());
}

#[test]
fn integrators_agree_on_a_small_box() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", "t_end = 0.2\n");
    let cfg_text = std::fs::read_to_string(&cfg).unwrap().replace("h = 0.01", "h = 0.001");
    std::fs::write(&cfg, cfg_text).unwrap();
    let (code, out, _) = zak(&["compare-integrators", "--config", &cfg]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("PASS order_strang_split"));
    assert!(out.contains("PASS order_profile_lawson"));
}

#[test]
fn dispersive_check_reports_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.cfg",
        "t_end = 1\nenforce_data_norms = false\nsamples.start = 0.2\nsamples.end = 0.7\nsamples.count = 6\n",
    );
    let (code, out, _) = zak(&["verify-dispersive", "--kind", "schrodinger_L6", "--config", &cfg]);
    assert!(code == EXIT_OK || code == EXIT_FAIL, "{out}");
    assert!(out.contains("exponent"));
    assert_fail_lines_parse(&out);

    let (code, out, _) = zak(&["verify-dispersive", "--kind", "sound", "--config", &cfg]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.starts_with("FAIL "));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["frobnicate"],
        vec!["verify-identities"],
        vec!["verify-identities", "--samples", "10", "--bogus"],
        vec!["resonance", "--phase", "chi", "--sign", "+", "--range", "1", "--res", "8", "--out", "x"],
        vec!["fit-decay", "--traj", "nowhere", "--column", "nope", "--window", "1:2"],
        vec!["fit-decay", "--traj", "nowhere", "--column", "linf_u", "--window", "12"],
    ] {
        let (code, out, _) = zak(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.lines().any(|l| l.starts_with("FAIL ")), "{args:?}");
    }
}

#[test]
fn missing_config_keys_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "grid.n = 16\ngrid.length = 16\nh = 0.01\n").unwrap();
    let (code, _, err) = zak(&["simulate", "--config", cfg.to_str().unwrap(), "--out", "unused"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("t_end"), "{err}");
}

#[test]
fn thread_cap_must_be_positive() {
    let out = Command::new(env!("CARGO_BIN_EXE_zak"))
        .args(["verify-identities", "--samples", "10"])
        .env("ZAK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));

    let out = Command::new(env!("CARGO_BIN_EXE_zak"))
        .args(["verify-identities", "--samples", "10"])
        .env("ZAK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = zak(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("compare-integrators"));
}
