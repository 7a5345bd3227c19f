//! End-to-end tests of the `selberg` binary: exit-status contract,
//! report lines, CSV artifacts, and determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn selberg() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_selberg"));
    cmd.env_remove("SELBERG_OUT_DIR");
    cmd
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const ZETA_CFG: &str = "[function]\nbuiltin = zeta\n";
const DELTA_GL2_CFG: &str = "[gl2]\nbuiltin = delta\nn = 256\n";

#[test]
fn fe_check_zeta_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "zeta.cfg", ZETA_CFG);
    let csv = dir.path().join("fe.csv");
    let out = selberg()
        .args(["fe-check", &cfg, "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("[ok]"), "{text}");
    assert!(!text.contains("[FAIL]"), "{text}");
    let rows: Vec<String> = fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(rows.len(), 4, "header plus one row per grid point");
    assert_eq!(rows[0], "x,residual_re,residual_im,residual_abs,error_bound");
}

#[test]
fn fe_check_detects_a_twisted_root_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "zeta.cfg", ZETA_CFG);
    let out = selberg()
        .args(["fe-check", &cfg, "--epsilon-phase", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("[FAIL]"));
}

#[test]
fn converse_check_delta_passes_over_the_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "delta.cfg", DELTA_GL2_CFG);
    let csv = dir.path().join("cc.csv");
    let out = selberg()
        .args(["converse-check", &cfg, "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 10, "header plus 3 radii x 3 angles");
}

#[test]
fn converse_check_detects_a_perturbed_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "delta.cfg", DELTA_GL2_CFG);
    let out = selberg()
        .args(["converse-check", &cfg, "--perturb", "2,0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn stats_nf_slope_for_zeta_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "zeta.cfg", ZETA_CFG);
    let out = selberg()
        .args(["stats", &cfg, "--nf", "--xmax", "200000"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("nearest integer 1"), "{}", stdout(&out));
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "zeta.cfg", ZETA_CFG);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for csv in [&a, &b] {
        let out = selberg()
            .args(["fe-check", &cfg, "--out"])
            .arg(csv)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn out_dir_override_redirects_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "zeta.cfg", ZETA_CFG);
    let out = selberg()
        .env("SELBERG_OUT_DIR", dir.path())
        .args(["fe-check", &cfg, "--out", "redirected.csv"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("redirected.csv").exists());
}

#[test]
fn config_errors_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "bad.cfg",
        "[function]\nname = bad\n[gamma]\nfactor = 0.5, -1, 0\n",
    );
    let out = selberg().args(["fe-check", &cfg]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("Re mu"), "{err}");
    assert!(err.contains("line 4"), "{err}");

    let out = selberg()
        .args(["fe-check", "/nonexistent/path.cfg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn axioms_and_degree_audit_pass_for_zeta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "zeta.cfg", ZETA_CFG);
    let out = selberg().args(["axioms", &cfg]).output().unwrap();
    assert!(out.status.success(), "{}", stdout(&out));

    let out = selberg()
        .args(["degree-audit", &cfg, "--max-terms", "20000"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("degree = 1"));
}

#[test]
fn degree_zero_gate_rejects_an_imposter_table() {
    let dir = tempfile::tempdir().unwrap();
    let unit = write_cfg(
        dir.path(),
        "unit.cfg",
        "[function]\nname = unit\n[gamma]\nQ = 1\n[coefficients]\na = 1, 1, 0\n",
    );
    let out = selberg().args(["degree-audit", &unit]).output().unwrap();
    assert!(out.status.success(), "{}", stdout(&out));

    let imposter = write_cfg(
        dir.path(),
        "imposter.cfg",
        "[function]\nname = imposter\n[gamma]\nQ = 1\n\
         [coefficients]\na = 1, 1, 0\na = 2, 0.5, 0\n",
    );
    let out = selberg().args(["degree-audit", &imposter]).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("violation"), "{}", stdout(&out));
}

#[test]
fn specfun_test_and_list_builtins_succeed() {
    let out = selberg().arg("specfun-test").output().unwrap();
    assert!(out.status.success(), "{}", stdout(&out));

    let out = selberg().arg("list-builtins").output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("zeta") && text.contains("delta"), "{text}");
}

#[test]
fn euler_config_reproduces_the_zeta_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let zeta = write_cfg(dir.path(), "zeta.cfg", ZETA_CFG);
    let euler = write_cfg(
        dir.path(),
        "euler.cfg",
        "[function]\nname = zeta-by-euler\npole_order = 1\nresidue_re = 1\n\
         [gamma]\nepsilon_re = 1\nQ = 0.5641895835477563\nfactor = 0.5, 0, 0\n\
         [coefficients]\neuler = 2, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0\nzeta_background = true\n",
    );
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let out = selberg()
        .args(["fe-check", &zeta, "--max-terms", "4096", "--out"])
        .arg(&a)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    let out = selberg()
        .args(["fe-check", &euler, "--max-terms", "4096", "--out"])
        .arg(&b)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
