use std::f64::consts::FRAC_PI_3;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lossy_optics::dilation::{lossy_beamsplitter, DilatedUnitary};
use lossy_optics::linalg::{parse_matrix, random_contraction, ComplexMatrix};
use lossy_optics_cli::verify::VerifyOptions;
use lossy_optics_cli::{cmd_verify, RunManifest};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lossy-optics"));
    cmd.env_remove("LOSSY_OPTICS_SEED");
    cmd
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_dilation(path: &Path) -> DilatedUnitary {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn dilate_then_compile_reproduces_the_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (k, n) in [2, 3, 4, 2, 3].into_iter().enumerate() {
        let a = random_contraction(n, &mut rng);
        let name = format!("m{k}.json");
        fs::write(dir.path().join(&name), a.to_json()).unwrap();

        let o = run_in(dir.path(), &["dilate", &name]);
        assert!(o.status.success(), "{}", stderr(&o));
        let dilated = read_dilation(&dir.path().join(format!("m{k}.unitary.json")));
        assert!(dilated.system_block().max_abs_diff(&a) < 1e-10);
        assert!(dir.path().join(format!("m{k}.manifest.json")).exists());

        let o = run_in(dir.path(), &["compile", &format!("m{k}.netlist"), "--out", &format!("c{k}.json")]);
        assert!(o.status.success(), "{}", stderr(&o));
        let compiled = ComplexMatrix::from_json(&fs::read_to_string(dir.path().join(format!("c{k}.json"))).unwrap()).unwrap();
        assert!(compiled.max_abs_diff(&dilated.matrix) < 1e-8);
        assert!(dir.path().join(format!("c{k}.manifest.json")).exists());
    }
}

#[test]
fn dilate_lossy_beamsplitter_reports_one_ancilla() {
    let dir = tempfile::tempdir().unwrap();
    let t = lossy_beamsplitter(0.5).unwrap();
    fs::write(dir.path().join("bs.txt"), t.matrix().to_text()).unwrap();
    let o = run_in(dir.path(), &["dilate", "bs.txt", "--out", "out/bs"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("k = 1"), "{}", stdout(&o));
    let d = read_dilation(&dir.path().join("out/bs.unitary.json"));
    assert_eq!(d.matrix.rows(), 3);
    assert_eq!(d.ancilla_ports, vec![3]);
    assert!((d.thetas[0] - FRAC_PI_3).abs() < 1e-12);

    let manifest: RunManifest = serde_json::from_str(&fs::read_to_string(dir.path().join("out/bs.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.command, "dilate");
    assert_eq!(manifest.outputs.len(), 2);
}

#[test]
fn dilate_identity_adds_nothing() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("id.json"), "[[[1,0],[0,0]],[[0,0],[1,0]]]").unwrap();
    let o = run_in(dir.path(), &["dilate", "id.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("k = 0"));
    let d = read_dilation(&dir.path().join("id.unitary.json"));
    assert_eq!(d.matrix, ComplexMatrix::identity(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("gain.json"), "[[[2,0],[0,0]],[[0,0],[2,0]]]").unwrap();
    let o = run_in(p, &["dilate", "gain.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gain"), "{}", stderr(&o));

    fs::write(p.join("broken.json"), "[[[1,0],[0,0]],[[0,0]").unwrap();
    assert_eq!(run_in(p, &["dilate", "broken.json"]).status.code(), Some(1));
    assert_eq!(run_in(p, &["dilate", "missing.json"]).status.code(), Some(1));

    fs::write(p.join("bad.netlist"), "modes 3\ncoupler 1 2 0.5\nphase 4 0.1\n").unwrap();
    let o = run_in(p, &["parse-check", "bad.netlist"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    assert_eq!(run_in(p, &["scan", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run_in(p, &["scan", "--losses", "0.1,oops"]).status.code(), Some(1));
    assert_eq!(run_in(p, &["--help"]).status.code(), Some(0));
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("a.json"), r#"{"losses": [0.1, "x"], "observable": "P12"}"#).unwrap();
    let o = run_in(p, &["scan", "--config", "a.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("losses[1]"), "{}", stderr(&o));

    fs::write(p.join("b.json"), r#"{"losses": [0.1, 1.5], "observable": "P12"}"#).unwrap();
    let o = run_in(p, &["scan", "--config", "b.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("losses[1]"), "{}", stderr(&o));

    fs::write(p.join("c.json"), r#"{"losses": [0.1], "observable": "P12", "source": {"visibility": 2}}"#).unwrap();
    let o = run_in(p, &["scan", "--config", "c.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("source"), "{}", stderr(&o));
}

#[test]
fn scan_manifest_replays_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = run_in(
        p,
        &[
            "scan", "--observable", "P12", "--losses", "0.07,0.26,0.96", "--xi", "0.87",
            "--pair-rate", "2000", "--dark-rate", "3", "--seed", "41", "--out", "s.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run_in(p, &["scan", "--config", "s.manifest.json", "--out", "replay.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = fs::read(p.join("s.csv")).unwrap();
    assert_eq!(first, fs::read(p.join("replay.csv")).unwrap());

    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("loss,tau_ps,gamma,value,observable,convention,counts,seed"));
    assert_eq!(lines.count(), 3 * 81);
    assert!(text.ends_with(",41\n"));

    // the environment seed overrides the one in the manifest
    let o = bin()
        .current_dir(p)
        .env("LOSSY_OPTICS_SEED", "7")
        .args(["scan", "--config", "s.manifest.json", "--out", "env.csv"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let env_text = fs::read_to_string(p.join("env.csv")).unwrap();
    assert!(env_text.ends_with(",7\n"));
    assert_ne!(env_text, text);
    let manifest: RunManifest = serde_json::from_str(&fs::read_to_string(p.join("env.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.seeds["counts"], 7);
}

#[test]
fn figure_presets() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = run_in(p, &["figures", "fig4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    let zero_loss: Vec<&str> = csv.lines().skip(1).filter(|l| l.starts_with("0.0000000000000000,")).collect();
    assert_eq!(zero_loss.len(), 81);
    assert!(zero_loss.iter().all(|l| l.split(',').nth(3) == Some("0.0000000000000000")));

    let o = run_in(p, &["figures", "fig2", "--out", "fig2.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(p.join("fig2.csv")).unwrap().lines().count(), 1 + 41 * 81);
    let o = run_in(p, &["scan", "--config", "fig2.manifest.json", "--out", "again.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(p.join("fig2.csv")).unwrap(), fs::read(p.join("again.csv")).unwrap());

    let o = run_in(p, &["figures", "fig3", "--xi", "0.5"]);
    let first = stdout(&o).lines().nth(1).unwrap().to_string();
    let gamma: f64 = first.split(',').nth(2).unwrap().parse().unwrap();
    assert!((gamma - 0.5 * (-4.0f64).exp()).abs() < 1e-15);
}

#[test]
fn verify_passes_and_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["verify", "--trials", "30", "--seed", "5", "--out", "report.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 5);
    for suite in report["suites"].as_array().unwrap() {
        assert!(suite["max_deviation"].as_f64().unwrap() <= suite["tolerance"].as_f64().unwrap());
    }
    assert!(dir.path().join("report.manifest.json").exists());
}

#[test]
fn verify_breach_exits_with_three() {
    let opts = VerifyOptions { trials: 3, seed: 0, inject_fault: true };
    let mut out = Vec::new();
    let err = cmd_verify(&opts, None, &mut out).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    let msg = err.to_string();
    assert!(msg.contains("oracle_grid") && msg.contains("theta"), "{msg}");
    let report: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn decompose_and_parse_check() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let t = lossy_beamsplitter(0.3).unwrap();
    fs::write(p.join("bs.json"), t.matrix().to_json()).unwrap();
    assert!(run_in(p, &["dilate", "bs.json"]).status.success());
    let d = read_dilation(&p.join("bs.unitary.json"));
    fs::write(p.join("u.json"), d.matrix.to_json()).unwrap();

    let o = run_in(p, &["decompose", "u.json", "--out", "u.netlist"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run_in(p, &["parse-check", "u.netlist"]);
    assert!(stdout(&o).starts_with("ok: 3 modes"), "{}", stdout(&o));
    let o = run_in(p, &["compile", "u.netlist", "--format", "text"]);
    let compiled = parse_matrix(&stdout(&o)).unwrap();
    assert!(compiled.max_abs_diff(&d.matrix) < 1e-8);

    let o = run_in(p, &["parse-check", "--matrix", "u.json"]);
    assert_eq!(stdout(&o), "ok: 3x3 matrix\n");
    // a lossy matrix is not a unitary
    assert_eq!(run_in(p, &["decompose", "bs.json"]).status.code(), Some(1));
}
