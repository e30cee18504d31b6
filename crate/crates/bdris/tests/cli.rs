use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bdris::io::{read_table, RunManifest};

fn bdris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdris"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn missing_config_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = bdris(&[
        "rate",
        "--config",
        "/does/not/exist.toml",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error kind=config"));
}

#[test]
fn invalid_group_count_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[link]\narchitectures = [\"bd_g7\"]\n").unwrap();
    let out = dir.path().join("out");
    let o = bdris(&[
        "rate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let line = stderr(&o);
    assert!(line.contains("field=link.architectures"), "{line}");
    assert_eq!(line.trim_end().lines().count(), 1);
}

#[test]
fn unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[geometry]\nmx = 4\n").unwrap();
    let o = bdris(&[
        "complexity",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    let o = bdris(&["complexity", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error kind=io"));
}

#[test]
fn complexity_writes_table_sidecar_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = bdris(&["complexity", "--out", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let t = read_table(&out.join("complexity.csv")).unwrap();
    let g10 = t.rows.iter().find(|r| r[0] == 10.0).unwrap();
    assert_eq!(g10[1], 2100.0);
    assert!(t.metadata.iter().any(|(k, v)| k == "seed" && v == "2025"));
    let m = RunManifest::read(&out.join("manifest.toml")).unwrap();
    assert!(m.gates_passed);
    assert_eq!(m.experiment, "complexity");
    for a in &m.artifacts {
        assert!(out.join(&a.path).exists(), "{}", a.path);
    }
}

fn run_rate(out: &Path, cfg: &Path, seed: &str) -> RunManifest {
    let o = bdris(&[
        "rate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        seed,
        "--threads",
        "1",
        "--quiet",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    RunManifest::read(&out.join("manifest.toml")).unwrap()
}

#[test]
fn same_seed_gives_identical_checksums() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "[geometry]\nm_x = 4\nm_y = 4\n[monte_carlo]\ntrials = 50\n[system]\npower_grid_dbm = \"0:10:20\"\n",
    )
    .unwrap();
    let a = run_rate(&dir.path().join("a"), &cfg, "7");
    let b = run_rate(&dir.path().join("b"), &cfg, "7");
    let c = run_rate(&dir.path().join("c"), &cfg, "8");
    assert_eq!(a.seed, 7);
    assert_eq!(a.artifacts, b.artifacts);
    let table = |m: &RunManifest| {
        m.artifacts
            .iter()
            .find(|x| x.path == "rate.csv")
            .unwrap()
            .sha256
            .clone()
    };
    assert_ne!(table(&a), table(&c));
}
