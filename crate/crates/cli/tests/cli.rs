use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn spi(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spi"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn spi")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = spi(dir, args);
    assert!(
        out.status.success(),
        "spi {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_config(dir: &Path, json: &str) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, json).unwrap();
    path
}

fn report(path: impl AsRef<Path>) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const TYPE1: &str = r#"{"regime":"TYPE1","width":8,"height":8,"patterns":64,
    "plaintexts":{"source":"synthetic","count":4},"seed":"00000000000000a1"}"#;

const TYPE2: &str = r#"{"regime":"TYPE2","width":8,"height":8,"patterns":40,
    "plaintexts":{"source":"synthetic","count":30},
    "exemplars":{"source":"synthetic","count":2000},"seed":"00000000000000b2"}"#;

#[test]
fn decrypt_with_full_sampling_is_faithful() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write_config(d, TYPE1);
    ok(d, &["--config", "config.json", "--out", "k", "keygen"]);
    ok(d, &["--config", "config.json", "--out", "e", "encrypt", "--key", "k/key.spikey", "--pgm"]);
    assert!(d.join("e/plaintexts/00003.pgm").exists());
    ok(d, &[
        "--config", "config.json", "--out", "d", "decrypt", "--key", "k/key.spikey",
        "--ciphertexts", "e/ciphertexts.csv", "--reference", "e/plaintexts.csv",
    ]);
    let r = report(d.join("d/report.json"));
    let psnr = r["psnr_by_image"].as_array().unwrap();
    assert_eq!(psnr.len(), 4);
    for p in psnr {
        assert!(p.as_f64().unwrap() >= 30.0, "{p}");
    }
    assert!(d.join("d/grid.pgm").exists());
    assert!(d.join("d/manifest.json").exists());
}

#[test]
fn type2_attacks_recover_the_order() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write_config(d, TYPE2);
    ok(d, &["--config", "config.json", "--out", "k", "keygen"]);
    ok(d, &["--config", "config.json", "--out", "e", "encrypt", "--key", "k/key.spikey"]);
    ok(d, &[
        "--config", "config.json", "--out", "kpa", "kpa", "--plaintexts", "e/plaintexts.csv",
        "--ciphertexts", "e/ciphertexts.csv", "--originals", "k/originals.spikey",
        "--true-key", "k/key.spikey", "--true-permutation", "k/permutation.spiperm",
    ]);
    let r = report(d.join("kpa/report.json"));
    assert_eq!(r["permutation_correct_rate"].as_f64(), Some(1.0));
    assert!(d.join("kpa/recovered.spiperm").exists());

    ok(d, &[
        "--config", "config.json", "--out", "coa", "coa", "--ciphertexts", "e/ciphertexts.csv",
        "--originals", "k/originals.spikey", "--true-permutation", "k/permutation.spiperm",
    ]);
    let r = report(d.join("coa/report.json"));
    let rate = r["permutation_correct_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&rate));
    assert!(d.join("coa/distances.csv").exists());

    ok(d, &[
        "--out", "ev", "eval", "--true-permutation", "k/permutation.spiperm",
        "--recovered-permutation", "kpa/recovered.spiperm",
    ]);
    assert!(d.join("ev/eval.json").exists());

    ok(d, &["--out", "tables", "report", "--runs", "kpa", "coa"]);
    let kpa_table = fs::read_to_string(d.join("tables/table_kpa_type2.csv")).unwrap();
    assert_eq!(kpa_table.lines().count(), 2, "{kpa_table}");
    let coa_table = fs::read_to_string(d.join("tables/table_coa.csv")).unwrap();
    assert_eq!(coa_table.lines().count(), 2, "{coa_table}");
}

#[test]
fn same_seed_gives_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    let run = |name: &str| {
        let d = tmp.path().join(name);
        fs::create_dir(&d).unwrap();
        write_config(&d, TYPE2);
        ok(&d, &["--config", "config.json", "--out", "k", "keygen"]);
        ok(&d, &["--config", "config.json", "--out", "e", "encrypt", "--key", "k/key.spikey"]);
        d
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["k/key.spikey", "k/permutation.spiperm", "e/ciphertexts.csv", "e/manifest.json"] {
        let same = fs::read(a.join(f)).unwrap() == fs::read(b.join(f)).unwrap();
        assert!(same, "{f} differs");
    }
    ok(&a, &["--config", "config.json", "--seed", "00000000000000c3", "--out", "c", "keygen"]);
    assert_ne!(fs::read(a.join("k/key.spikey")).unwrap(), fs::read(a.join("c/key.spikey")).unwrap());
}

#[test]
fn bad_input_exits_with_validation_code() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let out = spi(d, &["--out", "x", "decrypt", "--key", "missing.spikey", "--ciphertexts", "missing.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!d.join("x").exists());

    let out = spi(d, &["keygen", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));

    write_config(d, r#"{"widht":8}"#);
    let out = spi(d, &["--config", "config.json", "keygen"]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(spi(d, &["--help"]).status.code(), Some(0));
}

#[test]
fn failed_run_leaves_no_partial_output() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write_config(d, TYPE1);
    ok(d, &["--config", "config.json", "--out", "k", "keygen"]);
    ok(d, &["--config", "config.json", "--out", "e", "encrypt", "--key", "k/key.spikey"]);
    fs::write(d.join("broken.csv"), "1,2\nnot-a-number,3\n").unwrap();
    let out = spi(d, &[
        "--config", "config.json", "--out", "d", "decrypt", "--key", "k/key.spikey",
        "--ciphertexts", "broken.csv",
    ]);
    assert_ne!(out.status.code(), Some(0));
    assert!(!d.join("d").exists());
    let leftovers: Vec<_> = fs::read_dir(d)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with(".spi-staging"))
        .collect();
    assert!(leftovers.is_empty());
}
