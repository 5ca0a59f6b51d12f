//! Black-box tests against the built binary: exit codes, determinism
//! of artifacts, and the documented output conventions.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_glyphrec"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should run")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn gen_small(dir: &Path, classes: u32, per_class: u32, seed: u64, out: &str) {
    let out_arg = out.to_string();
    let args = [
        "gen",
        "--classes",
        &classes.to_string(),
        "--per-class",
        &per_class.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        &out_arg,
    ];
    let r = run(dir, &args.iter().map(|s| &**s).collect::<Vec<_>>());
    assert_ok(&r);
}

fn read(dir: &Path, rel: &str) -> Vec<u8> {
    std::fs::read(dir.join(rel)).unwrap_or_else(|e| panic!("read {rel}: {e}"))
}

#[test]
fn gen_writes_manifest_and_is_byte_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    gen_small(tmp.path(), 3, 6, 9, "a");
    gen_small(tmp.path(), 3, 6, 9, "b");

    let manifest = String::from_utf8(read(tmp.path(), "a/manifest.csv")).unwrap();
    let rows: Vec<&str> = manifest.lines().collect();
    assert_eq!(rows[0], "path,label");
    assert_eq!(rows.len(), 1 + 18, "header plus classes*per_class rows");

    assert_eq!(read(tmp.path(), "a/manifest.csv"), read(tmp.path(), "b/manifest.csv"));
    for line in &rows[1..] {
        let (name, _) = line.split_once(',').unwrap();
        assert_eq!(
            read(tmp.path(), &format!("a/{name}")),
            read(tmp.path(), &format!("b/{name}")),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn gen_rejects_single_class_with_usage_exit() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run(
        tmp.path(),
        &["gen", "--classes", "1", "--per-class", "5", "--out", "x"],
    );
    assert_eq!(r.status.code(), Some(2), "stderr: {}", stderr(&r));
    assert!(!stderr(&r).is_empty());
}

#[test]
fn gen_rejects_excessive_noise() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run(
        tmp.path(),
        &[
            "gen", "--classes", "3", "--per-class", "5", "--out", "x", "--noise", "0.2",
        ],
    );
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn extract_column_counts_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    gen_small(tmp.path(), 3, 5, 1, "data");

    let r = run(
        tmp.path(),
        &["extract", "--manifest", "data/manifest.csv", "--out", "f.csv"],
    );
    assert_ok(&r);
    let text = String::from_utf8(read(tmp.path(), "f.csv")).unwrap();
    let first_row = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(first_row.split(',').count(), 205, "label + 204 features");

    let r = run(
        tmp.path(),
        &[
            "extract",
            "--manifest",
            "data/manifest.csv",
            "--out",
            "f0.csv",
            "--shadow-depth",
            "0",
            "--run-depth",
            "0",
        ],
    );
    assert_ok(&r);
    let text0 = String::from_utf8(read(tmp.path(), "f0.csv")).unwrap();
    let row0 = text0.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(row0.split(',').count(), 29, "label + 24 + 4 features");

    let r = run(
        tmp.path(),
        &["extract", "--manifest", "data/manifest.csv", "--out", "g.csv"],
    );
    assert_ok(&r);
    assert_eq!(read(tmp.path(), "f.csv"), read(tmp.path(), "g.csv"));
}

#[test]
fn extract_lists_unusable_images_and_fails() {
    let tmp = tempfile::tempdir().unwrap();
    gen_small(tmp.path(), 2, 3, 1, "data");
    let manifest = tmp.path().join("data/manifest.csv");
    let mut text = std::fs::read_to_string(&manifest).unwrap();
    text.push_str("missing.pgm,1\n");
    std::fs::write(&manifest, text).unwrap();

    let r = run(
        tmp.path(),
        &["extract", "--manifest", "data/manifest.csv", "--out", "f.csv"],
    );
    assert_eq!(r.status.code(), Some(1));
    assert!(stderr(&r).contains("missing.pgm"), "stderr: {}", stderr(&r));
}

fn extract_features(tmp: &Path) -> PathBuf {
    gen_small(tmp, 3, 8, 2, "data");
    let r = run(
        tmp,
        &["extract", "--manifest", "data/manifest.csv", "--out", "f.csv"],
    );
    assert_ok(&r);
    tmp.join("f.csv")
}

#[test]
fn train_mlp_is_seed_deterministic_and_warns_on_zero_lr() {
    let tmp = tempfile::tempdir().unwrap();
    extract_features(tmp.path());

    let train = |model: &str| {
        let r = run(
            tmp.path(),
            &[
                "train-mlp",
                "--features",
                "f.csv",
                "--hidden",
                "10",
                "--iters",
                "40",
                "--seed",
                "6",
                "--model",
                model,
            ],
        );
        assert_ok(&r);
    };
    train("m1.json");
    train("m2.json");
    assert_eq!(read(tmp.path(), "m1.json"), read(tmp.path(), "m2.json"));

    let r = run(
        tmp.path(),
        &[
            "train-mlp",
            "--features",
            "f.csv",
            "--hidden",
            "4",
            "--iters",
            "2",
            "--lr",
            "0",
            "--model",
            "m0.json",
        ],
    );
    assert_ok(&r);
    assert!(stderr(&r).contains("warning"), "stderr: {}", stderr(&r));
}

#[test]
fn overfit_mlp_scores_100_on_its_training_set() {
    let tmp = tempfile::tempdir().unwrap();
    extract_features(tmp.path());
    let r = run(
        tmp.path(),
        &[
            "train-mlp",
            "--features",
            "f.csv",
            "--hidden",
            "16",
            "--iters",
            "120",
            "--seed",
            "0",
            "--model",
            "m.json",
        ],
    );
    assert_ok(&r);
    let r = run(
        tmp.path(),
        &[
            "eval",
            "--model",
            "m.json",
            "--features",
            "f.csv",
            "--report",
            "rep.json",
            "--confusion",
            "cm.csv",
        ],
    );
    assert_ok(&r);
    let out = stdout(&r);
    let macro_line = out.lines().find(|l| l.starts_with("macro_accuracy")).unwrap();
    let acc: f64 = macro_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(acc >= 99.999, "expected a memorizing model, got {acc}");
    assert!(tmp.path().join("rep.json").exists());
    assert!(tmp.path().join("cm.csv").exists());
}

#[test]
fn train_svm_then_eval_roundtrips_through_the_model_file() {
    let tmp = tempfile::tempdir().unwrap();
    extract_features(tmp.path());
    let r = run(
        tmp.path(),
        &["train-svm", "--features", "f.csv", "--model", "s.model"],
    );
    assert_ok(&r);
    let train_line = stdout(&r);
    assert!(train_line.starts_with("train_macro_accuracy"));

    let r = run(
        tmp.path(),
        &["train-svm", "--features", "f.csv", "--model", "s2.model"],
    );
    assert_ok(&r);
    assert_eq!(read(tmp.path(), "s.model"), read(tmp.path(), "s2.model"));

    let r1 = run(tmp.path(), &["eval", "--model", "s.model", "--features", "f.csv"]);
    assert_ok(&r1);
    let r2 = run(tmp.path(), &["eval", "--model", "s.model", "--features", "f.csv"]);
    assert_ok(&r2);
    assert_eq!(stdout(&r1), stdout(&r2));
}

#[test]
fn group_identity_at_tau_one_on_a_clean_matrix() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("cm.csv"), "5,0,0\n0,5,0\n0,0,5\n").unwrap();
    let r = run(
        tmp.path(),
        &["group", "--confusion", "cm.csv", "--tau", "1.0", "--out", "g.json"],
    );
    assert_ok(&r);
    assert!(stdout(&r).contains("classes 3 merged_into 3"));
    let g: serde_json::Value =
        serde_json::from_slice(&read(tmp.path(), "g.json")).unwrap();
    assert_eq!(g["map"], serde_json::json!([0, 1, 2]));

    let r = run(
        tmp.path(),
        &["group", "--confusion", "cm.csv", "--tau", "0", "--out", "g.json"],
    );
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn crossval_prints_per_pair_accuracies_and_mean() {
    let tmp = tempfile::tempdir().unwrap();
    gen_small(tmp.path(), 3, 9, 4, "data");
    let r = run(
        tmp.path(),
        &[
            "crossval",
            "--manifest",
            "data/manifest.csv",
            "--pairs",
            "3",
            "--classifier",
            "mlp",
            "--hidden",
            "8",
            "--iters",
            "15",
            "--table",
            "table.csv",
        ],
    );
    assert_ok(&r);
    let out = stdout(&r);
    let set_lines = out.lines().filter(|l| l.starts_with("set ")).count();
    assert_eq!(set_lines, 3, "stdout: {out}");
    assert!(out.lines().any(|l| l.starts_with("mean_accuracy")));
    let table = String::from_utf8(read(tmp.path(), "table.csv")).unwrap();
    assert!(table.starts_with("hidden,set1,set2,set3"));
    assert_eq!(table.lines().count(), 2, "one sweep row for --hidden 8");
}

#[test]
fn config_file_fills_defaults_and_flags_override_it() {
    let tmp = tempfile::tempdir().unwrap();
    gen_small(tmp.path(), 2, 4, 7, "data");
    std::fs::write(
        tmp.path().join("run.conf"),
        "shadow-depth = 0\nrun-depth = 0\n",
    )
    .unwrap();

    // config alone: root-only trees, 29 columns
    let r = run(
        tmp.path(),
        &[
            "extract",
            "--manifest",
            "data/manifest.csv",
            "--out",
            "a.csv",
            "--config",
            "run.conf",
        ],
    );
    assert_ok(&r);
    let text = String::from_utf8(read(tmp.path(), "a.csv")).unwrap();
    let row = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(row.split(',').count(), 29);

    // explicit flag beats the config value
    let r = run(
        tmp.path(),
        &[
            "extract",
            "--manifest",
            "data/manifest.csv",
            "--out",
            "b.csv",
            "--config",
            "run.conf",
            "--shadow-depth",
            "1",
        ],
    );
    assert_ok(&r);
    let text = String::from_utf8(read(tmp.path(), "b.csv")).unwrap();
    let row = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(row.split(',').count(), 1 + 120 + 4);

    // unknown keys are rejected with a usage exit
    std::fs::write(tmp.path().join("bad.conf"), "hidden = 12\n").unwrap();
    let r = run(
        tmp.path(),
        &[
            "extract",
            "--manifest",
            "data/manifest.csv",
            "--out",
            "c.csv",
            "--config",
            "bad.conf",
        ],
    );
    assert_eq!(r.status.code(), Some(2));
    assert!(stderr(&r).contains("hidden"), "stderr: {}", stderr(&r));
}

#[test]
fn help_documents_the_canonical_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run(tmp.path(), &["train-mlp", "--help"]);
    assert_ok(&r);
    let help = stdout(&r);
    assert!(help.contains("0.8"), "learning-rate default missing");
    assert!(help.contains("0.7"), "momentum default missing");
    assert!(help.contains("10000"), "epoch default missing");

    let r = run(tmp.path(), &["extract", "--help"]);
    assert_ok(&r);
    let help = stdout(&r);
    assert!(help.contains("--shadow-depth"));
    assert!(help.contains("--run-depth"));

    let r = run(tmp.path(), &["train-svm", "--help"]);
    assert_ok(&r);
    assert!(stdout(&r).contains("1/204"));
}
