use std::path::Path;
use std::process::Command;
use std::time::Instant;

fn fixture() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/toy.csv")
}

fn run_pipeline(out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lingclass"))
        .args(["pipeline", "-i"])
        .arg(fixture())
        .arg("-o")
        .arg(out)
        .output()
        .expect("binary runs")
}

const REPORTS: &[&str] = &[
    "lexicon.csv",
    "encoded.csv",
    "clusters.csv",
    "members.csv",
    "train.csv",
    "test.csv",
    "history.csv",
    "model.csv",
    "model.config",
    "outcomes.csv",
    "confusion.csv",
    "summary.csv",
    "roc.csv",
];

#[test]
fn criterion_7_pipeline_end_to_end_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();

    let start = Instant::now();
    let out_a = run_pipeline(a.path());
    let elapsed = start.elapsed();
    assert!(
        out_a.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out_a.stderr)
    );
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    let stdout = String::from_utf8_lossy(&out_a.stdout);
    assert!(stdout.contains("held-out accuracy: "), "stdout: {stdout}");

    let out_b = run_pipeline(b.path());
    assert!(out_b.status.success());

    for name in REPORTS {
        let fa = std::fs::read(a.path().join(name)).unwrap_or_else(|_| panic!("{name} missing"));
        let fb = std::fs::read(b.path().join(name)).unwrap();
        assert!(!fa.is_empty(), "{name} empty");
        assert_eq!(fa, fb, "{name} differs between runs");
    }
    assert_eq!(out_a.stdout, out_b.stdout);
    println!(
        "PASS criterion 7: full pipeline produced {} byte-identical reports in {elapsed:?}",
        REPORTS.len()
    );
}
