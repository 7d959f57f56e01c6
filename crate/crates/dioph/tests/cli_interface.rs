//! Exit codes and artifact round-trips of the command-line binary.

use std::path::Path;
use std::process::{Command, Output};

fn dioph(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn full_pipeline_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    // corpus emission
    let out = dioph(&["corpus", "--out-dir", "corpus"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("corpus/manifest.json").exists());
    assert!(d.join("corpus/sqrt2-m1n1.cfg").exists());

    // approx writes a sequence document
    let out = dioph(
        &[
            "approx",
            "--config",
            "corpus/sqrt2-m1n1.cfg",
            "--max-height",
            "200",
            "--out",
            "seq.json",
            "--csv",
            "seq.csv",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json = std::fs::read_to_string(d.join("seq.json")).unwrap();
    assert!(d.join("seq.csv").exists());

    // canonical round trip: read, reserialize, byte-identical
    let seq = dioph::bestapprox::sequence_from_json(&json).unwrap();
    assert_eq!(dioph::bestapprox::sequence_to_json(&seq), json);
    let heights: Vec<u64> = seq.records.iter().map(|r| r.height).collect();
    assert_eq!(heights, vec![1, 2, 5, 12, 29, 70, 169]);

    // verify passes, including against the oracle
    let out = dioph(
        &[
            "verify",
            "--config",
            "corpus/sqrt2-m1n1.cfg",
            "--sequence",
            "seq.json",
            "--against-oracle",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    // corrupt the document: verification fails with exit 1
    let corrupt = json.replace("\"nu\": 2", "\"nu\": 9");
    std::fs::write(d.join("corrupt.json"), corrupt).unwrap();
    let out = dioph(
        &["verify", "--config", "corpus/sqrt2-m1n1.cfg", "--sequence", "corrupt.json"],
        d,
    );
    assert_eq!(code(&out), 1);

    // exponents on the stored sequence
    let out = dioph(&["exponents", "--sequence", "seq.json", "--out", "exp.json"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    // analyze emits the structure report
    let out = dioph(&["analyze", "--sequence", "seq.json", "--out", "structure.json"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    // bounds: single point and grid
    let out = dioph(&["bounds", "--case", "m1n3", "--alpha", "0.5"], d);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0.5"), "{text}");
    assert!(text.contains("0.6403882"), "{text}");
    let out = dioph(&["bounds", "--case", "m2n2", "--grid", "1.01:2.6:5", "--csv", "b.csv"], d);
    assert_eq!(code(&out), 0);
    assert!(d.join("b.csv").exists());

    // configuration errors exit 2
    let out = dioph(&["approx", "--config", "missing.cfg"], d);
    assert_eq!(code(&out), 2);
    std::fs::write(d.join("bad.cfg"), "m = 1\nn = 1\nentry.1.1 = weird 3\n").unwrap();
    let out = dioph(&["approx", "--config", "bad.cfg"], d);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    let out = dioph(&["bounds", "--case", "m9n9", "--alpha", "1"], d);
    assert_eq!(code(&out), 2);
}

#[test]
fn theorem_verdicts_and_insufficient_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dioph(&["corpus", "--out-dir", "corpus"], d)), 0);

    // two-record data: estimation is impossible, exit 2
    let out = dioph(
        &["theorem", "--config", "corpus/quartic-m1n3.cfg", "--max-height", "2"],
        d,
    );
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));

    // honest run: satisfied, exit 0
    let out = dioph(
        &[
            "theorem",
            "--config",
            "corpus/quartic-m1n3.cfg",
            "--max-height",
            "20000",
            "--out",
            "verdict.json",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let verdict = std::fs::read_to_string(d.join("verdict.json")).unwrap();
    assert!(verdict.contains("\"satisfied\": true"), "{verdict}");

    // no bound for a 1x1 matrix
    let out = dioph(&["theorem", "--config", "corpus/sqrt2-m1n1.cfg"], d);
    assert_eq!(code(&out), 2);
}
