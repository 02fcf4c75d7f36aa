use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_dnagolay");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fasta_records(path: &Path) -> Vec<(String, String)> {
    let text = fs::read_to_string(path).unwrap();
    let mut out: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        if let Some(t) = line.strip_prefix('>') {
            out.push((t.to_string(), String::new()));
        } else {
            out.last_mut().unwrap().1.push_str(line);
        }
    }
    out
}

fn setup(content: &[u8]) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("in.bin"), content).unwrap();
    dir
}

#[test]
fn encode_reports_layout() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("da"), b"DA").unwrap();
    let o = run(
        dir.path(),
        &["encode", "--in", "da", "--out", "da.fa", "--report", "r.json"],
    );
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    // "DA;2,;" is six codewords: 66 payload bases in one chunk with a 4-base header.
    assert!(
        s.contains("bases: 70") && s.contains("chunks: 1") && s.contains("mu: 1"),
        "{s}"
    );
    assert!(s.contains("cost_usd: 3.50"));
    let recs = fasta_records(&dir.path().join("da.fa"));
    assert_eq!(recs.len(), 1);
    assert!(recs[0].1.starts_with("CATGATGAGCGACTCTACGACT"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["total_bases"], 70);
}

#[test]
fn empty_file_gives_one_metadata_chunk() {
    let dir = setup(b"");
    let o = run(dir.path(), &["encode", "--in", "in.bin", "--out", "e.fa"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fasta_records(&dir.path().join("e.fa")).len(), 1);
    let o = run(dir.path(), &["decode", "--in", "e.fa", "--out", "back"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(dir.path().join("back")).unwrap(), b"");
}

#[test]
fn usage_errors_exit_2() {
    let dir = setup(b"DA");
    for args in [
        vec!["encode", "--in", "in.bin", "--out", "x.fa", "--file-id", "9"],
        vec!["encode", "--in", "in.bin", "--out", "x.fa", "--chunk-bases", "100"],
        vec![
            "corrupt", "--in", "x.fa", "--out", "y.fa", "--count", "1", "--rate", "0.1", "--seed", "1",
        ],
        vec!["corrupt", "--in", "x.fa", "--out", "y.fa", "--seed", "1"],
        vec!["construct", "--family", "9,256"],
        vec!["capacity", "--l", "100"],
        vec!["simulate", "--in", "in.bin", "--grid", "flips=2", "--seed", "1"],
        vec!["frobnicate"],
    ] {
        assert_eq!(code(&run(dir.path(), &args)), 2, "{args:?}");
    }
    fs::write(dir.path().join("x.fa"), ">a\nCATGATGAGCGCGTA\n").unwrap();
    let o = run(
        dir.path(),
        &[
            "corrupt",
            "--in",
            "x.fa",
            "--out",
            "y.fa",
            "--count",
            "12",
            "--seed",
            "1",
            "--chunk-bases",
            "11",
        ],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn io_errors_exit_3() {
    let dir = setup(b"DA");
    assert_eq!(
        code(&run(dir.path(), &["encode", "--in", "missing", "--out", "x.fa"])),
        3
    );
    assert_eq!(
        code(&run(dir.path(), &["decode", "--in", "missing.fa", "--out", "x"])),
        3
    );
    fs::write(dir.path().join("bad.fa"), ">a\nACGTN\n").unwrap();
    assert_eq!(code(&run(dir.path(), &["decode", "--in", "bad.fa", "--out", "x"])), 3);
    assert_eq!(
        code(&run(
            dir.path(),
            &["encode", "--in", "in.bin", "--out", "no/such/dir/x.fa"]
        )),
        3
    );
}

#[test]
fn clean_channel_pipeline_is_identity() {
    let content: Vec<u8> = (0..20_000u32)
        .map(|i| (i.wrapping_mul(2_654_435_761) >> 13) as u8)
        .collect();
    let dir = setup(&content);
    let p = dir.path();
    assert_eq!(
        code(&run(
            p,
            &["encode", "--in", "in.bin", "--out", "a.fa", "--file-id", "4"]
        )),
        0
    );
    assert_eq!(
        code(&run(
            p,
            &["corrupt", "--in", "a.fa", "--out", "b.fa", "--count", "0", "--seed", "1"]
        )),
        0
    );
    assert_eq!(fs::read(p.join("a.fa")).unwrap(), fs::read(p.join("b.fa")).unwrap());
    let o = run(p, &["decode", "--in", "b.fa", "--out", "out.bin", "--report", "r.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(p.join("out.bin")).unwrap(), content);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(p.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["file_id"], 4);
    assert_eq!(report["extension"], "bin");
    assert_eq!(report["complete"], true);
}

#[test]
fn one_substitution_per_codeword_is_corrected() {
    let content: Vec<u8> = (0..3000u32).map(|i| (i * 7 % 251) as u8).collect();
    let dir = setup(&content);
    let p = dir.path();
    run(p, &["encode", "--in", "in.bin", "--out", "a.fa"]);
    let o = run(
        p,
        &[
            "corrupt", "--in", "a.fa", "--out", "b.fa", "--count", "1", "--seed", "99",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_ne!(fs::read(p.join("a.fa")).unwrap(), fs::read(p.join("b.fa")).unwrap());
    // Titles survive corruption.
    let titles = |f: &str| fasta_records(&p.join(f)).into_iter().map(|r| r.0).collect::<Vec<_>>();
    assert_eq!(titles("a.fa"), titles("b.fa"));
    let o = run(p, &["decode", "--in", "b.fa", "--out", "out.bin"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("parity_failures: 0"));
    assert_eq!(fs::read(p.join("out.bin")).unwrap(), content);
}

#[test]
fn missing_chunk_gives_partial_output() {
    let content = vec![b'x'; 500];
    let dir = setup(&content);
    let p = dir.path();
    run(p, &["encode", "--in", "in.bin", "--out", "a.fa"]);
    let recs = fasta_records(&p.join("a.fa"));
    let kept: String = recs
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != 1)
        .map(|(_, (t, s))| format!(">{t}\n{s}\n"))
        .collect();
    fs::write(p.join("gap.fa"), kept).unwrap();
    let o = run(
        p,
        &["decode", "--in", "gap.fa", "--out", "out.bin", "--report", "r.json"],
    );
    assert_eq!(code(&o), 1);
    assert!(!p.join("out.bin").exists());
    let partial = fs::read(p.join("out.bin.partial")).unwrap();
    assert_eq!(partial.len(), content.len());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(p.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["unrecoverable_chunks"], serde_json::json!([1]));
}

#[test]
fn verify_code_defaults_to_built_in_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["verify-code", "--subcode-distance", "6", "--report", "v.json"],
    );
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("min_distance: 5") && s.contains("holds: true"), "{s}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("reassigned to missing byte 85"));
    let o = run(dir.path(), &["verify-code", "--family", "11,256,6"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violations: 895"));
}

#[test]
fn construct_then_verify_list() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = run(
        p,
        &[
            "construct",
            "--family",
            "9,256,3",
            "--out",
            "c.txt",
            "--report",
            "c.json",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(p.join("c.txt")).unwrap().lines().count(), 256);
    let o = run(p, &["verify-code", "--codebook", "c.txt", "--family", "9,256,3"]);
    assert_eq!(code(&o), 0);
    let o = run(p, &["construct", "--family", "5,256,3", "--out", "small.txt"]);
    assert_eq!(code(&o), 1);
    let o = run(
        p,
        &[
            "construct",
            "--family",
            "9,40,3",
            "--order",
            "random",
            "--seed",
            "3",
            "--out",
            "r.txt",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(p.join("r.txt")).unwrap().lines().count(), 40);
}

#[test]
fn custom_codebook_round_trip() {
    let dir = setup(b"custom codebook");
    let p = dir.path();
    let table = dnagolay::codebook::STANDARD_TABLE;
    fs::write(p.join("table.txt"), table).unwrap();
    run(
        p,
        &["encode", "--in", "in.bin", "--out", "a.fa", "--codebook", "table.txt"],
    );
    let o = run(
        p,
        &["decode", "--in", "a.fa", "--out", "out", "--codebook", "table.txt"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(p.join("out")).unwrap(), b"custom codebook");
    fs::write(p.join("broken.txt"), "0 0000 0\n").unwrap();
    assert_eq!(
        code(&run(
            p,
            &["encode", "--in", "in.bin", "--out", "b.fa", "--codebook", "broken.txt"]
        )),
        3
    );
}

#[test]
fn capacity_printout() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["capacity", "--l", "99", "--N", "11", "--report", "c.json"],
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("exabytes_per_gram: 115."), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    assert!(v["literal_bytes_per_gram"].as_f64().unwrap() > 3e20);
}

#[test]
fn simulate_and_cost_tables() {
    let dir = setup(&[7u8; 400]);
    let p = dir.path();
    let o = run(
        p,
        &[
            "simulate",
            "--in",
            "in.bin",
            "--grid",
            "count=0,count=1",
            "--trials",
            "5",
            "--seed",
            "3",
            "--csv",
            "s.csv",
            "--threads",
            "2",
        ],
    );
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(p.join("s.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("channel,seed,trials,byte_accuracy"));
    assert!(lines.next().unwrap().starts_with("count=0,3,5,1.0,0.0,1.0"));
    assert!(lines.next().unwrap().starts_with("count=1,3,5,1.0,0.0,1.0"));

    let o = run(p, &["cost", "--sizes", "0,1024", "--csv", "c.csv"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(p.join("c.csv")).unwrap();
    assert!(csv.lines().nth(2).unwrap().starts_with("1024,115,5,12261,613.05"));
}
