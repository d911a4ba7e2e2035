//! End-to-end tests against the built binary: flag surface, exit codes,
//! cache behavior, output determinism.

use std::path::Path;
use std::process::{Command, Output};

fn padj(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padj"))
        .args(args)
        .env_remove("PADJ_CACHE_DIR")
        .args(["--cache-dir", cache.to_str().unwrap()])
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn tables_type2_small() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(&["tables", "--type", "2", "--n-max", "2"], dir.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n,k,count\n2,0,1\n2,1,0\n2,2,1\n");
}

#[test]
fn tables_type1_row14_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(
        &["tables", "--type", "1", "--n-max", "14", "--check", "tanny"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("14,0,34361893981\n"));

    let out = padj(
        &["tables", "--type", "2", "--n-max", "14", "--check", "whitworth"],
        dir.path(),
    );
    assert!(out.status.success());

    let out = padj(
        &["tables", "--type", "4", "--n-max", "6", "--check", "oracle"],
        dir.path(),
    );
    assert!(out.status.success());

    // check/type mismatches are usage errors
    let out = padj(
        &["tables", "--type", "2", "--n-max", "6", "--check", "tanny"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tables_markdown_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(
        &["tables", "--type", "4", "--n-max", "5", "--format", "markdown"],
        dir.path(),
    );
    assert!(stdout(&out).starts_with("| n\\k |"));
    let out = padj(
        &["tables", "--type", "1", "--n-max", "5", "--format", "json"],
        dir.path(),
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["rows"][3]["counts"][0], "53");
}

#[test]
fn distances_match_published_cells_and_cache_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = padj(&["distances", "--move", "pt", "--n", "5"], dir.path());
    assert!(first.status.success());
    let text = stdout(&first);
    assert!(text.contains("5,0,44,3.09"), "{text}");
    assert!(dir.path().join("pt-n05.padj").exists());
    // second run reads the cache and must emit identical bytes
    let second = padj(&["distances", "--move", "pt", "--n", "5"], dir.path());
    assert_eq!(first.stdout, second.stdout);
    // as must a multi-worker rebuild in a fresh directory
    let dir2 = tempfile::tempdir().unwrap();
    let third = padj(
        &["distances", "--move", "pt", "--n", "5", "--workers", "4"],
        dir2.path(),
    );
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn distances_small_and_transposition_diameter() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(&["distances", "--move", "pt", "--n", "2"], dir.path());
    assert!(stdout(&out).contains("2,0,1,1.00"));
    let out = padj(
        &["distances", "--move", "t", "--n", "5", "--format", "json"],
        dir.path(),
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["diameter"], 3); // reverse order sorts in ceil((n+1)/2) moves
}

#[test]
fn corrupt_cache_rebuilds_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let good = padj(&["distances", "--move", "pt", "--n", "4"], dir.path());
    let path = dir.path().join("pt-n04.padj");
    std::fs::write(&path, b"PADJgarbage").unwrap();
    let out = padj(&["distances", "--move", "pt", "--n", "4"], dir.path());
    assert!(out.status.success());
    assert_eq!(out.stdout, good.stdout);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rebuilding corrupt cache entry"));
    // the rebuilt file is valid again
    let again = padj(&["distances", "--move", "pt", "--n", "4"], dir.path());
    assert!(String::from_utf8_lossy(&again.stderr).is_empty());
}

#[test]
fn cache_dir_env_var_is_honored_and_flag_beats_it() {
    let env_dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_padj"))
        .args(["distances", "--move", "st", "--n", "3"])
        .env("PADJ_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(env_dir.path().join("st-n03.padj").exists());

    let flag_dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_padj"))
        .args(["distances", "--move", "st", "--n", "4"])
        .env("PADJ_CACHE_DIR", env_dir.path())
        .args(["--cache-dir", flag_dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag_dir.path().join("st-n04.padj").exists());
    assert!(!env_dir.path().join("st-n04.padj").exists());
}

#[test]
fn sort_examples_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(&["sort", "--move", "pt", "--perm", "1,0"], dir.path());
    assert!(stdout(&out).contains("optimal moves: 1"));

    let out = padj(&["sort", "--move", "pt", "--perm", "0,1,2"], dir.path());
    assert!(stdout(&out).contains("optimal moves: 0"));

    // optimal length equals the table entry
    let out = padj(
        &["sort", "--move", "pt", "--perm", "4,2,1,3,0", "--format", "json"],
        dir.path(),
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["length"], 3);

    // parse failure is a usage error
    let out = padj(&["sort", "--move", "pt", "--perm", "1,1"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    // past the solver cap is a resource refusal
    let out = padj(
        &[
            "sort",
            "--move",
            "pt",
            "--perm",
            "12,11,10,9,8,7,6,5,4,3,2,1,0",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sort_past_table_reach_uses_the_deepening_solver() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(
        &[
            "sort",
            "--move",
            "pt",
            "--perm",
            "9,4,1,8,3,6,0,5,2,7",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["length"].as_u64().unwrap() >= 5);
}

#[test]
fn verify_passes_at_small_n_and_refuses_large() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(&["verify", "--n", "4", "--move", "pt"], dir.path());
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("all properties hold at n=4"));

    let out = padj(&["verify", "--n", "3", "--move", "t"], dir.path());
    assert!(out.status.success());

    let out = padj(&["verify", "--n", "12"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle limit"));
}

#[test]
fn estimate_single_limit_and_replica() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(
        &["estimate", "--move", "pt", "--limit", "6", "--n-max", "16"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,base,expected,source\n"));
    assert!(text.contains("6,3.68,3.06,computed"));
    assert!(text.contains("16,10.00,9.34,predicted"));

    // suffix run must reproduce the prefix numbers (mirror symmetry)
    let st = padj(
        &["estimate", "--move", "st", "--limit", "6", "--n-max", "16"],
        dir.path(),
    );
    assert_eq!(out.stdout, st.stdout);

    // replica table: computed column and prediction columns end where
    // search ends
    let out = padj(
        &[
            "estimate", "--move", "pt", "--replica", "3", "--n-max", "10",
            "--search-limit", "7",
        ],
        dir.path(),
    );
    let text = stdout(&out);
    assert!(text.starts_with("n,computed,pred_i6,pred_i7\n"), "{text}");
    assert!(text.contains("\n8,,4.80,4.83"), "{text}");

    // transpositions are outside the model
    let out = padj(
        &["estimate", "--move", "t", "--limit", "6", "--n-max", "10"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = padj(&["tables", "--type", "7", "--n-max", "5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = padj(&["distances", "--move", "zz", "--n", "4"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = padj(&["tables"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = Command::new(env!("CARGO_BIN_EXE_padj"))
        .arg("--help")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("tables"));
}
