//! End-to-end tests of the `ob` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const P2: &str = "level = 2\nchar = 0\nu = [0, 2]\nuprime = [0, 1]\n";

fn ob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ob")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn hom_dim_example() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_temp(&dir, "p2.cfg", P2);
    let o = ob(&["--config", cfg.to_str().unwrap(), "hom-dim", "--src", "", "--dst", "ud"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn bubble_example() {
    let o = ob(&["bubble", "--dots", "0", "--level", "1", "--u", "[1]", "--uprime", "[0]"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn verify_relations_on_p2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_temp(&dir, "p2.cfg", P2);
    let o = ob(&["--config", cfg.to_str().unwrap(), "verify-relations"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    let ids: std::collections::BTreeSet<String> =
        v["checks"].as_array().unwrap().iter().map(|c| c["relation"].as_str().unwrap().to_string()).collect();
    for k in 1..=11 {
        assert!(ids.contains(&format!("rel-{k}")));
    }
    for k in 1..=8 {
        assert!(ids.contains(&format!("dots-{k}")));
    }
}

#[test]
fn sampled_verification_is_seeded() {
    let args = ["verify-relations", "--sample", "3", "--seed", "5", "--format", "csv"];
    let a = ob(&args);
    let b = ob(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines = stdout(&a).lines().count();
    assert_eq!(lines, 1 + 3 * 20);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["hom-basis", "--src", "ud", "--dst", "ud", "--level", "2", "--u", "[0,2]", "--uprime", "[0,1]"][..],
        &["character", "--shape", "empty", "--max-len", "3"][..],
        &["commutator-check", "--truncation", "3"][..],
    ] {
        assert_eq!(ob(args).stdout, ob(args).stdout);
    }
}

/// Collects `(word, eigenvalues) -> count` from CSV rows whose last column
/// is the count.
fn csv_counts(text: &str, word_column: bool, word: &str) -> Vec<(String, String)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out: Vec<(String, String)> = r
        .records()
        .map(|rec| rec.unwrap())
        .filter(|rec| !word_column || &rec[0] == word)
        .map(|rec| {
            let n = rec.len();
            (rec[n - 2].to_string(), rec[n - 1].to_string())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn character_agrees_with_eigenprofile() {
    let params = ["--level", "1", "--u", "[1]", "--uprime", "[0]"];
    let mut args = vec!["character", "--shape", "empty", "--max-len", "4", "--format", "csv"];
    args.extend(params);
    let ch = stdout(&ob(&args));
    for n in 0..=4usize {
        for bits in 0..(1u32 << n) {
            let a: String = (0..n).map(|k| if bits >> k & 1 == 1 { 'd' } else { 'u' }).collect();
            let mut args = vec!["eigenprofile", "--src", "", "--dst", a.as_str(), "--format", "csv"];
            args.extend(params);
            let prof = stdout(&ob(&args));
            assert_eq!(csv_counts(&prof, false, &a), csv_counts(&ch, true, &a), "word {a:?}");
        }
    }
}

#[test]
fn normalize_and_compose_files() {
    let dir = tempfile::tempdir().unwrap();
    // Zigzag: a cup followed by a cap on the right collapses to the identity.
    let zig = write_temp(
        &dir,
        "zig.json",
        r#"{"src": "u", "layers": [{"pos": 1, "gen": "CupL"}, {"pos": 0, "gen": "CapL"}]}"#,
    );
    let o = ob(&["normalize", zig.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["src"], "u");
    assert_eq!(v["dst"], "u");
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    assert_eq!(v["terms"][0]["coeff"], "1");
    assert_eq!(v["terms"][0]["diagram"]["dots"], serde_json::json!([0]));

    // Cap after cup is the clockwise bubble δ_1 = u_1 − u'_1 = 1 under P1.
    let cup = write_temp(&dir, "cup.json", r#"{"src": "", "layers": [{"pos": 0, "gen": "CupR"}]}"#);
    let cap = write_temp(&dir, "cap.json", r#"{"src": "ud", "layers": [{"pos": 0, "gen": "CapL"}]}"#);
    let p1 = ["--u", "[1]", "--uprime", "[0]"];
    let mut morph = Vec::new();
    for (name, f) in [("cupm.json", &cup), ("capm.json", &cap)] {
        let mut args = vec!["normalize", f.to_str().unwrap()];
        args.extend(p1);
        morph.push(write_temp(&dir, name, &stdout(&ob(&args))));
    }
    let mut args = vec!["compose", morph[1].to_str().unwrap(), morph[0].to_str().unwrap()];
    args.extend(p1);
    let o = ob(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"][0]["coeff"], "1");
    assert_eq!(v["src"], "");
    assert_eq!(v["dst"], "");
}

#[test]
fn k_theory_commands() {
    let o = ob(&["k-apply", "--op", "f", "--residue", "0", "--shape", "empty", "--u", "[0]", "--uprime", "[5]"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    let o = ob(&["k-apply", "--op", "e", "--sector", "up", "--residue", "0", "--shape", "empty"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["terms"].as_array().unwrap().is_empty());
    let o = ob(&["commutator-check", "--u", "[0]", "--uprime", "[5]"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn semisimple_verdicts() {
    let run = |u: &str, up: &str, level: &str| {
        let o = ob(&["semisimple-check", "--level", level, "--u", u, "--uprime", up]);
        serde_json::from_str::<Value>(&stdout(&o)).unwrap()
    };
    assert_eq!(run("[0]", "[1/2]", "1")["semisimple"], true);
    let v = run("[0]", "[3]", "1");
    assert_eq!(v["semisimple"], false);
    assert_eq!(v["reasons"][0], "u_1 - u'_1 = -3 lies in Z·1");
    let v = run("[0, 1]", "[1/2, 7/3]", "2");
    assert_eq!(v["reasons"][0], "u_1 - u_2 = -1 is an integer");
}

#[test]
fn other_commands_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_temp(&dir, "p2.cfg", P2);
    let c = cfg.to_str().unwrap();
    let o = ob(&["--config", c, "corner", "--dst", "ud"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 4);
    let o = ob(&["--config", c, "hecke-check", "--r", "2", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = ob(&["--config", c, "std-dim", "--shape", "empty", "--dst", "ud"]);
    assert_eq!(stdout(&o), "2\n");
    let o = ob(&["paths", "--shape", "[[], [[1]]]", "--max-len", "3", "--format", "csv"]);
    assert!(stdout(&o).starts_with("word,colors,steps\n"));
    let o = ob(&["--config", c, "orbits"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["algebra"], "1 copy of sl_inf");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ob(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ob(&["hom-dim", "--src", "x"]).status.code(), Some(2));
    assert_eq!(ob(&["std-dim", "--shape", "[[", "--dst", "u"]).status.code(), Some(2));
    assert_eq!(ob(&["normalize", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(ob(&["hom-dim", "--dst", "uuuuudddd"]).status.code(), Some(2));
    assert_eq!(ob(&["--level", "2", "orbits"]).status.code(), Some(2));
}
