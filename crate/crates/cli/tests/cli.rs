use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poset-kraft")).args(args).env_remove("POSET_KRAFT_BUDGET").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn enumerate_line_counts() {
    for (args, lines) in [
        (&["enumerate", "--perm", "T", "--k", "3", "--l", "2"][..], 6),
        (&["enumerate", "--perm", "S", "--k", "1"], 1),
        (&["enumerate", "--str", "--r", "2", "--l", "3"], 8),
        (&["enumerate", "--perm", "T", "--k", "4"], 64),
        (&["enumerate", "--perm", "S", "--k", "4"], 33),
    ] {
        let out = run(args);
        assert!(out.status.success(), "{args:?}");
        assert_eq!(stdout(&out).lines().count(), lines, "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(&format!("{lines} elements")));
    }
    let out = run(&["enumerate", "--perm", "T", "--k", "3", "--l", "2"]);
    assert_eq!(stdout(&out), "12\n13\n21\n23\n31\n32\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["enumerate", "--k", "3"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--perm", "T", "--k", "2", "--l", "3"]).status.code(), Some(2));
    assert_eq!(run(&["regularity", "--strings", "--r", "2"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["regularity", "--perms", "--k", "3", "--relation", "pattern"]).status.code(), Some(2));
}

#[test]
fn check_free_verdicts() {
    let dir = TempDir::new().unwrap();
    let prefix = write(&dir, "p.json", r#"{"codomain": {"kind": "string", "r": 2}, "codewords": ["0","10","11"]}"#);
    assert_eq!(run(&["check-free", &prefix, "--relation", "prefix"]).status.code(), Some(0));
    let pattern = write(&dir, "q.json", r#"{"codomain": {"kind": "perm_pattern", "k": 2}, "codewords": ["1","21"]}"#);
    let out = run(&["check-free", &pattern, "--relation", "pattern"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("1 ≤ 21"));
    let single = write(&dir, "s.json", r#"{"codomain": {"kind": "partial_perm", "k": 6}, "codewords": ["253"]}"#);
    assert_eq!(run(&["check-free", &single, "--relation", "subsequence"]).status.code(), Some(0));
}

#[test]
fn constants_are_exact() {
    assert_eq!(stdout(&run(&["constants", "--params", "0,1,2", "--r", "2"])), "K = 1/1\n");
    assert_eq!(stdout(&run(&["constants", "--params", "0", "--r", "2"])), "K = 0/1\n");
    assert!(stdout(&run(&["constants", "--params", "0,0,1,3", "--k", "3"])).contains("P_S = 1/1"));
    assert_eq!(stdout(&run(&["constants", "--decimal", "--params", "0,1,1", "--r", "2"])), "K = 3/4 (0.75)\n");
    let out = run(&["kraft", "--params", "0,3", "--r", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("K = 3/2"));
}

#[test]
fn mcmillan_writes_a_code() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("code.json");
    let out = run(&["mcmillan", "--r", "2", "--params", "0,1,2", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{0,10,11}\n");
    let check = run(&["check-free", path.to_str().unwrap(), "--relation", "prefix"]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(run(&["mcmillan", "--params", "0,3"]).status.code(), Some(1));
}

#[test]
fn counterexamples() {
    for relation in ["subsequence", "substring"] {
        let out = run(&["counterexample", "--strings", "--r", "2", "--relation", relation, "--max-level", "2", "--level", "1"]);
        assert!(out.status.success(), "{relation}");
        let text = stdout(&out);
        assert!(text.contains("params: (1,2)") && text.contains("none-exists after 6"), "{text}");
    }
    let out = run(&["counterexample", "--strings", "--r", "2", "--relation", "prefix", "--max-level", "2", "--level", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("down-degree not > 1"));

    let out = run(&["--json", "counterexample", "--patterns", "--k", "3", "--relation", "pattern", "--level", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["params"], serde_json::json!([1, 3]));
    assert_eq!(v["certificate"], serde_json::json!({"exists": false, "search_nodes": 20}));
}

#[test]
fn budget_exceeded_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_poset-kraft"))
        .args(["counterexample", "--patterns", "--k", "3", "--relation", "pattern", "--level", "2"])
        .env("POSET_KRAFT_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["antichain-search", "--subsets", "--n", "4", "--counts", "1:2,2:3", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn antichain_search_and_lym() {
    let out = run(&["--json", "antichain-search", "--subsets", "--n", "4", "--counts", "2:6"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exists"], true);
    assert_eq!(v["antichain"].as_array().unwrap().len(), 6);

    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.json", &serde_json::to_string(&v).unwrap());
    assert_eq!(stdout(&run(&["lym", "--subsets", "--n", "4", "--antichain", &file])), "L = 1/1\nantichain\n");
    let empty = write(&dir, "e.json", "[]");
    assert_eq!(stdout(&run(&["lym", "--subsets", "--n", "4", "--antichain", &empty])), "L = 0/1\nantichain\n");
    let chain = write(&dir, "c.json", r#"[[1, "{1}"], [2, "{1,2}"]]"#);
    let out = run(&["lym", "--subsets", "--n", "4", "--antichain", &chain]);
    assert_eq!(out.status.code(), Some(1));

    let none = run(&["antichain-search", "--strings", "--r", "2", "--relation", "substring", "--max-level", "2", "--params", "0,1,2"]);
    assert_eq!(none.status.code(), Some(1));
    assert!(stdout(&none).contains("none-exists after 6"));
}

#[test]
fn local_lym_and_regularity() {
    let out = run(&["local-lym", "--perms", "--k", "3", "--relation", "subsequence", "--level", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all 63 nonempty subsets"));
    let out = run(&["local-lym", "--subsets", "--n", "3", "--level", "2", "{1,2}"]);
    assert!(stdout(&out).contains("2/3"));
    assert!(run(&["regularity", "--patterns", "--k", "4", "--relation", "substring-pattern"]).status.success());
}

#[test]
fn hasse_matches_the_square() {
    let out = run(&["hasse", "--subsets", "--n", "2"]);
    let dot = stdout(&out);
    assert_eq!(dot.matches("[label=").count(), 4);
    assert_eq!(dot.matches(" -> ").count(), 4);
    assert!(dot.contains("rankdir=BT"));
}

#[test]
fn poset_json_round_trips_through_files() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("poset.json");
    let p = path.to_str().unwrap();
    assert!(run(&["--json", "hasse", "--strings", "--r", "2", "--relation", "subsequence", "--max-level", "2", "--output", p]).status.success());
    assert!(Path::new(p).exists());
    let out = run(&["counterexample", "--poset", p, "--level", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("none-exists after 6"));
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "regularity", "--perms", "--k", "4", "--relation", "subsequence"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
