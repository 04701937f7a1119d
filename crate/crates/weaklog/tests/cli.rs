use std::path::Path;
use std::process::{Command, Output};

fn weaklog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weaklog")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn split_axiom_holds_and_its_substitution_instance_fails() {
    let ok = weaklog(&["entail", "--logic", "inqb", "--phi", "(p0->(p1|p2))->((p0->p1)|(p0->p2))"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let bad = weaklog(&["entail", "--logic", "inqb", "--phi", "((p1|p2)->(p1|p2))->(((p1|p2)->p1)|((p1|p2)->p2))"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("counter-team"), "{}", stdout(&bad));

    let j = weaklog(&["--json", "entail", "--logic", "inqb", "--phi", "p0 | ~p0"]);
    assert_eq!(j.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["holds"], false);
    assert!(!v["team"].as_array().unwrap().is_empty());
}

#[test]
fn kripke_entailment_reports_a_countermodel() {
    let o = weaklog(&["--json", "entail", "--logic", "inqi", "--phi", "~~p0 -> p0", "--frame-size", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["countermodel"]["points"], 2);
    let o = weaklog(&["entail", "--logic", "inqi", "--gamma", "p0", "--gamma", "p0 -> p1", "--phi", "p1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn medvedev_cap_is_a_resource_error() {
    assert_eq!(weaklog(&["gen-medvedev", "--s", "5"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(weaklog(&["entail", "--phi", "p0 ->"]).status.code(), Some(2));
    assert_eq!(weaklog(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(weaklog(&["reduce", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn parse_and_normal_form() {
    let o = weaklog(&["parse", "p0 & (p1 | bot)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("size 5"), "{}", stdout(&o));
    let o = weaklog(&["--json", "nf", "(p0 | p1) & (p2 | bot)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["disjuncts"].as_array().unwrap().len(), 4);
}

#[test]
fn medvedev_files_drive_core_entailment_and_algebraizability() {
    let dir = tempfile::tempdir().unwrap();
    for s in 1..=3 {
        let out = dir.path().join(format!("m{s}.json"));
        let o = weaklog(&["gen-medvedev", "--s", &s.to_string(), "--regular", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let algs = dir.path().to_str().unwrap();
    let o = weaklog(&["entail-core", "--algebras", algs, "--conclusion", "~~p0 -> p0 = bot -> bot"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = weaklog(&["entail-core", "--algebras", algs, "--conclusion", "p0 | ~p0 = bot -> bot"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = weaklog(&["check-alg", "--algebras", algs]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let other = tempfile::tempdir().unwrap();
    let pair = other.path().join("pair.json");
    std::fs::write(&pair, r#"{"tau": ["_phi = bot -> bot"], "delta": ["_x"]}"#).unwrap();
    let o = weaklog(&["check-alg", "--algebras", algs, "--pair", pair.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn derivations_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.proof");
    std::fs::write(
        &good,
        "p0 -> ((p0 -> p0) -> p0) ; axiom A1\n\
         (p0 -> ((p0 -> p0) -> p0)) -> ((p0 -> (p0 -> p0)) -> (p0 -> p0)) ; axiom A2\n\
         (p0 -> (p0 -> p0)) -> (p0 -> p0) ; mp 1 2\n\
         p0 -> (p0 -> p0) ; axiom A1\n\
         p0 -> p0 ; mp 4 3\n",
    )
    .unwrap();
    let o = weaklog(&["check-proof", good.to_str().unwrap(), "--conclusion", "p0 -> p0"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let bad = dir.path().join("bad.proof");
    std::fs::write(&bad, "p0 | ~p0 ; axiom A6\n").unwrap();
    assert_eq!(weaklog(&["check-proof", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn reduce_and_export_horn() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    // three-element chain with truth {2}; 0 and 1 are separated by imp only through the core
    std::fs::write(
        &m,
        r#"{"sig": ["bot", "and", "or", "imp"], "size": 3,
            "tables": {"bot": 0,
                       "and": [[0,0,0],[0,1,1],[0,1,2]],
                       "or":  [[0,1,2],[1,1,2],[2,2,2]],
                       "imp": [[2,2,2],[0,2,2],[0,1,2]]},
            "truth": [2], "core": [0, 2]}"#,
    )
    .unwrap();
    let o = weaklog(&["--json", "reduce", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["from"], 3);
    assert_eq!(v["to"], 3);

    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden/horn_corpus.txt");
    let o = weaklog(&["export-horn", corpus.to_str().unwrap(), "--weak"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), weaklog::suite::HORN_WEAK);
}

#[test]
fn suite_runs_selected_criteria() {
    let o = weaklog(&["--threads", "2", "suite", "--criterion", "1", "--criterion", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    assert_eq!(weaklog(&["suite", "--criterion", "11"]).status.code(), Some(2));
}
