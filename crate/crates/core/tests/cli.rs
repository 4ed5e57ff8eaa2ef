use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn datr(theory: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_datr"))
        .env_remove("DATR_MAX_PATH_LEN")
        .arg("--theory")
        .arg(fixture(theory))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_summary_and_paths() {
    let o = datr("nouns.dtr", &["check"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.starts_with("4 nodes, 12 sentences, 12 rules\n"),
        "{out}"
    );
    assert!(out.contains("Sheep: <> <affix plur> <root>"));
}

#[test]
fn check_dump_rules() {
    let o = datr("nouns.dtr", &["check", "--dump-rules"]);
    let out = stdout(&o);
    let rules: Vec<&str> = out.lines().filter(|l| l.starts_with('[')).collect();
    assert_eq!(rules.len(), 12);
    assert!(rules.contains(
        &"[Noun, <orth>, {}, N', P'] -> [N', <root>, {}, N', <root>] [N', <affix>, {}, N', <affix>]"
    ));
    assert!(rules.contains(&"[Noun, <affix sing>, {<gen>}, N', P'] -> ε"));
}

#[test]
fn check_json_has_explicit_variables() {
    let o = datr("nouns.dtr", &["--format", "json", "check", "--dump-rules"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sentences"], 12);
    assert_eq!(v["productions"].as_array().unwrap().len(), 12);
    assert_eq!(v["productions"][0]["lhs"]["global_node"]["Var"], 2);
}

#[test]
fn duplicate_lhs_is_a_theory_error() {
    let o = datr("duplicate.dtr", &["check"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("duplicate definition of Noun:<orth>"));
}

#[test]
fn syntax_error_reports_position() {
    let dir = std::env::temp_dir().join(format!("datr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.dtr");
    std::fs::write(&file, "N:\n  <a> == x\n  <b> = y.\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_datr"))
        .arg("--theory")
        .arg(&file)
        .arg("check")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("3:"), "{}", stderr(&o));
}

#[test]
fn missing_theory_file() {
    let o = datr("no-such-file.dtr", &["check"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn forward_queries() {
    let o = datr(
        "nouns.dtr",
        &[
            "query",
            "Sheep:<orth plur>",
            "Foot:<root plur>",
            "House:<orth plur>",
            "Sheep:<orth>",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "sheep\nfeet\nhouse s\nUNDEFINED\n");
}

#[test]
fn forward_query_json_and_trace() {
    let o = datr(
        "nouns.dtr",
        &[
            "--format",
            "json",
            "--trace",
            "forward",
            "query",
            "Sheep:<orth>",
        ],
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["status"], "Undefined");
    assert_eq!(v[0]["query"], "Sheep:<orth>");
    let steps: Vec<serde_json::Value> = stderr(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(steps[0]["node"], "Sheep");
    assert!(steps.iter().any(|s| s["sentence"].is_null()));
}

#[test]
fn cycle_reports_limit() {
    let o = datr("lengthening_cycle.dtr", &["query", "N:<a>"]);
    assert_eq!(stdout(&o), "LIMIT\n");
}

#[test]
fn malformed_query_is_usage_error() {
    let o = datr("nouns.dtr", &["query", "sheep"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let o = Command::new(env!("CARGO_BIN_EXE_datr"))
        .arg("check")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = datr("nouns.dtr", &["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = datr("nouns.dtr", &["--max-path-len", "0", "check"]);
    assert_eq!(o.status.code(), Some(2));
    let o = datr("nouns.dtr", &["rquery"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reverse_sheep() {
    let o = datr("nouns.dtr", &["rquery", "sheep"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "Sheep:<orth plur>+…\nSheep:<orth sing>+… !{<gen>}\nSheep:<root>+…\n"
    );
}

#[test]
fn reverse_house_s_json() {
    let o = datr("nouns.dtr", &["--format", "json", "rquery", "house", "s"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let answers = v["outcome"]["answers"].as_array().unwrap();
    let paths: Vec<String> = answers
        .iter()
        .map(|a| {
            let atoms: Vec<&str> = a["path"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap())
                .collect();
            format!("{}:<{}>", a["node"].as_str().unwrap(), atoms.join(" "))
        })
        .collect();
    assert_eq!(paths, vec!["House:<orth plur>", "House:<orth sing gen>"]);
    assert_eq!(answers[0]["open"], true);
    assert_eq!(v["outcome"]["suppressed"], 0);
}

#[test]
fn reverse_unknown_atom_warns() {
    let o = datr("nouns.dtr", &["rquery", "zzz"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn reverse_empty_value() {
    let o = datr("nouns.dtr", &["rquery", "--empty"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Sheep:<affix plur>+…\n"));
}

#[test]
fn reverse_chart_trace_is_jsonl() {
    let o = datr("nouns.dtr", &["--trace", "chart", "rquery", "feet"]);
    let lines: Vec<&str> = std::str::from_utf8(&o.stderr).unwrap().lines().collect();
    assert!(!lines.is_empty());
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert!(first["proc"].is_string());
    assert!(first["chart_size"].is_number());
}

#[test]
fn reverse_output_is_stable() {
    let a = stdout(&datr("nouns.dtr", &["rquery", "foot"]));
    let b = stdout(&datr("nouns.dtr", &["rquery", "foot"]));
    assert_eq!(a, b);
    assert!(a.contains("Foot:<orth sing>+… !{<gen>}"));
}

#[test]
fn env_overrides_path_bound() {
    let o = Command::new(env!("CARGO_BIN_EXE_datr"))
        .env("DATR_MAX_PATH_LEN", "3")
        .arg("--theory")
        .arg(fixture("shortening_cycle.dtr"))
        .args(["query", "N:<a a>"])
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "UNDEFINED\n");
    let o = Command::new(env!("CARGO_BIN_EXE_datr"))
        .env("DATR_MAX_PATH_LEN", "1")
        .arg("--theory")
        .arg(fixture("nouns.dtr"))
        .args(["query", "House:<orth plur>"])
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "LIMIT\n");
}

#[test]
fn crosscheck_passes() {
    let o = datr("nouns.dtr", &["crosscheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("enumerated: 6220"));
    assert!(out.contains("violations: 0"));
    assert!(out.contains("misses: 0"));
}

#[test]
fn crosscheck_empty_paths_only() {
    let o = datr(
        "nouns.dtr",
        &["--format", "json", "crosscheck", "--max-len", "0"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["enumerated"], 4);
    assert_eq!(v["defined"], 0);
}

#[test]
fn crosscheck_excludes_limit_queries() {
    let o = datr("lengthening_cycle.dtr", &["crosscheck"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("excluded (limit): 4"));
}
