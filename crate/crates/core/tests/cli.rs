use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn kfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kfrac")).args(args).output().expect("spawn kfrac")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// `(command line, expected stdout)` for every golden case, sorted by name.
fn golden_cases() -> Vec<(String, String)> {
    let mut names: Vec<PathBuf> = fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cmd"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|p| {
            let cmd = fs::read_to_string(&p).unwrap().trim_end().to_string();
            let out = fs::read_to_string(p.with_extension("out")).unwrap();
            (cmd, out)
        })
        .collect()
}

/// Console blocks of the README as `(command line, shown output)`.
fn readme_examples() -> Vec<(String, String)> {
    let readme = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap();
    let mut out = Vec::new();
    let mut rest = readme.as_str();
    while let Some(start) = rest.find("```console\n") {
        let body = &rest[start + "```console\n".len()..];
        let end = body.find("```").expect("unterminated console block");
        let block = &body[..end];
        let (first, shown) = block.split_once('\n').unwrap_or((block, ""));
        let cmd = first.strip_prefix("$ ").expect("console block starts with a prompt");
        out.push((cmd.to_string(), shown.to_string()));
        rest = &body[end + 3..];
    }
    out
}

fn argv(cmd: &str) -> Vec<&str> {
    let mut words = cmd.split_whitespace();
    assert_eq!(words.next(), Some("kfrac"));
    words.collect()
}

#[test]
fn golden_outputs_match() {
    let cases = golden_cases();
    assert!(cases.len() >= 3);
    for (cmd, expected) in cases {
        let out = kfrac(&argv(&cmd));
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{cmd}");
    }
}

#[test]
fn every_readme_example_has_a_golden_file() {
    let golden = golden_cases();
    let examples = readme_examples();
    assert!(!examples.is_empty());
    for (cmd, shown) in &examples {
        let hit = golden.iter().find(|(c, _)| c == cmd);
        let (_, expected) = hit.unwrap_or_else(|| panic!("no golden file for README example `{cmd}`"));
        assert_eq!(shown, expected, "README output for `{cmd}` differs from its golden file");
    }
    assert_eq!(examples.len(), golden.len(), "golden files without a README example");
}

#[test]
fn documented_examples() {
    let out = kfrac(&["approx", "--theta", "1/8", "--n", "2", "--k", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["error_num"].as_u64(), v["error_den"].as_u64()), (Some(1), Some(8)));

    let out = kfrac(&["lcmset", "--n", "4", "--k", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().skip(1).count(), 6);

    let out = kfrac(&["approx", "--theta", "0", "--n", "9", "--k", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error_num"].as_u64(), Some(0));
}

#[test]
fn exit_codes_and_stderr() {
    let bad_theta = kfrac(&["approx", "--theta", "one half", "--n", "3"]);
    assert_eq!(bad_theta.status.code(), Some(1));
    assert!(bad_theta.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad_theta.stderr).starts_with("error: invalid input"));

    assert_eq!(kfrac(&["approx", "--theta", "1/3", "--n", "3", "--colour"]).status.code(), Some(1));
    assert_eq!(kfrac(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(kfrac(&["sweep", "--k", "1", "--grid", "4,8"]).status.code(), Some(1));
    assert_eq!(kfrac(&["ck", "--k", "2", "--grid", "8", "--theta", "worst"]).status.code(), Some(1));
    assert_eq!(kfrac(&["approx", "--theta", "1/3", "--n", "3", "--k", "2", "--method", "dirichlet"]).status.code(), Some(1));

    let refused = kfrac(&["lemma1", "--k", "3", "--grid", "500", "--budget", "1000"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("resource refusal"));

    let help = kfrac(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("approx"));
    assert_eq!(kfrac(&["--version"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_result_and_metadata() {
    let dir = std::env::temp_dir().join(format!("kfrac-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.csv");
    let path_str = path.to_str().unwrap();
    let out = kfrac(&["lcmset", "--k", "2", "--grid", "3,4", "--out", path_str]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), "N,k,size,ratio\n3,2,4,0.4444444444444444\n4,2,6,0.375\n");

    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("census.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["tool"], "kfrac");
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["args"][0], "lcmset");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_never_changes_bytes() {
    let commands: [&[&str]; 4] = [
        &["sweep", "--k", "2", "--grid", "8,16,32", "--samples", "25", "--seed", "99"],
        &["ck", "--k", "2", "--grid", "8,16,32", "--samples", "25", "--seed", "99"],
        &["lcmset", "--n", "40", "--k", "3"],
        &["refute", "--k", "2", "--grid", "16,64,256"],
    ];
    for args in commands {
        let single = kfrac(&[args, &["--threads", "1"]].concat());
        let many = kfrac(&[args, &["--threads", "6"]].concat());
        assert!(single.status.success(), "{args:?}");
        assert_eq!(single.stdout, many.stdout, "{args:?}");
    }
}

#[test]
fn json_and_csv_agree_for_approx() {
    let json = kfrac(&["approx", "--theta", "5/17", "--n", "6", "--k", "2"]);
    let csv = kfrac(&["approx", "--theta", "5/17", "--n", "6", "--k", "2", "--format", "csv"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let csv = String::from_utf8(csv.stdout).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], v["error_num"].to_string());
    assert_eq!(row[4], v["error_den"].to_string());
    assert_eq!(row[6], v["L"].to_string());
}

#[test]
fn methods_agree_on_k1() {
    for theta in ["3/11", "golden", "0.7071", "-5/3"] {
        let errors: Vec<(String, String)> = ["lcm", "brute"]
            .iter()
            .map(|m| {
                let out = kfrac(&["approx", "--theta", theta, "--n", "13", "--k", "1", "--method", m]);
                let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
                (v["error_num"].to_string(), v["error_den"].to_string())
            })
            .collect();
        assert_eq!(errors[0], errors[1], "{theta}");
    }
}
