use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reciprocity"))
        .args(args)
        .env_remove("RECIPROCITY_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exited normally")
}

#[test]
fn golden_values() {
    assert_eq!(stdout(&["hilbert", "3", "7", "--place", "2"]), "-1\n");
    assert_eq!(stdout(&["weil", "1", "--place", "inf"]), "zeta8^1\n");
    assert_eq!(stdout(&["kashiwara", "inf", "5", "0"]), "5\n");
    assert_eq!(stdout(&["kashiwara", "0", "1", "2", "--place", "inf"]), "-2\nphase at inf: zeta8^7\n");
    assert_eq!(stdout(&["kappa", "0", "2", "1"]), "1\n");
    assert_eq!(stdout(&["legendre", "-1", "7"]), "-1\n");
    assert_eq!(stdout(&["jacobi", "2", "15"]), "1\n");
    assert_eq!(stdout(&["gauss", "1", "3"]), "[1, 2] (order 3)\n");
    assert_eq!(stdout(&["hilbert", "3", "5", "--all-places"]), "inf: 1\n2: 1\n3: -1\n5: -1\n");
    assert_eq!(stdout(&["defect", "-1", "-1", "--all-places"]), "inf: zeta8^4\n2: zeta8^4\n");
    assert_eq!(stdout(&["hilbert", "3/4", "7", "--place", "2", "--method", "oracle"]), "-1\n");
    assert_eq!(stdout(&["weil", "-3/4", "--place", "inf", "--method", "oracle", "--level", "4"]), "zeta8^7\n");
}

#[test]
fn gauss_approximation() {
    let out = stdout(&["gauss", "1", "3", "--approx"]);
    assert_eq!(out.lines().nth(1), Some("approx 0.000000000 + 1.732050808i"));
}

#[test]
fn qr_table_rows() {
    let out = stdout(&["report", "qr-table", "--max", "13"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert!(rows.contains(&vec!["3", "5", "-1", "-1", "1", "1"]));
    assert!(rows.contains(&vec!["3", "7", "-1", "1", "-1", "-1"]));
    assert!(rows.contains(&vec!["5", "13", "-1", "-1", "1", "1"]));
    for row in &rows {
        assert_eq!(row[4], row[5], "{row:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["hilbert", "0", "3", "--place", "3"]), 1);
    assert_eq!(code(&["gauss", "1", "4"]), 1);
    assert_eq!(code(&["legendre", "2", "9"]), 1);
    assert_eq!(code(&["kashiwara", "1", "1", "2"]), 1);
    assert_eq!(code(&["kappa", "inf", "1", "2"]), 1);
    assert_eq!(code(&["hilbert", "3", "abc", "--place", "2"]), 2);
    assert_eq!(code(&["hilbert", "3", "5"]), 2);
    assert_eq!(code(&["hilbert", "3", "5", "--place", "4"]), 2);
    assert_eq!(code(&["report", "qr-table", "--max", "3"]), 2);
    assert_eq!(code(&["verify", "bogus"]), 2);
    assert_eq!(code(&["verify", "qr", "--max", "30"]), 0);
}

#[test]
fn domain_errors_name_the_precondition() {
    let out = run(&["gauss", "1", "4"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd positive modulus"));
    let out = run(&["hilbert", "0", "3", "--place", "3"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonzero"));
}

#[test]
fn json_report_schema() {
    let out = stdout(&["verify", "qr", "--max", "100", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    let r = &v["reports"][0];
    assert_eq!(r["law"], "qr");
    assert_eq!(r["instances"], 24 * 23);
    assert_eq!(r["failures"].as_array().unwrap().len(), 0);
    assert!(r["elapsed_ms"].is_u64());
}

#[test]
fn csv_report_rows() {
    let out = stdout(&["verify", "crt", "--max", "30", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("law,kind,inputs,expected,got,instances,passed,elapsed_ms"));
    let summary = lines.next().unwrap();
    assert!(summary.starts_with("crt,summary,,,,4,true,"), "{summary}");
    assert_eq!(lines.next(), None);
}

#[test]
fn verify_all_passes() {
    let out = stdout(&["verify", "all", "--max", "30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 10);
}

fn without_elapsed(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("elapsed_ms"))
        .map(|l| match l.rfind(',') {
            Some(i) if l.contains(",summary,") => &l[..i],
            _ => l,
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn output_is_deterministic() {
    for format in ["json", "csv"] {
        let a = stdout(&["verify", "cocycle", "--max", "4", "--format", format, "--jobs", "1"]);
        let b = stdout(&["verify", "cocycle", "--max", "4", "--format", format, "--jobs", "3"]);
        assert_eq!(without_elapsed(&a), without_elapsed(&b), "{format}");
    }
    assert_eq!(stdout(&["report", "qr-table", "--max", "40"]), stdout(&["report", "qr-table", "--max", "40"]));
    assert_eq!(stdout(&["hilbert", "-6", "10", "--all-places"]), stdout(&["hilbert", "-6", "10", "--all-places"]));
}

#[test]
fn jobs_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_reciprocity"))
        .args(["verify", "factor-two", "--max", "10"])
        .env("RECIPROCITY_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS factor-two"));
}
