use std::path::PathBuf;
use std::process::{Command, Output};

fn qboole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qboole"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_column(text: &str, col: usize) -> Vec<String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| r.unwrap().get(col).unwrap().to_string())
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{name}-{}", std::process::id()))
}

#[test]
fn exit_codes() {
    assert_eq!(qboole(&["table", "--family", "euler", "--n", "2"]).status.code(), Some(0));
    assert_eq!(qboole(&["table", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(qboole(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qboole(&[]).status.code(), Some(2));
    let out = qboole(&["padic", "--p", "9", "--N", "3", "--M", "2", "--n", "1", "--x", "1", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd prime"));
}

#[test]
fn table_matches_gf_values() {
    for (family, orders) in [
        ("euler", &[1u32, 2, 3][..]),
        ("boole-classical", &[1][..]),
        ("qboole-first", &[1, 2, 3][..]),
        ("qboole-second", &[1, 2, 3][..]),
    ] {
        for alpha in orders {
            let a = alpha.to_string();
            let gf = qboole(&["gf", "--family", family, "--k", "10", "--alpha", &a]);
            assert!(gf.status.success());
            let gf_values = csv_column(&stdout(&gf), 3);
            let table = qboole(&["table", "--family", family, "--n", "10", "--alpha", &a]);
            assert!(table.status.success());
            let table_values = csv_column(&stdout(&table), 1);
            assert_eq!(gf_values, table_values, "{family} alpha={alpha}");
        }
    }
}

#[test]
fn constructions_render_identically() {
    for family in ["qboole-first", "qboole-second"] {
        let runs: Vec<String> = ["series", "stirling", "integral"]
            .iter()
            .map(|c| stdout(&qboole(&["table", "--family", family, "--n", "8", "--alpha", "2", "--construction", c])))
            .collect();
        assert_eq!(runs[0], runs[1]);
        assert_eq!(runs[0], runs[2]);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--profile", "quick", "--include-printed-variants"];
    let a = qboole(&args);
    let b = qboole(&args);
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["all_asserted_pass"], true);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("stirling1.csv");
    let p = path.to_str().unwrap();
    let out = qboole(&["table", "--family", "stirling1", "--n", "3", "--out", p]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("n,k,value\n"));
    assert!(written.lines().any(|l| l == "3,1,2"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn padic_literal_matches_fast() {
    let base = ["padic", "--p", "3", "--N", "5", "--M", "4", "--n", "3", "--x", "2", "--lambda", "-1", "--q", "4"];
    let fast: serde_json::Value = serde_json::from_slice(&qboole(&base).stdout).unwrap();
    let mut literal_args = base.to_vec();
    literal_args.push("--literal");
    let literal: serde_json::Value = serde_json::from_slice(&qboole(&literal_args).stdout).unwrap();
    assert_eq!(fast["integral"], literal["integral"]);
    assert_eq!(fast["verdict"], "pass");
}
