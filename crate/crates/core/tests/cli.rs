mod common;

use std::process::{Command, Output};

use mic_clearing::io::{emit_result, Format};
use mic_clearing::rational::{to_fraction_string, Rational};
use mic_clearing::{milp, ObjectiveVariant};

use common::{data_path, load};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mic-clear"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn data(name: &str) -> String {
    data_path(name).to_string_lossy().into_owned()
}

#[test]
fn scenarios_match_golden_files() {
    for (format, file) in [
        ("json", "scenarios_all.json"),
        ("csv", "scenarios_all.csv"),
        ("human", "scenarios_all.txt"),
    ] {
        let out = run(&["scenarios", "run", "all", "--format", format]);
        assert!(out.status.success());
        assert_eq!(
            stdout(&out),
            golden(file),
            "{format} output drifted from {file}"
        );
    }
}

#[test]
fn clear_prints_case1_table() {
    let out = run(&["clear", &data("table1.bidset")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("objective (hourly): 70"));
    let s1 = text
        .lines()
        .find(|l| l.trim_start().starts_with("S1 "))
        .unwrap();
    assert!(s1.ends_with("1/2 (~0.5000)"), "{s1}");
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["1", "5", "[5,", "5]"]));
}

#[test]
fn oracle_check_agrees_on_shipped_files() {
    for file in ["table1.bidset", "case2.bidset", "table2.bidset"] {
        let out = run(&["clear", &data(file), "--objective", "mic", "--oracle-check"]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        assert!(stdout(&out).contains("oracle check: agree"));
    }
}

#[test]
fn csv_result_reparses_to_the_same_values() {
    let inst = load("case2.bidset");
    let (r, _) = milp::clear(&inst, ObjectiveVariant::HourlyTsw).unwrap();
    let text = emit_result(&r, &inst, Format::Csv);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        reader.headers().unwrap(),
        vec!["section", "entity", "field", "value", "decimal"]
    );
    let mut seen = 0;
    for row in reader.records() {
        let row = row.unwrap();
        let value = || mic_clearing::rational::parse_rational(&row[3]).unwrap();
        match (&row[0], &row[2]) {
            ("acceptance", "accepted") => {
                assert_eq!(value(), r.accepted(&row[1]));
                seen += 1;
            }
            ("mcp", "price") => {
                let t: usize = row[1].parse().unwrap();
                assert_eq!(value(), r.mcp[t - 1]);
                seen += 1;
            }
            ("status", "objective_value") => {
                assert_eq!(value(), r.objective_value);
                seen += 1;
            }
            _ => {}
        }
    }
    assert_eq!(seen, r.acceptance.len() + 2 + 1);
}

#[test]
fn json_output_is_exact_and_decimal() {
    let out = run(&["clear", &data("case2.bidset"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["mcp"][0]["price"]["exact"], "6");
    let s2 = v["acceptance"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["bid"] == "S2")
        .unwrap();
    assert_eq!(s2["accepted"]["exact"], "1/2");
    assert_eq!(s2["accepted"]["decimal"], "0.5000");
    let c1 = &v["orders"][0];
    assert_eq!(
        (
            c1["income"]["exact"].as_str(),
            c1["real_profit"]["exact"].as_str()
        ),
        (Some("24"), Some("6"))
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_side = dir.path().join("bad.json");
    std::fs::write(
        &bad_side,
        r#"{"schema_version":1,"period_count":1,"simple_bids":[{"id":"x","side":"buy","period":1,"quantity":1,"price":1}]}"#,
    )
    .unwrap();
    let out = run(&["clear", bad_side.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("simple_bids[0].side"));

    let invalid = dir.path().join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"schema_version":1,"period_count":1,"simple_bids":[{"id":"x","side":"supply","period":4,"quantity":1,"price":1}]}"#,
    )
    .unwrap();
    assert_eq!(
        run(&["clear", invalid.to_str().unwrap()]).status.code(),
        Some(2)
    );

    // an override bound below a bid price is refused
    let low = dir.path().join("low.json");
    std::fs::write(
        &low,
        r#"{"schema_version":1,"period_count":1,"mcp_upper_bound":"1/2","simple_bids":[{"id":"x","side":"supply","period":1,"quantity":1,"price":1}]}"#,
    )
    .unwrap();
    assert_eq!(
        run(&["clear", low.to_str().unwrap()]).status.code(),
        Some(2)
    );

    assert_eq!(run(&["scenarios", "run", "nope"]).status.code(), Some(1));
    assert_ne!(run(&["clear", "/no/such/file"]).status.code(), Some(0));
}

#[test]
fn sweep_and_optima_commands() {
    let out = run(&[
        "sweep-ft",
        &data("table1.bidset"),
        "--order",
        "c1",
        "--from",
        "0",
        "--to",
        "20",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let bps: Vec<&str> = v["breakpoints"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["exact"].as_str().unwrap())
        .collect();
    assert_eq!(bps, ["12", "16"]);

    let out = run(&["optima", &data("table2.bidset"), "--objective", "mic"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("c1=on c2=off"));
    assert!(stdout(&out).contains("c1=off c2=on"));

    let bad = run(&[
        "sweep-ft",
        &data("table1.bidset"),
        "--order",
        "c1",
        "--from",
        "5",
        "--to",
        "1",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn curves_command() {
    let out = run(&["curves", &data("table1.bidset"), "--period", "1"]);
    let text = stdout(&out);
    let supply: Vec<Rational> = text
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("supply"))
        .map(|l| mic_clearing::rational::parse_rational(l.split(',').nth(2).unwrap()).unwrap())
        .collect();
    let cumulative: Vec<String> = supply.iter().map(to_fraction_string).collect();
    assert_eq!(cumulative, ["2", "4", "6", "8"]);

    let out = run(&[
        "curves",
        &data("case2.bidset"),
        "--period",
        "1",
        "--with-result",
    ]);
    let text = stdout(&out);
    assert!(!text.contains("S7"));
    assert!(text.contains("S5"));

    assert_eq!(
        run(&["curves", &data("case2.bidset"), "--period", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn compare_and_export() {
    let out = run(&["compare", &data("case2.bidset"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["differing_activations"], serde_json::json!(["c1", "c2"]));

    let out = run(&["scenarios", "export", "case3"]);
    let exported = mic_clearing::io::parse_bidset(&stdout(&out)).unwrap();
    assert_eq!(exported, load("table2.bidset"));
}
