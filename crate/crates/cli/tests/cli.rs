use std::process::{Command, Output};

use clap::Parser;
use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use wss_cli::{
    exit, run, CheckResult, Cli, DiscriminantResult, MonogenicResult, OutputRecord, PeriodResult,
    SearchResult,
};

fn wss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wss"))
        .args(args)
        .env_remove("WSS_FACTOR_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    wss(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = wss(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Runs the library entry point in-process and parses its JSON.
fn record<T: DeserializeOwned>(args: &[&str]) -> (OutputRecord<T>, String) {
    let mut argv = vec!["wss", "--format", "json", "--no-timing"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).unwrap();
    let mut buf = Vec::new();
    assert_eq!(run(&cli, &mut buf).unwrap(), exit::SUCCESS);
    let text = String::from_utf8(buf).unwrap();
    (serde_json::from_str(&text).unwrap(), text)
}

fn assert_round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(args: &[&str]) {
    let (parsed, text) = record::<T>(args);
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, text, "{args:?}");
    assert_eq!(
        serde_json::from_str::<OutputRecord<T>>(&again).unwrap(),
        parsed
    );
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["check", "--k", "2", "--p", "13"], exit::SUCCESS),
        (&["check", "--k", "1", "--p", "2"], exit::SUCCESS),
        (&["check", "--k", "4", "--p", "3"], exit::HYPOTHESIS),
        (&["check", "--k", "7", "--p", "3"], exit::SUCCESS),
        (&["check", "--k", "12", "--p", "5"], exit::HYPOTHESIS),
        (&["check", "--k", "1", "--p", "6"], exit::INVALID_ARGS),
        (&["check", "--k", "0", "--p", "5"], exit::INVALID_ARGS),
        (&["check", "--k", "x", "--p", "5"], exit::INVALID_ARGS),
        (&["check", "--k", "1"], exit::INVALID_ARGS),
        (&["frobnicate"], exit::INVALID_ARGS),
        (
            &["search", "--k-min", "1", "--k-max", "3", "--p-max", "50"],
            exit::SUCCESS,
        ),
        (
            &["search", "--k-min", "5", "--k-max", "4", "--p-max", "10"],
            exit::INVALID_ARGS,
        ),
        (
            &["search", "--k-min", "0", "--k-max", "4", "--p-max", "10"],
            exit::INVALID_ARGS,
        ),
        (
            &["search", "--k-min", "1", "--k-max", "4", "--p-max", "1"],
            exit::INVALID_ARGS,
        ),
        (
            &[
                "search", "--k-min", "1", "--k-max", "4", "--p-max", "10", "--jobs", "0",
            ],
            exit::INVALID_ARGS,
        ),
        (
            &[
                "search",
                "--k-min",
                "1",
                "--k-max",
                "2",
                "--p-max",
                "10",
                "--criterion",
                "bogus",
            ],
            exit::INVALID_ARGS,
        ),
        (
            &["monogenic", "--k", "1", "--p", "3", "--report"],
            exit::SUCCESS,
        ),
        (&["monogenic", "--k", "8", "--p", "3"], exit::HYPOTHESIS),
        (&["monogenic", "--k", "1", "--p", "9"], exit::INVALID_ARGS),
        (&["period", "--k", "1", "--m", "2"], exit::SUCCESS),
        (&["period", "--k", "1", "--m", "1"], exit::INVALID_ARGS),
        (&["period", "--k", "1", "--m", "0"], exit::INVALID_ARGS),
        (&["discriminant", "--k", "3", "--p", "5"], exit::SUCCESS),
        (
            &["discriminant", "--k", "3", "--p", "4"],
            exit::INVALID_ARGS,
        ),
        (
            &[
                "--factor-budget",
                "1",
                "check",
                "--k",
                "4000000043",
                "--p",
                "3",
            ],
            exit::BUDGET,
        ),
        (&["--help"], exit::SUCCESS),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "{args:?}");
    }
}

#[test]
fn budget_env_var_mirrors_the_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_wss"))
        .args(["check", "--k", "4000000043", "--p", "3"])
        .env("WSS_FACTOR_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(exit::BUDGET));
    assert!(String::from_utf8_lossy(&out.stderr).contains("factorization incomplete"));
}

#[test]
fn hypothesis_message_names_the_condition() {
    let out = wss(&["check", "--k", "4", "--p", "3"]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("divisible by 4"), "{msg}");
    let out = wss(&["check", "--k", "11", "--p", "3"]);
    assert_eq!(out.status.code(), Some(exit::HYPOTHESIS));
    assert!(String::from_utf8_lossy(&out.stderr).contains("squarefree"));
}

#[test]
fn period_examples() {
    assert_eq!(stdout(&["period", "--k", "1", "--m", "2"]), "3\n");
    assert_eq!(stdout(&["period", "--k", "1", "--m", "4"]), "6\n");
    assert_eq!(stdout(&["period", "--k", "1", "--m", "5"]), "20\n");
}

#[test]
fn check_json_has_the_documented_shape() {
    let text = stdout(&["check", "--k", "2", "--p", "13", "--format", "json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let top: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    for key in ["schema_version", "command", "inputs", "result", "timing_ms"] {
        assert!(top.contains(&key.to_string()), "{key}");
    }
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "check");
    assert!(v["timing_ms"].is_number());
    let result = &v["result"];
    for key in [
        "delta",
        "pi_p",
        "pi_p2",
        "by_period",
        "by_entry",
        "by_alpha",
        "by_monogenic",
        "consistent",
        "is_wss",
    ] {
        assert!(!result[key].is_null(), "{key}");
    }
    for key in [
        "by_period",
        "by_entry",
        "by_alpha",
        "by_monogenic",
        "is_wss",
    ] {
        assert_eq!(result[key], true, "{key}");
    }
}

#[test]
fn search_examples() {
    let (r, _) = record::<SearchResult>(&[
        "search",
        "--k-min",
        "1",
        "--k-max",
        "10",
        "--p-max",
        "100",
        "--criterion",
        "all",
    ]);
    let hits: Vec<_> = r.result.hits.iter().map(|h| (h.k, h.p)).collect();
    assert!(
        hits.contains(&(2, 13)) && hits.contains(&(2, 31)),
        "{hits:?}"
    );
    assert!(r
        .result
        .hits
        .iter()
        .all(|h| h.classification.as_ref().unwrap().consistent));

    let (r, _) =
        record::<SearchResult>(&["search", "--k-min", "1", "--k-max", "1", "--p-max", "1000"]);
    assert!(r.result.hits.is_empty());
    assert_eq!(r.result.criterion, "period");
}

#[test]
fn monogenic_examples() {
    let (r, _) = record::<MonogenicResult>(&["monogenic", "--k", "1", "--p", "3", "--report"]);
    assert!(r.result.monogenic);
    let items: Vec<_> = r
        .result
        .verdicts
        .unwrap()
        .iter()
        .map(|v| (v.q, v.item))
        .collect();
    assert_eq!(items, vec![(3, 4), (5, 5)]);

    let (r, _) = record::<MonogenicResult>(&["monogenic", "--k", "2", "--p", "13"]);
    assert!(!r.result.monogenic && r.result.verdicts.is_none());
    let (r, _) = record::<MonogenicResult>(&["monogenic", "--k", "1", "--p", "5"]);
    assert!(r.result.monogenic);
}

#[test]
fn discriminant_reports_both_routes_for_small_p() {
    let (r, _) = record::<DiscriminantResult>(&["discriminant", "--k", "1", "--p", "3"]);
    assert_eq!(r.result.closed_form, "91125");
    assert_eq!(r.result.resultant.as_deref(), Some("91125"));
    assert_eq!(r.result.agree, Some(true));

    let (r, _) = record::<DiscriminantResult>(&["discriminant", "--k", "1", "--p", "101"]);
    assert!(r.result.resultant.is_none() && r.result.agree.is_none());
}

#[test]
fn json_round_trips_for_every_command() {
    assert_round_trip::<CheckResult>(&["check", "--k", "2", "--p", "2"]);
    assert_round_trip::<SearchResult>(&[
        "search",
        "--k-min",
        "1",
        "--k-max",
        "9",
        "--p-max",
        "60",
        "--criterion",
        "all",
    ]);
    assert_round_trip::<SearchResult>(&["search", "--k-min", "1", "--k-max", "9", "--p-max", "60"]);
    assert_round_trip::<MonogenicResult>(&["monogenic", "--k", "3", "--p", "7", "--report"]);
    assert_round_trip::<PeriodResult>(&["period", "--k", "5", "--m", "99"]);
    assert_round_trip::<DiscriminantResult>(&["discriminant", "--k", "2", "--p", "5"]);
}

#[test]
fn no_timing_pins_the_field_to_zero() {
    let (r, _) = record::<PeriodResult>(&["period", "--k", "1", "--m", "10"]);
    assert_eq!(r.timing_ms, 0.0);
    assert_eq!(r.result.period, 60);
}

const SMALL_PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn check_payload_round_trips(k in 1u64..300, i in 0..SMALL_PRIMES.len()) {
        let p = SMALL_PRIMES[i].to_string();
        let k = k.to_string();
        let argv = ["wss", "--format", "json", "check", "--k", &k, "--p", &p];
        let cli = Cli::try_parse_from(argv).unwrap();
        let mut buf = Vec::new();
        match run(&cli, &mut buf) {
            Ok(c) => {
                prop_assert_eq!(c, exit::SUCCESS);
                let text = String::from_utf8(buf).unwrap();
                let parsed: OutputRecord<CheckResult> = serde_json::from_str(&text).unwrap();
                prop_assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
                prop_assert!(parsed.result.consistent);
            }
            Err(f) => prop_assert_eq!(f.code, exit::HYPOTHESIS),
        }
    }

    #[test]
    fn period_payload_round_trips(k in 1u64..1000, m in 2u64..5000) {
        let (k, m) = (k.to_string(), m.to_string());
        let (parsed, text) = record::<PeriodResult>(&["period", "--k", &k, "--m", &m]);
        prop_assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
    }
}
