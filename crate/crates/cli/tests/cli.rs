mod common;

use common::{fixture, run_bin};
use serde_json::Value;

fn json(args: &str) -> Value {
    let argv: Vec<String> = args.split_whitespace().map(String::from).collect();
    let o = run_bin(&argv, &[]);
    assert_eq!(o.code, 0, "{args}: {}", o.stderr);
    assert!(o.stdout.ends_with(b"\n"));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn code(args: &str, env: &[(&str, &str)]) -> i32 {
    let argv: Vec<String> = args.split_whitespace().map(String::from).collect();
    run_bin(&argv, env).code
}

#[test]
fn golden_outputs_are_stable_across_runs_and_thread_counts() {
    let bad = common::golden_mismatches(&[1, 4]);
    assert!(bad.is_empty(), "outputs differ from golden files: {bad:?}");
}

#[test]
fn badgraph_part_sizes() {
    let v = json("vc badgraph --k 2 --d 1 --n 2");
    assert_eq!(v["partSizes"], serde_json::json!([2, 8]));
    assert_eq!(v["k"], 2);
}

#[test]
fn volume_fixture_is_nondegenerate() {
    let v = json(&format!(
        "form nondeg --form {}",
        fixture("volume_p3_n3.json")
    ));
    assert_eq!(v, serde_json::json!({ "nondegenerate": true }));
}

#[test]
fn ginfty_of_nothing_is_everything() {
    let v = json("conn ginfty --kind random --p 3 --n 3 --d 4 --seed 8");
    assert_eq!(v["dim"], 4);
    assert_eq!(v["codim"], 0);
    let basis: Vec<Vec<u32>> = serde_json::from_value(v["basis"].clone()).unwrap();
    let identity: Vec<Vec<u32>> = (0..4)
        .map(|i| (0..4).map(|j| (i == j) as u32).collect())
        .collect();
    assert_eq!(basis, identity);
}

#[test]
fn exit_codes() {
    assert_eq!(code("form nondeg --kind volume --p 2 --n 2", &[]), 0);
    assert_eq!(code("--help", &[]), 0);
    assert_eq!(code("--version", &[]), 0);
    assert_eq!(code("frobnicate", &[]), 64);
    assert_eq!(code("form eval --kind random --p 3 --n 2 --d 2", &[]), 64);
    assert_eq!(code("form nondeg --kind volume --p 4 --n 2", &[]), 2);
    assert_eq!(
        code(
            "form eval --kind volume --p 3 --n 2 --vec 1,0 --vec 0,3",
            &[]
        ),
        2
    );
    assert_eq!(
        code("form tower --kind zero --p 2 --n 3 --d 3 --steps 3", &[]),
        3
    );
    let ramsey = "vc ramsey --sizes 6,6 --seed 1 --target 3,3";
    assert_eq!(code(ramsey, &[("MULTIFORM_BUDGET", "2")]), 3);
    assert_eq!(code(ramsey, &[("MULTIFORM_BUDGET", "lots")]), 64);
    assert_eq!(code(ramsey, &[]), 0);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("multiform-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let args = "conn perp --kind symplectic --p 2 --d 4 --vec 1,0,0,0";
    let argv: Vec<String> = format!("--out {} {args}", path.display())
        .split_whitespace()
        .map(String::from)
        .collect();
    let o = run_bin(&argv, &[]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let direct: Vec<String> = args.split_whitespace().map(String::from).collect();
    assert_eq!(std::fs::read(&path).unwrap(), run_bin(&direct, &[]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn in_process_runner_matches_binary() {
    let args = [
        "multiform",
        "form",
        "generic",
        "--kind",
        "random",
        "--p",
        "3",
        "--n",
        "2",
        "--d",
        "3",
        "--seed",
        "1",
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(multiform_cli::run(args, &mut out, &mut err), 0);
    let argv: Vec<String> = args[1..].iter().map(|s| s.to_string()).collect();
    assert_eq!(out, run_bin(&argv, &[]).stdout);
}

#[test]
fn unknown_spec_fields_are_rejected() {
    let dir = std::env::temp_dir().join(format!("multiform-spec-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    std::fs::write(
        &path,
        r#"{"oracle":{"kind":"order","size":3},"windw":[0,1]}"#,
    )
    .unwrap();
    assert_eq!(
        code(&format!("types count --spec {}", path.display()), &[]),
        2
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
