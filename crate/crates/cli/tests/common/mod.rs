#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> String {
    manifest_dir()
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn run_bin(args: &[String], env: &[(&str, &str)]) -> Outcome {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_multiform"));
    cmd.args(args).env_remove("MULTIFORM_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn words(s: &str) -> Vec<String> {
    s.split_whitespace()
        .map(|w| match w.strip_prefix('@') {
            Some(name) => fixture(name),
            None => w.to_string(),
        })
        .collect()
}

/// Golden regression suite: (name, argv). `@file` expands to a fixture path.
pub fn suite() -> Vec<(&'static str, Vec<String>)> {
    let cases: &[(&str, &str)] = &[
        ("form_eval_volume", "form eval --form @volume_p3_n3.json --vec 1,0,0 --vec 0,1,0 --vec 0,0,1"),
        ("form_eval_random", "form eval --kind random --p 5 --n 3 --d 4 --seed 11 --vec 1,2,0,0 --vec 0,1,3,0 --vec 4,0,0,1"),
        ("form_radical_zero", "form radical --kind zero --p 2 --n 2 --d 2"),
        ("form_nondeg_fixture", "form nondeg --form @volume_p3_n3.json"),
        ("form_nondeg_tower", "form nondeg --kind zero --p 2 --n 3 --d 3 --tower-steps 1"),
        ("form_generic_random", "form generic --kind random --p 3 --n 3 --d 5 --seed 4"),
        ("form_dual_symplectic", "form dual --kind symplectic --p 3 --d 4 --vec 1,0,0,0 --vec 0,1,0,0"),
        ("form_findw_tower", "form findw --kind zero --p 2 --n 2 --d 2 --tower-steps 1 --wedge 1,0,0,0 --wedge 0,1,0,0 --targets 1,1"),
        ("form_extend_zero", "form extend --kind zero --p 3 --n 2 --d 1"),
        ("form_tower_zero", "form tower --kind zero --p 2 --n 3 --d 3 --steps 2"),
        ("struct_generate", "struct generate --kind symplectic --p 2 --d 4 --vec 1,0,0,0 --vec 0,1,0,0 --vec 1,1,0,0"),
        ("struct_invariant", "struct invariant --kind random --p 3 --n 2 --d 4 --seed 2 --vec 1,0,0,0 --vec 0,1,0,0 --vec 1,1,0,0"),
        ("struct_equiv", "struct equiv --kind symplectic --p 2 --d 4 --target-kind symplectic --target-p 2 --target-d 6 --vec 1,0,0,0 --vec 0,1,0,0 --target-vec 0,0,1,1,0,0 --target-vec 0,0,0,1,0,0"),
        ("struct_embed", "struct embed --kind symplectic --p 2 --d 4 --target-kind zero --target-p 2 --target-n 2 --target-d 3 --target-tower-steps 1 --vec 1,0,0,0 --vec 0,1,0,0"),
        ("vc_shatter_grid", "vc shatter --family @family_grid.json --box 0,1;0,1"),
        ("vc_dim_grid", "vc dim --family @family_grid.json"),
        ("vc_dim_binary", "vc dim --family @family_pairs.bin"),
        ("vc_sauer_binary", "vc sauer --family @family_pairs.bin --d 2"),
        ("vc_badgraph", "vc badgraph --k 2 --d 1 --n 2"),
        ("vc_badgraph_check", "vc badgraph --k 3 --d 1 --n 2 --check"),
        ("vc_randgraph", "vc randgraph --part-sizes 4,5 --seed 3 --demand 2 --samples 200"),
        ("vc_ramsey_labels", "vc ramsey --labels @labels.json --target 2,2"),
        ("vc_ramsey_random", "vc ramsey --sizes 6,6 --colors 2 --seed 1 --target 3,3"),
        ("types_count", "types count --spec @types_random.json"),
        ("types_dagger", "types dagger --spec @types_badgraph.json"),
        ("types_dagger_csv", "--csv types dagger --spec @types_random.json"),
        ("types_compose", "types compose --spec @types_compose.json"),
        ("types_arrayfam", "types arrayfam --spec @types_arrayfam.json"),
        ("conn_perp", "conn perp --kind symplectic --p 2 --d 4 --vec 1,0,0,0"),
        ("conn_ginfty_empty", "conn ginfty --kind symplectic --p 2 --d 4"),
        ("conn_ginfty", "conn ginfty --kind symplectic --p 2 --d 4 --vec 1,0,0,0 --vec 0,0,1,0"),
        ("conn_identity", "conn identity --kind symplectic --p 2 --d 4 --part 1,0,0,0 --part 0,0,1,0"),
        ("exp_badgraph", "experiment badgraph"),
        ("exp_sauer", "experiment sauer --trials 500 --seed 1"),
        ("exp_obstruction", "experiment obstruction --seed 1"),
        ("exp_chain", "experiment chain --seed 7"),
        ("exp_qe", "experiment qe --seed 7"),
        ("exp_identity", "experiment identity --seed 7"),
        ("exp_dagger_sanity", "experiment dagger-sanity"),
        ("exp_composition", "--csv experiment composition --trials 50 --seed 7"),
        ("err_dimension", "form eval --kind volume --p 3 --n 3 --vec 1,0"),
        ("err_guard", "form tower --kind zero --p 2 --n 3 --d 3 --steps 3"),
        ("err_usage", "form eval --kind random --p 3 --n 2 --d 2"),
    ];
    cases
        .iter()
        .map(|&(name, line)| (name, words(line)))
        .collect()
}

/// Exit code, then stdout; stderr is left out since it carries paths.
pub fn render(o: &Outcome) -> Vec<u8> {
    let mut v = format!("exit {}\n", o.code).into_bytes();
    v.extend_from_slice(&o.stdout);
    v
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir()
        .join("tests/golden")
        .join(format!("{name}.out"))
}

pub fn with_threads(args: &[String], threads: usize) -> Vec<String> {
    let mut v = vec!["--threads".to_string(), threads.to_string()];
    v.extend_from_slice(args);
    v
}

/// Names whose output differs from the committed golden file, over two runs at each thread count.
pub fn golden_mismatches(threads: &[usize]) -> Vec<String> {
    let bless = std::env::var_os("MULTIFORM_BLESS").is_some();
    let mut bad = Vec::new();
    for (name, args) in suite() {
        let path = golden_path(name);
        let mut outputs = Vec::new();
        for &t in threads {
            for _ in 0..2 {
                outputs.push(render(&run_bin(&with_threads(&args, t), &[])));
            }
        }
        if bless {
            std::fs::write(&path, &outputs[0]).expect("golden file writable");
        }
        let expected = std::fs::read(&path).unwrap_or_default();
        if outputs.iter().any(|o| *o != expected) {
            bad.push(name.to_string());
        }
    }
    bad
}
