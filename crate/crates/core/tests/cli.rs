mod common;

use std::path::PathBuf;
use std::process::{Command, Stdio};

use common::*;
use kzaut::cli::{parse_endo, parse_matrix, parse_transcript, print_endo, run};
use kzaut::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

fn kzaut(args: &[&str]) -> kzaut::cli::Outcome {
    run(std::iter::once("kzaut").chain(args.iter().copied()))
}

#[test]
fn golden_outputs() {
    for ex in ["anick_variant", "identity", "tame_sample", "zxz"] {
        for cmd in ["jacobian", "tame", "stabilize"] {
            let out = kzaut(&[cmd, &example(&format!("{ex}.endo"))]);
            assert_eq!(out.stdout, golden(&format!("{ex}.{cmd}.txt")), "{cmd} {ex}");
        }
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kzaut");
    for (file, code) in [("anick_variant.endo", 3), ("identity.endo", 0), ("zxz.endo", 4), ("tame_sample.endo", 0)] {
        let status = Command::new(bin).args(["tame", &example(file)]).stdout(Stdio::null()).status().unwrap();
        assert_eq!(status.code(), Some(code), "{file}");
    }
    let status = Command::new(bin).args(["tame", "/nonexistent.endo"]).stderr(Stdio::null()).status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn stabilize_json_reingests() {
    let out = kzaut(&["--json", "stabilize", &example("anick_variant.endo")]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let ring = Ring::bivariate(Field::Rational);
    let lines: Vec<String> = v["factors"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    assert_eq!(lines.len(), 8);
    let rows: Vec<Vec<String>> = v["matrix"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect())
        .collect();
    let t = parse_transcript(&lines, &ring, 3).unwrap();
    let m = parse_matrix(&rows, &ring).unwrap();
    assert!(verify_transcript(&t, &m).unwrap());
}

#[test]
fn tame_json_transcript_verifies() {
    let out = kzaut(&["--json", "tame", &example("tame_sample.endo")]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "tame");
    let ring = Ring::bivariate(Field::Rational);
    let lines: Vec<String> = v["factors"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    let phi = parse_endo(&std::fs::read_to_string(example("tame_sample.endo")).unwrap(), None).unwrap();
    let t = parse_transcript(&lines, &ring, 2).unwrap();
    assert!(verify_transcript(&t, &jacobian_linear(&phi).unwrap()).unwrap());
}

#[test]
fn anick_file_matches_builtin() {
    let phi = parse_endo(&std::fs::read_to_string(example("anick_variant.endo")).unwrap(), None).unwrap();
    assert_eq!(phi, builtin("anick_variant", Field::Rational).unwrap());
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_endo("vars: x y\nx -> x + w\ny -> y\n", None).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, col: 10, .. }), "{err:?}");
    assert!(parse_endo("vars: x y\nx -> x\n", None).is_err());
    assert!(parse_endo("vars: x y\nx -> x\nx -> y\ny -> y\n", None).is_err());
    assert!(parse_endo("vars: x y\nz -> x\n", None).is_err());
}

#[test]
fn nonlinear_input_needs_linear_part_flag() {
    let dir = std::env::temp_dir().join(format!("kzaut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("tri.endo");
    std::fs::write(&file, "vars: x y\nx -> x + y^2 + z y z\ny -> y\n").unwrap();
    let path = file.to_string_lossy().into_owned();
    assert_eq!(kzaut(&["check", &path]).code, 1);
    let out = kzaut(&["--linear-part", "check", &path]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("# note:"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn print_parse_round_trip_endos() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..500 {
        let field = if k % 2 == 0 { Field::Rational } else { Field::Prime(7) };
        let ctx = AlgebraCtx::standard(field, 2 + k % 3);
        let images = (0..ctx.n()).map(|_| rand_ncpoly(&mut rng, &ctx, 4, 4)).collect();
        let phi = KzEndo::new(&ctx, images).unwrap();
        assert_eq!(parse_endo(&print_endo(&phi), None).unwrap(), phi);
    }
}
