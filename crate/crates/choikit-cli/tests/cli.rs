//! End-to-end tests of the binary: exit codes, JSON formats, determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use choikit::maps::{Isomorphism, LinearMapRep};
use choikit::{sample, BipartiteOperator};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_choikit"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("choikit-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_named_map(dir: &Path, name: &str, builtin: &str, dim: usize) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, format!(r#"{{"name": "{builtin}", "dim": {dim}}}"#)).unwrap();
    path
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

#[test]
fn transform_identity_with_transpose_sigma_is_swap() {
    let dir = tmpdir("swap");
    let map = write_named_map(&dir, "id.json", "id", 2);
    let out = dir.join("swap.json");
    let output = run(bin().args(["transform"]).arg(&map).args(["--sigma", "transpose", "--out"]).arg(&out));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let choi: BipartiteOperator = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let swap = LinearMapRep::transpose_map(2).choi();
    assert_eq!(choi, swap);
}

#[test]
fn transform_matches_library_bit_for_bit_with_ad_sigma() {
    let dir = tmpdir("ad");
    let mut rng = sample::rng_from_seed(5);
    let phi = sample::random_map(&mut rng, 2, 3);
    let s = sample::random_nonsingular(&mut rng, 2);
    let map_path = dir.join("phi.json");
    fs::write(&map_path, serde_json::to_string(&phi).unwrap()).unwrap();
    let s_path = dir.join("s.json");
    fs::write(&s_path, serde_json::to_string(&s).unwrap()).unwrap();
    let out = dir.join("twisted.json");
    let output = run(bin()
        .args(["transform"])
        .arg(&map_path)
        .args(["--sigma", "ad", "--s"])
        .arg(&s_path)
        .arg("--out")
        .arg(&out));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let from_cli: BipartiteOperator = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let sigma = Isomorphism::ad(&s).unwrap();
    let expected = phi.choi_sigma(&sigma).unwrap();
    assert_eq!(from_cli, expected, "serialization roundtrip must be exact");
}

#[test]
fn transform_exit_codes_for_parse_and_dims() {
    let dir = tmpdir("codes");
    let bad = dir.join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let output = run(bin().args(["transform"]).arg(&bad));
    assert_eq!(output.status.code(), Some(2));

    let map = write_named_map(&dir, "id2.json", "id", 2);
    let sigma3 = write_named_map(&dir, "t3.json", "transpose", 3);
    let output = run(bin().args(["transform"]).arg(&map).arg(&sigma3));
    assert_eq!(output.status.code(), Some(3), "{output:?}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("M_3") && stderr.contains("M_2"), "message names dims: {stderr}");
}

#[test]
fn check_exit_codes_follow_verdicts() {
    let dir = tmpdir("check");
    let t = write_named_map(&dir, "t.json", "transpose", 2);
    let id = write_named_map(&dir, "id.json", "id", 2);

    // transpose is not CP: exit 1 with a printed witness
    let output = run(bin().args(["check"]).arg(&t).args(["--cone", "cp"]));
    assert_eq!(output.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&output.stdout).as_ref()).unwrap();
    assert_eq!(report["status"], "non_member");
    assert!(report["witness"].is_object());

    // identity is CP: exit 0
    let output = run(bin().args(["check"]).arg(&id).args(["--cone", "cp"]));
    assert_eq!(output.status.code(), Some(0));

    // identity is not entanglement breaking: exit 1
    let output = run(bin().args(["check"]).arg(&id).args(["--cone", "sp", "--k", "1"]));
    assert_eq!(output.status.code(), Some(1));

    // transpose at k = 1: no violation, exit 4
    let output = run(bin().args(["check"]).arg(&t).args(["--cone", "p", "--k", "1"]));
    assert_eq!(output.status.code(), Some(4));

    // ppt cone
    let output = run(bin().args(["check"]).arg(&id).args(["--cone", "ppt"]));
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn gen_outputs_reparse_and_are_deterministic() {
    let dir = tmpdir("gen");
    for kind in ["cp", "spk", "positive", "iso", "ad", "form"] {
        let out1 = dir.join(format!("{kind}1.json"));
        let out2 = dir.join(format!("{kind}2.json"));
        for out in [&out1, &out2] {
            let output = run(bin()
                .args(["gen", "--kind", kind, "--seed", "1", "--m", "2", "--k", "1", "--out"])
                .arg(out)
                .arg("--quiet"));
            assert_eq!(output.status.code(), Some(0), "{kind}: {output:?}");
        }
        let a = fs::read(&out1).unwrap();
        let b = fs::read(&out2).unwrap();
        assert_eq!(a, b, "{kind}: identical seed must give identical bytes");

        let value: serde_json::Value = serde_json::from_slice(&a).unwrap();
        assert_eq!(value["kind"], kind);
        if let Some(map) = value.get("map") {
            let _: LinearMapRep = serde_json::from_value(map.clone()).expect("map reparses");
        }
    }

    // generated ad object embeds s in metadata and the map reconstructs it
    let out = dir.join("admeta.json");
    run(bin().args(["gen", "--kind", "ad", "--seed", "9", "--m", "3", "--out"]).arg(&out).arg("--quiet"));
    let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let s: choikit::ComplexMatrix = serde_json::from_value(value["certificate"]["s"].clone()).unwrap();
    let map: LinearMapRep = serde_json::from_value(value["map"].clone()).unwrap();
    assert_eq!(map, LinearMapRep::ad(&s).unwrap());
}

#[test]
fn gen_rejects_bad_flags() {
    let output = run(bin().args(["gen", "--kind", "spk", "--m", "2", "--k", "5"]));
    assert_eq!(output.status.code(), Some(2));
    let output = run(bin().args(["gen", "--kind", "nonsense"]));
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn seed_env_fallback() {
    let dir = tmpdir("env");
    let out1 = dir.join("a.json");
    let out2 = dir.join("b.json");
    let output = run(bin()
        .args(["gen", "--kind", "iso", "--m", "2", "--out"])
        .arg(&out1)
        .arg("--quiet")
        .env("CHOIKIT_SEED", "42"));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let output = run(bin()
        .args(["gen", "--kind", "iso", "--m", "2", "--seed", "42", "--out"])
        .arg(&out2)
        .arg("--quiet")
        .env_remove("CHOIKIT_SEED"));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    assert_eq!(fs::read(&out1).unwrap(), fs::read(&out2).unwrap());
}

#[test]
fn verify_single_suite_passes_quickly() {
    let dir = tmpdir("verify");
    let out = dir.join("t1.json");
    let output = run(bin()
        .args(["verify", "--suite", "table1", "--seed", "3", "--trials", "20", "--out"])
        .arg(&out));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let reports: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(reports[0]["suite"], "table1");
    assert_eq!(reports[0]["pass"], true);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("max residual"), "prints the residual table");
}
