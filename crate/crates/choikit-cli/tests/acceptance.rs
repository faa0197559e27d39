//! CLI half of the acceptance suite: determinism and runtime of the full
//! verification run.

use std::fs;
use std::process::Command;
use std::time::Instant;

#[test]
fn criterion_12_cli_determinism_and_runtime() {
    let dir = std::env::temp_dir().join(format!("choikit-acc12-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let out1 = dir.join("report1.json");
    let out2 = dir.join("report2.json");

    let start = Instant::now();
    for out in [&out1, &out2] {
        let output = Command::new(env!("CARGO_BIN_EXE_choikit"))
            .args(["verify", "--suite", "all", "--seed", "7", "--quiet", "--out"])
            .arg(out)
            .current_dir(&dir)
            .output()
            .expect("binary runs");
        assert_eq!(output.status.code(), Some(0), "verify must pass: {output:?}");
    }
    let elapsed = start.elapsed();

    let a = fs::read(&out1).unwrap();
    let b = fs::read(&out2).unwrap();
    assert_eq!(a, b, "reports must be byte-identical for a fixed seed");
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "two full verify runs took {elapsed:?}, over the 120 s budget"
    );
}
