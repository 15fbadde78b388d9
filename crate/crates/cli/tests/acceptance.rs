//! Acceptance: the gallery as a CI gate. Runs the installed binary the
//! way a pipeline would and checks the exit-code contract.

use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pencillab"))
}

#[test]
fn c10_gallery_as_ci() {
    let output = binary()
        .args(["gallery", "--case", "all", "--assert"])
        .output()
        .expect("binary runs");
    let ok = output.status.code() == Some(0);
    println!(
        "acceptance criterion 10 (gallery as CI): {}",
        if ok { "PASS" } else { "FAIL" },
    );
    if !ok {
        println!("stdout:\n{}", String::from_utf8_lossy(&output.stdout));
        println!("stderr:\n{}", String::from_utf8_lossy(&output.stderr));
    }
    assert!(ok, "gallery --case all --assert exited {:?}", output.status.code());
}

#[test]
fn gallery_single_cases_assert_clean() {
    for case in ["tu", "semigroup2x2"] {
        let status = binary()
            .args(["gallery", "--case", case, "--assert"])
            .status()
            .expect("binary runs");
        assert_eq!(status.code(), Some(0), "case {case}");
    }
}
