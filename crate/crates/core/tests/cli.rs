use std::process::Command;

fn knotkit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_knotkit")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

const FIG8: &str = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]";

#[test]
fn det_and_detect_on_figure_eight() {
    let (code, out, _) = knotkit(&["det", FIG8]);
    assert_eq!(code, 0);
    assert!(out.contains("det = 5"), "{out}");
    let (code, out, _) = knotkit(&["detect", FIG8]);
    assert_eq!(code, 0);
    assert!(out.contains("FigureEight"), "{out}");
    let (code, out, _) = knotkit(&["--json", "detect", "4_1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"]["kind"], "FigureEight");
}

#[test]
fn kh_on_unknot() {
    let (code, out, _) = knotkit(&["--json", "kh", "PD[]"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims"], serde_json::json!([[0, 0, 1]]));
    let (code, naive, _) = knotkit(&["--json", "kh", "--naive", "--field", "F2", "5_2"]);
    let (_, scan, _) = knotkit(&["--json", "kh", "--field", "F2", "5_2"]);
    assert_eq!(code, 0);
    assert_eq!(naive, scan);
}

#[test]
fn knot_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.pd");
    std::fs::write(&path, FIG8).unwrap();
    let (code, out, _) = knotkit(&["alexander", &format!("@{}", path.display())]);
    assert_eq!(code, 0);
    assert!(out.contains("-t + 3 - t^-1"), "{out}");
}

#[test]
fn cyclo_commands() {
    let (code, out, _) = knotkit(&["cyclo", "phi", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("t^4 - t^3 + t^2 - t + 1"), "{out}");
    let (code, out, _) = knotkit(&["--json", "cyclo", "scan-ph", "10"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["products_at"], serde_json::json!([1, 2]));
    let (code, out, _) = knotkit(&["cyclo", "scan-ph", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("Φ10") || out.contains("Φ_10"), "{out}");
    let (code, _, _) = knotkit(&["cyclo", "graeffe", "t^4 - t^3 + t^2 - t + 1"]);
    assert_eq!(code, 0);
    let (code, _, _) = knotkit(&["cyclo", "special-values", "10"]);
    assert_eq!(code, 0);
}

#[test]
fn exit_codes() {
    assert_eq!(knotkit(&["kh", "PD[X[1,2"]).0, 1);
    assert_eq!(knotkit(&["bogus-command"]).0, 1);
    assert_eq!(knotkit(&["kh", "PD[X[1,1,1,1]]"]).0, 2);
    assert_eq!(knotkit(&["kh", "--field", "F4", "4_1"]).0, 1);
    assert_eq!(knotkit(&["--max-crossings", "5", "kh", "7_1"]).0, 3);
    assert_eq!(knotkit(&["--help"]).0, 0);
    let (code, _, err) = knotkit(&["det", "no_such_knot"]);
    assert_ne!(code, 0);
    assert!(!err.is_empty());
}
