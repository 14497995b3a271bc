use std::process::{Command, Output};

fn biaslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biaslab")).args(args).env_remove("BIASLAB_MAX_X").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn moment_report() {
    let o = biaslab(&["moment", "--x", "1e4", "--N", "20", "--a", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for key in ["raw", "normalized", "mu", "deviation"] {
        assert!(text.lines().any(|l| l.starts_with(key)), "{text}");
    }
}

#[test]
fn empty_range_gives_zero() {
    let o = biaslab(&["moment", "--x", "10", "--N", "20", "--a", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["raw", "0"]));
}

#[test]
fn exit_codes() {
    assert_eq!(biaslab(&["moment", "--x", "1e6", "--N", "100", "--a", "0"]).status.code(), Some(2));
    assert_eq!(biaslab(&["compare", "--x", "1e4", "--a", "1", "--N-grid", ""]).status.code(), Some(2));
    assert_eq!(biaslab(&["compare", "--x", "1e4", "--a", "1", "--N-grid", "2e4"]).status.code(), Some(2));
    assert_eq!(biaslab(&["moment", "--x", "1e10", "--N", "100", "--a", "1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let o = biaslab(&["compare", "--x", "1e4", "--a", "1", "--N-grid", "20", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = biaslab(&["moment", "--x", "1e4", "--N", "10", "--a", "6", "--scenario", "3,0.9"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(biaslab(&["moment", "--x", "1e4", "--N", "10", "--a", "1", "--scenario", "6,0.9"]).status.code(), Some(4));
}

#[test]
fn max_x_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_biaslab"))
        .args(["moment", "--x", "1e4", "--N", "10", "--a", "1"])
        .env("BIASLAB_MAX_X", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_csv_layout_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for path in [&first, &second] {
        let o = biaslab(&[
            "--threads", "1", "compare", "--x", "1e5", "--a", "1", "--N-grid", "100,20,50", "--out", path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = std::fs::read(&first).unwrap();
    assert_eq!(bytes, std::fs::read(&second).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,mu,secondary,empirical,deviation,runtime_ms");
    assert_eq!(lines.len(), 4);
    let ns: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ns, vec![20.0, 50.0, 100.0]);
    for l in &lines[1..] {
        let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((v[4] - (v[3] - v[1] - v[2])).abs() < 1e-8, "{l}");
        assert_eq!(v[5], 0.0);
    }
}

#[test]
fn composite_class_has_zero_mu() {
    let o = biaslab(&["compare", "--x", "1e5", "--a", "6", "--N-grid", "10:100:4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for l in text.lines().skip(1) {
        assert_eq!(l.split(',').nth(1), Some("0"), "{l}");
    }
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn thin_wrappers() {
    let o = biaslab(&["constants"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("C0") && text.contains("C_1,1") && text.contains("D_1,1") && text.contains("truncation"));

    let o = biaslab(&["zero-scan", "--x", "1e6", "--qmax", "500"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("no exceptional character found"));

    let o = biaslab(&["decompose", "--x", "1e5", "--N", "50", "--a", "1", "--delta", "0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let residual: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("residual"))
        .map(|v| v.trim().parse().unwrap())
        .unwrap();
    assert!(residual.abs() < 1e-6);
    for t in ["T1", "T2", "T3", "T4", "T5"] {
        assert!(text.lines().any(|l| l.starts_with(t)));
    }
}

#[test]
fn timing_fills_runtime() {
    let o = biaslab(&["compare", "--x", "1e4", "--a", "-1", "--N-grid", "10,20", "--timing", "--scenario=-4,0.9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 3);
}
