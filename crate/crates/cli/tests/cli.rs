use std::process::{Command, Output};

fn ivsqrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivsqrt"))
        .args(args)
        .env_remove("IVSQRT_EVAL_POLICY")
        .output()
        .expect("binary runs")
}

fn csv(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn solve_both_methods_agree() {
    let out = ivsqrt(&[
        "solve", "--u0", "1", "--d0", "4", "--d1", "-5", "--a1", "1", "--a2", "0", "--t-max", "20", "--method", "both",
    ]);
    assert!(out.status.success());
    let (h, rows) = csv(&out);
    assert_eq!(&h[..8], &["t", "re_a1", "im_a1", "re_a2", "im_a2", "p1", "p2", "norm"]);
    let diff = col(&h, "abs_diff_a2");
    assert!(rows.iter().all(|r| r[diff] <= 1e-6));
    for r in &rows {
        for p in [r[5], r[6]] {
            assert!((0.0..=1.0 + 1e-12).contains(&p));
        }
    }
    assert_eq!(rows.len(), 201);
}

#[test]
fn resonant_rabi_transfer() {
    let out = ivsqrt(&[
        "solve", "--u0", "1", "--d0", "0", "--d1", "0", "--a1", "1", "--a2", "0", "--t-max", "3.14159", "--dt-out",
        "0.01",
    ]);
    assert!(out.status.success());
    let (_, rows) = csv(&out);
    let peak = rows.iter().max_by(|a, b| a[6].total_cmp(&b[6])).unwrap();
    assert!((peak[6] - 1.0).abs() < 1e-4);
    assert!((peak[0] - std::f64::consts::FRAC_PI_2).abs() < 0.01);
}

#[test]
fn solve_rejects_bad_input() {
    let bad_u0 = ivsqrt(&["solve", "--u0", "-1", "--d0", "4", "--d1", "1", "--t-max", "1"]);
    assert_eq!(bad_u0.status.code(), Some(2));
    assert!(!bad_u0.stderr.is_empty());
    let unnormalized = ivsqrt(&[
        "solve", "--u0", "1", "--d0", "4", "--d1", "1", "--a2", "1", "--t-max", "1",
    ]);
    assert_eq!(unnormalized.status.code(), Some(2));
    let bad_dt = ivsqrt(&[
        "solve", "--u0", "1", "--d0", "4", "--d1", "1", "--t-max", "1", "--dt-out", "0",
    ]);
    assert_eq!(bad_dt.status.code(), Some(2));
    assert_eq!(ivsqrt(&["figure", "5"]).status.code(), Some(2));
}

#[test]
fn figure1_marks_crossing() {
    let out = ivsqrt(&["figure", "1"]);
    assert!(out.status.success());
    let (h, rows) = csv(&out);
    let (d1, t, crossing) = (col(&h, "delta1"), col(&h, "t"), col(&h, "crossing"));
    let markers: Vec<&Vec<f64>> = rows.iter().filter(|r| r[crossing] == 1.0).collect();
    assert_eq!(markers.len(), 3);
    assert!(markers.iter().any(|r| r[d1] == -5.0 && (r[t] - 1.5625).abs() < 1e-12));
}

#[test]
fn figure2_probabilities() {
    let out = ivsqrt(&["figure", "2", "--d0-range", "0.25:8:8", "--d1-range", "-8:8:9"]);
    assert!(out.status.success());
    let (h, rows) = csv(&out);
    assert_eq!(rows.len(), 72);
    let p1 = col(&h, "p1_0");
    assert!(rows.iter().all(|r| (0.0..=1.0 + 1e-12).contains(&r[p1])));
}

#[test]
fn figure3_asymptotes_at_edges() {
    let out = ivsqrt(&["figure", "3"]);
    let (h, rows) = csv(&out);
    let first = rows.first().unwrap();
    let last = rows.last().unwrap();
    let rel = |a: f64, b: f64| (a / b - 1.0).abs();
    assert!(rel(first[col(&h, "nu0")], first[col(&h, "nu0_small_u0")]) < 0.01);
    assert!(rel(first[col(&h, "xi0")], first[col(&h, "xi0_small_u0")]) < 0.01);
    assert!(rel(last[col(&h, "nu0")], last[col(&h, "nu0_large_u0")]) < 0.01);
    assert!(rel(last[col(&h, "xi0")], last[col(&h, "xi0_large_u0")]) < 0.01);
}

#[test]
fn figure4_json() {
    let out = ivsqrt(&["figure", "4", "--format", "json", "--u0-range", "0.02:100:5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["columns"][1], "p2_exact");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let first = rows[0].as_array().unwrap();
    assert!((first[1].as_f64().unwrap() - first[2].as_f64().unwrap()).abs() < 1e-3);
    let last = rows[4].as_array().unwrap();
    assert!((last[1].as_f64().unwrap() - last[3].as_f64().unwrap()).abs() < 1e-2);
}

#[test]
fn scan_is_deterministic_and_written_to_file() {
    let args = ["scan", "--u0", "0.5:2:2", "--d0", "-1:4:3", "--d1", "-5:5:3"];
    let a = ivsqrt(&args);
    let b = ivsqrt(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (h, rows) = csv(&a);
    assert_eq!(rows.len(), 18);
    // scattering columns are undefined for Δ₀ ≤ 0
    let (d0, p1) = (col(&h, "delta0"), col(&h, "p1_0"));
    assert!(rows.iter().all(|r| (r[d0] > 0.0) != r[p1].is_nan()));

    let path = std::env::temp_dir().join(format!("ivsqrt-scan-{}.csv", std::process::id()));
    let mut with_file = args.to_vec();
    let path_str = path.to_str().unwrap().to_string();
    with_file.extend(["--output", &path_str]);
    let written = ivsqrt(&with_file);
    assert!(written.status.success());
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn verify_listing_and_selection() {
    let list = ivsqrt(&["verify", "--list"]);
    assert!(list.status.success());
    let text = String::from_utf8(list.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().next().unwrap().starts_with("AC1 "));

    let ac4 = ivsqrt(&["verify", "--criterion", "AC4", "--format", "json"]);
    assert_eq!(ac4.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ac4.stdout).unwrap();
    assert_eq!(v[0]["id"], "AC4");
    assert_eq!(v[0]["passed"], true);

    assert_eq!(ivsqrt(&["verify", "--criterion", "AC99"]).status.code(), Some(2));
}

#[test]
fn loosened_policy_fails_verification() {
    let out = Command::new(env!("CARGO_BIN_EXE_ivsqrt"))
        .args(["verify", "--criterion", "AC2"])
        .env("IVSQRT_EVAL_POLICY", "rel_tol=1e-3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("FAIL AC2"));
    let bad = Command::new(env!("CARGO_BIN_EXE_ivsqrt"))
        .args(["verify", "--list"])
        .env("IVSQRT_EVAL_POLICY", "bogus")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
