use std::f64::consts::PI;
use std::process::{Command, Output};

fn circspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circspec"))
        .args(args)
        .env_remove("CIRCSPEC_THREADS")
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn exact_coe_n3(w: f64) -> f64 {
    let p2 = PI * PI;
    let p4 = p2 * p2;
    (-225.0 - 60.0 * p2 + 14.0 * p4) / (24.0 * p4)
        + (p2 - 6.0) / (2.0 * p2) * w.cos()
        + (225.0 - 48.0 * p2 + 4.0 * p4) / (24.0 * p4) * (2.0 * w).cos()
}

#[test]
fn cue_limit_table_matches_reference_values() {
    let out = circspec(&[
        "spectrum",
        "--beta",
        "2",
        "--limit",
        "--omega-grid",
        "2pi/25:12",
        "--s-star",
        "100",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("omega,value,err_estimate,route,wall_ms\n"));
    let rows = rows(&out);
    assert_eq!(rows.len(), 12);
    let first: f64 = rows[0][1].parse().unwrap();
    let last: f64 = rows[11][1].parse().unwrap();
    assert!((first - 0.629975).abs() < 1e-4, "{first}");
    assert!((last - 0.067922).abs() < 1e-4, "{last}");
    assert!(rows.iter().all(|r| r[3] == "fredholm" && r[4] == "0"));
}

#[test]
#[allow(clippy::approx_constant)]
fn coe_three_by_three_single_row() {
    let out = circspec(&["spectrum", "--beta", "1", "--N", "3", "--omega", "1.5708"]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    let v: f64 = rows[0][1].parse().unwrap();
    assert!(((v - exact_coe_n3(1.5708)) / v).abs() < 1e-8);
}

#[test]
fn zero_frequency_uses_exact_intercept() {
    let out = circspec(&[
        "spectrum", "--beta", "2", "--N", "1", "--omega", "0", "--omega", "pi",
    ]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows[0][3], "exact");
    let v: f64 = rows[0][1].parse().unwrap();
    assert!((v - 1.0 / 12.0).abs() < 1e-11);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["spectrum", "--beta", "2", "--N", "0", "--omega", "1"][..],
        &["spectrum", "--beta", "3", "--N", "4", "--omega", "1"],
        &["spectrum", "--beta", "2", "--N", "4", "--omega", "4"],
        &[
            "spectrum",
            "--beta",
            "2",
            "--limit",
            "--omega",
            "1",
            "--route",
            "recurrence",
        ],
        &["spectrum", "--beta", "2", "--limit", "--omega", "0"],
        &[
            "spectrum", "--beta", "1", "--N", "3", "--omega", "1", "--route", "fredholm",
        ],
        &[
            "spectrum", "--beta", "2", "--N", "4", "--omega", "1", "--s-star", "50",
        ],
        &[
            "spectrum", "--beta", "2", "--limit", "--omega", "0.01", "--s-star", "50",
        ],
        &[
            "spectrum", "--beta", "2", "--N", "4", "--limit", "--omega", "1",
        ],
        &["spectrum", "--beta", "2", "--N", "4", "--omega-grid", "pi:"],
        &["genfn", "--N", "4", "--omega", "1"],
        &["genfn", "--N", "4", "--omega", "1", "--phi-grid", "0:4:3"],
    ] {
        let out = circspec(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn numerical_failure_exits_3_and_names_the_frequency() {
    let out = circspec(&[
        "spectrum", "--beta", "2", "--limit", "--omega", "pi", "--route", "painleve", "--s-star",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("omega = 3.14159") && err.contains("painleve"),
        "{err}"
    );
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    let out = circspec(&[
        "spectrum", "--beta", "2", "--limit", "--omega", "pi", "--route", "painleve", "--s-star",
        "10", "-o", p,
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "3"].iter().enumerate() {
        let path = dir.path().join(format!("{i}.json"));
        let out = circspec(&[
            "spectrum",
            "--beta",
            "4",
            "--N",
            "6",
            "--omega-grid",
            "pi/8:8",
            "--format",
            "json",
            "-o",
            path.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert!(out.status.success());
        outputs.push(std::fs::read_to_string(&path).unwrap());
    }
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("\"threads\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&outputs[0]), strip(&outputs[1]));
    let doc: serde_json::Value = serde_json::from_str(&outputs[0]).unwrap();
    assert_eq!(doc["config"]["N"], 6);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
    assert_eq!(doc["rows"][0]["route"], "determinant");
}

#[test]
fn timings_fill_wall_ms() {
    let out = circspec(&[
        "spectrum",
        "--beta",
        "2",
        "--N",
        "40",
        "--omega",
        "1",
        "--timings",
    ]);
    let ms: f64 = rows(&out)[0][4].parse().unwrap();
    assert!(ms > 0.0);
}

#[test]
fn genfn_finite_profile() {
    let out = circspec(&[
        "genfn",
        "--beta",
        "2",
        "--N",
        "100",
        "--omega",
        "pi/4",
        "--phi-grid",
        "0:pi:200",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("phi,re,im\n"));
    let rows = rows(&out);
    assert_eq!(rows.len(), 200);
    assert_eq!(rows[0][1], "1.00000000000e0");
    // E oscillates with |E| decaying.
    let re: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let sign_changes = re.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert!(sign_changes > 5);
}

#[test]
fn genfn_routes_agree() {
    let det = circspec(&[
        "genfn",
        "--beta",
        "4",
        "--N",
        "5",
        "--xi",
        "0.4,-0.3",
        "--phi-grid",
        "0:pi:7",
    ]);
    let fred = circspec(&[
        "genfn",
        "--beta",
        "4",
        "--N",
        "5",
        "--xi",
        "0.4,-0.3",
        "--phi-grid",
        "0:pi:7",
        "--route",
        "fredholm",
    ]);
    for (a, b) in rows(&det).iter().zip(rows(&fred)) {
        for c in 1..3 {
            let (x, y): (f64, f64) = (a[c].parse().unwrap(), b[c].parse().unwrap());
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn genfn_sine_kernel_modulated_profile() {
    let out = circspec(&[
        "genfn", "--limit", "--kernel", "sine", "--omega", "23pi/25", "--s-grid", "8:50:0.1",
    ]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows.len(), 421);
    let s_last: f64 = rows[420][0].parse().unwrap();
    assert!((s_last - 50.0).abs() < 1e-9);
}

#[test]
fn genfn_limit_routes_agree() {
    let args = [
        "genfn",
        "--limit",
        "--kernel",
        "sine-plus",
        "--omega",
        "1.9",
        "--s-grid",
        "0:3:0.5",
    ];
    let fred = circspec(&args);
    let tau = circspec(&[&args[..], &["--route", "painleve"]].concat());
    assert!(fred.status.success() && tau.status.success());
    for (a, b) in rows(&fred).iter().zip(rows(&tau)) {
        for c in 1..3 {
            let (x, y): (f64, f64) = (a[c].parse().unwrap(), b[c].parse().unwrap());
            assert!((x - y).abs() < 1e-8);
        }
    }
}

#[test]
fn genfn_at_zero_xi_is_one() {
    for args in [
        &[
            "genfn",
            "--beta",
            "1",
            "--N",
            "5",
            "--xi",
            "0",
            "--phi-grid",
            "0:pi:9",
        ][..],
        &[
            "genfn", "--limit", "--beta", "4", "--omega", "0", "--s-grid", "0:5:1",
        ],
        &[
            "genfn",
            "--N",
            "7",
            "--xi",
            "0",
            "--phi-grid",
            "0:pi:9",
            "--route",
            "painleve",
        ],
    ] {
        let out = circspec(args);
        assert!(out.status.success(), "{args:?}");
        for r in rows(&out) {
            assert_eq!(
                (r[1].as_str(), r[2].as_str()),
                ("1.00000000000e0", "0"),
                "{args:?}"
            );
        }
    }
}

#[test]
fn validate_reports_passing_checks() {
    let out = circspec(&["validate", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert_eq!(doc["conjecture"].as_array().unwrap().len(), 9);
}
