use std::process::{Command, Output};

use serde_json::Value;

fn calogero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calogero"))
        .args(args)
        .env_remove("CALOGERO_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn eigenvalues(v: &Value) -> Vec<f64> {
    v["results"]["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn fermion_nu_one_is_maximally_entangled_qubit() {
    let v = json(&calogero(&["spectrum1d", "--nu", "1", "--statistics", "fermion"]));
    let l = eigenvalues(&v);
    assert!((l[0] - 0.5).abs() < 1e-10 && (l[1] - 0.5).abs() < 1e-10);
    assert!(l[2..].iter().all(|x| x.abs() < 1e-10));
    assert!((v["results"]["von_neumann"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn harmonic_one_dimensional_limit() {
    let o = calogero(&["ha-entropies", "--epsilon", "1e9", "--alpha", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("epsilon,S_vN,S_le,S_min,S_renyi_1"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((row[1] - 1.197371889).abs() < 1e-6);
}

#[test]
fn exact_boson_nu_two() {
    let v = json(&calogero(&["spectrum1d", "--nu", "2", "--statistics", "boson", "--exact"]));
    let l = eigenvalues(&v);
    let s3 = 3f64.sqrt();
    let want = [(2.0 + s3) / 6.0, 1.0 / 3.0, (2.0 - s3) / 6.0];
    assert_eq!(l.len(), 3);
    for (a, b) in l.iter().zip(want) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn json_envelope_keys() {
    let v = json(&calogero(&["spectrum1d", "--nu", "3", "--statistics", "fermion", "--exact"]));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["command", "params", "results", "library_version", "wall_time"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["command"], "spectrum1d");
    assert_eq!(v["params"]["nu"], 3.0);
    assert_eq!(v["params"]["exact"], true);
    assert_eq!(v["library_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn csv_headers() {
    let cases: [(&[&str], &str); 6] = [
        (&["spectrum1d", "--nu", "2", "--exact"], "k,lambda"),
        (&["scan-renyi", "--nu-min", "2", "--nu-max", "4", "--nu-step", "2", "--exact"], "nu,alpha,entropy_bits"),
        (&["ha-entropies", "--epsilon", "2"], "epsilon,S_vN,S_le,S_min"),
        (&["ha-truncated", "--truncation", "10", "--points", "5"], "delta,n,S_vN"),
        (&["beta-sweep", "--nu", "1", "--points", "3", "--basis", "6"], "beta2,S_vN"),
        (
            &["crossover", "--nu-strength", "2000", "--epsilon", "2", "--basis", "4"],
            "nu_strength,epsilon,E00_var,E_inf,E_inf_shifted,delta_E",
        ),
    ];
    for (args, header) in cases {
        let mut a = args.to_vec();
        a.extend(["--format", "csv"]);
        let o = calogero(&a);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        assert_eq!(text.lines().next(), Some(header), "{args:?}");
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }
}

#[test]
fn csv_is_byte_identical_across_runs_and_thread_counts() {
    let args = [
        "scan-renyi",
        "--nu-min",
        "0.5",
        "--nu-max",
        "3",
        "--nu-step",
        "0.5",
        "--alpha",
        "0.5,1,inf",
        "--basis",
        "20",
        "--quadrature",
        "60",
        "--format",
        "csv",
    ];
    let first = calogero(&args);
    assert_eq!(first.status.code(), Some(0));
    let again = calogero(&args);
    let single = Command::new(env!("CARGO_BIN_EXE_calogero")).args(args).env("CALOGERO_THREADS", "1").output().unwrap();
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(first.stdout, single.stdout);
    let text = stdout(&first);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row.split(',').next(), Some("5.000000000000000e-01"));
}

#[test]
fn invalid_thread_count_is_a_config_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_calogero"))
        .args(["ha-entropies", "--epsilon", "2"])
        .env("CALOGERO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# nu = 2 is finite\nnu = 4\nstatistics = boson\nexact = true\nformat = csv\n").unwrap();
    let p = path.to_str().unwrap();

    let from_file = stdout(&calogero(&["spectrum1d", "--config", p]));
    assert_eq!(from_file.lines().count(), 1 + 5);

    let overridden = stdout(&calogero(&["spectrum1d", "--config", p, "--nu", "2"]));
    assert_eq!(overridden, stdout(&calogero(&["spectrum1d", "--nu", "2", "--exact", "--format", "csv"])));
    assert_eq!(overridden.lines().count(), 1 + 3);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args = ["ha-entropies", "--epsilon", "1.5,2,4", "--format", "csv"];
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let o = calogero(&with_file);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), calogero(&args).stdout);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = dir.path().join("unknown.conf");
    std::fs::write(&unknown, "nu = 2\ncolour = blue\n").unwrap();
    let wrong_command = dir.path().join("cmd.conf");
    std::fs::write(&wrong_command, "command = crossover\nnu = 2\n").unwrap();

    let cases: [&[&str]; 8] = [
        &["spectrum1d"],
        &["spectrum1d", "--nu", "2", "--epsilon", "2"],
        &["spectrum1d", "--nu", "0.5", "--statistics", "fermion"],
        &["spectrum1d", "--nu", "abc"],
        &["spectrum1d", "--config", unknown.to_str().unwrap()],
        &["spectrum1d", "--config", wrong_command.to_str().unwrap()],
        &["spectrum2d", "--nu", "2", "--state", "lc"],
        &["crossover", "--nu-strength", "5"],
    ];
    for args in cases {
        let o = calogero(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn truncated_basis_is_a_numeric_failure() {
    let o = calogero(&["spectrum2d", "--nu", "30", "--basis", "4"]);
    assert_eq!(o.status.code(), Some(3));

    let o = calogero(&[
        "scan-renyi",
        "--dimension",
        "2",
        "--nu-min",
        "2",
        "--nu-max",
        "30",
        "--nu-step",
        "28",
        "--basis",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("nu=30"), "{err}");
    // The good point is still written.
    assert_eq!(stdout(&o).lines().count(), 2);
}
