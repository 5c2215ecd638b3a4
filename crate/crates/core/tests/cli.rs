use std::path::Path;
use std::process::{Command, Output};

use belllab::cli::{OutputFormat, Report, Results};

fn belllab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_belllab"))
        .args(args)
        .env_remove("BELLLAB_DEFAULT_SEED")
        .output()
        .expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (Output, Vec<u8>) {
    let out = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let path = out.to_str().unwrap().to_string();
    all.extend(["--out", &path]);
    let o = belllab(&all);
    let bytes = std::fs::read(&out).unwrap_or_default();
    (o, bytes)
}

#[test]
fn reruns_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["run-chsh", "--model", "hall", "--samples", "50000", "--seed", "42", "--format", "csv"];
    let (o1, first) = run_to(dir.path(), "a.csv", &[&args[..], &["--workers", "1"]].concat());
    let (o2, second) = run_to(dir.path(), "b.csv", &[&args[..], &["--workers", "3"]].concat());
    assert!(o1.status.success() && o2.status.success());
    assert!(!first.is_empty());
    assert_eq!(first, second);
    let stdout = String::from_utf8_lossy(&o1.stdout);
    assert!(stdout.contains("S = ") && stdout.contains("wall-clock"));
}

#[test]
fn reports_round_trip_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["run-chsh", "--model", "pr-box", "--samples", "2000"],
        &["scan-settings", "--model", "delta-mixture", "--grid", "4"],
        &["schulman-paths", "--gamma", "1e-3", "--samples", "200", "--steps", "20"],
        &["two-photon", "--gamma", "1e-2"],
    ];
    for (i, args) in cases.iter().enumerate() {
        for format in ["csv", "json"] {
            let name = format!("{i}.{format}");
            let (o, bytes) = run_to(dir.path(), &name, &[args, &["--format", format][..]].concat());
            assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
            let text = String::from_utf8(bytes).unwrap();
            let fmt = if format == "csv" { OutputFormat::Csv } else { OutputFormat::Json };
            let report = Report::parse(&text, fmt).unwrap();
            assert_eq!(report.render(fmt).unwrap(), text, "{args:?} {format}");
        }
    }
}

#[test]
fn pr_box_and_scan_results() {
    let o = belllab(&["run-chsh", "--model", "pr-box", "--samples", "1000"]);
    assert!(o.status.success());
    let r = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let Results::Chsh(c) = r.results else { panic!("wrong kind") };
    assert_eq!(c.s, 4.0);
    assert!((c.screening[3].residual - 0.25).abs() < 0.1);
    assert_eq!(c.lambda_independence, None);

    let o = belllab(&["scan-settings", "--model", "hall", "--grid", "16"]);
    let r = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let Results::Scan(s) = r.results else { panic!("wrong kind") };
    assert_eq!(s.rows.len(), 256);
    assert!(s.max_abs_diff < 1e-9);

    let o = belllab(&["scan-settings", "--model", "qm-reference", "--grid", "8"]);
    let r = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let Results::Scan(s) = r.results else { panic!("wrong kind") };
    assert_eq!(s.max_abs_diff, 0.0);
}

#[test]
fn mutual_information_runs_for_hall_only() {
    let o = belllab(&["mutual-info"]);
    assert!(o.status.success());
    let r = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let Results::MutualInfo(m) = r.results else { panic!("wrong kind") };
    assert!(m.bits < 0.07 && m.error_estimate < 1e-3);

    let o = belllab(&["mutual-info", "--model", "delta-mixture"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("without bound"));
}

#[test]
fn single_step_paths_have_one_bin() {
    let o = belllab(&["schulman-paths", "--gamma", "1e-3", "--steps", "1", "--samples", "50"]);
    assert!(o.status.success());
    let r = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let Results::Paths(p) = r.results else { panic!("wrong kind") };
    assert_eq!(p.kick_time_histogram, vec![50]);
    assert!(p.endpoints_exact);
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 8] = [
        &["run-chsh"],
        &["run-chsh", "--model", "nonsense"],
        &["run-chsh", "--model", "schulman-2"],
        &["run-chsh", "--model", "hall", "--gamma", "0.1"],
        &["run-chsh", "--model", "schulman-1", "--gamma", "0.1"],
        &["run-chsh", "--model", "hall", "--settings", "0,1,2"],
        &["scan-settings", "--model", "pr-box"],
        &["two-photon", "--gamma", "1e-3", "--lambda-grid", "1024"],
    ];
    for args in cases {
        let o = belllab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(belllab(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn config_file_env_and_flags_layer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    std::fs::write(&cfg, "# experiment\nmodel = local-baseline\nsamples = 3000\nsettings = 0, 0.25pi, 0.125pi, -0.125pi\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let seed_of = |o: Output| {
        let r = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
        assert_eq!(r.config.samples, 3000);
        r.config.seed
    };
    let with_env = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_belllab"))
            .args(args)
            .env("BELLLAB_DEFAULT_SEED", "77")
            .output()
            .unwrap()
    };
    assert_eq!(seed_of(belllab(&["run-chsh", "--config", cfg])), 0);
    assert_eq!(seed_of(with_env(&["run-chsh", "--config", cfg])), 77);
    assert_eq!(seed_of(with_env(&["run-chsh", "--config", cfg, "--seed", "5"])), 5);

    // a different seed gives different samples, the same seed the same
    let a = with_env(&["run-chsh", "--config", cfg]).stdout;
    let b = with_env(&["run-chsh", "--config", cfg]).stdout;
    let c = belllab(&["run-chsh", "--config", cfg, "--seed", "78"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}
