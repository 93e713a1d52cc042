use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use matroid_bandit::greedy::greedy_max_basis;
use matroid_bandit::report::{RunManifest, TRACE_HEADER};
use matroid_bandit::RunConfig;

fn omm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omm"))
        .args(args)
        .current_dir(dir)
        .env_remove("OMM_OUTPUT_DIR")
        .output()
        .expect("omm runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn assert_ok(o: &Output) {
    assert!(
        o.status.success(),
        "status {:?}\nstdout:\n{}\nstderr:\n{}",
        o.status,
        stdout(o),
        String::from_utf8_lossy(&o.stderr)
    );
}

fn generate(dir: &Path, args: &[&str]) -> PathBuf {
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", "inst"]);
    assert_ok(&omm(&full, dir));
    dir.join("inst").join("config.toml")
}

#[test]
fn generated_partition_instance_has_min_index_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let config = generate(
        dir.path(),
        &["partition", "--L", "20", "--K", "4", "--delta", "0.1"],
    );
    let cfg = RunConfig::from_file(&config).unwrap();
    let instance = cfg.build_instance().unwrap();
    assert_eq!(instance.matroid.rank(), 4);
    let basis = greedy_max_basis(&instance.matroid, instance.environment.mean_vector());
    assert_eq!(basis, vec![0, 5, 10, 15]);
}

#[test]
fn verify_passes_on_generated_instances() {
    let dir = tempfile::tempdir().unwrap();
    let config = generate(dir.path(), &["partition", "--L", "8", "--K", "3"]);
    let out = omm(
        &["verify", config.to_str().unwrap(), "--cases", "10"],
        dir.path(),
    );
    assert_ok(&out);
    let text = stdout(&out);
    for suite in [
        "matroid axioms",
        "greedy vs brute force",
        "exchange bijection",
        "regret decomposition",
    ] {
        assert!(
            text.lines()
                .any(|l| l.starts_with("pass") && l.contains(suite)),
            "{text}"
        );
    }
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = generate(
        dir.path(),
        &[
            "partition",
            "--L",
            "10",
            "--K",
            "2",
            "--horizon",
            "500",
            "--replications",
            "3",
        ],
    );
    let c = config.to_str().unwrap();
    assert_ok(&omm(&["run", c, "--output", "a"], dir.path()));
    assert_ok(&omm(&["run", c, "--output", "b"], dir.path()));
    for file in ["traces.csv", "summary.csv"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{file} differs");
    }
    let traces = std::fs::read_to_string(dir.path().join("a/traces.csv")).unwrap();
    let mut lines = traces.lines();
    assert_eq!(lines.next(), Some(TRACE_HEADER));
    // 3 policies x 3 replications x 500 episodes
    assert_eq!(lines.count(), 4500);
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = generate(
        dir.path(),
        &[
            "graphic",
            "--vertices",
            "6",
            "--edges",
            "9",
            "--horizon",
            "300",
            "--replications",
            "2",
        ],
    );
    // keep the Monte Carlo estimate cheap
    let text = std::fs::read_to_string(&config).unwrap();
    std::fs::write(
        &config,
        text.replace(
            "type = \"edge_list\"",
            "type = \"edge_list\"\nmc_samples = 5000",
        ),
    )
    .unwrap();

    let first = dir.path().join("first");
    assert_ok(&omm(
        &[
            "run",
            config.to_str().unwrap(),
            "--output",
            first.to_str().unwrap(),
        ],
        dir.path(),
    ));
    let manifest_path = first.join("manifest.toml");
    let manifest =
        RunManifest::from_toml(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    let cfg = RunConfig::from_file(&config).unwrap();
    assert_eq!(manifest.config.instance, cfg.instance);
    assert_eq!(manifest.replication_seeds, vec![0, 1]);
    assert_eq!(
        manifest.mean_weights,
        cfg.build_instance().unwrap().environment.mean_vector()
    );
    assert_eq!(
        RunManifest::from_toml(&manifest.to_toml()).unwrap(),
        manifest
    );

    let second = dir.path().join("second");
    let out = Command::new(env!("CARGO_BIN_EXE_omm"))
        .args(["run", manifest_path.to_str().unwrap()])
        .env("OMM_OUTPUT_DIR", &second)
        .output()
        .unwrap();
    assert_ok(&out);
    assert_eq!(
        std::fs::read(first.join("traces.csv")).unwrap(),
        std::fs::read(second.join("traces.csv")).unwrap()
    );
}

#[test]
fn every_family_generates_and_runs() {
    for family in ["uniform", "transversal", "linear"] {
        let dir = tempfile::tempdir().unwrap();
        let config = generate(
            dir.path(),
            &[
                family,
                "--L",
                "12",
                "--K",
                "3",
                "--horizon",
                "50",
                "--replications",
                "2",
                "--instrument",
            ],
        );
        let out = omm(&["run", config.to_str().unwrap()], dir.path());
        assert_ok(&out);
        assert!(
            dir.path().join("inst/output/summary.csv").exists(),
            "{family}"
        );
        assert_ok(&omm(&["bounds", config.to_str().unwrap()], dir.path()));
    }
}

#[test]
fn bounds_prints_the_envelope() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("lb.toml"),
        r#"
seed = 0
horizon = 10000
policies = [{ name = "omm" }]

[instance]
type = "lower_bound"
items = 20
rank = 4
delta = 0.1
"#,
    )
    .unwrap();
    let out = omm(&["bounds", "lb.toml"], dir.path());
    assert_ok(&out);
    let text = stdout(&out);
    let row = text
        .lines()
        .find(|l| l.split_whitespace().next() == Some("10000"))
        .unwrap_or_else(|| panic!("{text}"));
    let cols: Vec<f64> = row.split_whitespace().map(|x| x.parse().unwrap()).collect();
    // 16 * 160 ln n + 16 * 4 * 0.1 * (4/3) pi^2, and the asymptotic lower bound
    let n = 1e4_f64;
    let gap_dependent = 16.0 * 160.0 * n.ln() + 6.4 * 4.0 / 3.0 * std::f64::consts::PI.powi(2);
    assert!((cols[1] - gap_dependent).abs() < 1e-2, "{row}");
    assert!((cols[3] - 40.0 * n.ln()).abs() < 1e-2, "{row}");
}

#[test]
fn usage_and_validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(omm(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(omm(&[], dir.path()).status.code(), Some(1));
    assert_eq!(
        omm(&["run", "--bogus", "x"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(
        omm(&["run", "missing.toml"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(omm(&["--help"], dir.path()).status.code(), Some(0));

    std::fs::write(
        dir.path().join("bad.toml"),
        "seed = 0\nhorizon = 0\npolicies = [{ name = \"omm\" }]\n[instance]\ntype = \"lower_bound\"\nitems = 4\nrank = 2\ndelta = 0.1\n",
    )
    .unwrap();
    let out = omm(&["run", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));
}
