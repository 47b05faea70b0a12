//! End-to-end tests of the `spinorbit` binary: output determinism, header
//! contracts, configuration precedence, and the exit-code map
//! (0 success, 1 usage/parameter/config, 2 numerical, 3 I/O).

use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spinorbit"));
    // Isolate from any ambient configuration.
    cmd.env_remove("SPINORBIT_CONFIG");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn fig2_output_is_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(run(&["fig", "2", "--out", a.to_str().unwrap()]).status.success());
    assert!(run(&["fig", "2", "--out", b.to_str().unwrap()]).status.success());
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
    // Writing to stdout produces the same bytes as writing to a file.
    let streamed = run(&["fig", "2"]);
    assert_eq!(streamed.stdout, bytes_a);
}

#[test]
fn figure_headers_match_the_contract() {
    let out5 = run(&["fig", "5"]);
    assert!(out5.status.success());
    let text = stdout(&out5);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "beta,I_up,I_down");
    assert_eq!(data_rows(&text).len(), 201);

    let swept = run(&["fig", "5", "--sweep", "theta", "--theta", "0.0"]);
    assert!(swept.status.success());
    let text = stdout(&swept);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "theta,I_up,I_down");
}

#[test]
fn fig1_header_and_grid_with_light_config() {
    // The default SPP expansion is deliberately deep; a lighter
    // configuration exercises the same path quickly.
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("light.conf");
    std::fs::write(&conf, "n_max_spp = 40\nell_window = 12\nquadrature_order = 64\n").unwrap();
    let out = run(&["fig", "1", "--config", conf.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "q,p_n0_l0,p_n0_l1,p_n0_lm1,p_n1_l1,p_n1_lm1");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 81);
    assert_eq!(rows[0][0], -2.0);
    assert!((rows[80][0] - 2.0).abs() < 1e-12);
    // q = 0 row (index 40) is the identity: all probability in (0, 0).
    assert!((rows[40][1] - 1.0).abs() < 1e-12);
}

#[test]
fn fig4_locates_the_flat_maximum() {
    let out = run(&["fig", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "ratio,conc_traced");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 401);
    let (argmax, max) = rows
        .iter()
        .map(|r| (r[0], r[1]))
        .fold((0.0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    assert!((argmax - 1.875).abs() < 1e-12, "argmax {argmax}");
    assert!(
        ((max - 0.9716066541) / 0.9716066541).abs() < 1e-8,
        "max {max:.12}"
    );
}

#[test]
fn jsonl_format_emits_keyed_rows() {
    let out = run(&["fig", "5", "--format", "jsonl"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("\"schema\":\"spinorbit-sweep-v1\""));
    let first = lines.next().unwrap();
    assert!(first.starts_with("{\"beta\":"));
    assert!(first.contains("\"I_up\":"));
}

#[test]
fn config_precedence_flags_over_file_over_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "format = jsonl\n").unwrap();
    let path = conf.to_str().unwrap();

    // File overrides the CSV default.
    let filed = run(&["fig", "5", "--config", path]);
    assert!(stdout(&filed).starts_with('{'));
    // Flag overrides the file.
    let flagged = run(&["fig", "5", "--config", path, "--format", "csv"]);
    assert!(stdout(&flagged).starts_with("# schema"));
    // Environment variable supplies the default path ...
    let via_env = bin()
        .args(["fig", "5"])
        .env("SPINORBIT_CONFIG", path)
        .output()
        .unwrap();
    assert!(stdout(&via_env).starts_with('{'));
    // ... and an explicit --config beats it.
    let other = dir.path().join("other.conf");
    std::fs::write(&other, "# nothing overridden\n").unwrap();
    let explicit = bin()
        .args(["fig", "5", "--config", other.to_str().unwrap()])
        .env("SPINORBIT_CONFIG", path)
        .output()
        .unwrap();
    assert!(stdout(&explicit).starts_with("# schema"));
}

#[test]
fn exit_codes_follow_the_error_taxonomy() {
    // Usage errors (clap) and parameter/config errors exit 1.
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["fig", "7"]).status.code(), Some(1));
    assert_eq!(run(&["fig", "3", "--theta", "1.0"]).status.code(), Some(1));
    assert_eq!(
        run(&["sweep", "--param", "bogus", "--from", "0", "--to", "1", "--step", "0.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["fig", "5", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(run(&["design", "0", "10", "0.271", "100"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad_key = dir.path().join("bad.conf");
    std::fs::write(&bad_key, "no_such_key = 3\n").unwrap();
    assert_eq!(
        run(&["fig", "5", "--config", bad_key.to_str().unwrap()]).status.code(),
        Some(1)
    );

    // I/O errors exit 3.
    assert_eq!(
        run(&["fig", "5", "--config", "/no/such/file.conf"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["fig", "5", "--out", "/no/such/dir/out.csv"]).status.code(),
        Some(3)
    );

    // Help and version are successes.
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn check_prints_one_line_per_criterion() {
    let out = run(&["check"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11, "expected 11 criterion lines:\n{text}");
    for (index, line) in lines.iter().enumerate() {
        assert!(
            line.starts_with("PASS") || line.starts_with("FAIL"),
            "line {index}: {line}"
        );
    }
    // Exit code mirrors the report: 0 only when every line passes.
    let failures = lines.iter().filter(|l| l.starts_with("FAIL")).count();
    let expected = if failures == 0 { 0 } else { 2 };
    assert_eq!(out.status.code(), Some(expected));
}

#[test]
fn design_reports_the_reference_scenario() {
    let out = run(&["design", "13.8", "10", "0.271", "100"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("v_z         = 1.459791147471e3 m/s"), "{text}");
    assert!(text.contains("r_c         = 1.813527866486e-7 m"), "{text}");
    assert!(text.contains("ratio       = 1.813527866486e0"), "{text}");
    assert!(text.contains("conc_traced"), "{text}");
}

#[test]
fn sweep_subcommand_covers_all_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("light.conf");
    std::fs::write(&conf, "n_max_spp = 40\nell_window = 12\nquadrature_order = 64\n").unwrap();

    let q = run(&[
        "sweep", "--param", "q", "--from", "-0.5", "--to", "0.5", "--step", "0.5",
        "--config", conf.to_str().unwrap(),
    ]);
    assert!(q.status.success());
    let text = stdout(&q);
    assert!(text.lines().any(|l| l == "q,p_n0_l0,p_n0_l1,p_n0_lm1,p_n1_l1,p_n1_lm1"));
    assert_eq!(data_rows(&text).len(), 3);

    let ratio = run(&["sweep", "--param", "ratio", "--from", "1.8", "--to", "1.9", "--step", "0.05"]);
    assert!(ratio.status.success());
    let text = stdout(&ratio);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("ratio,conc_eta0"));
    assert!(header.ends_with("conc_traced"));

    let theta = run(&["sweep", "--param", "theta", "--from", "0", "--to", "3.14", "--step", "1.57"]);
    assert!(theta.status.success());
    assert!(stdout(&theta).lines().any(|l| l == "theta,I_up,I_down"));
}
