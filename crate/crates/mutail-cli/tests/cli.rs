//! End-to-end CLI behavior through the library entry point: exit codes,
//! CSV shape, zero-table loading, the block cache, and env overrides.

use mutail_cli::{run, EXIT_DOMAIN, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("mutail".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn usage_errors_exit_64() {
    let (code, _, err) = call(&["msum", "--no-such-flag"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("error"));
    let (code, _, _) = call(&["definitely-not-a-subcommand"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("msum"));
}

#[test]
fn domain_errors_exit_1() {
    // sigma <= 1 is outside the absolute-convergence region
    let (code, _, err) = call(&["msum", "--s", "0.5", "--x", "1"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("Re s > 1"), "stderr: {err}");
}

#[test]
fn unreachable_tolerance_exits_2() {
    let (code, _, err) = call(&[
        "msum", "--s", "1.5", "--x", "1", "--tol", "1e-30", "--capacity", "1000000",
    ]);
    assert_eq!(code, EXIT_NONCONVERGENCE);
    assert!(err.contains("tolerance"), "stderr: {err}");
}

#[test]
fn msum_emits_one_row_with_error_column() {
    let (code, out, err) = call(&["msum", "--s", "1.5", "--x", "100", "--tol", "1e-4"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# schema: mutail-csv v1"));
    let header = lines.iter().find(|l| l.starts_with("s_re")).unwrap();
    assert_eq!(
        *header,
        "s_re,s_im,x,value_re,value_im,abs_value,error,error_model,cutoff_n"
    );
    let data = lines.last().unwrap();
    assert!(data.contains("mertens-heuristic"));
    // manifest lands on stderr and is valid JSON
    let manifest: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(manifest["command"], "msum");
    assert_eq!(manifest["zeros"], "bundled");
}

#[test]
fn verify_identities_exits_zero_when_all_pass() {
    let (code, out, _) = call(&["verify-identities", "--s", "2.5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("12 of 12 identities pass"), "{out}");
    assert!(!out.contains(",false"));
}

#[test]
fn zero_table_flag_loads_files_and_rejects_bad_ones() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("zeros.txt");
    std::fs::write(&good, "# one zero\n14.134725141734693790\n").unwrap();
    let (code, out, _) = call(&[
        "residue-approx",
        "--s",
        "2.5",
        "--x",
        "50",
        "--nmax",
        "0",
        "--zero-pairs",
        "1",
        "--zeros",
        good.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("zero_pole"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "20\n10\n").unwrap();
    let (code, _, err) = call(&[
        "residue-approx",
        "--s",
        "2.5",
        "--x",
        "50",
        "--zeros",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("strictly increasing"), "stderr: {err}");
}

#[test]
fn sieve_cache_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("block.bin");
    let (code, out, _) = call(&[
        "sieve",
        "--start",
        "1000",
        "--len",
        "50",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "1000,0"));

    let bytes = std::fs::read(&cache).unwrap();
    assert_eq!(bytes.len(), 16 + 50);
    assert_eq!(u64::from_le_bytes(bytes[0..8].try_into().unwrap()), 1000);
    assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 50);
    let block = mutail::moebius::MoebiusBlock::read_from(bytes.as_slice()).unwrap();
    assert_eq!(block.start, 1000);
    let sieve = mutail::moebius::MoebiusSieve::new(2000);
    assert_eq!(block.values, sieve.sieve_block(1000, 50).unwrap().values);
}

#[test]
fn watson_ratio_approaches_one() {
    let (code, out, _) = call(&["watson", "--s", "2", "--xmin", "1e3", "--xmax", "1e5", "--points", "3"]);
    assert_eq!(code, EXIT_OK);
    let last = out.lines().next_back().unwrap();
    let dev: f64 = last.split(',').next_back().unwrap().parse().unwrap();
    assert!(dev < 1e-4, "|ratio - 1| = {dev}");
}

#[test]
fn synthetic_fit_recovers_the_planted_slope() {
    let (code, out, _) = call(&[
        "fit",
        "--s",
        "1.5",
        "--synthetic-slope=-1",
        "--points",
        "60",
        "--seed",
        "123",
    ]);
    assert_eq!(code, EXIT_OK);
    let summary = out.lines().find(|l| l.starts_with("# summary")).unwrap();
    assert!(summary.contains("verdict=consistent"), "{summary}");
    let fitted: f64 = summary
        .split("fitted_slope=")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((fitted - (-1.0)).abs() < 0.1, "fitted {fitted}");
}

#[test]
fn env_overrides_are_honored_and_recorded() {
    // env handling is process-global; this test sets and clears its own key
    std::env::set_var("MUTAIL_MERTENS_A", "0.8");
    let (code, _, err) = call(&["msum", "--s", "2.5", "--x", "1", "--tol", "1e-6"]);
    std::env::remove_var("MUTAIL_MERTENS_A");
    assert_eq!(code, EXIT_OK);
    let manifest: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(manifest["mertens_a"], 0.8);
}
