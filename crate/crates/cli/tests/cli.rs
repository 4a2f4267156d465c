use smoothdigits_cli::{dispatch, EXIT_OK, EXIT_PARTIAL, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("smoothdigits")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = dispatch(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json_lines(out: &str) -> Vec<serde_json::Value> {
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("{\"schema\":1}"));
    lines.map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn enum_example() {
    let (code, out, _) = run(&[
        "enum", "--base", "2", "--k", "2", "--take", "6", "--format", "text",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "1\n3\n5\n9\n17\n33\n");
    let (_, out, _) = run(&["enum", "--base", "2", "--k", "2", "--take", "6"]);
    let values: Vec<u64> = json_lines(&out)
        .iter()
        .map(|v| v["value"].as_u64().unwrap())
        .collect();
    assert_eq!(values, vec![1, 3, 5, 9, 17, 33]);
}

#[test]
fn factor_example() {
    let (code, out, err) = run(&["factor", "4097"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["factors"], serde_json::json!([[17, 1], [241, 1]]));
    assert_eq!(rows[0]["P"], 241);
    assert_eq!(rows[0]["omega"], 2);
}

#[test]
fn cyclo_example() {
    let (code, out, _) = run(&["cyclo", "--n", "12", "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Phi_8(2) = 17"));
    assert!(out.contains("Phi_24(2) = 241"));
    assert!(out.contains("product check OK"));
    let (_, out, _) = run(&["cyclo", "--n", "12"]);
    let r = &json_lines(&out)[0];
    assert_eq!(r["product_ok"], true);
    assert_eq!(r["factors"][0]["d"], 8);
    assert_eq!(r["factors"][1]["value"], 241);
}

#[test]
fn large_integers_are_strings() {
    let (_, out, _) = run(&["factor", "2^64+1"]);
    let r = &json_lines(&out)[0];
    assert_eq!(r["n"], "18446744073709551617");
    assert_eq!(r["P"], 67280421310721u64);
    assert_eq!(r["factors"][0][0], 274177);
}

#[test]
fn usage_errors_write_nothing_to_the_data_stream() {
    for args in [
        vec!["enum", "--base", "2", "--k", "2"],
        vec!["enum", "--base", "1", "--k", "2", "--take", "3"],
        vec!["enum", "--base", "2", "--k", "2", "--take", "3", "--bogus"],
        vec!["factor", "0"],
        vec!["factor", "12", "--primes", "4"],
        vec!["survey", "stewart", "--a", "2", "--base", "4", "--to", "9"],
        vec![
            "survey", "sparse", "--base", "2", "--k", "2", "--count", "0",
        ],
        vec![
            "survey", "sparse", "--base", "2", "--count", "5", "--f", "const:2",
        ],
        vec![
            "bounds",
            "matveev",
            "--rationals",
            "4,2",
            "--exponents",
            "1,-2",
        ],
        vec![
            "bounds",
            "yu",
            "--rationals",
            "2,3",
            "--exponents",
            "1,1",
            "--p",
            "4",
        ],
        vec!["bounds", "thresholds", "--n", "10^9", "--f", "loglog:1"],
        vec!["trace", "10", "--base", "2"],
        vec!["cyclo", "--n", "0"],
        vec![
            "--threads",
            "0",
            "enum",
            "--base",
            "2",
            "--k",
            "2",
            "--take",
            "1",
        ],
        vec!["frobnicate"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?} wrote {out:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn budget_exhaustion_exits_three() {
    // (2^61 - 1)(2^89 - 1) cannot be split with no effort
    let semiprime = (num_bigint::BigUint::from(2u32).pow(61) - 1u32)
        * (num_bigint::BigUint::from(2u32).pow(89) - 1u32);
    let (code, out, err) = run(&["factor", &semiprime.to_string(), "--budget", "0"]);
    assert_eq!(code, EXIT_PARTIAL);
    assert!(err.contains("partial"));
    let r = &json_lines(&out)[0];
    assert_eq!(r["complete"], false);
    assert!(r["P"].is_null());
    let (code, out, _) = run(&[
        "trace",
        &semiprime.to_string(),
        "--base",
        "2",
        "--budget",
        "0",
    ]);
    assert_eq!(code, EXIT_PARTIAL);
    assert!(out.is_empty());
}

#[test]
fn csv_has_a_header_and_consistent_columns() {
    for args in [
        vec![
            "survey", "sparse", "--base", "2", "--k", "3", "--count", "30",
        ],
        vec![
            "survey",
            "sparse",
            "--base",
            "10",
            "--k",
            "2",
            "--count",
            "30",
            "--windows",
        ],
        vec!["survey", "stewart", "--a", "2", "--base", "3", "--to", "40"],
        vec![
            "search", "--base", "10", "--k", "2", "--primes", "2,3,5", "--limit", "1000",
        ],
        vec!["trace", "1089", "--base", "2"],
        vec![
            "bounds", "gap", "--base", "10", "--k", "3", "--primes", "2,3",
        ],
        vec![
            "bounds",
            "thresholds",
            "--n",
            "2^64+1",
            "--gpf",
            "67280421310721",
        ],
        vec![
            "enum", "--kind", "smooth", "--primes", "2,3", "--max", "100",
        ],
    ] {
        let mut full = args.clone();
        full.extend(["--format", "csv"]);
        let (code, out, err) = run(&full);
        assert_eq!(code, EXIT_OK, "{args:?}: {err}");
        let mut lines = out.lines();
        let header = lines.next().unwrap();
        let width = header.split(',').count();
        let mut rows = 0;
        for line in lines {
            // no field in these outputs contains a comma
            assert_eq!(line.split(',').count(), width, "{args:?}: {line}");
            rows += 1;
        }
        assert!(rows > 0, "{args:?}");
    }
}

#[test]
fn jsonl_is_valid_for_every_subcommand() {
    for args in [
        vec![
            "enum",
            "--kind",
            "power-sum",
            "--bases",
            "2,3",
            "--take",
            "10",
        ],
        vec!["enum", "--base", "3", "--f", "const:2", "--max", "1000"],
        vec![
            "survey", "sparse", "--base", "2", "--k", "3", "--count", "20",
        ],
        vec![
            "survey",
            "sparse",
            "--base",
            "2",
            "--f",
            "loglog-ratio:0.5",
            "--count",
            "20",
            "--max",
            "2^40",
        ],
        vec!["trace", "2^20+9", "--base", "2"],
        vec![
            "bounds",
            "matveev",
            "--rationals",
            "2,3",
            "--exponents",
            "5,-3",
        ],
        vec![
            "bounds",
            "yu",
            "--rationals",
            "2,3/7",
            "--exponents",
            "5,-3",
            "--p",
            "7",
        ],
        vec!["bounds", "thresholds", "--n", "10^9", "--f", "const:2"],
        vec![
            "search", "--base", "2", "--k", "2", "--primes", "3", "--limit", "10^6",
        ],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, EXIT_OK, "{args:?}: {err}");
        assert!(!json_lines(&out).is_empty(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "survey", "sparse", "--base", "2", "--k", "2", "--count", "80",
    ];
    let first = run(&args);
    assert_eq!(first, run(&args));
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "1"]);
    assert_eq!(first.1, run(&threaded).1);
}

#[test]
fn search_example() {
    let (_, out, _) = run(&[
        "search", "--base", "2", "--k", "2", "--primes", "3", "--limit", "1000000", "--format",
        "text",
    ]);
    assert_eq!(out, "1 nz=1\n3 nz=2\n9 nz=2\n");
    let (_, out, _) = run(&[
        "search", "--base", "7", "--k", "2", "--primes", "2", "--limit", "1", "--format", "text",
    ]);
    assert_eq!(out, "1 nz=1\n");
}

#[test]
fn bounds_report_the_true_value() {
    let (_, out, _) = run(&[
        "bounds",
        "matveev",
        "--rationals",
        "2,3",
        "--exponents",
        "1,1",
    ]);
    let r = &json_lines(&out)[0];
    assert_eq!(r["holds"], true);
    assert!((r["actual"].as_f64().unwrap() - 5f64.ln()).abs() < 1e-12);
    let (_, out, _) = run(&["bounds", "thresholds", "--n", "10^9"]);
    let r = &json_lines(&out)[0];
    assert!((r["sparse_gpf"].as_f64().unwrap() - 32.49855008971396).abs() < 1e-9);
    assert!(r["budget_gpf"].is_null());
}

#[test]
fn help_goes_to_the_data_stream() {
    let (code, out, err) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("survey"));
    assert!(err.is_empty());
}
