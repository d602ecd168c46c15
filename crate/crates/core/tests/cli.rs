use std::process::{Command, Output};

use serde_json::Value;

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clausen-cert"))
        .args(args)
        .env_remove("CLAUSEN_CERT_CONFIG")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_prints_certificate() {
    let o = run_cli(&[
        "check",
        "--theorem",
        "T2.1",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "4",
        "--lambda",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "Holds");
    assert!(v["margin"].as_f64().unwrap() > 0.0);
    assert!(v["oracle_T"]["value"].as_f64().unwrap() <= 1.0 + 1e-8);
    assert_eq!(v["oracle_check"]["status"], "Consistent");
}

#[test]
fn check_reports_violated_precondition() {
    let o = run_cli(&[
        "check",
        "--theorem",
        "T4.1",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "4",
    ]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&Value> = v["preconditions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "c > |a|+|b|+2");
    assert!(v["lhs"].is_null());
}

#[test]
fn usage_errors() {
    assert_eq!(
        code(&run_cli(&[
            "check",
            "--theorem",
            "T9.9",
            "--a",
            "1",
            "--b",
            "1",
            "--c",
            "4"
        ])),
        64
    );
    let missing = run_cli(&[
        "check",
        "--theorem",
        "T3.2",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "4",
        "--lambda",
        "1",
    ]);
    assert_eq!(code(&missing), 64);
    assert!(
        stderr(&missing).contains("0 <= beta < 1"),
        "{}",
        stderr(&missing)
    );
    assert_eq!(
        code(&run_cli(&[
            "check",
            "--theorem",
            "T4.1",
            "--a",
            "1",
            "--b",
            "1",
            "--c",
            "6",
            "--lambda",
            "1"
        ])),
        64
    );
    assert_eq!(
        code(&run_cli(&[
            "check",
            "--theorem",
            "T2.1",
            "--a",
            "1",
            "--b",
            "1",
            "--c",
            "6",
            "--lambda",
            "1.5"
        ])),
        64
    );
    assert_eq!(
        code(&run_cli(&["check", "--theorem", "T2.1", "--bogus"])),
        64
    );
    assert_eq!(code(&run_cli(&[])), 64);
    assert_eq!(code(&run_cli(&["--help"])), 0);
    assert_eq!(code(&run_cli(&["--version"])), 0);
}

#[test]
fn complex_arguments_use_the_modulus() {
    let real = run_cli(&[
        "check",
        "--theorem",
        "T5.1",
        "--a",
        "1",
        "--b",
        "0.5",
        "--c",
        "4",
        "--json",
    ]);
    let cplx = run_cli(&[
        "check",
        "--theorem",
        "T5.1",
        "--a",
        "0.6+0.8i",
        "--b",
        "-0.5",
        "--c",
        "4",
        "--json",
    ]);
    let (r, c): (Value, Value) = (
        serde_json::from_str(&stdout(&real)).unwrap(),
        serde_json::from_str(&stdout(&cplx)).unwrap(),
    );
    assert_eq!(code(&real), code(&cplx));
    for key in ["a", "b", "lhs", "rhs", "margin", "verdict"] {
        assert_eq!(r[key], c[key], "{key}");
    }
    assert_eq!(c["raw_a"], serde_json::json!([0.6, 0.8]));
}

#[test]
fn scan_writes_ordered_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = run_cli(&[
        "scan",
        "--theorem",
        "T2.1",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "3.5:8:0.5",
        "--lambda",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "theorem,a,b,c,lambda,beta,lhs,rhs,margin,verdict,oracle_T"
    );
    assert_eq!(lines.len(), 11);
    let cs: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(cs.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(*cs.last().unwrap(), 8.0);
    // Every lhs printed equals the library value exactly.
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        let c: f64 = f[3].parse().unwrap();
        let cert = clausen_cert::certificate::evaluate(
            clausen_cert::certificate::TheoremId::T2_1,
            &clausen_cert::operator::OperatorParams::new(1.0, 1.0, c).unwrap(),
            Some(1.0),
            None,
            &clausen_cert::EvalConfig::default(),
        )
        .unwrap();
        assert_eq!(f[6].parse::<f64>().unwrap(), cert.lhs.unwrap());
        assert_eq!(f[9], cert.verdict.as_str());
    }
}

#[test]
fn empty_region_still_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.csv");
    let o = run_cli(&[
        "scan",
        "--theorem",
        "T3.3",
        "--a",
        "3",
        "--b",
        "3",
        "--c",
        "4:8:1",
        "--lambda",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.ends_with(",,,,PreconditionViolated,")));
}

#[test]
fn scan_jsonl_uses_csv_field_names() {
    let o = run_cli(&[
        "scan",
        "--theorem",
        "T4.2",
        "--a",
        "0.5",
        "--b",
        "0.5",
        "--c",
        "3",
        "--beta",
        "0:0.5:0.25",
        "--format",
        "jsonl",
    ]);
    assert_eq!(code(&o), 0);
    let rows: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    let header = "theorem,a,b,c,lambda,beta,lhs,rhs,margin,verdict,oracle_T";
    for r in &rows {
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        let mut want: Vec<&str> = header.split(',').collect();
        want.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, want);
    }
    assert_eq!(rows[1]["beta"], 0.25);
}

#[test]
fn scan_rejects_bad_requests() {
    let base = [
        "scan",
        "--theorem",
        "T2.1",
        "--a",
        "1",
        "--b",
        "1",
        "--lambda",
        "1",
    ];
    for c in ["4", "8:3:1", "3:8:0", "3:8"] {
        let mut args = base.to_vec();
        args.extend(["--c", c]);
        assert_eq!(code(&run_cli(&args)), 64, "--c {c}");
    }
    let mut args = base.to_vec();
    args.extend(["--c", "4:5:1", "--beta", "0.5"]);
    assert_eq!(code(&run_cli(&args)), 64);
    let mut args = base.to_vec();
    args.extend(["--c", "4:5:1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&run_cli(&args)), 74);
}

#[test]
fn verify_lemma_commands() {
    let o = run_cli(&[
        "verify-lemma",
        "--part",
        "1",
        "--default-grid",
        "--tol",
        "1e-8",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("worst rel_err"));

    let o = run_cli(&[
        "verify-lemma",
        "--part",
        "1",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "4",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["points"][0]["closed"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((v["points"][0]["brute"].as_f64().unwrap() - 1.5).abs() < 1e-12);

    let o = run_cli(&[
        "verify-lemma",
        "--part",
        "4",
        "--a",
        "1",
        "--b",
        "0.5",
        "--c",
        "5",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("skipped"));

    let o = run_cli(&["verify-lemma", "--part", "4", "--default-grid", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["points"][0]["closed_proof_form"].is_number());

    assert_eq!(
        code(&run_cli(&["verify-lemma", "--part", "7", "--default-grid"])),
        64
    );
}

#[test]
fn coeffs_dump() {
    let o = run_cli(&["coeffs", "--a", "1", "--b", "1", "--c", "4", "-n", "3"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<(usize, f64)> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| {
            let (n, b) = l.split_once(',').unwrap();
            (n.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows[0], (1, 1.0));
    assert!((rows[1].1 - 0.1).abs() < 1e-16);
    assert!((rows[2].1 - 1.0 / 35.0).abs() < 1e-16);

    let o = run_cli(&[
        "coeffs", "--a", "0.5", "--b", "0.5", "--c", "3", "-n", "100",
    ]);
    let vals: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    assert!(vals.iter().all(|&v| v > 0.0));
    assert!(vals[10..].windows(2).all(|w| w[1] < w[0]));

    let o = run_cli(&[
        "coeffs", "--a", "60", "--b", "60", "--c", "1", "-n", "10000",
    ]);
    assert_eq!(code(&o), 0);
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(
        last.starts_with("10000,3.86") && last.ends_with("e329"),
        "{last}"
    );

    assert_eq!(
        code(&run_cli(&[
            "coeffs", "--a", "1", "--b", "1", "--c", "4", "-n", "10001"
        ])),
        64
    );
}

#[test]
fn config_file_layering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("settings.toml");
    std::fs::write(&path, "max_terms = 10\n").unwrap();
    let args = [
        "check",
        "--theorem",
        "T2.1",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "3.2",
        "--lambda",
        "1",
    ];
    let run = |extra: &[&str]| {
        let mut all = args.to_vec();
        all.extend(extra);
        Command::new(env!("CARGO_BIN_EXE_clausen-cert"))
            .args(&all)
            .env("CLAUSEN_CERT_CONFIG", &path)
            .output()
            .unwrap()
    };
    // The file's tiny term cap leaves the sums unconverged...
    assert_eq!(code(&run(&[])), 3);
    // ...and the flag overrides it.
    assert_eq!(code(&run(&["--max-terms", "200000"])), 1);

    std::fs::write(&path, "unknown_key = 1\n").unwrap();
    assert_eq!(code(&run(&[])), 64);
}
