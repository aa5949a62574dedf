use std::path::Path;
use std::process::{Command, Output};

fn zmpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zmpl")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_value(text: &str, model: &str, key: &str) -> f64 {
    text.lines()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f.len() == 3 && f[0] == model && f[1] == key)
        .unwrap_or_else(|| panic!("no {model}/{key} row"))[2]
        .parse()
        .unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn fit_builtin_cytogenetic() {
    let out = zmpl(&["fit", "--data", "builtin:cytogenetic", "--boot", "100", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!((csv_value(&s, "zmpl", "theta") - 2.4098).abs() < 5e-4);
    assert!((csv_value(&s, "zmpl", "pi") - 0.1165).abs() < 5e-4);
    assert!((csv_value(&s, "zmpl", "gradient_statistic") - 114.49).abs() < 0.1);
    assert!((csv_value(&s, "zmpl", "aci_theta_lower") - 1.8904).abs() < 0.01);
}

#[test]
fn fit_strikes_pl_baseline() {
    let out = zmpl(&["fit", "--data", "builtin:strikes", "--model", "pl", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!((csv_value(&s, "pl", "theta") - 1.4010).abs() < 1e-3);
    assert!(!s.lines().any(|l| l.starts_with("zmpl,")));
}

#[test]
fn formats_carry_the_same_estimates() {
    let base = ["fit", "--data", "builtin:cytogenetic", "--boot", "50", "--seed", "7"];
    let run = |fmt: &str| {
        let mut a = base.to_vec();
        a.extend(["--format", fmt]);
        let out = zmpl(&a);
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
    };
    let csv = run("csv");
    let json: serde_json::Value = serde_json::from_str(run("json-lines").lines().next().unwrap()).unwrap();
    let text = run("text");

    let theta = csv_value(&csv, "zmpl", "theta");
    assert_eq!(json["estimates"][0]["value"].as_f64().unwrap(), theta);
    assert_eq!(
        json["bootstrap"]["theta_bias_corrected"].as_f64().unwrap(),
        csv_value(&csv, "zmpl", "theta_bias_corrected")
    );
    assert!(text.contains(&format!("{theta:.4}")));
}

#[test]
fn raw_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "raw.txt", "0\n0\n1\n2\n");
    let out = zmpl(&["fit", "--data", &path, "--boot", "0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv_value(&stdout(&out), "zmpl", "n"), 4.0);

    let out = zmpl(&["gof", "--data", &path, "--model", "poisson", "--format", "csv"]);
    let observed: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').take(3).collect::<Vec<_>>().join(","))
        .collect();
    assert_eq!(observed, ["poisson,0,2", "poisson,1,1", "poisson,>=2,1"]);
}

#[test]
fn failing_bootstrap_exits_three() {
    // four observations: most refits land on the theta search limit
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "raw.txt", "0\n0\n1\n2\n");
    let out = zmpl(&["fit", "--data", &path, "--boot", "20"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bootstrap"));
}

#[test]
fn bad_data_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, contents) in [("empty.txt", ""), ("neg.txt", "0\n-1\n"), ("frac.txt", "1.5\n2\n")] {
        let path = write(dir.path(), name, contents);
        let out = zmpl(&["fit", "--data", &path]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(!out.stderr.is_empty());
    }
    let out = zmpl(&["fit", "--data", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(zmpl(&["simulate", "--reps", "0"]).status.code(), Some(1));
    assert_eq!(zmpl(&["fit", "--data", "builtin:cytogenetic", "--level", "1.5"]).status.code(), Some(1));
    assert_eq!(zmpl(&["simulate", "--theta", "2", "--pi", "-5", "--reps", "10"]).status.code(), Some(1));
    assert_eq!(zmpl(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(zmpl(&["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "simulate", "--n", "30", "--theta", "1.5", "--pi", "0.1", "--reps", "40", "--boot", "30",
            "--seed", "11", "--format", "csv", "--out", out,
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let argv = args(d.to_str().unwrap());
        let out = zmpl(&argv.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["point.csv", "coverage.csv"] {
        let x = std::fs::read(a.join(f)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn sdplot_rows_cover_support_and_models() {
    let out = zmpl(&["sdplot", "--data", "builtin:strikes"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    let rows: Vec<Vec<&str>> = s.lines().skip(1).map(|l| l.split(',').collect()).collect();
    // strikes: support 0..=4, four models
    assert_eq!(rows.len(), 5 * 4);
    let at_zero: Vec<f64> = rows.iter().filter(|r| r[0] == "0").map(|r| r[5].parse().unwrap()).collect();
    assert_eq!(at_zero.iter().fold(0.0f64, |m, d| m.max(d.abs())), 1.0);
    let pl_zero = rows.iter().find(|r| r[0] == "0" && r[1] == "pl").unwrap();
    assert_eq!(pl_zero[5].parse::<f64>().unwrap(), -1.0);
}

#[test]
fn gof_all_models() {
    let out = zmpl(&["gof", "--data", "builtin:strikes", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    for m in ["poisson", "zmp", "pl", "zmpl"] {
        assert!(s.lines().any(|l| l.starts_with(&format!("{m},"))), "{m}");
    }
}
