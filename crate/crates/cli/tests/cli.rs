use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ellip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellip")).args(args).env("ELLIP_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn table(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn record<'a>(rows: &'a [Vec<String>], name: &str) -> &'a [String] {
    rows.iter().find(|r| r[1] == name).unwrap_or_else(|| panic!("missing record {name}"))
}

#[test]
fn prop45_at_p2() {
    let o = ellip(&["verify", "--p", "2", "--suite", "prop45"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = table(&o);
    let hz = record(&rows, "t=0.h_z");
    let hw = record(&rows, "t=0.h_w");
    assert_eq!(hz[3], "-0.8");
    assert_eq!(hw[3], "-0.8125");
    assert!((hz[2].parse::<f64>().unwrap() + 0.8).abs() < 1e-12);
    assert!((hw[2].parse::<f64>().unwrap() + 0.8125).abs() < 1e-12);
    assert!(rows.iter().all(|r| r[7] == "true"));
}

#[test]
fn einstein_on_the_ball() {
    let o = ellip(&["verify", "--p", "1", "--suite", "einstein"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = table(&o);
    assert_eq!(rows.len(), 20);
    for r in &rows {
        assert!(r[2].parse::<f64>().unwrap() <= 1e-9, "{r:?}");
    }
}

#[test]
fn einstein_fails_off_the_ball() {
    let o = ellip(&["verify", "--p", "2", "--suite", "einstein", "--count", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("einstein/pt0.ric_plus_g"));
}

#[test]
fn sweep_ratios_are_constant() {
    let o = ellip(&["sweep", "--p", "2", "--path", "z:0..0.999,w:0", "--emit", "ratios"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = table(&o);
    assert_eq!(rows.len(), 100);
    let (i1, i2) = (column(&header, "ricci.ratio11"), column(&header, "ricci.ratio22"));
    for r in &rows {
        let (a, b): (f64, f64) = (r[i1].parse().unwrap(), r[i2].parse().unwrap());
        assert!((a + 1.0).abs() < 1e-9 && (b + 1.0125).abs() < 1e-9, "{r:?}");
    }
}

#[test]
fn suites_pass_where_expected() {
    for (p, suite) in [
        ("2", "kernel"),
        ("1", "kernel"),
        ("0.75", "prop42"),
        ("3", "prop43"),
        ("1.5", "prop44"),
        ("1", "prop44"),
        ("3", "prop31"),
        ("2", "yin-compare"),
        ("1", "yin-compare"),
    ] {
        let o = ellip(&["verify", "--p", p, "--suite", suite, "--count", "5"]);
        assert_eq!(o.status.code(), Some(0), "{suite} p={p}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn bracket_suite() {
    let o = ellip(&["verify", "--p", "2", "--suite", "bracket", "--count", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = table(&o);
    let ratio: f64 = record(&rows, "origin.e1.ratio")[2].parse().unwrap();
    assert!((ratio - 2.5f64.sqrt()).abs() < 1e-6);
}

#[test]
fn yin_comparison_fails_below_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp.csv");
    let o = ellip(&["compare", "--p", "0.75", "--count", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 0"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().ends_with(",false"));
}

#[test]
fn usage_errors_exit_2_without_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = out.to_str().unwrap();
    for args in [
        vec!["verify", "--suite", "prop45", "--out", o],
        vec!["verify", "--p", "2", "--suite", "nope", "--out", o],
        vec!["eval", "--p", "-1", "--point", "0,0", "--out", o],
        vec!["eval", "--p", "2", "--point", "0,0", "--tol", "0", "--out", o],
        vec!["eval", "--p", "2", "--point", "0.9,0.9", "--out", o],
        vec!["eval", "--p", "2", "--point", "0,0", "--direction", "0,0", "--out", o],
        vec!["sweep", "--p", "2", "--path", "z:0..1.2", "--out", o],
        vec!["compare", "--p", "0.4", "--out", o],
        vec!["yin-check", "--p", "2", "--grid", "0", "--out", o],
    ] {
        let r = ellip(&args);
        assert_eq!(r.status.code(), Some(2), "{args:?}");
        assert!(!out.exists(), "{args:?}");
    }
    let r = Command::new(env!("CARGO_BIN_EXE_ellip"))
        .args(["verify", "--p", "2", "--suite", "prop45"])
        .env("ELLIP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["sweep", "--p", "3", "--path", "z:0..0.9,w:0.1i", "--count", "12", "--direction", "1,0.5i"];
    let a = ellip(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_ellip")).args(args).env("ELLIP_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = ["verify", "--p", "2", "--suite", "prop42", "--seed", "9", "--format", "json"];
    assert_eq!(ellip(&v).stdout, ellip(&v).stdout);
}

#[test]
fn json_report_names_formula_paths() {
    let o = ellip(&["verify", "--p", "2", "--suite", "prop42", "--count", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::json!(true));
    assert_eq!(v["provenance"]["prop42/pt0.oracle_vs_closed"], "oracle");
    assert_eq!(v["provenance"]["prop42/pt0.symbolic_vs_closed"], "symbolic");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);

    let e = ellip(&["eval", "--p", "2", "--point", "0.3,0.2i", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&e.stdout).unwrap();
    assert_eq!(v["provenance"]["metric.g11"], "symbolic");
    assert_eq!(v["provenance"]["bracket.upper"], "certified");
    let cols: Vec<&str> = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let keys: Vec<&str> = v["rows"][0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(cols, keys);
}

#[test]
fn eval_at_the_origin() {
    let o = ellip(&["eval", "--p", "2", "--point", "0,0"]);
    let (header, rows) = table(&o);
    let g = |name: &str| rows[0][column(&header, name)].parse::<f64>().unwrap();
    assert!((g("metric.g11") - 2.5).abs() < 1e-12);
    assert!((g("metric.g22") - 8.0 / 3.0).abs() < 1e-12);
    assert!((g("hsc.z") + 0.8).abs() < 1e-12);
    assert!((g("bracket.lower") - 1.0).abs() < 1e-9 && (g("bracket.upper") - 1.0).abs() < 1e-9);
    assert!((g("yin.y11") - 2.5).abs() < 1e-12 && (g("yin.y22") - 5.0).abs() < 1e-12);
    assert!(g("yin.min_eig_diff") >= 0.0);

    let neg = ellip(&["eval", "--p", "2", "--point", "-0.2i,0.5", "--direction", "-1,0"]);
    assert_eq!(neg.status.code(), Some(0), "{}", String::from_utf8_lossy(&neg.stderr));

    let low = ellip(&["eval", "--p", "0.4", "--point", "0.1,0.1"]);
    assert_eq!(low.status.code(), Some(0));
    let (header, _) = table(&low);
    assert!(!header.iter().any(|h| h.starts_with("yin.") || h.starts_with("bracket.")));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sub.csv");
    let args = ["verify", "--p", "2", "--suite", "prop44"];
    let o = ellip(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), ellip(&args).stdout);
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Regenerate with `ELLIP_BLESS=1`.
fn check_golden(name: &str, args: &[&str]) {
    let o = ellip(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let path = golden(name);
    if std::env::var_os("ELLIP_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &o.stdout).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    let actual = stdout(&o);
    for (k, (a, e)) in actual.lines().zip(expected.lines()).enumerate() {
        assert_eq!(a, e, "{name} line {}", k + 1);
    }
    assert_eq!(actual.lines().count(), expected.lines().count(), "{name}");
}

#[test]
fn golden_sweep() {
    check_golden("sweep_p2.csv", &["sweep", "--p", "2", "--path", "z:0..0.9,w:0.2", "--count", "10", "--emit", "all"]);
}

#[test]
fn golden_prop43() {
    check_golden("prop43_p3.csv", &["verify", "--p", "3", "--suite", "prop43"]);
}
