use std::path::Path;
use std::process::{Command, Output};

fn hpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn field(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().parse().unwrap()))
        .unwrap_or_else(|| panic!("no {key} line in\n{out}"))
}

#[test]
fn figure1_shape_and_far_right_row() {
    let o = hpm(&["figure", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\nS,exact,hpm1,hpm2\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 201);
    assert!(rows.iter().all(|r| r.len() == 4));
    let last = rows.last().unwrap();
    assert_eq!(last[0], 100.0);
    assert!((last[3] - last[1]).abs() < 1e-3);
    assert!(!text.contains('\r'));
}

#[test]
fn output_is_byte_stable_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let o = hpm(&["--threads", threads, "figure", "4", "--out", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert_eq!(data_rows(std::str::from_utf8(&x).unwrap()).len(), 41 * 41);
}

#[test]
fn timestamp_is_opt_in() {
    assert!(!stdout(&hpm(&["figure", "1"])).contains("generated_unix_time"));
    assert!(stdout(&hpm(&["figure", "1", "--timestamp"])).contains("# generated_unix_time: "));
}

#[test]
fn price_regressions() {
    let o = stdout(&hpm(&["price", "single", "--method", "exact", "--spot", "40"]));
    assert!((field(&o, "price") - 3.134_164_972_563_290_5).abs() < 1e-10);
    let o = stdout(&hpm(&["price", "quanto", "--method", "exact", "--s1", "40", "--s2", "40"]));
    assert!((field(&o, "price") - 96.956_041_399_409_98).abs() < 1e-8);
    let o = stdout(&hpm(&["price", "single", "--spot", "40"]));
    assert!(field(&o, "deviation").abs() < 1e-3);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"contract": "single", "method": "exact", "spot": 40, "rate": 0.1}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = stdout(&hpm(&["--config", c, "price"]));
    assert_eq!(field(&from_file, "rate"), 0.1);
    let overridden = stdout(&hpm(&["--config", c, "price", "--rate", "0.05"]));
    assert_eq!(field(&overridden, "rate"), 0.05);
    assert!((field(&overridden, "price") - 3.134_164_972_563_290_5).abs() < 1e-10);
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(hpm(&["price", "--rate", "abc"]).status.code(), Some(2));
    assert_eq!(hpm(&["figure", "7"]).status.code(), Some(2));
    assert_eq!(hpm(&["price", "--vol", "-1"]).status.code(), Some(2));
    assert_eq!(hpm(&["price", "quanto", "--method", "hpm1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    let o = hpm(&["--config", cfg.to_str().unwrap(), "price"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn io_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("x.csv");
    assert!(!Path::new(&target).exists());
    assert_eq!(hpm(&["figure", "1", "--out", target.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(hpm(&["--config", target.to_str().unwrap(), "price"]).status.code(), Some(3));
}

fn failed_ids(out: &str) -> Vec<String> {
    out.lines()
        .filter(|l| l.starts_with("FAIL"))
        .map(|l| l.split_whitespace().nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn validate_fails_only_known_criteria() {
    let o = hpm(&["validate"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(failed_ids(&stdout(&o)), ["C6", "C11"]);
}

#[test]
fn injected_fault_is_caught_by_residual_check() {
    let o = hpm(&["validate", "--inject-fault", "phi2"]);
    assert_eq!(o.status.code(), Some(1));
    let ids = failed_ids(&stdout(&o));
    assert!(ids.iter().any(|id| id == "C2"), "{ids:?}");
}
