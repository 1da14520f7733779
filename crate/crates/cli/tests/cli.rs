use std::process::{Command, Output};

fn becgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_becgap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const GAUSSIAN: &str = "gaussian:a=1,sigma=1";

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn bound_lba_example_runs() {
    let o = becgap(&["bound-lba", "--nu", "3", "--beta", "0.1", "--mu", "20", "--delta", "2", "--g", "1", "--potential", GAUSSIAN]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("# becgap "));
    assert!(out.contains("# potential = gaussian:a=1,sigma=1 (flag)"));
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("beta,mu,delta,bound,valid,validity_border"));
    // μ = 20 is below g v̂(0) ρ_c(0.1) ≈ 29.2: the bound is reported as invalid.
    assert_eq!(data_rows(&out)[0][4], "0");
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let args = [
        "phase-curve", "--axis", "mu-delta", "--beta", "0.05,0.1", "--mu", "130:250:40", "--g", "1", "--potential",
        GAUSSIAN,
    ];
    let (a, b) = (becgap(&args), becgap(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn higher_beta_curve_lies_below() {
    let o = becgap(&[
        "phase-curve", "--axis", "mu-delta", "--beta", "0.05", "--beta", "0.1", "--mu", "130:400:90", "--g", "1",
        "--potential", GAUSSIAN,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 8);
    let value = |r: &Vec<String>| r[2].parse::<f64>().unwrap();
    for i in 0..4 {
        assert_eq!(rows[i][5], "1");
        assert!(value(&rows[i + 4]) <= value(&rows[i]), "{:?} vs {:?}", rows[i + 4], rows[i]);
    }
}

#[test]
fn delta_min_outside_domain_exits_one() {
    let o = becgap(&["delta-min", "--beta", "0.1", "--mu", "1", "--g", "1", "--potential", GAUSSIAN]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("mu > g*vhat(0)*rho_c(beta)"), "{}", stderr(&o));
    // The row is still written, marked as not found.
    assert_eq!(data_rows(&stdout(&o))[0][4], "0");
}

#[test]
fn malformed_potential_is_a_usage_error_naming_the_token() {
    let o = becgap(&["bound-lba", "--beta", "0.1", "--mu", "20", "--delta", "2", "--g", "1", "--potential", "gaussian:a=1,sigmx=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sigmx"), "{}", stderr(&o));
}

#[test]
fn missing_field_is_a_usage_error() {
    let o = becgap(&["bound-lba", "--beta", "0.1", "--mu", "20", "--g", "1", "--potential", GAUSSIAN]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--delta"), "{}", stderr(&o));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# perfect gas\nnu = 3\nbeta = 0.05\nmu = -1, -0.5\n").unwrap();
    let o = becgap(&["perfect", "--config", path.to_str().unwrap(), "--beta", "0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("beta = 0.1 from flag overrides config file value 0.05"), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("# beta = 0.1 (flag)"));
    assert!(out.contains("# mu = -1,-0.5 (config file)"));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[0] == "1.0000000000000001e-1"));
}

#[test]
fn unknown_config_key_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "beta = 1\ntemperature = 3\n").unwrap();
    let o = becgap(&["perfect", "--config", path.to_str().unwrap(), "--mu", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("temperature"), "{}", stderr(&o));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = becgap(&["perfect", "--beta", "1", "--mu", "-1", "--temperature", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_mirrors_csv() {
    let base = ["meanfield", "--beta", "1", "--delta", "1", "--lambda", "1", "--mu", "-2,0.5"];
    let csv = becgap(&base);
    let mut with_json = base.to_vec();
    with_json.extend(["--format", "json"]);
    let json = becgap(&with_json);
    assert_eq!(json.status.code(), Some(0), "{}", stderr(&json));
    let doc: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["config"]["lambda"], "1");
    let rows = data_rows(&stdout(&csv));
    let json_rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), json_rows.len());
    for (c, j) in rows.iter().zip(json_rows) {
        let p: f64 = c[4].parse().unwrap();
        assert_eq!(p, j["pressure"].as_f64().unwrap());
        assert_eq!(c[8], j["branch"].as_str().unwrap());
    }
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.csv");
    let o = becgap(&[
        "oracle", "--side", "4,6", "--delta", "1", "--lambda", "1", "--beta", "1", "--mu", "0.5", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# pressure gaps monotone in side: true"));
    assert_eq!(data_rows(&text).len(), 2);
}

#[test]
fn selftest_passes() {
    let o = becgap(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stderr(&o).matches("[PASS]").count(), 11);
}
