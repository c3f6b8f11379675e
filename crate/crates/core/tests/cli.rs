use std::io::Write;
use std::process::{Command, Output};

use weighted_ks::cli::TestReportDocument;
use weighted_ks::spectral::ground_state;

fn wks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wks"))
        .args(args)
        .env_remove("WKS_SEED")
        .output()
        .expect("run wks")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn single_number(o: &Output) -> f64 {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    stdout(o).trim().parse().unwrap()
}

#[test]
fn critical_weighted() {
    let k = single_number(&wks(&["critical", "--n", "1000", "--alpha", "0.05"]));
    assert!((k - 3.439).abs() <= 0.05, "{k}");
}

#[test]
fn critical_classical() {
    let k = single_number(&wks(&["critical", "--classical", "--alpha", "0.05"]));
    assert!((k - 1.358).abs() <= 0.001, "{k}");
}

#[test]
fn critical_small_n_warns_on_stderr() {
    let o = wks(&["critical", "--n", "10", "--alpha", "0.5"]);
    let k = single_number(&o);
    assert!(k > 0.0);
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    assert!(!stdout(&o).contains("warning"));
}

#[test]
fn critical_rejects_bad_input() {
    assert_eq!(wks(&["critical", "--n", "1"]).status.code(), Some(2));
    assert_eq!(wks(&["critical", "--n", "100", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(wks(&["critical", "--n", "abc"]).status.code(), Some(2));
}

#[test]
fn tabulate_exact_rows() {
    let sqrt3 = 3f64.sqrt().to_string();
    let o = wks(&["tabulate", "--k-min", "0.5", "--k-max", "1.5", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(&header[..6], ["k", "theta0", "theta1", "delta1", "inv_delta1", "a_tilde"]);
    assert_eq!(rows[1][0], 1.0);
    assert!((rows[1][1] - 2.0).abs() < 1e-8);

    let o = wks(&["tabulate", "--k-min", &sqrt3, "--k-max", "2", "--steps", "2"]);
    let (_, rows) = parse_csv(&stdout(&o));
    assert!((rows[0][2] - 3.0).abs() < 1e-8, "{}", rows[0][2]);
}

#[test]
fn tabulate_gap_and_monotonicity() {
    let o = wks(&["tabulate", "--k-min", "0.1", "--k-max", "6", "--steps", "30"]);
    let (_, rows) = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 30);
    for r in &rows {
        assert!(r[3] > 1.0, "delta1 at k={} is {}", r[0], r[3]);
    }
    for w in rows.windows(2) {
        assert!(w[1][1] < w[0][1], "theta0 not decreasing");
        assert!(w[1][5] > w[0][5], "a_tilde not increasing");
    }
}

#[test]
fn tabulate_rejects_range() {
    assert_eq!(wks(&["tabulate", "--k-min", "0.01", "--k-max", "2"]).status.code(), Some(2));
    assert_eq!(wks(&["tabulate", "--k-min", "2", "--k-max", "8"]).status.code(), Some(2));
    assert_eq!(wks(&["tabulate", "--k-min", "2", "--k-max", "1"]).status.code(), Some(2));
}

#[test]
fn tabulate_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = wks(&["tabulate", "--k-min", "1", "--k-max", "2", "--steps", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 5);
}

#[test]
fn curves_cross_at_critical_values() {
    let o = wks(&["curves", "--n-list", "1e3,1e4,1e5,1e6", "--k-min", "3", "--k-max", "4", "--steps", "1001"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header.len(), 5);
    for (col, want) in [3.439, 3.529, 3.597, 3.651].into_iter().enumerate().map(|(i, w)| (i + 1, w)) {
        let i = rows.iter().position(|r| r[col] >= 0.95).unwrap();
        let (k0, k1, s0, s1) = (rows[i - 1][0], rows[i][0], rows[i - 1][col], rows[i][col]);
        let k = k0 + (0.95 - s0) / (s1 - s0) * (k1 - k0);
        assert!((k - want).abs() <= 0.05, "column {}: crossing {k} vs {want}", header[col]);
    }
    for r in &rows {
        assert!(r[4] <= r[1], "N=1e6 above N=1e3 at k={}", r[0]);
    }
    for w in rows.windows(2) {
        assert!((1..5).all(|c| w[1][c] >= w[0][c]));
    }
}

#[test]
fn curves_at_k_max() {
    let o = wks(&["curves", "--n-list", "1e3,1e6", "--k-min", "6", "--k-max", "7", "--steps", "2"]);
    let (_, rows) = parse_csv(&stdout(&o));
    let g = ground_state(7.0).unwrap();
    for (col, n) in [(1, 1e3f64), (2, 1e6)] {
        let law = g.a_tilde * n.powf(-g.theta0);
        assert!((rows[1][col] - law).abs() < 1e-2);
    }
}

#[test]
fn curves_parse_failure() {
    assert_eq!(wks(&["curves", "--n-list", "1e3,x"]).status.code(), Some(2));
}

#[test]
fn test_single_point_at_median() {
    let f = data_file("0\n");
    let o = wks(&["test", "--data", f.path().to_str().unwrap(), "--null", "normal:0,1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: TestReportDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.k_obs, 1.0);
    assert_eq!(doc.arg_u, 0.5);
    assert_eq!(doc.input.count, 1);
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn test_degenerate_window() {
    let f = data_file("1.0\n-0.3\n");
    let o = wks(&["test", "--data", f.path().to_str().unwrap(), "--null", "normal:0,1", "--window", "0.5,0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty window"), "{}", stderr(&o));
}

#[test]
fn test_parse_error_names_line() {
    let f = data_file("# sample\n0.1\n0.2\nnot-a-number\n");
    let o = wks(&["test", "--data", f.path().to_str().unwrap(), "--null", "uniform"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn test_bad_null_spec_and_missing_file() {
    let f = data_file("0.5\n");
    let p = f.path().to_str().unwrap();
    assert_eq!(wks(&["test", "--data", p, "--null", "cauchy"]).status.code(), Some(2));
    assert_eq!(wks(&["test", "--data", p, "--null", "normal:0,-1"]).status.code(), Some(2));
    assert_eq!(wks(&["test", "--data", "/nonexistent/file", "--null", "uniform"]).status.code(), Some(2));
}

#[test]
fn test_strict_rejection_exit_code() {
    // Everything piled into the lower tail.
    let values: String = (1..=200).map(|i| format!("{}\n", i as f64 * 1e-4)).collect();
    let f = data_file(&values);
    let p = f.path().to_str().unwrap();
    let o = wks(&["test", "--data", p, "--null", "uniform", "--strict"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let o = wks(&["test", "--data", p, "--null", "uniform"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reject   true"));
}

#[test]
fn test_json_round_trip() {
    let values: String = (0..500).map(|i| format!("{}\n", ((i as f64 + 0.5) / 500.0).powf(1.1))).collect();
    let f = data_file(&values);
    let o = wks(&["test", "--data", f.path().to_str().unwrap(), "--null", "pit", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let doc: TestReportDocument = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    assert_eq!(again, text);
    assert_eq!(serde_json::from_str::<TestReportDocument>(&again).unwrap(), doc);
    assert_eq!(doc.version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn test_column_input() {
    let f = data_file("id;x\n1;0.25\n2;0.5\n3;0.75\n");
    let p = f.path().to_str().unwrap();
    let o = wks(&["test", "--data", p, "--null", "uniform", "--column", "x", "--delimiter", ";", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: TestReportDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.input.count, 3);
    assert_eq!(doc.input.max, 0.75);
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--mode", "direct", "--n", "200", "--k", "2.5,3,3.5", "--replicas", "300", "--seed", "9"];
    let a = wks(&args);
    let b = wks(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("parameter,survival,std_error\n"));
}

#[test]
fn simulate_seed_from_environment() {
    let args = ["simulate", "--mode", "ou", "--k", "1.5", "--t", "1", "--replicas", "2000", "--dt", "0.01"];
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_wks")).args(args).env("WKS_SEED", seed).output().unwrap().stdout
    };
    let mut flag = args.to_vec();
    flag.extend(["--seed", "5"]);
    assert_eq!(with_env("5"), wks(&flag).stdout);
    assert_ne!(with_env("5"), with_env("6"));
}

#[test]
fn simulate_config_errors() {
    assert_eq!(wks(&["simulate", "--mode", "ou", "--k", "1", "--t", "1", "--dt", "0"]).status.code(), Some(2));
    assert_eq!(wks(&["simulate", "--mode", "ou", "--k", "1", "--t", "-1"]).status.code(), Some(2));
    assert_eq!(wks(&["simulate", "--mode", "direct", "--k", "1"]).status.code(), Some(2));
    assert_eq!(wks(&["simulate", "--mode", "direct", "--n", "100", "--k", "1", "--replicas", "10"]).status.code(), Some(2));
}

#[test]
fn simulate_ou_against_exact_law() {
    let base = ["simulate", "--mode", "ou", "--k", "1", "--t", "3", "--replicas", "100000", "--seed", "7"];
    let plain = wks(&base);
    let (_, rows) = parse_csv(&stdout(&plain));
    let (s, se) = (rows[0][1], rows[0][2]);

    let mut ext = base.to_vec();
    ext.push("--extrapolate");
    let ext = wks(&ext);
    let diag = stderr(&ext);
    let bias: f64 = diag.split("bias(dt)=").nth(1).unwrap().trim().parse().unwrap();
    let (_, rows) = parse_csv(&stdout(&ext));
    let (s_ex, se_ex) = (rows[0][1], rows[0][2]);

    let g = ground_state(1.0).unwrap();
    let law = g.a_tilde * (-6f64).exp();
    assert!((s - law).abs() <= 3.0 * se + bias.abs(), "plain {s} ± {se}, bias {bias}, law {law}");
    assert!((s_ex - law).abs() <= 3.0 * se_ex, "extrapolated {s_ex} ± {se_ex}, law {law}");
}

/// Finite-N deviation of the statistic from the asymptotic law (see README).
#[test]
#[ignore = "the simulated null at N = 10^4 sits below the asymptotic law by several standard errors"]
fn simulate_direct_at_tabulated_critical_value() {
    let o = wks(&["simulate", "--mode", "direct", "--n", "10000", "--k", "3.529", "--replicas", "10000", "--seed", "1"]);
    let (_, rows) = parse_csv(&stdout(&o));
    let (s, se) = (rows[0][1], rows[0][2]);
    assert!((s - 0.95).abs() <= 3.0 * se, "{s} ± {se}");
}
