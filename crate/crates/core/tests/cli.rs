use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ninesite() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../networks/ninesite.json")
}

fn latent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latent")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn net_arg() -> String {
    ninesite().to_str().unwrap().to_owned()
}

#[test]
fn yes_no_commands() {
    let net = net_arg();
    let o = latent(&["latent", &net, "-u", "2", "-v", "6"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "latent-symmetric: yes\n"));
    let o = latent(&["cospectral", &net, "-u", "1", "-v", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no"));
    let o = latent(&["singlets", &net, "-u", "2", "-v", "6"]);
    assert_eq!(stdout(&o), "singlets: 4 8 9\n");
}

#[test]
fn certificate_text_and_json() {
    let net = net_arg();
    let o = latent(&["cert", &net, "-u", "2", "-v", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("verdict: LITERAL_CONDITION_FAILED"));
    assert!(text.contains("p_minus: λ^2 - 729/1250"));
    let o = latent(&["cert", &net, "-u", "2", "-v", "6", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["verdict"], "LITERAL_CONDITION_FAILED");
    assert_eq!(doc["trace_ratio_plus"], "0");
    assert_eq!(doc["p_minus"], serde_json::json!(["-729/1250", "0", "1"]));
}

#[test]
fn reduce_prints_bisymmetric_reduction() {
    let o = latent(&["reduce", &net_arg(), "-u", "2", "-v", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("bisymmetric: yes"));
}

#[test]
fn boundary_scan_with_single_dash_flags() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let o = latent(&[
        "scan-boundary", "-k", "1", "-emin", "-0.5", "-emax", "-0.3", "-step", "0.01", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("bracket: [-21/50, -41/100]"));
    let rows = fs::read_to_string(csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 21);
}

#[test]
fn envelope_csv_is_deterministic_and_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for path in [&a, &b] {
        let o = latent(&[
            "envelope", &net_arg(), "-u", "2", "-v", "6", "--tmax", "50", "--step", "0.02", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau,F,running_max"));
    let mut last = f64::NEG_INFINITY;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cols[2] >= last);
        last = cols[2];
        // 17 significant digits survive a round trip exactly
        assert_eq!(format!("{:.16e}", cols[1]), line.split(',').nth(1).unwrap());
    }
    assert!(last > 0.83);
}

#[test]
fn evolve_writes_site_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("evolve.csv");
    let o = latent(&[
        "evolve", &net_arg(), "--from", "2", "--tmax", "1", "--step", "0.25", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tau,site1,site2,site3,site4,site5,site6,site7,site8,site9");
    assert_eq!(lines.len(), 6);
    for line in &lines[1..] {
        let total: f64 = line.split(',').skip(1).map(|c| c.parse::<f64>().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn correlate_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, json) = (dir.path().join("g.csv"), dir.path().join("g.json"));
    let o = latent(&[
        "correlate", &net_arg(), "-u", "2", "-v", "6", "--stats", "dist", "--halved", "--out",
        csv.to_str().unwrap(), "--json", json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("i,j,value\n"));
    assert_eq!(text.lines().count(), 1 + 81);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(doc["statistics"], "distinguishable");
    assert_eq!(doc["comparison_mode"], "halved");
    assert!((doc["tau"].as_f64().unwrap() - 8.017019).abs() < 1e-5);
}

#[test]
fn intensities_and_clamping() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("i.csv");
    fs::write(&csv, "site,intensity\n1,1\n2,10\n3,0.5\n").unwrap();
    let o = latent(&["intensities", csv.to_str().unwrap(), "--bg", "1", "-u", "1", "-v", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("clamped"));
    assert!(stdout(&o).contains("F_1,2: 1.0000000000000000e0"));
    let o = latent(&["intensities", csv.to_str().unwrap(), "--bg", "20", "-u", "1", "-v", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(latent(&["bogus"]).status.code(), Some(2));
    assert_eq!(latent(&["latent", &net_arg(), "-u", "2", "-v", "12"]).status.code(), Some(2));
    assert_eq!(latent(&["latent", &net_arg(), "-u", "2", "-v", "2"]).status.code(), Some(2));
    assert_eq!(latent(&["singlets", &net_arg(), "-u", "1", "-v", "2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n": 2, "edges": [[1, 3, "1"]]}"#).unwrap();
    let o = latent(&["cospectral", bad.to_str().unwrap(), "-u", "1", "-v", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
    assert_eq!(latent(&["--help"]).status.code(), Some(0));
}
