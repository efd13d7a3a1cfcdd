use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn qbench(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbench"))
        .args(args)
        .env("QBENCH_OUT", out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn run_dirs(root: &Path) -> Vec<PathBuf> {
    let mut found = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() == "run.json" {
                found.push(d.clone());
            }
        }
    }
    found.sort();
    found
}

fn counts_doc(date: &str, counts: &[(&str, u64)]) -> Value {
    let shots: u64 = counts.iter().map(|c| c.1).sum();
    let map: serde_json::Map<String, Value> = counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "backend": "hardware",
        "date": date,
        "shots": shots,
        "seed": null,
        "counts": map,
        "circuit_name": "c01x8-in00",
    })
}

/// Two-bit table with `top` on "00", `second` on "10" and the rest split over "01"/"11".
fn c01_table(date: &str, top: f64, second: f64) -> Value {
    let n00 = (top * 8192.0).round() as u64;
    let n10 = (second * 8192.0).round() as u64;
    let rest = 8192 - n00 - n10;
    counts_doc(date, &[("00", n00), ("10", n10), ("01", rest / 2), ("11", rest - rest / 2)])
}

#[test]
fn ideal_identity_run_is_all_correct_and_persisted() {
    let tmp = TempDir::new().unwrap();
    let o = qbench(&["run", "--suite", "identity", "--backend", "ideal", "--shots", "8192", "--seed", "1"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dirs = run_dirs(tmp.path());
    assert_eq!(dirs.len(), 5);
    for d in &dirs {
        for f in ["circuit.qasm", "counts.json", "verdict.json", "oracle.json", "run.json"] {
            assert!(d.join(f).is_file(), "{} missing in {}", f, d.display());
        }
        let v: Value = serde_json::from_str(&fs::read_to_string(d.join("verdict.json")).unwrap()).unwrap();
        assert_eq!(v["verdict"]["class"], "correct");
        assert_eq!(v["verdict"]["color"], "green");
    }
    let summaries: Vec<_> = fs::read_dir(tmp.path().join("identity"))
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("summary-"))
        .collect();
    assert_eq!(summaries.len(), 1);
}

#[test]
fn noisy_identity_run_reports_failures() {
    let tmp = TempDir::new().unwrap();
    let o = qbench(&["run", "--suite", "identity", "--backend", "noisy", "--p-correct", "0.8", "--seed", "1"], tmp.path());
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    let line = err.lines().find(|l| l.contains("failures")).expect("failure list");
    let doc: Value = serde_json::from_str(line).unwrap();
    assert!(!doc["failures"].as_array().unwrap().is_empty());
}

#[test]
fn fixed_seed_runs_are_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let o = qbench(&["run", "--suite", "adder", "--seed", "7", "--shots", "1024"], dir.path());
        assert_eq!(code(&o), 0);
    }
    let (da, db) = (run_dirs(a.path()), run_dirs(b.path()));
    assert_eq!(da.len(), db.len());
    for (x, y) in da.iter().zip(&db) {
        for f in ["circuit.qasm", "counts.json", "verdict.json", "oracle.json"] {
            assert_eq!(fs::read(x.join(f)).unwrap(), fs::read(y.join(f)).unwrap(), "{f} differs");
        }
        let mut rx: Value = serde_json::from_str(&fs::read_to_string(x.join("run.json")).unwrap()).unwrap();
        let mut ry: Value = serde_json::from_str(&fs::read_to_string(y.join("run.json")).unwrap()).unwrap();
        rx.as_object_mut().unwrap().remove("meta");
        ry.as_object_mut().unwrap().remove("meta");
        assert_eq!(rx, ry);
    }
}

#[test]
fn singlet_run_writes_csv() {
    let tmp = TempDir::new().unwrap();
    let o = qbench(&["run", "--suite", "singlet", "--shots", "2048", "--seed", "3"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let csv = fs::read_dir(tmp.path().join("singlet"))
        .unwrap()
        .filter_map(|e| e.ok())
        .find(|e| e.file_name().to_string_lossy().ends_with(".csv"))
        .expect("csv file");
    let text = fs::read_to_string(csv.path()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "theta1,theta2,f00,f01,f10,f11,F1,F2,F,E_theory");
    assert_eq!(lines.count(), 33);
}

#[test]
fn routed_run_stays_correct() {
    let tmp = TempDir::new().unwrap();
    let o = qbench(&["run", "--suite", "identity", "--coupling", "ibmqe-v1", "--seed", "2"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rec: Value = serde_json::from_str(&fs::read_to_string(run_dirs(tmp.path())[0].join("run.json")).unwrap()).unwrap();
    assert!(rec["route"]["stats"].is_object());
}

#[test]
fn ingest_classifies_tables() {
    let tmp = TempDir::new().unwrap();
    let counts = tmp.path().join("c01.json");
    fs::write(&counts, c01_table("2016-06-01T00:00:00Z", 0.661, 0.299).to_string()).unwrap();
    let o = qbench(&["ingest", counts.to_str().unwrap(), "--case", "c01x8-in00"], &tmp.path().join("out"));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"]["class"], "correct");
    assert_eq!(report["reported_se"], 0.012);

    let oracle = tmp.path().join("adder-2p1.json");
    fs::write(&oracle, json!({ "expected": { "1011": 1.0 } }).to_string()).unwrap();
    let mut rows: Vec<(String, u64)> = vec![("1001".into(), 2802), ("1011".into(), 2793)];
    let rest = 8192 - 2802 - 2793;
    let others: Vec<String> = (0..16).map(|i| format!("{i:04b}")).filter(|s| s != "1001" && s != "1011").collect();
    for (i, s) in others.iter().enumerate() {
        rows.push((s.clone(), rest / 14 + u64::from((i as u64) < rest % 14)));
    }
    let pairs: Vec<(&str, u64)> = rows.iter().map(|(s, n)| (s.as_str(), *n)).collect();
    let table = tmp.path().join("magenta.json");
    fs::write(&table, counts_doc("2016-05-01T00:00:00Z", &pairs).to_string()).unwrap();
    let o = qbench(&["ingest", table.to_str().unwrap(), "--oracle", oracle.to_str().unwrap()], &tmp.path().join("out"));
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"]["class"], "unexpected_superposition");
    assert_eq!(report["verdict"]["color"], "magenta");
}

#[test]
fn ingest_rejects_bad_input() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let o = qbench(&["ingest", bad.to_str().unwrap(), "--case", "c01x8-in00"], tmp.path());
    assert_eq!(code(&o), 2);
    let err: Value = serde_json::from_slice(o.stderr.trim_ascii()).unwrap();
    assert!(err["error"].as_str().unwrap().contains("schema"));

    let mut doc = c01_table("2016-06-01T00:00:00Z", 0.6, 0.3);
    doc["shots"] = json!(100);
    fs::write(&bad, doc.to_string()).unwrap();
    let o = qbench(&["ingest", bad.to_str().unwrap(), "--case", "c01x8-in00"], tmp.path());
    assert_eq!(code(&o), 2);

    let doc = c01_table("2016-06-01T00:00:00Z", 0.6, 0.3);
    fs::write(&bad, doc.to_string()).unwrap();
    let o = qbench(&["ingest", bad.to_str().unwrap(), "--case", "adder-1+3"], tmp.path());
    assert_eq!(code(&o), 2, "width mismatch");
}

#[test]
fn transpile_passthrough_and_expansion() {
    let tmp = TempDir::new().unwrap();
    let legal = tmp.path().join("legal.qasm");
    let text = "OPENQASM 2.0;\n// comment kept verbatim\nqreg q[5];\ncreg c[5];\ncx q[0],q[2];\n  h q[1];\n";
    fs::write(&legal, text).unwrap();
    let out = tmp.path().join("legal_out.qasm");
    let o = qbench(&["transpile", legal.to_str().unwrap(), "--out", out.to_str().unwrap()], tmp.path());
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), text);

    let rev = tmp.path().join("rev.qasm");
    fs::write(&rev, "OPENQASM 2.0;\nqreg q[5];\ncreg c[5];\ncx q[2],q[1];\n").unwrap();
    let o = qbench(&["transpile", rev.to_str().unwrap(), "--coupling", "ibmqe-v1", "--verify"], tmp.path());
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    let body: Vec<&str> = stdout.lines().skip(4).collect();
    assert_eq!(body, ["h q[2];", "h q[1];", "cx q[1],q[2];", "h q[2];", "h q[1];"]);
    let status: Value = serde_json::from_slice(o.stderr.trim_ascii()).unwrap();
    assert_eq!(status["verified"], true);
    assert_eq!(status["layout"], json!([0, 1, 2, 3, 4]));
}

#[test]
fn transpile_verify_size_limit() {
    let tmp = TempDir::new().unwrap();
    let big = tmp.path().join("big.qasm");
    fs::write(&big, "OPENQASM 2.0;\nqreg q[11];\ncreg c[11];\ncx q[0],q[10];\n").unwrap();
    let device = tmp.path().join("line11.json");
    let pairs: Vec<[usize; 2]> = (0..10).map(|i| [i, i + 1]).collect();
    let doc = json!({
        "num_qubits": 11,
        "allowed": pairs,
        "duration_1q_ns": 130.0,
        "duration_cx_ns": 650.0,
        "coherence_us": 100.0,
        "max_gates": 80,
    });
    fs::write(&device, doc.to_string()).unwrap();
    let o = qbench(
        &["transpile", big.to_str().unwrap(), "--coupling", device.to_str().unwrap(), "--verify"],
        tmp.path(),
    );
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("limited to 10 qubits"), "{err}");
    let o = qbench(&["transpile", big.to_str().unwrap(), "--coupling", device.to_str().unwrap()], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn report_stationarity() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("hist");
    for (i, (t, s)) in [(0.661, 0.299), (0.700, 0.198), (0.642, 0.289), (0.580, 0.335), (0.628, 0.256)]
        .into_iter()
        .enumerate()
    {
        let f = tmp.path().join(format!("run{i}.json"));
        fs::write(&f, c01_table(&format!("2016-0{}-01T00:00:00Z", i + 4), t, s).to_string()).unwrap();
        let o = qbench(&["ingest", f.to_str().unwrap(), "--case", "c01x8-in00"], &out);
        assert_eq!(code(&o), 0);
    }
    let o = qbench(&["report", "--stationarity", "--json"], &out);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let s = &report[0]["stationarity"];
    assert_eq!(s["verdict"], "non-stationary");
    assert!((s["max_delta"].as_f64().unwrap() - 0.12).abs() < 1e-3);
    assert_eq!(report[0]["runs"].as_array().unwrap().len(), 5);
}

#[test]
fn report_identical_and_single_runs() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path();
    assert_eq!(code(&qbench(&["run", "--suite", "code513", "--seed", "4"], out)), 0);
    let o = qbench(&["report", "--stationarity", "--json"], out);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.as_array().unwrap().iter().all(|c| c["stationarity"]["verdict"] == "inconclusive"));

    assert_eq!(code(&qbench(&["run", "--suite", "code513", "--seed", "4"], out)), 0);
    let o = qbench(&["report", "--stationarity", "--json"], out);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.as_array().unwrap().iter().all(|c| c["stationarity"]["verdict"] == "stationary"));
}

#[test]
fn report_on_empty_history_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&qbench(&["report"], tmp.path())), 2);
}

#[test]
fn unknown_suite_is_rejected() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&qbench(&["run", "--suite", "bogus"], tmp.path())), 2);
}
