use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsc"))
        .args(args)
        .env_remove("RSC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn classify_reports_domain_and_margin() {
    let o = rsc(&["classify", "--alpha", "0,0,1.5,0", "--r", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["critical_dimension"], 1);
    assert_eq!(v["e_margin"], 0.5);
    assert_eq!(rsc(&["classify", "--alpha", "0,1", "--r", "3"]).status.code(), Some(2));
}

#[test]
fn sample_is_seeded_and_reads_the_environment() {
    let a = rsc(&["sample", "--n", "9", "--r", "2", "--alpha", "0,0.4,0.4", "--seed", "5"]);
    let b = rsc(&["sample", "--n", "9", "--r", "2", "--alpha", "0,0.4,0.4", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_rsc"))
        .args(["sample", "--n", "9", "--r", "2", "--alpha", "0,0.4,0.4"])
        .env("RSC_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let missing = rsc(&["sample", "--n", "9", "--r", "2", "--alpha", "0,0.4,0.4"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn sample_writes_text_and_betti_reads_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("y.txt");
    let o = rsc(&["sample", "--n", "7", "--r", "2", "--p", "1,1,1", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(fs::read_to_string(&out).unwrap().starts_with("# n=7 r=2\n"));
    let b = rsc(&["betti", out.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 0, 20]));
    assert_eq!(v["f_vector"], serde_json::json!([7, 21, 35]));
}

#[test]
fn betti_cycles_and_spectra_on_small_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let hollow = write(dir.path(), "hollow.txt", "1 2\n2 3\n1 3\n");
    let v: serde_json::Value = serde_json::from_slice(&rsc(&["betti", &hollow]).stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 1]));
    assert_eq!(v["morse"]["holds"], true);
    let c: serde_json::Value = serde_json::from_slice(&rsc(&["cycles", "--input", &hollow, "--k", "1"]).stdout).unwrap();
    assert_eq!(c["supports"].as_array().unwrap().len(), 1);
    assert_eq!(c["supports"][0]["vertex_count"], 3);
    let oct: String = [(1, 3, 5), (1, 3, 6), (1, 4, 5), (1, 4, 6), (2, 3, 5), (2, 3, 6), (2, 4, 5), (2, 4, 6)]
        .iter()
        .map(|(a, b, c)| format!("{a} {b} {c}\n"))
        .collect();
    let oct = write(dir.path(), "oct.txt", &oct);
    let s = rsc(&["spectra", "--input", &oct, "--level", "0"]);
    assert!(s.status.success());
    let text = stdout(&s);
    assert!(text.starts_with("simplex,link_vertices,connected,kappa,pass\n"));
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.starts_with(|c: char| c.is_ascii_digit()) && l.contains(",4,true,1,")));
    // level too high for a 2-dimensional complex
    assert_eq!(rsc(&["spectra", "--input", &oct, "--level", "1"]).status.code(), Some(2));
}

#[test]
fn degrees_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("deg.csv");
    let o = rsc(&[
        "degrees", "--n", "30", "--r", "2", "--alpha", "0,0.2,0.5", "--seed", "2", "--d", "0", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("s,count,expected\n"));
    let counted: u64 = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(counted, 30);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("deg.summary.json")).unwrap()).unwrap();
    assert!((summary["mu"].as_f64().unwrap() - 30f64.powf(0.8)).abs() < 1e-9);
}

#[test]
fn phase_slice_csv() {
    let o = rsc(&["phase-slice", "--r", "2", "--free", "1,2", "--grid", "2", "--max", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("alpha_1,alpha_2,domain\n"));
    assert_eq!(text.lines().count(), 10);
}

const FACES: &str = r#"
[experiment]
kind = "face-numbers"
trials = 10
d = 1
t = 0.2

[model]
n = 200
r = 1
alpha = [0.0, 0.5]

[output]
prefix = "faces"
"#;

#[test]
fn experiment_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "faces.toml", FACES);
    let out_dir = dir.path().join("out");
    let out = out_dir.to_str().unwrap();
    // no seed anywhere
    assert_eq!(rsc(&["experiment", &cfg, "--out-dir", out]).status.code(), Some(2));
    let ok = rsc(&["experiment", &cfg, "--seed", "1", "--out-dir", out]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).starts_with("PASS face-numbers"));
    let first = fs::read(out_dir.join("faces.csv")).unwrap();
    let summary = fs::read(out_dir.join("faces.summary.json")).unwrap();
    let env = Command::new(env!("CARGO_BIN_EXE_rsc"))
        .args(["experiment", &cfg, "--out-dir", out])
        .env("RSC_SEED", "1")
        .output()
        .unwrap();
    assert!(env.status.success());
    assert_eq!(fs::read(out_dir.join("faces.csv")).unwrap(), first);
    assert_eq!(fs::read(out_dir.join("faces.summary.json")).unwrap(), summary);
    let strict = write(dir.path(), "strict.toml", &FACES.replace("t = 0.2", "t = 0.0001"));
    assert_eq!(rsc(&["experiment", &strict, "--seed", "1", "--out-dir", out]).status.code(), Some(1));
    let empty = write(dir.path(), "empty.toml", "");
    assert_eq!(rsc(&["experiment", &empty, "--seed", "1"]).status.code(), Some(2));
}
