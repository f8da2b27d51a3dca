use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orlicz_fio::bench::{ExperimentConfig, ExperimentKind};
use orlicz_fio::io::read_field;
use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz-fio")).args(args).output().expect("binary runs")
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn small(kind: ExperimentKind, base: ExperimentConfig) -> ExperimentConfig {
    ExperimentConfig { ensemble: 3, n: 16, experiment: kind, ..base }
}

#[test]
fn conjugate_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_json(tmp.path(), "c.json", &json!({"young": {"kind": "scaled_power", "c": 0.5, "p": 2.0}, "points": 11}));
    let out = tmp.path().join("out");
    let o = run(&["conjugate", "--config", s(&cfg), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(out.join("conjugate.csv")).unwrap();
    let last = table.lines().last().unwrap();
    let cols: Vec<f64> = last.split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(cols[0], 5.0);
    assert!((cols[2] - 12.5).abs() < 1e-6);
    assert!(out.join("summary.csv").exists());
}

#[test]
fn fio_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_json(tmp.path(), "fio.json", &json!({"n": 32}));
    let a = tmp.path().join("apply");
    let o = run(&["fio", "apply", "--config", s(&cfg), "--out", s(&a), "--seed", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&a);
    let (i, g) = (r["input_l2"].as_f64().unwrap(), r["output_l2"].as_f64().unwrap());
    assert!((i - g).abs() < 1e-10 * i);
    for f in ["input_stft.csv", "output_stft.csv", "input.bin", "output.bin", "summary.csv"] {
        assert!(a.join(f).exists(), "{f}");
    }
    let f = read_field(&a.join("output.bin")).unwrap();
    assert_eq!(f.len(), 32);

    // Moyal through the stft tool
    let st = tmp.path().join("stft");
    let sc = write_json(tmp.path(), "stft.json", &json!({"field": a.join("output.bin")}));
    assert!(run(&["stft", "--config", s(&sc), "--out", s(&st)]).status.success());
    let r = report(&st);
    let moyal = r["field_l2"].as_f64().unwrap() * r["window_l2"].as_f64().unwrap();
    assert!((r["stft_l2"].as_f64().unwrap() - moyal).abs() < 1e-10 * moyal);
    assert!(st.join("stft_magnitude.csv").exists());

    let nc = write_json(tmp.path(), "norm.json", &json!({"field": a.join("output.bin"), "young": {"kind": "power", "p": 2}, "space": "lebesgue"}));
    let nd = tmp.path().join("norm");
    assert!(run(&["norm", "--config", s(&nc), "--out", s(&nd)]).status.success());
    assert!((report(&nd)["norm"].as_f64().unwrap() - g).abs() < 1e-10 * g);

    let k = tmp.path().join("kernel");
    assert!(run(&["fio", "kernel", "--config", s(&cfg), "--out", s(&k)]).status.success());
    let sc = write_json(tmp.path(), "s.json", &json!({"kernel": k.join("kernel.bin"), "young": {"kind": "power", "p": "inf"}}));
    let sd = tmp.path().join("schatten");
    assert!(run(&["schatten", "--config", s(&sc), "--out", s(&sd)]).status.success());
    // a ≡ 1 with the kpg phase is the identity
    assert!((report(&sd)["schatten_norm"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(sd.join("spectrum.csv").exists());
}

#[test]
fn verify_exit_codes_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let kind = ExperimentKind::KernelCont;
    let good = small(kind, ExperimentConfig::default_for(kind));
    let bad = small(kind, ExperimentConfig::negative_control(kind));
    let gp = write_json(tmp.path(), "good.json", &serde_json::to_value(&good).unwrap());
    let bp = write_json(tmp.path(), "bad.json", &serde_json::to_value(&bad).unwrap());
    let (o1, o2, o3) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    let r = run(&["verify", "kernel_cont", "--config", s(&gp), "--out", s(&o1)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stdout));
    assert_eq!(run(&["verify", "kernel_cont", "--config", s(&gp), "--out", s(&o2)]).status.code(), Some(0));
    assert_eq!(fs::read(o1.join("report.json")).unwrap(), fs::read(o2.join("report.json")).unwrap());
    for f in ["summary.csv", "input_stft.csv", "output_stft.csv"] {
        assert!(o1.join(f).exists(), "{f}");
    }
    assert_eq!(run(&["verify", "kernel_cont", "--config", s(&bp), "--out", s(&o3)]).status.code(), Some(2));
    assert_eq!(report(&o3)["flags"]["instability"], json!(true));

    // flags reach the config
    let o4 = tmp.path().join("d");
    assert_eq!(run(&["verify", "kernel_cont", "--config", s(&gp), "--out", s(&o4), "--seed", "7", "--refine", "48"]).status.code(), Some(0));
    let r = report(&o4);
    assert_eq!(r["config"]["seed"], json!(7));
    assert_eq!(r["series"][0]["refined"]["n"], json!(48));
}

#[test]
fn usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["conjugate"]).status.code(), Some(1));
    let cfg = write_json(tmp.path(), "c.json", &json!({"experiment": "cont1"}));
    let o = run(&["verify", "cont2", "--config", s(&cfg), "--out", s(&tmp.path().join("x"))]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
