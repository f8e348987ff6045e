//! Shared helpers: the fixture corpus and a runner for the binary.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use qframe_classifier::corpus::{cccd_fixtures, merge_corpus, mutants, universal_corpus};
use qframe_classifier::{Infomorphism, validate_infomorphism};
use qframe_contextuality::catalog::{deterministic, pr_box, tsirelson_box};
use qframe_experiments::qfp::pauli_tomography_agent;
use qframe_experiments::{hidden_bell_instance, BellSetup};
use qframe_quantum::{Observable, PureState, Qrf, SystemLayout};
use serde_json::{json, Value};

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

fn v<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap()
}

fn axis_frame(id: &str, label: &str, angles: [f64; 2]) -> Qrf {
    let obs = angles.iter().map(|&a| Observable::axis(label, a).unwrap()).collect();
    Qrf::uniform(id, [label], obs).unwrap()
}

/// Every bundled fixture, by file name. Files ending in `.bad.json` are
/// deliberately invalid.
pub fn corpus() -> Vec<(String, Value)> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let mut out: Vec<(String, Value)> = Vec::new();
    let mut add = |name: &str, x: Value| out.push((name.to_string(), x));

    // classifier
    let fixtures = cccd_fixtures();
    let (_, cccd) = fixtures.iter().find(|(n, _)| n == "iso-cycle-bit").unwrap_or(&fixtures[0]).clone();
    add("cccd.json", v(&cccd));
    let (_, mutant) = mutants(&cccd).into_iter().next().expect("a mutant");
    add("cccd-mutant.json", v(&mutant));
    let (_, m1, m2, _) = merge_corpus().into_iter().find(|(_, _, _, ok)| *ok).expect("a mergeable pair");
    add("merge-a.json", v(&m1));
    add("merge-b.json", v(&m2));
    let diagrams = universal_corpus();
    for want in ["cycle-bit-flip", "cycle-bit-noncommuting", "self-loop-three"] {
        let (_, d) = diagrams.iter().find(|(n, _)| n == want).expect("corpus diagram");
        add(&format!("diagram-{want}.json"), v(d));
    }
    let (_, cospan) = diagrams.iter().find(|(n, _)| n.starts_with("cospan-")).expect("a cospan");
    add("diagram-cospan.json", v(cospan));
    let (_, span) = diagrams.iter().find(|(n, _)| n.starts_with("span-")).expect("a span");
    add("diagram-span.json", v(span));
    let f = &span.edges()[0];
    let src = span.node(&f.source).unwrap().clone();
    let tgt = span.node(&f.target).unwrap().clone();
    assert!(validate_infomorphism(f, &src, &tgt).unwrap().is_ok());
    add("infomorphism.json", json!({ "source": src, "target": tgt, "infomorphism": f }));
    // the asymmetric classification on both sides, with its two tokens swapped
    let a = qframe_classifier::corpus::asym("A");
    let b = a.renamed("B");
    let swapped = Infomorphism {
        name: Some("swap".into()),
        source: "A".into(),
        target: "B".into(),
        type_map: [("x", "x"), ("y", "y")].map(|(p, q)| (p.to_string(), q.to_string())).into(),
        token_map: [("a", "b"), ("b", "a")].map(|(p, q)| (p.to_string(), q.to_string())).into(),
    };
    add("infomorphism-invalid.json", json!({ "source": a, "target": b, "infomorphism": swapped }));

    // states
    let q4 = SystemLayout::qubits(["1", "2", "3", "4"]).unwrap();
    add("zero4.state.json", v(&PureState::basis(q4, &[0, 0, 0, 0]).unwrap()));
    let phi = PureState::phi_plus("1", "2").unwrap();
    add("phi-plus.state.json", v(&phi));
    add("double-bell.state.json", v(&phi.tensor(&PureState::phi_plus("3", "4").unwrap()).unwrap()));
    add("plus.state.json", v(&PureState::from_real(SystemLayout::qubits(["1"]).unwrap(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()));
    add("mixed.state.json", v(&phi.density()));
    add(
        "bad-norm.bad.json",
        json!({ "layout": { "labels": ["1"] }, "amplitudes": [[0.9, 0.0], [0.0, 0.0]] }),
    );
    add(
        "non-hermitian.bad.json",
        json!({ "layout": { "labels": ["1"] }, "matrix": [[[0.5, 0.0], [0.25, 0.0]], [[0.0, 0.0], [0.5, 0.0]]] }),
    );
    add(
        "schema-errors.bad.json",
        json!({ "layout": { "labels": [] }, "amplitudes": [[1.0], "x"], "extra": true }),
    );

    // frames
    add("qrf-a.json", v(&axis_frame("A", "1", [0., FRAC_PI_2])));
    add("qrf-b.json", v(&axis_frame("B", "2", [FRAC_PI_4, -FRAC_PI_4])));
    add("qrf-z1.json", v(&Qrf::uniform("Z", ["1"], vec![Observable::pauli("1", 'Z').unwrap()]).unwrap()));
    add("qrf-x1.json", v(&Qrf::uniform("X", ["1"], vec![Observable::pauli("1", 'X').unwrap()]).unwrap()));
    add("qrf-x2.json", v(&Qrf::uniform("X2", ["2"], vec![Observable::pauli("2", 'X').unwrap()]).unwrap()));
    let mut beta = v(&Qrf::uniform("low-beta", ["1"], vec![Observable::pauli("1", 'Z').unwrap()]).unwrap());
    beta["beta"] = json!(0.5);
    add("qrf-low-beta.bad.json", beta);

    // models
    add("tsirelson.model.json", v(&tsirelson_box()));
    add("pr-box.model.json", v(&pr_box()));
    add("deterministic.model.json", v(&deterministic([1, -1, 1, 1])));
    let mut bad = v(&pr_box());
    bad["tables"]["2"]["1,1"] = json!("0.51");
    add("bad-sum.bad.json", bad);

    // experiments
    add("bell-default.json", json!({}));
    add("bell-shots.json", json!({ "shots": 100000, "seed": 7 }));
    add("bell-misaligned.json", v(&BellSetup { theta: 0.5, ..BellSetup::tsirelson(0.) }));
    add("agent-12.json", json!({ "agent": pauli_tomography_agent("1", "2").unwrap() }));
    add("agent-3.json", json!({ "agent": pauli_tomography_agent("1", "3").unwrap(), "key": "auto" }));
    add("qfp-hidden-bell.json", v(&hidden_bell_instance().unwrap()));
    add(
        "thermo.json",
        json!({
            "base": phi.tensor(&PureState::phi_plus("3", "4").unwrap()).unwrap(),
            "agent": pauli_tomography_agent("1", "2").unwrap(),
            "epsilon": 0.05,
            "trials": 8,
            "seed": 11,
        }),
    );
    out
}

use std::f64::consts::FRAC_1_SQRT_2;

pub fn render(x: &Value) -> String {
    let mut s = serde_json::to_string_pretty(x).unwrap();
    s.push('\n');
    s
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("report is not JSON ({e}): {}", self.stdout))
    }
}

pub fn qframe(args: &[&str]) -> Run {
    qframe_env(args, &[])
}

pub fn qframe_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qframe"));
    c.args(args).env_remove("QFRAME_MAX_ASSIGNMENTS");
    for (k, val) in env {
        c.env(k, val);
    }
    let o = c.output().expect("binary runs");
    Run {
        code: o.status.code().expect("exit code"),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

pub fn path(name: &str) -> String {
    fixture(name).display().to_string()
}
