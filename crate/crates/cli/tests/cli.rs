use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qudit");

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/circuits").join(name).to_string_lossy().into_owned()
}

fn qudit(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(tag: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("qudit-cli-{tag}-{}.qd", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn pinv_script_agrees_and_gives_p_inverse() {
    let out = qudit(&["run", &fixture("pinv.qd"), "--backend", "both", "--seed", "9", "--shots", "30", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["agreement"], Value::Bool(true));
    assert_eq!(r["final"]["logical_map"], serde_json::json!(["X0 -> XZ2", "Z0 -> Z"]));
    assert_eq!(r["shots"].as_array().unwrap().len(), 30);
}

#[test]
fn zero_state_measures_zero_every_shot() {
    let path = scratch("zero", "qudits 1 dim 3\nmeasure Z @ 0 -> m\nexpect m == 0\n");
    let out = qudit(&["run", &path, "--shots", "100", "--json"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert!(r["shots"].as_array().unwrap().iter().all(|s| s["outcomes"]["m"] == 0));
}

fn random_qutrit_script(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("qudits 3 dim 3\nlogical 0\n");
    let singles = ["r", "p", "x", "z", "scale 2"];
    let pairs = ["sum", "invsum", "phase2"];
    for i in 0..20 {
        let mut qs = [0, 1, 2];
        qs.shuffle(&mut rng);
        if rng.gen_bool(0.5) {
            text.push_str(&format!("{} {}\n", singles.choose(&mut rng).unwrap(), qs[0]));
        } else {
            text.push_str(&format!("{} {} {}\n", pairs.choose(&mut rng).unwrap(), qs[0], qs[1]));
        }
        if i % 7 == 6 {
            let ops = ["X", "Z", "XZ", "XZ2"];
            text.push_str(&format!("measure {} {} @ 1 2\n", ops.choose(&mut rng).unwrap(), ops.choose(&mut rng).unwrap()));
        }
    }
    text
}

#[test]
fn random_qutrit_script_agrees_across_backends() {
    let path = scratch("random", &random_qutrit_script(5));
    let out = qudit(&["run", &path, "--backend", "both", "--seed", "3", "--shots", "200", "--json"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["agreement"], Value::Bool(true));
}

#[test]
fn tableau_json_is_byte_identical() {
    let args = ["run", &fixture("sum_gadget.qd"), "--seed", "41", "--shots", "50", "--json"];
    let a = qudit(&args);
    let b = qudit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = qudit(&["run", &fixture("sum_gadget.qd"), "--seed", "42", "--shots", "50", "--json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn toffoli_needs_the_dense_backend() {
    let out = qudit(&["run", &fixture("toffoli.qd")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("toffoli"));
    let out = qudit(&["run", &fixture("toffoli.qd"), "--backend", "dense", "--shots", "20", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    for shot in json_of(&out)["shots"].as_array().unwrap() {
        let o = &shot["outcomes"];
        assert_eq!(o["check"], 0, "{o}");
    }
}

#[test]
fn parse_errors_exit_two_with_positions() {
    let out = qudit(&["run", &fixture("bad.qd")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column 7"), "{err}");
    assert!(err.contains("scale factor not invertible mod 3"), "{err}");
}

#[test]
fn failed_expectation_exits_one() {
    let path = scratch("fail", "qudits 1 dim 3\nprep plus 0\nmeasure X @ 0 -> m\nexpect m == 1\n");
    let out = qudit(&["run", &path]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qudit(&["run"]).status.code(), Some(2));
    assert_eq!(qudit(&["run", "x.qd", "--backend", "quantum"]).status.code(), Some(2));
    assert_eq!(qudit(&["verify", "--dims", "4"]).status.code(), Some(2));
    assert_eq!(qudit(&["gadget", "s", "--dim", "9"]).status.code(), Some(2));
}

#[test]
fn gadget_command_reports_maps() {
    let out = qudit(&["gadget", "r", "--dim", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["map"], serde_json::json!(["X0 -> Z", "Z0 -> X4"]));
    let out = qudit(&["gadget", "s", "2", "--dim", "7"]);
    assert_eq!(json_of(&out)["target"], serde_json::json!(["scale 3 0"]));
    let out = qudit(&["gadget", "toffoli", "--seed", "4"]);
    let r = json_of(&out);
    assert_eq!(r["corrections"].as_object().unwrap().len(), 27);
    assert!(r["fidelity"].as_f64().unwrap() > 1.0 - 1e-8);
}
