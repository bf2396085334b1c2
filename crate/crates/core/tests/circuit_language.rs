use proptest::prelude::*;
use qudit_core::circuit::{parse, run, BackendKind, RunOptions};
use qudit_core::verify::{verify, Config};

fn statement(d: u32, n: usize) -> impl Strategy<Value = String> {
    let q = 0..n;
    let pair = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
    let local = (0..d, 0..d).prop_map(|(x, z)| match (x, z) {
        (0, 0) => "I".to_string(),
        (x, 0) => format!("X{x}"),
        (0, z) => format!("Z{z}"),
        (x, z) => format!("X{x}Z{z}"),
    });
    prop_oneof![
        (prop_oneof![Just("r"), Just("p"), Just("x"), Just("z")], 1..d, q.clone()).prop_map(|(g, k, q)| format!("{g}^{k} {q}")),
        (prop_oneof![Just("sum"), Just("invsum"), Just("phase2")], pair.clone()).prop_map(|(g, (a, b))| format!("{g} {a} {b}")),
        (1..d, q.clone()).prop_map(|(a, q)| format!("scale {a} {q}")),
        (prop_oneof![Just("zero"), Just("plus")], q.clone()).prop_map(|(k, q)| format!("prep {k} {q}")),
        (0..d, local).prop_map(move |(w, l)| format!("measure w{w} {l} @ 0")),
        (prop_oneof![Just("pinv"), Just("q"), Just("r")], q.clone()).prop_map(|(g, q)| format!("gadget {g} {q}")),
        pair.prop_map(|(a, b)| format!("gadget sumgadget {a} {b}")),
    ]
}

fn program() -> impl Strategy<Value = String> {
    (prop_oneof![Just(3u32), Just(5)], 2usize..4).prop_flat_map(|(d, n)| {
        proptest::collection::vec(statement(d, n), 0..12).prop_map(move |lines| {
            let mut src = format!("qudits {n} dim {d}\n");
            for l in lines {
                src.push_str(&l);
                src.push('\n');
            }
            src
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_then_parsing_is_stable(src in program()) {
        let p = parse(&src).unwrap();
        let q = parse(&p.to_source()).unwrap();
        prop_assert_eq!(&p.statements, &q.statements);
        prop_assert_eq!(p.to_source(), q.to_source());
    }

    #[test]
    fn tableau_reports_are_deterministic(src in program(), seed in any::<u64>()) {
        let p = parse(&src).unwrap();
        let opts = RunOptions { backend: BackendKind::Tableau, seed, shots: 3 };
        let a = serde_json::to_string(&run(&p, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&run(&p, &opts).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn backends_agree_on_random_programs(src in program(), seed in any::<u64>()) {
        let p = parse(&src).unwrap();
        let r = run(&p, &RunOptions { backend: BackendKind::Both, seed, shots: 2 }).unwrap();
        prop_assert_eq!(&r["agreement"], &serde_json::json!(true), "{}", r);
    }
}

#[test]
fn verify_policy() {
    let cfg = Config { pauli_samples: 100, random_circuits: 10, states: 3, sampled_paths: 5, seed: 1 };
    let results = verify(&[3, 5], &cfg).unwrap();
    assert!(results.iter().all(|r| r.passed), "{:#?}", results.iter().filter(|r| !r.passed).collect::<Vec<_>>());
    for c in [6, 7, 8] {
        let dims: Vec<Option<u32>> = results.iter().filter(|r| r.criterion == c).map(|r| r.dim).collect();
        assert_eq!(dims, vec![Some(3)], "criterion {c}");
    }
    let gadget_dims: std::collections::BTreeSet<u32> = results.iter().filter(|r| r.criterion == 4).filter_map(|r| r.dim).collect();
    assert_eq!(gadget_dims.into_iter().collect::<Vec<_>>(), vec![3, 5]);
    assert!(verify(&[4], &cfg).is_err());
}
