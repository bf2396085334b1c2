use proptest::prelude::*;
use qudit_core::dense::{adjoint, gate_matrix, max_abs_diff, tableau_to_state};
use qudit_core::gadgets::{gadget_p_inverse, gadget_s};
use qudit_core::tableau::LogicalPair;
use qudit_core::verify::{extracted_map, phase_distance, random_clifford_circuit, run_random_circuit};
use qudit_core::{CliffordMap, Dimension, Gate, InitKind, PauliOperator, StabilizerTableau, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dim(d: u32) -> Dimension {
    Dimension::new(d).unwrap()
}

fn pauli(d: u32, s: &str) -> PauliOperator {
    PauliOperator::parse(s, dim(d)).unwrap()
}

fn single_qudit_gates(d: Dimension) -> Vec<Gate> {
    let mut g = vec![Gate::Fourier, Gate::PhaseGate, Gate::X, Gate::Z];
    g.extend((2..d.d()).map(Gate::Scale));
    g
}

/// A random pure stabilizer state from a random circuit on `|0...0>`.
fn random_state(d: Dimension, n: usize, rng: &mut ChaCha8Rng) -> StabilizerTableau {
    let steps = random_clifford_circuit(d, n, 25, 0, rng);
    let mut t = StabilizerTableau::initial(n, d, InitKind::Zero);
    run_random_circuit(&mut t, &steps, rng, None).unwrap();
    t
}

#[test]
fn initial_tableaux() {
    let d = dim(3);
    let t = StabilizerTableau::from_kinds(d, &[InitKind::Open, InitKind::Zero]);
    assert_eq!(t.stabilizers(), &[pauli(3, "I Z")]);
    assert_eq!(t.logicals(), &[LogicalPair { x: pauli(3, "X I"), z: pauli(3, "Z I") }]);
    let plus = tableau_to_state::<f64>(&StabilizerTableau::initial(1, dim(5), InitKind::Plus)).unwrap();
    let mut f = State::zero(dim(5), 1).unwrap();
    f.apply_gate(Gate::Fourier, &[0]).unwrap();
    assert!(phase_distance(&plus, &f) < 1e-12);
}

#[test]
fn generator_images() {
    let d = dim(3);
    let t = StabilizerTableau::new(d, 2, vec![pauli(3, "X I"), pauli(3, "I Z")], vec![]).unwrap();
    let t = t.conjugate_by_gate(Gate::Sum, &[0, 1]).unwrap();
    assert_eq!(t.stabilizers(), &[pauli(3, "X X"), pauli(3, "Z2 Z")]);
    let r = StabilizerTableau::initial(1, d, InitKind::Zero).conjugate_by_gate(Gate::Fourier, &[0]).unwrap();
    assert_eq!(r.stabilizers(), &[pauli(3, "X2")]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_matches_matrices_including_phase(d in prop_oneof![Just(3u32), Just(5), Just(7)], seed in any::<u64>()) {
        let d = dim(d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gates: Vec<Gate> = single_qudit_gates(d);
        gates.extend([Gate::Sum, Gate::InvSum, Gate::Phase2]);
        for g in gates {
            let n = g.arity();
            let v: Vec<u32> = (0..2 * n).map(|_| rng.gen_range(0..d.d())).collect();
            let p = PauliOperator::from_symplectic(d, rng.gen_range(0..d.d()), &v);
            let u = gate_matrix::<f64>(g, d).unwrap();
            let want = u.dot(&p.to_matrix::<f64>().unwrap()).dot(&adjoint(&u));
            let got = g.clifford_map(d).unwrap().apply(&p).unwrap().to_matrix::<f64>().unwrap();
            prop_assert!(max_abs_diff(&got, &want) < 1e-10, "{g} on {p}");
        }
    }

    #[test]
    fn conjugation_preserves_commutation(d in prop_oneof![Just(3u32), Just(5)], seed in any::<u64>()) {
        let d = dim(d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let before = StabilizerTableau::initial(3, d, InitKind::Open);
        let mut t = before.clone();
        let steps = random_clifford_circuit(d, 3, 20, 0, &mut rng);
        run_random_circuit(&mut t, &steps, &mut rng, None).unwrap();
        let ops = |t: &StabilizerTableau| t.logicals().iter().flat_map(|l| [l.x.clone(), l.z.clone()]).collect::<Vec<_>>();
        let (a, b) = (ops(&before), ops(&t));
        for i in 0..a.len() {
            for j in 0..a.len() {
                prop_assert_eq!(a[i].commutation_exponent(&a[j]).unwrap(), b[i].commutation_exponent(&b[j]).unwrap());
            }
        }
    }

    #[test]
    fn tableau_and_dense_agree_on_random_circuits(d in prop_oneof![Just(3u32), Just(5)], n in 1usize..=4, seed in any::<u64>()) {
        let d = dim(d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gates = rng.gen_range(0..=30);
        let measurements = rng.gen_range(0..=6);
        let steps = random_clifford_circuit(d, n, gates, measurements, &mut rng);
        let mut dense = State::zero(d, n).unwrap();
        let outcomes = run_random_circuit(&mut dense, &steps, &mut rng, None).unwrap();
        let mut t = StabilizerTableau::initial(n, d, InitKind::Zero);
        run_random_circuit(&mut t, &steps, &mut rng, Some(&outcomes)).unwrap();
        prop_assert!(phase_distance(&tableau_to_state::<f64>(&t).unwrap(), &dense) < 1e-8);
    }

    #[test]
    fn post_selected_outcome_repeats(d in prop_oneof![Just(3u32), Just(5)], seed in any::<u64>()) {
        let d = dim(d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_state(d, 3, &mut rng);
        let v: Vec<u32> = (0..6).map(|_| rng.gen_range(0..d.d())).collect();
        let p = PauliOperator::from_symplectic(d, 0, &v);
        let probs = tableau_to_state::<f64>(&t).unwrap().probabilities(&p).unwrap();
        let a = (0..d.d()).find(|&a| probs[a as usize] > 1e-6).unwrap();
        let m = t.project_pauli(&p, &mut rng, Some(a)).unwrap();
        let again = m.tableau.project_pauli(&p, &mut rng, None).unwrap();
        prop_assert!(again.deterministic);
        prop_assert_eq!(again.outcome, a);
    }

    #[test]
    fn corrected_measurement_leaves_plus_one_eigenstate(d in prop_oneof![Just(3u32), Just(5)], seed in any::<u64>()) {
        let d = dim(d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_state(d, 2, &mut rng);
        let v: Vec<u32> = (0..4).map(|_| rng.gen_range(0..d.d())).collect();
        let p = PauliOperator::from_symplectic(d, rng.gen_range(0..d.d()), &v);
        prop_assume!(!p.is_scalar());
        let m = t.measure_pauli(&p, &mut rng, None).unwrap();
        prop_assume!(!m.deterministic);
        let probs = tableau_to_state::<f64>(&m.tableau).unwrap().probabilities(&p).unwrap();
        prop_assert!((probs[0] - 1.0).abs() < 1e-9);
    }
}

#[test]
fn correction_sign_is_pinned() {
    // |0>, measure X, outcome 1: the state is left stabilized by w^-1 X and the
    // correction is Z^1, since Z X = w X Z.
    let d = dim(3);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let t = StabilizerTableau::initial(1, d, InitKind::Zero);
    let m = t.project_pauli(&pauli(3, "X"), &mut rng, Some(1)).unwrap();
    assert_eq!(m.correction, Some(pauli(3, "Z")));
    assert_eq!(m.tableau.stabilizers(), &[pauli(3, "w2 X")]);
    let dense = tableau_to_state::<f64>(&m.tableau).unwrap();
    assert!(phase_distance(&dense, &State::x_eigenstate(d, 1).unwrap()) < 1e-12);
    let m = t.measure_pauli(&pauli(3, "X"), &mut rng, Some(1)).unwrap();
    assert_eq!(m.tableau.stabilizers(), &[pauli(3, "X")]);
}

#[test]
fn measuring_a_stabilizer_is_deterministic() {
    let t = StabilizerTableau::initial(1, dim(3), InitKind::Zero);
    let m = t.measure_pauli(&pauli(3, "Z"), &mut ChaCha8Rng::seed_from_u64(1), None).unwrap();
    assert!(m.deterministic);
    assert_eq!(m.outcome, 0);
    assert_eq!(m.tableau, t);
}

#[test]
fn p_inverse_measurement_step() {
    let d = dim(3);
    let t = StabilizerTableau::new(d, 2, vec![pauli(3, "Z2 Z")], vec![LogicalPair { x: pauli(3, "X X"), z: pauli(3, "Z I") }]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for a in 0..3 {
        let m = t.measure_pauli(&pauli(3, "I XZ"), &mut rng, Some(a)).unwrap();
        assert_eq!(m.tableau.stabilizers(), &[pauli(3, "I XZ")]);
        let l = &m.tableau.logicals()[0];
        assert_eq!(l.x.symplectic(), pauli(3, "XZ2 XZ").symplectic());
        assert_eq!(l.z, pauli(3, "Z I"));
        let after = m.tableau.discard_qudit(1).unwrap();
        assert_eq!(after.logicals()[0].x.symplectic(), pauli(3, "XZ2").symplectic());
        assert_eq!(after.logicals()[0].z, pauli(3, "Z"));
    }
}

#[test]
fn canonical_form_generates_the_same_group() {
    let d = dim(3);
    let t = StabilizerTableau::new(d, 2, vec![pauli(3, "Z Z2"), pauli(3, "Z I")], vec![]).unwrap();
    let c = t.canonicalize().unwrap();
    assert_eq!(c.stabilizers(), &[pauli(3, "Z I"), pauli(3, "I Z")]);
    assert!(c.same_stabilizer_group(&t));
    assert!(!c.same_stabilizer_group(&StabilizerTableau::new(d, 2, vec![pauli(3, "Z I"), pauli(3, "I X")], vec![]).unwrap()));
    assert_eq!(c.canonicalize().unwrap(), c);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let r = random_state(d, 4, &mut rng).canonicalize().unwrap();
        assert_eq!(r.canonicalize().unwrap(), r);
    }
}

#[test]
fn discarding() {
    let d = dim(3);
    let t = StabilizerTableau::new(d, 2, vec![pauli(3, "Z I"), pauli(3, "I X")], vec![]).unwrap();
    assert_eq!(t.discard_qudit(1).unwrap().stabilizers(), &[pauli(3, "Z")]);
    let bell = StabilizerTableau::new(d, 2, vec![pauli(3, "X X"), pauli(3, "Z Z2")], vec![]).unwrap();
    assert!(bell.discard_qudit(1).is_err());
}

#[test]
fn extracted_maps() {
    let before = StabilizerTableau::initial(2, dim(5), InitKind::Open);
    assert_eq!(StabilizerTableau::extract_clifford_map(&before, &before).unwrap(), CliffordMap::identity(dim(5), 2));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pinv = extracted_map(&gadget_p_inverse(dim(3)), &mut rng).unwrap();
    assert_eq!(pinv.describe(), ["X0 -> XZ2", "Z0 -> Z"]);
    let s1 = extracted_map(&gadget_s(dim(5), 1).unwrap(), &mut rng).unwrap();
    assert_eq!(s1.describe(), ["X0 -> X4", "Z0 -> Z4"]);
}

#[test]
fn outcome_distribution_matches_dense_probabilities() {
    let d = dim(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = random_state(d, 3, &mut rng);
    let p = (0..)
        .map(|_| {
            let v: Vec<u32> = (0..6).map(|_| rng.gen_range(0..3)).collect();
            PauliOperator::from_symplectic(d, 0, &v)
        })
        .find(|p| t.deterministic_outcome(p).unwrap().is_none())
        .unwrap();
    let probs = tableau_to_state::<f64>(&t).unwrap().probabilities(&p).unwrap();
    let shots = 10_000;
    let mut counts = [0usize; 3];
    for _ in 0..shots {
        counts[t.project_pauli(&p, &mut rng, None).unwrap().outcome as usize] += 1;
    }
    for a in 0..3 {
        let mean = probs[a] * shots as f64;
        let sigma = (shots as f64 * probs[a] * (1.0 - probs[a])).sqrt();
        assert!((counts[a] as f64 - mean).abs() <= 3.0 * sigma, "outcome {a}: {} vs {mean}", counts[a]);
    }
}
