use num_complex::Complex;
use qudit_core::codes::{encoded_zero_tableau, example_code_331};
use qudit_core::dense::{clifford_map_of_unitary, gate_matrix, tableau_to_state};
use qudit_core::verify::phase_distance;
use qudit_core::{Dimension, Error, Gate, PauliOperator, StabilizerTableau, State, State32};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dim(d: u32) -> Dimension {
    Dimension::new(d).unwrap()
}

fn pauli(d: u32, s: &str) -> PauliOperator {
    PauliOperator::parse(s, dim(d)).unwrap()
}

#[test]
fn fourier_has_order_four_and_sum_order_d() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in [3, 5, 7] {
        let s = State::random(dim(d), 2, &mut rng).unwrap();
        let mut f = s.clone();
        for _ in 0..4 {
            f.apply_gate(Gate::Fourier, &[1]).unwrap();
        }
        let diff = f.amplitudes().iter().zip(s.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-10);
        let mut g = s.clone();
        for _ in 0..d {
            g.apply_gate(Gate::Sum, &[0, 1]).unwrap();
        }
        assert!(g.fidelity(&s) > 1.0 - 1e-12);
        g.apply_gate(Gate::Sum, &[0, 1]).unwrap();
        assert!(g.fidelity(&s) < 1.0 - 1e-6);
    }
}

#[test]
fn single_precision_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = State32::random(dim(5), 2, &mut rng).unwrap();
    let mut f = s.clone();
    for _ in 0..4 {
        f.apply_gate(Gate::Fourier, &[0]).unwrap();
    }
    assert!(f.fidelity(&s) > 1.0 - 1e-5);
}

#[test]
fn x_measurement_on_zero_is_uniform() {
    let probs = State::zero(dim(3), 1).unwrap().probabilities(&pauli(3, "X")).unwrap();
    for p in probs {
        assert!((p - 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn tableau_realizations() {
    let plus = tableau_to_state::<f64>(&StabilizerTableau::new(dim(3), 1, vec![pauli(3, "X")], vec![]).unwrap()).unwrap();
    let uniform = State::from_amplitudes(dim(3), 1, vec![Complex::new(1.0 / 3f64.sqrt(), 0.0); 3]).unwrap();
    assert!(phase_distance(&plus, &uniform) < 1e-12);
    let zero = tableau_to_state::<f64>(&encoded_zero_tableau(&example_code_331()).unwrap()).unwrap();
    for op in ["X X X", "Z Z Z"] {
        assert!((zero.probabilities(&pauli(3, op)).unwrap()[0] - 1.0).abs() < 1e-12);
    }
    let open = StabilizerTableau::initial(1, dim(3), qudit_core::InitKind::Open);
    assert!(matches!(tableau_to_state::<f64>(&open), Err(Error::Precondition(_))));
}

#[test]
fn maps_read_off_unitaries() {
    for d in [3, 5, 7] {
        let sum = clifford_map_of_unitary(&gate_matrix::<f64>(Gate::Sum, dim(d)).unwrap(), dim(d), 2).unwrap();
        let minus = d - 1;
        assert_eq!(sum.x_image(0), &pauli(d, "X X"));
        assert_eq!(sum.x_image(1), &pauli(d, "I X"));
        assert_eq!(sum.z_image(0), &pauli(d, "Z I"));
        assert_eq!(sum.z_image(1), &pauli(d, &format!("Z{minus} Z")));
        let f = clifford_map_of_unitary(&gate_matrix::<f64>(Gate::Fourier, dim(d)).unwrap(), dim(d), 1).unwrap();
        assert_eq!(f.describe(), ["X0 -> Z".to_string(), format!("Z0 -> X{minus}")]);
    }
    let t = gate_matrix::<f64>(Gate::Toffoli, dim(3)).unwrap();
    assert!(clifford_map_of_unitary(&t, dim(3), 3).is_err());
}

#[test]
fn dense_and_tableau_agree_on_the_p_inverse_measurement() {
    let d = dim(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = StabilizerTableau::new(d, 2, vec![pauli(3, "Z2 Z"), pauli(3, "X X")], vec![]).unwrap();
    let s = tableau_to_state::<f64>(&t).unwrap();
    for a in 0..3 {
        let (got, post) = s.measure_pauli(&pauli(3, "I XZ"), &mut rng, Some(a)).unwrap();
        let m = t.project_pauli(&pauli(3, "I XZ"), &mut rng, Some(a)).unwrap();
        assert_eq!(got, a);
        assert!(phase_distance(&post, &tableau_to_state::<f64>(&m.tableau).unwrap()) < 1e-10);
    }
}

#[test]
fn oversized_registers_are_refused() {
    assert!(matches!(State::zero(dim(31), 6), Err(Error::TooLarge { .. })));
}
