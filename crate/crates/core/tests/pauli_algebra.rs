use ndarray::Array2;
use num_complex::Complex;
use proptest::prelude::*;
use qudit_core::codes::example_code_331;
use qudit_core::dense::{adjoint, max_abs_diff};
use qudit_core::{Dimension, PauliOperator};
use std::collections::HashSet;

fn dim(d: u32) -> Dimension {
    Dimension::new(d).unwrap()
}

fn pauli(d: u32, s: &str) -> PauliOperator {
    PauliOperator::parse(s, dim(d)).unwrap()
}

fn kron(a: &Array2<Complex<f64>>, b: &Array2<Complex<f64>>) -> Array2<Complex<f64>> {
    let (m, n) = (b.nrows(), b.ncols());
    Array2::from_shape_fn((a.nrows() * m, a.ncols() * n), |(i, j)| a[(i / m, j / n)] * b[(i % m, j % n)])
}

prop_compose! {
    fn arb_pauli(d: u32, n: usize)(phase in 0..d, v in proptest::collection::vec(0..d, 2 * n)) -> PauliOperator {
        PauliOperator::from_symplectic(dim(d), phase, &v)
    }
}

fn arb_triple() -> impl Strategy<Value = (PauliOperator, PauliOperator, PauliOperator)> {
    (prop_oneof![Just(3u32), Just(5), Just(7), Just(11)], 1usize..5)
        .prop_flat_map(|(d, n)| (arb_pauli(d, n), arb_pauli(d, n), arb_pauli(d, n)))
}

fn arb_small_pair() -> impl Strategy<Value = (PauliOperator, PauliOperator)> {
    (prop_oneof![Just(3u32), Just(5)], 1usize..=2).prop_flat_map(|(d, n)| (arb_pauli(d, n), arb_pauli(d, n)))
}

proptest! {
    #[test]
    fn commutation_is_bilinear((p, q, r) in arb_triple()) {
        let d = p.dim();
        let lhs = p.multiply(&q).unwrap().commutation_exponent(&r).unwrap();
        let rhs = d.add(p.commutation_exponent(&r).unwrap(), q.commutation_exponent(&r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutation_is_antisymmetric((p, q, _) in arb_triple()) {
        let d = p.dim();
        prop_assert_eq!(p.commutation_exponent(&q).unwrap(), d.neg(q.commutation_exponent(&p).unwrap()));
    }

    #[test]
    fn products_match_matrices((p, q) in arb_small_pair()) {
        let prod = p.multiply(&q).unwrap().to_matrix::<f64>().unwrap();
        let want = p.to_matrix::<f64>().unwrap().dot(&q.to_matrix::<f64>().unwrap());
        prop_assert!(max_abs_diff(&prod, &want) < 1e-10);
    }

    #[test]
    fn commutation_phase_matches_matrices((p, q) in arb_small_pair()) {
        let (mp, mq) = (p.to_matrix::<f64>().unwrap(), q.to_matrix::<f64>().unwrap());
        let c = p.commutation_exponent(&q).unwrap();
        let rhs = mq.dot(&mp).mapv(|z| z * p.dim().root::<f64>(c as i64));
        prop_assert!(max_abs_diff(&mp.dot(&mq), &rhs) < 1e-10);
    }

    #[test]
    fn inverse_and_order((p, _, _) in arb_triple()) {
        let d = p.dim().d() as i64;
        prop_assert!(p.power(d).is_identity());
        prop_assert!(p.inverse().multiply(&p).unwrap().is_identity());
        prop_assert_eq!(p.power(-1), p.inverse());
    }

    #[test]
    fn text_form_round_trips((p, _, _) in arb_triple()) {
        prop_assert_eq!(PauliOperator::parse(&p.to_string(), p.dim()).unwrap(), p);
    }
}

#[test]
fn group_has_d_to_the_2n_phase_free_elements() {
    for (d, n) in [(3, 1), (3, 2), (5, 1), (5, 2)] {
        let dm = dim(d);
        let x = PauliOperator::x_on(dm, n, 0);
        let gens: Vec<PauliOperator> = (0..n).flat_map(|q| [PauliOperator::x_on(dm, n, q), PauliOperator::z_on(dm, n, q)]).collect();
        let mut seen = HashSet::new();
        let mut frontier = vec![PauliOperator::identity(dm, n)];
        seen.insert(PauliOperator::identity(dm, n).symplectic());
        while let Some(p) = frontier.pop() {
            for g in &gens {
                let next = p.multiply(g).unwrap();
                if seen.insert(next.symplectic()) {
                    frontier.push(next);
                }
            }
        }
        assert_eq!(seen.len(), (d as usize).pow(2 * n as u32));
        assert!(x.power(d as i64).is_identity());
    }
}

#[test]
fn matrices_of_x_and_z() {
    let d = dim(3);
    let x = pauli(3, "X").to_matrix::<f64>().unwrap();
    for j in 0..3 {
        assert!((x[((j + 1) % 3, j)] - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }
    let z = pauli(3, "Z").to_matrix::<f64>().unwrap();
    for j in 0..3 {
        assert!((z[(j, j)] - d.root::<f64>(j as i64)).norm() < 1e-12);
    }
    let xz = pauli(3, "X Z").to_matrix::<f64>().unwrap();
    assert!(max_abs_diff(&xz, &kron(&x, &z)) < 1e-12);
}

#[test]
fn x_and_z_commutation() {
    // ZX = omega XZ, so X Z = omega^{-1} Z X.
    assert_eq!(pauli(5, "X").commutation_exponent(&pauli(5, "Z")).unwrap(), 4);
    assert_eq!(pauli(5, "X").multiply(&pauli(5, "Z")).unwrap(), pauli(5, "XZ"));
    assert_eq!(pauli(5, "Z").multiply(&pauli(5, "X")).unwrap(), pauli(5, "w1 XZ"));
}

#[test]
fn inverse_is_the_adjoint() {
    let p = pauli(3, "w1 XZ2");
    let m = p.to_matrix::<f64>().unwrap();
    assert!(max_abs_diff(&p.inverse().to_matrix::<f64>().unwrap(), &adjoint(&m)) < 1e-12);
}

#[test]
fn weights() {
    assert_eq!(PauliOperator::identity(dim(3), 4).weight(), 0);
    assert_eq!(pauli(3, "X I X2").weight(), 2);
    assert_eq!(example_code_331().logical_x[0].weight(), 2);
}

#[test]
fn text_form_examples() {
    let p = pauli(3, "w2 XZ2 I X");
    assert_eq!(p.to_string(), "w2 XZ2 I X");
    assert_eq!((p.phase(), p.x_exps(), p.z_exps()), (2, &[1, 0, 1][..], &[2, 0, 0][..]));
    assert!(PauliOperator::parse("X3", dim(3)).is_err());
    assert!(PauliOperator::parse("Y", dim(3)).is_err());
}

#[test]
fn even_and_composite_dimensions_are_rejected() {
    for d in [0, 1, 2, 4, 9, 15, 37] {
        assert!(Dimension::new(d).is_err(), "{d}");
    }
}
