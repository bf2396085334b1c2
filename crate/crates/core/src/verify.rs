//! Acceptance checks shared by the `verify` command and the test suite.

use crate::backend::Backend;
use crate::circuit::{self, BackendKind, RunOptions};
use crate::clifford::CliffordMap;
use crate::codes::{
    block_layout, blocks_tableau, check_transversal_structure, encoded_basis_blocks, encoded_zero_tableau, error_syndrome_of_pauli,
    example_code_331, logical_sum_between_blocks, logical_sum_measurements, readout_circuit, run_logical_sum,
    transversal_syndrome_extraction, validate_code,
};
use crate::dense::{clifford_map_of_unitary, gate_matrix, max_abs_diff, tableau_to_state, CMatrix, DenseState};
use crate::error::{Error, Result};
use crate::gadgets::{
    a_j_state, apply_circuit, derive_toffoli_corrections, gadget_p_inverse, gadget_q, gadget_r, gadget_s, gadget_sum, gadget_toffoli,
    measure_via_cat, prepare_toffoli_ancilla_with, toffoli_ancilla_state, GadgetRecord,
};
use crate::gate::{Gate, GateOp};
use crate::pauli::PauliOperator;
use crate::tableau::{InitKind, StabilizerTableau};
use crate::zd::Dimension;
use ndarray::{Array1, Array2};
use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub dim: Option<u32>,
    pub passed: bool,
    /// Worst deviation seen, where the check is numeric.
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let dim = self.dim.map_or(String::new(), |d| format!(" d={d}"));
        let num = match (self.measured, self.tolerance) {
            (Some(m), Some(t)) => format!(" [{m:.2e} <= {t:.0e}]"),
            _ => String::new(),
        };
        format!(
            "{} criterion {} {}{dim}{num} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

/// Sample sizes. `full` matches the acceptance criteria.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub pauli_samples: usize,
    pub random_circuits: usize,
    pub states: usize,
    pub sampled_paths: usize,
    pub seed: u64,
}

impl Config {
    pub fn full() -> Self {
        Config { pauli_samples: 10_000, random_circuits: 500, states: 50, sampled_paths: 200, seed: 2024 }
    }
}

fn timed(
    criterion: u8,
    name: &str,
    dim: Option<Dimension>,
    f: impl FnOnce() -> Result<(bool, Option<f64>, Option<f64>, String)>,
) -> CheckResult {
    let start = Instant::now();
    let (passed, measured, tolerance, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, None, None, format!("error: {e}")),
    };
    CheckResult {
        criterion,
        name: name.to_string(),
        dim: dim.map(|d| d.d()),
        passed,
        measured,
        tolerance,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Max amplitude difference between `a` and `b` after removing the global phase.
pub fn phase_distance(a: &DenseState<f64>, b: &DenseState<f64>) -> f64 {
    let overlap = b.inner(a);
    let phase = if overlap.norm() > 1e-12 { overlap / overlap.norm() } else { Complex::new(1.0, 0.0) };
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
}

// ---- 1: Pauli algebra against matrices

fn random_pauli<R: Rng + ?Sized>(dim: Dimension, n: usize, rng: &mut R) -> PauliOperator {
    let d = dim.d();
    let x: Vec<i64> = (0..n).map(|_| rng.gen_range(0..d) as i64).collect();
    let z: Vec<i64> = (0..n).map(|_| rng.gen_range(0..d) as i64).collect();
    PauliOperator::from_exponents(dim, rng.gen_range(0..d) as i64, &x, &z).expect("sizes agree")
}

fn all_paulis(dim: Dimension, n: usize) -> Vec<PauliOperator> {
    let d = dim.d() as usize;
    let count = d.pow(2 * n as u32 + 1);
    (0..count)
        .map(|mut i| {
            let mut digits = Vec::with_capacity(2 * n + 1);
            for _ in 0..2 * n + 1 {
                digits.push((i % d) as i64);
                i /= d;
            }
            PauliOperator::from_exponents(dim, digits[0], &digits[1..=n], &digits[n + 1..]).expect("sizes agree")
        })
        .collect()
}

fn pauli_pair_error(p: &PauliOperator, q: &PauliOperator, k: i64) -> Result<f64> {
    let dim = p.dim();
    let mp = p.to_matrix::<f64>()?;
    let mq = q.to_matrix::<f64>()?;
    let prod = p.multiply(q)?.to_matrix::<f64>()?;
    let mut worst = max_abs_diff(&prod, &mp.dot(&mq));
    let c = p.commutation_exponent(q)?;
    let lhs = mp.dot(&mq);
    let rhs = mq.dot(&mp).mapv(|z| z * dim.root::<f64>(c as i64));
    worst = worst.max(max_abs_diff(&lhs, &rhs));
    let mut pow = Array2::eye(mp.nrows()).mapv(|x: f64| Complex::new(x, 0.0));
    for _ in 0..dim.reduce(k) {
        pow = pow.dot(&mp);
    }
    worst = worst.max(max_abs_diff(&p.power(k).to_matrix::<f64>()?, &pow));
    Ok(worst)
}

pub fn check_pauli_algebra(dim: Dimension, cfg: &Config) -> CheckResult {
    timed(1, "Pauli algebra matches matrices", Some(dim), || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 1);
        let mut worst = 0.0f64;
        let mut count = 0usize;
        for n in 1..=2 {
            if dim.d() <= 3 {
                let all = all_paulis(dim, n);
                for p in &all {
                    for q in &all {
                        let k = rng.gen_range(0..dim.d() as i64);
                        worst = worst.max(pauli_pair_error(p, q, k)?);
                        count += 1;
                    }
                }
            } else {
                for _ in 0..cfg.pauli_samples {
                    let p = random_pauli(dim, n, &mut rng);
                    let q = random_pauli(dim, n, &mut rng);
                    worst = worst.max(pauli_pair_error(&p, &q, rng.gen_range(0..2 * dim.d() as i64) - dim.d() as i64)?);
                    count += 1;
                }
            }
        }
        let mode = if dim.d() <= 3 { "exhaustive" } else { "sampled" };
        Ok((worst <= 1e-10, Some(worst), Some(1e-10), format!("{count} {mode} pairs, n <= 2")))
    })
}

// ---- 2: conjugation maps of the gate matrices

/// `(phase, x, z)` exponents of one image.
type Image = (i64, Vec<i64>, Vec<i64>);

/// Images written out literally: per gate, the X images then the Z images.
fn literal_images(dim: Dimension) -> Vec<(Gate, [Vec<Image>; 2])> {
    let mut v = vec![
        (Gate::Fourier, [vec![(0, vec![0], vec![1])], vec![(0, vec![-1], vec![0])]]),
        (Gate::PhaseGate, [vec![(0, vec![1], vec![1])], vec![(0, vec![0], vec![1])]]),
        (
            Gate::Sum,
            [
                vec![(0, vec![1, 1], vec![0, 0]), (0, vec![0, 1], vec![0, 0])],
                vec![(0, vec![0, 0], vec![1, 0]), (0, vec![0, 0], vec![-1, 1])],
            ],
        ),
    ];
    for a in 2..dim.d() {
        let b = dim.inv(a).expect("prime") as i64;
        v.push((Gate::Scale(a), [vec![(0, vec![a as i64], vec![0])], vec![(0, vec![0], vec![b])]]));
    }
    v
}

pub fn check_conjugation_maps(dim: Dimension) -> CheckResult {
    timed(2, "conjugation maps of FOURIER, PHASE, SUM, SCALE", Some(dim), || {
        let mut checked = 0;
        for (gate, images) in literal_images(dim) {
            let mk =
                |list: &Vec<Image>| list.iter().map(|(ph, x, z)| PauliOperator::from_exponents(dim, *ph, x, z)).collect::<Result<Vec<_>>>();
            let want = CliffordMap::new(dim, mk(&images[0])?, mk(&images[1])?)?;
            let got = clifford_map_of_unitary(&gate_matrix::<f64>(gate, dim)?, dim, gate.arity())?;
            if got != want {
                return Ok((false, None, None, format!("{gate}: got {:?}, want {:?}", got.describe(), want.describe())));
            }
            if gate.clifford_map(dim)? != want {
                return Ok((false, None, None, format!("{gate}: closed form disagrees")));
            }
            checked += 1;
        }
        Ok((true, None, None, format!("{checked} gates match exactly")))
    })
}

// ---- 3: tableau measurement rule against the dense oracle

#[derive(Clone, Debug)]
pub enum RandomStep {
    Gate(GateOp),
    Measure(PauliOperator),
}

/// A random Clifford circuit with interleaved Pauli measurements.
pub fn random_clifford_circuit<R: Rng + ?Sized>(
    dim: Dimension,
    n: usize,
    gates: usize,
    measurements: usize,
    rng: &mut R,
) -> Vec<RandomStep> {
    let mut pool = vec![Gate::Fourier, Gate::PhaseGate, Gate::X, Gate::Z];
    pool.extend((2..dim.d()).map(Gate::Scale));
    if n >= 2 {
        pool.extend([Gate::Sum, Gate::InvSum, Gate::Phase2]);
    }
    if n >= 3 {
        pool.extend([Gate::M1, Gate::M2, Gate::M3]);
    }
    let mut steps: Vec<RandomStep> = (0..gates)
        .map(|_| {
            let g = *pool.choose(rng).expect("nonempty");
            let mut qs: Vec<usize> = (0..n).collect();
            qs.shuffle(rng);
            qs.truncate(g.arity());
            RandomStep::Gate(GateOp::new(g, &qs))
        })
        .collect();
    for _ in 0..measurements {
        let mut p = random_pauli(dim, n, rng);
        while p.is_scalar() {
            p = random_pauli(dim, n, rng);
        }
        let at = rng.gen_range(0..=steps.len());
        steps.insert(at, RandomStep::Measure(p));
    }
    steps
}

/// Runs steps on a backend; `post_select` replays outcomes.
pub fn run_random_circuit<B: Backend + ?Sized>(
    b: &mut B,
    steps: &[RandomStep],
    rng: &mut dyn RngCore,
    post_select: Option<&[u32]>,
) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for s in steps {
        match s {
            RandomStep::Gate(op) => b.apply_gate(op.gate, &op.qudits)?,
            RandomStep::Measure(p) => {
                let a = b.measure(p, rng, post_select.map(|v| v[out.len()]))?;
                out.push(a);
            }
        }
    }
    Ok(out)
}

pub fn check_measurement_rule(dim: Dimension, cfg: &Config) -> CheckResult {
    timed(3, "tableau measurement rule vs dense oracle", Some(dim), || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 3);
        let mut worst = 0.0f64;
        for _ in 0..cfg.random_circuits {
            let n = rng.gen_range(1..=4);
            let steps = random_clifford_circuit(dim, n, rng.gen_range(0..=30), rng.gen_range(0..=6), &mut rng);
            let mut dense = DenseState::<f64>::zero(dim, n)?;
            let outcomes = run_random_circuit(&mut dense, &steps, &mut rng, None)?;
            let mut t = StabilizerTableau::initial(n, dim, InitKind::Zero);
            run_random_circuit(&mut t, &steps, &mut rng, Some(&outcomes))?;
            worst = worst.max(phase_distance(&tableau_to_state::<f64>(&t)?, &dense));
        }
        Ok((worst <= 1e-8, Some(worst), Some(1e-8), format!("{} random circuits, n <= 4, shared outcomes", cfg.random_circuits)))
    })
}

// ---- 4, 5: gadgets

/// The linear map a gadget applies along one outcome path, read off its action
/// on a maximally entangled state with a reference register.
pub fn gadget_operator(g: &GadgetRecord, path: &[u32]) -> Result<CMatrix<f64>> {
    let dim = g.dim;
    let k = g.data;
    let size = dim.size(k).ok_or(Error::TooLarge { d: dim.d(), n: k, cap: usize::MAX })?;
    let mut amps = vec![Complex::default(); size * size];
    for j in 0..size {
        amps[j * size + j] = Complex::new(1.0, 0.0);
    }
    let mut s = DenseState::from_amplitudes(dim, 2 * k, amps)?;
    let data: Vec<usize> = (0..k).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    g.run(&mut s, &data, &mut rng, Some(path))?;
    let a = s.amplitudes();
    Ok(Array2::from_shape_fn((size, size), |(i, j)| a[i * size + j]))
}

fn apply_operator(m: &CMatrix<f64>, s: &DenseState<f64>) -> Result<DenseState<f64>> {
    let v = Array1::from(s.amplitudes().to_vec());
    DenseState::from_amplitudes(s.dim(), s.n(), m.dot(&v).to_vec())
}

fn random_paths<R: Rng + ?Sized>(g: &GadgetRecord, count: usize, rng: &mut R) -> Vec<Vec<u32>> {
    (0..count).map(|_| (0..g.measurement_count()).map(|_| rng.gen_range(0..g.dim.d())).collect()).collect()
}

/// Worst phase distance between the gadget and its target circuit over the
/// given paths and states.
pub fn gadget_deviation(g: &GadgetRecord, paths: &[Vec<u32>], states: &[DenseState<f64>]) -> Result<f64> {
    let wants: Vec<DenseState<f64>> = states
        .iter()
        .map(|s| {
            let mut w = s.clone();
            apply_circuit(&mut w, &g.target)?;
            Ok(w)
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for path in paths {
        let k = gadget_operator(g, path)?;
        for (s, w) in states.iter().zip(&wants) {
            worst = worst.max(phase_distance(&apply_operator(&k, s)?, w));
        }
    }
    Ok(worst)
}

pub fn check_single_qudit_gadgets(dim: Dimension, cfg: &Config) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 4);
    let states: Vec<DenseState<f64>> = (0..cfg.states).map(|_| DenseState::random(dim, 1, &mut rng).expect("small")).collect();
    let mut gadgets = vec![gadget_p_inverse(dim), gadget_q(dim)];
    gadgets.extend((1..dim.d()).map(|s| gadget_s(dim, s).expect("nonzero")));
    gadgets.push(gadget_r(dim).expect("valid"));
    let mut out: Vec<CheckResult> = gadgets
        .iter()
        .map(|g| {
            timed(4, &format!("gadget {} equals its target", g.name), Some(dim), || {
                let exhaustive = dim.d() == 3;
                let paths = if exhaustive { g.outcome_paths() } else { random_paths(g, cfg.sampled_paths, &mut rng.clone()) };
                let worst = gadget_deviation(g, &paths, &states)?;
                let mode = if exhaustive { "all" } else { "sampled" };
                Ok((worst <= 1e-8, Some(worst), Some(1e-8), format!("{mode} {} paths x {} states", paths.len(), states.len())))
            })
        })
        .collect();
    out.push(timed(4, "(P^-1)^(d-1) = P and R^4 = I as maps", Some(dim), || {
        let pinv = gadget_p_inverse(dim);
        let iter = GadgetRecord::compose("pinv^(d-1)", &vec![pinv; dim.d() as usize - 1])?;
        let r = gadget_r(dim)?;
        let r4 = GadgetRecord::compose("r^4", &[r.clone(), r.clone(), r.clone(), r])?;
        let mut prng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 44);
        let p_ok = extracted_map(&iter, &mut prng)? == Gate::PhaseGate.clifford_map(dim)?;
        let r_ok = extracted_map(&r4, &mut prng)? == CliffordMap::identity(dim, 1);
        Ok((p_ok && r_ok, None, None, format!("P from P^-1 iterates: {p_ok}, R^4 identity: {r_ok}")))
    }));
    out
}

/// Runs a record on a tableau with open data and returns the logical map.
pub fn extracted_map<R: Rng>(g: &GadgetRecord, rng: &mut R) -> Result<CliffordMap> {
    let before = StabilizerTableau::initial(g.data, g.dim, InitKind::Open);
    let mut t = before.clone();
    let data: Vec<usize> = (0..g.data).collect();
    g.run(&mut t, &data, rng, None)?;
    StabilizerTableau::extract_clifford_map(&before, &t)
}

pub fn check_sum_gadget(dim: Dimension, cfg: &Config) -> CheckResult {
    timed(5, "SUM from three measurements", Some(dim), || {
        let g = gadget_sum(dim)?;
        let paths = g.outcome_paths();
        let before = StabilizerTableau::initial(2, dim, InitKind::Open);
        let want = Gate::Sum.clifford_map(dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 5);
        for path in &paths {
            let mut t = before.clone();
            g.run(&mut t, &[0, 1], &mut rng, Some(path))?;
            if StabilizerTableau::extract_clifford_map(&before, &t)? != want {
                return Ok((false, None, None, format!("tableau map differs on path {path:?}")));
            }
        }
        let states: Vec<DenseState<f64>> = (0..cfg.states).map(|_| DenseState::random(dim, 2, &mut rng)).collect::<Result<_>>()?;
        let worst = gadget_deviation(&g, &paths, &states)?;
        Ok((
            worst <= 1e-8,
            Some(worst),
            Some(1e-8),
            format!("tableau map exact on all {} paths; dense on {} states each", paths.len(), states.len()),
        ))
    })
}

// ---- 6, 7: Toffoli

pub fn check_toffoli(dim: Dimension, cfg: &Config) -> CheckResult {
    timed(6, "Toffoli gadget with derived corrections", Some(dim), || {
        let table = derive_toffoli_corrections(dim)?;
        let d = dim.d();
        let expected = (d * d * d) as usize;
        if table.entries.len() != expected || !table.entries[&[0, 0, 0]].is_empty() {
            return Ok((false, None, None, format!("table has {} entries", table.entries.len())));
        }
        let anc = toffoli_ancilla_state::<f64>(dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 6);
        let randoms: Vec<DenseState<f64>> = (0..cfg.states).map(|_| DenseState::random(dim, 3, &mut rng)).collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        for &m in table.entries.keys() {
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let input = DenseState::basis(dim, &[a, b, c])?;
                        let want = DenseState::basis(dim, &[a, b, dim.add(c, dim.mul(a, b))])?;
                        let (_, out) = gadget_toffoli(&input, &anc, &table, &mut rng, Some(m))?;
                        worst = worst.max(1.0 - out.fidelity(&want));
                    }
                }
            }
            for input in &randoms {
                let mut want = input.clone();
                want.apply_gate(Gate::Toffoli, &[0, 1, 2])?;
                let (_, out) = gadget_toffoli(input, &anc, &table, &mut rng, Some(m))?;
                worst = worst.max(1.0 - out.fidelity(&want));
            }
        }
        let longest = table.entries.values().map(|c| c.iter().filter(|g| !matches!(g.gate, Gate::X | Gate::Z)).count()).max().unwrap_or(0);
        Ok((
            worst <= 1e-8,
            Some(worst),
            Some(1e-8),
            format!(
                "{} entries; {} basis + {} random inputs per outcome; at most {longest} non-Pauli gates per correction",
                table.entries.len(),
                expected,
                randoms.len()
            ),
        ))
    })
}

fn eigen_deviation(s: &DenseState<f64>, gate: Gate, exponent: u32) -> Result<f64> {
    let mut g = s.clone();
    g.apply_gate(gate, &[0, 1, 2])?;
    let w = s.dim().root::<f64>(exponent as i64);
    Ok(g.amplitudes().iter().zip(s.amplitudes()).map(|(a, b)| (a - w * b).norm()).fold(0.0, f64::max))
}

pub fn check_ancilla_pipeline(dim: Dimension, cfg: &Config) -> CheckResult {
    timed(7, "|A> preparation and CAT measurement", Some(dim), || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 7);
        let reference = toffoli_ancilla_state::<f64>(dim)?;
        let mut eig = 0.0f64;
        let mut dist = 0.0f64;
        for j in 0..dim.d() {
            let (s, got_j) = prepare_toffoli_ancilla_with::<f64, _>(dim, &mut rng, Some(j))?;
            if got_j != j {
                return Ok((false, None, None, format!("post-selected {j}, got {got_j}")));
            }
            for g in [Gate::M1, Gate::M2, Gate::M3] {
                eig = eig.max(eigen_deviation(&s, g, 0)?);
            }
            dist = dist.max(phase_distance(&s, &reference));
        }
        let mut cat_ok = true;
        for j in 0..dim.d() {
            let aj = a_j_state::<f64>(dim, j)?;
            let m3 = eigen_deviation(&aj, Gate::M3, j)?;
            eig = eig.max(m3);
            for _ in 0..10 {
                let (s, _) = measure_via_cat(Gate::M3, &[0, 1, 2], &aj, 3, &mut rng)?;
                cat_ok &= s == j;
            }
        }
        let passed = eig <= 1e-10 && dist <= 1e-8 && cat_ok;
        Ok((
            passed,
            Some(dist),
            Some(1e-8),
            format!("eigen deviation {eig:.1e} (<= 1e-10), distance to sum|a,b,ab>/d {dist:.1e}, CAT returns j: {cat_ok}"),
        ))
    })
}

// ---- 8: codes

pub fn check_codes(cfg: &Config) -> CheckResult {
    let dim = Dimension::new(3).expect("prime");
    timed(8, "[[3,1]] qutrit code", Some(dim), || {
        let c = example_code_331();
        let report = validate_code(&c);
        if !report.is_ok() {
            return Ok((false, None, None, report.to_string()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 8);
        let zero_t = encoded_zero_tableau(&c)?;
        for g in &c.generators {
            if zero_t.deterministic_outcome(g)? != Some(0) {
                return Ok((false, None, None, format!("encoded zero not stabilized by {g}")));
            }
        }
        let zero = tableau_to_state::<f64>(&zero_t)?;
        let layout = block_layout(1, 3, 3);
        for (i, g) in c.generators.iter().enumerate() {
            let (a, _) = transversal_syndrome_extraction(&c, &zero, i, &mut rng)?;
            if a != 0 {
                return Ok((false, None, None, format!("generator {i} read {a} on encoded zero")));
            }
            if let Err(v) = check_transversal_structure(&readout_circuit(g)?.ops, &layout) {
                return Ok((false, None, None, format!("syndrome circuit not transversal: {v}")));
            }
        }
        let mut syndromes = 0;
        for q in 0..3 {
            for (x, z) in [(1, 0), (0, 1)] {
                for power in 1..3 {
                    let e = PauliOperator::single(dim, 3, q, x * power, z * power);
                    let want = error_syndrome_of_pauli(&c, &e)?;
                    let mut s = zero.clone();
                    s.apply_pauli(&e)?;
                    for (i, &w) in want.iter().enumerate() {
                        let (a, _) = transversal_syndrome_extraction(&c, &s, i, &mut rng)?;
                        if a != w {
                            return Ok((false, None, None, format!("error {e}: generator {i} read {a}, predicted {w}")));
                        }
                        syndromes += 1;
                    }
                }
            }
        }
        let before = blocks_tableau(&c, 3, &[2])?;
        for _ in 0..5 {
            let after = logical_sum_between_blocks(&c, &before, 0, 1, 2, &mut rng)?;
            if StabilizerTableau::extract_clifford_map(&before, &after)? != Gate::Sum.clifford_map(dim)? {
                return Ok((false, None, None, "encoded SUM map differs".into()));
            }
        }
        let mlayout = block_layout(3, 3, 0);
        for m in logical_sum_measurements(&c, 3, 0, 1, 2)? {
            let r = readout_circuit(&m.op)?;
            let mut l = mlayout.clone();
            l.extend(std::iter::repeat_n(None, r.support.len()));
            if let Err(v) = check_transversal_structure(&r.ops, &l) {
                return Ok((false, None, None, format!("readout of {} not transversal: {v}", m.op)));
            }
        }
        let mut worst = 0.0f64;
        for a in 0..3 {
            for b in 0..3 {
                let mut s = tableau_to_state::<f64>(&encoded_basis_blocks(&c, &[a, b, 0])?)?;
                run_logical_sum(&c, &mut s, 3, 0, 1, 2, &mut rng, None)?;
                let want = tableau_to_state::<f64>(&encoded_basis_blocks(&c, &[a, dim.add(a, b), 0])?)?;
                worst = worst.max(phase_distance(&s, &want));
            }
        }
        Ok((
            worst <= 1e-8,
            Some(worst),
            Some(1e-8),
            format!("valid code; {syndromes} syndrome readouts match; encoded SUM exact on tableau and on 9 encoded basis inputs (3^9 amplitudes)"),
        ))
    })
}

// ---- 9: determinism

pub const DETERMINISM_PROGRAM: &str = "\
qudits 3 dim 3
logical 0
prep plus 1
sum 1 2
measure X X2 Z @ 0 1 2 -> a
gadget pinv 0
gadget sumgadget 0 2
measure Z Z @ 1 2 -> b
r 1
measure X @ 1 -> c
";

pub fn check_determinism(cfg: &Config) -> CheckResult {
    timed(9, "identical program and seed give identical tableau JSON", None, || {
        let p = circuit::parse(DETERMINISM_PROGRAM).map_err(|d| Error::Parse(d[0].to_string()))?;
        let opts = RunOptions { backend: BackendKind::Tableau, seed: cfg.seed, shots: 16 };
        let a = serde_json::to_string_pretty(&circuit::run(&p, &opts)?).expect("serializable");
        let b = serde_json::to_string_pretty(&circuit::run(&p, &opts)?).expect("serializable");
        Ok((a == b, None, None, format!("{} bytes per report", a.len())))
    })
}

/// Runs the checks for each dimension. Toffoli, |A> and code checks run at
/// d = 3 only; the rest at every dimension.
pub fn verify(dims: &[u32], cfg: &Config) -> Result<Vec<CheckResult>> {
    let dims: Vec<Dimension> = dims.iter().map(|&d| Dimension::new(d)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for &dim in &dims {
        out.push(check_pauli_algebra(dim, cfg));
        out.push(check_conjugation_maps(dim));
        out.push(check_measurement_rule(dim, cfg));
        out.extend(check_single_qudit_gadgets(dim, cfg));
        out.push(check_sum_gadget(dim, cfg));
        if dim.d() == 3 {
            out.push(check_toffoli(dim, cfg));
            out.push(check_ancilla_pipeline(dim, cfg));
            out.push(check_codes(cfg));
        }
    }
    if !dims.is_empty() {
        out.push(check_determinism(cfg));
    }
    Ok(out)
}
