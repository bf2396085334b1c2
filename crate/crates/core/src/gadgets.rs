//! Measurement-based gate constructions: the single-qudit Clifford gadgets,
//! the three-measurement SUM, and the Toffoli gadget with its correction table.

use crate::backend::Backend;
use crate::clifford::CliffordMap;
use crate::dense::{clifford_map_of_unitary, gate_matrix, max_abs_diff, CMatrix, DenseState};
use crate::error::{Error, Result};
use crate::gate::{Gate, GateOp};
use crate::pauli::PauliOperator;
use crate::scalar::Real;
use crate::tableau::InitKind;
use crate::zd::Dimension;
use ndarray::Array2;
use num_complex::Complex;
use rand::{Rng, RngCore};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// One primitive of a gadget. Qudit indices are local: data qudits first,
/// prepared ancillas appended in order, and a discard closes the gap.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Step {
    Prepare(InitKind),
    Gate(GateOp),
    /// Projective measurement of `op` followed by `correction^outcome`.
    Measure {
        op: PauliOperator,
        correction: PauliOperator,
    },
    Discard(usize),
}

impl std::fmt::Display for Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Step::Prepare(InitKind::Zero) => write!(f, "prepare |0>"),
            Step::Prepare(InitKind::Plus) => write!(f, "prepare |+>"),
            Step::Prepare(InitKind::Open) => write!(f, "prepare open"),
            Step::Gate(op) => write!(f, "{op}"),
            Step::Measure { op, correction } => write!(f, "measure {op}, correct {correction}^a"),
            Step::Discard(q) => write!(f, "discard {q}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetRecord {
    pub name: String,
    pub dim: Dimension,
    pub data: usize,
    pub steps: Vec<Step>,
    /// Conjugation action on the data qudits.
    pub expected: CliffordMap,
    /// A plain circuit with the same effect, for dense comparison.
    pub target: Vec<GateOp>,
    /// Allocation slot (data `0..data`, then ancillas in preparation order)
    /// holding output `i`.
    pub data_relocation: Vec<usize>,
}

impl GadgetRecord {
    fn build(name: &str, dim: Dimension, data: usize, steps: Vec<Step>, expected: CliffordMap, target: Vec<GateOp>) -> Self {
        let mut slots: Vec<usize> = (0..data).collect();
        let mut next = data;
        for step in &steps {
            match step {
                Step::Prepare(_) => {
                    slots.push(next);
                    next += 1;
                }
                Step::Discard(q) => {
                    slots.remove(*q);
                }
                _ => {}
            }
        }
        debug_assert_eq!(slots.len(), data);
        GadgetRecord { name: name.to_string(), dim, data, steps, expected, target, data_relocation: slots }
    }

    /// Runs `parts` in sequence as one record.
    pub fn compose(name: &str, parts: &[GadgetRecord]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Precondition("nothing to compose".into()))?;
        let mut steps = Vec::new();
        let mut expected = CliffordMap::identity(first.dim, first.data);
        let mut target = Vec::new();
        for p in parts {
            if p.dim != first.dim {
                return Err(Error::DimensionMismatch(p.dim.d(), first.dim.d()));
            }
            if p.data != first.data {
                return Err(Error::LengthMismatch(p.data, first.data));
            }
            steps.extend(p.steps.iter().cloned());
            expected = expected.then(&p.expected)?;
            target.extend(p.target.iter().cloned());
        }
        Ok(GadgetRecord::build(name, first.dim, first.data, steps, expected, target))
    }

    pub fn measurement_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Measure { .. })).count()
    }

    /// Runs the record on `backend` with its data on `data`. Ancillas are
    /// appended to the register and gone again at the end; outputs land back
    /// on `data`. `post_select` fixes the outcome of every measurement in order.
    pub fn run<B: Backend + ?Sized>(
        &self,
        backend: &mut B,
        data: &[usize],
        rng: &mut dyn RngCore,
        post_select: Option<&[u32]>,
    ) -> Result<Vec<u32>> {
        if backend.dim() != self.dim {
            return Err(Error::DimensionMismatch(backend.dim().d(), self.dim.d()));
        }
        if data.len() != self.data {
            return Err(Error::LengthMismatch(data.len(), self.data));
        }
        let n0 = backend.num_qudits();
        for (i, &q) in data.iter().enumerate() {
            if q >= n0 {
                return Err(Error::QuditOutOfRange { index: q, n: n0 });
            }
            if data[..i].contains(&q) {
                return Err(Error::QuditClash(q));
            }
        }
        if let Some(post) = post_select {
            if post.len() != self.measurement_count() {
                return Err(Error::LengthMismatch(post.len(), self.measurement_count()));
            }
        }
        let mut slots = data.to_vec();
        let mut outcomes = Vec::new();
        for step in &self.steps {
            match step {
                Step::Prepare(kind) => {
                    backend.prepare(*kind)?;
                    slots.push(backend.num_qudits() - 1);
                }
                Step::Gate(op) => {
                    let qs: Vec<usize> = op.qudits.iter().map(|&l| slots[l]).collect();
                    for _ in 0..op.power {
                        backend.apply_gate(op.gate, &qs)?;
                    }
                }
                Step::Measure { op, correction } => {
                    let n = backend.num_qudits();
                    let a = op.embed(n, &slots)?;
                    let post = post_select.map(|p| p[outcomes.len()]);
                    let outcome = backend.measure(&a, rng, post)?;
                    if outcome != 0 {
                        backend.apply_pauli(&correction.power(outcome as i64).embed(n, &slots)?)?;
                    }
                    outcomes.push(outcome);
                }
                Step::Discard(l) => {
                    let g = slots.remove(*l);
                    backend.discard(g)?;
                    for s in slots.iter_mut() {
                        if *s > g {
                            *s -= 1;
                        }
                    }
                }
            }
        }
        let n = backend.num_qudits();
        if n != n0 {
            return Err(Error::Precondition(format!("gadget '{}' left {} qudits, expected {n0}", self.name, n)));
        }
        if slots != data {
            backend.permute(&relocation(n, &slots, data))?;
        }
        Ok(outcomes)
    }

    /// Every outcome sequence, in lexicographic order.
    pub fn outcome_paths(&self) -> Vec<Vec<u32>> {
        let d = self.dim.d();
        let m = self.measurement_count();
        let mut out = vec![Vec::new()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..d).map(move |a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

fn pauli(dim: Dimension, x: &[i64], z: &[i64]) -> PauliOperator {
    PauliOperator::from_exponents(dim, 0, x, z).expect("sizes agree")
}

fn single_map(dim: Dimension, x: (i64, i64), z: (i64, i64)) -> CliffordMap {
    CliffordMap::new(dim, vec![pauli(dim, &[x.0], &[x.1])], vec![pauli(dim, &[z.0], &[z.1])]).expect("valid map")
}

/// Teleports `P^{-1}` through a `|0>` ancilla.
pub fn gadget_p_inverse(dim: Dimension) -> GadgetRecord {
    let d = dim.d();
    let steps = vec![
        Step::Prepare(InitKind::Zero),
        Step::Gate(GateOp::new(Gate::Sum, &[0, 1])),
        Step::Measure { op: pauli(dim, &[0, 1], &[0, 1]), correction: pauli(dim, &[0, 0], &[-1, 1]) },
        Step::Discard(1),
    ];
    let expected = single_map(dim, (1, -1), (0, 1));
    GadgetRecord::build("pinv", dim, 1, steps, expected, vec![GateOp::pow(Gate::PhaseGate, &[0], d - 1)])
}

/// `Q`: `X -> X`, `Z -> XZ`, via an X-eigenstate ancilla.
pub fn gadget_q(dim: Dimension) -> GadgetRecord {
    let d = dim.d();
    let steps = vec![
        Step::Prepare(InitKind::Plus),
        Step::Gate(GateOp::new(Gate::Sum, &[1, 0])),
        Step::Measure { op: pauli(dim, &[0, 1], &[0, -1]), correction: pauli(dim, &[1, 1], &[0, 0]) },
        Step::Discard(1),
    ];
    let expected = single_map(dim, (1, 0), (1, 1));
    let target = vec![GateOp::new(Gate::Fourier, &[0]), GateOp::pow(Gate::PhaseGate, &[0], d - 1), GateOp::pow(Gate::Fourier, &[0], 3)];
    GadgetRecord::build("q", dim, 1, steps, expected, target)
}

/// `S(s)`: `X -> X^{-1/s}`, `Z -> Z^{-s}`. The output ends up in the ancilla slot.
pub fn gadget_s(dim: Dimension, s: u32) -> Result<GadgetRecord> {
    let s = s % dim.d();
    if s == 0 {
        return Err(Error::NotInvertible(s, dim.d()));
    }
    let s_inv = dim.inv(s)?;
    let corr = pauli(dim, &[s as i64, 1], &[0, 0]).power(-(s_inv as i64));
    let steps = vec![
        Step::Prepare(InitKind::Plus),
        Step::Gate(GateOp::pow(Gate::Sum, &[1, 0], s)),
        Step::Measure { op: pauli(dim, &[0, 0], &[1, 0]), correction: corr },
        Step::Discard(0),
    ];
    let a = dim.neg(s_inv);
    let expected = single_map(dim, (a as i64, 0), (0, -(s as i64)));
    Ok(GadgetRecord::build(&format!("s{s}"), dim, 1, steps, expected, vec![GateOp::new(Gate::Scale(a), &[0])]))
}

/// `R^{-1} = X^{-1} Q P^{-1} Q`, rightmost first. With `ZX = omega XZ` the
/// Pauli factor must be `X^{-1}` for the product to be exactly `R^{-1}`.
pub fn gadget_r_inverse(dim: Dimension) -> Result<GadgetRecord> {
    let q = gadget_q(dim);
    let x_inv = GateOp::pow(Gate::X, &[0], dim.d() - 1);
    let x = GadgetRecord::build("xinv", dim, 1, vec![Step::Gate(x_inv.clone())], x_inv.clifford_map(dim, 1)?, vec![x_inv]);
    GadgetRecord::compose("rinv", &[q.clone(), gadget_p_inverse(dim), q, x])
}

/// The Fourier gate as three `R^{-1}` gadgets.
pub fn gadget_r(dim: Dimension) -> Result<GadgetRecord> {
    let rinv = gadget_r_inverse(dim)?;
    let mut r = GadgetRecord::compose("r", &[rinv.clone(), rinv.clone(), rinv])?;
    r.target = vec![GateOp::new(Gate::Fourier, &[0])];
    Ok(r)
}

/// SUM from qudit 0 to qudit 1 by three measurements against a `|0>` ancilla.
pub fn gadget_sum(dim: Dimension) -> Result<GadgetRecord> {
    let steps = vec![
        Step::Prepare(InitKind::Zero),
        Step::Measure { op: pauli(dim, &[0, 1, -1], &[0, 0, 0]), correction: pauli(dim, &[0, 0, 0], &[0, 0, -1]) },
        Step::Measure { op: pauli(dim, &[0, 0, 0], &[1, 0, 1]), correction: pauli(dim, &[0, 1, -1], &[0, 0, 0]) },
        Step::Measure { op: pauli(dim, &[0, 0, 1], &[0, 0, 0]), correction: pauli(dim, &[0, 0, 0], &[1, 0, 1]) },
        Step::Discard(2),
    ];
    Ok(GadgetRecord::build("sumgadget", dim, 2, steps, Gate::Sum.clifford_map(dim)?, vec![GateOp::new(Gate::Sum, &[0, 1])]))
}

/// Looks up a gadget by its command-line name.
pub fn gadget_by_name(name: &str, dim: Dimension, arg: Option<u32>) -> Result<GadgetRecord> {
    match name {
        "pinv" => Ok(gadget_p_inverse(dim)),
        "q" => Ok(gadget_q(dim)),
        "r" => gadget_r(dim),
        "rinv" => gadget_r_inverse(dim),
        "s" => gadget_s(dim, arg.ok_or_else(|| Error::Precondition("gadget s needs a value".into()))?),
        "sumgadget" => gadget_sum(dim),
        _ => Err(Error::Precondition(format!("unknown gadget '{name}'"))),
    }
}

/// Applies a gate list to a dense state.
pub fn apply_circuit<T: Real>(state: &mut DenseState<T>, ops: &[GateOp]) -> Result<()> {
    for op in ops {
        for _ in 0..op.power {
            state.apply_gate(op.gate, &op.qudits)?;
        }
    }
    Ok(())
}

/// `sum_{a,b} |a>|b>|ab> / d`.
pub fn toffoli_ancilla_state<T: Real>(dim: Dimension) -> Result<DenseState<T>> {
    a_j_state(dim, 0)
}

/// `|A_j> = sum_{a,b} |a>|b>|ab + j> / d`, the `omega^j` eigenstate of `M3`.
pub fn a_j_state<T: Real>(dim: Dimension, j: u32) -> Result<DenseState<T>> {
    let d = dim.d() as usize;
    let mut amps = vec![Complex::<T>::default(); d * d * d];
    for a in 0..d as u32 {
        for b in 0..d as u32 {
            let c = dim.add(dim.mul(a, b), j);
            amps[(a as usize * d + b as usize) * d + c as usize] = Complex::new(T::one(), T::zero());
        }
    }
    DenseState::from_amplitudes(dim, 3, amps)
}

/// `sum_j |j...j> omega^{js} / sqrt(d)` on `r` qudits.
pub fn cat_state<T: Real>(dim: Dimension, r: usize, s: u32) -> Result<DenseState<T>> {
    let size = dim.size(r).ok_or(Error::TooLarge { d: dim.d(), n: r, cap: usize::MAX })?;
    let mut amps = vec![Complex::<T>::default(); size];
    let step = (size - 1) / (dim.d() as usize - 1);
    for j in 0..dim.d() {
        amps[j as usize * step] = dim.root(j as i64 * s as i64);
    }
    DenseState::from_amplitudes(dim, r, amps)
}

/// Applies `F^{⊗3}` to `|000>`, measures `M3` through a CAT register and
/// undoes the outcome with `X^{-j}` on the third qudit. Returns the state
/// and the intermediate `j`.
pub fn prepare_toffoli_ancilla_with<T: Real, R: Rng + ?Sized>(
    dim: Dimension,
    rng: &mut R,
    post_select: Option<u32>,
) -> Result<(DenseState<T>, u32)> {
    let mut s = DenseState::zero(dim, 3)?;
    for q in 0..3 {
        s.apply_gate(Gate::Fourier, &[q])?;
    }
    let (j, mut s) = measure_via_cat_with(Gate::M3, &[0, 1, 2], &s, 3, rng, post_select)?;
    s.apply_pauli(&PauliOperator::single(dim, 3, 2, -(j as i64), 0))?;
    Ok((s, j))
}

pub fn prepare_toffoli_ancilla<T: Real, R: Rng + ?Sized>(dim: Dimension, rng: &mut R) -> Result<DenseState<T>> {
    Ok(prepare_toffoli_ancilla_with(dim, rng, None)?.0)
}

/// Diagonal factors of a gate, each with its power and local qudits.
fn diagonal_factors(gate: Gate, dim: Dimension) -> Result<Vec<(Gate, i64, Vec<usize>)>> {
    match gate {
        Gate::M3 => Ok(vec![(Gate::Z, 1, vec![2]), (Gate::Phase2, dim.d() as i64 - 1, vec![0, 1])]),
        Gate::Z | Gate::PhaseGate | Gate::Phase2 => Ok(vec![(gate, 1, (0..gate.arity()).collect())]),
        _ => Err(Error::NotDiagonalRoot),
    }
}

/// Measures the eigenvalue exponent of a diagonal Clifford gate through an
/// `r`-qudit CAT register, with the controlled factors spread over the CAT qudits.
pub fn measure_via_cat<T: Real, R: Rng + ?Sized>(
    gate: Gate,
    qudits: &[usize],
    state: &DenseState<T>,
    r: usize,
    rng: &mut R,
) -> Result<(u32, DenseState<T>)> {
    measure_via_cat_with(gate, qudits, state, r, rng, None)
}

pub fn measure_via_cat_with<T: Real, R: Rng + ?Sized>(
    gate: Gate,
    qudits: &[usize],
    state: &DenseState<T>,
    r: usize,
    rng: &mut R,
    post_select: Option<u32>,
) -> Result<(u32, DenseState<T>)> {
    let dim = state.dim();
    if r == 0 {
        return Err(Error::Precondition("CAT register needs at least one qudit".into()));
    }
    GateOp::new(gate, qudits).check(state.n())?;
    let factors = diagonal_factors(gate, dim)?;
    let n = state.n();
    let mut cat = DenseState::zero(dim, r)?;
    cat.apply_gate(Gate::Fourier, &[0])?;
    for i in 1..r {
        cat.apply_gate(Gate::Sum, &[0, i])?;
    }
    let mut s = state.tensor(&cat)?;
    for (k, (g, power, local)) in factors.iter().enumerate() {
        let targets: Vec<usize> = local.iter().map(|&l| qudits[l]).collect();
        s.apply_controlled_diagonal(n + k % r, *g, *power, &targets)?;
    }
    for i in 1..r {
        s.apply_gate(Gate::InvSum, &[n, n + i])?;
    }
    let post = post_select.map(|v| dim.neg(v % dim.d()));
    let (outcome, mut s) = s.measure_pauli(&PauliOperator::x_on(dim, n + r, n), rng, post)?;
    for q in (n..n + r).rev() {
        s = s.discard(q)?;
    }
    Ok((dim.neg(outcome), s))
}

/// Correction circuits for the Toffoli gadget, keyed by the outcomes of the
/// Z, Z and X measurements.
#[derive(Clone, Debug, Serialize)]
pub struct CorrectionTable {
    pub dim: Dimension,
    pub entries: BTreeMap<[u32; 3], Vec<GateOp>>,
}

/// Generators searched for Toffoli corrections, excluding Paulis.
fn correction_vocabulary(dim: Dimension) -> Vec<GateOp> {
    let d = dim.d();
    let mut v = Vec::new();
    for k in 1..d {
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    v.push(GateOp::pow(Gate::Sum, &[i, j], k));
                }
            }
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            v.push(GateOp::pow(Gate::Phase2, &[i, j], k));
        }
    }
    for a in 2..d {
        for i in 0..3 {
            v.push(GateOp::new(Gate::Scale(a), &[i]));
        }
    }
    v
}

fn circuit_map(dim: Dimension, ops: &[GateOp]) -> Result<CliffordMap> {
    let mut m = CliffordMap::identity(dim, 3);
    for op in ops {
        m = m.then(&op.clifford_map(dim, 3)?)?;
    }
    Ok(m)
}

fn inverse_circuit(dim: Dimension, ops: &[GateOp]) -> Result<Vec<GateOp>> {
    ops.iter().rev().map(|op| op.inverse(dim)).collect()
}

/// Shortest product of at most four vocabulary gates whose symplectic part
/// matches `target`, found meet-in-the-middle.
fn search_symplectic(
    dim: Dimension,
    target: &CliffordMap,
    table: &[(Vec<GateOp>, CliffordMap)],
    index: &HashMap<Vec<u32>, usize>,
) -> Result<Option<Vec<GateOp>>> {
    let mut best: Option<Vec<GateOp>> = None;
    for (b, _) in table {
        if best.as_ref().is_some_and(|x| x.len() <= b.len()) {
            break;
        }
        let rest = target.then(&circuit_map(dim, &inverse_circuit(dim, b)?)?)?;
        if let Some(&i) = index.get(&rest.symplectic_key()) {
            let mut c = table[i].0.clone();
            c.extend(b.iter().cloned());
            if best.as_ref().is_none_or(|x| c.len() < x.len()) {
                best = Some(c);
            }
        }
    }
    Ok(best)
}

fn pauli_layer(dim: Dimension, target: &CliffordMap, found: &CliffordMap) -> Vec<GateOp> {
    let mut ops = Vec::new();
    for q in 0..3 {
        let x = dim.neg(dim.sub(target.z_image(q).phase(), found.z_image(q).phase()));
        let z = dim.sub(target.x_image(q).phase(), found.x_image(q).phase());
        if x != 0 {
            ops.push(GateOp::pow(Gate::X, &[q], x));
        }
        if z != 0 {
            ops.push(GateOp::pow(Gate::Z, &[q], z));
        }
    }
    ops
}

/// New-qudit-`i`-is-old-qudit-`perm[i]` permutation placing `from[j]` at `to[j]`
/// and keeping every other qudit in its relative order.
pub(crate) fn relocation(n: usize, from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut rest = (0..n).filter(|q| !from.contains(q));
    (0..n)
        .map(|i| match to.iter().position(|&q| q == i) {
            Some(j) => from[j],
            None => rest.next().expect("counts agree"),
        })
        .collect()
}

/// The uncorrected gadget: `|A>` is appended after the register, the data
/// qudits are measured and removed, and the former ancillas take their places.
fn toffoli_raw<T: Real, R: Rng + ?Sized>(
    state: &DenseState<T>,
    data: [usize; 3],
    ancilla: &DenseState<T>,
    rng: &mut R,
    post_select: Option<[u32; 3]>,
) -> Result<([u32; 3], DenseState<T>)> {
    let dim = state.dim();
    if ancilla.n() != 3 {
        return Err(Error::LengthMismatch(ancilla.n(), 3));
    }
    GateOp::new(Gate::Toffoli, &data).check(state.n())?;
    let n = state.n();
    let a = [n, n + 1, n + 2];
    let mut s = state.tensor(ancilla)?;
    s.apply_gate(Gate::InvSum, &[a[0], data[0]])?;
    s.apply_gate(Gate::InvSum, &[a[1], data[1]])?;
    s.apply_gate(Gate::Sum, &[data[2], a[2]])?;
    let mut out = [0u32; 3];
    let ops =
        [PauliOperator::z_on(dim, n + 3, data[0]), PauliOperator::z_on(dim, n + 3, data[1]), PauliOperator::x_on(dim, n + 3, data[2])];
    for (k, op) in ops.iter().enumerate() {
        let (v, next) = s.measure_pauli(op, rng, post_select.map(|p| p[k]))?;
        out[k] = v;
        s = next;
    }
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&k| std::cmp::Reverse(data[k]));
    for k in order {
        let phi = if k == 2 { DenseState::x_eigenstate(dim, out[2])? } else { DenseState::basis(dim, &[out[k]])? };
        s = s.contract(data[k], &phi)?;
    }
    let perm = relocation(n, &[n - 3, n - 2, n - 1], &data);
    Ok((out, s.permute_qudits(&perm)?))
}

/// Runs the Toffoli gadget on qudits `data` of `state`, consuming a prepared
/// `|A>` ancilla. The corrected output replaces the data qudits.
pub fn gadget_toffoli_on<T: Real, R: Rng + ?Sized>(
    state: &DenseState<T>,
    data: [usize; 3],
    ancilla: &DenseState<T>,
    table: &CorrectionTable,
    rng: &mut R,
    post_select: Option<[u32; 3]>,
) -> Result<([u32; 3], DenseState<T>)> {
    if table.dim != state.dim() {
        return Err(Error::DimensionMismatch(state.dim().d(), table.dim.d()));
    }
    let (m, mut s) = toffoli_raw(state, data, ancilla, rng, post_select)?;
    let corr = table.entries.get(&m).ok_or_else(|| Error::NoCorrection(m.to_vec()))?;
    for op in corr {
        let qs: Vec<usize> = op.qudits.iter().map(|&l| data[l]).collect();
        for _ in 0..op.power {
            s.apply_gate(op.gate, &qs)?;
        }
    }
    Ok((m, s))
}

/// [`gadget_toffoli_on`] for a 3-qudit input.
pub fn gadget_toffoli<T: Real, R: Rng + ?Sized>(
    input: &DenseState<T>,
    ancilla: &DenseState<T>,
    table: &CorrectionTable,
    rng: &mut R,
    post_select: Option<[u32; 3]>,
) -> Result<([u32; 3], DenseState<T>)> {
    if input.n() != 3 {
        return Err(Error::LengthMismatch(input.n(), 3));
    }
    gadget_toffoli_on(input, [0, 1, 2], ancilla, table, rng, post_select)
}

fn circuit_matrix(dim: Dimension, ops: &[GateOp]) -> Result<CMatrix<f64>> {
    let size = dim.size(3).expect("small");
    let mut m = Array2::zeros((size, size));
    for col in 0..size {
        let mut amps = vec![Complex::default(); size];
        amps[col] = Complex::new(1.0, 0.0);
        let mut s = DenseState::from_amplitudes(dim, 3, amps)?;
        apply_circuit(&mut s, ops)?;
        for (row, a) in s.amplitudes().iter().enumerate() {
            m[[row, col]] = *a;
        }
    }
    Ok(m)
}

/// Finds, for every outcome triple, a Clifford circuit that turns the raw
/// gadget output into `Toffoli(input)`, then validates the table on random inputs.
pub fn derive_toffoli_corrections(dim: Dimension) -> Result<CorrectionTable> {
    let size = dim.size(3).expect("small");
    let ancilla = toffoli_ancilla_state::<f64>(dim)?;
    let toffoli = gate_matrix::<f64>(Gate::Toffoli, dim)?;
    let vocab = correction_vocabulary(dim);

    let mut table: Vec<(Vec<GateOp>, CliffordMap)> = vec![(Vec::new(), CliffordMap::identity(dim, 3))];
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    index.insert(table[0].1.symplectic_key(), 0);
    for depth in 1..=2 {
        let frontier: Vec<usize> = (0..table.len()).filter(|&i| table[i].0.len() == depth - 1).collect();
        for i in frontier {
            for g in &vocab {
                let map = table[i].1.then(&g.clifford_map(dim, 3)?)?;
                let key = map.symplectic_key();
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                    let mut ops = table[i].0.clone();
                    ops.push(g.clone());
                    e.insert(table.len());
                    table.push((ops, map));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut entries = BTreeMap::new();
    let d = dim.d();
    for m1 in 0..d {
        for m2 in 0..d {
            for k in 0..d {
                let m = [m1, m2, k];
                let mut raw = Array2::zeros((size, size));
                for col in 0..size {
                    let mut amps = vec![Complex::default(); size];
                    amps[col] = Complex::new(1.0, 0.0);
                    let input = DenseState::from_amplitudes(dim, 3, amps)?;
                    let (_, out) = toffoli_raw(&input, [0, 1, 2], &ancilla, &mut rng, Some(m))?;
                    for (row, a) in out.amplitudes().iter().enumerate() {
                        raw[[row, col]] = *a;
                    }
                }
                let wanted = toffoli.dot(&crate::dense::adjoint(&raw));
                let target = clifford_map_of_unitary(&wanted, dim, 3)?;
                let symp = search_symplectic(dim, &target, &table, &index)?.ok_or_else(|| Error::NoCorrection(m.to_vec()))?;
                let found = circuit_map(dim, &symp)?;
                let mut corr = pauli_layer(dim, &target, &found);
                corr.extend(symp);
                if circuit_map(dim, &corr)? != target {
                    return Err(Error::NoCorrection(m.to_vec()));
                }
                let full = circuit_matrix(dim, &corr)?.dot(&raw);
                let phase = (0..size)
                    .flat_map(|c| (0..size).map(move |r| (r, c)))
                    .find(|&(r, c)| toffoli[[r, c]].norm() > 0.5)
                    .map(|(r, c)| full[[r, c]] / toffoli[[r, c]])
                    .expect("nonzero");
                if max_abs_diff(&full, &toffoli.mapv(|z| z * phase)) > 1e-8 {
                    return Err(Error::NoCorrection(m.to_vec()));
                }
                entries.insert(m, corr);
            }
        }
    }
    let table = CorrectionTable { dim, entries };
    validate_corrections(&table, 100, &mut rng)?;
    Ok(table)
}

/// Runs the corrected gadget on random inputs and checks fidelity with the
/// Toffoli gate to 1e-8. Returns the smallest fidelity seen.
pub fn validate_corrections<R: Rng + ?Sized>(table: &CorrectionTable, trials: usize, rng: &mut R) -> Result<f64> {
    let dim = table.dim;
    let ancilla = toffoli_ancilla_state::<f64>(dim)?;
    let mut worst = 1.0f64;
    for _ in 0..trials {
        let input = DenseState::<f64>::random(dim, 3, rng)?;
        let mut want = input.clone();
        want.apply_gate(Gate::Toffoli, &[0, 1, 2])?;
        let (m, out) = gadget_toffoli(&input, &ancilla, table, rng, None)?;
        let f = out.fidelity(&want);
        worst = worst.min(f);
        if f < 1.0 - 1e-8 {
            return Err(Error::NoCorrection(m.to_vec()));
        }
    }
    Ok(worst)
}
