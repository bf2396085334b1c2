//! Qudit stabilizer codes: validation, syndromes, transversal readout and the
//! logical SUM between encoded blocks.

use crate::backend::Backend;
use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::gate::{Gate, GateOp};
use crate::linalg::rank;
use crate::pauli::PauliOperator;
use crate::scalar::Real;
use crate::tableau::{LogicalPair, StabilizerTableau};
use crate::zd::Dimension;
use rand::{Rng, RngCore};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    pub dim: Dimension,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<PauliOperator>,
    pub logical_x: Vec<PauliOperator>,
    pub logical_z: Vec<PauliOperator>,
}

/// Eigenvalue exponents of the generators, in generator order.
pub type Syndrome = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Counts { generators: usize, logical_x: usize, logical_z: usize, n: usize, k: usize },
    WrongSize { name: String, n: usize },
    NonCommuting { a: String, b: String, exponent: u32 },
    Dependent { name: String },
    LogicalPairing { x: String, z: String, expected: u32, got: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Counts { generators, logical_x, logical_z, n, k } => write!(
                f,
                "expected {} generators and {k} logical pairs for n={n}, k={k}; found {generators}, {logical_x} X and {logical_z} Z",
                n - k
            ),
            Violation::WrongSize { name, n } => write!(f, "{name} does not act on {n} qudits"),
            Violation::NonCommuting { a, b, exponent } => write!(f, "non-commuting pair {a}, {b} (exponent {exponent})"),
            Violation::Dependent { name } => write!(f, "{name} depends on earlier generators"),
            Violation::LogicalPairing { x, z, expected, got } => {
                write!(f, "commutation exponent of {x} with {z} is {got}, expected {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub violations: Vec<Violation>,
}

impl CodeReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&lines.join("; "))
    }
}

/// Checks commutation, independence and the logical pairing of a code.
pub fn validate_code(c: &StabilizerCode) -> CodeReport {
    let mut report = CodeReport::default();
    let v = &mut report.violations;
    if c.k > c.n || c.generators.len() != c.n - c.k || c.logical_x.len() != c.k || c.logical_z.len() != c.k {
        v.push(Violation::Counts {
            generators: c.generators.len(),
            logical_x: c.logical_x.len(),
            logical_z: c.logical_z.len(),
            n: c.n,
            k: c.k.min(c.n),
        });
    }
    let named = c.named_operators();
    let mut sized = true;
    for (name, op) in &named {
        if op.n() != c.n || op.dim() != c.dim {
            v.push(Violation::WrongSize { name: name.clone(), n: c.n });
            sized = false;
        }
    }
    if !sized {
        return report;
    }
    let d = c.dim;
    let gens = c.generators.len();
    for i in 0..named.len() {
        for j in i + 1..named.len() {
            let (an, a) = &named[i];
            let (bn, b) = &named[j];
            let e = a.comm_unchecked(b);
            let paired_lx = i >= gens && i < gens + c.logical_x.len() && j >= gens + c.logical_x.len();
            if paired_lx {
                let xi = i - gens;
                let zj = j - gens - c.logical_x.len();
                let expected = if xi == zj { d.neg(1) } else { 0 };
                if e != expected {
                    v.push(Violation::LogicalPairing { x: an.clone(), z: bn.clone(), expected, got: e });
                }
            } else if e != 0 {
                v.push(Violation::NonCommuting { a: an.clone(), b: bn.clone(), exponent: e });
            }
        }
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (i, g) in c.generators.iter().enumerate() {
        rows.push(g.symplectic());
        if rank(&rows, d) < rows.len() {
            v.push(Violation::Dependent { name: format!("S{i}") });
            rows.pop();
        }
    }
    report
}

impl StabilizerCode {
    /// Builds a code and rejects it unless `validate_code` reports no violations.
    pub fn new(
        dim: Dimension,
        n: usize,
        k: usize,
        generators: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
    ) -> Result<Self> {
        let c = StabilizerCode { dim, n, k, generators, logical_x, logical_z };
        let report = validate_code(&c);
        if !report.is_ok() {
            return Err(Error::InvalidCode(report.to_string()));
        }
        Ok(c)
    }

    fn named_operators(&self) -> Vec<(String, &PauliOperator)> {
        let mut out: Vec<(String, &PauliOperator)> = Vec::new();
        out.extend(self.generators.iter().enumerate().map(|(i, g)| (format!("S{i}"), g)));
        out.extend(self.logical_x.iter().enumerate().map(|(i, g)| (format!("LX{i}"), g)));
        out.extend(self.logical_z.iter().enumerate().map(|(i, g)| (format!("LZ{i}"), g)));
        out
    }

    /// Tableau of the code space with the logical operators as open pairs.
    pub fn code_tableau(&self) -> Result<StabilizerTableau> {
        let logicals = self.logical_x.iter().zip(&self.logical_z).map(|(x, z)| LogicalPair { x: x.clone(), z: z.clone() }).collect();
        StabilizerTableau::new(self.dim, self.n, self.generators.clone(), logicals)
    }

    /// Encoded `|a_0 ... a_{k-1}>`: the generators plus `omega^{-a_i} Z̄_i`.
    pub fn encoded_basis_tableau(&self, values: &[u32]) -> Result<StabilizerTableau> {
        if values.len() != self.k {
            return Err(Error::LengthMismatch(values.len(), self.k));
        }
        let mut rows = self.generators.clone();
        rows.extend(self.logical_z.iter().zip(values).map(|(z, &a)| z.with_phase_shift(-(a as i64))));
        StabilizerTableau::new(self.dim, self.n, rows, Vec::new())
    }

    /// Text form accepted by [`parse_code`].
    pub fn to_text(&self) -> String {
        let mut s = format!("code n={} k={} d={}\n", self.n, self.k, self.dim);
        for g in &self.generators {
            s.push_str(&format!("S: {g}\n"));
        }
        for (i, (x, z)) in self.logical_x.iter().zip(&self.logical_z).enumerate() {
            s.push_str(&format!("LX{i}: {x}\nLZ{i}: {z}\n"));
        }
        s
    }
}

/// The [[3,1]] qutrit code `<XXX, ZZZ>` with `X̄ = X X^-1 I`, `Z̄ = Z^-1 Z I`.
pub fn example_code_331() -> StabilizerCode {
    let dim = Dimension::new(3).expect("3 is prime");
    let p = |x: &[i64], z: &[i64]| PauliOperator::from_exponents(dim, 0, x, z).expect("three qudits");
    StabilizerCode::new(
        dim,
        3,
        1,
        vec![p(&[1, 1, 1], &[0, 0, 0]), p(&[0, 0, 0], &[1, 1, 1])],
        vec![p(&[1, -1, 0], &[0, 0, 0])],
        vec![p(&[0, 0, 0], &[-1, 1, 0])],
    )
    .expect("valid code")
}

/// Pure tableau of encoded zero: the generators and every `Z̄_i`.
pub fn encoded_zero_tableau(c: &StabilizerCode) -> Result<StabilizerTableau> {
    let report = validate_code(c);
    if !report.is_ok() {
        return Err(Error::InvalidCode(report.to_string()));
    }
    c.encoded_basis_tableau(&vec![0; c.k])
}

/// Measuring generator `i` on `e|psi>`, with `|psi>` in the code space, gives
/// exactly entry `i`.
pub fn error_syndrome_of_pauli(c: &StabilizerCode, e: &PauliOperator) -> Result<Syndrome> {
    c.generators.iter().map(|g| g.commutation_exponent(e)).collect()
}

/// Gates that read a Pauli operator into a sum-zero ancilla register.
///
/// The register is `n` data qudits followed by one ancilla per support qudit.
/// The ancillas start in `|0...0>`; after `ops`, measuring each of them in Z
/// and adding `phase_offset` to the digit sum gives the eigenvalue exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReadoutCircuit {
    pub n: usize,
    pub support: Vec<usize>,
    pub ops: Vec<GateOp>,
    pub phase_offset: u32,
}

impl ReadoutCircuit {
    pub fn ancillas(&self) -> std::ops::Range<usize> {
        self.n..self.n + self.support.len()
    }
}

/// Single-qudit Clifford taking `X^a Z^b` to `omega^theta Z^e`; returns the
/// gates, `theta` and `e`.
fn diagonalizing_gates(dim: Dimension, a: u32, b: u32) -> Result<(Vec<GateOp>, u32, u32)> {
    let local = PauliOperator::single(dim, 1, 0, a as i64, b as i64);
    let ops = if a == 0 {
        Vec::new()
    } else {
        let k = dim.neg(dim.mul(b, dim.inv(a)?));
        let mut ops = Vec::new();
        if k != 0 {
            ops.push(GateOp::pow(Gate::PhaseGate, &[0], k));
        }
        ops.push(GateOp::new(Gate::Fourier, &[0]));
        ops
    };
    let mut image = local;
    for op in &ops {
        image = op.clifford_map(dim, 1)?.apply(&image)?;
    }
    debug_assert_eq!(image.x_exps()[0], 0);
    Ok((ops, image.phase(), image.z_exps()[0]))
}

/// Sum-zero ancilla preparation, basis change, transversal SUMs and the
/// inverse basis change for reading `op`.
pub fn readout_circuit(op: &PauliOperator) -> Result<ReadoutCircuit> {
    let dim = op.dim();
    let n = op.n();
    let support: Vec<usize> = op.support().collect();
    let w = support.len();
    if w == 0 {
        return Err(Error::Precondition("cannot read out a scalar".into()));
    }
    let mut ops = vec![GateOp::new(Gate::Fourier, &[n])];
    for i in 1..w {
        ops.push(GateOp::new(Gate::Sum, &[n, n + i]));
    }
    for i in 0..w {
        ops.push(GateOp::new(Gate::Fourier, &[n + i]));
    }
    let mut phase = op.phase();
    let mut undo = Vec::new();
    let mut sums = Vec::new();
    for (i, &q) in support.iter().enumerate() {
        let (a, b) = op.local(q);
        let (gates, theta, e) = diagonalizing_gates(dim, a, b)?;
        phase = dim.add(phase, theta);
        for g in &gates {
            ops.push(GateOp::pow(g.gate, &[q], g.power));
        }
        for g in gates.iter().rev() {
            let inv = g.inverse(dim)?;
            undo.push(GateOp::pow(inv.gate, &[q], inv.power));
        }
        sums.push(GateOp::pow(Gate::Sum, &[q, n + i], e));
    }
    ops.extend(sums);
    ops.extend(undo);
    Ok(ReadoutCircuit { n, support, ops, phase_offset: phase })
}

/// Measures generator `index` through a sum-zero ancilla coupled transversally.
pub fn transversal_syndrome_extraction<T: Real, R: Rng + ?Sized>(
    c: &StabilizerCode,
    state: &DenseState<T>,
    index: usize,
    rng: &mut R,
) -> Result<(u32, DenseState<T>)> {
    let g = c.generators.get(index).ok_or(Error::QuditOutOfRange { index, n: c.generators.len() })?;
    measure_transversally(state, g, rng)
}

/// Runs [`readout_circuit`] on a dense state and measures the ancillas.
pub fn measure_transversally<T: Real, R: Rng + ?Sized>(
    state: &DenseState<T>,
    op: &PauliOperator,
    rng: &mut R,
) -> Result<(u32, DenseState<T>)> {
    if op.n() != state.n() {
        return Err(Error::LengthMismatch(op.n(), state.n()));
    }
    let dim = state.dim();
    let circuit = readout_circuit(op)?;
    let w = circuit.support.len();
    let total = circuit.n + w;
    let cap = crate::dense::amplitude_cap();
    if dim.size(total).is_none_or(|s| s > cap) {
        return Err(Error::TooLarge { d: dim.d(), n: total, cap });
    }
    let mut s = state.tensor(&DenseState::zero(dim, w)?)?;
    crate::gadgets::apply_circuit(&mut s, &circuit.ops)?;
    let mut outcome = circuit.phase_offset;
    for a in circuit.ancillas().rev() {
        let (digit, next) = s.measure_pauli(&PauliOperator::z_on(dim, s.n(), a), rng, None)?;
        outcome = dim.add(outcome, digit);
        s = next.contract(a, &DenseState::basis(dim, &[digit])?)?;
    }
    Ok((outcome, s))
}

/// Block membership of each qudit: `Some((block, position))` or `None` for a
/// dedicated ancilla.
pub type BlockLayout = Vec<Option<(usize, usize)>>;

/// Layout of `blocks` consecutive blocks of `n` qudits followed by `ancillas` ancillas.
pub fn block_layout(blocks: usize, n: usize, ancillas: usize) -> BlockLayout {
    let mut l: BlockLayout = (0..blocks * n).map(|q| Some((q / n, q % n))).collect();
    l.extend(std::iter::repeat_n(None, ancillas));
    l
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalViolation {
    pub index: usize,
    pub op: String,
    pub reason: String,
}

impl fmt::Display for TransversalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gate {} ({}): {}", self.index, self.op, self.reason)
    }
}

/// Checks that multi-qudit gates only couple equal positions of different
/// blocks, or involve dedicated ancillas. Reports the first offending gate.
pub fn check_transversal_structure(ops: &[GateOp], layout: &BlockLayout) -> std::result::Result<(), TransversalViolation> {
    for (index, op) in ops.iter().enumerate() {
        let fail = |reason: String| TransversalViolation { index, op: op.to_string(), reason };
        if let Some(&q) = op.qudits.iter().find(|&&q| q >= layout.len()) {
            return Err(fail(format!("qudit {q} is outside the layout")));
        }
        if op.qudits.len() < 2 {
            continue;
        }
        let members: Vec<(usize, usize)> = op.qudits.iter().filter_map(|&q| layout[q]).collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.0 == b.0 {
                    return Err(fail(format!("couples positions {} and {} of block {}", a.1, b.1, a.0)));
                }
                if a.1 != b.1 {
                    return Err(fail(format!("couples position {} of block {} with position {} of block {}", a.1, a.0, b.1, b.0)));
                }
            }
        }
    }
    Ok(())
}

/// Logical operators and their places in a register of whole code blocks.
/// Logical index `i` lives in block `i / k` as logical qudit `i % k`.
struct EncodedFrame<'a> {
    code: &'a StabilizerCode,
    total: usize,
}

impl EncodedFrame<'_> {
    fn block(&self, i: usize) -> Vec<usize> {
        let b = i / self.code.k;
        (b * self.code.n..(b + 1) * self.code.n).collect()
    }

    fn x(&self, i: usize) -> Result<PauliOperator> {
        self.code.logical_x[i % self.code.k].embed(self.total, &self.block(i))
    }

    fn z(&self, i: usize) -> Result<PauliOperator> {
        self.code.logical_z[i % self.code.k].embed(self.total, &self.block(i))
    }
}

/// One encoded measurement of the logical SUM protocol with its correction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodedMeasurement {
    pub op: PauliOperator,
    pub correction: PauliOperator,
}

/// The four encoded measurements: the three of the SUM protocol, then `Z̄`
/// on the ancilla to return it to encoded zero.
pub fn logical_sum_measurements(
    c: &StabilizerCode,
    blocks: usize,
    source: usize,
    target: usize,
    ancilla: usize,
) -> Result<Vec<EncodedMeasurement>> {
    if c.k == 0 {
        return Err(Error::InvalidCode("code encodes no logical qudits".into()));
    }
    let logicals = blocks * c.k;
    for i in [source, target, ancilla] {
        if i >= logicals {
            return Err(Error::QuditOutOfRange { index: i, n: logicals });
        }
    }
    if source == target || source == ancilla || target == ancilla {
        return Err(Error::Precondition("source, target and ancilla logical qudits must be distinct".into()));
    }
    let f = EncodedFrame { code: c, total: blocks * c.n };
    let zs = f.z(source)?;
    let xt = f.x(target)?;
    let (xa, za) = (f.x(ancilla)?, f.z(ancilla)?);
    let m = |op: PauliOperator, correction: PauliOperator| EncodedMeasurement { op, correction };
    Ok(vec![
        m(xt.multiply(&xa.inverse())?, za.inverse()),
        m(zs.multiply(&za)?, xt.multiply(&xa.inverse())?),
        m(xa.clone(), zs.multiply(&za)?),
        m(za, xa.inverse()),
    ])
}

/// Runs the encoded SUM protocol on any backend holding `blocks` code blocks.
/// Returns the four outcomes.
#[allow(clippy::too_many_arguments)]
pub fn run_logical_sum<B: Backend + ?Sized>(
    c: &StabilizerCode,
    backend: &mut B,
    blocks: usize,
    source: usize,
    target: usize,
    ancilla: usize,
    rng: &mut dyn RngCore,
    post_select: Option<&[u32]>,
) -> Result<Vec<u32>> {
    if backend.num_qudits() != blocks * c.n {
        return Err(Error::LengthMismatch(backend.num_qudits(), blocks * c.n));
    }
    let steps = logical_sum_measurements(c, blocks, source, target, ancilla)?;
    let mut outcomes = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let a = backend.measure(&step.op, rng, post_select.map(|p| p[i]))?;
        if a != 0 {
            backend.apply_pauli(&step.correction.power(a as i64))?;
        }
        outcomes.push(a);
    }
    Ok(outcomes)
}

/// Logical SUM from `source` to `target` through the encoded `ancilla`, on a
/// tableau. The ancilla must hold encoded zero and is returned to it.
pub fn logical_sum_between_blocks<R: Rng + ?Sized>(
    c: &StabilizerCode,
    t: &StabilizerTableau,
    source: usize,
    target: usize,
    ancilla: usize,
    rng: &mut R,
) -> Result<StabilizerTableau> {
    if c.n == 0 || !t.n().is_multiple_of(c.n) {
        return Err(Error::LengthMismatch(t.n(), c.n));
    }
    let blocks = t.n() / c.n;
    let steps = logical_sum_measurements(c, blocks, source, target, ancilla)?;
    let za = &steps[3].op;
    if t.deterministic_outcome(za)? != Some(0) {
        return Err(Error::Precondition("ancilla is not in encoded zero".into()));
    }
    let mut seed = [0u8; 32];
    rng.fill(&mut seed[..]);
    let mut inner: rand_chacha::ChaCha8Rng = rand::SeedableRng::from_seed(seed);
    let mut out = t.clone();
    run_logical_sum(c, &mut out, blocks, source, target, ancilla, &mut inner, None)?;
    Ok(out)
}

/// Tableau over `blocks` code blocks: the generators of every block, `Z̄` of
/// the listed zero logicals as stabilizers and the remaining logicals open.
pub fn blocks_tableau(c: &StabilizerCode, blocks: usize, zero_logicals: &[usize]) -> Result<StabilizerTableau> {
    let total = blocks * c.n;
    let f = EncodedFrame { code: c, total };
    let mut rows = Vec::new();
    for b in 0..blocks {
        let pos: Vec<usize> = (b * c.n..(b + 1) * c.n).collect();
        for g in &c.generators {
            rows.push(g.embed(total, &pos)?);
        }
    }
    let mut logicals = Vec::new();
    for i in 0..blocks * c.k {
        if zero_logicals.contains(&i) {
            rows.push(f.z(i)?);
        } else {
            logicals.push(LogicalPair { x: f.x(i)?, z: f.z(i)? });
        }
    }
    StabilizerTableau::new(c.dim, total, rows, logicals)
}

/// Encoded basis state over `blocks` blocks, logical `i` set to `values[i]`.
pub fn encoded_basis_blocks(c: &StabilizerCode, values: &[u32]) -> Result<StabilizerTableau> {
    if c.k == 0 || !values.len().is_multiple_of(c.k) {
        return Err(Error::LengthMismatch(values.len(), c.k));
    }
    let blocks = values.len() / c.k;
    let total = blocks * c.n;
    let f = EncodedFrame { code: c, total };
    let mut rows = Vec::new();
    for b in 0..blocks {
        let pos: Vec<usize> = (b * c.n..(b + 1) * c.n).collect();
        for g in &c.generators {
            rows.push(g.embed(total, &pos)?);
        }
    }
    for (i, &a) in values.iter().enumerate() {
        rows.push(f.z(i)?.with_phase_shift(-(a as i64)));
    }
    StabilizerTableau::new(c.dim, total, rows, Vec::new())
}

/// Parses the code file format:
///
/// ```text
/// code n=3 k=1 d=3
/// S: X X X
/// S: Z Z Z
/// LX0: X X2 I
/// LZ0: Z2 Z I
/// ```
pub fn parse_code(text: &str) -> Result<StabilizerCode> {
    let err = |line: usize, msg: String| Error::Parse(format!("line {line}: {msg}"));
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim())).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing 'code n=<n> k=<k> d=<d>' header".into()))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("code") {
        return Err(err(hline, "expected header 'code n=<n> k=<k> d=<d>'".into()));
    }
    let (mut n, mut k, mut d) = (None, None, None);
    for w in words {
        let (key, val) = w.split_once('=').ok_or_else(|| err(hline, format!("expected key=value, found '{w}'")))?;
        let v: u32 = val.parse().map_err(|_| err(hline, format!("'{val}' is not a number")))?;
        match key {
            "n" => n = Some(v as usize),
            "k" => k = Some(v as usize),
            "d" => d = Some(v),
            _ => return Err(err(hline, format!("unknown header key '{key}'"))),
        }
    }
    let (n, k, d) = match (n, k, d) {
        (Some(n), Some(k), Some(d)) => (n, k, d),
        _ => return Err(err(hline, "header needs n, k and d".into())),
    };
    let dim = Dimension::new(d).map_err(|e| err(hline, e.to_string()))?;
    if k > n {
        return Err(err(hline, format!("k={k} exceeds n={n}")));
    }
    let mut generators = Vec::new();
    let mut lx: Vec<Option<PauliOperator>> = vec![None; k];
    let mut lz: Vec<Option<PauliOperator>> = vec![None; k];
    for (ln, line) in lines {
        let (label, body) = line.split_once(':').ok_or_else(|| err(ln, format!("expected '<label>: <pauli>', found '{line}'")))?;
        let op = PauliOperator::parse(body, dim).map_err(|e| err(ln, e.to_string()))?;
        if op.n() != n {
            return Err(err(ln, format!("operator acts on {} qudits, expected {n}", op.n())));
        }
        let label = label.trim();
        let slot = |prefix: &str| -> Result<Option<usize>> {
            match label.strip_prefix(prefix) {
                None => Ok(None),
                Some(i) => {
                    let i: usize = i.parse().map_err(|_| err(ln, format!("bad logical index in '{label}'")))?;
                    if i >= k {
                        return Err(err(ln, format!("logical index {i} out of range for k={k}")));
                    }
                    Ok(Some(i))
                }
            }
        };
        if label == "S" {
            generators.push(op);
        } else if let Some(i) = slot("LX")? {
            if lx[i].replace(op).is_some() {
                return Err(err(ln, format!("duplicate {label}")));
            }
        } else if let Some(i) = slot("LZ")? {
            if lz[i].replace(op).is_some() {
                return Err(err(ln, format!("duplicate {label}")));
            }
        } else {
            return Err(err(ln, format!("unknown label '{label}', expected S, LX<i> or LZ<i>")));
        }
    }
    let collect = |v: Vec<Option<PauliOperator>>, p: &str| -> Result<Vec<PauliOperator>> {
        v.into_iter().enumerate().map(|(i, o)| o.ok_or_else(|| Error::Parse(format!("missing {p}{i}")))).collect()
    };
    let logical_x = collect(lx, "LX")?;
    let logical_z = collect(lz, "LZ")?;
    StabilizerCode::new(dim, n, k, generators, logical_x, logical_z)
}
