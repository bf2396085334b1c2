//! Stabilizer tableaux: generator rows plus logical X/Z pairs.
//!
//! A tableau on `n` qudits holds `m` commuting, independent stabilizer rows and
//! `k = n - m` logical pairs. With `k = 0` it describes a pure stabilizer state;
//! otherwise it describes a code subspace together with the frame of encoded
//! Pauli operators, which is what lets us read off the Clifford map a circuit of
//! gates and measurements induces on the encoded data.

use crate::clifford::CliffordMap;
use crate::error::{Error, Result};
use crate::gate::{check_qudits, Gate};
use crate::linalg::{reduce_rows, solve_combination};
use crate::pauli::PauliOperator;
use crate::zd::Dimension;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogicalPair {
    pub x: PauliOperator,
    pub z: PauliOperator,
}

/// How a fresh qudit starts out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    /// `|0>`, stabilized by Z.
    Zero,
    /// The +1 eigenstate of X.
    Plus,
    /// Unknown data: contributes a logical pair `(X, Z)`.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerTableau {
    dim: Dimension,
    n: usize,
    stabilizers: Vec<PauliOperator>,
    logicals: Vec<LogicalPair>,
}

/// Result of a projective measurement on a tableau.
#[derive(Clone, Debug)]
pub struct MeasureOutcome {
    /// Eigenvalue exponent: the measured operator had eigenvalue `omega^outcome`.
    pub outcome: u32,
    /// True when the outcome was fixed by the stabilizer.
    pub deterministic: bool,
    /// The Pauli `M^outcome` that maps the post-measurement state back onto the
    /// +1 eigenspace (`None` for deterministic outcomes).
    pub correction: Option<PauliOperator>,
    pub tableau: StabilizerTableau,
}

impl StabilizerTableau {
    pub fn new(dim: Dimension, n: usize, stabilizers: Vec<PauliOperator>, logicals: Vec<LogicalPair>) -> Result<Self> {
        let t = StabilizerTableau { dim, n, stabilizers, logicals };
        t.validate()?;
        Ok(t)
    }

    /// Per-qudit product initialization.
    pub fn from_kinds(dim: Dimension, kinds: &[InitKind]) -> Self {
        let n = kinds.len();
        let mut stabilizers = Vec::new();
        let mut logicals = Vec::new();
        for (q, kind) in kinds.iter().enumerate() {
            match kind {
                InitKind::Zero => stabilizers.push(PauliOperator::z_on(dim, n, q)),
                InitKind::Plus => stabilizers.push(PauliOperator::x_on(dim, n, q)),
                InitKind::Open => logicals.push(LogicalPair { x: PauliOperator::x_on(dim, n, q), z: PauliOperator::z_on(dim, n, q) }),
            }
        }
        StabilizerTableau { dim, n, stabilizers, logicals }
    }

    pub fn initial(n: usize, dim: Dimension, kind: InitKind) -> Self {
        Self::from_kinds(dim, &vec![kind; n])
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.stabilizers
    }

    pub fn logicals(&self) -> &[LogicalPair] {
        &self.logicals
    }

    pub fn is_pure(&self) -> bool {
        self.logicals.is_empty()
    }

    fn all_ops(&self) -> impl Iterator<Item = &PauliOperator> {
        self.stabilizers.iter().chain(self.logicals.iter().flat_map(|l| [&l.x, &l.z]))
    }

    fn all_ops_mut(&mut self) -> impl Iterator<Item = &mut PauliOperator> {
        self.stabilizers.iter_mut().chain(self.logicals.iter_mut().flat_map(|l| [&mut l.x, &mut l.z]))
    }

    /// Checks sizes, commutation relations and independence.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTableau(msg));
        if self.stabilizers.len() + self.logicals.len() != self.n {
            return bad(format!("{} stabilizers + {} logical pairs != {} qudits", self.stabilizers.len(), self.logicals.len(), self.n));
        }
        if let Some(p) = self.all_ops().find(|p| p.n() != self.n || p.dim() != self.dim) {
            return bad(format!("operator '{p}' does not act on {} qudits of dimension {}", self.n, self.dim));
        }
        for (i, a) in self.stabilizers.iter().enumerate() {
            for b in &self.stabilizers[i + 1..] {
                if !a.commutes_with(b) {
                    return bad(format!("stabilizers '{a}' and '{b}' do not commute"));
                }
            }
            for l in &self.logicals {
                if !a.commutes_with(&l.x) || !a.commutes_with(&l.z) {
                    return bad(format!("stabilizer '{a}' does not commute with a logical operator"));
                }
            }
        }
        let minus_one = self.dim.d() - 1;
        for (i, li) in self.logicals.iter().enumerate() {
            if li.x.comm_unchecked(&li.z) != minus_one {
                return bad(format!("logical pair {i} has the wrong commutation exponent"));
            }
            for lj in &self.logicals[i + 1..] {
                if [(&li.x, &lj.x), (&li.x, &lj.z), (&li.z, &lj.x), (&li.z, &lj.z)].iter().any(|(a, b)| !a.commutes_with(b)) {
                    return bad(format!("logical pair {i} does not commute with a later pair"));
                }
            }
        }
        let vectors: Vec<Vec<u32>> = self.all_ops().map(PauliOperator::symplectic).collect();
        let expected = self.stabilizers.len() + 2 * self.logicals.len();
        if crate::linalg::rank(&vectors, self.dim) != expected {
            return bad("rows are not independent".into());
        }
        Ok(())
    }

    #[inline]
    fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        if let Err(e) = self.validate() {
            panic!("tableau invariant broken: {e}\n{}", self.to_lines().join("\n"));
        }
    }

    /// Conjugates every row by a Clifford map on the whole register.
    pub fn conjugate_by_map(&self, map: &CliffordMap) -> Result<Self> {
        let mut t = self.clone();
        for p in t.all_ops_mut() {
            *p = map.apply(p)?;
        }
        t.debug_validate();
        Ok(t)
    }

    pub fn conjugate_by_gate(&self, gate: Gate, qudits: &[usize]) -> Result<Self> {
        check_qudits(&gate, qudits, self.n)?;
        let map = gate.clifford_map(self.dim)?.embed(self.n, qudits)?;
        self.conjugate_by_map(&map)
    }

    /// Applies the Pauli unitary `p`: every row `N` becomes `p N p†`.
    pub fn apply_pauli(&self, p: &PauliOperator) -> Result<Self> {
        let mut t = self.clone();
        for row in t.all_ops_mut() {
            let c = p.commutation_exponent(row)?;
            *row = row.with_phase_shift(c as i64);
        }
        Ok(t)
    }

    /// Eigenvalue exponent of `op` if the state is an eigenstate of it.
    pub fn deterministic_outcome(&self, op: &PauliOperator) -> Result<Option<u32>> {
        self.check_operator(op)?;
        if self.all_ops().any(|r| !r.commutes_with(op)) {
            return Ok(None);
        }
        self.group_phase(op).map(Some)
    }

    /// For `op` in the stabilizer group up to phase, the exponent `e` with `op |psi> = omega^e |psi>`.
    fn group_phase(&self, op: &PauliOperator) -> Result<u32> {
        let rows: Vec<Vec<u32>> = self.stabilizers.iter().map(PauliOperator::symplectic).collect();
        let coeffs = solve_combination(&rows, &op.symplectic(), self.dim).ok_or(Error::NotInGroup)?;
        let mut product = PauliOperator::identity(self.dim, self.n);
        for (row, &c) in self.stabilizers.iter().zip(&coeffs) {
            if c != 0 {
                product = product.mul_unchecked(&row.power(c as i64));
            }
        }
        debug_assert_eq!(product.symplectic(), op.symplectic());
        // product acts as +1, so op = omega^{op.phase - product.phase} * product.
        Ok(self.dim.sub(op.phase(), product.phase()))
    }

    fn check_operator(&self, op: &PauliOperator) -> Result<()> {
        if op.dim() != self.dim {
            return Err(Error::DimensionMismatch(op.dim().d(), self.dim.d()));
        }
        if op.n() != self.n {
            return Err(Error::LengthMismatch(op.n(), self.n));
        }
        Ok(())
    }

    /// Projective measurement of `op` without correction. The post-measurement
    /// state is stabilized by `omega^{-outcome} op`.
    pub fn project_pauli<R: Rng + ?Sized>(&self, op: &PauliOperator, rng: &mut R, post_select: Option<u32>) -> Result<MeasureOutcome> {
        self.check_operator(op)?;
        let d = self.dim.d();
        if let Some(a) = post_select {
            if a >= d {
                return Err(Error::OutcomeOutOfRange { outcome: a, d });
            }
        }
        let stab_hit = self.stabilizers.iter().position(|r| !r.commutes_with(op));
        let logical_hit =
            if stab_hit.is_none() { self.logicals.iter().position(|l| !l.x.commutes_with(op) || !l.z.commutes_with(op)) } else { None };

        let (anchor, mut t) = match (stab_hit, logical_hit) {
            (None, None) => {
                let outcome = self.group_phase(op)?;
                if let Some(a) = post_select {
                    if a != outcome {
                        return Err(Error::ZeroProbability(a));
                    }
                }
                return Ok(MeasureOutcome { outcome, deterministic: true, correction: None, tableau: self.clone() });
            }
            (Some(i), _) => {
                let mut t = self.clone();
                let anchor = t.stabilizers.remove(i);
                (anchor, t)
            }
            (None, Some(j)) => {
                // A commutes with the stabilizer but not with logical pair j: the pair is consumed.
                let mut t = self.clone();
                let pair = t.logicals.remove(j);
                let anchor = if !pair.x.commutes_with(op) { pair.x } else { pair.z };
                (anchor, t)
            }
        };

        // Normalize so that anchor · op = omega · op · anchor.
        let c0 = anchor.comm_unchecked(op);
        let anchor = anchor.power(self.dim.inv(c0)? as i64);
        for row in t.all_ops_mut() {
            let c = row.comm_unchecked(op);
            if c != 0 {
                *row = row.mul_unchecked(&anchor.power(-(c as i64)));
            }
        }
        let outcome = match post_select {
            Some(a) => a,
            None => rng.gen_range(0..d),
        };
        t.stabilizers.push(op.with_phase_shift(-(outcome as i64)));
        t.debug_validate();
        Ok(MeasureOutcome { outcome, deterministic: false, correction: Some(anchor.power(outcome as i64)), tableau: t })
    }

    /// Measures `op` and applies the correction `M^outcome`, leaving the +1
    /// eigenstate of `op`.
    pub fn measure_pauli<R: Rng + ?Sized>(&self, op: &PauliOperator, rng: &mut R, post_select: Option<u32>) -> Result<MeasureOutcome> {
        let mut m = self.project_pauli(op, rng, post_select)?;
        if let Some(corr) = &m.correction {
            m.tableau = m.tableau.apply_pauli(corr)?;
        }
        Ok(m)
    }

    /// Reduced row-echelon stabilizer rows (x columns before z columns), with
    /// logical operators reduced against the pivots.
    pub fn canonicalize(&self) -> Result<Self> {
        let cols: Vec<usize> = (0..2 * self.n).collect();
        self.reduce_with_columns(&cols)
    }

    fn reduce_with_columns(&self, cols: &[usize]) -> Result<Self> {
        let mut t = self.clone();
        let pivots = reduce_rows(&mut t.stabilizers, cols, self.dim);
        if pivots.len() != t.stabilizers.len() {
            return Err(Error::InvalidTableau("stabilizer rows are rank deficient".into()));
        }
        let stabs = t.stabilizers.clone();
        for l in t.logicals.iter_mut().flat_map(|l| [&mut l.x, &mut l.z]) {
            for (row, &col) in stabs.iter().zip(&pivots) {
                let e = crate::linalg::EliminationRow::entry(l, col);
                if e != 0 {
                    *l = l.mul_unchecked(&row.power(-(e as i64)));
                }
            }
        }
        Ok(t)
    }

    /// Removes qudit `q`, which must be in a product state with everything else
    /// and carry no logical information.
    pub fn discard_qudit(&self, q: usize) -> Result<Self> {
        if q >= self.n {
            return Err(Error::QuditOutOfRange { index: q, n: self.n });
        }
        let n = self.n;
        let mut cols: Vec<usize> = (0..n).filter(|&i| i != q).flat_map(|i| [i, n + i]).collect();
        cols.extend([q, n + q]);
        let mut stabs = self.stabilizers.clone();
        let pivots = reduce_rows(&mut stabs, &cols, self.dim);
        if pivots.len() != stabs.len() {
            return Err(Error::InvalidTableau("stabilizer rows are rank deficient".into()));
        }
        let local =
            stabs.iter().zip(&pivots).position(|(r, _)| r.support().all(|i| i == q) && r.weight() == 1).ok_or(Error::StillEntangled(q))?;
        let local_row = stabs.remove(local);
        let pivot = pivots[local];
        let mut logicals = self.logicals.clone();
        for op in stabs.iter_mut().chain(logicals.iter_mut().flat_map(|l| [&mut l.x, &mut l.z])) {
            let e = crate::linalg::EliminationRow::entry(op, pivot);
            if e != 0 {
                *op = op.mul_unchecked(&local_row.power(-(e as i64)));
            }
            if op.local(q) != (0, 0) {
                return Err(Error::StillEntangled(q));
            }
        }
        let t = StabilizerTableau {
            dim: self.dim,
            n: n - 1,
            stabilizers: stabs.iter().map(|p| p.remove_qudit(q)).collect(),
            logicals: logicals.iter().map(|l| LogicalPair { x: l.x.remove_qudit(q), z: l.z.remove_qudit(q) }).collect(),
        };
        t.debug_validate();
        Ok(t)
    }

    /// Appends a fresh qudit at the end of the register.
    pub fn append_qudit(&self, kind: InitKind) -> Self {
        let n = self.n + 1;
        let widen = |p: &PauliOperator| p.insert_qudit(self.n);
        let mut t = StabilizerTableau {
            dim: self.dim,
            n,
            stabilizers: self.stabilizers.iter().map(widen).collect(),
            logicals: self.logicals.iter().map(|l| LogicalPair { x: widen(&l.x), z: widen(&l.z) }).collect(),
        };
        match kind {
            InitKind::Zero => t.stabilizers.push(PauliOperator::z_on(self.dim, n, self.n)),
            InitKind::Plus => t.stabilizers.push(PauliOperator::x_on(self.dim, n, self.n)),
            InitKind::Open => {
                t.logicals.push(LogicalPair { x: PauliOperator::x_on(self.dim, n, self.n), z: PauliOperator::z_on(self.dim, n, self.n) })
            }
        }
        t
    }

    /// Reorders qudits: new qudit `i` is old qudit `perm[i]`.
    pub fn permute_qudits(&self, perm: &[usize]) -> Self {
        let mut t = self.clone();
        for p in t.all_ops_mut() {
            *p = p.permute(perm);
        }
        t
    }

    /// True when both tableaux stabilize the same group with the same phases.
    pub fn same_stabilizer_group(&self, other: &Self) -> bool {
        self.n == other.n
            && self.stabilizers.len() == other.stabilizers.len()
            && other.stabilizers.iter().all(|r| self.stabilizers.iter().all(|s| s.commutes_with(r)) && matches!(self.group_phase(r), Ok(0)))
    }

    /// The map on logical qudits taking `before`'s frame to `after`'s.
    ///
    /// Both tableaux must have the same qudit count, logical count and stabilizer
    /// group; logical pair `i` of `before` is logical qudit `i` of the result.
    pub fn extract_clifford_map(before: &Self, after: &Self) -> Result<CliffordMap> {
        if before.dim != after.dim {
            return Err(Error::DimensionMismatch(before.dim.d(), after.dim.d()));
        }
        if before.n != after.n {
            return Err(Error::LengthMismatch(before.n, after.n));
        }
        let k = before.logicals.len();
        if after.logicals.len() != k {
            return Err(Error::Precondition(format!("logical counts differ: {k} vs {}", after.logicals.len())));
        }
        if !before.same_stabilizer_group(after) {
            return Err(Error::Precondition("stabilizer groups differ".into()));
        }
        let dim = before.dim;
        let coords = |op: &PauliOperator| -> Result<PauliOperator> {
            let mut xs = vec![0i64; k];
            let mut zs = vec![0i64; k];
            let mut frame = PauliOperator::identity(dim, before.n);
            for (j, l) in before.logicals.iter().enumerate() {
                // [X_j, Z_j] = -1 gives op's X_j power from [op, Z_j] and its Z_j power from [op, X_j].
                let a = dim.neg(op.comm_unchecked(&l.z));
                let b = op.comm_unchecked(&l.x);
                xs[j] = a as i64;
                zs[j] = b as i64;
                frame = frame.mul_unchecked(&l.x.power(a as i64)).mul_unchecked(&l.z.power(b as i64));
            }
            let residual = op.mul_unchecked(&frame.inverse());
            if before.stabilizers.iter().any(|s| !s.commutes_with(&residual)) {
                return Err(Error::Precondition(format!("'{op}' does not preserve the code space")));
            }
            let phase = before.group_phase(&residual)?;
            PauliOperator::from_exponents(dim, phase as i64, &xs, &zs)
        };
        let x_images = after.logicals.iter().map(|l| coords(&l.x)).collect::<Result<Vec<_>>>()?;
        let z_images = after.logicals.iter().map(|l| coords(&l.z)).collect::<Result<Vec<_>>>()?;
        CliffordMap::new(dim, x_images, z_images)
    }

    /// One Pauli string per line: stabilizers first, then `X̄_i`/`Z̄_i` pairs.
    pub fn to_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.stabilizers.iter().map(|s| format!("S: {s}")).collect();
        for (i, l) in self.logicals.iter().enumerate() {
            out.push(format!("LX{i}: {}", l.x));
            out.push(format!("LZ{i}: {}", l.z));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse(s, d3()).unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    fn gadget_start() -> StabilizerTableau {
        StabilizerTableau::from_kinds(d3(), &[InitKind::Open, InitKind::Zero])
    }

    #[test]
    fn open_plus_zero_setup() {
        let t = gadget_start();
        assert_eq!(t.stabilizers(), &[p("I Z")]);
        assert_eq!(t.logicals()[0].x, p("X I"));
        assert_eq!(t.logicals()[0].z, p("Z I"));
        assert_eq!(StabilizerTableau::initial(1, d3(), InitKind::Zero).stabilizers(), &[p("Z")]);
    }

    #[test]
    fn sum_conjugation_images() {
        let t = gadget_start().conjugate_by_gate(Gate::Sum, &[0, 1]).unwrap();
        assert_eq!(t.stabilizers(), &[p("Z2 Z")]);
        assert_eq!(t.logicals()[0].x, p("X X"));
        assert_eq!(t.logicals()[0].z, p("Z I"));
        let r = StabilizerTableau::initial(1, d3(), InitKind::Zero).conjugate_by_gate(Gate::Fourier, &[0]).unwrap();
        assert_eq!(r.stabilizers(), &[p("X2")]);
    }

    #[test]
    fn p_inverse_gadget_measurement_frame() {
        let t = gadget_start().conjugate_by_gate(Gate::Sum, &[0, 1]).unwrap();
        let m = t.measure_pauli(&p("I XZ"), &mut rng(), Some(2)).unwrap();
        assert!(!m.deterministic);
        assert_eq!(m.tableau.stabilizers(), &[p("I XZ")]);
        assert_eq!(m.tableau.logicals()[0].x, p("XZ2 XZ"));
        assert_eq!(m.tableau.logicals()[0].z, p("Z I"));
        // The correction is a power of Z^{-1} ⊗ Z.
        assert_eq!(m.correction.unwrap(), p("Z2 Z").power(2));

        let out = m.tableau.discard_qudit(1).unwrap();
        assert_eq!(out.n(), 1);
        assert_eq!(out.logicals()[0].x, p("XZ2"));
        assert_eq!(out.logicals()[0].z, p("Z"));
        let map = StabilizerTableau::extract_clifford_map(&StabilizerTableau::initial(1, d3(), InitKind::Open), &out).unwrap();
        assert_eq!(map.x_image(0), &p("XZ2"));
        assert_eq!(map.z_image(0), &p("Z"));
    }

    #[test]
    fn zero_state_measures_z_deterministically() {
        let t = StabilizerTableau::initial(1, d3(), InitKind::Zero);
        let m = t.measure_pauli(&p("Z"), &mut rng(), None).unwrap();
        assert_eq!(m.outcome, 0);
        assert!(m.deterministic);
        assert_eq!(m.tableau, t);
        assert!(matches!(t.measure_pauli(&p("Z"), &mut rng(), Some(1)), Err(Error::ZeroProbability(1))));
        assert!(matches!(t.measure_pauli(&p("Z"), &mut rng(), Some(3)), Err(Error::OutcomeOutOfRange { .. })));
        let m = t.measure_pauli(&p("w1 Z2"), &mut rng(), None).unwrap();
        assert_eq!(m.outcome, 1);
    }

    #[test]
    fn post_selected_projection_repeats() {
        let t = StabilizerTableau::initial(2, d3(), InitKind::Zero).conjugate_by_gate(Gate::Fourier, &[0]).unwrap();
        let op = p("XZ Z2");
        let m = t.project_pauli(&op, &mut rng(), Some(2)).unwrap();
        let again = m.tableau.project_pauli(&op, &mut rng(), None).unwrap();
        assert!(again.deterministic);
        assert_eq!(again.outcome, 2);
        let corrected = t.measure_pauli(&op, &mut rng(), Some(2)).unwrap();
        assert_eq!(corrected.tableau.deterministic_outcome(&op).unwrap(), Some(0));
    }

    #[test]
    fn consuming_a_logical() {
        let t = StabilizerTableau::initial(2, d3(), InitKind::Open);
        let m = t.measure_pauli(&p("X Z"), &mut rng(), None).unwrap();
        assert_eq!(m.tableau.logicals().len(), 1);
        assert_eq!(m.tableau.stabilizers(), &[p("X Z")]);
    }

    #[test]
    fn canonical_rows() {
        let t = StabilizerTableau::new(d3(), 2, vec![p("Z Z2"), p("Z I")], vec![]).unwrap();
        let c = t.canonicalize().unwrap();
        assert_eq!(c.stabilizers(), &[p("Z I"), p("I Z")]);
        assert!(c.same_stabilizer_group(&t) && t.same_stabilizer_group(&c));
        assert_eq!(c.canonicalize().unwrap(), c);
    }

    #[test]
    fn discard_requires_product() {
        let t = StabilizerTableau::new(d3(), 2, vec![p("Z I"), p("I X")], vec![]).unwrap();
        let out = t.discard_qudit(1).unwrap();
        assert_eq!(out.stabilizers(), &[p("Z")]);
        let bell = StabilizerTableau::new(d3(), 2, vec![p("X X"), p("Z Z2")], vec![]).unwrap();
        assert!(matches!(bell.discard_qudit(0), Err(Error::StillEntangled(0))));
    }

    #[test]
    fn validation_catches_bad_rows() {
        assert!(StabilizerTableau::new(d3(), 1, vec![p("X")], vec![]).is_ok());
        assert!(StabilizerTableau::new(d3(), 2, vec![p("X I"), p("Z I")], vec![]).is_err());
        assert!(StabilizerTableau::new(d3(), 2, vec![p("X I"), p("X2 I")], vec![]).is_err());
        assert!(StabilizerTableau::new(d3(), 1, vec![], vec![LogicalPair { x: p("Z"), z: p("X") }]).is_err());
    }

    #[test]
    fn identity_circuit_map() {
        let t = StabilizerTableau::initial(2, d3(), InitKind::Open);
        let map = StabilizerTableau::extract_clifford_map(&t, &t).unwrap();
        assert_eq!(map, CliffordMap::identity(d3(), 2));
    }
}
