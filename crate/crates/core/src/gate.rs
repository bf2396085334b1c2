//! The gate set shared by the tableau engine and the dense oracle.

use crate::clifford::CliffordMap;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::zd::Dimension;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    /// Discrete Fourier transform `|j> -> sum_s omega^{js} |s> / sqrt(d)`.
    Fourier,
    /// `|j> -> omega^{j(j-1)/2} |j>`.
    PhaseGate,
    /// `|i>|j> -> |i>|i+j>`.
    Sum,
    /// `|i>|j> -> |i>|j-i>`.
    InvSum,
    /// `|j> -> |a j>` for `a` coprime to d.
    Scale(u32),
    X,
    Z,
    /// `|a>|b> -> omega^{ab} |a>|b>`.
    Phase2,
    /// `|a>|b>|c> -> |a>|b>|c+ab>`.
    Toffoli,
    /// `(X ⊗ I ⊗ I) SUM(2 -> 3)`.
    M1,
    /// `(I ⊗ X ⊗ I) SUM(1 -> 3)`.
    M2,
    /// `(I ⊗ I ⊗ Z) PHASE(1, 2)^{-1}`.
    M3,
}

impl Gate {
    pub fn arity(self) -> usize {
        match self {
            Gate::Fourier | Gate::PhaseGate | Gate::Scale(_) | Gate::X | Gate::Z => 1,
            Gate::Sum | Gate::InvSum | Gate::Phase2 => 2,
            Gate::Toffoli | Gate::M1 | Gate::M2 | Gate::M3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::Fourier => "r",
            Gate::PhaseGate => "p",
            Gate::Sum => "sum",
            Gate::InvSum => "invsum",
            Gate::Scale(_) => "scale",
            Gate::X => "x",
            Gate::Z => "z",
            Gate::Phase2 => "phase2",
            Gate::Toffoli => "toffoli",
            Gate::M1 => "m1",
            Gate::M2 => "m2",
            Gate::M3 => "m3",
        }
    }

    pub fn is_clifford(self) -> bool {
        self != Gate::Toffoli
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, Gate::PhaseGate | Gate::Z | Gate::Phase2 | Gate::M3)
    }

    pub fn validate(self, dim: Dimension) -> Result<()> {
        if let Gate::Scale(a) = self {
            if a % dim.d() == 0 {
                return Err(Error::NotInvertible(a, dim.d()));
            }
        }
        Ok(())
    }

    /// A gate and repetition count whose product is this gate's inverse.
    pub fn inverse(self, dim: Dimension) -> Result<(Gate, u32)> {
        let d = dim.d();
        Ok(match self {
            Gate::Scale(a) => (Gate::Scale(dim.inv(a)?), 1),
            Gate::Sum => (Gate::InvSum, 1),
            Gate::InvSum => (Gate::Sum, 1),
            Gate::Fourier => (Gate::Fourier, 3),
            Gate::M1 | Gate::M2 | Gate::M3 | Gate::Toffoli | Gate::X | Gate::Z | Gate::PhaseGate | Gate::Phase2 => (self, d - 1),
        })
    }

    /// Conjugation action on the gate's own qudits, with exact phases.
    pub fn clifford_map(self, dim: Dimension) -> Result<CliffordMap> {
        self.validate(dim)?;
        let n = self.arity();
        let p = |phase: i64, x: &[i64], z: &[i64]| PauliOperator::from_exponents(dim, phase, x, z).expect("sizes agree");
        let map = |xs: Vec<PauliOperator>, zs: Vec<PauliOperator>| CliffordMap::from_images_unchecked(dim, xs, zs);
        Ok(match self {
            Gate::X => map(vec![p(0, &[1], &[0])], vec![p(-1, &[0], &[1])]),
            Gate::Z => map(vec![p(1, &[1], &[0])], vec![p(0, &[0], &[1])]),
            Gate::Fourier => map(vec![p(0, &[0], &[1])], vec![p(0, &[-1], &[0])]),
            Gate::PhaseGate => map(vec![p(0, &[1], &[1])], vec![p(0, &[0], &[1])]),
            Gate::Scale(a) => {
                let b = dim.inv(a)? as i64;
                map(vec![p(0, &[a as i64], &[0])], vec![p(0, &[0], &[b])])
            }
            Gate::Sum => map(vec![p(0, &[1, 1], &[0, 0]), p(0, &[0, 1], &[0, 0])], vec![p(0, &[0, 0], &[1, 0]), p(0, &[0, 0], &[-1, 1])]),
            Gate::InvSum => {
                map(vec![p(0, &[1, -1], &[0, 0]), p(0, &[0, 1], &[0, 0])], vec![p(0, &[0, 0], &[1, 0]), p(0, &[0, 0], &[1, 1])])
            }
            Gate::Phase2 => map(vec![p(0, &[1, 0], &[0, 1]), p(0, &[0, 1], &[1, 0])], vec![p(0, &[0, 0], &[1, 0]), p(0, &[0, 0], &[0, 1])]),
            Gate::M1 => {
                let sum = Gate::Sum.clifford_map(dim)?.embed(n, &[1, 2])?;
                sum.then(&Gate::X.clifford_map(dim)?.embed(n, &[0])?)?
            }
            Gate::M2 => {
                let sum = Gate::Sum.clifford_map(dim)?.embed(n, &[0, 2])?;
                sum.then(&Gate::X.clifford_map(dim)?.embed(n, &[1])?)?
            }
            Gate::M3 => {
                let phase_inv = Gate::Phase2.clifford_map(dim)?.repeat(dim.d() as usize - 1).embed(n, &[0, 1])?;
                phase_inv.then(&Gate::Z.clifford_map(dim)?.embed(n, &[2])?)?
            }
            Gate::Toffoli => return Err(Error::NonClifford(self.to_string())),
        })
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gate)?;
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        for q in &self.qudits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Scale(a) => write!(f, "scale {a}"),
            g => f.write_str(g.name()),
        }
    }
}

/// A gate power applied to specific qudits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOp {
    pub gate: Gate,
    pub qudits: Vec<usize>,
    pub power: u32,
}

impl GateOp {
    pub fn new(gate: Gate, qudits: &[usize]) -> Self {
        GateOp { gate, qudits: qudits.to_vec(), power: 1 }
    }

    pub fn pow(gate: Gate, qudits: &[usize], power: u32) -> Self {
        GateOp { gate, qudits: qudits.to_vec(), power }
    }

    /// Conjugation action embedded in an `n`-qudit register.
    pub fn clifford_map(&self, dim: Dimension, n: usize) -> Result<CliffordMap> {
        self.check(n)?;
        self.gate.clifford_map(dim)?.repeat(self.power as usize).embed(n, &self.qudits)
    }

    /// The inverse as a gate power on the same qudits.
    pub fn inverse(&self, dim: Dimension) -> Result<GateOp> {
        let (g, k) = self.gate.inverse(dim)?;
        let order = match g {
            Gate::Fourier => 4,
            Gate::Scale(a) => {
                let mut o = 1;
                let mut x = a;
                while x != 1 {
                    x = dim.mul(x, a);
                    o += 1;
                }
                o
            }
            _ => dim.d(),
        };
        Ok(GateOp::pow(g, &self.qudits, (k * self.power) % order))
    }

    /// Checks arity, index range and distinctness.
    pub fn check(&self, n: usize) -> Result<()> {
        check_qudits(&self.gate, &self.qudits, n)
    }
}

pub(crate) fn check_qudits(gate: &Gate, qudits: &[usize], n: usize) -> Result<()> {
    if qudits.len() != gate.arity() {
        return Err(Error::Arity { gate: gate.to_string(), expected: gate.arity(), got: qudits.len() });
    }
    for (i, &q) in qudits.iter().enumerate() {
        if q >= n {
            return Err(Error::QuditOutOfRange { index: q, n });
        }
        if qudits[..i].contains(&q) {
            return Err(Error::QuditClash(q));
        }
    }
    Ok(())
}
