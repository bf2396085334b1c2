//! One execution interface over the tableau engine and the dense oracle.

use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::PauliOperator;
use crate::scalar::Real;
use crate::tableau::{InitKind, StabilizerTableau};
use crate::zd::Dimension;
use rand::RngCore;

pub trait Backend {
    fn dim(&self) -> Dimension;
    fn num_qudits(&self) -> usize;
    /// Appends a fresh qudit at the end of the register.
    fn prepare(&mut self, kind: InitKind) -> Result<()>;
    fn apply_gate(&mut self, gate: Gate, qudits: &[usize]) -> Result<()>;
    fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()>;
    /// Projective measurement, no correction: afterwards the register is an
    /// `omega^outcome` eigenstate of `op`.
    fn measure(&mut self, op: &PauliOperator, rng: &mut dyn RngCore, post_select: Option<u32>) -> Result<u32>;
    fn discard(&mut self, q: usize) -> Result<()>;
    /// New qudit `i` is old qudit `perm[i]`.
    fn permute(&mut self, perm: &[usize]) -> Result<()>;
}

impl Backend for StabilizerTableau {
    fn dim(&self) -> Dimension {
        StabilizerTableau::dim(self)
    }

    fn num_qudits(&self) -> usize {
        self.n()
    }

    fn prepare(&mut self, kind: InitKind) -> Result<()> {
        *self = self.append_qudit(kind);
        Ok(())
    }

    fn apply_gate(&mut self, gate: Gate, qudits: &[usize]) -> Result<()> {
        *self = self.conjugate_by_gate(gate, qudits)?;
        Ok(())
    }

    fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        *self = StabilizerTableau::apply_pauli(self, p)?;
        Ok(())
    }

    fn measure(&mut self, op: &PauliOperator, rng: &mut dyn RngCore, post_select: Option<u32>) -> Result<u32> {
        let m = self.project_pauli(op, rng, post_select)?;
        *self = m.tableau;
        Ok(m.outcome)
    }

    fn discard(&mut self, q: usize) -> Result<()> {
        *self = self.discard_qudit(q)?;
        Ok(())
    }

    fn permute(&mut self, perm: &[usize]) -> Result<()> {
        *self = self.permute_qudits(perm);
        Ok(())
    }
}

impl<T: Real> Backend for DenseState<T> {
    fn dim(&self) -> Dimension {
        DenseState::dim(self)
    }

    fn num_qudits(&self) -> usize {
        self.n()
    }

    fn prepare(&mut self, kind: InitKind) -> Result<()> {
        let mut fresh = DenseState::zero(self.dim(), 1)?;
        match kind {
            InitKind::Zero => {}
            InitKind::Plus => fresh.apply_gate(Gate::Fourier, &[0])?,
            InitKind::Open => return Err(Error::Precondition("the dense backend cannot hold open logical qudits".into())),
        }
        *self = self.tensor(&fresh)?;
        Ok(())
    }

    fn apply_gate(&mut self, gate: Gate, qudits: &[usize]) -> Result<()> {
        DenseState::apply_gate(self, gate, qudits)
    }

    fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        DenseState::apply_pauli(self, p)
    }

    fn measure(&mut self, op: &PauliOperator, rng: &mut dyn RngCore, post_select: Option<u32>) -> Result<u32> {
        let (outcome, post) = self.measure_pauli(op, rng, post_select)?;
        *self = post;
        Ok(outcome)
    }

    fn discard(&mut self, q: usize) -> Result<()> {
        *self = DenseState::discard(self, q)?;
        Ok(())
    }

    fn permute(&mut self, perm: &[usize]) -> Result<()> {
        *self = self.permute_qudits(perm)?;
        Ok(())
    }
}
