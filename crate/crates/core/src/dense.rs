//! Brute-force state-vector oracle.
//!
//! Amplitudes are indexed by base-d digits with qudit 0 as the most significant
//! digit. Everything here is deliberately direct: gates are applied as explicit
//! matrices or basis permutations and measurements through explicit projectors.

use crate::clifford::CliffordMap;
use crate::error::{Error, Result};
use crate::gate::{check_qudits, Gate};
use crate::linalg::reduce_rows;
use crate::pauli::{from_digits, to_digits, PauliOperator};
use crate::scalar::Real;
use crate::tableau::StabilizerTableau;
use crate::zd::Dimension;
use ndarray::Array2;
use num_complex::Complex;
use rand::Rng;

pub type CMatrix<T> = Array2<Complex<T>>;

/// Default cap on the number of amplitudes, `2^21`.
pub const DEFAULT_AMPLITUDE_CAP: usize = 1 << 21;

/// Environment variable overriding [`DEFAULT_AMPLITUDE_CAP`].
pub const AMPLITUDE_CAP_ENV: &str = "QUDIT_DENSE_CAP";

pub fn amplitude_cap() -> usize {
    std::env::var(AMPLITUDE_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_AMPLITUDE_CAP)
}

fn checked_size(dim: Dimension, n: usize) -> Result<usize> {
    let cap = amplitude_cap();
    dim.size(n).filter(|&s| s <= cap).ok_or(Error::TooLarge { d: dim.d(), n, cap })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState<T: Real> {
    dim: Dimension,
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> DenseState<T> {
    /// `|0...0>` on `n` qudits.
    pub fn zero(dim: Dimension, n: usize) -> Result<Self> {
        Self::basis(dim, &vec![0; n])
    }

    pub fn basis(dim: Dimension, digits: &[u32]) -> Result<Self> {
        let size = checked_size(dim, digits.len())?;
        let mut amps = vec![Complex::default(); size];
        let digits: Vec<u32> = digits.iter().map(|&v| v % dim.d()).collect();
        amps[from_digits(&digits, dim)] = Complex::new(T::one(), T::zero());
        Ok(DenseState { dim, n: digits.len(), amps })
    }

    /// Wraps and normalizes an amplitude vector of length `d^n`.
    pub fn from_amplitudes(dim: Dimension, n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        let size = checked_size(dim, n)?;
        if amps.len() != size {
            return Err(Error::LengthMismatch(amps.len(), size));
        }
        let mut s = DenseState { dim, n, amps };
        s.normalize()?;
        Ok(s)
    }

    /// A random normalized state.
    pub fn random<R: Rng + ?Sized>(dim: Dimension, n: usize, rng: &mut R) -> Result<Self> {
        let size = checked_size(dim, n)?;
        let amps = (0..size)
            .map(|_| {
                let re: f64 = rng.gen_range(-1.0..1.0);
                let im: f64 = rng.gen_range(-1.0..1.0);
                Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im))
            })
            .collect();
        Self::from_amplitudes(dim, n, amps)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt()
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm <= T::epsilon() {
            return Err(Error::Precondition("cannot normalize the zero vector".into()));
        }
        for a in &mut self.amps {
            *a = *a / norm;
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps.iter().zip(&other.amps).fold(Complex::default(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim.d(), other.dim.d()));
        }
        checked_size(self.dim, self.n + other.n)?;
        let amps = self.amps.iter().flat_map(|a| other.amps.iter().map(move |b| a * b)).collect();
        Ok(DenseState { dim: self.dim, n: self.n + other.n, amps })
    }

    /// Whether `other = phase * self` within `tol`; returns the phase.
    pub fn equal_up_to_global_phase(&self, other: &Self, tol: T) -> (bool, Complex<T>) {
        if self.n != other.n || self.dim != other.dim {
            return (false, Complex::new(T::one(), T::zero()));
        }
        let overlap = self.inner(other);
        let phase = if overlap.norm() > T::epsilon() { overlap / overlap.norm() } else { Complex::new(T::one(), T::zero()) };
        let diff = self.amps.iter().zip(&other.amps).fold(T::zero(), |acc, (a, b)| acc + (b - a * phase).norm_sqr()).sqrt();
        (diff < tol, phase)
    }

    fn stride(&self, q: usize) -> usize {
        (self.dim.d() as usize).pow((self.n - 1 - q) as u32)
    }

    /// Applies a `d^k × d^k` unitary to `qudits` (first listed = most significant).
    pub fn apply_matrix(&mut self, u: &CMatrix<T>, qudits: &[usize]) -> Result<()> {
        let k = qudits.len();
        let local = self.dim.size(k).expect("small");
        if u.dim() != (local, local) {
            return Err(Error::LengthMismatch(u.nrows(), local));
        }
        self.check_targets(qudits)?;
        let d = self.dim.d() as usize;
        let strides: Vec<usize> = qudits.iter().map(|&q| self.stride(q)).collect();
        let mut digits = vec![0u32; k];
        let offsets: Vec<usize> = (0..local)
            .map(|l| {
                to_digits(l, self.dim, &mut digits);
                digits.iter().zip(&strides).map(|(&v, &s)| v as usize * s).sum()
            })
            .collect();
        let mut buf = vec![Complex::default(); local];
        for base in 0..self.amps.len() {
            if strides.iter().any(|&s| (base / s) % d != 0) {
                continue;
            }
            for (b, &o) in buf.iter_mut().zip(&offsets) {
                *b = self.amps[base + o];
            }
            for (row, &o) in offsets.iter().enumerate() {
                let mut acc = Complex::default();
                for (col, b) in buf.iter().enumerate() {
                    acc = acc + u[[row, col]] * b;
                }
                self.amps[base + o] = acc;
            }
        }
        Ok(())
    }

    fn check_targets(&self, qudits: &[usize]) -> Result<()> {
        for (i, &q) in qudits.iter().enumerate() {
            if q >= self.n {
                return Err(Error::QuditOutOfRange { index: q, n: self.n });
            }
            if qudits[..i].contains(&q) {
                return Err(Error::QuditClash(q));
            }
        }
        Ok(())
    }

    /// Applies a map of basis kets `|j> -> omega^phase |j'>` given on the digits of `qudits`.
    fn apply_basis_map(&mut self, qudits: &[usize], f: impl Fn(&mut [u32]) -> u32) {
        let roots: Vec<Complex<T>> = (0..self.dim.d()).map(|k| self.dim.root(k as i64)).collect();
        let mut out = vec![Complex::default(); self.amps.len()];
        let mut digits = vec![0u32; self.n];
        let mut local = vec![0u32; qudits.len()];
        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == T::zero() {
                continue;
            }
            to_digits(idx, self.dim, &mut digits);
            for (l, &q) in local.iter_mut().zip(qudits) {
                *l = digits[q];
            }
            let ph = f(&mut local);
            for (&l, &q) in local.iter().zip(qudits) {
                digits[q] = l;
            }
            out[from_digits(&digits, self.dim)] = *a * roots[ph as usize];
        }
        self.amps = out;
    }

    pub fn apply_gate(&mut self, gate: Gate, qudits: &[usize]) -> Result<()> {
        gate.validate(self.dim)?;
        check_qudits(&gate, qudits, self.n)?;
        if gate == Gate::Fourier {
            return self.apply_matrix(&gate_matrix(gate, self.dim)?, qudits);
        }
        let dim = self.dim;
        self.apply_basis_map(qudits, |v| basis_action(gate, dim, v).expect("permutation gate"));
        Ok(())
    }

    /// Applies `U^j` where `j` is the value of the `control` qudit and `U` is a
    /// diagonal gate on `qudits`.
    pub fn apply_controlled_diagonal(&mut self, control: usize, gate: Gate, power: i64, qudits: &[usize]) -> Result<()> {
        check_qudits(&gate, qudits, self.n)?;
        self.check_targets(&[control])?;
        if qudits.contains(&control) {
            return Err(Error::QuditClash(control));
        }
        let exps = diagonal_exponents(gate, self.dim)?;
        let dim = self.dim;
        let mut all = vec![control];
        all.extend_from_slice(qudits);
        self.apply_basis_map(&all, |v| {
            let local = from_digits(&v[1..], dim);
            dim.mul(dim.reduce(power * v[0] as i64), exps[local])
        });
        Ok(())
    }

    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch(p.n(), self.n));
        }
        let all: Vec<usize> = (0..self.n).collect();
        self.apply_basis_map(&all, |v| p.act_on_digits(v));
        Ok(())
    }

    /// `P_a |psi>` for each outcome `a`, unnormalized.
    fn projections(&self, op: &PauliOperator) -> Result<Vec<Vec<Complex<T>>>> {
        if op.n() != self.n {
            return Err(Error::LengthMismatch(op.n(), self.n));
        }
        let d = self.dim.d();
        let inv_d = T::one() / T::from_u32(d).unwrap();
        // powers[j] = A^j |psi>
        let mut powers = vec![self.amps.clone()];
        let mut cur = self.clone();
        for _ in 1..d {
            cur.apply_pauli(op)?;
            powers.push(cur.amps.clone());
        }
        Ok((0..d)
            .map(|a| {
                let mut v = vec![Complex::default(); self.amps.len()];
                for (j, pw) in powers.iter().enumerate() {
                    let w = self.dim.root::<T>(-((j as i64) * a as i64)) * inv_d;
                    for (x, y) in v.iter_mut().zip(pw) {
                        *x = *x + w * y;
                    }
                }
                v
            })
            .collect())
    }

    /// Outcome probabilities for measuring `op`.
    pub fn probabilities(&self, op: &PauliOperator) -> Result<Vec<T>> {
        Ok(self.projections(op)?.iter().map(|v| v.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())).collect())
    }

    /// Projective measurement of a Pauli operator; the post-state is renormalized
    /// and is an `omega^outcome` eigenstate of `op`.
    pub fn measure_pauli<R: Rng + ?Sized>(&self, op: &PauliOperator, rng: &mut R, post_select: Option<u32>) -> Result<(u32, Self)> {
        let proj = self.projections(op)?;
        let probs: Vec<T> = proj.iter().map(|v| v.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())).collect();
        let outcome = self.choose_outcome(&probs, rng, post_select)?;
        let mut s = DenseState { dim: self.dim, n: self.n, amps: proj[outcome as usize].clone() };
        s.normalize()?;
        Ok((outcome, s))
    }

    fn choose_outcome<R: Rng + ?Sized>(&self, probs: &[T], rng: &mut R, post_select: Option<u32>) -> Result<u32> {
        let d = self.dim.d();
        let floor = T::from_f64_lossy(1e-12);
        match post_select {
            Some(a) if a >= d => Err(Error::OutcomeOutOfRange { outcome: a, d }),
            Some(a) if probs[a as usize] < floor => Err(Error::ZeroProbability(a)),
            Some(a) => Ok(a),
            None => {
                let r = T::from_f64_lossy(rng.gen::<f64>());
                let mut acc = T::zero();
                for (a, &p) in probs.iter().enumerate() {
                    acc = acc + p;
                    if r < acc && p >= floor {
                        return Ok(a as u32);
                    }
                }
                // Rounding left r above the cumulative total; take the last likely outcome.
                Ok(probs.iter().rposition(|&p| p >= floor).unwrap_or(0) as u32)
            }
        }
    }

    /// Measures the eigenvalue of a diagonal gate whose entries are d-th roots of unity.
    pub fn measure_diagonal<R: Rng + ?Sized>(
        &self,
        gate: Gate,
        qudits: &[usize],
        rng: &mut R,
        post_select: Option<u32>,
    ) -> Result<(u32, Self)> {
        check_qudits(&gate, qudits, self.n)?;
        let exps = diagonal_exponents(gate, self.dim)?;
        let mut digits = vec![0u32; self.n];
        let mut local = vec![0u32; qudits.len()];
        let eig: Vec<u32> = (0..self.amps.len())
            .map(|idx| {
                to_digits(idx, self.dim, &mut digits);
                for (l, &q) in local.iter_mut().zip(qudits) {
                    *l = digits[q];
                }
                exps[from_digits(&local, self.dim)]
            })
            .collect();
        let mut probs = vec![T::zero(); self.dim.d() as usize];
        for (a, &e) in self.amps.iter().zip(&eig) {
            probs[e as usize] = probs[e as usize] + a.norm_sqr();
        }
        let outcome = self.choose_outcome(&probs, rng, post_select)?;
        let amps = self.amps.iter().zip(&eig).map(|(a, &e)| if e == outcome { *a } else { Complex::default() }).collect();
        let mut s = DenseState { dim: self.dim, n: self.n, amps };
        s.normalize()?;
        Ok((outcome, s))
    }

    /// Removes qudit `q` if the state factors as `phi_q ⊗ chi`; returns `chi`.
    pub fn discard(&self, q: usize) -> Result<Self> {
        self.check_targets(&[q])?;
        let tol = T::from_f64_lossy(1e-8);
        let d = self.dim.d() as usize;
        let rest_size = self.amps.len() / d;
        let stride = self.stride(q);
        // Row j holds the amplitudes with qudit q fixed to j.
        let row = |j: usize| -> Vec<Complex<T>> {
            (0..rest_size)
                .map(|r| {
                    let hi = r / stride;
                    let lo = r % stride;
                    self.amps[hi * stride * d + j * stride + lo]
                })
                .collect()
        };
        let rows: Vec<Vec<Complex<T>>> = (0..d).map(row).collect();
        let norms: Vec<T> = rows.iter().map(|r| r.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())).collect();
        let best = (0..d).max_by(|&a, &b| norms[a].partial_cmp(&norms[b]).unwrap()).unwrap();
        let chi = &rows[best];
        let chi_norm2 = norms[best];
        let mut residual = T::zero();
        for r in &rows {
            let coeff = chi.iter().zip(r).fold(Complex::default(), |acc, (c, x)| acc + c.conj() * x) / chi_norm2;
            residual = residual + chi.iter().zip(r).fold(T::zero(), |acc, (c, x)| acc + (x - c * coeff).norm_sqr());
        }
        if residual.sqrt() > tol {
            return Err(Error::StillEntangled(q));
        }
        let mut out = DenseState { dim: self.dim, n: self.n - 1, amps: chi.clone() };
        out.normalize()?;
        Ok(out)
    }

    /// Removes qudit `q` by taking the inner product with the single-qudit
    /// state `phi` on it. Linear up to the final renormalization, so the
    /// phase of the result does not depend on the input.
    pub fn contract(&self, q: usize, phi: &DenseState<T>) -> Result<Self> {
        self.check_targets(&[q])?;
        if phi.n != 1 || phi.dim != self.dim {
            return Err(Error::LengthMismatch(phi.n, 1));
        }
        let d = self.dim.d() as usize;
        let stride = self.stride(q);
        let amps: Vec<Complex<T>> = (0..self.amps.len() / d)
            .map(|r| {
                let hi = r / stride;
                let lo = r % stride;
                (0..d).fold(Complex::default(), |acc, j| acc + phi.amps[j].conj() * self.amps[hi * stride * d + j * stride + lo])
            })
            .collect();
        let mut out = DenseState { dim: self.dim, n: self.n - 1, amps };
        out.normalize()?;
        Ok(out)
    }

    /// The `omega^a` eigenstate of `X`: `sum_j omega^{-ja} |j> / sqrt(d)`.
    pub fn x_eigenstate(dim: Dimension, a: u32) -> Result<Self> {
        let amps = (0..dim.d()).map(|j| dim.root(-(j as i64) * a as i64)).collect();
        DenseState::from_amplitudes(dim, 1, amps)
    }

    /// Reorders qudits: new qudit `i` is old qudit `perm[i]`.
    pub fn permute_qudits(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch(perm.len(), self.n));
        }
        self.check_targets(perm)?;
        let mut out = vec![Complex::default(); self.amps.len()];
        let mut old = vec![0u32; self.n];
        let mut new = vec![0u32; self.n];
        for (idx, a) in self.amps.iter().enumerate() {
            to_digits(idx, self.dim, &mut old);
            for (i, &p) in perm.iter().enumerate() {
                new[i] = old[p];
            }
            out[from_digits(&new, self.dim)] = *a;
        }
        Ok(DenseState { dim: self.dim, n: self.n, amps: out })
    }

    /// Debug dump as `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.amps.iter().map(|a| serde_json::json!([a.re.to_f64().unwrap_or(f64::NAN), a.im.to_f64().unwrap_or(f64::NAN)])).collect(),
        )
    }
}

/// Action of a permutation-type gate on local digits: rewrites them and returns
/// the phase exponent. `None` for the Fourier gate.
pub fn basis_action(gate: Gate, dim: Dimension, v: &mut [u32]) -> Option<u32> {
    let r = |x: i64| dim.reduce(x);
    let mut j = [0i64; 3];
    for (dst, &src) in j.iter_mut().zip(v.iter()) {
        *dst = src as i64;
    }
    let phase = match gate {
        Gate::Fourier => return None,
        Gate::PhaseGate => r(j[0] * (j[0] - 1) / 2),
        Gate::Sum => {
            v[1] = r(j[1] + j[0]);
            0
        }
        Gate::InvSum => {
            v[1] = r(j[1] - j[0]);
            0
        }
        Gate::Scale(a) => {
            v[0] = r(a as i64 * j[0]);
            0
        }
        Gate::X => {
            v[0] = r(j[0] + 1);
            0
        }
        Gate::Z => r(j[0]),
        Gate::Phase2 => r(j[0] * j[1]),
        Gate::Toffoli => {
            v[2] = r(j[2] + j[0] * j[1]);
            0
        }
        Gate::M1 => {
            v[2] = r(j[2] + j[1]);
            v[0] = r(j[0] + 1);
            0
        }
        Gate::M2 => {
            v[2] = r(j[2] + j[0]);
            v[1] = r(j[1] + 1);
            0
        }
        Gate::M3 => r(j[2] - j[0] * j[1]),
    };
    Some(phase)
}

/// Eigenvalue exponents of a diagonal gate, indexed by local basis state.
fn diagonal_exponents(gate: Gate, dim: Dimension) -> Result<Vec<u32>> {
    let k = gate.arity();
    let size = dim.size(k).expect("small");
    let mut digits = vec![0u32; k];
    (0..size)
        .map(|idx| {
            to_digits(idx, dim, &mut digits);
            let before = digits.clone();
            let ph = basis_action(gate, dim, &mut digits).ok_or(Error::NotDiagonalRoot)?;
            if digits != before {
                return Err(Error::NotDiagonalRoot);
            }
            Ok(ph)
        })
        .collect()
}

/// Exact unitary of a gate on its own qudits.
pub fn gate_matrix<T: Real>(gate: Gate, dim: Dimension) -> Result<CMatrix<T>> {
    gate.validate(dim)?;
    let k = gate.arity();
    let size = dim.size(k).expect("small");
    let mut m = Array2::zeros((size, size));
    if gate == Gate::Fourier {
        let norm = T::one() / T::from_u32(dim.d()).unwrap().sqrt();
        for s in 0..size {
            for j in 0..size {
                m[[s, j]] = dim.root::<T>((s * j) as i64) * norm;
            }
        }
        return Ok(m);
    }
    let mut digits = vec![0u32; k];
    for col in 0..size {
        to_digits(col, dim, &mut digits);
        let ph = basis_action(gate, dim, &mut digits).expect("permutation gate");
        m[[from_digits(&digits, dim), col]] = dim.root(ph as i64);
    }
    Ok(m)
}

pub fn adjoint<T: Real>(u: &CMatrix<T>) -> CMatrix<T> {
    u.t().mapv(|c| c.conj())
}

/// Largest entry of `|a - b|`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc.max((x - y).norm()))
}

/// Reads off the Pauli operator `m` is equal to, if any.
pub fn match_pauli<T: Real>(m: &CMatrix<T>, dim: Dimension, n: usize, tol: T) -> Result<PauliOperator> {
    let size = dim.size(n).ok_or(Error::NotPauli)?;
    if m.dim() != (size, size) {
        return Err(Error::LengthMismatch(m.nrows(), size));
    }
    let half = T::from_f64_lossy(0.5);
    let target = (0..size).find(|&r| m[[r, 0]].norm() > half).ok_or(Error::NotPauli)?;
    let phase = dim.root_exponent(m[[target, 0]], tol).ok_or(Error::NotPauli)?;
    let mut x = vec![0u32; n];
    to_digits(target, dim, &mut x);
    let mut z = vec![0i64; n];
    let mut digits = vec![0u32; n];
    for q in 0..n {
        digits.iter_mut().for_each(|v| *v = 0);
        digits[q] = 1;
        let col = from_digits(&digits, dim);
        for (v, &xv) in digits.iter_mut().zip(&x) {
            *v = dim.add(*v, xv);
        }
        let row = from_digits(&digits, dim);
        let e = dim.root_exponent(m[[row, col]] * dim.root::<T>(-(phase as i64)), tol).ok_or(Error::NotPauli)?;
        z[q] = e as i64;
    }
    let x: Vec<i64> = x.iter().map(|&v| v as i64).collect();
    let cand = PauliOperator::from_exponents(dim, phase as i64, &x, &z)?;
    if max_abs_diff(&cand.to_matrix::<T>()?, m) > tol {
        return Err(Error::NotPauli);
    }
    Ok(cand)
}

/// The Clifford map `P -> U P U†` of a unitary on `n` qudits.
pub fn clifford_map_of_unitary<T: Real>(u: &CMatrix<T>, dim: Dimension, n: usize) -> Result<CliffordMap> {
    let tol = T::from_f64_lossy(1e-8);
    let size = dim.size(n).ok_or(Error::NotPauli)?;
    if u.dim() != (size, size) {
        return Err(Error::LengthMismatch(u.nrows(), size));
    }
    let ud = adjoint(u);
    let image = |p: PauliOperator| -> Result<PauliOperator> {
        let conj = u.dot(&p.to_matrix::<T>()?).dot(&ud);
        match_pauli(&conj, dim, n, tol)
    };
    let xs = (0..n).map(|q| image(PauliOperator::x_on(dim, n, q))).collect::<Result<Vec<_>>>()?;
    let zs = (0..n).map(|q| image(PauliOperator::z_on(dim, n, q))).collect::<Result<Vec<_>>>()?;
    CliffordMap::new(dim, xs, zs)
}

/// Dense realization of a pure tableau: a simultaneous +1 eigenvector of every row.
pub fn tableau_to_state<T: Real>(t: &StabilizerTableau) -> Result<DenseState<T>> {
    if !t.is_pure() {
        return Err(Error::Precondition("tableau has open logical qudits".into()));
    }
    let dim = t.dim();
    let n = t.n();
    checked_size(dim, n)?;
    // The support is cut out by the Z-only part of the stabilizer group.
    let mut rows = t.stabilizers().to_vec();
    let x_cols: Vec<usize> = (0..n).collect();
    let x_rank = reduce_rows(&mut rows, &x_cols, dim).len();
    let mut z_rows = rows.split_off(x_rank);
    let z_cols: Vec<usize> = (n..2 * n).collect();
    let pivots = reduce_rows(&mut z_rows, &z_cols, dim);
    let mut digits = vec![0u32; n];
    for (row, col) in z_rows.iter().zip(&pivots) {
        digits[col - n] = dim.neg(row.phase());
    }
    let mut state = DenseState::<T>::basis(dim, &digits)?;
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let floor = T::from_f64_lossy(1e-6);
    for row in t.stabilizers() {
        if state.probabilities(row)?[0] < floor {
            return Err(Error::InvalidTableau(format!("stabilizer {row} annihilates the reference vector")));
        }
        state = state.measure_pauli(row, &mut rng, Some(0))?.1;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::InitKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type S = DenseState<f64>;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn p(s: &str, d: u32) -> PauliOperator {
        PauliOperator::parse(s, dim(d)).unwrap()
    }

    const ALL: [Gate; 12] = [
        Gate::Fourier,
        Gate::PhaseGate,
        Gate::Sum,
        Gate::InvSum,
        Gate::Scale(2),
        Gate::X,
        Gate::Z,
        Gate::Phase2,
        Gate::Toffoli,
        Gate::M1,
        Gate::M2,
        Gate::M3,
    ];

    #[test]
    fn every_gate_is_unitary() {
        for d in [3, 5, 7] {
            for g in ALL {
                let u = gate_matrix::<f64>(g, dim(d)).unwrap();
                let id = CMatrix::<f64>::eye(u.nrows());
                assert!(max_abs_diff(&adjoint(&u).dot(&u), &id) < 1e-10, "{g} d={d}");
            }
        }
        assert!(gate_matrix::<f64>(Gate::Scale(5), dim(5)).is_err());
    }

    #[test]
    fn fourier_zero_column_is_uniform() {
        let u = gate_matrix::<f64>(Gate::Fourier, dim(3)).unwrap();
        for s in 0..3 {
            assert!((u[[s, 0]] - Complex::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn permutation_gates_on_kets() {
        let mut s = S::basis(dim(3), &[1, 1]).unwrap();
        s.apply_gate(Gate::Sum, &[0, 1]).unwrap();
        assert_eq!(s, S::basis(dim(3), &[1, 2]).unwrap());
        let mut t = S::basis(dim(3), &[1, 2, 0]).unwrap();
        t.apply_gate(Gate::Toffoli, &[0, 1, 2]).unwrap();
        assert_eq!(t, S::basis(dim(3), &[1, 2, 2]).unwrap());
        assert!(s.apply_gate(Gate::Sum, &[1, 1]).is_err());
    }

    #[test]
    fn gate_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [3, 5] {
            let s0 = S::random(dim(d), 2, &mut rng).unwrap();
            let mut s = s0.clone();
            for _ in 0..4 {
                s.apply_gate(Gate::Fourier, &[1]).unwrap();
            }
            assert!(s.equal_up_to_global_phase(&s0, 1e-10).0);
            let mut s = s0.clone();
            for _ in 0..d {
                s.apply_gate(Gate::Sum, &[1, 0]).unwrap();
            }
            assert!(s.equal_up_to_global_phase(&s0, 1e-10).0);
            let mut s = s0.clone();
            s.apply_gate(Gate::Sum, &[0, 1]).unwrap();
            s.apply_gate(Gate::InvSum, &[0, 1]).unwrap();
            assert!(s.equal_up_to_global_phase(&s0, 1e-10).0);
        }
    }

    #[test]
    fn pauli_measurement_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let zero = S::zero(dim(3), 1).unwrap();
        let (a, post) = zero.measure_pauli(&p("Z", 3), &mut rng, None).unwrap();
        assert_eq!(a, 0);
        assert_eq!(post, zero);
        let probs = zero.probabilities(&p("X", 3)).unwrap();
        for pr in probs {
            assert!((pr - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(matches!(zero.measure_pauli(&p("Z", 3), &mut rng, Some(1)), Err(Error::ZeroProbability(1))));
    }

    #[test]
    fn global_phase_comparison() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = S::random(dim(3), 2, &mut rng).unwrap();
        let w = dim(3).omega::<f64>();
        let t = S { amps: s.amps.iter().map(|a| a * w).collect(), ..s.clone() };
        let (eq, phase) = s.equal_up_to_global_phase(&t, 1e-8);
        assert!(eq);
        assert!((phase - w).norm() < 1e-10);
    }

    #[test]
    fn tableau_realizations() {
        let zero = StabilizerTableau::initial(2, dim(3), InitKind::Zero);
        assert_eq!(tableau_to_state::<f64>(&zero).unwrap(), S::zero(dim(3), 2).unwrap());
        let plus = StabilizerTableau::initial(1, dim(3), InitKind::Plus);
        let s = tableau_to_state::<f64>(&plus).unwrap();
        for a in s.amplitudes() {
            assert!((a - Complex::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-10);
        }
        let plus5 = StabilizerTableau::initial(1, dim(5), InitKind::Plus);
        let mut f0 = DenseState::<f64>::zero(dim(5), 1).unwrap();
        f0.apply_gate(Gate::Fourier, &[0]).unwrap();
        assert!(tableau_to_state::<f64>(&plus5).unwrap().equal_up_to_global_phase(&f0, 1e-10).0);
    }

    #[test]
    fn conjugation_maps_from_matrices() {
        let d3 = dim(3);
        let f = clifford_map_of_unitary(&gate_matrix::<f64>(Gate::Fourier, d3).unwrap(), d3, 1).unwrap();
        assert_eq!(f.x_image(0), &p("Z", 3));
        assert_eq!(f.z_image(0), &p("X2", 3));
        let s = clifford_map_of_unitary(&gate_matrix::<f64>(Gate::Sum, d3).unwrap(), d3, 2).unwrap();
        assert_eq!(s.x_image(0), &p("X X", 3));
        assert_eq!(s.x_image(1), &p("I X", 3));
        assert_eq!(s.z_image(0), &p("Z I", 3));
        assert_eq!(s.z_image(1), &p("Z2 Z", 3));
        let t = gate_matrix::<f64>(Gate::Toffoli, d3).unwrap();
        assert!(matches!(clifford_map_of_unitary(&t, d3, 3), Err(Error::NotPauli)));
    }

    #[test]
    fn discard_product_and_entangled() {
        let mut s = S::zero(dim(3), 2).unwrap();
        s.apply_gate(Gate::Fourier, &[1]).unwrap();
        assert_eq!(s.discard(1).unwrap(), S::zero(dim(3), 1).unwrap());
        s.apply_gate(Gate::Sum, &[1, 0]).unwrap();
        assert!(matches!(s.discard(0), Err(Error::StillEntangled(0))));
    }

    #[test]
    fn size_cap() {
        assert!(matches!(S::zero(dim(31), 6), Err(Error::TooLarge { .. })));
    }
}
