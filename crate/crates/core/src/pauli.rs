//! Generalized Pauli operators over Z_d.
//!
//! Every operator is stored in the normal form `omega^a * (X^{x_0} Z^{z_0}) ⊗ ... ⊗ (X^{x_{n-1}} Z^{z_{n-1}})`
//! with X written to the left of Z on each qudit and all exponents reduced mod d.
//! With `X|j> = |j+1>` and `Z|j> = omega^j |j>` we have `Z X = omega X Z`, which
//! fixes the phase picked up when two normal forms are multiplied.

use crate::error::{Error, Result};
use crate::linalg::EliminationRow;
use crate::scalar::Real;
use crate::zd::Dimension;
use ndarray::Array2;
use num_complex::Complex;
use std::fmt;

/// Largest `d^n` for which [`PauliOperator::to_matrix`] builds a matrix.
pub const MATRIX_AXIS_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    dim: Dimension,
    phase: u32,
    x: Vec<u32>,
    z: Vec<u32>,
}

impl PauliOperator {
    pub fn identity(dim: Dimension, n: usize) -> Self {
        PauliOperator { dim, phase: 0, x: vec![0; n], z: vec![0; n] }
    }

    /// Builds an operator from signed exponents, reducing everything mod d.
    pub fn from_exponents(dim: Dimension, phase: i64, x: &[i64], z: &[i64]) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch(x.len(), z.len()));
        }
        Ok(PauliOperator {
            dim,
            phase: dim.reduce(phase),
            x: x.iter().map(|&v| dim.reduce(v)).collect(),
            z: z.iter().map(|&v| dim.reduce(v)).collect(),
        })
    }

    /// `X^x Z^z` acting on qudit `q` of an `n`-qudit register.
    pub fn single(dim: Dimension, n: usize, q: usize, x: i64, z: i64) -> Self {
        let mut p = Self::identity(dim, n);
        p.x[q] = dim.reduce(x);
        p.z[q] = dim.reduce(z);
        p
    }

    pub fn x_on(dim: Dimension, n: usize, q: usize) -> Self {
        Self::single(dim, n, q, 1, 0)
    }

    pub fn z_on(dim: Dimension, n: usize, q: usize) -> Self {
        Self::single(dim, n, q, 0, 1)
    }

    /// Builds from a symplectic vector `(x_0..x_{n-1} | z_0..z_{n-1})`.
    pub fn from_symplectic(dim: Dimension, phase: u32, v: &[u32]) -> Self {
        let n = v.len() / 2;
        PauliOperator { dim, phase: phase % dim.d(), x: v[..n].to_vec(), z: v[n..].to_vec() }
    }

    #[inline]
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn x_exps(&self) -> &[u32] {
        &self.x
    }

    pub fn z_exps(&self) -> &[u32] {
        &self.z
    }

    /// The same operator times `omega^k`.
    pub fn with_phase_shift(&self, k: i64) -> Self {
        let mut p = self.clone();
        p.phase = self.dim.reduce(self.phase as i64 + k);
        p
    }

    pub fn with_phase(&self, phase: u32) -> Self {
        let mut p = self.clone();
        p.phase = phase % self.dim.d();
        p
    }

    /// `(x | z)` exponent vector, phase dropped.
    pub fn symplectic(&self) -> Vec<u32> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.z);
        v
    }

    /// True when all x/z exponents vanish (any phase).
    pub fn is_scalar(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_scalar()
    }

    /// Number of qudits on which the operator acts nontrivially.
    pub fn weight(&self) -> usize {
        self.support().count()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(|&i| self.x[i] != 0 || self.z[i] != 0)
    }

    /// Local `(x, z)` exponents on qudit `q`.
    pub fn local(&self, q: usize) -> (u32, u32) {
        (self.x[q], self.z[q])
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim.d(), other.dim.d()));
        }
        if self.n() != other.n() {
            return Err(Error::LengthMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    /// Matrix product `self · other` in normal form.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let dim = self.dim;
        // (X^r Z^s)(X^t Z^u) = omega^{s t} X^{r+t} Z^{s+u}
        let reorder = self.z.iter().zip(&other.x).fold(0, |acc, (&s, &t)| dim.add(acc, dim.mul(s, t)));
        PauliOperator {
            dim,
            phase: dim.add(dim.add(self.phase, other.phase), reorder),
            x: self.x.iter().zip(&other.x).map(|(&a, &b)| dim.add(a, b)).collect(),
            z: self.z.iter().zip(&other.z).map(|(&a, &b)| dim.add(a, b)).collect(),
        }
    }

    /// Exponent `c` with `self · other = omega^c · other · self`.
    pub fn commutation_exponent(&self, other: &Self) -> Result<u32> {
        self.check_compatible(other)?;
        Ok(self.comm_unchecked(other))
    }

    pub(crate) fn comm_unchecked(&self, other: &Self) -> u32 {
        let dim = self.dim;
        (0..self.n()).fold(0, |acc, i| {
            let st = dim.mul(self.z[i], other.x[i]);
            let ru = dim.mul(self.x[i], other.z[i]);
            dim.add(acc, dim.sub(st, ru))
        })
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.comm_unchecked(other) == 0
    }

    /// `self^m` for any integer `m`; negative powers invert.
    pub fn power(&self, m: i64) -> Self {
        let e = self.dim.reduce(m);
        let mut acc = Self::identity(self.dim, self.n());
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        self.power(-1)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim.d(), other.dim.d()));
        }
        let mut x = self.x.clone();
        x.extend_from_slice(&other.x);
        let mut z = self.z.clone();
        z.extend_from_slice(&other.z);
        Ok(PauliOperator { dim: self.dim, phase: self.dim.add(self.phase, other.phase), x, z })
    }

    /// Places this operator on `positions` of an `n`-qudit register.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.n() {
            return Err(Error::LengthMismatch(positions.len(), self.n()));
        }
        let mut p = Self::identity(self.dim, n);
        p.phase = self.phase;
        for (i, &q) in positions.iter().enumerate() {
            if q >= n {
                return Err(Error::QuditOutOfRange { index: q, n });
            }
            p.x[q] = self.x[i];
            p.z[q] = self.z[i];
        }
        Ok(p)
    }

    /// Restriction to `positions`, keeping the phase.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        PauliOperator {
            dim: self.dim,
            phase: self.phase,
            x: positions.iter().map(|&q| self.x[q]).collect(),
            z: positions.iter().map(|&q| self.z[q]).collect(),
        }
    }

    /// Drops qudit `q`'s column.
    pub fn remove_qudit(&self, q: usize) -> Self {
        let mut p = self.clone();
        p.x.remove(q);
        p.z.remove(q);
        p
    }

    /// Inserts an identity column at position `q`.
    pub fn insert_qudit(&self, q: usize) -> Self {
        let mut p = self.clone();
        p.x.insert(q, 0);
        p.z.insert(q, 0);
        p
    }

    /// Applies a permutation of qudits: the column at `perm[i]` moves to `i`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        self.restrict(perm)
    }

    /// Action on a computational basis state given by its digits: returns the
    /// phase exponent and overwrites `digits` with the image ket.
    pub fn act_on_digits(&self, digits: &mut [u32]) -> u32 {
        let dim = self.dim;
        let mut phase = self.phase;
        for (q, v) in digits.iter_mut().enumerate() {
            phase = dim.add(phase, dim.mul(self.z[q], *v));
            *v = dim.add(*v, self.x[q]);
        }
        phase
    }

    /// Dense matrix with qudit 0 as the most significant digit.
    pub fn to_matrix<T: Real>(&self) -> Result<Array2<Complex<T>>> {
        let n = self.n();
        let size =
            self.dim.size(n).filter(|&s| s <= MATRIX_AXIS_CAP).ok_or(Error::TooLarge { d: self.dim.d(), n, cap: MATRIX_AXIS_CAP })?;
        let roots: Vec<Complex<T>> = (0..self.dim.d()).map(|k| self.dim.root(k as i64)).collect();
        let mut m = Array2::zeros((size, size));
        let mut digits = vec![0u32; n];
        for col in 0..size {
            to_digits(col, self.dim, &mut digits);
            let ph = self.act_on_digits(&mut digits);
            m[[from_digits(&digits, self.dim), col]] = roots[ph as usize];
        }
        Ok(m)
    }

    /// Parses the text form, e.g. `w2 XZ2 I X`.
    pub fn parse(s: &str, dim: Dimension) -> Result<Self> {
        let mut tokens = s.split_whitespace().peekable();
        let mut phase = 0;
        if let Some(tok) = tokens.peek() {
            if let Some(rest) = tok.strip_prefix('w') {
                phase = parse_exponent(rest, dim, tok)?;
                tokens.next();
            }
        }
        let mut x = Vec::new();
        let mut z = Vec::new();
        for tok in tokens {
            let (a, b) = parse_local(tok, dim)?;
            x.push(a);
            z.push(b);
        }
        if x.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string '{s}'")));
        }
        Ok(PauliOperator { dim, phase, x, z })
    }
}

/// Parses one per-qudit token `I`, `X<a>`, `Z<b>` or `X<a>Z<b>`.
pub fn parse_local(tok: &str, dim: Dimension) -> Result<(u32, u32)> {
    if tok == "I" {
        return Ok((0, 0));
    }
    let bad = || Error::Parse(format!("invalid Pauli token '{tok}'"));
    let (xs, zs) = match (tok.find('X'), tok.find('Z')) {
        (Some(0), Some(zi)) => (Some(&tok[1..zi]), Some(&tok[zi + 1..])),
        (Some(0), None) => (Some(&tok[1..]), None),
        (None, Some(0)) => (None, Some(&tok[1..])),
        _ => return Err(bad()),
    };
    let a = match xs {
        Some(e) => parse_exponent(e, dim, tok)?,
        None => 0,
    };
    let b = match zs {
        Some(e) => parse_exponent(e, dim, tok)?,
        None => 0,
    };
    Ok((a, b))
}

/// Exponent text: empty means 1, a leading `-` negates, magnitude must be below d.
fn parse_exponent(e: &str, dim: Dimension, tok: &str) -> Result<u32> {
    if e.is_empty() {
        return Ok(1);
    }
    let (neg, digits) = match e.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, e),
    };
    let v: u32 = digits.parse().map_err(|_| Error::Parse(format!("invalid exponent in '{tok}'")))?;
    if v >= dim.d() {
        return Err(Error::Parse(format!("exponent {v} in '{tok}' must be below d = {dim}")));
    }
    Ok(if neg { dim.neg(v) } else { v })
}

fn fmt_local(f: &mut fmt::Formatter<'_>, x: u32, z: u32) -> fmt::Result {
    if x == 0 && z == 0 {
        return f.write_str("I");
    }
    let exp = |f: &mut fmt::Formatter<'_>, v: u32| if v == 1 { Ok(()) } else { write!(f, "{v}") };
    if x != 0 {
        f.write_str("X")?;
        exp(f, x)?;
    }
    if z != 0 {
        f.write_str("Z")?;
        exp(f, z)?;
    }
    Ok(())
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "w{} ", self.phase)?;
        }
        for q in 0..self.n() {
            if q > 0 {
                f.write_str(" ")?;
            }
            fmt_local(f, self.x[q], self.z[q])?;
        }
        Ok(())
    }
}

impl serde::Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl EliminationRow for PauliOperator {
    /// Columns are `x_0..x_{n-1}` followed by `z_0..z_{n-1}`.
    fn entry(&self, col: usize) -> u32 {
        let n = self.n();
        if col < n {
            self.x[col]
        } else {
            self.z[col - n]
        }
    }

    fn scale(&mut self, c: u32, _dim: Dimension) {
        *self = self.power(c as i64);
    }

    fn add_scaled(&mut self, other: &Self, c: u32, _dim: Dimension) {
        *self = self.mul_unchecked(&other.power(c as i64));
    }
}

/// Base-d digits of `index`, qudit 0 most significant.
pub fn to_digits(mut index: usize, dim: Dimension, digits: &mut [u32]) {
    let d = dim.d() as usize;
    for v in digits.iter_mut().rev() {
        *v = (index % d) as u32;
        index /= d;
    }
}

pub fn from_digits(digits: &[u32], dim: Dimension) -> usize {
    let d = dim.d() as usize;
    digits.iter().fold(0, |acc, &v| acc * d + v as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    fn p(s: &str, dim: Dimension) -> PauliOperator {
        PauliOperator::parse(s, dim).unwrap()
    }

    #[test]
    fn z_times_x_reorders_with_omega() {
        let dim = d3();
        let zx = p("Z", dim).multiply(&p("X", dim)).unwrap();
        assert_eq!(zx, p("w1 XZ", dim));
        let id = PauliOperator::identity(dim, 1);
        assert_eq!(id.multiply(&zx).unwrap(), zx);
    }

    #[test]
    fn x_against_z_exponent() {
        let dim = d3();
        assert_eq!(p("X", dim).commutation_exponent(&p("Z", dim)).unwrap(), 2);
        let q = p("w2 XZ2 Z", dim);
        assert_eq!(q.commutation_exponent(&q).unwrap(), 0);
    }

    #[test]
    fn powers_and_inverse() {
        let dim = Dimension::new(5).unwrap();
        assert!(p("X", dim).power(5).is_identity());
        let a = p("w3 X2Z Z4 X", dim);
        assert!(a.power(5).is_identity());
        assert!(a.inverse().multiply(&a).unwrap().is_identity());
        assert!(PauliOperator::identity(dim, 2).inverse().is_identity());
    }

    #[test]
    fn weight_counts_support() {
        let dim = d3();
        assert_eq!(PauliOperator::identity(dim, 3).weight(), 0);
        assert_eq!(p("X I X2", dim).weight(), 2);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = p("X", d3());
        assert!(matches!(a.multiply(&p("X X", d3())), Err(Error::LengthMismatch(1, 2))));
        let b = p("X", Dimension::new(5).unwrap());
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch(3, 5))));
    }

    #[test]
    fn text_form() {
        let dim = d3();
        let a = p("w2 XZ2 I X", dim);
        assert_eq!(a.to_string(), "w2 XZ2 I X");
        assert_eq!(a.phase(), 2);
        assert_eq!(a.x_exps(), &[1, 0, 1]);
        assert_eq!(a.z_exps(), &[2, 0, 0]);
        assert_eq!(p("X-1Z", dim).to_string(), "X2Z");
        assert!(PauliOperator::parse("X3", dim).is_err());
        assert!(PauliOperator::parse("Y", dim).is_err());
        assert!(PauliOperator::parse("ZX", dim).is_err());
        assert!(PauliOperator::parse("", dim).is_err());
    }

    #[test]
    fn shift_and_clock_matrices() {
        let dim = d3();
        let x = p("X", dim).to_matrix::<f64>().unwrap();
        for j in 0..3 {
            assert_eq!(x[[(j + 1) % 3, j]], Complex::new(1.0, 0.0));
        }
        let z = p("Z", dim).to_matrix::<f64>().unwrap();
        for j in 0..3 {
            assert!((z[[j, j]] - dim.root::<f64>(j as i64)).norm() < 1e-12);
        }
        let xz = p("X Z", dim).to_matrix::<f64>().unwrap();
        let kron = ndarray::linalg::kron(&x, &z);
        assert!((&xz - &kron).iter().all(|c| c.norm() < 1e-12));
    }
}
