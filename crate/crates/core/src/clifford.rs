//! Clifford unitaries described by their action on Pauli generators.

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::zd::Dimension;
use std::fmt;

/// Images `U X_i U†` and `U Z_i U†` of the single-qudit generators, phases included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordMap {
    dim: Dimension,
    x_images: Vec<PauliOperator>,
    z_images: Vec<PauliOperator>,
}

impl CliffordMap {
    pub fn identity(dim: Dimension, n: usize) -> Self {
        CliffordMap {
            dim,
            x_images: (0..n).map(|q| PauliOperator::x_on(dim, n, q)).collect(),
            z_images: (0..n).map(|q| PauliOperator::z_on(dim, n, q)).collect(),
        }
    }

    /// Builds a map from generator images; the symplectic conditions are checked.
    pub fn new(dim: Dimension, x_images: Vec<PauliOperator>, z_images: Vec<PauliOperator>) -> Result<Self> {
        let n = x_images.len();
        if z_images.len() != n {
            return Err(Error::LengthMismatch(n, z_images.len()));
        }
        if let Some(bad) = x_images.iter().chain(&z_images).find(|p| p.n() != n || p.dim() != dim) {
            return Err(Error::LengthMismatch(n, bad.n()));
        }
        let map = CliffordMap { dim, x_images, z_images };
        map.check_symplectic()?;
        Ok(map)
    }

    pub(crate) fn from_images_unchecked(dim: Dimension, x_images: Vec<PauliOperator>, z_images: Vec<PauliOperator>) -> Self {
        CliffordMap { dim, x_images, z_images }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.x_images.len()
    }

    pub fn x_image(&self, q: usize) -> &PauliOperator {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliOperator {
        &self.z_images[q]
    }

    /// Verifies `[X_i', Z_j'] = -delta_ij` and that images of like generators commute.
    pub fn check_symplectic(&self) -> Result<()> {
        let n = self.n();
        let minus_one = self.dim.d() - 1;
        for i in 0..n {
            for j in 0..n {
                let xz = self.x_images[i].comm_unchecked(&self.z_images[j]);
                let want = if i == j { minus_one } else { 0 };
                if xz != want {
                    return Err(Error::NotSymplectic(format!("X{i} vs Z{j}: exponent {xz}, expected {want}")));
                }
                if i < j {
                    if !self.x_images[i].commutes_with(&self.x_images[j]) {
                        return Err(Error::NotSymplectic(format!("X{i} and X{j} images do not commute")));
                    }
                    if !self.z_images[i].commutes_with(&self.z_images[j]) {
                        return Err(Error::NotSymplectic(format!("Z{i} and Z{j} images do not commute")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `U P U†` for the Clifford `U` this map describes.
    pub fn apply(&self, p: &PauliOperator) -> Result<PauliOperator> {
        if p.n() != self.n() {
            return Err(Error::LengthMismatch(p.n(), self.n()));
        }
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch(p.dim().d(), self.dim.d()));
        }
        let mut acc = PauliOperator::identity(self.dim, self.n()).with_phase(p.phase());
        for q in 0..self.n() {
            let (x, z) = p.local(q);
            if x != 0 {
                acc = acc.mul_unchecked(&self.x_images[q].power(x as i64));
            }
            if z != 0 {
                acc = acc.mul_unchecked(&self.z_images[q].power(z as i64));
            }
        }
        Ok(acc)
    }

    /// The map of "apply `self`, then `next`".
    pub fn then(&self, next: &CliffordMap) -> Result<CliffordMap> {
        let x_images = self.x_images.iter().map(|p| next.apply(p)).collect::<Result<_>>()?;
        let z_images = self.z_images.iter().map(|p| next.apply(p)).collect::<Result<_>>()?;
        Ok(CliffordMap { dim: self.dim, x_images, z_images })
    }

    /// `self` applied `k` times in sequence.
    pub fn repeat(&self, k: usize) -> CliffordMap {
        let mut acc = CliffordMap::identity(self.dim, self.n());
        for _ in 0..k {
            acc = acc.then(self).expect("same size");
        }
        acc
    }

    /// Lifts the map to an `n`-qudit register acting on `positions`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Result<CliffordMap> {
        if positions.len() != self.n() {
            return Err(Error::LengthMismatch(positions.len(), self.n()));
        }
        let mut full = CliffordMap::identity(self.dim, n);
        for (i, &q) in positions.iter().enumerate() {
            full.x_images[q] = self.x_images[i].embed(n, positions)?;
            full.z_images[q] = self.z_images[i].embed(n, positions)?;
        }
        Ok(full)
    }

    /// Images with phases dropped; equal keys mean equal symplectic parts.
    pub fn symplectic_key(&self) -> Vec<u32> {
        self.x_images.iter().chain(&self.z_images).flat_map(|p| p.symplectic()).collect()
    }

    /// Human-readable `X0 -> ...` lines.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(2 * self.n());
        for q in 0..self.n() {
            out.push(format!("X{q} -> {}", self.x_images[q]));
            out.push(format!("Z{q} -> {}", self.z_images[q]));
        }
        out
    }
}

impl serde::Serialize for CliffordMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.describe())
    }
}

impl fmt::Display for CliffordMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe().join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_symplectic_and_fixes_everything() {
        let dim = Dimension::new(5).unwrap();
        let id = CliffordMap::identity(dim, 3);
        id.check_symplectic().unwrap();
        let p = PauliOperator::parse("w2 XZ3 I Z", dim).unwrap();
        assert_eq!(id.apply(&p).unwrap(), p);
    }

    #[test]
    fn rejects_non_symplectic_images() {
        let dim = Dimension::new(3).unwrap();
        let x = PauliOperator::parse("X", dim).unwrap();
        assert!(matches!(CliffordMap::new(dim, vec![x.clone()], vec![x]), Err(Error::NotSymplectic(_))));
    }
}
