//! Arithmetic in Z_d for odd prime d.

use crate::error::{Error, Result};
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest supported qudit dimension.
pub const MAX_DIMENSION: u32 = 31;

/// Qudit dimension `d`, an odd prime. Phases are powers of `omega = exp(2*pi*i/d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

fn is_prime(d: u32) -> bool {
    d >= 2 && (2..).take_while(|p| p * p <= d).all(|p| !d.is_multiple_of(p))
}

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        if !(3..=MAX_DIMENSION).contains(&d) || !is_prime(d) {
            return Err(Error::UnsupportedDimension(d));
        }
        Ok(Dimension(d))
    }

    #[inline]
    pub fn d(self) -> u32 {
        self.0
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b % self.0) % self.0
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }

    /// Multiplicative inverse; fails for multiples of d.
    pub fn inv(self, a: u32) -> Result<u32> {
        let a = a % self.0;
        if a == 0 {
            return Err(Error::NotInvertible(a, self.0));
        }
        // Fermat: a^(d-2)
        Ok(self.pow(a, self.0 - 2))
    }

    pub fn pow(self, a: u32, mut e: u32) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `omega^k` as a complex number.
    pub fn root<T: Real>(self, k: i64) -> Complex<T> {
        let k = self.reduce(k);
        let theta = T::TAU() * T::from_u32(k).unwrap() / T::from_u32(self.0).unwrap();
        Complex::from_polar(T::one(), theta)
    }

    pub fn omega<T: Real>(self) -> Complex<T> {
        self.root(1)
    }

    /// Exponent k with `z ≈ omega^k`, if `z` is within `tol` of a d-th root of unity.
    pub fn root_exponent<T: Real>(self, z: Complex<T>, tol: T) -> Option<u32> {
        (0..self.0).find(|&k| (z - self.root::<T>(k as i64)).norm() < tol)
    }

    /// `d^n`, or `None` on overflow.
    pub fn size(self, n: usize) -> Option<usize> {
        (self.0 as usize).checked_pow(u32::try_from(n).ok()?)
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Dimension::new(d)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
