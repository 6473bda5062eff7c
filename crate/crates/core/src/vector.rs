//! Points of the ambient space `R^d`.

use alloc::vec::Vec;
use core::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A point of `R^d`, `d ≥ 1`, with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Builds a vector, rejecting empty input and non-finite components.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("vector dimension must be at least 1"));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteResult);
        }
        Ok(Self(components))
    }

    /// Same as [`Vector::new`] for a slice.
    pub fn from_slice(components: &[f64]) -> Result<Self> {
        Self::new(components.to_vec())
    }

    /// One-dimensional vector.
    ///
    /// # Panics
    ///
    /// Panics if `value` is not finite.
    pub fn scalar(value: f64) -> Self {
        assert!(value.is_finite(), "scalar vector component must be finite");
        Self(alloc::vec![value])
    }

    /// The origin of `R^dim`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector dimension must be at least 1");
        Self(alloc::vec![0.0; dim])
    }

    /// Arithmetic results skip the finiteness check; callers that expose a
    /// result to users go through [`Vector::checked`].
    pub(crate) fn from_raw(components: Vec<f64>) -> Self {
        Self(components)
    }

    /// Returns `self` if every component is finite.
    pub(crate) fn checked(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFiniteResult)
        }
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Inner product. Dimensions must agree.
    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_squared())
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        libm::sqrt(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (a - b) * (a - b))
                .sum(),
        )
    }

    /// `self + alpha * direction`.
    pub fn axpy(&self, alpha: f64, direction: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), direction.dim());
        Vector(
            self.0
                .iter()
                .zip(&direction.0)
                .map(|(x, d)| x + alpha * d)
                .collect(),
        )
    }

    /// `(1 − t) self + t other`.
    pub fn lerp(&self, t: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        )
    }

    pub fn scale(&self, alpha: f64) -> Vector {
        Vector(self.0.iter().map(|x| alpha * x).collect())
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector(self.0.iter().map(|&x| f(x)).collect())
    }

    pub(crate) fn zip_map(&self, other: &Vector, f: impl Fn(f64, f64) -> f64) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub(crate) fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;

    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        self.map(|x| -x)
    }
}

impl From<f64> for Vector {
    fn from(value: f64) -> Self {
        Vector::scalar(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Vector::new(vec![]).is_err());
        assert_eq!(
            Vector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteResult)
        );
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn arithmetic() {
        let x = Vector::new(vec![3.0, 4.0]).unwrap();
        let y = Vector::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(x.norm(), 5.0);
        assert_eq!(x.dot(&y), -1.0);
        assert_eq!((&x - &y).as_slice(), &[2.0, 5.0]);
        assert_eq!(x.axpy(2.0, &y).as_slice(), &[5.0, 2.0]);
        assert_eq!(x.lerp(0.5, &y).as_slice(), &[2.0, 1.5]);
        assert_eq!(x.distance(&y), 29f64.sqrt());
    }

    proptest! {
        #[test]
        fn norm_matches_inner_product(v in proptest::collection::vec(-1e6f64..1e6, 1..6)) {
            let x = Vector::new(v).unwrap();
            let lhs = x.norm() * x.norm();
            let rhs = x.dot(&x);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(f64::MIN_POSITIVE));
        }
    }
}
