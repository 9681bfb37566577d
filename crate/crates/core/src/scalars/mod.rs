//! Scalars: exact Gaussian rationals, the unit disk, and fixed-precision reals.

mod bigreal;
mod complex;
mod gaussian;
pub mod rational;

pub use bigreal::{sqrt_pos, BigReal};
pub use complex::ComplexReal;
pub use gaussian::GaussianRational;
pub use rational::Rational;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A scalar `a` with `a†a ≤ 1`; the scalars of the contraction category.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DiskScalar(GaussianRational);

impl DiskScalar {
    pub fn new(value: GaussianRational) -> Result<Self> {
        if value.in_disk() {
            Ok(Self(value))
        } else {
            Err(Error::NotInDisk)
        }
    }

    /// A nonzero disk scalar, i.e. an element that the localisation inverts.
    pub fn nonzero(value: GaussianRational) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::new(value)
    }

    pub fn one() -> Self {
        Self(GaussianRational::from_i64(1))
    }

    pub fn value(&self) -> &GaussianRational {
        &self.0
    }

    pub fn into_inner(self) -> GaussianRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    /// The disk is closed under multiplication.
    pub fn mul(&self, o: &Self) -> Self {
        Self(&self.0 * &o.0)
    }
}

impl<'de> Deserialize<'de> for DiskScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = GaussianRational::deserialize(d)?;
        DiskScalar::new(g).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::rational::rat;
    use super::*;

    #[test]
    fn disk_membership_is_enforced() {
        assert!(DiskScalar::new(GaussianRational::new(rat(3, 5), rat(4, 5))).is_ok());
        assert_eq!(
            DiskScalar::new(GaussianRational::new(rat(1, 1), rat(1, 1))),
            Err(Error::NotInDisk)
        );
        assert_eq!(
            DiskScalar::nonzero(GaussianRational::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn deserialising_outside_disk_fails() {
        let r: std::result::Result<DiskScalar, _> = serde_json::from_str(r#"["2","1","0","1"]"#);
        assert!(r.is_err());
    }
}
