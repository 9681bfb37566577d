//! The skeletal matrix model of finite-dimensional Hilbert spaces and
//! contractions over ℚ(i).

pub mod approx;
pub mod linalg;
pub mod matrix;
pub mod ops;
pub mod sample;

use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use approx::ApproxMatrix;
pub use linalg::Ldl;
pub use matrix::Matrix;
pub use ops::*;

use crate::error::{Error, Result};

/// A matrix with operator norm at most 1, carrying the exact LDL certificate
/// for `I − A†A ⪰ 0`. Results of operations that preserve contractions
/// compute their certificate on first request.
#[derive(Clone, Debug)]
pub struct ConMorphism {
    matrix: Matrix,
    certificate: OnceLock<Ldl>,
}

impl ConMorphism {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let certificate = linalg::contraction_certificate(&matrix).ok_or(Error::NotContraction)?;
        Ok(Self {
            matrix,
            certificate: OnceLock::from(certificate),
        })
    }

    fn closed(matrix: Matrix) -> Self {
        Self {
            matrix,
            certificate: OnceLock::new(),
        }
    }

    /// `a·f` for `|a| ≤ 1`.
    pub fn scale(&self, a: &crate::scalars::DiskScalar) -> Self {
        Self::closed(self.matrix.scale(a.value()))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Matrix::identity(n)).expect("identities are contractions")
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(Matrix::zeros(rows, cols)).expect("zero maps are contractions")
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn certificate(&self) -> &Ldl {
        self.certificate
            .get_or_init(|| linalg::contraction_certificate(&self.matrix).expect("closed under the operation"))
    }

    pub fn shape(&self) -> (usize, usize) {
        self.matrix.shape()
    }

    pub fn dagger(&self) -> Self {
        Self::closed(self.matrix.dagger())
    }

    pub fn compose(&self, o: &Self) -> Result<Self> {
        Ok(Self::closed(self.matrix.compose(&o.matrix)?))
    }

    pub fn tensor(&self, o: &Self) -> Self {
        Self::closed(self.matrix.tensor(&o.matrix))
    }

    pub fn dsum(&self, o: &Self) -> Self {
        Self::closed(self.matrix.dsum(&o.matrix))
    }
}

impl PartialEq for ConMorphism {
    fn eq(&self, o: &Self) -> bool {
        self.matrix == o.matrix
    }
}

impl Eq for ConMorphism {}

impl Serialize for ConMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Self::new(Matrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
