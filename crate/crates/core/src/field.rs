use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One real value per mesh vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField(pub Vec<f64>);

/// One real value per boundary vertex, indexed by the sorted list of
/// vertices incident to boundary facets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryScalarField(pub Vec<f64>);

impl ScalarField {
    pub fn constant(value: f64, len: usize) -> Self {
        ScalarField(vec![value; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self::constant(0.0, len)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Entry-wise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField(self.0.iter().map(|&v| f(v)).collect())
    }

    pub fn validate(&self, expected_len: usize) -> Result<()> {
        if self.0.len() != expected_len {
            return Err(Error::LengthMismatch {
                expected: expected_len,
                got: self.0.len(),
            });
        }
        for (i, v) in self.0.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(())
    }

    /// Errors unless every entry is strictly positive.
    pub fn require_positive(&self) -> Result<()> {
        for (i, &v) in self.0.iter().enumerate() {
            if !(v > 0.0) {
                return Err(Error::NonPositive { vertex: i, value: v });
            }
        }
        Ok(())
    }
}

impl BoundaryScalarField {
    pub fn constant(value: f64, len: usize) -> Self {
        BoundaryScalarField(vec![value; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self::constant(0.0, len)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn validate(&self, expected_len: usize) -> Result<()> {
        if self.0.len() != expected_len {
            return Err(Error::LengthMismatch {
                expected: expected_len,
                got: self.0.len(),
            });
        }
        for (i, v) in self.0.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for ScalarField {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for ScalarField {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl std::ops::Index<usize> for BoundaryScalarField {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for BoundaryScalarField {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}
