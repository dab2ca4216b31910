use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A symmetric positive definite n-by-n matrix stored as the row-major
/// upper triangle, used as the constant metric tensor of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMetric {
    pub dim: usize,
    /// Row-major upper triangle: (0,0), (0,1), ..., (0,n-1), (1,1), ...
    pub upper: Vec<f64>,
}

impl CellMetric {
    pub fn identity(dim: usize) -> Self {
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                upper.push(if i == j { 1.0 } else { 0.0 });
            }
        }
        CellMetric { dim, upper }
    }

    pub fn from_upper(dim: usize, upper: Vec<f64>) -> Result<Self> {
        if upper.len() != dim * (dim + 1) / 2 {
            return Err(Error::Validation(format!(
                "cell metric has {} entries, expected {} for dimension {}",
                upper.len(),
                dim * (dim + 1) / 2,
                dim
            )));
        }
        Ok(CellMetric { dim, upper })
    }

    /// Uniform scaling `t * identity`.
    pub fn scaled_identity(dim: usize, t: f64) -> Self {
        let mut m = Self::identity(dim);
        for i in 0..dim {
            let idx = m.upper_index(i, i);
            m.upper[idx] = t;
        }
        m
    }

    fn upper_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j);
        // offset of row i = sum_{k<i} (n - k)
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.upper[self.upper_index(a, b)]
    }

    /// Dense symmetric expansion, row-major.
    pub fn full(&self) -> Vec<f64> {
        let n = self.dim;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = self.get(i, j);
            }
        }
        m
    }

    /// Multiply every entry by `t` (the metric scaling g -> t*g).
    pub fn scale(&self, t: f64) -> Self {
        CellMetric {
            dim: self.dim,
            upper: self.upper.iter().map(|v| v * t).collect(),
        }
    }

    /// Cholesky factor of the dense expansion; `None` when not positive definite.
    fn cholesky(&self) -> Option<Vec<f64>> {
        let n = self.dim;
        let mut l = self.full();
        for k in 0..n {
            let mut d = l[k * n + k];
            for p in 0..k {
                d -= l[k * n + p] * l[k * n + p];
            }
            if d <= 0.0 || !d.is_finite() {
                return None;
            }
            let dk = d.sqrt();
            l[k * n + k] = dk;
            for i in (k + 1)..n {
                let mut s = l[i * n + k];
                for p in 0..k {
                    s -= l[i * n + p] * l[k * n + p];
                }
                l[i * n + k] = s / dk;
            }
        }
        Some(l)
    }

    /// Positive-definiteness check via Cholesky factorization success.
    pub fn is_spd(&self) -> bool {
        self.cholesky().is_some()
    }

    pub fn det(&self) -> f64 {
        match self.cholesky() {
            Some(l) => {
                let n = self.dim;
                let mut d = 1.0;
                for k in 0..n {
                    d *= l[k * n + k];
                }
                d * d
            }
            None => f64::NAN,
        }
    }

    pub fn sqrt_det(&self) -> f64 {
        let n = self.dim;
        match self.cholesky() {
            Some(l) => (0..n).map(|k| l[k * n + k]).product(),
            None => f64::NAN,
        }
    }

    /// Solve G x = b via the Cholesky factor.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.dim;
        let l = self.cholesky()?;
        let mut y = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                y[i] -= l[i * n + j] * y[j];
            }
            y[i] /= l[i * n + i];
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] -= l[j * n + i] * y[j];
            }
            y[i] /= l[i * n + i];
        }
        Some(y)
    }

    /// Inverse-metric inner product `a^T G^{-1} b`.
    pub fn inv_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let x = self.solve(b).expect("metric must be SPD");
        a.iter().zip(&x).map(|(u, v)| u * v).sum()
    }

    /// Metric inner product `a^T G b`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * self.get(i, j) * b[j];
            }
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.upper.len() != self.dim * (self.dim + 1) / 2 {
            return Err(Error::Validation(format!(
                "metric storage length {} inconsistent with dimension {}",
                self.upper.len(),
                self.dim
            )));
        }
        for v in &self.upper {
            if !v.is_finite() {
                return Err(Error::Validation("metric entry not finite".into()));
            }
        }
        if !self.is_spd() {
            return Err(Error::Validation(
                "cell metric is not positive definite".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_roundtrip() {
        let m = CellMetric::identity(3);
        assert_eq!(m.get(0, 0), 1.0);
        assert_eq!(m.get(0, 2), 0.0);
        assert_eq!(m.det(), 1.0);
        assert!(m.is_spd());
    }

    #[test]
    fn scaled_det() {
        let m = CellMetric::scaled_identity(3, 4.0);
        assert!((m.det() - 64.0).abs() < 1e-12);
        assert!((m.sqrt_det() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn non_spd_detected() {
        let m = CellMetric::from_upper(2, vec![1.0, 2.0, 1.0]).unwrap();
        assert!(!m.is_spd());
        assert!(m.validate().is_err());
    }

    #[test]
    fn inv_inner_matches_solve() {
        let m = CellMetric::from_upper(3, vec![2.0, 0.5, 0.1, 3.0, 0.2, 1.5]).unwrap();
        let a = [1.0, -2.0, 0.5];
        let x = m.solve(&a).unwrap();
        // G x = a
        let g = m.full();
        for i in 0..3 {
            let mut s = 0.0;
            for j in 0..3 {
                s += g[i * 3 + j] * x[j];
            }
            assert!((s - a[i]).abs() < 1e-12);
        }
        let q = m.inv_inner(&a, &a);
        assert!(q > 0.0);
    }
}
