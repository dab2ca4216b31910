use crate::error::{Error, Result};

/// Symmetric sparse matrix in compressed sparse row layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    pub dim: usize,
    pub row_offsets: Vec<usize>,
    pub column_indices: Vec<usize>,
    pub values: Vec<f64>,
    pub symmetric: bool,
}

impl SparseOperator {
    /// Diagonal operator.
    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        SparseOperator {
            dim: n,
            row_offsets: (0..=n).collect(),
            column_indices: (0..n).collect(),
            values: diag.to_vec(),
            symmetric: true,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for i in 0..self.dim {
            let mut s = 0.0;
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                s += self.values[k] * x[self.column_indices[k]];
            }
            y[i] = s;
        }
        y
    }

    pub fn diag(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for i in 0..self.dim {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                if self.column_indices[k] == i {
                    d[i] = self.values[k];
                }
            }
        }
        d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        for k in self.row_offsets[i]..self.row_offsets[i + 1] {
            if self.column_indices[k] == j {
                return self.values[k];
            }
        }
        0.0
    }

    /// Entry-wise scaling.
    pub fn scaled(&self, t: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= t;
        }
        out
    }

    /// Sum of two operators on the same index space.
    pub fn add(&self, other: &SparseOperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut b = TripletBuilder::new(self.dim);
        for (op, _) in [(self, 0), (other, 1)] {
            for i in 0..op.dim {
                for k in op.row_offsets[i]..op.row_offsets[i + 1] {
                    b.push(i, op.column_indices[k], op.values[k]);
                }
            }
        }
        let mut sum = b.build();
        sum.symmetric = self.symmetric && other.symmetric;
        Ok(sum)
    }

    /// Entry-wise maximum absolute value.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Verify the symmetry invariant |A_ij - A_ji| <= tol * max|A|.
    pub fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        let tol = rel_tol * self.max_abs().max(1e-300);
        for i in 0..self.dim {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                let j = self.column_indices[k];
                let diff = (self.values[k] - self.get(j, i)).abs();
                if diff > tol {
                    return Err(Error::Validation(format!(
                        "operator not symmetric at ({i},{j}): asymmetry {diff:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Submatrix on a sorted index subset (Dirichlet restriction).
    pub fn restrict(&self, keep: &[usize]) -> SparseOperator {
        let mut pos = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = new;
        }
        let mut b = TripletBuilder::new(keep.len());
        for (new_i, &old_i) in keep.iter().enumerate() {
            for k in self.row_offsets[old_i]..self.row_offsets[old_i + 1] {
                let old_j = self.column_indices[k];
                if pos[old_j] != usize::MAX {
                    b.push(new_i, pos[old_j], self.values[k]);
                }
            }
        }
        let mut out = b.build();
        out.symmetric = self.symmetric;
        out
    }

    /// Dense row-major expansion (small systems and debug output only).
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                d[i * n + self.column_indices[k]] += self.values[k];
            }
        }
        d
    }

    /// (row, col, value) triplet listing for debug dumps, in row-major order.
    pub fn to_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.dim {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                t.push((i, self.column_indices[k], self.values[k]));
            }
        }
        t
    }
}

/// Accumulates (row, col, value) contributions and builds a CSR matrix with
/// deterministic index-ordered summation, so assembly results are identical
/// across runs regardless of insertion order.
#[derive(Debug)]
pub struct TripletBuilder {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(dim: usize) -> Self {
        TripletBuilder {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.dim && col < self.dim);
        if value != 0.0 {
            self.entries.push((row, col, value));
        }
    }

    /// Push the (i, j) and (j, i) entries of a symmetric contribution.
    pub fn push_sym(&mut self, i: usize, j: usize, value: f64) {
        self.push(i, j, value);
        if i != j {
            self.push(j, i, value);
        }
    }

    pub fn build(mut self) -> SparseOperator {
        // stable sort by (row, col); duplicates are then summed in insertion
        // order, which makes the result independent of push order
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_offsets = vec![0usize];
        let mut column_indices: Vec<usize> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut row = 0usize;
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            while row < r {
                row_offsets.push(values.len());
                row += 1;
            }
            column_indices.push(c);
            values.push(v);
            last = Some((r, c));
        }
        while row < self.dim {
            row_offsets.push(values.len());
            row += 1;
        }
        SparseOperator {
            dim: self.dim,
            row_offsets,
            column_indices,
            values,
            symmetric: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_sums_duplicates() {
        let mut b = TripletBuilder::new(3);
        b.push(0, 1, 1.0);
        b.push(2, 2, 4.0);
        b.push(0, 1, 2.0);
        b.push(1, 0, 3.0);
        let m = b.build();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(2, 2), 4.0);
        assert_eq!(m.get(0, 0), 0.0);
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn matvec_matches_dense() {
        let mut b = TripletBuilder::new(3);
        b.push_sym(0, 1, 2.0);
        b.push_sym(1, 2, -1.0);
        b.push(0, 0, 5.0);
        b.push(1, 1, 5.0);
        b.push(2, 2, 5.0);
        let m = b.build();
        let x = vec![1.0, 2.0, 3.0];
        let y = m.matvec(&x);
        let d = m.to_dense();
        for i in 0..3 {
            let mut s = 0.0;
            for j in 0..3 {
                s += d[i * 3 + j] * x[j];
            }
            assert!((y[i] - s).abs() < 1e-15);
        }
    }

    #[test]
    fn restrict_keeps_submatrix() {
        let mut b = TripletBuilder::new(4);
        for i in 0..4 {
            b.push(i, i, (i + 1) as f64);
        }
        b.push_sym(0, 3, 7.0);
        b.push_sym(1, 2, 9.0);
        let m = b.build();
        let r = m.restrict(&[1, 3]);
        assert_eq!(r.dim, 2);
        assert_eq!(r.get(0, 0), 2.0);
        assert_eq!(r.get(1, 1), 4.0);
        assert_eq!(r.get(0, 1), 0.0);
    }

    #[test]
    fn deterministic_assembly() {
        let mut b1 = TripletBuilder::new(3);
        let mut b2 = TripletBuilder::new(3);
        let seq = [(0, 0, 0.1), (1, 1, 0.2), (0, 1, 0.3), (1, 0, 0.3), (2, 2, 0.4)];
        for &(r, c, v) in &seq {
            b1.push(r, c, v);
        }
        for &(r, c, v) in seq.iter().rev() {
            b2.push(r, c, v);
        }
        let m1 = b1.build();
        let m2 = b2.build();
        // same sparsity and, for non-cancelling sums, identical values
        assert_eq!(m1.row_offsets, m2.row_offsets);
        assert_eq!(m1.column_indices, m2.column_indices);
        for (a, b) in m1.values.iter().zip(&m2.values) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
