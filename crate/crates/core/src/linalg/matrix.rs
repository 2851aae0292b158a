//! Sparse matrices stored by columns.
//!
//! Column `j` is the image of the `j`-th basis vector, which is the natural
//! shape for the linear maps assembled throughout the crate.

use num_traits::Zero;

use super::field::{Elem, Field};
use super::sparse::{self, SVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    columns: Vec<SVec>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let columns = (0..n).map(sparse::unit).collect();
        Matrix { field, rows: n, cols: n, columns }
    }

    /// Builds a matrix from its columns; entries are assumed canonical.
    pub fn from_columns(field: Field, rows: usize, columns: Vec<SVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.iter().all(|(i, x)| *i < rows && !x.is_zero())));
        Matrix { field, rows, cols: columns.len(), columns }
    }

    /// Builds a matrix from dense row-major entries.
    pub fn from_dense_rows(field: Field, rows: usize, cols: usize, data: &[Vec<Elem>]) -> Self {
        assert_eq!(data.len(), rows, "row count");
        let mut columns = vec![Vec::new(); cols];
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "column count");
            for (j, x) in row.iter().enumerate() {
                let x = field.norm(x.clone());
                if !x.is_zero() {
                    columns[j].push((i, x));
                }
            }
        }
        Matrix { field, rows, cols, columns }
    }

    pub fn from_i64_rows(field: Field, data: &[&[i64]]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Elem>> =
            data.iter().map(|r| r.iter().map(|v| field.from_i64(*v)).collect()).collect();
        Self::from_dense_rows(field, rows, cols, &dense)
    }

    /// Builds a matrix from its rows given as sparse vectors.
    pub fn from_rows(field: Field, cols: usize, rows: &[SVec]) -> Self {
        let mut columns = vec![Vec::new(); cols];
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r {
                columns[*j].push((i, x.clone()));
            }
        }
        Matrix { field, rows: rows.len(), cols, columns }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SVec] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        sparse::get(&self.columns[j], i)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(j, c)| c.len() == 1 && c[0].0 == j && c[0].1 == self.field.one())
    }

    /// `self * v`.
    pub fn apply(&self, v: &SVec) -> SVec {
        let f = &self.field;
        let mut items = Vec::new();
        for (j, x) in v {
            for (i, y) in &self.columns[*j] {
                items.push((*i, f.mul(x, y)));
            }
        }
        sparse::collect(f, items)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        Matrix { field: self.field, rows: self.rows, cols: other.cols, columns }
    }

    pub fn transpose(&self) -> Matrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, x) in c {
                columns[*i].push((j, x.clone()));
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, columns }
    }

    /// Rows as sparse vectors.
    pub fn row_vectors(&self) -> Vec<SVec> {
        self.transpose().columns
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.axpy(&self.field.one(), other)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.axpy(&self.field.from_i64(-1), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Elem, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sum");
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| sparse::axpy(&self.field, a, c, b))
            .collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, columns }
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        let columns = self.columns.iter().map(|a| sparse::scale(&self.field, c, a)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, columns }
    }

    /// Kronecker product. The basis vector for the pair `(i, j)` has index
    /// `i * dim_b + j`; every tensor construction in the crate uses this order.
    pub fn kron(&self, b: &Matrix) -> Matrix {
        let f = &self.field;
        let mut columns = Vec::with_capacity(self.cols * b.cols);
        for ca in &self.columns {
            for cb in &b.columns {
                columns.push(sparse::kron(f, ca, cb, b.rows));
            }
        }
        Matrix { field: self.field, rows: self.rows * b.rows, cols: self.cols * b.cols, columns }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, b: &Matrix) -> Matrix {
        let mut columns = self.columns.clone();
        columns.extend(b.columns.iter().map(|c| sparse::offset(c, self.rows)));
        Matrix { field: self.field, rows: self.rows + b.rows, cols: self.cols + b.cols, columns }
    }

    /// Columns `start..start+len`.
    pub fn column_range(&self, start: usize, len: usize) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: len,
            columns: self.columns[start..start + len].to_vec(),
        }
    }

    /// Rows `start..start+len`.
    pub fn row_range(&self, start: usize, len: usize) -> Matrix {
        let columns = self.columns.iter().map(|c| sparse::slice(c, start, len)).collect();
        Matrix { field: self.field, rows: len, cols: self.cols, columns }
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![vec![Elem::zero(); self.cols]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, x) in c {
                out[i.to_owned()][j] = x.clone();
            }
        }
        out
    }

    /// Entries rendered as strings, row-major.
    pub fn render_rows(&self) -> Vec<Vec<String>> {
        self.to_dense_rows()
            .iter()
            .map(|r| r.iter().map(|x| self.field.render(x)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_row_times_column() {
        let q = Field::Rationals;
        let a = Matrix::from_i64_rows(q, &[&[1, 1]]);
        let b = Matrix::from_i64_rows(q, &[&[1], &[2]]);
        // (1x2) ⊗ (2x1) = 2x2 with entry ((i,k),(j,l)) = a_ij b_kl.
        let k = a.kron(&b);
        assert_eq!(k, Matrix::from_i64_rows(q, &[&[1, 1], &[2, 2]]));
    }

    #[test]
    fn product_and_transpose() {
        let q = Field::Rationals;
        let a = Matrix::from_i64_rows(q, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64_rows(q, &[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_i64_rows(q, &[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), Matrix::from_i64_rows(q, &[&[1, 3], &[2, 4]]));
    }
}
