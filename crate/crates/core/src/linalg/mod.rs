//! Exact linear algebra over the rationals and prime fields.

mod echelon;
mod field;
mod matrix;
pub mod sparse;

pub use echelon::{Echelon, Inserted};
pub use field::{Elem, Field};
pub use matrix::Matrix;
pub use sparse::SVec;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no solution")]
    NoSolution,
    #[error("matrix is not invertible")]
    Singular,
}

pub fn rank(m: &Matrix) -> usize {
    // Inserting columns (as rows of the transpose) keeps the work proportional
    // to the stored entries.
    Echelon::of_rows(m.field(), m.rows(), m.columns().iter().cloned()).rank()
}

/// Basis of the kernel; `rank(m) + kernel_basis(m).len() == m.cols()`.
pub fn kernel_basis(m: &Matrix) -> Vec<SVec> {
    Echelon::of_rows(m.field(), m.cols(), m.row_vectors()).kernel_basis()
}

/// Solves `m x = b`, distinguishing an inconsistent system from a shape error.
pub fn solve(m: &Matrix, b: &SVec, b_dim: usize) -> Result<SVec, LinalgError> {
    if b_dim != m.rows() {
        return Err(LinalgError::DimensionMismatch { expected: m.rows(), got: b_dim });
    }
    Solver::new(m).solve(b).ok_or(LinalgError::NoSolution)
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kron(b)
}

/// Reusable factorization of a fixed matrix for many right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver {
    echelon: Echelon,
    cols: usize,
}

impl Solver {
    pub fn new(m: &Matrix) -> Self {
        Solver { echelon: Echelon::of_rows_tracked(m.field(), m.cols(), m.row_vectors()), cols: m.cols() }
    }

    pub fn solve(&self, b: &SVec) -> Option<SVec> {
        self.echelon.solve(b)
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Inverse of a square matrix.
pub fn inverse(m: &Matrix) -> Result<Matrix, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::DimensionMismatch { expected: m.rows(), got: m.cols() });
    }
    let s = Solver::new(m);
    if s.rank() != m.rows() {
        return Err(LinalgError::Singular);
    }
    let columns = (0..m.rows()).map(|i| s.solve(&sparse::unit(i)).expect("full rank")).collect();
    Ok(Matrix::from_columns(m.field(), m.rows(), columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(q(), 2)), 2);
        assert_eq!(rank(&Matrix::zeros(q(), 3, 4)), 0);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(rank(&Matrix::from_i64_rows(f5, &[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(q(), 3)).is_empty());
        assert_eq!(kernel_basis(&Matrix::zeros(q(), 2, 3)).len(), 3);
        let m = Matrix::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        // proportional to (2, -1)
        let v = sparse::to_dense(&k[0], 2);
        assert_eq!(q().mul(&v[0], &q().from_i64(-1)), q().mul(&v[1], &q().from_i64(2)));
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(q(), 2);
        let b = sparse::from_dense(&[q().from_i64(3), q().from_i64(-1)]);
        assert_eq!(solve(&id, &b, 2).unwrap(), b);
        assert_eq!(solve(&Matrix::zeros(q(), 2, 2), &b, 2), Err(LinalgError::NoSolution));
        let m = Matrix::from_i64_rows(q(), &[&[2, 0], &[0, 3]]);
        let one = sparse::from_dense(&[q().from_i64(1), q().from_i64(1)]);
        let x = solve(&m, &one, 2).unwrap();
        assert_eq!(x, vec![(0, q().parse("1/2").unwrap()), (1, q().parse("1/3").unwrap())]);
        assert!(matches!(solve(&m, &one, 3), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn kron_examples() {
        assert_eq!(Matrix::identity(q(), 2).kron(&Matrix::identity(q(), 3)), Matrix::identity(q(), 6));
        let a = Matrix::from_i64_rows(q(), &[&[1, 2], &[3, 4]]);
        assert!(a.kron(&Matrix::zeros(q(), 2, 2)).is_zero());
        // [[1,1]] ⊗ [[1],[2]]: column-major entries read 1,2,1,2.
        let k = Matrix::from_i64_rows(q(), &[&[1, 1]]).kron(&Matrix::from_i64_rows(q(), &[&[1], &[2]]));
        let flat: Vec<i64> = (0..k.cols())
            .flat_map(|j| (0..k.rows()).map(move |i| (i, j)))
            .map(|(i, j)| q().to_i64(&k.get(i, j)).unwrap())
            .collect();
        assert_eq!(flat, vec![1, 2, 1, 2]);
    }

    fn small_matrix(p: Option<u64>) -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                let f = p.map_or(Field::Rationals, |p| Field::prime(p).unwrap());
                let rows: Vec<Vec<Elem>> =
                    v.chunks(c).map(|ch| ch.iter().map(|x| f.from_i64(*x)).collect()).collect();
                Matrix::from_dense_rows(f, r, c, &rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix(None)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.apply(v).is_empty());
            }
            let mut e = Echelon::of_rows(m.field(), m.cols(), k.clone());
            prop_assert_eq!(e.kernel_basis().len(), m.cols() - k.len());
        }

        #[test]
        fn rank_nullity_mod_3(m in small_matrix(Some(3))) {
            prop_assert_eq!(rank(&m) + kernel_basis(&m).len(), m.cols());
        }

        #[test]
        fn solve_is_exact(m in small_matrix(None), seed in proptest::collection::vec(-2i64..3, 5)) {
            let f = m.field();
            let x0: SVec = sparse::from_dense(&seed[..m.cols()].iter().map(|v| f.from_i64(*v)).collect::<Vec<_>>());
            let b = m.apply(&x0);
            let x = solve(&m, &b, m.rows()).unwrap();
            prop_assert_eq!(m.apply(&x), b);
        }

        #[test]
        fn no_solution_means_rank_jump(m in small_matrix(None), seed in proptest::collection::vec(-2i64..3, 5)) {
            let f = m.field();
            let b: SVec = sparse::from_dense(&seed[..m.rows()].iter().map(|v| f.from_i64(*v)).collect::<Vec<_>>());
            let mut cols = m.columns().to_vec();
            cols.push(b.clone());
            let aug = Matrix::from_columns(f, m.rows(), cols);
            match solve(&m, &b, m.rows()) {
                Ok(x) => prop_assert_eq!(m.apply(&x), b),
                Err(_) => prop_assert!(rank(&aug) > rank(&m)),
            }
        }

        #[test]
        fn kron_associative(a in small_matrix(None), b in small_matrix(None), c in small_matrix(None)) {
            prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
        }
    }
}
