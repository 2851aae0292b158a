//! Incremental row echelon forms over an exact field.
//!
//! Rows are inserted one at a time and fully reduced against the existing
//! pivots, so the pivot columns only depend on the insertion order. Each row
//! may carry a tag vector that records how it was combined; this turns the
//! echelon form into a reusable factorization for solving linear systems.

use std::collections::HashMap;

use num_traits::Zero;

use super::field::{Elem, Field};
use super::sparse::{self, SVec};

#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    cols: usize,
    rows: Vec<SVec>,
    tags: Vec<SVec>,
    pivot_of_col: HashMap<usize, usize>,
    null_tags: Vec<SVec>,
    reduced: bool,
}

/// Outcome of inserting a row.
pub enum Inserted {
    /// The row became a new pivot row with this leading column.
    Pivot(usize),
    /// The row was dependent; the tag records the dependency.
    Dependent(SVec),
}

impl Echelon {
    pub fn new(field: Field, cols: usize) -> Self {
        Echelon {
            field,
            cols,
            rows: Vec::new(),
            tags: Vec::new(),
            pivot_of_col: HashMap::new(),
            null_tags: Vec::new(),
            reduced: true,
        }
    }

    /// Echelon form of the given rows, without tags.
    pub fn of_rows<I: IntoIterator<Item = SVec>>(field: Field, cols: usize, rows: I) -> Self {
        let mut e = Echelon::new(field, cols);
        for r in rows {
            e.insert(r, Vec::new());
        }
        e
    }

    /// Echelon form in which row `i` carries the tag `e_i`.
    pub fn of_rows_tracked<I: IntoIterator<Item = SVec>>(field: Field, cols: usize, rows: I) -> Self {
        let mut e = Echelon::new(field, cols);
        for (i, r) in rows.into_iter().enumerate() {
            e.insert(r, sparse::unit(i));
        }
        e
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col.contains_key(&col)
    }

    /// Leading columns, in insertion order.
    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn pivot_rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn pivot_tags(&self) -> &[SVec] {
        &self.tags
    }

    pub fn null_tags(&self) -> &[SVec] {
        &self.null_tags
    }

    /// Reduces `row` against the pivots, returning the remainder and the
    /// combination (in tag space) that was subtracted.
    pub fn reduce(&self, row: SVec) -> (SVec, SVec) {
        self.reduce_with(row, Vec::new())
    }

    fn reduce_with(&self, mut row: SVec, mut tag: SVec) -> (SVec, SVec) {
        let f = &self.field;
        let mut pos = 0;
        while pos < row.len() {
            let (c, x) = (row[pos].0, row[pos].1.clone());
            if let Some(&p) = self.pivot_of_col.get(&c) {
                let coef = f.neg(&x);
                row = sparse::axpy(f, &row, &coef, &self.rows[p]);
                if !self.tags[p].is_empty() {
                    tag = sparse::axpy(f, &tag, &coef, &self.tags[p]);
                }
                pos = row.partition_point(|(i, _)| *i <= c);
            } else {
                pos += 1;
            }
        }
        (row, tag)
    }

    pub fn insert(&mut self, row: SVec, tag: SVec) -> Inserted {
        debug_assert!(row.iter().all(|(i, _)| *i < self.cols));
        let (row, tag) = self.reduce_with(row, tag);
        if row.is_empty() {
            self.null_tags.push(tag.clone());
            return Inserted::Dependent(tag);
        }
        let f = self.field;
        let inv = f.inv(&row[0].1);
        let row = sparse::scale(&f, &inv, &row);
        let tag = sparse::scale(&f, &inv, &tag);
        let lead = row[0].0;
        if row.len() > 1 {
            self.reduced = false;
        }
        self.pivot_of_col.insert(lead, self.rows.len());
        self.rows.push(row);
        self.tags.push(tag);
        Inserted::Pivot(lead)
    }

    /// True when `row` lies in the row space.
    pub fn contains(&self, row: &SVec) -> bool {
        self.reduce(row.clone()).0.is_empty()
    }

    /// Brings the pivot rows into reduced row echelon form.
    pub fn make_reduced(&mut self) {
        if self.reduced {
            return;
        }
        let f = self.field;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&p| std::cmp::Reverse(self.rows[p][0].0));
        for &p in &order {
            let lead = self.rows[p][0].0;
            let mut row = std::mem::take(&mut self.rows[p]);
            let mut tag = std::mem::take(&mut self.tags[p]);
            let mut pos = 1;
            while pos < row.len() {
                let (c, x) = (row[pos].0, row[pos].1.clone());
                match self.pivot_of_col.get(&c) {
                    Some(&q) if q != p => {
                        // q has a larger lead and is already fully reduced.
                        let coef = f.neg(&x);
                        row = sparse::axpy(&f, &row, &coef, &self.rows[q]);
                        if !self.tags[q].is_empty() {
                            tag = sparse::axpy(&f, &tag, &coef, &self.tags[q]);
                        }
                        pos = row.partition_point(|(i, _)| *i <= c);
                    }
                    _ => pos += 1,
                }
            }
            debug_assert_eq!(row[0].0, lead);
            self.rows[p] = row;
            self.tags[p] = tag;
        }
        self.reduced = true;
    }

    /// Basis of `{x : row · x = 0 for every inserted row}`, one vector per
    /// non-pivot column, ordered by that column.
    pub fn kernel_basis(&mut self) -> Vec<SVec> {
        self.make_reduced();
        let f = self.field;
        let mut by_free: HashMap<usize, Vec<(usize, Elem)>> = HashMap::new();
        for r in &self.rows {
            let lead = r[0].0;
            for (c, x) in &r[1..] {
                by_free.entry(*c).or_default().push((lead, f.neg(x)));
            }
        }
        (0..self.cols)
            .filter(|c| !self.pivot_of_col.contains_key(c))
            .map(|c| {
                let mut items = by_free.remove(&c).unwrap_or_default();
                items.push((c, f.one()));
                sparse::collect(&f, items)
            })
            .collect()
    }

    /// Solves `M x = b` where the rows of `M` were inserted with unit tags.
    /// Returns `None` when `b` is outside the column space of `M`.
    pub fn solve(&self, b: &SVec) -> Option<SVec> {
        let f = self.field;
        if self.null_tags.iter().any(|t| !sparse::dot(&f, t, b).is_zero()) {
            return None;
        }
        let rhs: Vec<Elem> = self.tags.iter().map(|t| sparse::dot(&f, t, b)).collect();
        Some(self.back_substitute(rhs))
    }

    /// Solution with all free variables zero, given right-hand sides per pivot row.
    fn back_substitute(&self, rhs: Vec<Elem>) -> SVec {
        let f = self.field;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&p| std::cmp::Reverse(self.rows[p][0].0));
        let mut x: HashMap<usize, Elem> = HashMap::new();
        for p in order {
            let r = &self.rows[p];
            let mut v = rhs[p].clone();
            for (c, a) in &r[1..] {
                if let Some(xc) = x.get(c) {
                    v = f.sub(&v, &f.mul(a, xc));
                }
            }
            if !v.is_zero() {
                x.insert(r[0].0, v);
            }
        }
        let mut out: SVec = x.into_iter().collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn kernel_of_rank_one() {
        let q = Field::Rationals;
        let m = Matrix::from_i64_rows(q, &[&[1, 2], &[2, 4]]);
        let mut e = Echelon::of_rows(q, 2, m.row_vectors());
        assert_eq!(e.rank(), 1);
        let k = e.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).is_empty());
    }

    #[test]
    fn tracked_solve() {
        let q = Field::Rationals;
        let m = Matrix::from_i64_rows(q, &[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]]);
        let e = Echelon::of_rows_tracked(q, 3, m.row_vectors());
        let b = sparse::from_dense(&[q.from_i64(1), q.from_i64(2), q.from_i64(3)]);
        let x = e.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        let bad = sparse::from_dense(&[q.from_i64(1), q.from_i64(2), q.from_i64(4)]);
        assert!(e.solve(&bad).is_none());
    }
}
