//! Tensor products over an algebra, computed as cokernels of the
//! middle-action relations.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Complex, ComplexError};
use crate::algebra::{base_field, Bimodule};
use crate::linalg::{Echelon, Field, Matrix, SVec};

/// `V / span(relations)` with the basis given by the non-pivot columns of the
/// reduced echelon form of the relations.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub raw_dim: usize,
    /// Raw coordinates of the quotient basis vectors.
    pub basis: Vec<usize>,
    /// Projection, `dim × raw_dim`.
    pub pi: Matrix,
    /// Section sending each quotient basis vector to its raw basis vector.
    pub sigma: Matrix,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Induced map `π ∘ m ∘ σ'` for `m` between raw spaces.
    pub fn induce(&self, m: &Matrix, source: &Quotient) -> Matrix {
        self.pi.mul(&m.mul(&source.sigma))
    }
}

pub fn quotient_by_relations<I: IntoIterator<Item = SVec>>(f: Field, raw_dim: usize, relations: I) -> Quotient {
    let mut e = Echelon::of_rows(f, raw_dim, relations.into_iter().filter(|r| !r.is_empty()));
    e.make_reduced();
    let mut pos = vec![usize::MAX; raw_dim];
    let basis: Vec<usize> = (0..raw_dim).filter(|c| !e.is_pivot(*c)).collect();
    for (q, c) in basis.iter().enumerate() {
        pos[*c] = q;
    }
    let mut columns: Vec<SVec> = (0..raw_dim)
        .map(|c| if pos[c] != usize::MAX { vec![(pos[c], f.one())] } else { Vec::new() })
        .collect();
    for row in e.pivot_rows() {
        let lead = row[0].0;
        let mut col: SVec = row[1..].iter().map(|(c, x)| (pos[*c], f.neg(x))).collect();
        col.sort_by_key(|(i, _)| *i);
        columns[lead] = col;
    }
    let pi = Matrix::from_columns(f, basis.len(), columns);
    let sigma = Matrix::from_columns(f, raw_dim, basis.iter().map(|c| vec![(*c, f.one())]).collect());
    Quotient { raw_dim, basis, pi, sigma }
}

/// A tensor product complex together with the projections from the raw
/// `⊗_k` terms. Raw term `n` is `⊕_{p+q=n} C_p ⊗_k D_q` with `p` ascending.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub complex: Arc<Complex>,
    pub quotients: BTreeMap<i64, Quotient>,
    /// Per degree, the summands `(p, q, offset)` of the raw term.
    pub layout: BTreeMap<i64, Vec<(i64, i64, usize)>>,
}

impl TensorProduct {
    /// Offset of the `(p, n-p)` summand in raw term `n`.
    pub fn offset(&self, n: i64, p: i64) -> Option<usize> {
        self.layout.get(&n)?.iter().find(|(pp, _, _)| *pp == p).map(|(_, _, o)| *o)
    }

    /// Projects the raw element `u ⊗ v` (`u ∈ C_p`, `v ∈ D_q`) to the quotient.
    pub fn project(&self, p: i64, q: i64, u: &SVec, v: &SVec, dim_v: usize) -> SVec {
        let n = p + q;
        let f = self.complex.field();
        let off = self.offset(n, p).expect("summand present");
        let raw = crate::linalg::sparse::offset(&crate::linalg::sparse::kron(&f, u, v, dim_v), off);
        self.quotients[&n].pi.apply(&raw)
    }
}

/// Places blocks into a zero matrix.
pub(crate) fn assemble(f: Field, rows: usize, cols: usize, blocks: &[(usize, usize, &Matrix)]) -> Matrix {
    let mut columns: Vec<Vec<(usize, crate::linalg::Elem)>> = vec![Vec::new(); cols];
    for (r0, c0, m) in blocks {
        for (j, col) in m.columns().iter().enumerate() {
            columns[c0 + j].extend(col.iter().map(|(i, x)| (r0 + i, x.clone())));
        }
    }
    let columns = columns.into_iter().map(|c| crate::linalg::sparse::collect(&f, c)).collect();
    Matrix::from_columns(f, rows, columns)
}

fn trusted_bound(c: &Complex) -> (i64, i64) {
    let (lo, hi) = c.trusted();
    let lo = if lo <= c.lo() { i64::MIN / 4 } else { lo };
    let hi = if hi >= c.hi() { i64::MAX / 4 } else { hi };
    (lo, hi)
}

fn product_trusted(c: &Complex, d: &Complex) -> (i64, i64) {
    let (cl, ch) = trusted_bound(c);
    let (dl, dh) = trusted_bound(d);
    let lo = (cl + d.hi()).max(c.hi() + dl).max(c.lo() + d.lo());
    let hi = (ch + d.lo()).min(c.lo() + dh).min(c.hi() + d.hi());
    (lo, hi)
}

/// `C ⊗_S D` for a complex `C` of `(L, S)`-bimodules and `D` of
/// `(S, R)`-bimodules, with differential `d_C ⊗ 1 + (-1)^p 1 ⊗ d_D`.
pub fn tensor_over(c: &Complex, d: &Complex) -> Result<TensorProduct, ComplexError> {
    if **c.right() != **d.left() {
        return Err(ComplexError::RingMismatch("right ring of the first factor differs from left ring of the second".into()));
    }
    let f = c.field();
    let s = c.right().clone();
    let (lo, hi) = (c.lo() + d.lo(), c.hi() + d.hi());
    let mut layout = BTreeMap::new();
    let mut raw_dims = BTreeMap::new();
    let mut quotients = BTreeMap::new();
    for n in lo..=hi {
        let mut off = 0;
        let mut parts = Vec::new();
        let mut relations = Vec::new();
        for p in c.lo()..=c.hi() {
            let q = n - p;
            if q < d.lo() || q > d.hi() {
                continue;
            }
            let (cp, dq) = (c.term(p).unwrap(), d.term(q).unwrap());
            parts.push((p, q, off));
            let (ic, id) = (Matrix::identity(f, cp.dim()), Matrix::identity(f, dq.dim()));
            for e in 0..s.dim() {
                let rel = cp.right(e).kron(&id).sub(&ic.kron(dq.left(e)));
                relations.extend(rel.columns().iter().map(|col| crate::linalg::sparse::offset(col, off)));
            }
            off += cp.dim() * dq.dim();
        }
        quotients.insert(n, quotient_by_relations(f, off, relations));
        raw_dims.insert(n, off);
        layout.insert(n, parts);
    }
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let qn = &quotients[&n];
        let mut lefts = Vec::new();
        let mut rights = Vec::new();
        for e in 0..c.left().dim() {
            let blocks: Vec<Matrix> = layout[&n]
                .iter()
                .map(|(p, q, _)| c.term(*p).unwrap().left(e).kron(&Matrix::identity(f, d.dim(*q))))
                .collect();
            lefts.push(qn.induce(&super::block_diagonal(f, &blocks), qn));
        }
        for e in 0..d.right().dim() {
            let blocks: Vec<Matrix> = layout[&n]
                .iter()
                .map(|(p, q, _)| Matrix::identity(f, c.dim(*p)).kron(d.term(*q).unwrap().right(e)))
                .collect();
            rights.push(qn.induce(&super::block_diagonal(f, &blocks), qn));
        }
        terms.push(
            Bimodule::new(c.left().clone(), d.right().clone(), qn.dim(), lefts, rights)
                .map_err(|e| ComplexError::Shape(e.to_string()))?,
        );
        if n == lo {
            diffs.push(Matrix::zeros(f, 0, qn.dim()));
            continue;
        }
        let below = &layout[&(n - 1)];
        let find = |p: i64| below.iter().find(|(pp, _, _)| *pp == p).map(|(_, _, o)| *o);
        let mut blocks = Vec::new();
        let mut owned = Vec::new();
        for (p, q, off) in &layout[&n] {
            if let Some(o) = find(p - 1) {
                owned.push((o, *off, c.diff(*p).kron(&Matrix::identity(f, d.dim(*q)))));
            }
            if let Some(o) = find(*p) {
                owned.push((o, *off, Matrix::identity(f, c.dim(*p)).kron(&d.diff(*q)).scale(&f.sign(*p))));
            }
        }
        for (r, col, m) in &owned {
            blocks.push((*r, *col, m));
        }
        let raw = assemble(f, raw_dims[&(n - 1)], raw_dims[&n], &blocks);
        diffs.push(quotients[&(n - 1)].induce(&raw, qn));
    }
    let (tlo, thi) = product_trusted(c, d);
    let complex = Complex::with_rings(c.left().clone(), d.right().clone(), lo, terms, diffs)?.set_trusted(tlo, thi);
    Ok(TensorProduct { complex: Arc::new(complex), quotients, layout })
}

/// `M ⊗_{A^e} W` for an `A`-bimodule `M` and a complex `W` of
/// `A`-bimodules: the quotient of `M ⊗_k W_n` by `m·a ⊗ w - m ⊗ a·w` and
/// `a·m ⊗ w - m ⊗ w·a`. The result is a complex of vector spaces.
pub fn tensor_over_enveloping(m: &Bimodule, w: &Complex) -> Result<TensorProduct, ComplexError> {
    let a = m.left_algebra();
    if **a != **m.right_algebra() || **w.left() != **a || **w.right() != **a {
        return Err(ComplexError::RingMismatch("enveloping tensor needs bimodules over one algebra".into()));
    }
    let f = m.field();
    let k = Arc::new(base_field(f));
    let im = Matrix::identity(f, m.dim());
    let mut quotients: BTreeMap<i64, Quotient> = BTreeMap::new();
    let mut layout = BTreeMap::new();
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in w.lo()..=w.hi() {
        let wn = w.term(n).unwrap();
        let iw = Matrix::identity(f, wn.dim());
        let mut relations = Vec::new();
        for e in 0..a.dim() {
            let r1 = m.right(e).kron(&iw).sub(&im.kron(wn.left(e)));
            let r2 = m.left(e).kron(&iw).sub(&im.kron(wn.right(e)));
            relations.extend(r1.columns().iter().cloned());
            relations.extend(r2.columns().iter().cloned());
        }
        let qn = quotient_by_relations(f, m.dim() * wn.dim(), relations);
        let id = Matrix::identity(f, qn.dim());
        terms.push(Bimodule::new(k.clone(), k.clone(), qn.dim(), vec![id.clone()], vec![id]).unwrap());
        if n == w.lo() {
            diffs.push(Matrix::zeros(f, 0, qn.dim()));
        } else {
            let raw = im.kron(&w.diff(n));
            diffs.push(quotients[&(n - 1)].induce(&raw, &qn));
        }
        quotients.insert(n, qn);
        layout.insert(n, vec![(0, n, 0)]);
    }
    let complex = Complex::with_rings(k.clone(), k, w.lo(), terms, diffs)?.set_trusted(w.trusted().0, w.trusted().1);
    Ok(TensorProduct { complex: Arc::new(complex), quotients, layout })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dual_numbers, matrix_algebra, regular_bimodule};

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn quotient_projection_kills_relations() {
        let rel = vec![vec![(0, q().one()), (2, q().from_i64(-1))]];
        let quo = quotient_by_relations(q(), 3, rel.clone());
        assert_eq!(quo.dim(), 2);
        assert!(quo.pi.apply(&rel[0]).is_empty());
        assert!(quo.pi.mul(&quo.sigma).is_identity());
    }

    #[test]
    fn tensor_with_ring_preserves_dims() {
        let a = Arc::new(dual_numbers(q()));
        let ra = Complex::concentrated(regular_bimodule(&a), 0);
        let per = {
            let r = regular_bimodule(&a);
            let two_x = a.right_mult(1).scale(&q().from_i64(2));
            Complex::two_term(r.clone(), r, two_x).unwrap()
        };
        let t = tensor_over(&ra, &per).unwrap();
        for n in 0..=1 {
            assert_eq!(t.complex.dim(n), per.dim(n));
        }
        assert_eq!(t.complex.homology_dims(), per.homology_dims());
        let t2 = tensor_over(&per, &ra).unwrap();
        assert_eq!(t2.complex.homology_dims(), per.homology_dims());
    }

    #[test]
    fn tensor_of_two_term_complexes_over_field() {
        let k = Arc::new(base_field(q()));
        let kk = regular_bimodule(&k).direct_sum(&regular_bimodule(&k));
        let c = Complex::two_term(kk.clone(), kk.clone(), Matrix::identity(q(), 2)).unwrap();
        let t = tensor_over(&c, &c).unwrap();
        assert_eq!((t.complex.dim(0), t.complex.dim(1), t.complex.dim(2)), (4, 8, 4));
        assert_eq!(t.complex.homology_dims(), vec![(0, 0), (1, 0), (2, 0)]);
    }

    #[test]
    fn matrix_algebra_enveloping_tensor() {
        // M_2 ⊗_{M_2^e} M_2 is one-dimensional (HH_0 of a separable algebra).
        let m2 = Arc::new(matrix_algebra(2, q()));
        let r = regular_bimodule(&m2);
        let t = tensor_over_enveloping(&r, &Complex::concentrated(r.clone(), 0)).unwrap();
        assert_eq!(t.complex.dim(0), 1);
    }
}
