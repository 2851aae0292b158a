//! Iterated two-sided bar constructions
//! `B(M_0, S_1, M_1, ..., S_k, M_k) = M_0 ⊗ S_1^{⊗a_1} ⊗ M_1 ⊗ ... ⊗ M_k`
//! with the total (Koszul-signed) differential.
//!
//! Each `M_j` is a bounded complex of `(S_j, S_{j+1})`-bimodules. A summand
//! of the degree-`n` term is indexed by its key `[i_0, a_1, i_1, ..., a_k, i_k]`
//! (internal degrees `i_j`, bar lengths `a_j`), summands are ordered by key,
//! and inside a summand the basis is the kron order of the factors.

use std::collections::HashMap;
use std::sync::Arc;

use std::collections::BTreeMap;

use super::free::FreeComplex;
use super::tensor::{tensor_over, TensorProduct};
use super::{ChainMap, Complex, ComplexError};
use crate::algebra::{Algebra, Bimodule};
use crate::linalg::{sparse, Elem, Field, Matrix};

type Key = Vec<i64>;

#[derive(Clone, Debug)]
struct Summand {
    key: Key,
    dims: Vec<usize>,
    offset: usize,
    size: usize,
}

#[derive(Clone, Debug)]
struct Layout {
    summands: Vec<Summand>,
    index: HashMap<Key, usize>,
    dim: usize,
}

impl Layout {
    fn locate(&self, idx: usize) -> (usize, Vec<usize>) {
        let s = self.summands.partition_point(|s| s.offset + s.size <= idx);
        let sm = &self.summands[s];
        let mut rem = idx - sm.offset;
        let mut tuple = vec![0; sm.dims.len()];
        for p in (0..sm.dims.len()).rev() {
            tuple[p] = rem % sm.dims[p];
            rem /= sm.dims[p];
        }
        (s, tuple)
    }

    fn encode(&self, key: &Key, tuple: &[usize]) -> Option<usize> {
        let s = &self.summands[*self.index.get(key)?];
        let mut idx = 0;
        for (t, d) in tuple.iter().zip(&s.dims) {
            idx = idx * d + t;
        }
        Some(s.offset + idx)
    }
}

#[derive(Clone, Debug)]
pub struct IteratedBar {
    pieces: Vec<Arc<Complex>>,
    rings: Vec<Arc<Algebra>>,
    field: Field,
}

impl IteratedBar {
    /// `pieces = [M_0, ..., M_k]`; the bar segments are over the rings
    /// between consecutive pieces.
    pub fn new(pieces: Vec<Arc<Complex>>) -> Self {
        assert!(!pieces.is_empty());
        let rings: Vec<Arc<Algebra>> = pieces.windows(2).map(|w| {
            assert!(**w[0].right() == **w[1].left(), "adjacent pieces must share a ring");
            w[0].right().clone()
        }).collect();
        let field = pieces[0].field();
        IteratedBar { pieces, rings, field }
    }

    /// The bar resolution `B(A, A, A)`.
    pub fn bar_of(a: &Arc<Algebra>) -> Self {
        let r = Arc::new(Complex::concentrated(Bimodule::regular(a), 0));
        IteratedBar::new(vec![r.clone(), r])
    }

    /// `B(A, A, W, B, B)`: the two-sided bar replacement of a complex of
    /// `(A, B)`-bimodules.
    pub fn two_sided(w: &Arc<Complex>) -> Self {
        let ra = Arc::new(Complex::concentrated(Bimodule::regular(w.left()), 0));
        let rb = Arc::new(Complex::concentrated(Bimodule::regular(w.right()), 0));
        IteratedBar::new(vec![ra, w.clone(), rb])
    }

    pub fn pieces(&self) -> &[Arc<Complex>] {
        &self.pieces
    }

    pub fn rings(&self) -> &[Arc<Algebra>] {
        &self.rings
    }

    pub fn min_degree(&self) -> i64 {
        self.pieces.iter().map(|p| p.lo()).sum()
    }

    fn keys(&self, n: i64) -> Vec<Key> {
        let k = self.rings.len();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let min_rest: Vec<i64> = (0..=k).map(|j| self.pieces[j..].iter().map(|p| p.lo()).sum()).collect();
        self.keys_rec(0, n, &min_rest, &mut cur, &mut out);
        out.sort();
        out
    }

    fn keys_rec(&self, j: usize, left: i64, min_rest: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Key>) {
        let k = self.rings.len();
        let p = &self.pieces[j];
        for i in p.lo()..=p.hi() {
            if p.dim(i) == 0 {
                continue;
            }
            let rest = left - i;
            if j == k {
                if rest == 0 {
                    cur.push(i);
                    out.push(cur.clone());
                    cur.pop();
                }
                continue;
            }
            let max_a = rest - min_rest[j + 1];
            for a in 0..=max_a.max(-1) {
                cur.push(i);
                cur.push(a);
                self.keys_rec(j + 1, rest - a, min_rest, cur, out);
                cur.pop();
                cur.pop();
            }
        }
    }

    fn dims_of(&self, key: &Key) -> Vec<usize> {
        let k = self.rings.len();
        let mut dims = vec![self.pieces[0].dim(key[0])];
        for j in 1..=k {
            for _ in 0..key[2 * j - 1] {
                dims.push(self.rings[j - 1].dim());
            }
            dims.push(self.pieces[j].dim(key[2 * j]));
        }
        dims
    }

    fn layout(&self, n: i64) -> Layout {
        let mut summands = Vec::new();
        let mut index = HashMap::new();
        let mut offset = 0;
        for key in self.keys(n) {
            let dims = self.dims_of(&key);
            let size: usize = dims.iter().product();
            if size == 0 {
                continue;
            }
            index.insert(key.clone(), summands.len());
            summands.push(Summand { key, dims, offset, size });
            offset += size;
        }
        Layout { summands, index, dim: offset }
    }

    /// Term dimensions for degrees `lo..=hi`, without building anything.
    pub fn term_dims(&self, lo: i64, hi: i64) -> Vec<(i64, usize)> {
        (lo..=hi).map(|n| (n, self.layout(n).dim)).collect()
    }

    /// Boundary of the basis tuple `t` of summand `key`, as terms of the
    /// degree-`n-1` term: `(key, tuple, coefficient)`.
    fn boundary_terms(&self, key: &Key, t: &[usize]) -> Vec<(Key, Vec<usize>, Elem)> {
        let f = self.field;
        let k = self.rings.len();
        let mut out = Vec::new();
        // position of M_j in the factor list
        let mut mpos = vec![0usize; k + 1];
        for j in 1..=k {
            mpos[j] = mpos[j - 1] + key[2 * j - 1] as usize + 1;
        }
        let mut prefix = 0i64;
        for j in 0..=k {
            if j > 0 {
                // bar segment j sits between M_{j-1} and M_j
                let a = key[2 * j - 1] as usize;
                if a > 0 {
                    let sigma = f.sign(prefix);
                    let ring = &self.rings[j - 1];
                    let s0 = mpos[j - 1] + 1;
                    let mut nk = key.clone();
                    nk[2 * j - 1] -= 1;
                    // m_{j-1} · s_1
                    let prev = &self.pieces[j - 1];
                    let act = prev.term(key[2 * (j - 1)]).unwrap().right(t[s0]);
                    for (r, c) in act.column(t[mpos[j - 1]]) {
                        let mut nt = t.to_vec();
                        nt[mpos[j - 1]] = *r;
                        nt.remove(s0);
                        out.push((nk.clone(), nt, f.mul(&sigma, c)));
                    }
                    // s_i s_{i+1}
                    for i in 1..a {
                        let sg = f.mul(&sigma, &f.sign(i as i64));
                        let (p1, p2) = (s0 + i - 1, s0 + i);
                        for (r, c) in ring.basis_product(t[p1], t[p2]) {
                            let mut nt = t.to_vec();
                            nt[p1] = *r;
                            nt.remove(p2);
                            out.push((nk.clone(), nt, f.mul(&sg, c)));
                        }
                    }
                    // s_a · m_j
                    let sg = f.mul(&sigma, &f.sign(a as i64));
                    let last = s0 + a - 1;
                    let act = self.pieces[j].term(key[2 * j]).unwrap().left(t[last]);
                    for (r, c) in act.column(t[mpos[j]]) {
                        let mut nt = t.to_vec();
                        nt[mpos[j]] = *r;
                        nt.remove(last);
                        out.push((nk.clone(), nt, f.mul(&sg, c)));
                    }
                }
                prefix += a as i64;
            }
            // internal differential of M_j
            let i = key[2 * j];
            if let Some(d) = self.pieces[j].diff_ref(i) {
                let sg = f.sign(prefix);
                let mut nk = key.clone();
                nk[2 * j] -= 1;
                for (r, c) in d.column(t[mpos[j]]) {
                    let mut nt = t.to_vec();
                    nt[mpos[j]] = *r;
                    out.push((nk.clone(), nt, f.mul(&sg, c)));
                }
            }
            prefix += i;
        }
        out
    }

    /// Materializes degrees `min_degree()..=hi`. The trusted range stops one
    /// below `hi` because the next boundary is not built.
    pub fn materialize(&self, hi: i64) -> Complex {
        let f = self.field;
        let lo = self.min_degree();
        assert!(hi >= lo, "nothing to materialize");
        let left = self.pieces[0].left().clone();
        let right = self.pieces.last().unwrap().right().clone();
        let layouts: Vec<Layout> = (lo..=hi).map(|n| self.layout(n)).collect();
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for (idx, lay) in layouts.iter().enumerate() {
            let lefts = (0..left.dim())
                .map(|e| {
                    let blocks: Vec<Matrix> = lay
                        .summands
                        .iter()
                        .map(|s| {
                            let rest: usize = s.dims[1..].iter().product();
                            self.pieces[0].term(s.key[0]).unwrap().left(e).kron(&Matrix::identity(f, rest))
                        })
                        .collect();
                    super::block_diagonal(f, &blocks)
                })
                .collect();
            let rights = (0..right.dim())
                .map(|e| {
                    let blocks: Vec<Matrix> = lay
                        .summands
                        .iter()
                        .map(|s| {
                            let rest: usize = s.dims[..s.dims.len() - 1].iter().product();
                            let last = self.pieces.last().unwrap().term(*s.key.last().unwrap()).unwrap();
                            Matrix::identity(f, rest).kron(last.right(e))
                        })
                        .collect();
                    super::block_diagonal(f, &blocks)
                })
                .collect();
            terms.push(Bimodule::new(left.clone(), right.clone(), lay.dim, lefts, rights).expect("shapes"));
            if idx == 0 {
                diffs.push(Matrix::zeros(f, 0, lay.dim));
                continue;
            }
            let below = &layouts[idx - 1];
            let mut columns = Vec::with_capacity(lay.dim);
            for s in &lay.summands {
                for local in 0..s.size {
                    let (_, t) = lay.locate(s.offset + local);
                    let items: Vec<(usize, Elem)> = self
                        .boundary_terms(&s.key, &t)
                        .into_iter()
                        .filter_map(|(k2, t2, c)| below.encode(&k2, &t2).map(|i| (i, c)))
                        .collect();
                    columns.push(sparse::collect(&f, items));
                }
            }
            diffs.push(Matrix::from_columns(f, below.dim, columns));
        }
        Complex::with_rings(left, right, lo, terms, diffs)
            .expect("bar construction is a complex")
            .set_trusted(lo, hi - 1)
    }

    /// When `M_0` and `M_k` are the regular bimodules of the outer rings, the
    /// construction is free on the middle factors. Returns it in degrees up
    /// to `hi` without materializing the terms.
    pub fn free(&self, hi: i64) -> FreeComplex {
        let f = self.field;
        let k = self.rings.len();
        assert!(k >= 1, "a free bar construction needs at least one segment");
        let (first, last) = (&self.pieces[0], &self.pieces[k]);
        let left = first.left().clone();
        let right = last.right().clone();
        assert!(
            first.lo() == 0 && first.hi() == 0 && first.dim(0) == left.dim() && last.lo() == 0 && last.hi() == 0 && last.dim(0) == right.dim(),
            "outer pieces must be regular bimodules in degree 0"
        );
        let lo = self.min_degree();
        let dr = right.dim();
        // generator layouts: summands with middle factors only
        let gen_layouts: Vec<Layout> = (lo..=hi)
            .map(|n| {
                let full = self.layout(n);
                let mut summands = Vec::new();
                let mut index = HashMap::new();
                let mut offset = 0;
                for s in full.summands {
                    let dims = s.dims[1..s.dims.len() - 1].to_vec();
                    let size: usize = dims.iter().product();
                    index.insert(s.key.clone(), summands.len());
                    summands.push(Summand { key: s.key, dims, offset, size });
                    offset += size;
                }
                Layout { summands, index, dim: offset }
            })
            .collect();
        let gens: Vec<usize> = gen_layouts.iter().map(|l| l.dim).collect();
        let mut boundary = Vec::new();
        for (idx, lay) in gen_layouts.iter().enumerate() {
            if idx == 0 {
                boundary.push(vec![Vec::new(); lay.dim]);
                continue;
            }
            let below = &gen_layouts[idx - 1];
            let g_below = below.dim;
            let mut bd = Vec::with_capacity(lay.dim);
            for s in &lay.summands {
                for local in 0..s.size {
                    let (_, mid) = lay.locate(s.offset + local);
                    let mut items = Vec::new();
                    for (u, cu) in left.unit() {
                        for (w, cw) in right.unit() {
                            let mut t = vec![*u];
                            t.extend(&mid);
                            t.push(*w);
                            let cuw = f.mul(cu, cw);
                            for (k2, t2, c) in self.boundary_terms(&s.key, &t) {
                                let a = t2[0];
                                let b = *t2.last().unwrap();
                                if let Some(g) = below.encode(&k2, &t2[1..t2.len() - 1]) {
                                    items.push(((a * g_below + g) * dr + b, f.mul(&cuw, &c)));
                                }
                            }
                        }
                    }
                    bd.push(sparse::collect(&f, items));
                }
            }
            boundary.push(bd);
        }
        FreeComplex::new(left, right, lo, gens, boundary).set_trusted(lo, hi - 1)
    }

    /// Summand keys of degree `n` with their offsets and sizes, in layout order.
    pub fn summands(&self, n: i64) -> Vec<(Vec<i64>, usize, usize)> {
        self.layout(n).summands.into_iter().map(|s| (s.key, s.offset, s.size)).collect()
    }

    /// Generator-layout summands (middle factors only) of degree `n`.
    pub fn generator_summands(&self, n: i64) -> Vec<(Vec<i64>, usize, usize)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for s in self.layout(n).summands {
            let size: usize = s.dims[1..s.dims.len() - 1].iter().product();
            out.push((s.key, offset, size));
            offset += size;
        }
        out
    }

    /// Key and per-factor tuple of basis vector `idx` of the degree-`n` term.
    pub fn decompose(&self, n: i64, idx: usize) -> (Vec<i64>, Vec<usize>) {
        let lay = self.layout(n);
        let (s, t) = lay.locate(idx);
        (lay.summands[s].key.clone(), t)
    }

    /// Index of the basis vector with the given key and factor tuple.
    pub fn index_of(&self, n: i64, key: &[i64], tuple: &[usize]) -> Option<usize> {
        self.layout(n).encode(&key.to_vec(), tuple)
    }

    /// The nested tensor products `((M_0 ⊗_{S_1} M_1) ⊗_{S_2} M_2) ...`.
    pub fn tensor_chain(&self) -> Result<Vec<TensorProduct>, ComplexError> {
        let mut out: Vec<TensorProduct> = Vec::new();
        for j in 1..self.pieces.len() {
            let left = match out.last() {
                Some(t) => t.complex.clone(),
                None => self.pieces[0].clone(),
            };
            out.push(tensor_over(&left, &self.pieces[j])?);
        }
        Ok(out)
    }

    /// The quasi-isomorphism onto the nested tensor product that kills every
    /// summand with a nonzero bar length and projects the rest, on degrees
    /// `min_degree()..=hi` of a materialization.
    pub fn collapse(&self, source: &Arc<Complex>, chain: &[TensorProduct]) -> ChainMap {
        let f = self.field;
        let target = chain.last().map_or_else(|| self.pieces[0].clone(), |t| t.complex.clone());
        let (lo, hi) = (source.lo(), source.hi());
        let mut comps = BTreeMap::new();
        for n in lo..=hi {
            let lay = self.layout(n);
            let mut columns = Vec::with_capacity(lay.dim);
            for s in &lay.summands {
                let bar_free = (0..self.rings.len()).all(|j| s.key[2 * j + 1] == 0);
                for local in 0..s.size {
                    if !bar_free {
                        columns.push(Vec::new());
                        continue;
                    }
                    let (_, t) = lay.locate(s.offset + local);
                    let mut acc = sparse::unit(t[0]);
                    let mut deg = s.key[0];
                    for (j, tp) in chain.iter().enumerate() {
                        let i = s.key[2 * (j + 1)];
                        let piece = &self.pieces[j + 1];
                        acc = tp.project(deg, i, &acc, &sparse::unit(t[j + 1]), piece.dim(i));
                        deg += i;
                    }
                    columns.push(acc);
                }
            }
            comps.insert(n, Matrix::from_columns(f, target.dim(n), columns));
        }
        ChainMap::unchecked(source.clone(), target, 0, comps, (lo, hi)).expect("shapes")
    }

    /// Factor dimensions of a summand key.
    pub fn factor_dims(&self, key: &[i64]) -> Vec<usize> {
        self.dims_of(&key.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{base_field, dual_numbers, path_algebra, Quiver};

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn bar_dims() {
        let a = Arc::new(dual_numbers(q()));
        let bar = IteratedBar::bar_of(&a);
        let dims: Vec<usize> = bar.term_dims(0, 4).into_iter().map(|(_, d)| d).collect();
        assert_eq!(dims, vec![4, 8, 16, 32, 64]);
        let p = Arc::new(path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1)] }, q()).unwrap());
        let dims: Vec<usize> = IteratedBar::bar_of(&p).term_dims(0, 3).into_iter().map(|(_, d)| d).collect();
        assert_eq!(dims, vec![9, 27, 81, 243]);
    }

    #[test]
    fn bar_is_exact_above_zero() {
        let k = Arc::new(base_field(q()));
        let c = IteratedBar::bar_of(&k).materialize(4);
        assert_eq!(c.homology_dims(), vec![(0, 1), (1, 0), (2, 0), (3, 0)]);
        let a = Arc::new(dual_numbers(q()));
        let c = IteratedBar::bar_of(&a).materialize(4);
        c.check_bimodule_maps().unwrap();
        assert_eq!(c.homology_dims(), vec![(0, 2), (1, 0), (2, 0), (3, 0)]);
    }

    #[test]
    fn free_matches_materialized() {
        let a = Arc::new(dual_numbers(q()));
        let bar = IteratedBar::bar_of(&a);
        let m = bar.materialize(3);
        let fr = bar.free(3).materialize();
        for n in 0..=3 {
            assert_eq!(m.diff(n), fr.diff(n));
        }
    }

    #[test]
    fn collapse_is_quasi_iso() {
        let a = Arc::new(dual_numbers(q()));
        let ra = Arc::new(Complex::concentrated(Bimodule::regular(&a), 0));
        let two = Arc::new(Complex::concentrated(Bimodule::regular(&a).direct_sum(&Bimodule::regular(&a)), 0));
        let bar = IteratedBar::new(vec![two.clone(), ra.clone(), ra]);
        let mat = Arc::new(bar.materialize(3));
        let chain = bar.tensor_chain().unwrap();
        let c = bar.collapse(&mat, &chain);
        c.check().unwrap();
        assert!(crate::complexes::is_quasi_iso(&c).unwrap());
        assert_eq!(c.target().dim(0), 4);
    }
}
