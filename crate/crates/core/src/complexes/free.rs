//! Complexes whose terms are free bimodules `L ⊗ V_n ⊗ R`, described by
//! generators and the boundaries of generators, and maps out of them given
//! on generators. Basis index of `a ⊗ v ⊗ b` is `(a·|V_n| + v)·dim R + b`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{ChainMap, Complex, ComplexError};
use crate::algebra::{Algebra, Bimodule};
use crate::linalg::{sparse, Elem, Field, Matrix, SVec, Solver};

#[derive(Clone, Debug)]
pub struct FreeComplex {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    lo: i64,
    gens: Vec<usize>,
    boundary: Vec<Vec<SVec>>,
    trusted: (i64, i64),
}

impl FreeComplex {
    pub fn new(left: Arc<Algebra>, right: Arc<Algebra>, lo: i64, gens: Vec<usize>, boundary: Vec<Vec<SVec>>) -> Self {
        assert_eq!(gens.len(), boundary.len());
        let hi = lo + gens.len() as i64 - 1;
        FreeComplex { left, right, lo, gens, boundary, trusted: (lo, hi) }
    }

    pub fn set_trusted(mut self, lo: i64, hi: i64) -> Self {
        self.trusted = (lo, hi);
        self
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }

    pub fn left(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.gens.len() as i64 - 1
    }

    pub fn trusted(&self) -> (i64, i64) {
        self.trusted
    }

    pub fn gens(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.gens[(n - self.lo) as usize]
        }
    }

    pub fn term_dim(&self, n: i64) -> usize {
        self.left.dim() * self.gens(n) * self.right.dim()
    }

    /// Boundary of generator `g` of degree `n`, in the layout of degree `n-1`.
    pub fn boundary(&self, n: i64, g: usize) -> &SVec {
        &self.boundary[(n - self.lo) as usize][g]
    }

    /// `(a, g, b)` of a basis index in degree `n`.
    pub fn split(&self, n: i64, idx: usize) -> (usize, usize, usize) {
        let (gn, dr) = (self.gens(n), self.right.dim());
        let b = idx % dr;
        let rest = idx / dr;
        (rest / gn, rest % gn, b)
    }

    pub fn index(&self, n: i64, a: usize, g: usize, b: usize) -> usize {
        (a * self.gens(n) + g) * self.right.dim() + b
    }

    /// The element `1 ⊗ g ⊗ 1` of degree `n`.
    pub fn generator(&self, n: i64, g: usize) -> SVec {
        let f = self.field();
        let mut items = Vec::new();
        for (a, x) in self.left.unit() {
            for (b, y) in self.right.unit() {
                items.push((self.index(n, *a, g, *b), f.mul(x, y)));
            }
        }
        sparse::collect(&f, items)
    }

    /// Applies `a ⊗ (-) ⊗ b` on the free term of degree `n` to an element.
    fn act(&self, n: i64, a: &SVec, x: &SVec, b: &SVec) -> SVec {
        let f = self.field();
        let mut items = Vec::new();
        for (idx, c) in x {
            let (xa, g, xb) = self.split(n, *idx);
            for (ai, ac) in a {
                for (la, lc) in self.left.basis_product(*ai, xa) {
                    for (bi, bc) in b {
                        for (rb, rc) in self.right.basis_product(xb, *bi) {
                            let coeff = f.mul(&f.mul(c, &f.mul(ac, lc)), &f.mul(bc, rc));
                            items.push((self.index(n, *la, g, *rb), coeff));
                        }
                    }
                }
            }
        }
        sparse::collect(&f, items)
    }

    /// Materializes all degrees.
    pub fn materialize(&self) -> Complex {
        let f = self.field();
        let (dl, dr) = (self.left.dim(), self.right.dim());
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in self.lo..=self.hi() {
            let g = self.gens(n);
            let lefts = (0..dl).map(|e| self.left.left_mult(e).kron(&Matrix::identity(f, g * dr))).collect();
            let rights = (0..dr).map(|e| Matrix::identity(f, dl * g).kron(self.right.right_mult(e))).collect();
            terms.push(Bimodule::new(self.left.clone(), self.right.clone(), dl * g * dr, lefts, rights).expect("shapes"));
            if n == self.lo {
                diffs.push(Matrix::zeros(f, 0, dl * g * dr));
                continue;
            }
            let mut columns = Vec::with_capacity(dl * g * dr);
            for idx in 0..dl * g * dr {
                let (a, gi, b) = self.split(n, idx);
                let bd = self.boundary(n, gi);
                columns.push(self.act(n - 1, &sparse::unit(a), bd, &sparse::unit(b)));
            }
            diffs.push(Matrix::from_columns(f, self.term_dim(n - 1), columns));
        }
        Complex::with_rings(self.left.clone(), self.right.clone(), self.lo, terms, diffs)
            .expect("free complex")
            .set_trusted(self.trusted.0, self.trusted.1)
    }
}

/// A map of degree `r` out of a free complex, given by generator images.
/// Also used for homotopies (degree `r + 1`, no chain condition).
#[derive(Clone, Debug)]
pub struct FreeMap {
    source: Arc<FreeComplex>,
    target: Arc<Complex>,
    degree: i64,
    images: BTreeMap<i64, Vec<SVec>>,
    defined: (i64, i64),
}

/// Homotopies out of free complexes are stored like maps of degree `r + 1`.
pub type FreeHomotopy = FreeMap;

impl FreeMap {
    pub fn new(
        source: Arc<FreeComplex>,
        target: Arc<Complex>,
        degree: i64,
        images: BTreeMap<i64, Vec<SVec>>,
        defined: (i64, i64),
    ) -> Result<Self, ComplexError> {
        for (n, imgs) in &images {
            if imgs.len() != source.gens(*n) {
                return Err(ComplexError::Shape(format!("{} images for {} generators in degree {n}", imgs.len(), source.gens(*n))));
            }
            let td = target.dim(n + degree);
            if imgs.iter().any(|v| v.last().is_some_and(|(i, _)| *i >= td)) {
                return Err(ComplexError::Shape(format!("image outside the target term in degree {n}")));
            }
        }
        Ok(FreeMap { source, target, degree, images, defined })
    }

    pub fn zero(source: &Arc<FreeComplex>, target: &Arc<Complex>, degree: i64) -> Self {
        FreeMap { source: source.clone(), target: target.clone(), degree, images: BTreeMap::new(), defined: (source.lo(), source.hi()) }
    }

    pub fn source(&self) -> &Arc<FreeComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn defined(&self) -> (i64, i64) {
        self.defined
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        let images = self.images.range(lo..=hi).map(|(n, v)| (*n, v.clone())).collect();
        FreeMap { images, defined: (lo.max(self.defined.0), hi.min(self.defined.1)), ..self.clone() }
    }

    /// Image of generator `g` of degree `n`.
    pub fn image(&self, n: i64, g: usize) -> SVec {
        self.images.get(&n).map_or_else(Vec::new, |v| v[g].clone())
    }

    /// Applies the map to an element of the free term of degree `n`.
    pub fn apply(&self, n: i64, x: &SVec) -> SVec {
        let f = self.source.field();
        let Some(imgs) = self.images.get(&n) else {
            return Vec::new();
        };
        let Some(t) = self.target.term(n + self.degree) else {
            return Vec::new();
        };
        // group coefficients by (a, b) and generator
        let mut grouped: BTreeMap<(usize, usize), Vec<(usize, Elem)>> = BTreeMap::new();
        for (idx, c) in x {
            let (a, g, b) = self.source.split(n, *idx);
            grouped.entry((a, b)).or_default().push((g, c.clone()));
        }
        let mut out = Vec::new();
        for ((a, b), gs) in grouped {
            let mut v = Vec::new();
            for (g, c) in gs {
                v = sparse::axpy(&f, &v, &c, &imgs[g]);
            }
            let v = t.left(a).apply(&t.right(b).apply(&v));
            out = sparse::add(&f, &out, &v);
        }
        out
    }

    /// Checks `d∘f = (-1)^r f∘d` on generators in the defined range.
    pub fn check(&self) -> Result<(), ComplexError> {
        let f = self.source.field();
        let s = f.sign(self.degree);
        let (lo, hi) = self.defined;
        for n in lo..=hi {
            if n == lo && lo > self.source.lo() {
                continue;
            }
            let d = self.target.diff(n + self.degree);
            for g in 0..self.source.gens(n) {
                let lhs = d.apply(&self.image(n, g));
                let rhs = sparse::scale(&f, &s, &self.apply(n - 1, self.source.boundary(n, g)));
                if lhs != rhs {
                    return Err(ComplexError::NotChainMap(n));
                }
            }
        }
        Ok(())
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &ChainMap) -> FreeMap {
        let images = self
            .images
            .iter()
            .map(|(n, imgs)| {
                let m = after.component(n + self.degree);
                (*n, imgs.iter().map(|v| m.apply(v)).collect())
            })
            .collect();
        let (alo, ahi) = after.defined();
        let defined = (self.defined.0.max(alo - self.degree), self.defined.1.min(ahi - self.degree));
        FreeMap {
            source: self.source.clone(),
            target: after.target().clone(),
            degree: self.degree + after.degree(),
            images,
            defined,
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &Elem, other: &FreeMap) -> FreeMap {
        assert_eq!(self.degree, other.degree);
        let f = self.source.field();
        let lo = self.defined.0.max(other.defined.0);
        let hi = self.defined.1.min(other.defined.1);
        let images = (lo..=hi)
            .map(|n| {
                let gens = self.source.gens(n);
                (n, (0..gens).map(|g| sparse::axpy(&f, &self.image(n, g), c, &other.image(n, g))).collect())
            })
            .collect();
        FreeMap { images, defined: (lo, hi), ..self.clone() }
    }

    pub fn sub(&self, other: &FreeMap) -> FreeMap {
        self.axpy(&self.source.field().from_i64(-1), other)
    }

    pub fn scale(&self, c: &Elem) -> FreeMap {
        let f = self.source.field();
        let images = self
            .images
            .iter()
            .map(|(n, v)| (*n, v.iter().map(|x| sparse::scale(&f, c, x)).collect()))
            .collect();
        FreeMap { images, ..self.clone() }
    }

    /// The boundary `d h + (-1)^r h d` of a homotopy `self` of degree `r + 1`,
    /// as a map of degree `r`.
    pub fn homotopy_boundary(&self) -> FreeMap {
        let f = self.source.field();
        let r = self.degree - 1;
        let s = f.sign(r);
        let (lo, hi) = self.defined;
        let images = (lo..=hi)
            .map(|n| {
                let d = self.target.diff(n + self.degree);
                let imgs = (0..self.source.gens(n))
                    .map(|g| {
                        let a = d.apply(&self.image(n, g));
                        let b = if n > self.source.lo() { self.apply(n - 1, self.source.boundary(n, g)) } else { Vec::new() };
                        sparse::axpy(&f, &a, &s, &b)
                    })
                    .collect();
                (n, imgs)
            })
            .collect();
        FreeMap { source: self.source.clone(), target: self.target.clone(), degree: r, images, defined: self.defined }
    }

    /// Matrix components on a materialization of the source.
    pub fn to_chain_map(&self, source: &Arc<Complex>) -> ChainMap {
        let f = self.source.field();
        let mut comps = BTreeMap::new();
        let (lo, hi) = self.defined;
        for n in lo..=hi {
            let dim = self.source.term_dim(n);
            let columns = (0..dim).map(|idx| self.apply(n, &sparse::unit(idx))).collect();
            comps.insert(n, Matrix::from_columns(f, self.target.dim(n + self.degree), columns));
        }
        ChainMap::unchecked(source.clone(), self.target.clone(), self.degree, comps, self.defined).expect("shapes")
    }
}

/// Lifts `g : P → Z` (degree `r`, `P` free) through a quasi-isomorphism
/// `s : Y → Z`, producing `g̃ : P → Y` and `h : P → Z` of degree `r + 1`
/// with `s∘g̃ - g = d h + (-1)^r h d`, degree by degree up to `hi`.
pub fn lift_through_quasi_iso(g: &FreeMap, s: &ChainMap, hi: i64) -> Result<(FreeMap, FreeHomotopy), ComplexError> {
    assert_eq!(s.degree(), 0, "lifts go through degree-0 maps");
    let p = g.source().clone();
    let (y, z) = (s.source().clone(), s.target().clone());
    let f = p.field();
    let r = g.degree();
    let sign = f.sign(r);
    let mut lift = FreeMap::zero(&p, &y, r);
    let mut homotopy = FreeMap::zero(&p, &z, r + 1);
    lift.defined = (p.lo(), hi);
    homotopy.defined = (p.lo(), hi);
    for n in p.lo()..=hi.min(p.hi()) {
        let yd = n + r;
        let (y_top, y_below) = (y.dim(yd), y.dim(yd - 1));
        let (z_here, z_above) = (z.dim(yd), z.dim(yd + 1));
        let minus_dz = z.diff(yd + 1).scale(&f.from_i64(-1));
        let sy = s.component(yd);
        let blocks = [(0, 0, &y.diff(yd)), (y_below, 0, &sy), (y_below, y_top, &minus_dz)];
        let m = super::tensor::assemble(f, y_below + z_here, y_top + z_above, &blocks);
        let solver = Solver::new(&m);
        let mut us = Vec::new();
        let mut vs = Vec::new();
        for x in 0..p.gens(n) {
            let (rhs1, rhs2) = if n > p.lo() {
                let dx = p.boundary(n, x);
                let top = sparse::scale(&f, &sign, &lift.apply(n - 1, dx));
                let bottom = sparse::axpy(&f, &g.apply(n, &p.generator(n, x)), &sign, &homotopy.apply(n - 1, dx));
                (top, bottom)
            } else {
                (Vec::new(), g.apply(n, &p.generator(n, x)))
            };
            let mut b = rhs1;
            b.extend(sparse::offset(&rhs2, y_below));
            let sol = solver.solve(&b).ok_or(ComplexError::UnsolvableLift(n))?;
            us.push(sparse::slice(&sol, 0, y_top));
            vs.push(sparse::slice(&sol, y_top, z_above));
        }
        lift.images.insert(n, us);
        homotopy.images.insert(n, vs);
    }
    Ok((lift, homotopy))
}

/// Decides whether `f ≃ g` on source degrees `lo..=hi` (`f`, `g` of equal
/// degree `r`), returning a homotopy `h` with `f - g = d h + (-1)^r h d`.
/// The homotopy is zero below the source's lowest degree.
pub fn homotopic(f: &FreeMap, g: &FreeMap, hi: i64) -> Option<FreeHomotopy> {
    assert_eq!(f.degree(), g.degree());
    let p = f.source().clone();
    let t = f.target().clone();
    let fld = p.field();
    let r = f.degree();
    let sign = fld.sign(r);
    let lo = p.lo();
    let hi = hi.min(p.hi());
    // unknown and equation offsets
    let mut unk = HashMap::new();
    let mut eqs = HashMap::new();
    let (mut ncols, mut nrows) = (0, 0);
    for n in lo..=hi {
        for x in 0..p.gens(n) {
            unk.insert((n, x), ncols);
            ncols += t.dim(n + r + 1);
            eqs.insert((n, x), nrows);
            nrows += t.dim(n + r);
        }
    }
    let mut columns: Vec<Vec<(usize, Elem)>> = vec![Vec::new(); ncols];
    let mut rhs = Vec::new();
    let diff_fg = f.sub(g);
    let mut lr_cache: HashMap<(i64, usize, usize), Matrix> = HashMap::new();
    for n in lo..=hi {
        let d = t.diff(n + r + 1);
        for x in 0..p.gens(n) {
            let (row0, col0) = (eqs[&(n, x)], unk[&(n, x)]);
            for (j, col) in d.columns().iter().enumerate() {
                columns[col0 + j].extend(col.iter().map(|(i, v)| (row0 + i, v.clone())));
            }
            if n > lo {
                for (idx, c) in p.boundary(n, x) {
                    let (a, x2, b) = p.split(n - 1, *idx);
                    let m = lr_cache.entry((n - 1, a, b)).or_insert_with(|| {
                        let term = t.term(n - 1 + r + 1);
                        match term {
                            Some(tm) => tm.left(a).mul(tm.right(b)),
                            None => Matrix::zeros(fld, 0, 0),
                        }
                    });
                    let c0 = unk[&(n - 1, x2)];
                    let coeff = fld.mul(&sign, c);
                    for (j, col) in m.columns().iter().enumerate() {
                        columns[c0 + j].extend(col.iter().map(|(i, v)| (row0 + i, fld.mul(&coeff, v))));
                    }
                }
            }
            let target_val = diff_fg.image(n, x);
            rhs.extend(sparse::offset(&target_val, row0));
        }
    }
    let columns = columns.into_iter().map(|c| sparse::collect(&fld, c)).collect();
    let m = Matrix::from_columns(fld, nrows, columns);
    let sol = Solver::new(&m).solve(&rhs)?;
    let mut h = FreeMap::zero(&p, &t, r + 1);
    h.defined = (lo, hi);
    for n in lo..=hi {
        let imgs = (0..p.gens(n))
            .map(|x| sparse::slice(&sol, unk[&(n, x)], t.dim(n + r + 1)))
            .collect();
        h.images.insert(n, imgs);
    }
    Some(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{base_field, dual_numbers, regular_bimodule};
    use crate::complexes::IteratedBar;

    fn q() -> Field {
        Field::Rationals
    }

    fn augmentation(bar: &Arc<FreeComplex>, a: &Arc<Algebra>) -> FreeMap {
        let target = Arc::new(Complex::concentrated(regular_bimodule(a), 0));
        let mut images = BTreeMap::new();
        images.insert(0, vec![a.unit().clone()]);
        FreeMap::new(bar.clone(), target, 0, images, (bar.lo(), bar.hi())).unwrap()
    }

    #[test]
    fn augmentation_is_a_chain_map() {
        let a = Arc::new(dual_numbers(q()));
        let bar = Arc::new(IteratedBar::bar_of(&a).free(3));
        augmentation(&bar, &a).check().unwrap();
    }

    #[test]
    fn lift_identity_through_augmentation() {
        let a = Arc::new(dual_numbers(q()));
        let free = IteratedBar::bar_of(&a).free(4);
        let bar = Arc::new(free.clone());
        let mat = Arc::new(free.materialize());
        let aug = augmentation(&bar, &a);
        let aug_chain = aug.to_chain_map(&mat);
        aug_chain.check().unwrap();
        let (lift, h) = lift_through_quasi_iso(&aug, &aug_chain, 3).unwrap();
        lift.check().unwrap();
        // s∘lift - g = dh + hd
        let lhs = lift.then(&aug_chain).sub(&aug.restrict(0, 3));
        let rhs = h.homotopy_boundary();
        for n in 0..=3 {
            for g in 0..bar.gens(n) {
                assert_eq!(lhs.image(n, g), rhs.image(n, g));
            }
        }
        // any lift of the augmentation is homotopic to the identity
        let mut ids = BTreeMap::new();
        for n in 0..=3 {
            ids.insert(n, (0..bar.gens(n)).map(|g| bar.generator(n, g)).collect());
        }
        let id = FreeMap::new(bar.clone(), mat.clone(), 0, ids, (0, 3)).unwrap();
        assert!(homotopic(&lift, &id, 2).is_some());
    }

    #[test]
    fn distinct_maps_into_a_point_are_not_homotopic() {
        let k = Arc::new(base_field(q()));
        let bar = Arc::new(IteratedBar::bar_of(&k).free(2));
        let aug = augmentation(&bar, &k);
        let zero = FreeMap::zero(&bar, aug.target(), 0);
        assert!(homotopic(&aug, &zero, 1).is_none());
        assert!(homotopic(&aug, &aug, 1).is_some());
    }
}
