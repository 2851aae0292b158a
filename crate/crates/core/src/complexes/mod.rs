//! Bounded complexes of bimodules with homological grading.
//!
//! A complex stores its terms in degrees `lo..=hi` and differentials
//! `d_n : C_n → C_{n-1}`. Cochain complexes are stored with negated degrees.
//! Every complex carries a trusted interval: homology is only reported for
//! degrees inside it.

mod bar;
mod free;
mod tensor;

pub use bar::IteratedBar;
pub use free::{homotopic, lift_through_quasi_iso, FreeComplex, FreeMap, FreeHomotopy};
pub use tensor::{quotient_by_relations, tensor_over, tensor_over_enveloping, Quotient, TensorProduct};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::{Algebra, Bimodule};
use crate::linalg::{self, sparse, Echelon, Elem, Field, Inserted, Matrix, SVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("degree {degree} is outside the trusted range [{lo}, {hi}]")]
    OutsideTrustedRange { degree: i64, lo: i64, hi: i64 },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i64),
    #[error("differential at degree {0} is not a bimodule map")]
    NotBimoduleMap(i64),
    #[error("not a chain map at degree {0}")]
    NotChainMap(i64),
    #[error("lift has no solution at degree {0}")]
    UnsolvableLift(i64),
    #[error("vector is not a cycle in degree {0}")]
    NotACycle(i64),
}

/// Cached homology computation for one degree.
#[derive(Debug)]
struct HomologyData {
    reps: Vec<SVec>,
    // Boundaries (zero tags) followed by representatives (tag = class).
    echelon: Echelon,
}

#[derive(Clone, Debug)]
pub struct Complex {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    lo: i64,
    terms: Vec<Bimodule>,
    diffs: Vec<Matrix>,
    trusted: (i64, i64),
    cache: Arc<Mutex<HashMap<i64, Arc<HomologyData>>>>,
}

impl Complex {
    /// Terms in degrees `lo, lo+1, ...`; `diffs[i]` is the differential out of
    /// degree `lo + i` (so `diffs[0]` must have zero rows). Checks shapes and
    /// `d∘d = 0`; the trusted range defaults to the whole support.
    pub fn new(lo: i64, terms: Vec<Bimodule>, diffs: Vec<Matrix>) -> Result<Self, ComplexError> {
        let first = terms.first().ok_or_else(|| ComplexError::Shape("complex without terms".into()))?;
        let (left, right) = (first.left_algebra().clone(), first.right_algebra().clone());
        Self::with_rings(left, right, lo, terms, diffs)
    }

    pub fn with_rings(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        lo: i64,
        terms: Vec<Bimodule>,
        diffs: Vec<Matrix>,
    ) -> Result<Self, ComplexError> {
        if terms.len() != diffs.len() {
            return Err(ComplexError::Shape("one differential per term expected".into()));
        }
        for (i, (t, d)) in terms.iter().zip(&diffs).enumerate() {
            if !Arc::ptr_eq(t.left_algebra(), &left) && **t.left_algebra() != *left
                || !Arc::ptr_eq(t.right_algebra(), &right) && **t.right_algebra() != *right
            {
                return Err(ComplexError::RingMismatch(format!("term in degree {}", lo + i as i64)));
            }
            let below = if i == 0 { 0 } else { terms[i - 1].dim() };
            if d.cols() != t.dim() || d.rows() != below {
                return Err(ComplexError::Shape(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    lo + i as i64,
                    d.rows(),
                    d.cols(),
                    below,
                    t.dim()
                )));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i - 1].mul(&diffs[i]).is_zero() {
                return Err(ComplexError::NotAComplex(lo + i as i64));
            }
        }
        let hi = lo + terms.len() as i64 - 1;
        Ok(Complex { left, right, lo, terms, diffs, trusted: (lo, hi), cache: Default::default() })
    }

    /// A single bimodule placed in degree `n`.
    pub fn concentrated(m: Bimodule, n: i64) -> Self {
        let f = m.field();
        let d = Matrix::zeros(f, 0, m.dim());
        Complex::new(n, vec![m], vec![d]).expect("one-term complex")
    }

    /// Two-term complex `m1 → m0` in degrees 1 and 0.
    pub fn two_term(m1: Bimodule, m0: Bimodule, d: Matrix) -> Result<Self, ComplexError> {
        let f = m0.field();
        let d0 = Matrix::zeros(f, 0, m0.dim());
        Complex::new(0, vec![m0, m1], vec![d0, d])
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
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn trusted(&self) -> (i64, i64) {
        self.trusted
    }

    /// Narrows the trusted range (it can never grow past the support bounds
    /// already recorded).
    pub fn with_trusted(mut self, lo: i64, hi: i64) -> Self {
        self.trusted = (lo.max(self.trusted.0), hi.min(self.trusted.1));
        self
    }

    /// Replaces the trusted range outright; used by constructions that know
    /// exactly where their truncation stops mattering.
    pub fn set_trusted(mut self, lo: i64, hi: i64) -> Self {
        self.trusted = (lo, hi);
        self
    }

    fn index(&self, n: i64) -> Option<usize> {
        if n < self.lo || n > self.hi() {
            None
        } else {
            Some((n - self.lo) as usize)
        }
    }

    pub fn term(&self, n: i64) -> Option<&Bimodule> {
        self.index(n).map(|i| &self.terms[i])
    }

    pub fn terms(&self) -> &[Bimodule] {
        &self.terms
    }

    pub fn dim(&self, n: i64) -> usize {
        self.term(n).map_or(0, |t| t.dim())
    }

    /// `d_n : C_n → C_{n-1}`, a zero matrix of the right shape outside the support.
    pub fn diff(&self, n: i64) -> Matrix {
        match self.index(n) {
            Some(i) => self.diffs[i].clone(),
            None => Matrix::zeros(self.field(), self.dim(n - 1), self.dim(n)),
        }
    }

    pub fn diff_ref(&self, n: i64) -> Option<&Matrix> {
        self.index(n).map(|i| &self.diffs[i])
    }

    /// Left action of a basis element on `C_n`.
    pub fn left_action(&self, n: i64, i: usize) -> Matrix {
        match self.term(n) {
            Some(t) => t.left(i).clone(),
            None => Matrix::zeros(self.field(), 0, 0),
        }
    }

    pub fn right_action(&self, n: i64, j: usize) -> Matrix {
        match self.term(n) {
            Some(t) => t.right(j).clone(),
            None => Matrix::zeros(self.field(), 0, 0),
        }
    }

    /// Checks that each differential commutes with both actions.
    pub fn check_bimodule_maps(&self) -> Result<(), ComplexError> {
        for n in self.lo + 1..=self.hi() {
            let d = self.diff(n);
            let (src, dst) = (self.term(n).unwrap(), self.term(n - 1).unwrap());
            for i in 0..self.left.dim() {
                if d.mul(src.left(i)) != dst.left(i).mul(&d) {
                    return Err(ComplexError::NotBimoduleMap(n));
                }
            }
            for j in 0..self.right.dim() {
                if d.mul(src.right(j)) != dst.right(j).mul(&d) {
                    return Err(ComplexError::NotBimoduleMap(n));
                }
            }
        }
        Ok(())
    }

    /// A trusted range reaching an end of the support means the complex
    /// really stops there, so degrees beyond it are trusted (and acyclic).
    pub fn check_trusted(&self, n: i64) -> Result<(), ComplexError> {
        let (lo, hi) = self.trusted;
        let below = n < self.lo && lo == self.lo;
        let above = n > self.hi() && hi == self.hi();
        if (n < lo || n > hi) && !below && !above {
            Err(ComplexError::OutsideTrustedRange { degree: n, lo, hi })
        } else {
            Ok(())
        }
    }

    fn homology_data(&self, n: i64) -> Arc<HomologyData> {
        if let Some(h) = self.cache.lock().unwrap().get(&n) {
            return h.clone();
        }
        let f = self.field();
        let dim = self.dim(n);
        let mut echelon = Echelon::new(f, dim);
        if let Some(d) = self.diff_ref(n + 1) {
            for c in d.columns() {
                echelon.insert(c.clone(), Vec::new());
            }
        }
        let cycles = match self.diff_ref(n) {
            Some(d) => linalg::kernel_basis(d),
            None => (0..dim).map(sparse::unit).collect(),
        };
        let mut reps = Vec::new();
        for z in cycles {
            let k = reps.len();
            if let Inserted::Pivot(_) = echelon.insert(z.clone(), sparse::unit(k)) {
                reps.push(z);
            }
        }
        let data = Arc::new(HomologyData { reps, echelon });
        self.cache.lock().unwrap().insert(n, data.clone());
        data
    }

    /// Homology in degree `n`: a basis of cycles whose classes form a basis.
    pub fn homology(&self, n: i64) -> Result<Homology, ComplexError> {
        self.check_trusted(n)?;
        Ok(Homology { degree: n, data: self.homology_data(n), field: self.field() })
    }

    /// Homology dims for every trusted degree, lowest first.
    pub fn homology_dims(&self) -> Vec<(i64, usize)> {
        let (lo, hi) = self.trusted;
        (lo..=hi).map(|n| (n, self.homology_data(n).reps.len())).collect()
    }

    pub fn is_cycle(&self, n: i64, z: &SVec) -> bool {
        self.diff_ref(n).is_none_or(|d| d.apply(z).is_empty())
    }

    /// Re-indexes so that `shift(c, m)_n = c_{n-m}`, with differentials
    /// multiplied by `(-1)^m`.
    pub fn shift(&self, m: i64) -> Complex {
        let f = self.field();
        let s = f.sign(m);
        Complex {
            left: self.left.clone(),
            right: self.right.clone(),
            lo: self.lo + m,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&s)).collect(),
            trusted: (self.trusted.0 + m, self.trusted.1 + m),
            cache: Default::default(),
        }
    }

    /// Keeps the terms in degrees `lo..=hi` (brutal truncation). The trusted
    /// range shrinks by one at each cut end.
    pub fn truncate(&self, lo: i64, hi: i64) -> Complex {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi());
        assert!(lo <= hi, "empty truncation");
        let terms: Vec<Bimodule> = (lo..=hi).map(|n| self.term(n).unwrap().clone()).collect();
        let mut diffs: Vec<Matrix> = (lo..=hi).map(|n| self.diff(n)).collect();
        diffs[0] = Matrix::zeros(self.field(), 0, terms[0].dim());
        let t_lo = if lo > self.lo { lo + 1 } else { lo };
        let t_hi = if hi < self.hi() { hi - 1 } else { hi };
        Complex {
            left: self.left.clone(),
            right: self.right.clone(),
            lo,
            terms,
            diffs,
            trusted: (t_lo.max(self.trusted.0), t_hi.min(self.trusted.1)),
            cache: Default::default(),
        }
    }

    /// Forgets the actions, keeping only the underlying complex of vector spaces.
    pub fn underlying(&self) -> Complex {
        let k = Arc::new(crate::algebra::base_field(self.field()));
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let id = Matrix::identity(self.field(), t.dim());
                Bimodule::new(k.clone(), k.clone(), t.dim(), vec![id.clone()], vec![id]).unwrap()
            })
            .collect();
        Complex {
            left: k.clone(),
            right: k,
            lo: self.lo,
            terms,
            diffs: self.diffs.clone(),
            trusted: self.trusted,
            cache: self.cache.clone(),
        }
    }
}

/// A homology group with a chosen basis of representing cycles.
#[derive(Clone, Debug)]
pub struct Homology {
    degree: i64,
    data: Arc<HomologyData>,
    field: Field,
}

impl Homology {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.data.reps.len()
    }

    pub fn reps(&self) -> &[SVec] {
        &self.data.reps
    }

    /// Coordinates of the class of a cycle in the basis of representatives.
    pub fn class_of(&self, z: &SVec) -> Result<SVec, ComplexError> {
        let (rem, tag) = self.data.echelon.reduce(z.clone());
        if !rem.is_empty() {
            return Err(ComplexError::NotACycle(self.degree));
        }
        Ok(sparse::scale(&self.field, &self.field.from_i64(-1), &tag))
    }

    pub fn is_boundary(&self, z: &SVec) -> Result<bool, ComplexError> {
        Ok(self.class_of(z)?.is_empty())
    }

    /// The cycle `Σ c_i rep_i`.
    pub fn cycle(&self, coords: &SVec) -> SVec {
        let f = self.field;
        let mut out = Vec::new();
        for (i, c) in coords {
            out = sparse::axpy(&f, &out, c, &self.data.reps[*i]);
        }
        out
    }
}

/// A chain map of degree `r`: components `f_n : C_n → D_{n+r}` with
/// `d∘f = (-1)^r f∘d`. Components are known for source degrees in `defined`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    degree: i64,
    comps: BTreeMap<i64, Matrix>,
    defined: (i64, i64),
}

impl ChainMap {
    /// Builds and checks a chain map; `comps` may omit zero components.
    pub fn new(
        source: Arc<Complex>,
        target: Arc<Complex>,
        degree: i64,
        comps: BTreeMap<i64, Matrix>,
        defined: (i64, i64),
    ) -> Result<Self, ComplexError> {
        let map = Self::unchecked(source, target, degree, comps, defined)?;
        map.check()?;
        Ok(map)
    }

    /// Builds without checking the chain-map identity (shapes are checked).
    pub fn unchecked(
        source: Arc<Complex>,
        target: Arc<Complex>,
        degree: i64,
        comps: BTreeMap<i64, Matrix>,
        defined: (i64, i64),
    ) -> Result<Self, ComplexError> {
        for (n, m) in &comps {
            if m.cols() != source.dim(*n) || m.rows() != target.dim(n + degree) {
                return Err(ComplexError::Shape(format!(
                    "component at degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n + degree),
                    source.dim(*n)
                )));
            }
        }
        let comps = comps.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(ChainMap { source, target, degree, comps, defined })
    }

    pub fn identity(c: &Arc<Complex>) -> Self {
        let comps = (c.lo()..=c.hi()).map(|n| (n, Matrix::identity(c.field(), c.dim(n)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), degree: 0, comps, defined: (c.lo(), c.hi()) }
    }

    pub fn zero(source: &Arc<Complex>, target: &Arc<Complex>, degree: i64) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            comps: BTreeMap::new(),
            defined: (source.lo(), source.hi()),
        }
    }

    pub fn source(&self) -> &Arc<Complex> {
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

    pub fn component(&self, n: i64) -> Matrix {
        self.comps.get(&n).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.source.field(), self.target.dim(n + self.degree), self.source.dim(n))
        })
    }

    /// Checks `d∘f = (-1)^r f∘d` wherever both sides are known.
    pub fn check(&self) -> Result<(), ComplexError> {
        let f = self.source.field();
        let s = f.sign(self.degree);
        let (lo, hi) = self.defined;
        for n in lo..=hi {
            if n == lo && lo > self.source.lo() {
                continue;
            }
            let lhs = self.target.diff(n + self.degree).mul(&self.component(n));
            let rhs = self.component(n - 1).mul(&self.source.diff(n)).scale(&s);
            if lhs != rhs {
                return Err(ComplexError::NotChainMap(n));
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        let mut comps = BTreeMap::new();
        let (lo, hi) = other.defined;
        for n in lo..=hi {
            comps.insert(n, self.component(n + other.degree).mul(&other.component(n)));
        }
        let hi2 = hi.min(self.defined.1 - other.degree);
        let lo2 = lo.max(self.defined.0 - other.degree);
        ChainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            comps: comps.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
            defined: (lo2, hi2),
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        self.axpy(&self.source.field().one(), other)
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.axpy(&self.source.field().from_i64(-1), other)
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &Elem, other: &ChainMap) -> ChainMap {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let lo = self.defined.0.max(other.defined.0);
        let hi = self.defined.1.min(other.defined.1);
        let comps = (lo..=hi)
            .map(|n| (n, self.component(n).axpy(c, &other.component(n))))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree, comps, defined: (lo, hi) }
    }

    pub fn scale(&self, c: &Elem) -> ChainMap {
        let comps = self.comps.iter().map(|(n, m)| (*n, m.scale(c))).filter(|(_, m)| !m.is_zero()).collect();
        ChainMap { comps, ..self.clone() }
    }

    /// Restricts the range of known components.
    pub fn restrict(&self, lo: i64, hi: i64) -> ChainMap {
        let comps = self.comps.range(lo..=hi).map(|(n, m)| (*n, m.clone())).collect();
        ChainMap { comps, defined: (lo.max(self.defined.0), hi.min(self.defined.1)), ..self.clone() }
    }
}

/// Components `h_n : C_n → D_{n+r+1}` witnessing `f - g = d h + (-1)^r h d`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub degree: i64,
    pub comps: BTreeMap<i64, Matrix>,
}

impl Homotopy {
    /// Checks the homotopy equation on source degrees `lo..=hi`.
    pub fn witnesses(&self, f: &ChainMap, g: &ChainMap, lo: i64, hi: i64) -> bool {
        let fld = f.source.field();
        let s = fld.sign(self.degree);
        let h = |n: i64| {
            self.comps.get(&n).cloned().unwrap_or_else(|| {
                Matrix::zeros(fld, f.target.dim(n + self.degree + 1), f.source.dim(n))
            })
        };
        (lo..=hi).all(|n| {
            let lhs = f.component(n).sub(&g.component(n));
            let rhs = f.target.diff(n + self.degree + 1).mul(&h(n)).add(&h(n - 1).mul(&f.source.diff(n)).scale(&s));
            lhs == rhs
        })
    }
}

/// Matrix of `H_n(f)` on the chosen homology bases.
pub fn induced_on_homology(f: &ChainMap, n: i64) -> Result<Matrix, ComplexError> {
    let hs = f.source.homology(n)?;
    let ht = f.target.homology(n + f.degree)?;
    let (lo, hi) = f.defined;
    if n < lo || n > hi {
        return Err(ComplexError::OutsideTrustedRange { degree: n, lo, hi });
    }
    let m = f.component(n);
    let cols = hs
        .reps()
        .iter()
        .map(|z| ht.class_of(&m.apply(z)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_columns(f.source.field(), ht.dim(), cols))
}

/// True iff `H_n(f)` is bijective for every `n` in `lo..=hi`.
pub fn is_quasi_iso_on(f: &ChainMap, lo: i64, hi: i64) -> Result<bool, ComplexError> {
    for n in lo..=hi {
        let m = induced_on_homology(f, n)?;
        if m.rows() != m.cols() || linalg::rank(&m) != m.rows() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Quasi-isomorphism test over the overlap of both trusted ranges and the
/// range where `f` is known.
pub fn is_quasi_iso(f: &ChainMap) -> Result<bool, ComplexError> {
    assert_eq!(f.degree, 0, "quasi-isomorphisms have degree 0");
    let lo = f.source.trusted.0.max(f.target.trusted.0).max(f.defined.0);
    let hi = f.source.trusted.1.min(f.target.trusted.1).min(f.defined.1);
    is_quasi_iso_on(f, lo, hi)
}

/// Block-diagonal assembly used by several constructions.
pub(crate) fn block_diagonal(field: Field, blocks: &[Matrix]) -> Matrix {
    let mut out = Matrix::zeros(field, 0, 0);
    for b in blocks {
        out = out.direct_sum(b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{base_field, dual_numbers, regular_bimodule};

    fn q() -> Field {
        Field::Rationals
    }

    fn k_bimodule() -> Bimodule {
        regular_bimodule(&Arc::new(base_field(q())))
    }

    #[test]
    fn zero_and_identity_differentials() {
        let k = k_bimodule();
        let c = Complex::two_term(k.clone(), k.clone(), Matrix::zeros(q(), 1, 1)).unwrap();
        assert_eq!(c.homology_dims(), vec![(0, 1), (1, 1)]);
        let c = Complex::two_term(k.clone(), k, Matrix::identity(q(), 1)).unwrap();
        assert_eq!(c.homology_dims(), vec![(0, 0), (1, 0)]);
    }

    fn dual_periodic() -> Complex {
        // A --·2x--> A --·0--> A in degrees 2, 1, 0
        let a = Arc::new(dual_numbers(q()));
        let r = regular_bimodule(&a);
        let two_x = a.right_mult(1).scale(&q().from_i64(2));
        let z = Matrix::zeros(q(), 2, 2);
        Complex::new(0, vec![r.clone(), r.clone(), r], vec![Matrix::zeros(q(), 0, 2), z, two_x])
            .unwrap()
            .with_trusted(1, 1)
    }

    #[test]
    fn dual_numbers_periodic_piece() {
        let c = dual_periodic().set_trusted(0, 2);
        // degree 1: ker 0 = A, image of 2x is span(x): dim 1
        assert_eq!(c.homology(1).unwrap().dim(), 1);
        // degree 0: all of A, nothing hits it
        assert_eq!(c.homology(0).unwrap().dim(), 2);
        assert!(dual_periodic().homology(0).is_err());
    }

    #[test]
    fn shifting() {
        let c = dual_periodic().set_trusted(0, 2);
        assert_eq!(c.shift(0).homology_dims(), c.homology_dims());
        let s = c.shift(1);
        assert_eq!(s.homology(2).unwrap().dim(), c.homology(1).unwrap().dim());
        assert_eq!(s.shift(-1).homology_dims(), c.homology_dims());
    }

    #[test]
    fn homology_classes() {
        let c = dual_periodic().set_trusted(0, 2);
        let h = c.homology(1).unwrap();
        let x = sparse::unit(1);
        assert!(h.is_boundary(&x).unwrap());
        let one = sparse::unit(0);
        assert_eq!(h.class_of(&one).unwrap().len(), 1);
    }

    #[test]
    fn identity_is_quasi_iso() {
        let c = Arc::new(dual_periodic().set_trusted(0, 2));
        let id = ChainMap::identity(&c);
        assert!(is_quasi_iso(&id).unwrap());
        assert!(induced_on_homology(&id, 0).unwrap().is_identity());
        let z = ChainMap::zero(&c, &c, 0);
        assert!(!is_quasi_iso(&z).unwrap());
    }
}
