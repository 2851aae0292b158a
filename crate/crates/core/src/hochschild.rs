//! Bar resolutions, Hochschild chains and cochains, and the comparison maps
//! between them and the bar-resolution descriptions.
//!
//! Chains: `C_n(A, M) = M ⊗ A^{⊗n}`, basis index `m·d^n + multi-index`.
//! Cochains: `C^n(A, M) = Hom(A^{⊗n}, M)` stored as flattened `dim M × d^n`
//! matrices (same index formula) in homological degree `-n`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{base_field, Algebra, Bimodule};
use crate::complexes::{
    lift_through_quasi_iso, tensor_over_enveloping, ChainMap, Complex, ComplexError, FreeComplex, FreeHomotopy, FreeMap,
    Homology, IteratedBar, TensorProduct,
};
use crate::linalg::{self, sparse, Elem, Field, Matrix, SVec};

pub const DEFAULT_BUDGET: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochschildError {
    #[error("size budget exceeded: {what} needs dimension {dim}, budget is {budget}")]
    SizeBudgetExceeded { what: String, dim: usize, budget: usize },
    #[error("degree {degree} is beyond the trusted range (max {max})")]
    BeyondTrustedRange { degree: usize, max: usize },
    #[error("cochain of degree {0} is not closed")]
    NotClosed(usize),
    #[error("identification check failed at degree {0}")]
    IdentificationFailed(i64),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

pub(crate) fn check_budget(what: &str, dim: usize, budget: usize) -> Result<(), HochschildError> {
    if dim > budget {
        Err(HochschildError::SizeBudgetExceeded { what: what.to_string(), dim, budget })
    } else {
        Ok(())
    }
}

/// `d^n`, saturating.
fn power(d: usize, n: usize) -> usize {
    (0..n).fold(1usize, |acc, _| acc.saturating_mul(d))
}

/// Multi-index digits of `idx` in base `d`, most significant first.
fn digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for p in (0..n).rev() {
        out[p] = idx % d;
        idx /= d;
    }
    out
}

fn undigits(t: &[usize], d: usize) -> usize {
    t.iter().fold(0, |acc, x| acc * d + x)
}

/// The bar resolution truncated at `n_max`, as a free complex of
/// `A`-bimodules, its materialization, and its augmentation onto `A`.
#[derive(Clone, Debug)]
pub struct BarResolution {
    pub algebra: Arc<Algebra>,
    pub n_max: usize,
    pub free: Arc<FreeComplex>,
    pub complex: Arc<Complex>,
    pub target: Arc<Complex>,
    pub augmentation: FreeMap,
    pub augmentation_map: ChainMap,
}

/// Augmentation-style map sending the degree-0 generator to the unit.
fn unit_augmentation(free: &Arc<FreeComplex>, a: &Arc<Algebra>) -> (Arc<Complex>, FreeMap) {
    let target = Arc::new(Complex::concentrated(Bimodule::regular(a), 0));
    let mut images = BTreeMap::new();
    images.insert(0, vec![a.unit().clone()]);
    let map = FreeMap::new(free.clone(), target.clone(), 0, images, (free.lo(), free.hi())).expect("shapes");
    (target, map)
}

pub fn bar_resolution(a: &Arc<Algebra>, n_max: usize, budget: usize) -> Result<BarResolution, HochschildError> {
    let top = power(a.dim(), n_max + 2);
    check_budget(&format!("bar resolution up to degree {n_max}"), top, budget)?;
    let free = Arc::new(IteratedBar::bar_of(a).free(n_max as i64));
    let complex = Arc::new(free.materialize());
    let (target, augmentation) = unit_augmentation(&free, a);
    let augmentation_map = augmentation.to_chain_map(&complex);
    augmentation_map.check()?;
    Ok(BarResolution { algebra: a.clone(), n_max, free, complex, target, augmentation, augmentation_map })
}

/// Bar resolution of `B` as a free complex only (generators `B^{⊗n}`), for
/// algebras whose materialized bar terms would be too large. The budget
/// bounds the generator count.
pub fn free_bar(b: &Arc<Algebra>, hi: usize, budget: usize) -> Result<(Arc<FreeComplex>, Arc<Complex>, FreeMap), HochschildError> {
    check_budget(&format!("bar generators up to degree {hi}"), power(b.dim(), hi), budget)?;
    let free = Arc::new(IteratedBar::bar_of(b).free(hi as i64));
    let (target, aug) = unit_augmentation(&free, b);
    Ok((free, target, aug))
}

/// Inverse multiplication table: for each `k`, the `(x, y, c)` with
/// `e_x e_y = ... + c e_k + ...`.
fn preimages(a: &Algebra) -> Vec<Vec<(usize, usize, Elem)>> {
    let mut out = vec![Vec::new(); a.dim()];
    for x in 0..a.dim() {
        for y in 0..a.dim() {
            for (k, c) in a.basis_product(x, y) {
                out[*k].push((x, y, c.clone()));
            }
        }
    }
    out
}

/// Hochschild boundary of `m ⊗ a_1 ⊗ ... ⊗ a_n` (basis tuple) in `C_{n-1}`.
fn hochschild_boundary(a: &Algebra, m: &Bimodule, mi: usize, t: &[usize]) -> SVec {
    let f = a.field();
    let d = a.dim();
    let n = t.len();
    if n == 0 {
        return Vec::new();
    }
    let dn1 = power(d, n - 1);
    let mut items = Vec::new();
    // m a_1 ⊗ a_2 ... a_n
    let rest = undigits(&t[1..], d);
    for (r, c) in m.right(t[0]).column(mi) {
        items.push((r * dn1 + rest, c.clone()));
    }
    // (-1)^i m ⊗ ... a_i a_{i+1} ...
    for i in 1..n {
        let s = f.sign(i as i64);
        for (k, c) in a.basis_product(t[i - 1], t[i]) {
            let mut nt = t[..i - 1].to_vec();
            nt.push(*k);
            nt.extend(&t[i + 1..]);
            items.push((mi * dn1 + undigits(&nt, d), f.mul(&s, c)));
        }
    }
    // (-1)^n a_n m ⊗ a_1 ... a_{n-1}
    let s = f.sign(n as i64);
    let front = undigits(&t[..n - 1], d);
    for (r, c) in m.left(t[n - 1]).column(mi) {
        items.push((r * dn1 + front, f.mul(&s, c)));
    }
    sparse::collect(&f, items)
}

/// `C_•(A, M)` in degrees `0..=n_max`, trusted up to `n_max - 1`.
pub fn hochschild_chains(a: &Arc<Algebra>, m: &Bimodule, n_max: usize, budget: usize) -> Result<Arc<Complex>, HochschildError> {
    let k = Complex::concentrated(m.clone(), 0);
    Ok(chains_with_coefficients(a, &k, n_max as i64, budget)?.complex)
}

/// Hochschild chains with coefficients in a complex, with the summand
/// layout `(p, n, offset)` of each total degree.
#[derive(Clone, Debug)]
pub struct CoefficientChains {
    pub complex: Arc<Complex>,
    pub layouts: BTreeMap<i64, Vec<(i64, usize, usize)>>,
}

impl CoefficientChains {
    /// Offset of the `K_p ⊗ A^{⊗(total - p)}` summand.
    pub fn offset(&self, total: i64, p: i64) -> Option<usize> {
        self.layouts.get(&total)?.iter().find(|(pp, _, _)| *pp == p).map(|(_, _, o)| *o)
    }
}

/// `g ⊗ id` on chains, for a degree-0 chain map `g : K → K'` of bimodule
/// complexes, in total degrees where both chain complexes exist.
pub fn chains_map(a: &Algebra, g: &ChainMap, src: &CoefficientChains, dst: &CoefficientChains) -> ChainMap {
    assert_eq!(g.degree(), 0);
    let f = a.field();
    let d = a.dim();
    let (lo, hi) = (src.complex.lo().max(dst.complex.lo()), src.complex.hi().min(dst.complex.hi()));
    let mut comps = BTreeMap::new();
    for total in lo..=hi {
        let mut columns = Vec::with_capacity(src.complex.dim(total));
        for (p, n, _) in &src.layouts[&total] {
            let gp = g.component(*p);
            let dn = power(d, *n);
            let o = dst.offset(total, *p);
            for mi in 0..gp.cols() {
                for u in 0..dn {
                    let col = match o {
                        Some(o) => gp.column(mi).iter().map(|(r, c)| (o + r * dn + u, c.clone())).collect(),
                        None => Vec::new(),
                    };
                    columns.push(col);
                }
            }
        }
        comps.insert(total, Matrix::from_columns(f, dst.complex.dim(total), columns));
    }
    ChainMap::unchecked(src.complex.clone(), dst.complex.clone(), 0, comps, (lo, hi)).expect("shapes")
}

/// `C_•(A, K)` for a bounded complex `K` of `A`-bimodules: the total complex
/// of `K_p ⊗ A^{⊗n}` with `D = d_K ⊗ 1 + (-1)^p b`, in total degrees up to
/// `max_total`. Summands of total degree `N` are ordered by `p` ascending.
pub fn chains_with_coefficients(a: &Arc<Algebra>, kc: &Complex, max_total: i64, budget: usize) -> Result<CoefficientChains, HochschildError> {
    let f = a.field();
    let d = a.dim();
    let kf = Arc::new(base_field(f));
    let lo = kc.lo();
    let layout = |total: i64| -> Vec<(i64, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for p in kc.lo()..=kc.hi() {
            let n = total - p;
            if n < 0 {
                continue;
            }
            let size = kc.dim(p) * power(d, n as usize);
            out.push((p, n as usize, off));
            off += size;
        }
        out
    };
    let dim_of = |total: i64| -> usize {
        layout(total).iter().map(|(p, n, _)| kc.dim(*p) * power(d, *n)).sum()
    };
    for total in lo..=max_total {
        check_budget(&format!("Hochschild chains in degree {total}"), dim_of(total), budget)?;
    }
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for total in lo..=max_total {
        let dim = dim_of(total);
        let id = Matrix::identity(f, dim);
        terms.push(Bimodule::new(kf.clone(), kf.clone(), dim, vec![id.clone()], vec![id]).unwrap());
        if total == lo {
            diffs.push(Matrix::zeros(f, 0, dim));
            continue;
        }
        let below = layout(total - 1);
        let find = |p: i64| below.iter().find(|(pp, _, _)| *pp == p).map(|(_, _, o)| *o);
        let mut columns = Vec::with_capacity(dim);
        for (p, n, _) in layout(total) {
            let term = kc.term(p).unwrap();
            let dn = power(d, n);
            let sign = f.sign(p);
            let dk = kc.diff_ref(p);
            for mi in 0..term.dim() {
                for u in 0..dn {
                    let mut items = Vec::new();
                    if let (Some(dk), Some(o)) = (dk, find(p - 1)) {
                        for (r, c) in dk.column(mi) {
                            items.push((o + r * dn + u, c.clone()));
                        }
                    }
                    if n > 0 {
                        if let Some(o) = find(p) {
                            let t = digits(u, d, n);
                            for (i, c) in hochschild_boundary(a, term, mi, &t) {
                                items.push((o + i, f.mul(&sign, &c)));
                            }
                        }
                    }
                    columns.push(sparse::collect(&f, items));
                }
            }
        }
        diffs.push(Matrix::from_columns(f, dim_of(total - 1), columns));
    }
    let c = Complex::with_rings(kf.clone(), kf, lo, terms, diffs)?;
    let (klo, khi) = kc.trusted();
    let trust_lo = if klo <= kc.lo() { lo } else { klo };
    let trust_hi = if khi >= kc.hi() { max_total - 1 } else { khi.min(max_total - 1) };
    let layouts = (lo..=max_total).map(|t| (t, layout(t))).collect();
    Ok(CoefficientChains { complex: Arc::new(c.set_trusted(trust_lo, trust_hi)), layouts })
}

/// `C^•(A, M)` in homological degrees `-n_max..=0` (cochain degree `n` at `-n`).
pub fn hochschild_cochains(a: &Arc<Algebra>, m: &Bimodule, n_max: usize, budget: usize) -> Result<Arc<Complex>, HochschildError> {
    let f = a.field();
    let d = a.dim();
    let dm = m.dim();
    let kf = Arc::new(base_field(f));
    for n in 0..=n_max {
        check_budget(&format!("Hochschild cochains in degree {n}"), dm * power(d, n), budget)?;
    }
    let pre = preimages(a);
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in (0..=n_max).rev() {
        let dim = dm * power(d, n);
        let id = Matrix::identity(f, dim);
        terms.push(Bimodule::new(kf.clone(), kf.clone(), dim, vec![id.clone()], vec![id]).unwrap());
        if n == n_max {
            diffs.push(Matrix::zeros(f, 0, dim));
            continue;
        }
        diffs.push(coboundary_matrix(a, m, n, &pre));
    }
    let c = Complex::with_rings(kf.clone(), kf, -(n_max as i64), terms, diffs)?;
    Ok(Arc::new(c.set_trusted(-(n_max as i64) + 1, 0)))
}

/// Matrix of `δ : C^n(A, M) → C^{n+1}(A, M)`.
fn coboundary_matrix(a: &Algebra, m: &Bimodule, n: usize, pre: &[Vec<(usize, usize, Elem)>]) -> Matrix {
    let f = a.field();
    let d = a.dim();
    let dn = power(d, n);
    let dn1 = power(d, n + 1);
    let mut columns = Vec::with_capacity(m.dim() * dn);
    for mi in 0..m.dim() {
        for u in 0..dn {
            let t = digits(u, d, n);
            let mut items = Vec::new();
            // a_1 · f(a_2, ..., a_{n+1})
            for a1 in 0..d {
                let mut nt = vec![a1];
                nt.extend(&t);
                let idx = undigits(&nt, d);
                for (r, c) in m.left(a1).column(mi) {
                    items.push((r * dn1 + idx, c.clone()));
                }
            }
            // (-1)^i f(..., a_i a_{i+1}, ...)
            for i in 1..=n {
                let s = f.sign(i as i64);
                for (x, y, c) in &pre[t[i - 1]] {
                    let mut nt = t[..i - 1].to_vec();
                    nt.push(*x);
                    nt.push(*y);
                    nt.extend(&t[i..]);
                    items.push((mi * dn1 + undigits(&nt, d), f.mul(&s, c)));
                }
            }
            // (-1)^{n+1} f(a_1, ..., a_n) · a_{n+1}
            let s = f.sign(n as i64 + 1);
            for last in 0..d {
                let mut nt = t.clone();
                nt.push(last);
                let idx = undigits(&nt, d);
                for (r, c) in m.right(last).column(mi) {
                    items.push((r * dn1 + idx, f.mul(&s, c)));
                }
            }
            columns.push(sparse::collect(&f, items));
        }
    }
    Matrix::from_columns(f, m.dim() * dn1, columns)
}

/// `HH_n(A, M)` with a basis of representing cycles.
pub fn hochschild_homology(a: &Arc<Algebra>, m: &Bimodule, n: usize, n_max: usize, budget: usize) -> Result<Homology, HochschildError> {
    if n + 1 > n_max {
        return Err(HochschildError::BeyondTrustedRange { degree: n, max: n_max.saturating_sub(1) });
    }
    let c = hochschild_chains(a, m, n_max, budget)?;
    Ok(c.homology(n as i64)?)
}

/// `HH^n(A, M)` with a basis of representing cocycles.
pub fn hochschild_cohomology(a: &Arc<Algebra>, m: &Bimodule, n: usize, n_max: usize, budget: usize) -> Result<Homology, HochschildError> {
    if n + 1 > n_max {
        return Err(HochschildError::BeyondTrustedRange { degree: n, max: n_max.saturating_sub(1) });
    }
    let c = hochschild_cochains(a, m, n_max, budget)?;
    Ok(c.homology(-(n as i64))?)
}

/// A Hochschild cochain `A^{⊗n} → M`, flattened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub coeff_dim: usize,
    pub values: SVec,
}

impl Cochain {
    pub fn new(degree: usize, coeff_dim: usize, values: SVec) -> Self {
        Cochain { degree, coeff_dim, values }
    }

    /// The degree-0 cochain with value `1_A`.
    pub fn unit(a: &Algebra) -> Self {
        Cochain { degree: 0, coeff_dim: a.dim(), values: a.unit().clone() }
    }

    /// `f(a_{t_1}, ..., a_{t_n})` as a vector in `M`.
    pub fn eval(&self, a_dim: usize, t: &[usize]) -> SVec {
        let dn = power(a_dim, self.degree);
        let u = undigits(t, a_dim);
        self.values.iter().filter(|(i, _)| i % dn == u).map(|(i, c)| (i / dn, c.clone())).collect()
    }

    /// All values, indexed by the multi-index, as vectors in `M`.
    pub fn table(&self, a_dim: usize) -> Vec<SVec> {
        let dn = power(a_dim, self.degree);
        let mut out = vec![Vec::new(); dn];
        for (i, c) in &self.values {
            out[i % dn].push((i / dn, c.clone()));
        }
        out
    }

    pub fn is_closed(&self, a: &Algebra, m: &Bimodule) -> bool {
        let pre = preimages(a);
        coboundary_matrix(a, m, self.degree, &pre).apply(&self.values).is_empty()
    }

    /// `δ` of this cochain.
    pub fn coboundary(&self, a: &Algebra, m: &Bimodule) -> Cochain {
        let pre = preimages(a);
        let values = coboundary_matrix(a, m, self.degree, &pre).apply(&self.values);
        Cochain { degree: self.degree + 1, coeff_dim: self.coeff_dim, values }
    }

    pub fn axpy(&self, c: &Elem, other: &Cochain, f: Field) -> Cochain {
        assert_eq!(self.degree, other.degree);
        Cochain { values: sparse::axpy(&f, &self.values, c, &other.values), ..self.clone() }
    }
}

/// Degreewise isomorphism `C_n(A, M) → M ⊗_{A^e} Bar(A)_n`,
/// `m ⊗ a_1 ... a_n ↦ [m ⊗ (1 ⊗ a_1 ... a_n ⊗ 1)]`.
#[derive(Clone, Debug)]
pub struct ChainsVsBar {
    pub chains: Arc<Complex>,
    pub tensor: TensorProduct,
    pub maps: BTreeMap<i64, Matrix>,
}

impl ChainsVsBar {
    pub fn map(&self, n: i64) -> &Matrix {
        &self.maps[&n]
    }
}

/// The raw element `m ⊗ w` of `M ⊗_k Bar(A)_n` for `w` in free layout.
fn raw_index(m_idx: usize, w_idx: usize, w_dim: usize) -> usize {
    m_idx * w_dim + w_idx
}

pub fn chains_vs_bar_identification(
    a: &Arc<Algebra>,
    m: &Bimodule,
    bar: &BarResolution,
    hi: usize,
    budget: usize,
) -> Result<ChainsVsBar, HochschildError> {
    let f = a.field();
    let chains = hochschild_chains(a, m, hi, budget)?;
    let truncated = bar.complex.truncate(0, hi as i64);
    let tensor = tensor_over_enveloping(m, &truncated)?;
    let mut maps = BTreeMap::new();
    for n in 0..=hi as i64 {
        let gens = bar.free.gens(n);
        let wdim = bar.free.term_dim(n);
        let q = &tensor.quotients[&n];
        let mut columns = Vec::with_capacity(m.dim() * gens);
        for mi in 0..m.dim() {
            for g in 0..gens {
                let w = bar.free.generator(n, g);
                let raw: SVec = w.iter().map(|(wi, c)| (raw_index(mi, *wi, wdim), c.clone())).collect();
                columns.push(q.pi.apply(&raw));
            }
        }
        let map = Matrix::from_columns(f, q.dim(), columns);
        if map.rows() != map.cols() || linalg::rank(&map) != map.rows() {
            return Err(HochschildError::IdentificationFailed(n));
        }
        maps.insert(n, map);
    }
    for n in 1..=hi as i64 {
        let lhs = tensor.complex.diff(n).mul(&maps[&n]);
        let rhs = maps[&(n - 1)].mul(&chains.diff(n));
        if lhs != rhs {
            return Err(HochschildError::IdentificationFailed(n));
        }
    }
    Ok(ChainsVsBar { chains, tensor, maps })
}

/// A cocycle realized as a chain map `Bar(A) → A` of degree `-m` together
/// with its lift `f̃ : Bar(A) → Bar(A)` through the augmentation.
#[derive(Clone, Debug)]
pub struct CocycleMaps {
    pub to_algebra: FreeMap,
    pub lift: FreeMap,
    pub homotopy: FreeHomotopy,
}

/// The chain map `a_0 ⊗ a_1 ... a_m ⊗ a_{m+1} ↦ a_0 f(a_1, ..., a_m) a_{m+1}`.
pub fn cocycle_chain_map(f: &Cochain, bar: &BarResolution) -> Result<FreeMap, HochschildError> {
    let a = &bar.algebra;
    let regular = Bimodule::regular(a);
    if !f.is_closed(a, &regular) {
        return Err(HochschildError::NotClosed(f.degree));
    }
    let m = f.degree as i64;
    let mut images = BTreeMap::new();
    if m <= bar.n_max as i64 {
        images.insert(m, f.table(a.dim()));
    }
    let map = FreeMap::new(bar.free.clone(), bar.target.clone(), -m, images, (0, bar.n_max as i64))?;
    map.check()?;
    Ok(map)
}

pub fn cocycle_to_chain_map(f: &Cochain, bar: &BarResolution) -> Result<CocycleMaps, HochschildError> {
    let to_algebra = cocycle_chain_map(f, bar)?;
    let (lift, homotopy) = lift_through_quasi_iso(&to_algebra, &bar.augmentation_map, bar.n_max as i64)?;
    lift.check()?;
    Ok(CocycleMaps { to_algebra, lift, homotopy })
}

/// Projective replacement `B(A, A, W, B, B) → W` of a complex of
/// `(A, B)`-bimodules, with its augmentation.
#[derive(Clone, Debug)]
pub struct TwoSidedReplacement {
    pub bar: IteratedBar,
    pub free: Arc<FreeComplex>,
    pub augmentation: FreeMap,
}

pub fn two_sided_bar_replacement(w: &Arc<Complex>, hi: i64, budget: usize) -> Result<TwoSidedReplacement, HochschildError> {
    let bar = IteratedBar::two_sided(w);
    for n in bar.min_degree()..=hi {
        let gens: usize = bar.generator_summands(n).iter().map(|(_, _, s)| s).sum();
        check_budget(&format!("two-sided bar generators in degree {n}"), gens, budget)?;
    }
    let free = Arc::new(bar.free(hi));
    let mut images = BTreeMap::new();
    for n in free.lo()..=free.hi() {
        let mut imgs = vec![Vec::new(); free.gens(n)];
        for (key, off, size) in bar.generator_summands(n) {
            if key[1] == 0 && key[3] == 0 {
                for j in 0..size {
                    imgs[off + j] = sparse::unit(j);
                }
            }
        }
        images.insert(n, imgs);
    }
    let augmentation = FreeMap::new(free.clone(), w.clone(), 0, images, (free.lo(), free.hi()))?;
    augmentation.check()?;
    Ok(TwoSidedReplacement { bar, free, augmentation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dual_numbers, matrix_algebra, path_algebra, Quiver};
    use crate::complexes::is_quasi_iso;

    fn q() -> Field {
        Field::Rationals
    }

    fn dims(c: &Complex) -> Vec<usize> {
        c.homology_dims().into_iter().map(|(_, d)| d).collect()
    }

    #[test]
    fn bar_resolution_budget() {
        let a = Arc::new(dual_numbers(q()));
        assert!(bar_resolution(&a, 4, DEFAULT_BUDGET).is_ok());
        let err = bar_resolution(&a, 4, 10).unwrap_err();
        assert!(matches!(err, HochschildError::SizeBudgetExceeded { dim: 64, .. }));
    }

    #[test]
    fn augmentation_is_quasi_iso() {
        let a = Arc::new(dual_numbers(q()));
        let bar = bar_resolution(&a, 4, DEFAULT_BUDGET).unwrap();
        assert!(is_quasi_iso(&bar.augmentation_map).unwrap());
        let k = Arc::new(base_field(q()));
        let bk = bar_resolution(&k, 3, DEFAULT_BUDGET).unwrap();
        assert!(is_quasi_iso(&bk.augmentation_map).unwrap());
    }

    #[test]
    fn dual_numbers_hochschild() {
        let a = Arc::new(dual_numbers(q()));
        let r = Bimodule::regular(&a);
        assert_eq!(dims(&hochschild_chains(&a, &r, 4, DEFAULT_BUDGET).unwrap()), vec![2, 1, 1, 1]);
        let co = hochschild_cochains(&a, &r, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(dims(&co), vec![1, 1, 1, 2]);
        let f2 = Field::prime(2).unwrap();
        let a2 = Arc::new(dual_numbers(f2));
        let r2 = Bimodule::regular(&a2);
        assert_eq!(dims(&hochschild_chains(&a2, &r2, 4, DEFAULT_BUDGET).unwrap()), vec![2, 2, 2, 2]);
        assert_eq!(dims(&hochschild_cochains(&a2, &r2, 4, DEFAULT_BUDGET).unwrap()), vec![2, 2, 2, 2]);
    }

    #[test]
    fn hh1_representative() {
        let a = Arc::new(dual_numbers(q()));
        let r = Bimodule::regular(&a);
        let h = hochschild_homology(&a, &r, 1, 4, DEFAULT_BUDGET).unwrap();
        // 1 ⊗ x has index 0·2 + 1
        assert_eq!(h.class_of(&sparse::unit(1)).unwrap().len(), 1);
        let c = hochschild_cohomology(&a, &r, 1, 4, DEFAULT_BUDGET).unwrap();
        // f(x) = x: row 1, column 1 → index 1·2 + 1
        assert_eq!(c.class_of(&sparse::unit(3)).unwrap().len(), 1);
    }

    #[test]
    fn separable_and_hereditary() {
        let m2 = Arc::new(matrix_algebra(2, q()));
        let r = Bimodule::regular(&m2);
        assert_eq!(dims(&hochschild_cochains(&m2, &r, 3, DEFAULT_BUDGET).unwrap()), vec![0, 0, 1]);
        assert_eq!(dims(&hochschild_chains(&m2, &r, 3, DEFAULT_BUDGET).unwrap()), vec![1, 0, 0]);
        let p = Arc::new(path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1)] }, q()).unwrap());
        let rp = Bimodule::regular(&p);
        assert_eq!(dims(&hochschild_cochains(&p, &rp, 4, DEFAULT_BUDGET).unwrap()), vec![0, 0, 0, 1]);
        assert_eq!(dims(&hochschild_chains(&p, &rp, 4, DEFAULT_BUDGET).unwrap()), vec![2, 0, 0, 0]);
    }

    #[test]
    fn identification_with_bar_side() {
        let a = Arc::new(dual_numbers(q()));
        let r = Bimodule::regular(&a);
        let bar = bar_resolution(&a, 4, DEFAULT_BUDGET).unwrap();
        let id = chains_vs_bar_identification(&a, &r, &bar, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(id.map(0).rows(), 2);
        assert_eq!(id.map(3).rows(), 16);
    }

    #[test]
    fn unit_cocycle_lifts_to_identity() {
        let a = Arc::new(dual_numbers(q()));
        let bar = bar_resolution(&a, 3, DEFAULT_BUDGET).unwrap();
        let maps = cocycle_to_chain_map(&Cochain::unit(&a), &bar).unwrap();
        let mut ids = BTreeMap::new();
        for n in 0..=3 {
            ids.insert(n, (0..bar.free.gens(n)).map(|g| bar.free.generator(n, g)).collect());
        }
        let id = FreeMap::new(bar.free.clone(), bar.complex.clone(), 0, ids, (0, 3)).unwrap();
        assert!(crate::complexes::homotopic(&maps.lift, &id, 2).is_some());
    }

    #[test]
    fn two_sided_replacement_of_regular() {
        let a = Arc::new(dual_numbers(q()));
        let w = Arc::new(Complex::concentrated(Bimodule::regular(&a), 0));
        let rep = two_sided_bar_replacement(&w, 3, DEFAULT_BUDGET).unwrap();
        let mat = Arc::new(rep.free.materialize());
        let aug = rep.augmentation.to_chain_map(&mat);
        assert!(is_quasi_iso(&aug).unwrap());
        assert_eq!(dims(&mat), vec![2, 0, 0]);
    }
}
