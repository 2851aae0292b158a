//! The functor `F = X^∨ ⊗_A - ⊗_A X` from `A`-bimodules to `B`-bimodules,
//! transport of Hochschild classes along a datum, and the square relating
//! the two cap products.
//!
//! `X^∨` has right-`A`-projective terms and `X` left-`A`-projective ones, so
//! the underived tensor products compute the derived ones.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{Algebra, Bimodule};
use crate::complexes::{
    induced_on_homology, lift_through_quasi_iso, tensor_over, ChainMap, Complex, ComplexError, FreeMap,
    TensorProduct,
};
use crate::derived::{quotient_bimodule, sub_bimodule, Counit, DerivedError, TiltingDatum};
use crate::hochschild::{
    chains_map, chains_with_coefficients, cocycle_to_chain_map, free_bar, hochschild_chains, hochschild_cohomology,
    Cochain, CoefficientChains, HochschildError,
};
use crate::linalg::{self, sparse, Matrix, SVec};
use crate::products::{cap, cup, ProductError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransportError {
    #[error("homology is not concentrated in degree 0: nonzero in degrees {0:?}")]
    NotConcentrated(Vec<i64>),
    #[error("degree {degree} needs truncation up to {needed}, but the datum reaches {available}")]
    BeyondMargin { degree: usize, needed: usize, available: usize },
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `FM = X^∨ ⊗_A M ⊗_A X`, with both tensor stages kept for projections.
#[derive(Clone, Debug)]
pub struct FImage {
    pub left: TensorProduct,
    pub full: TensorProduct,
    pub module_dim: usize,
}

impl FImage {
    pub fn complex(&self) -> &Arc<Complex> {
        &self.full.complex
    }

    /// The class of `y ⊗ m ⊗ x` in `FM_{i+j}` for basis vectors
    /// `y ∈ X^∨_i`, `m ∈ M`, `x ∈ X_j`.
    pub fn project(&self, i: i64, y: usize, m: usize, j: i64, x: usize, x_dim: usize) -> SVec {
        let ym = self.left.project(i, 0, &sparse::unit(y), &sparse::unit(m), self.module_dim);
        self.full.project(i, j, &ym, &sparse::unit(x), x_dim)
    }
}

pub fn apply_f(d: &TiltingDatum, m: &Bimodule) -> Result<FImage, TransportError> {
    let mc = Complex::concentrated(m.clone(), 0);
    let left = tensor_over(&d.xv, &mc)?;
    let full = tensor_over(&left.complex, &d.x)?;
    Ok(FImage { left, full, module_dim: m.dim() })
}

/// `N = H_0(C)` for a complex with no other homology, with the zigzag
/// `C ← τ_{≥0} C → N` of quasi-isomorphisms.
#[derive(Clone, Debug)]
pub struct Concentrated {
    pub module: Bimodule,
    pub truncation: Arc<Complex>,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
    pub module_complex: Arc<Complex>,
}

pub fn check_concentrated(c: &Arc<Complex>) -> Result<Concentrated, TransportError> {
    let (lo, hi) = c.trusted();
    let bad: Vec<i64> = (lo..=hi).filter(|&n| n != 0).filter(|&n| c.homology(n).map_or(true, |h| h.dim() != 0)).collect();
    if !bad.is_empty() {
        return Err(TransportError::NotConcentrated(bad));
    }
    c.check_trusted(0)?;
    let f = c.field();
    let c0 = c.term(0).cloned().unwrap_or_else(|| Bimodule::zero(c.left(), c.right()));
    let cycles = linalg::kernel_basis(&c.diff(0));
    let (z0, incl) = sub_bimodule(&c0, &cycles)?;
    let solver = linalg::Solver::new(&incl);
    let d1 = c.diff(1);
    let d1_in_cycles = Matrix::from_columns(
        f,
        z0.dim(),
        d1.columns().iter().map(|col| solver.solve(col).expect("boundaries are cycles")).collect(),
    );
    let mut terms = vec![z0.clone()];
    let mut diffs = vec![Matrix::zeros(f, 0, z0.dim())];
    for n in 1..=c.hi().max(0) {
        terms.push(c.term(n).unwrap().clone());
        diffs.push(if n == 1 { d1_in_cycles.clone() } else { c.diff(n) });
    }
    let truncation = Arc::new(Complex::with_rings(c.left().clone(), c.right().clone(), 0, terms, diffs)?.with_trusted(0, hi));
    let (module, quotient) = quotient_bimodule(&z0, d1_in_cycles.columns())?;
    let module_complex = Arc::new(Complex::concentrated(module.clone(), 0));
    let mut inc = BTreeMap::new();
    inc.insert(0, incl);
    for n in 1..=truncation.hi() {
        inc.insert(n, Matrix::identity(f, c.dim(n)));
    }
    let inclusion = ChainMap::new(truncation.clone(), c.clone(), 0, inc, (0, hi))?;
    let mut proj = BTreeMap::new();
    proj.insert(0, quotient.pi);
    let projection = ChainMap::new(truncation.clone(), module_complex.clone(), 0, proj, (0, hi))?;
    Ok(Concentrated { module, truncation, inclusion, projection, module_complex })
}

/// `T_n : HH_n(A, M) → HH_n(B, N)` on the chosen homology bases.
#[derive(Clone, Debug)]
pub struct HomologyTransport {
    pub degree: usize,
    pub matrix: Matrix,
    pub target_module: Bimodule,
}

impl HomologyTransport {
    pub fn is_invertible(&self) -> bool {
        self.matrix.rows() == self.matrix.cols() && linalg::rank(&self.matrix) == self.matrix.rows()
    }
}

/// The largest chain degree whose transport the datum supports: `η` is
/// known up to `max_degree - 1`, and homology in degree `n` reads degree `n + 1`.
pub fn homology_margin(d: &TiltingDatum) -> usize {
    d.bar_a.n_max - 1
}

/// Everything the homology transport needs for a fixed coefficient bimodule.
#[derive(Clone, Debug)]
pub struct HomologyModels {
    pub source: Arc<Complex>,
    pub image: FImage,
    pub concentrated: Concentrated,
    pub phi: ChainMap,
    pub middle: CoefficientChains,
    pub truncated: CoefficientChains,
    pub target: CoefficientChains,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

/// `Φ(m ⊗ v) = Θ(m ⊗ η(1 ⊗ v ⊗ 1))` with
/// `Θ(m ⊗ x ⊗ w ⊗ y) = (-1)^{|y|(|x| + |w|)} (y ⊗ m ⊗ x) ⊗ w`.
fn phi_map(
    d: &TiltingDatum,
    m: &Bimodule,
    source: &Arc<Complex>,
    image: &FImage,
    middle: &CoefficientChains,
    top: i64,
) -> Result<ChainMap, TransportError> {
    let f = d.a.field();
    let (da, db) = (d.a.dim(), d.b.dim());
    let r_bar = &d.models.r_bar;
    let mut comps = BTreeMap::new();
    for n in 0..=top {
        let dn = da.pow(n as u32);
        let mut cols = Vec::with_capacity(m.dim() * dn);
        let eta: Vec<Vec<(Vec<i64>, Vec<usize>, linalg::Elem)>> = (0..dn)
            .map(|v| {
                d.eta.image(n, v).into_iter().map(|(idx, c)| {
                    let (k, t) = r_bar.decompose(n, idx);
                    (k, t, c)
                }).collect()
            })
            .collect();
        for mi in 0..m.dim() {
            for terms in &eta {
                let mut out = Vec::new();
                for (k, t, c) in terms {
                    let (i0, q, i1) = (k[0], k[1] as usize, k[2]);
                    let w = t[1..=q].iter().fold(0, |acc, b| acc * db + b);
                    let p = i0 + i1;
                    let fm = image.project(i1, t[q + 1], mi, i0, t[0], d.x.dim(i0));
                    let Some(off) = middle.offset(n, p) else { continue };
                    let sign = f.sign(i1 * (i0 + q as i64));
                    let coeff = f.mul(&sign, c);
                    let dq = db.pow(q as u32);
                    let shifted: SVec = fm.iter().map(|(kk, x)| (off + kk * dq + w, f.mul(&coeff, x))).collect();
                    out = sparse::add(&f, &out, &sparse::collect(&f, shifted));
                }
                cols.push(out);
            }
        }
        comps.insert(n, Matrix::from_columns(f, middle.complex.dim(n), cols));
    }
    Ok(ChainMap::new(source.clone(), middle.complex.clone(), 0, comps, (0, top))?)
}

pub fn homology_models(d: &TiltingDatum, m: &Bimodule, n: usize) -> Result<HomologyModels, TransportError> {
    let margin = homology_margin(d);
    if n > margin {
        return Err(TransportError::BeyondMargin { degree: n, needed: n + 1, available: d.bar_a.n_max });
    }
    let top = n as i64 + 1;
    let budget = d.config.budget;
    let source = hochschild_chains(&d.a, m, n + 1, budget)?;
    let image = apply_f(d, m)?;
    let concentrated = check_concentrated(image.complex())?;
    let middle = chains_with_coefficients(&d.b, image.complex(), top, budget)?;
    let phi = phi_map(d, m, &source, &image, &middle, top)?;
    let truncated = chains_with_coefficients(&d.b, &concentrated.truncation, top, budget)?;
    let target = chains_with_coefficients(&d.b, &concentrated.module_complex, top, budget)?;
    let inclusion = chains_map(&d.b, &concentrated.inclusion, &truncated, &middle);
    let projection = chains_map(&d.b, &concentrated.projection, &truncated, &target);
    Ok(HomologyModels { source, image, concentrated, phi, middle, truncated, target, inclusion, projection })
}

impl HomologyModels {
    /// `H_n(projection) ∘ H_n(inclusion)^{-1} ∘ H_n(Φ)`.
    pub fn transport(&self, n: usize) -> Result<HomologyTransport, TransportError> {
        let n = n as i64;
        let phi = induced_on_homology(&self.phi, n)?;
        let inc = induced_on_homology(&self.inclusion, n)?;
        let proj = induced_on_homology(&self.projection, n)?;
        let inv = linalg::inverse(&inc).map_err(|_| TransportError::NotConcentrated(vec![n]))?;
        Ok(HomologyTransport {
            degree: n as usize,
            matrix: proj.mul(&inv).mul(&phi),
            target_module: self.concentrated.module.clone(),
        })
    }
}

pub fn transport_homology(d: &TiltingDatum, m: &Bimodule, n: usize) -> Result<HomologyTransport, TransportError> {
    homology_models(d, m, n)?.transport(n)
}

/// The choices entering the cohomology transport of a cocycle `f` of
/// degree `m`: its lift `f̃ : Bar(A) → Bar(A)` of degree `-m` and the
/// replacement `ψ : Bar(B) → Q` with `ε∘ψ ≃ augmentation`.
#[derive(Clone, Debug)]
pub struct CohomologyLifts {
    pub cocycle: Cochain,
    pub lift: FreeMap,
    pub psi: FreeMap,
}

/// Largest cochain degree the datum transports: `Q` is materialized up to
/// `max_degree - 1`, and the lift `ψ` must reach degree `m`.
pub fn cohomology_margin(d: &TiltingDatum) -> usize {
    d.models.q.hi().max(0) as usize
}

fn digits(mut flat: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = flat % base;
        flat /= base;
    }
    out
}

/// `φ = id ⊗ f̃ ⊗ id` on `Q = B(X^∨, A, X)`, degree `-m`, with the Koszul
/// sign `(-1)^{m|y|}`.
pub fn phi_on_q(d: &TiltingDatum, lift: &FreeMap, n: i64, v: &SVec) -> SVec {
    let f = d.a.field();
    let m = -lift.degree();
    let da = d.a.dim();
    let q_bar = &d.models.q_bar;
    let bar = &d.bar_a.free;
    let mut items = Vec::new();
    for (idx, c) in v {
        let (key, tuple) = q_bar.decompose(n, *idx);
        let (i0, p, i1) = (key[0], key[1], key[2]);
        if p < m {
            continue;
        }
        let pu = p as usize;
        let word = tuple[1..=pu].iter().fold(0, |acc, t| acc * da + t);
        let sign = f.mul(&f.sign(m * i0), c);
        let y_term = d.xv.term(i0).unwrap();
        let x_term = d.x.term(i1).unwrap();
        for (bidx, bc) in lift.image(p, word) {
            let (a0, g, a1) = bar.split(p - m, bidx);
            let coeff = f.mul(&sign, &bc);
            let mid = digits(g, da, (p - m) as usize);
            for (yy, yc) in y_term.right(a0).column(tuple[0]) {
                for (xx, xc) in x_term.left(a1).column(tuple[pu + 1]) {
                    let mut t = vec![*yy];
                    t.extend(&mid);
                    t.push(*xx);
                    let target = q_bar.index_of(n - m, &[i0, p - m, i1], &t).expect("summand of Q");
                    items.push((target, f.mul(&coeff, &f.mul(yc, xc))));
                }
            }
        }
    }
    sparse::collect(&f, items)
}

/// `P = B(B, B, Z, B, B)` materialized up to `hi`, with `ε` and the
/// augmentation `P → Z` as matrices.
struct ResolvedModel {
    eps: ChainMap,
    augmentation: ChainMap,
}

fn resolved_model(d: &TiltingDatum, hi: i64) -> Result<Option<ResolvedModel>, TransportError> {
    let Counit::Resolved { model, map, .. } = &d.counit else { return Ok(None) };
    let (model, map) = if hi <= model.free.hi() {
        (model.clone(), map.clone())
    } else {
        let model = crate::hochschild::two_sided_bar_replacement(&d.models.z.complex, hi, d.config.budget)?;
        let images = (model.free.lo()..=model.free.hi())
            .map(|n| (n, (0..model.free.gens(n)).map(|g| if n == 0 { map.image(0, g) } else { Vec::new() }).collect()))
            .collect();
        let map = FreeMap::new(model.free.clone(), d.models.b_complex.clone(), 0, images, (model.free.lo(), model.free.hi()))?;
        (model, map)
    };
    for n in model.free.lo()..=hi {
        crate::hochschild::check_budget(&format!("free model of the counit in degree {n}"), model.free.term_dim(n), d.config.budget)?;
    }
    let mat = Arc::new(model.free.materialize());
    Ok(Some(ResolvedModel {
        eps: map.to_chain_map(&mat),
        augmentation: model.augmentation.to_chain_map(&mat),
    }))
}

pub fn cohomology_lifts(d: &TiltingDatum, f: &Cochain) -> Result<CohomologyLifts, TransportError> {
    let m = f.degree;
    let margin = cohomology_margin(d);
    if m > margin {
        return Err(TransportError::BeyondMargin { degree: m, needed: m, available: margin });
    }
    let lifted = cocycle_to_chain_map(f, &d.bar_a)?;
    let (free_b, _, aug_b) = free_bar(&d.b, m, d.config.budget)?;
    let hi = m as i64;
    let psi = match &d.counit {
        Counit::Strict { on_q, .. } => lift_through_quasi_iso(&aug_b, on_q, hi)?.0,
        Counit::Resolved { .. } => {
            let model = resolved_model(d, hi)?.expect("resolved counit");
            let (into_p, _) = lift_through_quasi_iso(&aug_b, &model.eps, hi)?;
            let into_z = into_p.then(&model.augmentation);
            lift_through_quasi_iso(&into_z, &d.models.collapse, hi)?.0
        }
    };
    debug_assert_eq!(psi.source().gens(hi), free_b.gens(hi));
    Ok(CohomologyLifts { cocycle: f.clone(), lift: lifted.lift, psi })
}

/// `ε ∘ φ ∘ ψ` read off on the degree-`m` generators of `Bar(B)`.
pub fn transport_with(d: &TiltingDatum, lifts: &CohomologyLifts) -> Result<Cochain, TransportError> {
    let m = lifts.cocycle.degree as i64;
    let psi = &lifts.psi;
    let free_b = psi.source().clone();
    let db = d.b.dim();
    let mut images = BTreeMap::new();
    for n in free_b.lo()..=m {
        let imgs = (0..free_b.gens(n)).map(|g| phi_on_q(d, &lifts.lift, n, &psi.image(n, g))).collect();
        images.insert(n, imgs);
    }
    let composite = FreeMap::new(free_b.clone(), d.models.q.clone(), -m, images, (free_b.lo(), m))?;
    composite.check()?;
    let values: Vec<SVec> = match &d.counit {
        Counit::Strict { on_q, .. } => {
            let eps = on_q.component(0);
            (0..free_b.gens(m)).map(|g| eps.apply(&composite.image(m, g))).collect()
        }
        Counit::Resolved { .. } => {
            let model = resolved_model(d, 0)?.expect("resolved counit");
            let into_z = composite.then(&d.models.collapse);
            let (into_p, _) = lift_through_quasi_iso(&into_z, &model.augmentation, m)?;
            let eps = model.eps.component(0);
            (0..free_b.gens(m)).map(|g| eps.apply(&into_p.image(m, g))).collect()
        }
    };
    let dm = db.pow(m as u32);
    let f = d.b.field();
    let mut items = Vec::new();
    for (w, v) in values.iter().enumerate() {
        for (k, c) in v {
            items.push((k * dm + w, c.clone()));
        }
    }
    Ok(Cochain::new(m as usize, db, sparse::collect(&f, items)))
}

pub fn transport_cohomology(d: &TiltingDatum, f: &Cochain) -> Result<Cochain, TransportError> {
    transport_with(d, &cohomology_lifts(d, f)?)
}

/// Coordinates of the class of a cocycle of `B` in the computed basis of
/// `HH^m(B, B)`.
pub fn cohomology_class(b: &Arc<Algebra>, c: &Cochain, budget: usize) -> Result<SVec, TransportError> {
    let h = hochschild_cohomology(b, &Bimodule::regular(b), c.degree, c.degree + 1, budget)?;
    Ok(h.class_of(&c.values)?)
}

/// An element `n` of `N` with `b·n = n·b` for all `b` such that `b ↦ b·n`
/// is bijective, i.e. a witness of `N ≅ B` as bimodules. The search runs
/// over the basis of such elements and one fixed generic combination.
pub fn regular_generator(b: &Algebra, n: &Bimodule) -> Option<SVec> {
    let f = b.field();
    if n.dim() != b.dim() {
        return None;
    }
    let blocks: Vec<Matrix> = (0..b.dim()).map(|i| n.left(i).sub(n.right(i))).collect();
    let stacked = Matrix::from_columns(
        f,
        n.dim() * b.dim(),
        (0..n.dim())
            .map(|j| {
                let items = blocks.iter().enumerate().flat_map(|(i, m)| m.column(j).iter().map(move |(r, c)| (i * n.dim() + r, c.clone()))).collect();
                sparse::collect(&f, items)
            })
            .collect(),
    );
    let central = linalg::kernel_basis(&stacked);
    let mut generic = Vec::new();
    for (k, v) in central.iter().enumerate() {
        generic = sparse::axpy(&f, &generic, &f.from_i64(k as i64 + 1), v);
    }
    central.into_iter().chain(std::iter::once(generic)).find(|v| {
        let image = Matrix::from_columns(f, n.dim(), (0..b.dim()).map(|i| n.left(i).apply(v)).collect());
        linalg::rank(&image) == b.dim()
    })
}

/// Both routes `HH_n(A, M) → HH_{n-m}(B, N)` around the transported cap
/// square.
#[derive(Clone, Debug)]
pub struct CapSquare {
    pub degree: usize,
    pub transported: Cochain,
    /// `T_{n-m} ∘ (f ∩ -)`.
    pub cap_then_transport: Matrix,
    /// `(Ff ∩ -) ∘ T_n`.
    pub transport_then_cap: Matrix,
    pub source: HomologyTransport,
    pub target: HomologyTransport,
}

impl CapSquare {
    pub fn commutes(&self) -> bool {
        self.cap_then_transport == self.transport_then_cap
    }
}

pub fn verify_cap_square(d: &TiltingDatum, m: &Bimodule, f: &Cochain, n: usize) -> Result<CapSquare, TransportError> {
    let k = f.degree;
    if k > n {
        return Err(ProductError::DegreeViolation { cochain: k, chain: n }.into());
    }
    let budget = d.config.budget;
    let models = homology_models(d, m, n)?;
    let source = models.transport(n)?;
    let target = models.transport(n - k)?;
    let transported = transport_cohomology(d, f)?;
    let cap_a = cap(&d.a, m, f, n, n + 1, budget)?;
    let cap_b = cap(&d.b, &models.concentrated.module, &transported, n, n + 1, budget)?;
    Ok(CapSquare {
        degree: n,
        cap_then_transport: target.matrix.mul(&cap_a),
        transport_then_cap: cap_b.mul(&source.matrix),
        transported,
        source,
        target,
    })
}

/// Classes of `F(f ∪ g)` and `F(f) ∪ F(g)` in `HH^{m+p}(B, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCheck {
    pub of_product: SVec,
    pub product_of: SVec,
}

impl GradedCheck {
    pub fn holds(&self) -> bool {
        self.of_product == self.product_of
    }
}

pub fn verify_graded_algebra_transport(d: &TiltingDatum, f: &Cochain, g: &Cochain) -> Result<GradedCheck, TransportError> {
    let fg = cup(&d.a, f, g)?;
    let lhs = transport_cohomology(d, &fg)?;
    let rhs = cup(&d.b, &transport_cohomology(d, f)?, &transport_cohomology(d, g)?)?;
    let budget = d.config.budget;
    Ok(GradedCheck { of_product: cohomology_class(&d.b, &lhs, budget)?, product_of: cohomology_class(&d.b, &rhs, budget)? })
}

fn random_vector<R: Rng>(f: crate::linalg::Field, dim: usize, rng: &mut R) -> SVec {
    if dim == 0 {
        return Vec::new();
    }
    let items = (0..2).map(|_| (rng.gen_range(0..dim), f.from_i64(rng.gen_range(-2..=2)))).collect();
    sparse::collect(&f, items)
}

/// A random map of the given degree on the defined range of `like`.
fn random_homotopy<R: Rng>(like: &FreeMap, rng: &mut R) -> Result<FreeMap, TransportError> {
    let src = like.source();
    let tgt = like.target();
    let deg = like.degree() + 1;
    let (lo, hi) = like.defined();
    let f = src.field();
    let images = (lo..=hi.min(src.hi()))
        .map(|n| (n, (0..src.gens(n)).map(|_| random_vector(f, tgt.dim(n + deg), rng)).collect()))
        .collect();
    Ok(FreeMap::new(src.clone(), tgt.clone(), deg, images, (lo, hi.min(src.hi())))?)
}

/// Changes the representative of `f` by a random coboundary and both lifts
/// by boundaries of random homotopies; none of this may change the
/// transported class.
pub fn perturb_lifts<R: Rng>(d: &TiltingDatum, lifts: &CohomologyLifts, rng: &mut R) -> Result<CohomologyLifts, TransportError> {
    let fld = d.a.field();
    let f = &lifts.cocycle;
    let cocycle = if f.degree == 0 {
        f.clone()
    } else {
        let da = d.a.dim();
        let c = Cochain::new(f.degree - 1, da, random_vector(fld, da * da.pow(f.degree as u32 - 1), rng));
        f.axpy(&fld.one(), &c.coboundary(&d.a, &Bimodule::regular(&d.a)), fld)
    };
    let fresh = cohomology_lifts(d, &cocycle)?;
    let lift = fresh.lift.axpy(&fld.one(), &random_homotopy(&fresh.lift, rng)?.homotopy_boundary());
    let psi = fresh.psi.axpy(&fld.one(), &random_homotopy(&fresh.psi, rng)?.homotopy_boundary());
    Ok(CohomologyLifts { cocycle, lift, psi })
}

/// The datum with the roles of `A` and `B` exchanged: `X` becomes the
/// complex of `(A, B)`-bimodules whose dual is taken over `B`.
pub fn swapped(d: &TiltingDatum) -> Result<TiltingDatum, TransportError> {
    Ok(crate::derived::assemble(d.kind, &d.b, d.x.clone(), d.config, Vec::new())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{base_field, dual_numbers, Module};
    use crate::derived::{identity_datum, morita_datum, DatumConfig};
    use crate::linalg::Field;

    fn dual() -> Arc<Algebra> {
        Arc::new(dual_numbers(Field::Rationals))
    }

    #[test]
    fn identity_transport_is_identity() {
        let a = dual();
        let d = identity_datum(&a, DatumConfig::default()).unwrap();
        let r = Bimodule::regular(&a);
        for n in 0..=2 {
            let t = transport_homology(&d, &r, n).unwrap();
            assert!(t.matrix.is_identity(), "n={n}: {:?}", t.matrix);
        }
    }

    #[test]
    fn image_of_regular_is_b() {
        let a = dual();
        let d = morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).unwrap();
        let c = check_concentrated(apply_f(&d, &Bimodule::regular(&a)).unwrap().complex()).unwrap();
        assert!(regular_generator(&d.b, &c.module).is_some());
        assert!(regular_generator(&d.b, &Bimodule::regular(&d.b).direct_sum(&Bimodule::zero(&d.b, &d.b))).is_some());
        let doubled = Bimodule::regular(&a).direct_sum(&Bimodule::regular(&a));
        assert!(regular_generator(&a, &doubled).is_none());
    }

    #[test]
    fn morita_field_transport() {
        let k = Arc::new(base_field(Field::Rationals));
        let d = morita_datum(&k, &Module::free(&k, 2), DatumConfig::default()).unwrap();
        let t = transport_homology(&d, &Bimodule::regular(&k), 0).unwrap();
        assert_eq!((t.matrix.rows(), t.matrix.cols()), (1, 1));
        assert!(t.is_invertible());
        assert_eq!(t.target_module.dim(), 4);
    }

    #[test]
    fn morita_dual_numbers_transport() {
        let a = dual();
        let d = morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).unwrap();
        let r = Bimodule::regular(&a);
        for n in 0..=2 {
            let t = transport_homology(&d, &r, n).unwrap();
            assert!(t.is_invertible(), "n={n}");
            assert_eq!(t.target_module.dim(), 8);
        }
    }

    fn nonzero_classes(a: &Arc<Algebra>, m: usize) -> Vec<Cochain> {
        let h = hochschild_cohomology(a, &Bimodule::regular(a), m, m + 1, crate::hochschild::DEFAULT_BUDGET).unwrap();
        h.reps().iter().map(|r| Cochain::new(m, a.dim(), r.clone())).collect()
    }

    #[test]
    fn identity_keeps_classes() {
        let a = dual();
        let d = identity_datum(&a, DatumConfig::default()).unwrap();
        let budget = d.config.budget;
        for m in 0..=cohomology_margin(&d).min(2) {
            for f in nonzero_classes(&a, m) {
                let ff = transport_cohomology(&d, &f).unwrap();
                assert!(ff.is_closed(&d.b, &Bimodule::regular(&d.b)));
                assert_eq!(cohomology_class(&d.b, &ff, budget).unwrap(), cohomology_class(&a, &f, budget).unwrap(), "m={m}");
            }
        }
    }

    #[test]
    fn unit_goes_to_unit() {
        let a = dual();
        let d = morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).unwrap();
        let budget = d.config.budget;
        let ff = transport_cohomology(&d, &Cochain::unit(&a)).unwrap();
        assert_eq!(cohomology_class(&d.b, &ff, budget).unwrap(), cohomology_class(&d.b, &Cochain::unit(&d.b), budget).unwrap());
    }

    #[test]
    fn morita_derivation_survives() {
        let a = dual();
        let d = morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).unwrap();
        let budget = d.config.budget;
        let gens = nonzero_classes(&a, 1);
        assert_eq!(gens.len(), nonzero_classes(&d.b, 1).len());
        for f in gens {
            let ff = transport_cohomology(&d, &f).unwrap();
            assert!(!cohomology_class(&d.b, &ff, budget).unwrap().is_empty());
        }
    }

    fn apr_datum() -> TiltingDatum {
        use crate::algebra::{path_algebra, Quiver};
        use crate::derived::{canonical_presentation, idempotent_module, quotient_module, tilting_datum};
        let a = Arc::new(path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1)] }, Field::Rationals).unwrap());
        let (p1, i1) = idempotent_module(&a, 0).unwrap();
        let arrow = linalg::Solver::new(&i1).solve(&sparse::unit(2)).unwrap();
        let (s1, _) = quotient_module(&p1, &[arrow]).unwrap();
        let t = p1.direct_sum(&s1);
        let pres = canonical_presentation(&t).unwrap();
        tilting_datum(&a, &t, &pres, Some(2), DatumConfig::default()).unwrap()
    }

    #[test]
    fn apr_unit_through_resolved_counit() {
        let d = apr_datum();
        assert!(matches!(d.counit, Counit::Resolved { .. }));
        let budget = d.config.budget;
        let ff = transport_cohomology(&d, &Cochain::unit(&d.a)).unwrap();
        assert_eq!(cohomology_class(&d.b, &ff, budget).unwrap(), cohomology_class(&d.b, &Cochain::unit(&d.b), budget).unwrap());
    }

    #[test]
    fn cap_squares_commute() {
        let a = dual();
        for d in [identity_datum(&a, DatumConfig::default()).unwrap(), morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).unwrap()] {
            let r = Bimodule::regular(&a);
            for m in 0..=1 {
                for f in nonzero_classes(&a, m) {
                    for n in m..=2 {
                        let sq = verify_cap_square(&d, &r, &f, n).unwrap();
                        assert!(sq.commutes(), "m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn graded_algebra_transport() {
        let a = dual();
        let d = morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).unwrap();
        let f = nonzero_classes(&a, 1).remove(0);
        let u = Cochain::unit(&a);
        assert!(verify_graded_algebra_transport(&d, &f, &u).unwrap().holds());
        assert!(verify_graded_algebra_transport(&d, &f, &f).unwrap().holds());
    }

    #[test]
    fn perturbations_keep_the_class() {
        use rand::SeedableRng;
        let a = dual();
        let d = morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).unwrap();
        let budget = d.config.budget;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = nonzero_classes(&a, 1).remove(0);
        let lifts = cohomology_lifts(&d, &f).unwrap();
        let base = cohomology_class(&d.b, &transport_with(&d, &lifts).unwrap(), budget).unwrap();
        for _ in 0..3 {
            let p = perturb_lifts(&d, &lifts, &mut rng).unwrap();
            assert_eq!(cohomology_class(&d.b, &transport_with(&d, &p).unwrap(), budget).unwrap(), base);
        }
    }

    #[test]
    fn swapped_round_trip() {
        let a = dual();
        let config = DatumConfig { max_degree: 3, budget: 200_000 };
        let d = morita_datum(&a, &Module::free(&a, 2), config).unwrap();
        let back = swapped(&d).unwrap();
        assert!(back.validate().all_green(), "{:?}", back.validate().failures());
        let budget = d.config.budget;
        for m in 0..=1 {
            for f in nonzero_classes(&a, m) {
                let there = transport_cohomology(&d, &f).unwrap();
                let again = transport_cohomology(&back, &there).unwrap();
                assert_eq!(cohomology_class(&a, &again, budget).unwrap(), cohomology_class(&a, &f, budget).unwrap(), "m={m}");
            }
        }
    }
}
