//! Explicit derived-equivalence data `(X, X^∨, η, ε)` for three families
//! (identity, Morita, classical tilting) and their validation.
//!
//! Conventions: `X^∨` is a bounded complex of `(B, A)`-bimodules whose terms
//! are finitely generated projective right `A`-modules, and
//! `X_{-i} = Hom_A(X^∨_i, A)` with `(a·φ·b)(y) = a·φ(b·y)` and differential
//! `dφ = (-1)^{i+1} φ∘d` on `X_{-i}`, so that evaluation kills boundaries.
//! The models are
//!
//! * `R = B(X, B, X^∨)` for `X ⊗^L_B X^∨`, with `s : R → A` the evaluation
//!   and `η : Bar(A) → R` a lift of the augmentation through `s`;
//! * `Q = B(X^∨, A, X)` for `X^∨ ⊗^L_A X`, with `ε : Q → B` the collapse onto
//!   `Z = X^∨ ⊗_A X` followed by a bimodule map `ε_0 : Z_0 → B`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{endomorphism_algebra, hom_space, intertwiners, Algebra, AlgebraError, Bimodule, Module};
use crate::complexes::{
    homotopic, is_quasi_iso_on, lift_through_quasi_iso, quotient_by_relations, ChainMap, Complex, ComplexError, FreeMap, IteratedBar, Quotient,
    TensorProduct,
};
use crate::hochschild::{
    bar_resolution, check_budget, two_sided_bar_replacement, BarResolution, HochschildError, TwoSidedReplacement, DEFAULT_BUDGET,
};
use crate::linalg::{self, sparse, Echelon, Elem, Field, Inserted, Matrix, SVec, Solver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivedError {
    #[error("not a progenerator: {0}")]
    NotProgenerator(String),
    #[error("tilting validation failed: {0}")]
    TiltingValidationFailed(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
}

/// Linearly independent subset of `span`, in order.
fn independent(f: Field, dim: usize, span: &[SVec]) -> Vec<SVec> {
    let mut ech = Echelon::new(f, dim);
    let mut out = Vec::new();
    for v in span {
        if let Inserted::Pivot(..) = ech.insert(v.clone(), Vec::new()) {
            out.push(v.clone());
        }
    }
    out
}

/// The sub-bimodule spanned by `span` with its inclusion. Fails when the
/// span is not closed under the actions.
pub fn sub_bimodule(m: &Bimodule, span: &[SVec]) -> Result<(Bimodule, Matrix), DerivedError> {
    let f = m.field();
    let basis = independent(f, m.dim(), span);
    let incl = Matrix::from_columns(f, m.dim(), basis.clone());
    let solver = Solver::new(&incl);
    let restrict = |act: &Matrix| -> Result<Matrix, DerivedError> {
        let cols = basis
            .iter()
            .map(|b| solver.solve(&act.apply(b)).ok_or_else(|| DerivedError::Construction("span is not a submodule".into())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_columns(f, basis.len(), cols))
    };
    let lefts = m.left_actions().iter().map(restrict).collect::<Result<Vec<_>, _>>()?;
    let rights = m.right_actions().iter().map(restrict).collect::<Result<Vec<_>, _>>()?;
    let sub = Bimodule::new(m.left_algebra().clone(), m.right_algebra().clone(), basis.len(), lefts, rights)?;
    Ok((sub, incl))
}

/// `m / span(sub)` with the induced actions; `sub` must be a sub-bimodule.
pub fn quotient_bimodule(m: &Bimodule, sub: &[SVec]) -> Result<(Bimodule, Quotient), DerivedError> {
    let f = m.field();
    let q = quotient_by_relations(f, m.dim(), sub.iter().cloned());
    let lefts = m.left_actions().iter().map(|a| q.induce(a, &q)).collect();
    let rights = m.right_actions().iter().map(|a| q.induce(a, &q)).collect();
    let out = Bimodule::new(m.left_algebra().clone(), m.right_algebra().clone(), q.dim(), lefts, rights)?;
    out.validate().map_err(AlgebraError::Violations)?;
    Ok((out, q))
}

/// The right module `e_v A` for a primitive idempotent given by a basis index.
pub fn idempotent_module(a: &Arc<Algebra>, idempotent: usize) -> Result<(Module, Matrix), DerivedError> {
    let k = Arc::new(crate::algebra::base_field(a.field()));
    let regular = Bimodule::from_right_module(&k, &Module::regular(a));
    let span: Vec<SVec> = (0..a.dim()).map(|j| a.basis_product(idempotent, j).clone()).collect();
    let (sub, incl) = sub_bimodule(&regular, &span)?;
    Ok((sub.right_module(), incl))
}

/// `M ⊗_k A` as a free right module, with the multiplication `M ⊗ A → M`.
fn free_cover(m: &Module) -> (Module, Matrix) {
    let a = m.algebra();
    let f = a.field();
    let im = Matrix::identity(f, m.dim());
    let actions = (0..a.dim()).map(|e| im.kron(a.right_mult(e))).collect();
    let cover = Module::new(a.clone(), actions).expect("free module");
    let mut cols = Vec::with_capacity(m.dim() * a.dim());
    for v in 0..m.dim() {
        for e in 0..a.dim() {
            cols.push(m.action(e).column(v).clone());
        }
    }
    (cover, Matrix::from_columns(f, m.dim(), cols))
}

/// A checkable certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub status: CertStatus,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertStatus {
    Verified,
    Asserted,
    Failed,
}

impl Certificate {
    fn new(name: &str, ok: bool, detail: String) -> Self {
        let status = if ok { CertStatus::Verified } else { CertStatus::Failed };
        Certificate { name: name.to_string(), status, detail }
    }
}

/// A splitting `s : M → M ⊗_k A` of the multiplication map, certifying that
/// `M` is projective.
pub fn projectivity_certificate(m: &Module) -> Option<Matrix> {
    let f = m.algebra().field();
    let (cover, mult) = free_cover(m);
    let maps = hom_space(m, &cover);
    if maps.is_empty() {
        return if m.dim() == 0 { Some(Matrix::zeros(f, 0, 0)) } else { None };
    }
    let n = m.dim() * m.dim();
    let cols: Vec<SVec> = maps.iter().map(|s| crate::algebra::flatten(&mult.mul(s))).collect();
    let sys = Matrix::from_columns(f, n, cols);
    let c = linalg::solve(&sys, &crate::algebra::flatten(&Matrix::identity(f, m.dim())), n).ok()?;
    let mut s = Matrix::zeros(f, cover.dim(), m.dim());
    for (i, x) in c {
        s = s.axpy(&x, &maps[i]);
    }
    Some(s)
}

/// Rank of the trace ideal `Σ φ(M)` over `φ ∈ Hom_A(M, A)`; `M` is a
/// generator exactly when this equals `dim A`.
pub fn trace_ideal_rank(m: &Module) -> usize {
    let a = m.algebra();
    let maps = hom_space(m, &Module::regular(a));
    let cols: Vec<SVec> = maps.iter().flat_map(|phi| phi.columns().to_vec()).collect();
    linalg::rank(&Matrix::from_columns(a.field(), a.dim(), cols))
}

/// `Hom_A(X^∨, A)` as a complex of `(A, B)`-bimodules, with the chosen
/// basis matrices of each `Hom_A(X^∨_i, A)` keyed by `i`.
pub fn dual_complex(y: &Complex) -> Result<(Arc<Complex>, BTreeMap<i64, Vec<Matrix>>), DerivedError> {
    let b = y.left().clone();
    let a = y.right().clone();
    let f = a.field();
    let regular = Module::regular(&a);
    let mut bases = BTreeMap::new();
    for i in y.lo()..=y.hi() {
        let yi = y.term(i).unwrap();
        let module = Module::new(a.clone(), yi.right_actions().to_vec())?;
        bases.insert(i, hom_space(&module, &regular));
    }
    let coords = |i: i64, m: &Matrix| -> Result<SVec, DerivedError> {
        let basis = &bases[&i];
        crate::algebra::coordinates_in(basis, m)
            .ok_or_else(|| DerivedError::Construction(format!("dual of degree {i} is not closed")))
    };
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in -y.hi()..=-y.lo() {
        let i = -n;
        let yi = y.term(i).unwrap();
        let basis = &bases[&i];
        let lefts = (0..a.dim())
            .map(|e| {
                let cols = basis.iter().map(|phi| coords(i, &a.left_mult(e).mul(phi))).collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_columns(f, basis.len(), cols))
            })
            .collect::<Result<Vec<_>, DerivedError>>()?;
        let rights = (0..b.dim())
            .map(|e| {
                let cols = basis.iter().map(|phi| coords(i, &phi.mul(yi.left(e)))).collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_columns(f, basis.len(), cols))
            })
            .collect::<Result<Vec<_>, DerivedError>>()?;
        terms.push(Bimodule::new(a.clone(), b.clone(), basis.len(), lefts, rights)?);
        if n == -y.hi() {
            diffs.push(Matrix::zeros(f, 0, basis.len()));
        } else {
            let dy = y.diff(i + 1);
            let sign = f.sign(i + 1);
            let cols = basis
                .iter()
                .map(|phi| coords(i + 1, &phi.mul(&dy).scale(&sign)))
                .collect::<Result<Vec<_>, _>>()?;
            diffs.push(Matrix::from_columns(f, bases[&(i + 1)].len(), cols));
        }
    }
    let x = Complex::with_rings(a, b, -y.hi(), terms, diffs)?;
    x.check_bimodule_maps()?;
    Ok((Arc::new(x), bases))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatumKind {
    Identity,
    Morita,
    Tilting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatumConfig {
    /// Truncation level; `η` is computed up to `max_degree - 1`.
    pub max_degree: usize,
    pub budget: usize,
}

impl Default for DatumConfig {
    fn default() -> Self {
        DatumConfig { max_degree: 4, budget: DEFAULT_BUDGET }
    }
}

/// The model complexes determined by `(X, X^∨)` alone.
#[derive(Clone, Debug)]
pub struct Models {
    pub r_bar: IteratedBar,
    pub r: Arc<Complex>,
    /// `s : R → A`, evaluation on the bar-free part.
    pub evaluation: ChainMap,
    pub q_bar: IteratedBar,
    pub q: Arc<Complex>,
    /// `Z = X^∨ ⊗_A X`.
    pub z: TensorProduct,
    pub collapse: ChainMap,
    pub b_complex: Arc<Complex>,
}

#[derive(Clone, Debug)]
pub struct TiltingDatum {
    pub kind: DatumKind,
    pub config: DatumConfig,
    pub a: Arc<Algebra>,
    pub b: Arc<Algebra>,
    pub x: Arc<Complex>,
    pub xv: Arc<Complex>,
    /// Basis matrices of `Hom_A(X^∨_i, A)`, keyed by `i`.
    pub pairing: BTreeMap<i64, Vec<Matrix>>,
    pub bar_a: BarResolution,
    pub models: Models,
    pub eta: FreeMap,
    /// The element of `Z_0` corresponding to the identity of `X^∨`.
    pub coevaluation: SVec,
    pub counit: Counit,
    pub certificates: Vec<Certificate>,
}

fn check_dims(bar: &IteratedBar, hi: i64, budget: usize, what: &str) -> Result<(), DerivedError> {
    for (n, d) in bar.term_dims(bar.min_degree(), hi) {
        check_budget(&format!("{what} in degree {n}"), d, budget)?;
    }
    Ok(())
}

/// Builds `R`, `Q`, `Z`, the evaluation and the collapse for the given pair.
pub fn build_models(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    x: &Arc<Complex>,
    xv: &Arc<Complex>,
    pairing: &BTreeMap<i64, Vec<Matrix>>,
    config: &DatumConfig,
) -> Result<Models, DerivedError> {
    let f = a.field();
    let top = config.max_degree as i64 - 1;
    let r_bar = IteratedBar::new(vec![x.clone(), xv.clone()]);
    check_dims(&r_bar, top, config.budget, "model of X ⊗ X^∨")?;
    let r = Arc::new(r_bar.materialize(top));
    let a_complex = Arc::new(Complex::concentrated(Bimodule::regular(a), 0));
    let mut columns = vec![Vec::new(); r.dim(0)];
    if r.lo() <= 0 && r.hi() >= 0 {
        for (key, off, size) in r_bar.summands(0) {
            if key[1] != 0 || key[0] != -key[2] {
                continue;
            }
            let basis = &pairing[&key[2]];
            let ydim = xv.dim(key[2]);
            for local in 0..size {
                let (j, yb) = (local / ydim, local % ydim);
                columns[off + local] = basis[j].column(yb).clone();
            }
        }
    }
    let mut comps = BTreeMap::new();
    comps.insert(0, Matrix::from_columns(f, a.dim(), columns));
    let evaluation = ChainMap::unchecked(r.clone(), a_complex, 0, comps, (r.lo(), r.hi()))?;

    let q_bar = IteratedBar::new(vec![xv.clone(), x.clone()]);
    check_dims(&q_bar, top, config.budget, "model of X^∨ ⊗ X")?;
    let q = Arc::new(q_bar.materialize(top));
    let chain = q_bar.tensor_chain()?;
    let collapse = q_bar.collapse(&q, &chain);
    let z = chain.into_iter().next().expect("two pieces");
    let b_complex = Arc::new(Complex::concentrated(Bimodule::regular(b), 0));
    Ok(Models { r_bar, r, evaluation, q_bar, q, z, collapse, b_complex })
}

/// `y ⊗ φ ↦ (y' ↦ y·φ(y'))` on the raw `X^∨_i ⊗ X_{-i}` of degree `i`.
fn composition_matrix(yi: &Bimodule, basis: &[Matrix]) -> Matrix {
    let f = yi.field();
    let d = yi.dim();
    let mut cols = Vec::with_capacity(d * basis.len());
    for yb in 0..d {
        for phi in basis {
            let mut items = Vec::new();
            for yp in 0..d {
                let acted = yi.right_by(phi.column(yp));
                for (r, c) in acted.column(yb) {
                    items.push((r * d + yp, c.clone()));
                }
            }
            cols.push(sparse::collect(&f, items));
        }
    }
    Matrix::from_columns(f, d * d, cols)
}

/// The coevaluation cycle in `Z_0`: the preimage of the identity of each
/// `X^∨_i` under composition.
pub fn coevaluation(xv: &Complex, pairing: &BTreeMap<i64, Vec<Matrix>>, z: &TensorProduct) -> Result<SVec, DerivedError> {
    let f = xv.field();
    let mut raw = Vec::new();
    for i in xv.lo()..=xv.hi() {
        let yi = xv.term(i).unwrap();
        if yi.dim() == 0 {
            continue;
        }
        let comp = composition_matrix(yi, &pairing[&i]);
        let id = crate::algebra::flatten(&Matrix::identity(f, yi.dim()));
        let r = linalg::solve(&comp, &id, comp.rows())
            .map_err(|_| DerivedError::Construction(format!("degree {i} of X^∨ is not finitely generated projective")))?;
        let off = z.offset(0, i).expect("degree-0 summand");
        raw = sparse::add(&f, &raw, &sparse::offset(&r, off));
    }
    let iota = z.quotients[&0].pi.apply(&raw);
    if !z.complex.diff(0).apply(&iota).is_empty() {
        return Err(DerivedError::Construction("coevaluation is not a cycle".into()));
    }
    Ok(iota)
}

/// A bimodule map `Z_0 → B` killing boundaries and sending the
/// coevaluation to `1_B`.
pub fn solve_counit(z: &TensorProduct, b: &Arc<Algebra>, iota: &SVec) -> Result<Matrix, DerivedError> {
    let f = b.field();
    let z0 = z.complex.term(0).ok_or_else(|| DerivedError::Construction("Z has no degree-0 term".into()))?;
    let rb = Bimodule::regular(b);
    let s: Vec<Matrix> = z0.left_actions().iter().chain(z0.right_actions()).cloned().collect();
    let t: Vec<Matrix> = rb.left_actions().iter().chain(rb.right_actions()).cloned().collect();
    let maps = intertwiners(f, z0.dim(), b.dim(), &s, &t);
    let d1 = z.complex.diff(1);
    let killed = b.dim() * d1.cols();
    let cols: Vec<SVec> = maps
        .iter()
        .map(|e| {
            let mut v = crate::algebra::flatten(&e.mul(&d1));
            v.extend(sparse::offset(&e.apply(iota), killed));
            v
        })
        .collect();
    let sys = Matrix::from_columns(f, killed + b.dim(), cols);
    let rhs = sparse::offset(b.unit(), killed);
    let c = linalg::solve(&sys, &rhs, killed + b.dim())
        .map_err(|_| DerivedError::Construction("no bimodule map Z_0 → B sends the coevaluation to 1".into()))?;
    let mut eps0 = Matrix::zeros(f, b.dim(), z0.dim());
    for (k, x) in c {
        eps0 = eps0.axpy(&x, &maps[k]);
    }
    Ok(eps0)
}

/// The counit `ε`, on whichever model of `X^∨ ⊗^L_A X` admits it.
#[derive(Clone, Debug)]
pub enum Counit {
    /// `ε_0 : Z_0 → B` is bimodule-linear and kills boundaries, so
    /// `ε = ε_0 ∘ collapse` is defined on `Q` itself.
    Strict { eps0: Matrix, on_q: ChainMap },
    /// `ε` on the free model `P = B(B, B, Z, B, B)`, given on generators.
    Resolved { model: TwoSidedReplacement, map: FreeMap, offsets: BTreeMap<Vec<i64>, usize> },
}

impl Counit {
    /// `ε(u ⊗ z ⊗ w)` for bar words `u ∈ B^{⊗q}`, `w ∈ B^{⊗r}` (flat kron
    /// indices) and `z ∈ Z_i`; zero unless the total degree is 0.
    pub fn on_word(&self, q: usize, u: usize, zi: i64, z: &SVec, r: usize, w: usize) -> SVec {
        match self {
            Counit::Strict { eps0, .. } => {
                if q == 0 && r == 0 && zi == 0 {
                    eps0.apply(z)
                } else {
                    Vec::new()
                }
            }
            Counit::Resolved { model, map, offsets } => {
                if q as i64 + zi + r as i64 != 0 {
                    return Vec::new();
                }
                let key = vec![0, q as i64, zi, r as i64, 0];
                let Some(off) = offsets.get(&key) else { return Vec::new() };
                let b = model.free.right();
                let f = b.field();
                let zdim = model.bar.pieces()[1].dim(zi);
                let rdim = b.dim().pow(r as u32);
                let mut out = Vec::new();
                for (zb, c) in z {
                    let g = off + (u * zdim + zb) * rdim + w;
                    out = sparse::axpy(&f, &out, c, &map.image(0, g));
                }
                out
            }
        }
    }

    pub fn on_z0(&self, z: &SVec) -> SVec {
        self.on_word(0, 0, 0, z, 0, 0)
    }

    pub fn check(&self) -> Result<(), ComplexError> {
        match self {
            Counit::Strict { on_q, .. } => on_q.check(),
            Counit::Resolved { map, .. } => map.check(),
        }
    }
}

/// Solves for `ε` on `P = B(B, B, Z, B, B)`: a bimodule map on degree-0
/// generators that kills boundaries and sends the coevaluation to 1.
pub fn solve_resolved_counit(
    z: &TensorProduct,
    b: &Arc<Algebra>,
    b_complex: &Arc<Complex>,
    iota: &SVec,
    budget: usize,
) -> Result<Counit, DerivedError> {
    let f = b.field();
    let model = two_sided_bar_replacement(&z.complex, 1, budget)?;
    let free = &model.free;
    let (g0, g1, db) = (free.gens(0), free.gens(1), b.dim());
    let mut cols: Vec<Vec<(usize, Elem)>> = vec![Vec::new(); g0 * db];
    for h in 0..g1 {
        for (idx, c) in free.boundary(1, h) {
            let (l, g, r) = free.split(0, *idx);
            for e in 0..db {
                let v = b.mul(&b.mul(&sparse::unit(l), &sparse::unit(e)), &sparse::unit(r));
                for (k, x) in v {
                    cols[g * db + e].push((h * db + k, f.mul(c, &x)));
                }
            }
        }
    }
    let offsets: BTreeMap<Vec<i64>, usize> =
        model.bar.generator_summands(0).into_iter().map(|(key, off, _)| (key, off)).collect();
    let base = offsets[&vec![0, 0, 0, 0, 0]];
    let rows = g1 * db + db;
    for (zb, c) in iota {
        for e in 0..db {
            cols[(base + zb) * db + e].push((g1 * db + e, c.clone()));
        }
    }
    let sys = Matrix::from_columns(f, rows, cols.into_iter().map(|c| sparse::collect(&f, c)).collect());
    let rhs = sparse::offset(b.unit(), g1 * db);
    let x = linalg::solve(&sys, &rhs, rows)
        .map_err(|_| DerivedError::Construction("no counit on the free model sends the coevaluation to 1".into()))?;
    let mut images0 = vec![Vec::new(); g0];
    for (k, c) in x {
        images0[k / db].push((k % db, c));
    }
    let mut images = BTreeMap::new();
    for n in free.lo()..=free.hi() {
        images.insert(n, if n == 0 { images0.clone() } else { vec![Vec::new(); free.gens(n)] });
    }
    let map = FreeMap::new(free.clone(), b_complex.clone(), 0, images, (free.lo(), free.hi()))?;
    Ok(Counit::Resolved { model, map, offsets })
}

/// `ε = ε_0 ∘ collapse : Q → B` (not checked).
pub fn counit_map(models: &Models, eps0: &Matrix) -> Result<ChainMap, DerivedError> {
    let zc = &models.z.complex;
    let mut comps = BTreeMap::new();
    comps.insert(0, eps0.clone());
    let on_z = ChainMap::unchecked(zc.clone(), models.b_complex.clone(), 0, comps, (models.q.lo(), models.q.hi()))?;
    Ok(on_z.compose(&models.collapse))
}

/// Product on `Z_0` induced by composition of endomorphisms of `X^∨`.
pub fn z_product(xv: &Complex, pairing: &BTreeMap<i64, Vec<Matrix>>, z: &TensorProduct, u: &SVec, v: &SVec) -> SVec {
    let f = xv.field();
    let q = &z.quotients[&0];
    let (ru, rv) = (q.sigma.apply(u), q.sigma.apply(v));
    let mut raw = Vec::new();
    for i in xv.lo()..=xv.hi() {
        let yi = xv.term(i).unwrap();
        let basis = &pairing[&i];
        let Some(off) = z.offset(0, i) else { continue };
        let width = basis.len();
        let size = yi.dim() * width;
        let part = |w: &SVec| -> Vec<(usize, usize, Elem)> {
            w.iter()
                .filter(|(k, _)| *k >= off && *k < off + size)
                .map(|(k, c)| ((k - off) / width, (k - off) % width, c.clone()))
                .collect()
        };
        for (yb, j, c) in part(&ru) {
            for (yb2, j2, c2) in part(&rv) {
                let acted = yi.right_by(basis[j].column(yb2));
                let coef = f.mul(&c, &c2);
                for (r, e) in acted.column(yb) {
                    raw.push((off + r * width + j2, f.mul(&coef, e)));
                }
            }
        }
    }
    q.pi.apply(&sparse::collect(&f, raw))
}

/// Assembles a datum from `X^∨`; `B` must act strictly on `X^∨`.
pub fn assemble(
    kind: DatumKind,
    a: &Arc<Algebra>,
    xv: Arc<Complex>,
    config: DatumConfig,
    certificates: Vec<Certificate>,
) -> Result<TiltingDatum, DerivedError> {
    let b = xv.left().clone();
    xv.check_bimodule_maps()?;
    let (x, pairing) = dual_complex(&xv)?;
    let bar_a = bar_resolution(a, config.max_degree - 1, config.budget)?;
    let models = build_models(a, &b, &x, &xv, &pairing, &config)?;
    models.evaluation.check().map_err(|_| DerivedError::Construction("evaluation is not a chain map".into()))?;
    let (eta, _) = lift_through_quasi_iso(&bar_a.augmentation, &models.evaluation, bar_a.n_max as i64)?;
    let iota = coevaluation(&xv, &pairing, &models.z)?;
    let counit = match solve_counit(&models.z, &b, &iota) {
        Ok(eps0) => Counit::Strict { on_q: counit_map(&models, &eps0)?, eps0 },
        Err(_) => solve_resolved_counit(&models.z, &b, &models.b_complex, &iota, config.budget)?,
    };
    Ok(TiltingDatum {
        kind,
        config,
        a: a.clone(),
        b,
        x,
        xv,
        pairing,
        bar_a,
        models,
        eta,
        coevaluation: iota,
        counit,
        certificates,
    })
}

pub fn identity_datum(a: &Arc<Algebra>, config: DatumConfig) -> Result<TiltingDatum, DerivedError> {
    let xv = Arc::new(Complex::concentrated(Bimodule::regular(a), 0));
    assemble(DatumKind::Identity, a, xv, config, Vec::new())
}

/// `B = End_A(P)`, `X^∨ = P`, `X = Hom_A(P, A)`.
pub fn morita_datum(a: &Arc<Algebra>, p: &Module, config: DatumConfig) -> Result<TiltingDatum, DerivedError> {
    let mut certs = Vec::new();
    let split = projectivity_certificate(p);
    certs.push(Certificate::new("projective", split.is_some(), "splitting of P ⊗ A → P".into()));
    if split.is_none() {
        return Err(DerivedError::NotProgenerator("P ⊗ A → P does not split".into()));
    }
    let trace = trace_ideal_rank(p);
    certs.push(Certificate::new("generator", trace == a.dim(), format!("trace ideal rank {trace} of {}", a.dim())));
    if trace != a.dim() {
        return Err(DerivedError::NotProgenerator(format!("trace ideal has rank {trace}, expected {}", a.dim())));
    }
    let end = endomorphism_algebra(p)?;
    let xv = Arc::new(Complex::concentrated(end.bimodule, 0));
    assemble(DatumKind::Morita, a, xv, config, certs)
}

/// A projective presentation `0 → P_1 → P_0 → T → 0`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub p1: Module,
    pub p0: Module,
    pub d1: Matrix,
    pub cover: Matrix,
}

fn is_module_map(src: &Module, dst: &Module, m: &Matrix) -> bool {
    m.rows() == dst.dim()
        && m.cols() == src.dim()
        && (0..src.algebra().dim()).all(|e| m.mul(src.action(e)) == dst.action(e).mul(m))
}

/// Checks the presentation and `Ext^1(T, T) = 0`; the summand count is
/// recorded as asserted.
pub fn tilting_certificates(t: &Module, pres: &Presentation, summands: Option<usize>) -> Vec<Certificate> {
    let mut certs = Vec::new();
    let linear = is_module_map(&pres.p1, &pres.p0, &pres.d1) && is_module_map(&pres.p0, t, &pres.cover);
    certs.push(Certificate::new("presentation maps are A-linear", linear, String::new()));
    if !linear {
        return certs;
    }
    let injective = linalg::rank(&pres.d1) == pres.p1.dim();
    let surjective = linalg::rank(&pres.cover) == t.dim();
    let composite = pres.cover.mul(&pres.d1).is_zero();
    let middle = pres.p0.dim() == pres.p1.dim() + t.dim();
    certs.push(Certificate::new(
        "presentation is exact",
        injective && surjective && composite && middle,
        format!("injective {injective}, surjective {surjective}, composite zero {composite}, dims add up {middle}"),
    ));
    for (name, m) in [("P_1 projective", &pres.p1), ("P_0 projective", &pres.p0)] {
        certs.push(Certificate::new(name, projectivity_certificate(m).is_some(), "splitting of P ⊗ A → P".into()));
    }
    let h0 = hom_space(&pres.p0, t);
    let h1 = hom_space(&pres.p1, t);
    let restricted: Vec<SVec> = h0.iter().map(|phi| crate::algebra::flatten(&phi.mul(&pres.d1))).collect();
    let rank = linalg::rank(&Matrix::from_columns(t.algebra().field(), t.dim() * pres.p1.dim(), restricted));
    certs.push(Certificate::new(
        "Ext^1(T, T) = 0",
        rank == h1.len(),
        format!("restriction Hom(P_0, T) → Hom(P_1, T) has rank {rank} of {}", h1.len()),
    ));
    certs.push(Certificate {
        name: "summand count".into(),
        status: CertStatus::Asserted,
        detail: match summands {
            Some(n) => format!("asserted {n} pairwise non-isomorphic indecomposable summands, not verified"),
            None => "not asserted".into(),
        },
    });
    certs
}

/// `B = End_A(T)` and `X^∨` the canonical two-term resolution
/// `K → T ⊗_k A` of `T`, on which `B` acts strictly through `T`.
pub fn tilting_datum(
    a: &Arc<Algebra>,
    t: &Module,
    pres: &Presentation,
    summands: Option<usize>,
    config: DatumConfig,
) -> Result<TiltingDatum, DerivedError> {
    let certs = tilting_certificates(t, pres, summands);
    if let Some(bad) = certs.iter().find(|c| c.status == CertStatus::Failed) {
        return Err(DerivedError::TiltingValidationFailed(format!("{} ({})", bad.name, bad.detail)));
    }
    let f = a.field();
    let end = endomorphism_algebra(t)?;
    let b = end.algebra.clone();
    let tb = &end.bimodule;
    let ia = Matrix::identity(f, a.dim());
    let it = Matrix::identity(f, t.dim());
    let lefts = (0..b.dim()).map(|e| tb.left(e).kron(&ia)).collect();
    let rights = (0..a.dim()).map(|e| it.kron(a.right_mult(e))).collect();
    let cover = Bimodule::new(b.clone(), a.clone(), t.dim() * a.dim(), lefts, rights)?;
    let (_, mult) = free_cover(t);
    let kernel = linalg::kernel_basis(&mult);
    let (k, incl) = sub_bimodule(&cover, &kernel)?;
    if projectivity_certificate(&k.right_module()).is_none() {
        return Err(DerivedError::TiltingValidationFailed("kernel of T ⊗ A → T is not projective".into()));
    }
    let xv = Arc::new(Complex::two_term(k, cover, incl)?);
    assemble(DatumKind::Tilting, a, xv, config, certs)
}

/// One line of a validation report; `passed == None` marks an assertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed: Some(passed), detail: detail.into() });
    }

    pub fn all_green(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.passed == Some(false)).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn outcome<T>(r: Result<T, impl std::fmt::Display>) -> (bool, String) {
    match r {
        Ok(_) => (true, String::new()),
        Err(e) => (false, e.to_string()),
    }
}

impl TiltingDatum {
    /// Homology degree range on which the triangle identities are compared.
    pub fn triangle_degree(&self) -> i64 {
        self.config.max_degree as i64 - 2
    }

    /// Flat index of the bar word stored in `tuple[range]`.
    fn word(tuple: &[usize], dim: usize) -> usize {
        tuple.iter().fold(0, |acc, t| acc * dim + t)
    }

    /// `(X ⊗ ε)∘(η ⊗ X)` on `B(A, A, X, B, B) = Bar(A) ⊗_A X ⊗_B Bar(B)`,
    /// reading `R ⊗_A X ⊗_B Bar(B)` as `X ⊗_B P`.
    pub fn triangle_one_map(&self, rep: &TwoSidedReplacement) -> Result<FreeMap, DerivedError> {
        let f = self.a.field();
        let free = &rep.free;
        let r_bar = &self.models.r_bar;
        let db = self.b.dim();
        let mut images = BTreeMap::new();
        for n in free.lo()..=free.hi() {
            let mut imgs = vec![Vec::new(); free.gens(n)];
            for (key, off, size) in rep.bar.generator_summands(n) {
                let (p, i, r) = (key[1], key[2], key[3] as usize);
                let xdim = self.x.dim(i);
                let rdim = db.pow(r as u32);
                for local in 0..size {
                    let (w, rest) = (local % rdim, local / rdim);
                    let (v, xj) = (rest / xdim, rest % xdim);
                    let mut out = Vec::new();
                    for (idx, c) in self.eta.image(p, v) {
                        let (rk, rt) = r_bar.decompose(p, idx);
                        let q = rk[1] as usize;
                        let u = Self::word(&rt[1..=q], db);
                        let z = self.models.z.project(rk[2], i, &sparse::unit(rt[q + 1]), &sparse::unit(xj), xdim);
                        let b = self.counit.on_word(q, u, rk[2] + i, &z, r, w);
                        if b.is_empty() {
                            continue;
                        }
                        let moved = self.x.term(rk[0]).unwrap().right_by(&b);
                        out = sparse::axpy(&f, &out, &c, moved.column(rt[0]));
                    }
                    imgs[off + local] = out;
                }
            }
            images.insert(n, imgs);
        }
        Ok(FreeMap::new(free.clone(), self.x.clone(), 0, images, (free.lo(), free.hi()))?)
    }

    /// `(ε ⊗ X^∨)∘(X^∨ ⊗ η)` on `B(B, B, X^∨, A, A) = Bar(B) ⊗_B X^∨ ⊗_A Bar(A)`.
    pub fn triangle_two_map(&self, rep: &TwoSidedReplacement) -> Result<FreeMap, DerivedError> {
        let f = self.a.field();
        let free = &rep.free;
        let r_bar = &self.models.r_bar;
        let (da, db) = (self.a.dim(), self.b.dim());
        let mut images = BTreeMap::new();
        for n in free.lo()..=free.hi() {
            let mut imgs = vec![Vec::new(); free.gens(n)];
            for (key, off, size) in rep.bar.generator_summands(n) {
                let (r, i, p) = (key[1] as usize, key[2], key[3]);
                let ydim = self.xv.dim(i);
                let pdim = da.pow(p as u32);
                for local in 0..size {
                    let (v, rest) = (local % pdim, local / pdim);
                    let (w, yb) = (rest / ydim, rest % ydim);
                    let mut out = Vec::new();
                    for (idx, c) in self.eta.image(p, v) {
                        let (rk, rt) = r_bar.decompose(p, idx);
                        let q = rk[1] as usize;
                        let u = Self::word(&rt[1..=q], db);
                        let xdim = self.x.dim(rk[0]);
                        let z = self.models.z.project(i, rk[0], &sparse::unit(yb), &sparse::unit(rt[0]), xdim);
                        let b = self.counit.on_word(r, w, i + rk[0], &z, q, u);
                        if b.is_empty() {
                            continue;
                        }
                        let moved = self.xv.term(rk[2]).unwrap().left_by(&b);
                        out = sparse::axpy(&f, &out, &c, moved.column(rt[q + 1]));
                    }
                    imgs[off + local] = out;
                }
            }
            images.insert(n, imgs);
        }
        Ok(FreeMap::new(free.clone(), self.xv.clone(), 0, images, (free.lo(), free.hi()))?)
    }

    fn triangle(&self, which: u8) -> Result<bool, DerivedError> {
        let hi = self.triangle_degree();
        let target = if which == 1 { &self.x } else { &self.xv };
        let rep = two_sided_bar_replacement(target, hi + 1, self.config.budget)?;
        let map = if which == 1 { self.triangle_one_map(&rep)? } else { self.triangle_two_map(&rep)? };
        map.check()?;
        Ok(homotopic(&map, &rep.augmentation, hi).is_some())
    }

    /// Checks `H_0(ε)`: bijective, unital on the coevaluation, multiplicative.
    /// For the strict counit, directly on `Q` up to `hi`; for the resolved
    /// one, through the quasi-isomorphism `P → Z` with `Z` bounded.
    pub fn counit_is_quasi_iso(&self, hi: i64) -> Result<(bool, String), DerivedError> {
        match &self.counit {
            Counit::Strict { on_q, .. } => {
                let lo = self.models.q.lo();
                Ok((is_quasi_iso_on(on_q, lo, hi)?, format!("on Q, degrees {lo}..={hi}")))
            }
            Counit::Resolved { .. } => {
                let zc = &self.models.z.complex;
                for n in zc.lo()..=zc.hi() {
                    if n != 0 && zc.homology(n)?.dim() != 0 {
                        return Ok((false, format!("H_{n}(Z) is nonzero")));
                    }
                }
                let h0 = zc.homology(0)?;
                let images: Vec<SVec> = h0.reps().iter().map(|r| self.counit.on_z0(r)).collect();
                let rank = linalg::rank(&Matrix::from_columns(self.a.field(), self.b.dim(), images));
                let ok = h0.dim() == self.b.dim() && rank == self.b.dim();
                Ok((ok, format!("through Z, degrees {}..={}", zc.lo(), zc.hi())))
            }
        }
    }

    pub fn counit_is_algebra_iso(&self) -> Result<bool, DerivedError> {
        let f = self.a.field();
        let z = &self.models.z;
        let h0 = z.complex.homology(0)?;
        if h0.dim() != self.b.dim() {
            return Ok(false);
        }
        let images: Vec<SVec> = h0.reps().iter().map(|r| self.counit.on_z0(r)).collect();
        if linalg::rank(&Matrix::from_columns(f, self.b.dim(), images.clone())) != self.b.dim() {
            return Ok(false);
        }
        if self.counit.on_z0(&self.coevaluation) != *self.b.unit() {
            return Ok(false);
        }
        for (u, eu) in h0.reps().iter().zip(&images) {
            for (v, ev) in h0.reps().iter().zip(&images) {
                let prod = z_product(&self.xv, &self.pairing, z, u, v);
                if self.counit.on_z0(&prod) != self.b.mul(eu, ev) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        for c in &self.certificates {
            rep.checks.push(Check {
                name: c.name.clone(),
                passed: match c.status {
                    CertStatus::Verified => Some(true),
                    CertStatus::Failed => Some(false),
                    CertStatus::Asserted => None,
                },
                detail: c.detail.clone(),
            });
        }
        let (ok, d) = outcome(self.models.evaluation.check());
        rep.push("evaluation is a chain map", ok, d);
        let (ok, d) = outcome(self.eta.check());
        rep.push("eta is a chain map", ok, d);
        let eta_map = self.eta.to_chain_map(&self.bar_a.complex);
        let hi = self.triangle_degree();
        let s_eta = self.models.evaluation.compose(&eta_map);
        let aug_ok = (0..=self.bar_a.n_max as i64).all(|n| s_eta.component(n) == self.bar_a.augmentation_map.component(n));
        rep.push("evaluation ∘ eta = augmentation", aug_ok, "");
        let (ok, d) = match is_quasi_iso_on(&eta_map, 0, hi) {
            Ok(b) => (b, format!("degrees 0..={hi}")),
            Err(e) => (false, e.to_string()),
        };
        rep.push("eta is a quasi-isomorphism", ok, d);
        let (ok, d) = outcome(self.counit.check());
        rep.push("eps is a chain map", ok, d);
        let (ok, d) = match self.counit_is_quasi_iso(hi) {
            Ok(b) => b,
            Err(e) => (false, e.to_string()),
        };
        rep.push("eps is a quasi-isomorphism", ok, d);
        let (ok, d) = match self.counit_is_algebra_iso() {
            Ok(b) => (b, String::new()),
            Err(e) => (false, e.to_string()),
        };
        rep.push("H_0(eps) is an algebra isomorphism", ok, d);
        for which in [1u8, 2] {
            let (ok, d) = match self.triangle(which) {
                Ok(b) => (b, if b { String::new() } else { "not homotopic to the augmentation".into() }),
                Err(e) => (false, e.to_string()),
            };
            rep.push(&format!("triangle {which}"), ok, d);
        }
        rep
    }

    /// The same datum with every generator image of `η` multiplied on the
    /// left by `u ∈ A`; for non-central `u` the result is no longer a
    /// bimodule chain map.
    pub fn with_eta_multiplied(&self, u: &SVec) -> Result<TiltingDatum, DerivedError> {
        let r = &self.models.r;
        let images = (0..=self.bar_a.n_max as i64)
            .map(|n| {
                let act = r.term(n).map(|t| t.left_by(u));
                let imgs = (0..self.bar_a.free.gens(n))
                    .map(|g| act.as_ref().map_or_else(Vec::new, |m| m.apply(&self.eta.image(n, g))))
                    .collect();
                (n, imgs)
            })
            .collect();
        let eta = FreeMap::new(self.eta.source().clone(), r.clone(), 0, images, self.eta.defined())?;
        Ok(TiltingDatum { eta, ..self.clone() })
    }

    /// The same `X^∨`, `η`, `ε_0` with the differential of `X` negated out
    /// of `degree`; the models are rebuilt from the altered `X`.
    pub fn with_flipped_x_differential(&self, degree: i64) -> Result<TiltingDatum, DerivedError> {
        let f = self.a.field();
        let x = &self.x;
        let diffs = (x.lo()..=x.hi())
            .map(|n| if n == degree { x.diff(n).scale(&f.from_i64(-1)) } else { x.diff(n) })
            .collect::<Vec<_>>();
        let flipped = Arc::new(Complex::with_rings(x.left().clone(), x.right().clone(), x.lo(), x.terms().to_vec(), diffs)?);
        let models = build_models(&self.a, &self.b, &flipped, &self.xv, &self.pairing, &self.config)?;
        let eta = FreeMap::new(
            self.eta.source().clone(),
            models.r.clone(),
            0,
            (0..=self.bar_a.n_max as i64).map(|n| (n, (0..self.bar_a.free.gens(n)).map(|g| self.eta.image(n, g)).collect())).collect(),
            self.eta.defined(),
        )?;
        let counit = match &self.counit {
            Counit::Strict { eps0, .. } => Counit::Strict { on_q: counit_map(&models, eps0)?, eps0: eps0.clone() },
            Counit::Resolved { map, offsets, .. } => {
                let model = two_sided_bar_replacement(&models.z.complex, 1, self.config.budget)?;
                let images = (model.free.lo()..=model.free.hi())
                    .map(|n| (n, (0..model.free.gens(n)).map(|g| map.image(n, g)).collect()))
                    .collect();
                let map = FreeMap::new(model.free.clone(), models.b_complex.clone(), 0, images, map.defined())?;
                Counit::Resolved { model, map, offsets: offsets.clone() }
            }
        };
        Ok(TiltingDatum { x: flipped, models, eta, counit, ..self.clone() })
    }
}

/// `M / span` as a right module, with the projection.
pub fn quotient_module(m: &Module, span: &[SVec]) -> Result<(Module, Matrix), DerivedError> {
    let k = Arc::new(crate::algebra::base_field(m.algebra().field()));
    let (q, quot) = quotient_bimodule(&Bimodule::from_right_module(&k, m), span)?;
    Ok((q.right_module(), quot.pi))
}

/// `0 → K → T ⊗_k A → T → 0`, with `K` the kernel of the multiplication.
pub fn canonical_presentation(t: &Module) -> Result<Presentation, DerivedError> {
    let k = Arc::new(crate::algebra::base_field(t.algebra().field()));
    let (p0, mult) = free_cover(t);
    let kernel = linalg::kernel_basis(&mult);
    let (sub, incl) = sub_bimodule(&Bimodule::from_right_module(&k, &p0), &kernel)?;
    Ok(Presentation { p1: sub.right_module(), p0, d1: incl, cover: mult })
}
