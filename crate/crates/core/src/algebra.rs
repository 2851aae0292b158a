//! Finite-dimensional algebras given by structure constants, together with
//! right modules and bimodules given by explicit action matrices.
//!
//! Conventions used everywhere:
//! - elements are coordinate vectors on the basis `e_0, ..., e_{d-1}`;
//! - a right module stores `action[i]`, the matrix of `v ↦ v·e_i`, so
//!   `action[j] * action[i]` is the action of `e_i e_j`;
//! - a bimodule stores `left_action[i]` (`v ↦ e_i·v`) and
//!   `right_action[j]` (`v ↦ v·f_j`);
//! - an `(A, B)`-bimodule is the same thing as a right module over
//!   `A^op ⊗ B`, with `v·(a ⊗ b) = a·v·b` (see [`Bimodule::to_right_module`]).

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{self, sparse, Echelon, Elem, Field, Matrix, SVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("quiver has an oriented cycle through vertex {0}")]
    CyclicQuiver(usize),
    #[error("arrow {0} has an endpoint outside the vertex set")]
    BadArrow(usize),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("algebra axioms violated: {0:?}")]
    Violations(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `(e_i e_j) e_l != e_i (e_j e_l)`
    Associativity(usize, usize, usize),
    LeftUnit(usize),
    RightUnit(usize),
    /// `action(e_i) action(e_j)` disagrees with the action of the product.
    ActionProduct { side: &'static str, i: usize, j: usize },
    ActionUnit { side: &'static str },
    ActionsDoNotCommute(usize, usize),
    Dimension(String),
}

#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    labels: Vec<String>,
    products: Vec<Vec<SVec>>,
    unit: SVec,
    left_mult: Vec<Matrix>,
    right_mult: Vec<Matrix>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.products == other.products && self.unit == other.unit
    }
}

impl Algebra {
    /// Builds an algebra from sparse structure constants `(i, j, k, c)`
    /// meaning `e_i e_j` has coefficient `c` on `e_k`. Axioms are not checked;
    /// see [`validate_algebra`].
    pub fn from_table(
        field: Field,
        labels: Vec<String>,
        table: &[(usize, usize, usize, Elem)],
        unit: SVec,
    ) -> Result<Self, AlgebraError> {
        let dim = labels.len();
        let mut items: Vec<Vec<Vec<(usize, Elem)>>> = vec![vec![Vec::new(); dim]; dim];
        for (i, j, k, c) in table {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(AlgebraError::Invalid(format!("table index ({i},{j},{k}) out of range")));
            }
            items[*i][*j].push((*k, field.norm(c.clone())));
        }
        if unit.iter().any(|(i, _)| *i >= dim) {
            return Err(AlgebraError::Invalid("unit has too many coordinates".into()));
        }
        let products: Vec<Vec<SVec>> = items
            .into_iter()
            .map(|row| row.into_iter().map(|v| sparse::collect(&field, v)).collect())
            .collect();
        let unit = sparse::collect(&field, unit.into_iter().map(|(i, x)| (i, field.norm(x))).collect());
        Ok(Self::from_products(field, labels, products, unit))
    }

    fn from_products(field: Field, labels: Vec<String>, products: Vec<Vec<SVec>>, unit: SVec) -> Self {
        let dim = labels.len();
        let left_mult = (0..dim)
            .map(|i| Matrix::from_columns(field, dim, (0..dim).map(|j| products[i][j].clone()).collect()))
            .collect();
        let right_mult = (0..dim)
            .map(|j| Matrix::from_columns(field, dim, (0..dim).map(|i| products[i][j].clone()).collect()))
            .collect();
        Algebra { field, labels, products, unit, left_mult, right_mult }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &SVec {
        &self.unit
    }

    /// `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &SVec {
        &self.products[i][j]
    }

    /// Matrix of `v ↦ e_i v`.
    pub fn left_mult(&self, i: usize) -> &Matrix {
        &self.left_mult[i]
    }

    /// Matrix of `v ↦ v e_i`.
    pub fn right_mult(&self, i: usize) -> &Matrix {
        &self.right_mult[i]
    }

    pub fn mul(&self, a: &SVec, b: &SVec) -> SVec {
        let f = &self.field;
        let mut items = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                let c = f.mul(x, y);
                for (k, z) in &self.products[*i][*j] {
                    items.push((*k, f.mul(&c, z)));
                }
            }
        }
        sparse::collect(f, items)
    }

    /// Sparse structure constants `(i, j, k, c)`.
    pub fn table(&self) -> Vec<(usize, usize, usize, Elem)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (k, c) in &self.products[i][j] {
                    out.push((i, j, k.to_owned(), c.clone()));
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by an arbitrary element.
    pub fn left_mult_by(&self, a: &SVec) -> Matrix {
        combine(self.field, self.dim(), &self.left_mult, a)
    }

    pub fn right_mult_by(&self, a: &SVec) -> Matrix {
        combine(self.field, self.dim(), &self.right_mult, a)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.products[i][j] == self.products[j][i]))
    }

    /// Basis of the center, as coordinate vectors.
    pub fn center(&self) -> Vec<SVec> {
        let f = self.field;
        let d = self.dim();
        let rows: Vec<SVec> = (0..d)
            .flat_map(|i| {
                let diff = self.left_mult[i].sub(&self.right_mult[i]);
                diff.row_vectors()
            })
            .collect();
        Echelon::of_rows(f, d, rows).kernel_basis()
    }
}

/// `Σ a_i m_i`.
pub fn combine(field: Field, dim: usize, mats: &[Matrix], a: &SVec) -> Matrix {
    let mut out = Matrix::zeros(field, dim, dim);
    for (i, x) in a {
        out = out.axpy(x, &mats[*i]);
    }
    out
}

/// Checks associativity on all basis triples and both unit laws.
pub fn validate_algebra(a: &Algebra) -> Result<(), Vec<Violation>> {
    let d = a.dim();
    let mut bad = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let ij = a.basis_product(i, j);
            for l in 0..d {
                let lhs = a.mul(ij, &sparse::unit(l));
                let rhs = a.mul(&sparse::unit(i), a.basis_product(j, l));
                if lhs != rhs {
                    bad.push(Violation::Associativity(i, j, l));
                }
            }
        }
    }
    for i in 0..d {
        if a.mul(a.unit(), &sparse::unit(i)) != sparse::unit(i) {
            bad.push(Violation::LeftUnit(i));
        }
        if a.mul(&sparse::unit(i), a.unit()) != sparse::unit(i) {
            bad.push(Violation::RightUnit(i));
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// The base field as a one-dimensional algebra.
pub fn base_field(f: Field) -> Algebra {
    matrix_algebra(1, f)
}

/// `k[x]/(x²)` with basis `{1, x}`.
pub fn dual_numbers(f: Field) -> Algebra {
    let one = f.one();
    let table = [(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one.clone())];
    Algebra::from_table(f, vec!["1".into(), "x".into()], &table, sparse::unit(0)).expect("valid table")
}

/// `n × n` matrices with the basis of matrix units `E_{ij}` at index `i*n + j`.
pub fn matrix_algebra(n: usize, f: Field) -> Algebra {
    assert!(n >= 1, "matrix algebra of size zero");
    let mut table = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                table.push((i * n + j, j * n + l, i * n + l, f.one()));
            }
        }
    }
    let labels = if n == 1 {
        vec!["1".to_string()]
    } else {
        (0..n).flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1))).collect()
    };
    let unit = (0..n).map(|i| (i * n + i, f.one())).collect();
    Algebra::from_table(f, labels, &table, unit).expect("valid table")
}

/// A finite quiver; arrows are `(source, target)` pairs of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
}

/// Path algebra of an acyclic quiver.
///
/// Basis: trivial paths `e_v` first, then paths of length 1, 2, ... (arrows
/// of a path listed in traversal order). The product `p·q` is the
/// concatenation "first `p`, then `q`" when `p` ends where `q` starts, and
/// zero otherwise; so `e_v A` is spanned by the paths starting at `v`.
pub fn path_algebra(quiver: &Quiver, f: Field) -> Result<Algebra, AlgebraError> {
    let n = quiver.vertices;
    for (k, (s, t)) in quiver.arrows.iter().enumerate() {
        if *s >= n || *t >= n {
            return Err(AlgebraError::BadArrow(k));
        }
    }
    // Any path longer than the vertex count revisits a vertex.
    // A path is (start vertex, arrow list).
    let mut paths: Vec<(usize, Vec<usize>)> = (0..n).map(|v| (v, Vec::new())).collect();
    let mut frontier: Vec<(usize, Vec<usize>)> =
        quiver.arrows.iter().enumerate().map(|(k, (s, _))| (*s, vec![k])).collect();
    let mut len = 1;
    while !frontier.is_empty() {
        if len > n {
            let (s, _) = &frontier[0];
            return Err(AlgebraError::CyclicQuiver(*s));
        }
        paths.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for (s, p) in &frontier {
            let end = quiver.arrows[*p.last().unwrap()].1;
            for (k, (s2, _)) in quiver.arrows.iter().enumerate() {
                if *s2 == end {
                    let mut q = p.clone();
                    q.push(k);
                    next.push((*s, q));
                }
            }
        }
        frontier = next;
        len += 1;
    }
    let end_of = |(s, p): &(usize, Vec<usize>)| p.last().map_or(*s, |a| quiver.arrows[*a].1);
    let index: std::collections::HashMap<(usize, Vec<usize>), usize> =
        paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut table = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            if end_of(p) != q.0 {
                continue;
            }
            let mut arrows = p.1.clone();
            arrows.extend(q.1.iter().copied());
            let k = index[&(p.0, arrows)];
            table.push((i, j, k, f.one()));
        }
    }
    let labels = paths
        .iter()
        .map(|(s, p)| {
            if p.is_empty() {
                format!("e{}", s + 1)
            } else {
                p.iter().map(|a| format!("a{}", a + 1)).collect::<Vec<_>>().join("")
            }
        })
        .collect();
    let unit = (0..n).map(|v| (v, f.one())).collect();
    Algebra::from_table(f, labels, &table, unit)
}

/// The opposite algebra: same space, `c'_{ij}^k = c_{ji}^k`.
pub fn opposite(a: &Algebra) -> Algebra {
    let d = a.dim();
    let products = (0..d).map(|i| (0..d).map(|j| a.products[j][i].clone()).collect()).collect();
    Algebra::from_products(a.field, a.labels.clone(), products, a.unit.clone())
}

/// `a ⊗ b` on the kron-ordered basis `(i, j) ↦ i * dim(b) + j`.
pub fn tensor_algebra(a: &Algebra, b: &Algebra) -> Result<Algebra, AlgebraError> {
    if a.field != b.field {
        return Err(AlgebraError::FieldMismatch(a.field, b.field));
    }
    let f = a.field;
    let (da, db) = (a.dim(), b.dim());
    let mut products = vec![vec![Vec::new(); da * db]; da * db];
    for i1 in 0..da {
        for j1 in 0..db {
            for i2 in 0..da {
                for j2 in 0..db {
                    products[i1 * db + j1][i2 * db + j2] =
                        sparse::kron(&f, &a.products[i1][i2], &b.products[j1][j2], db);
                }
            }
        }
    }
    let labels = a
        .labels
        .iter()
        .flat_map(|x| b.labels.iter().map(move |y| format!("{x}⊗{y}")))
        .collect();
    let unit = sparse::kron(&f, &a.unit, &b.unit, db);
    Ok(Algebra::from_products(f, labels, products, unit))
}

/// `A ⊗ A^op`.
pub fn enveloping(a: &Algebra) -> Algebra {
    tensor_algebra(a, &opposite(a)).expect("same field")
}

/// Checks that `map` (columns = images of basis vectors of `a`) is a unital
/// algebra homomorphism `a → b`.
pub fn is_algebra_hom(a: &Algebra, b: &Algebra, map: &Matrix) -> bool {
    if map.cols() != a.dim() || map.rows() != b.dim() {
        return false;
    }
    if map.apply(a.unit()) != *b.unit() {
        return false;
    }
    (0..a.dim()).all(|i| {
        (0..a.dim()).all(|j| {
            map.apply(a.basis_product(i, j)) == b.mul(map.column(i), map.column(j))
        })
    })
}

#[derive(Clone, Debug)]
pub struct Module {
    algebra: Arc<Algebra>,
    action: Vec<Matrix>,
}

impl Module {
    pub fn new(algebra: Arc<Algebra>, action: Vec<Matrix>) -> Result<Self, AlgebraError> {
        let dim = action.first().map_or(0, |m| m.rows());
        if action.len() != algebra.dim() || action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(AlgebraError::Invalid("action matrices have inconsistent shapes".into()));
        }
        Ok(Module { algebra, action })
    }

    /// `A` as a right module over itself.
    pub fn regular(a: &Arc<Algebra>) -> Self {
        Module { algebra: a.clone(), action: a.right_mult.clone() }
    }

    /// `A^r` as a right module.
    pub fn free(a: &Arc<Algebra>, r: usize) -> Self {
        let id = Matrix::identity(a.field, r);
        Module { algebra: a.clone(), action: a.right_mult.iter().map(|m| id.kron(m)).collect() }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, |m| m.rows())
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn act_by(&self, a: &SVec) -> Matrix {
        combine(self.algebra.field, self.dim(), &self.action, a)
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        let action = self.action.iter().zip(&other.action).map(|(x, y)| x.direct_sum(y)).collect();
        Module { algebra: self.algebra.clone(), action }
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        check_action(&self.algebra, &self.action, self.dim(), "right", true)
    }
}

fn check_action(a: &Algebra, mats: &[Matrix], dim: usize, side: &'static str, right: bool) -> Result<(), Vec<Violation>> {
    let mut bad = Vec::new();
    let f = a.field;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let prod = combine(f, dim, mats, a.basis_product(i, j));
            let composite = if right { mats[j].mul(&mats[i]) } else { mats[i].mul(&mats[j]) };
            if prod != composite {
                bad.push(Violation::ActionProduct { side, i, j });
            }
        }
    }
    if !combine(f, dim, mats, a.unit()).is_identity() && dim > 0 {
        bad.push(Violation::ActionUnit { side });
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

#[derive(Clone, Debug)]
pub struct Bimodule {
    left_algebra: Arc<Algebra>,
    right_algebra: Arc<Algebra>,
    dim: usize,
    left_action: Vec<Matrix>,
    right_action: Vec<Matrix>,
}

impl Bimodule {
    pub fn new(
        left_algebra: Arc<Algebra>,
        right_algebra: Arc<Algebra>,
        dim: usize,
        left_action: Vec<Matrix>,
        right_action: Vec<Matrix>,
    ) -> Result<Self, AlgebraError> {
        let shapes_ok = left_action.len() == left_algebra.dim()
            && right_action.len() == right_algebra.dim()
            && left_action.iter().chain(&right_action).all(|m| m.rows() == dim && m.cols() == dim);
        if !shapes_ok {
            return Err(AlgebraError::Invalid("bimodule action matrices have inconsistent shapes".into()));
        }
        Ok(Bimodule { left_algebra, right_algebra, dim, left_action, right_action })
    }

    /// `A` as an `(A, A)`-bimodule.
    pub fn regular(a: &Arc<Algebra>) -> Self {
        Bimodule {
            left_algebra: a.clone(),
            right_algebra: a.clone(),
            dim: a.dim(),
            left_action: a.left_mult.clone(),
            right_action: a.right_mult.clone(),
        }
    }

    /// The zero bimodule.
    pub fn zero(l: &Arc<Algebra>, r: &Arc<Algebra>) -> Self {
        let z = Matrix::zeros(l.field, 0, 0);
        Bimodule {
            left_algebra: l.clone(),
            right_algebra: r.clone(),
            dim: 0,
            left_action: vec![z.clone(); l.dim()],
            right_action: vec![z; r.dim()],
        }
    }

    /// A right module viewed as a `(k, A)`-bimodule.
    pub fn from_right_module(k: &Arc<Algebra>, m: &Module) -> Self {
        let id = Matrix::identity(k.field, m.dim());
        Bimodule {
            left_algebra: k.clone(),
            right_algebra: m.algebra.clone(),
            dim: m.dim(),
            left_action: vec![id; k.dim()],
            right_action: m.action.clone(),
        }
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left_algebra
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right_algebra
    }

    pub fn field(&self) -> Field {
        self.left_algebra.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self, i: usize) -> &Matrix {
        &self.left_action[i]
    }

    pub fn right(&self, j: usize) -> &Matrix {
        &self.right_action[j]
    }

    pub fn left_actions(&self) -> &[Matrix] {
        &self.left_action
    }

    pub fn right_actions(&self) -> &[Matrix] {
        &self.right_action
    }

    pub fn left_by(&self, a: &SVec) -> Matrix {
        combine(self.field(), self.dim, &self.left_action, a)
    }

    pub fn right_by(&self, b: &SVec) -> Matrix {
        combine(self.field(), self.dim, &self.right_action, b)
    }

    /// The right module structure over the right algebra.
    pub fn right_module(&self) -> Module {
        Module { algebra: self.right_algebra.clone(), action: self.right_action.clone() }
    }

    pub fn direct_sum(&self, other: &Bimodule) -> Bimodule {
        Bimodule {
            left_algebra: self.left_algebra.clone(),
            right_algebra: self.right_algebra.clone(),
            dim: self.dim + other.dim,
            left_action: self.left_action.iter().zip(&other.left_action).map(|(x, y)| x.direct_sum(y)).collect(),
            right_action: self.right_action.iter().zip(&other.right_action).map(|(x, y)| x.direct_sum(y)).collect(),
        }
    }

    /// Tensor product over the base field: left action on `self`, right on `other`.
    pub fn kron(&self, other: &Bimodule) -> Bimodule {
        let f = self.field();
        let ia = Matrix::identity(f, self.dim);
        let ib = Matrix::identity(f, other.dim);
        Bimodule {
            left_algebra: self.left_algebra.clone(),
            right_algebra: other.right_algebra.clone(),
            dim: self.dim * other.dim,
            left_action: self.left_action.iter().map(|m| m.kron(&ib)).collect(),
            right_action: other.right_action.iter().map(|m| ia.kron(m)).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut bad = Vec::new();
        if let Err(v) = check_action(&self.left_algebra, &self.left_action, self.dim, "left", false) {
            bad.extend(v);
        }
        if let Err(v) = check_action(&self.right_algebra, &self.right_action, self.dim, "right", true) {
            bad.extend(v);
        }
        for (i, l) in self.left_action.iter().enumerate() {
            for (j, r) in self.right_action.iter().enumerate() {
                if l.mul(r) != r.mul(l) {
                    bad.push(Violation::ActionsDoNotCommute(i, j));
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    /// Re-encodes as a right module over `A^op ⊗ B`, `v·(a ⊗ b) = a·v·b`.
    pub fn to_right_module(&self) -> (Arc<Algebra>, Module) {
        let env = Arc::new(tensor_algebra(&opposite(&self.left_algebra), &self.right_algebra).expect("same field"));
        let action = self
            .left_action
            .iter()
            .flat_map(|l| self.right_action.iter().map(move |r| l.mul(r)))
            .collect();
        (env.clone(), Module { algebra: env, action })
    }

    /// Inverse of [`Bimodule::to_right_module`].
    pub fn from_right_module_over_tensor(l: &Arc<Algebra>, r: &Arc<Algebra>, m: &Module) -> Bimodule {
        let f = l.field;
        let (dl, dr) = (l.dim(), r.dim());
        let dim = m.dim();
        let left_action = (0..dl)
            .map(|i| {
                let idx: SVec = r.unit.iter().map(|(j, c)| (i * dr + j, c.clone())).collect();
                combine(f, dim, &m.action, &idx)
            })
            .collect();
        let right_action = (0..dr)
            .map(|j| {
                let idx: SVec = sparse::collect(&f, l.unit.iter().map(|(i, c)| (i * dr + j, c.clone())).collect());
                combine(f, dim, &m.action, &idx)
            })
            .collect();
        Bimodule { left_algebra: l.clone(), right_algebra: r.clone(), dim, left_action, right_action }
    }
}

/// The regular `(A, A)`-bimodule.
pub fn regular_bimodule(a: &Arc<Algebra>) -> Bimodule {
    Bimodule::regular(a)
}

/// Basis of `Hom(m, n)` for right modules: matrices `φ` (`dim n × dim m`) with
/// `φ ρ_m(e_i) = ρ_n(e_i) φ` for every basis element.
pub fn hom_space(m: &Module, n: &Module) -> Vec<Matrix> {
    intertwiners(m.algebra.field, m.dim(), n.dim(), &m.action, &n.action)
}

/// Basis of the matrices `φ` with `φ s_i = t_i φ` for all `i`.
pub fn intertwiners(f: Field, dm: usize, dn: usize, s: &[Matrix], t: &[Matrix]) -> Vec<Matrix> {
    // unknown φ[r][c] at index r * dm + c
    let mut rows = Vec::new();
    for (si, ti) in s.iter().zip(t) {
        let ti_dense = ti.to_dense_rows();
        for r in 0..dn {
            for c in 0..dm {
                let mut items = Vec::new();
                for (k, x) in si.column(c) {
                    items.push((r * dm + k, x.clone()));
                }
                for (k, y) in ti_dense[r].iter().enumerate() {
                    if !y.is_zero() {
                        items.push((k * dm + c, f.neg(y)));
                    }
                }
                let row = sparse::collect(&f, items);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    Echelon::of_rows(f, dm * dn, rows)
        .kernel_basis()
        .into_iter()
        .map(|v| unflatten(f, dn, dm, &v))
        .collect()
}

/// Row-major flattening of a matrix: entry `(r, c)` at `r * cols + c`.
pub fn flatten(m: &Matrix) -> SVec {
    let mut items = Vec::new();
    for c in 0..m.cols() {
        for (r, x) in m.column(c) {
            items.push((r * m.cols() + c, x.clone()));
        }
    }
    sparse::collect(&m.field(), items)
}

pub fn unflatten(f: Field, rows: usize, cols: usize, v: &SVec) -> Matrix {
    let mut columns = vec![Vec::new(); cols];
    for (k, x) in v {
        columns[k % cols].push((k / cols, x.clone()));
    }
    for c in columns.iter_mut() {
        c.sort_by_key(|(i, _)| *i);
    }
    Matrix::from_columns(f, rows, columns)
}

/// Coordinates of `m` in the span of `basis`, if it lies there.
pub fn coordinates_in(basis: &[Matrix], m: &Matrix) -> Option<SVec> {
    let f = m.field();
    let cols: Vec<SVec> = basis.iter().map(flatten).collect();
    let n = m.rows() * m.cols();
    let mat = Matrix::from_columns(f, n, cols);
    linalg::solve(&mat, &flatten(m), n).ok()
}

/// An algebra structure on `End(m)` (product = composition, `(φψ)(v) = φ(ψ(v))`)
/// together with `m` as an `(End(m), A)`-bimodule. The basis of the
/// endomorphism algebra is the basis returned by [`hom_space`]; the matrices
/// are returned alongside.
pub struct Endomorphisms {
    pub algebra: Arc<Algebra>,
    pub basis: Vec<Matrix>,
    pub bimodule: Bimodule,
}

pub fn endomorphism_algebra(m: &Module) -> Result<Endomorphisms, AlgebraError> {
    let f = m.algebra.field;
    let basis = hom_space(m, m);
    let n = basis.len();
    let mut table = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let prod = basis[i].mul(&basis[j]);
            let c = coordinates_in(&basis, &prod)
                .ok_or_else(|| AlgebraError::Invalid("endomorphisms not closed under composition".into()))?;
            for (k, x) in c {
                table.push((i, j, k, x));
            }
        }
    }
    let unit = coordinates_in(&basis, &Matrix::identity(f, m.dim()))
        .ok_or_else(|| AlgebraError::Invalid("identity is not an endomorphism".into()))?;
    let labels = (0..n).map(|i| format!("φ{i}")).collect();
    let algebra = Arc::new(Algebra::from_table(f, labels, &table, unit)?);
    validate_algebra(&algebra).map_err(AlgebraError::Violations)?;
    let bimodule = Bimodule::new(algebra.clone(), m.algebra.clone(), m.dim(), basis.clone(), m.action.clone())?;
    Ok(Endomorphisms { algebra, basis, bimodule })
}

/// Checks whether an element is zero in all coordinates.
pub fn is_zero(v: &SVec) -> bool {
    v.iter().all(|(_, x)| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn a2() -> Algebra {
        path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1)] }, q()).unwrap()
    }

    #[test]
    fn dual_numbers_table() {
        for f in [q(), Field::prime(2).unwrap()] {
            let a = dual_numbers(f);
            assert_eq!(a.dim(), 2);
            assert!(a.basis_product(1, 1).is_empty());
            assert_eq!(a.basis_product(0, 1), &sparse::unit(1));
            assert!(validate_algebra(&a).is_ok());
        }
    }

    #[test]
    fn broken_unit_is_reported() {
        // e1 e1 = e2 and e2 declared the unit, but e2 e1 = 0.
        let table = [(0, 0, 1, q().one())];
        let a = Algebra::from_table(q(), vec!["e1".into(), "e2".into()], &table, sparse::unit(1)).unwrap();
        let v = validate_algebra(&a).unwrap_err();
        assert!(v.iter().any(|x| matches!(x, Violation::LeftUnit(_) | Violation::RightUnit(_))));
    }

    #[test]
    fn path_algebras() {
        let a = a2();
        assert_eq!(a.dim(), 3);
        assert!(validate_algebra(&a).is_ok());
        let point = path_algebra(&Quiver { vertices: 1, arrows: vec![] }, q()).unwrap();
        assert_eq!(point, base_field(q()));
        let a3 = path_algebra(&Quiver { vertices: 3, arrows: vec![(0, 1), (1, 2)] }, q()).unwrap();
        assert_eq!(a3.dim(), 6);
        assert!(validate_algebra(&a3).is_ok());
        let cyc = path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1), (1, 0)] }, q());
        assert!(matches!(cyc, Err(AlgebraError::CyclicQuiver(_))));
    }

    #[test]
    fn matrix_units() {
        assert_eq!(matrix_algebra(1, q()).dim(), 1);
        let m2 = matrix_algebra(2, q());
        // E12 E21 = E11
        assert_eq!(m2.basis_product(1, 2), &sparse::unit(0));
        assert!(validate_algebra(&matrix_algebra(3, q())).is_ok());
    }

    #[test]
    fn opposite_algebras() {
        let d = dual_numbers(q());
        assert_eq!(opposite(&d), d);
        let m2op = opposite(&matrix_algebra(2, q()));
        // E12 · E21 = E22 in the opposite table
        assert_eq!(m2op.basis_product(1, 2), &sparse::unit(3));
        let a = a2();
        assert_eq!(opposite(&opposite(&a)), a);
    }

    #[test]
    fn tensor_algebras() {
        let d = dual_numbers(q());
        let k = base_field(q());
        let dk = tensor_algebra(&d, &k).unwrap();
        assert_eq!(dk.table(), d.table());
        let env = enveloping(&d);
        assert_eq!(env.dim(), 4);
        assert_eq!(env.unit(), &sparse::kron(&q(), d.unit(), d.unit(), 2));
        assert!(validate_algebra(&env).is_ok());
        let f2 = dual_numbers(Field::prime(2).unwrap());
        assert!(matches!(tensor_algebra(&d, &f2), Err(AlgebraError::FieldMismatch(..))));
    }

    #[test]
    fn regular_bimodules() {
        let d = Arc::new(dual_numbers(q()));
        let r = regular_bimodule(&d);
        assert!(r.validate().is_ok());
        assert!(r.left(1).mul(r.left(1)).is_zero());
        assert!(r.right(1).mul(r.right(1)).is_zero());
        let m2 = Arc::new(matrix_algebra(2, q()));
        let r2 = regular_bimodule(&m2);
        assert_ne!(r2.left(0), r2.right(0));
        let k = Arc::new(base_field(q()));
        let rk = regular_bimodule(&k);
        assert!(rk.left(0).is_identity() && rk.right(0).is_identity());
    }

    #[test]
    fn bimodule_round_trip() {
        let m2 = Arc::new(matrix_algebra(2, q()));
        let r = regular_bimodule(&m2);
        let (env, module) = r.to_right_module();
        assert!(module.validate().is_ok());
        assert_eq!(env.dim(), 16);
        let back = Bimodule::from_right_module_over_tensor(&m2, &m2, &module);
        assert_eq!(back.left_actions(), r.left_actions());
        assert_eq!(back.right_actions(), r.right_actions());
    }

    #[test]
    fn hom_spaces() {
        let a = Arc::new(a2());
        let reg = Module::regular(&a);
        let h = hom_space(&reg, &reg);
        assert_eq!(h.len(), 3);
        assert!(coordinates_in(&h, &Matrix::identity(q(), 3)).is_some());
        // simples: S1 = top of e1 A, S2 = e2 A. Basis (e1, e2, a1).
        let s1 = Module::new(a.clone(), vec![Matrix::identity(q(), 1), Matrix::zeros(q(), 1, 1), Matrix::zeros(q(), 1, 1)]).unwrap();
        let s2 = Module::new(a.clone(), vec![Matrix::zeros(q(), 1, 1), Matrix::identity(q(), 1), Matrix::zeros(q(), 1, 1)]).unwrap();
        assert!(s1.validate().is_ok() && s2.validate().is_ok());
        assert!(hom_space(&s1, &s2).is_empty());
        assert!(hom_space(&s2, &s1).is_empty());
    }

    #[test]
    fn endomorphism_algebras() {
        let a = Arc::new(a2());
        let e = endomorphism_algebra(&Module::regular(&a)).unwrap();
        assert_eq!(e.algebra.dim(), 3);
        // a ↦ left multiplication by a is an isomorphism A → End(A_A)
        let cols: Vec<SVec> =
            (0..3).map(|i| coordinates_in(&e.basis, a.left_mult(i)).unwrap()).collect();
        let iso = Matrix::from_columns(q(), 3, cols);
        assert!(is_algebra_hom(&a, &e.algebra, &iso));
        assert_eq!(linalg::rank(&iso), 3);

        let k = Arc::new(base_field(q()));
        let k2 = Module::free(&k, 2);
        let e2 = endomorphism_algebra(&k2).unwrap();
        assert_eq!(e2.algebra.dim(), 4);
        let m2 = matrix_algebra(2, q());
        let cols: Vec<SVec> = (0..4)
            .map(|u| {
                let mut m = Matrix::zeros(q(), 2, 2);
                m = m.add(&Matrix::from_columns(q(), 2, {
                    let mut c = vec![Vec::new(); 2];
                    c[u % 2] = vec![(u / 2, q().one())];
                    c
                }));
                coordinates_in(&e2.basis, &m).unwrap()
            })
            .collect();
        assert!(is_algebra_hom(&m2, &e2.algebra, &Matrix::from_columns(q(), 4, cols)));

        let s1 = Module::new(a.clone(), vec![Matrix::identity(q(), 1), Matrix::zeros(q(), 1, 1), Matrix::zeros(q(), 1, 1)]).unwrap();
        assert_eq!(endomorphism_algebra(&s1).unwrap().algebra.dim(), 1);
    }

    #[test]
    fn center_of_matrix_algebra() {
        assert_eq!(matrix_algebra(2, q()).center().len(), 1);
        assert_eq!(dual_numbers(q()).center().len(), 2);
    }
}
