//! Cup and cap products at chain level, and the comparison of the cap
//! product with the map induced by a lifted cocycle on `M ⊗_{A^e} Bar(A)`.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, Bimodule};
use crate::complexes::ComplexError;
use crate::hochschild::{
    bar_resolution, chains_vs_bar_identification, cocycle_to_chain_map, hochschild_chains, Cochain, HochschildError,
};
use crate::linalg::{self, sparse, Matrix, SVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("cannot cap a chain of degree {chain} with a cochain of degree {cochain}")]
    DegreeViolation { cochain: usize, chain: usize },
    #[error("coefficient dimensions do not match")]
    Coefficients,
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn power(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

/// `(f ∪ g)(a_1, ..., a_{m+p}) = f(a_1, ..., a_m) · g(a_{m+1}, ..., a_{m+p})`.
pub fn cup(a: &Algebra, f: &Cochain, g: &Cochain) -> Result<Cochain, ProductError> {
    let d = a.dim();
    if f.coeff_dim != d || g.coeff_dim != d {
        return Err(ProductError::Coefficients);
    }
    let fld = a.field();
    let (m, p) = (f.degree, g.degree);
    let dp = power(d, p);
    let dmp = power(d, m + p);
    let ft = f.table(d);
    let gt = g.table(d);
    let mut items = Vec::new();
    for (u, fu) in ft.iter().enumerate() {
        if fu.is_empty() {
            continue;
        }
        for (v, gv) in gt.iter().enumerate() {
            if gv.is_empty() {
                continue;
            }
            for (k, c) in a.mul(fu, gv) {
                items.push((k * dmp + u * dp + v, c));
            }
        }
    }
    Ok(Cochain::new(m + p, d, sparse::collect(&fld, items)))
}

/// `f ∩ (m_0 ⊗ a_1 ... a_n) = m_0·f(a_1, ..., a_m) ⊗ a_{m+1} ... a_n`.
pub fn cap_chain(a: &Algebra, module: &Bimodule, f: &Cochain, n: usize, z: &SVec) -> Result<SVec, ProductError> {
    let m = f.degree;
    if m > n {
        return Err(ProductError::DegreeViolation { cochain: m, chain: n });
    }
    if f.coeff_dim != a.dim() {
        return Err(ProductError::Coefficients);
    }
    let fld = a.field();
    let d = a.dim();
    let dn = power(d, n);
    let tail = power(d, n - m);
    let ft = f.table(d);
    let mut items = Vec::new();
    for (idx, c) in z {
        let (mi, multi) = (idx / dn, idx % dn);
        let (head, rest) = (multi / tail, multi % tail);
        let value = &ft[head];
        if value.is_empty() {
            continue;
        }
        let moved = module.right_by(value);
        for (r, e) in moved.column(mi) {
            items.push((r * tail + rest, fld.mul(c, e)));
        }
    }
    Ok(sparse::collect(&fld, items))
}

/// Matrix of `f ∩ - : HH_n(A, M) → HH_{n-m}(A, M)` on the chosen homology
/// bases, computed from chains truncated at `n_max`.
pub fn cap(
    a: &Arc<Algebra>,
    module: &Bimodule,
    f: &Cochain,
    n: usize,
    n_max: usize,
    budget: usize,
) -> Result<Matrix, ProductError> {
    if f.degree > n {
        return Err(ProductError::DegreeViolation { cochain: f.degree, chain: n });
    }
    let chains = hochschild_chains(a, module, n_max, budget)?;
    chains.check_trusted(n as i64)?;
    let src = chains.homology(n as i64)?;
    let dst = chains.homology((n - f.degree) as i64)?;
    let mut cols = Vec::with_capacity(src.dim());
    for z in src.reps() {
        cols.push(dst.class_of(&cap_chain(a, module, f, n, z)?)?);
    }
    Ok(Matrix::from_columns(a.field(), dst.dim(), cols))
}

/// Class of `f ∩ z` for a single cycle `z`, in the basis of `HH_{n-m}`.
pub fn cap_class(
    a: &Arc<Algebra>,
    module: &Bimodule,
    f: &Cochain,
    n: usize,
    z: &SVec,
    n_max: usize,
    budget: usize,
) -> Result<SVec, ProductError> {
    let chains = hochschild_chains(a, module, n_max, budget)?;
    let dst = chains.homology((n - f.degree.min(n)) as i64)?;
    Ok(dst.class_of(&cap_chain(a, module, f, n, z)?)?)
}

/// Both paths around the square relating the cap product to the map
/// `H(id_M ⊗ f̃)` on `M ⊗_{A^e} Bar(A)`.
#[derive(Clone, Debug)]
pub struct LemmaSquare {
    pub degree: usize,
    pub cap: Matrix,
    pub derived: Matrix,
}

impl LemmaSquare {
    pub fn commutes(&self) -> bool {
        self.cap == self.derived
    }
}

pub fn verify_lemma_square(
    a: &Arc<Algebra>,
    module: &Bimodule,
    f: &Cochain,
    n: usize,
    budget: usize,
) -> Result<LemmaSquare, ProductError> {
    let m = f.degree;
    if m > n {
        return Err(ProductError::DegreeViolation { cochain: m, chain: n });
    }
    let fld = a.field();
    let top = n + 1;
    let bar = bar_resolution(a, top, budget)?;
    let lifted = cocycle_to_chain_map(f, &bar)?;
    let ident = chains_vs_bar_identification(a, module, &bar, top, budget)?;
    let chains = &ident.chains;
    let src = chains.homology(n as i64)?;
    let dst = chains.homology((n - m) as i64)?;
    let cap_m = cap(a, module, f, n, top, budget)?;

    let (ni, nt) = (n as i64, (n - m) as i64);
    let q_src = &ident.tensor.quotients[&ni];
    let q_dst = &ident.tensor.quotients[&nt];
    let back = linalg::inverse(ident.map(nt)).expect("identification is invertible");
    let src_dim = bar.free.term_dim(ni);
    let mut cols = Vec::with_capacity(src.dim());
    for z in src.reps() {
        let raw = q_src.sigma.apply(&ident.map(ni).apply(z));
        // id_M ⊗ f̃ on the raw tensor M ⊗_k Bar_n
        let mut grouped: std::collections::BTreeMap<usize, SVec> = Default::default();
        for (idx, c) in raw {
            grouped.entry(idx / src_dim).or_default().push((idx % src_dim, c));
        }
        let dst_dim = bar.complex.dim(nt);
        let mut image = Vec::new();
        for (mi, w) in grouped {
            let fw = lifted.lift.apply(ni, &w);
            let shifted: SVec = fw.into_iter().map(|(i, c)| (mi * dst_dim + i, c)).collect();
            image = sparse::add(&fld, &image, &shifted);
        }
        let chain = back.apply(&q_dst.pi.apply(&image));
        cols.push(dst.class_of(&chain)?);
    }
    let derived = Matrix::from_columns(fld, dst.dim(), cols);
    Ok(LemmaSquare { degree: n, cap: cap_m, derived })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::dual_numbers;
    use crate::hochschild::{hochschild_cohomology, DEFAULT_BUDGET};
    use crate::linalg::Field;

    fn setup() -> (Arc<Algebra>, Bimodule, Cochain) {
        let a = Arc::new(dual_numbers(Field::Rationals));
        let r = Bimodule::regular(&a);
        // f(x) = x: value index row 1, column 1
        let f = Cochain::new(1, 2, sparse::unit(3));
        (a, r, f)
    }

    #[test]
    fn cap_of_derivation_on_one_tensor_x() {
        let (a, r, f) = setup();
        assert_eq!(cap_chain(&a, &r, &f, 1, &sparse::unit(1)).unwrap(), sparse::unit(1));
        let one = Cochain::unit(&a);
        let z = vec![(5, Field::Rationals.one())];
        assert_eq!(cap_chain(&a, &r, &one, 2, &z).unwrap(), z);
    }

    #[test]
    fn cap_of_cycle_is_cycle() {
        let (a, r, f) = setup();
        let chains = hochschild_chains(&a, &r, 4, DEFAULT_BUDGET).unwrap();
        for n in 1..=3 {
            for z in chains.homology(n).unwrap().reps() {
                let out = cap_chain(&a, &r, &f, n as usize, z).unwrap();
                assert!(chains.is_cycle(n - 1, &out));
            }
        }
    }

    #[test]
    fn lemma_square_dual_numbers() {
        let (a, r, f) = setup();
        for n in 1..=2 {
            let sq = verify_lemma_square(&a, &r, &f, n, DEFAULT_BUDGET).unwrap();
            assert!(sq.commutes(), "n={n}: cap {:?} derived {:?}", sq.cap, sq.derived);
        }
        let one = Cochain::unit(&a);
        let sq = verify_lemma_square(&a, &r, &one, 2, DEFAULT_BUDGET).unwrap();
        assert!(sq.commutes() && sq.cap.is_identity());
    }

    #[test]
    fn cup_square_of_derivation() {
        let (a, _, f) = setup();
        let ff = cup(&a, &f, &f).unwrap();
        let h2 = hochschild_cohomology(&a, &Bimodule::regular(&a), 2, 4, DEFAULT_BUDGET).unwrap();
        assert!(ff.is_closed(&a, &Bimodule::regular(&a)));
        let _ = h2.class_of(&ff.values).unwrap();
    }

    #[test]
    fn lemma_square_all_basis_cocycles() {
        for fld in [Field::Rationals, Field::prime(2).unwrap()] {
            let a = Arc::new(dual_numbers(fld));
            let r = Bimodule::regular(&a);
            for m in 0..=2 {
                let h = hochschild_cohomology(&a, &r, m, 4, DEFAULT_BUDGET).unwrap();
                for rep in h.reps() {
                    let f = Cochain::new(m, 2, rep.clone());
                    for n in m..=3 {
                        let sq = verify_lemma_square(&a, &r, &f, n, DEFAULT_BUDGET).unwrap();
                        assert!(sq.commutes(), "{fld:?} m={m} n={n}");
                    }
                }
            }
        }
    }
}
