mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{basis_cocycles, corpus, datum};
use hhcap::algebra::{path_algebra, tensor_algebra, validate_algebra, Algebra, Bimodule, Quiver};
use hhcap::hochschild::{hochschild_chains, hochschild_cochains, hochschild_cohomology, Cochain, DEFAULT_BUDGET};
use hhcap::linalg::{self, sparse, Field, Matrix, SVec};
use hhcap::products::cap_chain;
use hhcap::transport::{cohomology_class, transport_cohomology};

fn quiver() -> impl Strategy<Value = Quiver> {
    (1usize..=3).prop_flat_map(|v| {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len()).prop_map(move |arrows| Quiver { vertices: v, arrows })
    })
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::prime(2).unwrap()), Just(Field::prime(3).unwrap())]
}

fn random_vector(f: Field, dim: usize, seed: &[i64]) -> SVec {
    let dense: Vec<_> = (0..dim).map(|i| f.from_i64(seed[i % seed.len()] * ((i % 3) as i64 - 1))).collect();
    sparse::from_dense(&dense)
}

/// `{m : a·m = m·a for all a}` from the stacked maps `L_a - R_a`.
fn centralizer_dim(a: &Algebra, m: &Bimodule) -> usize {
    let f = a.field();
    let n = m.dim();
    let blocks: Vec<Matrix> = (0..a.dim()).map(|i| m.left(i).sub(m.right(i))).collect();
    let columns = (0..n)
        .map(|j| {
            let items = blocks.iter().enumerate().flat_map(|(i, b)| b.column(j).iter().map(move |(r, c)| (i * n + r, c.clone()))).collect();
            sparse::collect(&f, items)
        })
        .collect();
    n - linalg::rank(&Matrix::from_columns(f, n * a.dim(), columns))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn constructed_algebras_are_valid(q in quiver(), f in field()) {
        let a = Arc::new(path_algebra(&q, f).unwrap());
        prop_assert!(validate_algebra(&a).is_ok());
        let t = tensor_algebra(&a, &a).unwrap();
        prop_assert!(validate_algebra(&t).is_ok());
        let r = Bimodule::regular(&a);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                prop_assert_eq!(r.left(i).mul(r.right(j)), r.right(j).mul(r.left(i)));
            }
        }
    }

    #[test]
    fn hochschild_complexes_square_to_zero(q in quiver(), f in field()) {
        let a = Arc::new(path_algebra(&q, f).unwrap());
        let m = Bimodule::regular(&a);
        let (d, dm) = (a.dim(), m.dim());
        let chains = hochschild_chains(&a, &m, 3, DEFAULT_BUDGET).unwrap();
        let cochains = hochschild_cochains(&a, &m, 3, DEFAULT_BUDGET).unwrap();
        for n in 0..=3i64 {
            prop_assert_eq!(chains.dim(n), dm * d.pow(n as u32));
            prop_assert_eq!(cochains.dim(-n), dm * d.pow(n as u32));
        }
        for n in 1..3i64 {
            prop_assert!(chains.diff(n).mul(&chains.diff(n + 1)).is_zero());
        }
        for k in 0..2i64 {
            prop_assert!(cochains.diff(-k - 1).mul(&cochains.diff(-k)).is_zero());
        }
    }

    #[test]
    fn degree_zero_cohomology_is_the_centralizer(q in quiver(), f in field(), doubled in any::<bool>()) {
        let a = Arc::new(path_algebra(&q, f).unwrap());
        let mut m = Bimodule::regular(&a);
        if doubled {
            m = m.direct_sum(&Bimodule::regular(&a));
        }
        let h0 = hochschild_cohomology(&a, &m, 0, 1, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(h0.dim(), centralizer_dim(&a, &m));
    }

    #[test]
    fn cap_is_well_defined(which in 0usize..4, seed in proptest::collection::vec(-2i64..3, 1..6)) {
        let (_, a) = corpus().swap_remove(which);
        let r = Bimodule::regular(&a);
        let fld = a.field();
        let chains = hochschild_chains(&a, &r, 4, DEFAULT_BUDGET).unwrap();
        for m in 0..=2 {
            for f in basis_cocycles(&a, m) {
                let moved = if m == 0 {
                    f.clone()
                } else {
                    let h = Cochain::new(m - 1, a.dim(), random_vector(fld, a.dim().pow(m as u32), &seed));
                    f.axpy(&fld.one(), &h.coboundary(&a, &r), fld)
                };
                prop_assert!(moved.is_closed(&a, &r));
                for n in m..=2 {
                    let w = random_vector(fld, chains.dim(n as i64 + 1), &seed);
                    let boundary = chains.diff(n as i64 + 1).apply(&w);
                    let target = chains.homology((n - m) as i64).unwrap();
                    for z in chains.homology(n as i64).unwrap().reps() {
                        let z2 = sparse::add(&fld, z, &boundary);
                        let before = target.class_of(&cap_chain(&a, &r, &f, n, z).unwrap()).unwrap();
                        let after = target.class_of(&cap_chain(&a, &r, &moved, n, &z2).unwrap()).unwrap();
                        prop_assert_eq!(before, after);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn transport_is_linear(c0 in -3i64..4, c1 in -3i64..4) {
        let d = datum("morita_dual.json");
        let f = d.a.field();
        let basis = basis_cocycles(&d.a, 0);
        let (c0, c1) = (f.from_i64(c0), f.from_i64(c1));
        let combo = basis[0].axpy(&c0, &basis[0], f).axpy(&c1, &basis[1], f);
        let class = |c: &Cochain| cohomology_class(&d.b, &transport_cohomology(&d, c).unwrap(), DEFAULT_BUDGET).unwrap();
        let expected = sparse::axpy(&f, &sparse::axpy(&f, &class(&basis[0]), &c0, &class(&basis[0])), &c1, &class(&basis[1]));
        prop_assert_eq!(class(&combo), expected);
    }
}
