//! Hochschild homology and cohomology dimensions for a few small algebras,
//! with the trusted range of each truncated computation.

use std::sync::Arc;

use hhcap::algebra::{dual_numbers, matrix_algebra, path_algebra, Algebra, Bimodule, Quiver};
use hhcap::hochschild::{hochschild_chains, hochschild_cochains, DEFAULT_BUDGET};
use hhcap::linalg::Field;

fn report(name: &str, a: Algebra, top: usize) {
    let a = Arc::new(a);
    let r = Bimodule::regular(&a);
    let chains = hochschild_chains(&a, &r, top, DEFAULT_BUDGET).expect("within budget");
    let cochains = hochschild_cochains(&a, &r, top, DEFAULT_BUDGET).expect("within budget");
    let hom: Vec<usize> = (0..top as i64).map(|n| chains.homology(n).unwrap().dim()).collect();
    let coh: Vec<usize> = (0..top as i64).map(|n| cochains.homology(-n).unwrap().dim()).collect();
    let (lo, hi) = chains.trusted();
    println!("{name:<28} HH_* = {hom:?}  HH^* = {coh:?}  (trusted {lo}..={hi})");
}

fn main() {
    report("k[x]/(x^2) over Q", dual_numbers(Field::Rationals), 4);
    report("k[x]/(x^2) over F_2", dual_numbers(Field::prime(2).unwrap()), 4);
    report("k[x]/(x^2) over F_3", dual_numbers(Field::prime(3).unwrap()), 4);
    report("M_2(Q)", matrix_algebra(2, Field::Rationals), 3);
    let a2 = path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1)] }, Field::Rationals).unwrap();
    report("path algebra of 1 -> 2", a2, 4);
    let kronecker = path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1), (0, 1)] }, Field::Rationals).unwrap();
    report("Kronecker quiver", kronecker, 3);
}
