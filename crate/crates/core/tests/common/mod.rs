#![allow(dead_code)]

pub mod koszul;

use std::path::PathBuf;
use std::sync::Arc;

use hhcap::algebra::{dual_numbers, matrix_algebra, path_algebra, Algebra, Bimodule, Quiver};
use hhcap::derived::{DatumConfig, TiltingDatum};
use hhcap::hochschild::{hochschild_cochains, Cochain, DEFAULT_BUDGET};
use hhcap::io::Loader;
use hhcap::linalg::Field;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn datum(name: &str) -> TiltingDatum {
    Loader::new(None).datum(&data(name)).unwrap().build(DatumConfig::default()).unwrap()
}

pub fn a2() -> Arc<Algebra> {
    Arc::new(path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1)] }, Field::Rationals).unwrap())
}

/// The algebras every product identity is checked on.
pub fn corpus() -> Vec<(&'static str, Arc<Algebra>)> {
    vec![
        ("dual numbers over Q", Arc::new(dual_numbers(Field::Rationals))),
        ("dual numbers over F_3", Arc::new(dual_numbers(Field::prime(3).unwrap()))),
        ("path algebra 1 -> 2", a2()),
        ("2x2 matrices", Arc::new(matrix_algebra(2, Field::Rationals))),
    ]
}

pub fn basis_cocycles(a: &Arc<Algebra>, m: usize) -> Vec<Cochain> {
    let c = hochschild_cochains(a, &Bimodule::regular(a), m + 1, DEFAULT_BUDGET).unwrap();
    c.homology(-(m as i64)).unwrap().reps().iter().map(|r| Cochain::new(m, a.dim(), r.clone())).collect()
}
