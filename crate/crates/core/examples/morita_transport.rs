//! Transport along the Morita equivalence between the dual numbers `A` and
//! `B = End_A(A ⊕ A)`: validation of the datum, the isomorphisms on
//! Hochschild homology, transported cohomology classes, and the cap squares.

use std::sync::Arc;

use hhcap::algebra::{dual_numbers, Bimodule, Module};
use hhcap::derived::{morita_datum, DatumConfig};
use hhcap::hochschild::{hochschild_cohomology, Cochain, DEFAULT_BUDGET};
use hhcap::linalg::Field;
use hhcap::transport::{
    apply_f, check_concentrated, cohomology_class, regular_generator, transport_cohomology, transport_homology,
    verify_cap_square, verify_graded_algebra_transport,
};

fn main() {
    let a = Arc::new(dual_numbers(Field::Rationals));
    let d = morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).expect("A ⊕ A is a progenerator");
    println!("dim A = {}, dim B = {}", d.a.dim(), d.b.dim());
    for check in d.validate().checks {
        println!("  {:<40} {:?}", check.name, check.passed);
    }

    let r = Bimodule::regular(&a);
    let image = apply_f(&d, &r).unwrap();
    let n = check_concentrated(image.complex()).unwrap();
    println!("F(A) is concentrated in degree 0, H_0 ≅ B: {}", regular_generator(&d.b, &n.module).is_some());

    for deg in 0..=2 {
        let t = transport_homology(&d, &r, deg).unwrap();
        println!("T_{deg} = {:?} (invertible: {})", t.matrix.render_rows(), t.is_invertible());
    }

    let derivation = {
        let h = hochschild_cohomology(&a, &r, 1, 2, DEFAULT_BUDGET).unwrap();
        Cochain::new(1, a.dim(), h.reps()[0].clone())
    };
    let image = transport_cohomology(&d, &derivation).unwrap();
    let class = cohomology_class(&d.b, &image, DEFAULT_BUDGET).unwrap();
    let shown: Vec<String> = class.iter().map(|(i, c)| format!("{c}·e{i}")).collect();
    println!("F(derivation) = {} in HH^1(B, B)", shown.join(" + "));

    for deg in 1..=2 {
        let sq = verify_cap_square(&d, &r, &derivation, deg).unwrap();
        println!("cap square at n = {deg}: {}", if sq.commutes() { "commutes" } else { "FAILS" });
    }
    let g = verify_graded_algebra_transport(&d, &derivation, &derivation).unwrap();
    println!("F(f ∪ f) = F(f) ∪ F(f): {}", g.holds());
}
