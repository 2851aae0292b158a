//! Chain-level cup and cap products on the dual numbers, and the square
//! comparing the cap product with the map induced by a lifted cocycle on
//! `M ⊗_{A^e} Bar(A)`.

use std::sync::Arc;

use hhcap::algebra::{dual_numbers, Bimodule};
use hhcap::hochschild::{hochschild_chains, hochschild_cohomology, Cochain, DEFAULT_BUDGET};
use hhcap::linalg::{sparse, Field};
use hhcap::products::{cap, cup, verify_lemma_square};

fn main() {
    for field in [Field::Rationals, Field::prime(2).unwrap()] {
        let a = Arc::new(dual_numbers(field));
        let r = Bimodule::regular(&a);
        println!("== k[x]/(x^2) over {field}");

        let h1 = hochschild_cohomology(&a, &r, 1, 3, DEFAULT_BUDGET).unwrap();
        let derivation = Cochain::new(1, a.dim(), h1.reps()[0].clone());
        let square = cup(&a, &derivation, &derivation).unwrap();
        let h2 = hochschild_cohomology(&a, &r, 2, 3, DEFAULT_BUDGET).unwrap();
        let class = sparse::to_dense(&h2.class_of(&square.values).unwrap(), h2.dim());
        println!("class of f ∪ f in HH^2: {:?}", class.iter().map(ToString::to_string).collect::<Vec<_>>());

        let chains = hochschild_chains(&a, &r, 4, DEFAULT_BUDGET).unwrap();
        for n in 1..=3 {
            let m = cap(&a, &r, &derivation, n, 4, DEFAULT_BUDGET).unwrap();
            println!(
                "f ∩ - : HH_{n} (dim {}) → HH_{} (dim {}): {:?}",
                chains.homology(n as i64).unwrap().dim(),
                n - 1,
                chains.homology(n as i64 - 1).unwrap().dim(),
                m.render_rows()
            );
            let sq = verify_lemma_square(&a, &r, &derivation, n, DEFAULT_BUDGET).unwrap();
            println!("   agrees with id ⊗ f̃ on the bar side: {}", sq.commutes());
        }
    }
}
