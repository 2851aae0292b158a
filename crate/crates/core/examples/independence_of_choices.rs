//! Transported classes do not depend on the cocycle representative or on
//! the lifts used along the way: random coboundaries and homotopies leave
//! the class in `HH^m(B, B)` unchanged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hhcap::algebra::{dual_numbers, Bimodule, Module};
use hhcap::derived::{morita_datum, DatumConfig};
use hhcap::hochschild::{hochschild_cohomology, Cochain, DEFAULT_BUDGET};
use hhcap::linalg::Field;
use hhcap::transport::{cohomology_class, cohomology_lifts, perturb_lifts, transport_with};

fn main() {
    let a = std::sync::Arc::new(dual_numbers(Field::Rationals));
    let d = morita_datum(&a, &Module::free(&a, 2), DatumConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 0..=2 {
        let h = hochschild_cohomology(&a, &Bimodule::regular(&a), m, m + 1, DEFAULT_BUDGET).unwrap();
        for (i, rep) in h.reps().iter().enumerate() {
            let lifts = cohomology_lifts(&d, &Cochain::new(m, a.dim(), rep.clone())).unwrap();
            let base = cohomology_class(&d.b, &transport_with(&d, &lifts).unwrap(), DEFAULT_BUDGET).unwrap();
            let mut same = 0;
            for _ in 0..10 {
                let p = perturb_lifts(&d, &lifts, &mut rng).unwrap();
                let class = cohomology_class(&d.b, &transport_with(&d, &p).unwrap(), DEFAULT_BUDGET).unwrap();
                same += usize::from(class == base);
            }
            println!("HH^{m} class {i}: {same}/10 perturbed transports agree");
        }
    }
}
