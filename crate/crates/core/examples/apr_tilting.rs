//! The APR tilt of the path algebra of `1 → 2` at the simple projective:
//! `T = P_1 ⊕ S_1`, a two-term bimodule complex `X`, its counit through a
//! free model, and the transported cap squares in degree 0.

use std::sync::Arc;

use hhcap::algebra::{path_algebra, Bimodule, Quiver};
use hhcap::derived::{canonical_presentation, idempotent_module, quotient_module, tilting_datum, Counit, DatumConfig};
use hhcap::hochschild::{hochschild_cohomology, Cochain, DEFAULT_BUDGET};
use hhcap::linalg::{sparse, Field, Solver};
use hhcap::transport::{transport_homology, verify_cap_square};

fn main() {
    let a = Arc::new(path_algebra(&Quiver { vertices: 2, arrows: vec![(0, 1)] }, Field::Rationals).unwrap());
    let (p1, incl) = idempotent_module(&a, 0).unwrap();
    let arrow = Solver::new(&incl).solve(&sparse::unit(2)).unwrap();
    let (s1, _) = quotient_module(&p1, &[arrow]).unwrap();
    let t = p1.direct_sum(&s1);
    let pres = canonical_presentation(&t).unwrap();
    let d = tilting_datum(&a, &t, &pres, Some(2), DatumConfig::default()).expect("T is tilting");

    println!("dim End(T) = {}", d.b.dim());
    println!("X has terms in degrees {}..={}", d.x.lo(), d.x.hi());
    let kind = match d.counit {
        Counit::Strict { .. } => "strict",
        Counit::Resolved { .. } => "through a free model",
    };
    println!("counit: {kind}");
    let report = d.validate();
    for check in &report.checks {
        let status = match check.passed {
            Some(true) => "ok",
            Some(false) => "FAILED",
            None => "asserted",
        };
        println!("  {:<40} {status}", check.name);
    }

    let r = Bimodule::regular(&a);
    for n in 0..=2 {
        let tr = transport_homology(&d, &r, n).unwrap();
        println!("T_{n}: {}x{} invertible {}", tr.matrix.rows(), tr.matrix.cols(), tr.is_invertible());
    }
    let h0 = hochschild_cohomology(&a, &r, 0, 1, DEFAULT_BUDGET).unwrap();
    for rep in h0.reps() {
        let f = Cochain::new(0, a.dim(), rep.clone());
        let sq = verify_cap_square(&d, &r, &f, 0).unwrap();
        println!("cap square in degree 0: {}", sq.commutes());
    }
}
