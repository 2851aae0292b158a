mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{basis_cocycles, corpus, datum, koszul};
use hhcap::algebra::{dual_numbers, matrix_algebra, Algebra, Bimodule};
use hhcap::derived::TiltingDatum;
use hhcap::hochschild::{hochschild_chains, hochschild_cochains, Cochain, DEFAULT_BUDGET};
use hhcap::linalg::{sparse, Field};
use hhcap::products::{cap_chain, cup, verify_lemma_square};
use hhcap::transport::{
    apply_f, check_concentrated, cohomology_class, cohomology_lifts, perturb_lifts, regular_generator,
    transport_homology, transport_with, verify_cap_square, verify_graded_algebra_transport,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hochschild_dims(a: &Arc<Algebra>, top: usize) -> (Vec<usize>, Vec<usize>) {
    let r = Bimodule::regular(a);
    let chains = hochschild_chains(a, &r, top, DEFAULT_BUDGET).unwrap();
    let cochains = hochschild_cochains(a, &r, top, DEFAULT_BUDGET).unwrap();
    let hom = (0..top as i64).map(|n| chains.homology(n).unwrap().dim()).collect();
    let coh = (0..top as i64).map(|n| cochains.homology(-n).unwrap().dim()).collect();
    (hom, coh)
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for (field, characteristic, expected) in [(Field::Rationals, 0, [2, 1, 1, 1]), (Field::prime(2).unwrap(), 2, [2, 2, 2, 2])] {
        let a = Arc::new(dual_numbers(field));
        ensure(koszul::resolution_is_exact(characteristic, 5), || "periodic resolution is not exact".into())?;
        let oracle_hom = koszul::homology_dims(characteristic, 4);
        let oracle_coh = koszul::cohomology_dims(characteristic, 4);
        ensure(oracle_hom == expected && oracle_coh == expected, || format!("oracle gives {oracle_hom:?}/{oracle_coh:?}"))?;
        let (hom, coh) = hochschild_dims(&a, 4);
        ensure(hom == oracle_hom, || format!("{field}: HH_* = {hom:?}, oracle {oracle_hom:?}"))?;
        ensure(coh == oracle_coh, || format!("{field}: HH^* = {coh:?}, oracle {oracle_coh:?}"))?;
        notes.push(format!("{field}: {hom:?}/{coh:?}"));
    }
    Ok(notes.join("; "))
}

fn criterion_2() -> Outcome {
    let f = Field::Rationals;
    let a = Arc::new(matrix_algebra(2, f));
    // e = Σ_i E_i1 ⊗ E_1i: a·e = e·a and μ(e) = 1 certify separability
    let d = a.dim();
    let idx = |i: usize, j: usize| 2 * i + j;
    let e: Vec<(usize, usize)> = (0..2).map(|i| (idx(i, 0), idx(0, i))).collect();
    for x in 0..d {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for &(p, q) in &e {
            for (k, c) in a.basis_product(x, p) {
                left.push((k * d + q, c.clone()));
            }
            for (k, c) in a.basis_product(q, x) {
                right.push((p * d + k, c.clone()));
            }
        }
        ensure(sparse::collect(&f, left) == sparse::collect(&f, right), || format!("separability fails for basis element {x}"))?;
    }
    let mut mu = Vec::new();
    for &(p, q) in &e {
        mu.extend(a.basis_product(p, q).iter().cloned());
    }
    ensure(sparse::collect(&f, mu) == *a.unit(), || "μ(e) ≠ 1".into())?;
    let (hom, coh) = hochschild_dims(&a, 3);
    ensure(hom == [1, 0, 0] && coh == [1, 0, 0], || format!("HH_* = {hom:?}, HH^* = {coh:?}"))?;
    Ok(format!("HH_* = {hom:?}, HH^* = {coh:?}"))
}

fn criterion_3() -> Outcome {
    let mut count = 0;
    for (name, a) in corpus() {
        let r = Bimodule::regular(&a);
        for m in 0..=2 {
            for (i, f) in basis_cocycles(&a, m).iter().enumerate() {
                for n in m..=3 {
                    let sq = verify_lemma_square(&a, &r, f, n, DEFAULT_BUDGET).map_err(|e| format!("{name}: {e}"))?;
                    ensure(sq.commutes(), || format!("{name}: class {i} of degree {m}, n = {n}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} squares"))
}

fn criterion_4() -> Outcome {
    let mut count = 0;
    for (name, a) in corpus() {
        let r = Bimodule::regular(&a);
        let chains = hochschild_chains(&a, &r, 4, DEFAULT_BUDGET).unwrap();
        let classes: Vec<Cochain> = (0..=2).flat_map(|m| basis_cocycles(&a, m)).collect();
        let one = Cochain::unit(&a);
        for n in 0..=3usize {
            let h = chains.homology(n as i64).unwrap();
            for z in h.reps() {
                let capped = cap_chain(&a, &r, &one, n, z).unwrap();
                ensure(h.class_of(&capped).unwrap() == h.class_of(z).unwrap(), || format!("{name}: 1 ∩ z ≠ z in degree {n}"))?;
                count += 1;
                for f in &classes {
                    for g in &classes {
                        if f.degree + g.degree > n {
                            continue;
                        }
                        let fg = cup(&a, f, g).unwrap();
                        let lhs = cap_chain(&a, &r, &fg, n, z).unwrap();
                        let inner = cap_chain(&a, &r, g, n, z).unwrap();
                        let rhs = cap_chain(&a, &r, f, n - g.degree, &inner).unwrap();
                        let target = chains.homology((n - fg.degree) as i64).unwrap();
                        ensure(target.class_of(&lhs).unwrap() == target.class_of(&rhs).unwrap(), || {
                            format!("{name}: (f ∪ g) ∩ z ≠ f ∩ (g ∩ z) for degrees {}, {}, n = {n}", f.degree, g.degree)
                        })?;
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} identities"))
}

fn image_is_b(d: &TiltingDatum) -> Result<(), String> {
    let image = apply_f(d, &Bimodule::regular(&d.a)).map_err(|e| e.to_string())?;
    let conc = check_concentrated(image.complex()).map_err(|e| e.to_string())?;
    ensure(regular_generator(&d.b, &conc.module).is_some(), || "H_0(FA) is not isomorphic to B".into())
}

fn transport_isos(d: &TiltingDatum, top: usize) -> Result<(), String> {
    let r = Bimodule::regular(&d.a);
    let rb = Bimodule::regular(&d.b);
    let chains_b = hochschild_chains(&d.b, &rb, top + 1, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let chains_a = hochschild_chains(&d.a, &r, top + 1, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    for n in 0..=top {
        let t = transport_homology(d, &r, n).map_err(|e| e.to_string())?;
        let (da, db) = (chains_a.homology(n as i64).unwrap().dim(), chains_b.homology(n as i64).unwrap().dim());
        ensure(da == db && t.matrix.cols() == da && t.matrix.rows() == db, || format!("dims {da} vs {db} in degree {n}"))?;
        ensure(t.is_invertible(), || format!("transport not invertible in degree {n}"))?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let d = datum("morita_dual.json");
    ensure(d.b.dim() == 8, || format!("B has dimension {}", d.b.dim()))?;
    image_is_b(&d)?;
    transport_isos(&d, 2)?;
    let r = Bimodule::regular(&d.a);
    let gens = basis_cocycles(&d.a, 1);
    ensure(gens.len() == 1 && basis_cocycles(&d.b, 1).len() == 1, || "HH^1 is not one-dimensional on both sides".into())?;
    let f = &gens[0];
    for n in 1..=2 {
        let sq = verify_cap_square(&d, &r, f, n).map_err(|e| e.to_string())?;
        ensure(sq.commutes(), || format!("cap square fails at n = {n}"))?;
    }
    let g = verify_graded_algebra_transport(&d, f, f).map_err(|e| e.to_string())?;
    ensure(g.holds(), || "F(f ∪ f) ≠ Ff ∪ Ff".into())?;
    Ok("FA ≅ B, T_0..T_2 invertible, squares n = 1, 2, cup".into())
}

fn criterion_6() -> Outcome {
    let d = datum("apr_tilting.json");
    let rep = d.validate();
    ensure(rep.all_green(), || format!("failed checks: {:?}", rep.failures()))?;
    for name in ["triangle 1", "triangle 2"] {
        ensure(rep.get(name).and_then(|c| c.passed) == Some(true), || format!("{name} not verified"))?;
    }
    image_is_b(&d)?;
    transport_isos(&d, 2)?;
    let r = Bimodule::regular(&d.a);
    let mut count = 0;
    for m in 0..=2 {
        for f in basis_cocycles(&d.a, m) {
            for n in m..=2 {
                let sq = verify_cap_square(&d, &r, &f, n).map_err(|e| e.to_string())?;
                ensure(sq.commutes(), || format!("cap square fails for degree {m}, n = {n}"))?;
                count += 1;
            }
        }
    }
    ensure(count > 0, || "no squares checked".into())?;
    Ok(format!("all checks green, {count} squares"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut count = 0;
    for (file, degrees) in [("morita_dual.json", 0..=2), ("apr_tilting.json", 0..=0)] {
        let d = datum(file);
        for m in degrees {
            for f in basis_cocycles(&d.a, m) {
                let lifts = cohomology_lifts(&d, &f).map_err(|e| e.to_string())?;
                let base = cohomology_class(&d.b, &transport_with(&d, &lifts).unwrap(), DEFAULT_BUDGET).unwrap();
                for trial in 0..20 {
                    let p = perturb_lifts(&d, &lifts, &mut rng).map_err(|e| e.to_string())?;
                    let class = cohomology_class(&d.b, &transport_with(&d, &p).map_err(|e| e.to_string())?, DEFAULT_BUDGET).unwrap();
                    ensure(class == base, || format!("{file}: degree {m}, trial {trial} changed the class"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} perturbed transports"))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let apr = datum("apr_tilting.json");
    let f = apr.a.field();
    // e1 + e2 + a is a unit that does not commute with e1
    let unit = vec![(0, f.one()), (1, f.one()), (2, f.one())];
    let scaled = apr.with_eta_multiplied(&unit).map_err(|e| e.to_string())?;
    let failures = scaled.validate().failures().iter().map(|c| c.name.clone()).collect::<Vec<_>>();
    ensure(!failures.is_empty(), || "η scaled by a non-central unit still validates".into())?;
    notes.push(format!("non-central unit: {}", failures.join(", ")));
    let flipped = apr.with_flipped_x_differential(0).map_err(|e| e.to_string())?;
    let failures = flipped.validate().failures().iter().map(|c| c.name.clone()).collect::<Vec<_>>();
    ensure(!failures.is_empty(), || "flipped differential still validates".into())?;
    notes.push(format!("flipped sign: {}", failures.join(", ")));
    Ok(notes.join("; "))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("Hochschild dims oracle", criterion_1, 10),
        ("separability", criterion_2, 30),
        ("lemma suite", criterion_3, 120),
        ("cap module axioms", criterion_4, 120),
        ("Morita theorem check", criterion_5, 300),
        ("tilting theorem check", criterion_6, 120),
        ("independence of choices", criterion_7, 300),
        ("negative control", criterion_8, 60),
    ];
    let mut failed = Vec::new();
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let line = match (&result, in_time) {
            (Ok(detail), true) => format!("PASS  criterion {} ({name}): {detail} [{:.2}s, limit {limit}s]", i + 1, elapsed.as_secs_f64()),
            (Ok(detail), false) => format!("FAIL  criterion {} ({name}): too slow, {detail} [{:.2}s, limit {limit}s]", i + 1, elapsed.as_secs_f64()),
            (Err(e), _) => format!("FAIL  criterion {} ({name}): {e} [{:.2}s, limit {limit}s]", i + 1, elapsed.as_secs_f64()),
        };
        println!("{line}");
        if !(result.is_ok() && in_time) {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
