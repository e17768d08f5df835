//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its case count and runtime (run with `--nocapture` to see them).
//!
//! Paper-derived fixture data is verified when present under `fixtures/`
//! and reported as SKIPPED with a provenance note when the external
//! oracle data is unavailable; skipped fixtures are never faked.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use starkindex::cohomology::{
    check_hexagon, herbrand_quotient, tate_h1, CyclicAction, ShortExactSequence,
};
use starkindex::eisenstein::Eisenstein;
use starkindex::gmodule::{
    enumerate_psi, psi_component_order, psi_fitting_side, RingTag,
};
use starkindex::groupring::GroupSpec;
use starkindex::hring::{find_generator, index_o_over_zh, kappa, HElem, HIdeal, OElem};
use starkindex::intmat::{lattice_index, relative_index, IntMat};
use starkindex::record::{to_record_file, RecordFile, VerifyOptions};
use starkindex::report::{SquarenessKind, Verdict};
use starkindex::stark::{check_p1, check_p2, construct};
use starkindex::synth::{
    random_class_module, random_finite_cyclic_action, rng_from_seed, synth_record,
};
use starkindex::unitlattice::detgroup_factorize;

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn acceptance_01_detgroup_factorization() {
    let start = Instant::now();
    let mut rng = rng_from_seed(101);
    let mut cases = 0usize;
    for m in 1..=3usize {
        let g = GroupSpec::new(2 * m, 2).unwrap();
        for _ in 0..200 {
            let mut a: Vec<BigRational> = Vec::with_capacity(2 * m);
            for _ in 0..m {
                a.push(qr(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=12)));
            }
            for j in 0..m {
                let v = -&a[j];
                a.push(v);
            }
            let (lhs, rhs) = detgroup_factorize(&g, &a).unwrap();
            assert_eq!(lhs, rhs, "m={m}, a={a:?}");
            cases += 1;
        }
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "runtime {dt:?} exceeds 1s");
    println!(
        "ACCEPTANCE 1 (determinant factorization): PASS ({cases} exact cases, {:.3}s)",
        dt.as_secs_f64()
    );
}

#[test]
fn acceptance_02_fitting_order_lemma() {
    let start = Instant::now();
    let mut rng = rng_from_seed(202);
    let rings = [
        RingTag::Z,
        RingTag::Gaussian,
        RingTag::Eisenstein,
        RingTag::MaximalO,
    ];
    let mut cases = 0usize;
    let mut max_order = 0u64;
    let mut big = 0usize;
    while cases < 500 {
        let ring = rings[cases % rings.len()];
        let pres = random_class_module(ring, 2000, false, &mut rng);
        let count = pres.brute_force_count(1_000_000).unwrap();
        let from_fitting = pres.order_from_fitting().unwrap();
        assert_eq!(
            from_fitting,
            BigInt::from(count),
            "ring {} relations {:?}",
            ring.name(),
            pres.relations
        );
        max_order = max_order.max(count);
        if count > 100 {
            big += 1;
        }
        cases += 1;
    }
    assert!(big >= 50, "order distribution too thin: {big} cases above 100");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 30.0, "runtime {dt:?} exceeds 30s");
    println!(
        "ACCEPTANCE 2 (Fitting-ideal order, maximal rings): PASS ({cases} modules, \
         {big} of order > 100, max order {max_order}, {:.3}s)",
        dt.as_secs_f64()
    );
}

#[test]
fn acceptance_03_psi_components() {
    let start = Instant::now();
    let mut rng = rng_from_seed(303);
    let mut modules = 0usize;
    let mut component_checks = 0usize;
    while modules < 100 {
        let m = 1 + modules % 3;
        let two_m = 2 * m;
        let ring = RingTag::minus_ring_for(m).unwrap();
        let pres = random_class_module(ring, 2000, false, &mut rng);
        let order = pres.order().unwrap();
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 3, 2] {
            if p < 2 || two_m as u64 % p == 0 || p > 50 {
                continue;
            }
            let psis = enumerate_psi(p, two_m).unwrap();
            let mut product = BigInt::one();
            for psi in &psis {
                let side = psi_component_order(two_m, &pres, psi).unwrap();
                if psi.is_odd() {
                    let fitting = psi_fitting_side(two_m, &pres, psi).unwrap();
                    assert_eq!(side, fitting, "module-side vs Fitting-side at {}", psi.label());
                }
                product *= side;
                component_checks += 1;
            }
            // Product over all ψ equals the p-part of |M|.
            let mut p_part = BigInt::one();
            let mut o = order.clone();
            let pb = BigInt::from(p);
            while (&o % &pb).is_zero() {
                o /= &pb;
                p_part *= &pb;
            }
            assert_eq!(product, p_part, "p = {p}, |M| = {order}");
        }
        modules += 1;
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "runtime {dt:?} exceeds 60s");
    println!(
        "ACCEPTANCE 3 (ψ-component orders): PASS ({modules} modules, {component_checks} components, {:.3}s)",
        dt.as_secs_f64()
    );
}

/// All σ-stable sublattices of Z³ of index ≤ `max_index`, as triangular
/// bases (independent enumeration in machine integers).
fn sigma_stable_ideals(max_index: i64) -> Vec<[[i64; 3]; 3]> {
    let mut out = Vec::new();
    let contains = |basis: &[[i64; 3]; 3], v: [i64; 3]| -> bool {
        let (a, d, f) = (basis[0][0], basis[1][1], basis[2][2]);
        if v[0] % a != 0 {
            return false;
        }
        let x = v[0] / a;
        let v1 = v[1] - x * basis[0][1];
        if v1 % d != 0 {
            return false;
        }
        let y = v1 / d;
        let v2 = v[2] - x * basis[0][2] - y * basis[1][2];
        v2 % f == 0
    };
    for a in 1..=max_index {
        for d in 1..=max_index / a {
            for f in 1..=max_index / (a * d) {
                for b in 0..d {
                    for c in 0..f {
                        for e in 0..f {
                            // Rows in the 1, σ, σ² coordinates; row-HNF
                            // with pivots a, d, f.
                            let basis = [[a, b, c], [0, d, e], [0, 0, f]];
                            // σ rotates coordinates (x,y,z) ↦ (z,x,y).
                            let stable = basis
                                .iter()
                                .all(|r| contains(&basis, [r[2], r[0], r[1]]));
                            if stable {
                                out.push(basis);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Independent principality oracle: search an element of the ideal whose
/// norm equals the index and whose principal lattice is the ideal.
fn principal_by_search(ideal: &HIdeal, index: &BigInt) -> bool {
    let n = i64::try_from(index).expect("index ≤ 200");
    let mut d0 = 1i64;
    while d0 <= n {
        if n % d0 == 0 {
            for x1 in Eisenstein::with_norm(&BigInt::from(n / d0)) {
                for sign in [1i64, -1] {
                    let cand = OElem::new(sign * d0, x1.clone());
                    let Some(h) = cand.to_h() else { continue };
                    if ideal.contains(&h) && HIdeal::principal_lattice(&h) == ideal.lattice {
                        return true;
                    }
                }
            }
        }
        d0 += 1;
    }
    false
}

#[test]
fn acceptance_04_mainid_dichotomy() {
    let start = Instant::now();
    let ideals = sigma_stable_ideals(200);
    let mut principal_count = 0usize;
    for basis in &ideals {
        let rows: Vec<Vec<i64>> = basis.iter().map(|r| r.to_vec()).collect();
        let ideal = HIdeal::from_lattice(IntMat::from_rows(&rows)).unwrap();
        let index = ideal.index();
        let (g, principal) = find_generator(&ideal).unwrap();
        assert!(ideal.contains(&g), "g ∈ 𝒜 fails for {basis:?}");
        let rel = relative_index(&ideal.lattice, &HIdeal::principal_lattice(&g)).unwrap();
        if principal {
            assert_eq!(rel, BigInt::one(), "{basis:?}");
            principal_count += 1;
        } else {
            assert_eq!(rel, BigInt::from(3), "{basis:?}");
        }
        // |O/𝒜O| = |Z[H]/gZ[H]| in both cases.
        assert_eq!(ideal.index_of_ao(), g.norm(), "{basis:?}");
        // Independent oracle.
        assert_eq!(
            principal,
            principal_by_search(&ideal, &index),
            "dichotomy disagrees with brute-force search on {basis:?} (index {index})"
        );
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 120.0, "runtime {dt:?} exceeds 120s");
    println!(
        "ACCEPTANCE 4 (generator dichotomy): PASS ({} ideals of index ≤ 200, {} principal, {:.3}s)",
        ideals.len(),
        principal_count,
        dt.as_secs_f64()
    );
}

#[test]
fn acceptance_05_kappa_properties() {
    let start = Instant::now();
    let mut cases = 0usize;
    for n in 0..=3u64 {
        for mm in 0..=3u64 {
            let k = kappa(n, mm);
            let ko = k.to_o();
            // Integrality is the type; double-check through the component
            // congruence.
            assert!(ko.in_zh());
            assert_eq!(k.norm(), BigInt::from(2).pow((n + 2 * mm) as u32));
            assert_eq!(ko.x0, BigInt::from(2).pow(n as u32), "e₀-part");
            // Uniqueness up to {1, σ, σ²} by bounded enumeration: all
            // integral elements with this norm and e₀-part.
            let mut found = Vec::new();
            for x1 in Eisenstein::with_norm(&BigInt::from(2).pow(2 * mm as u32)) {
                let cand = OElem::new(BigInt::from(2).pow(n as u32), x1);
                if let Some(h) = cand.to_h() {
                    found.push(h);
                }
            }
            assert_eq!(found.len(), 3, "σ-orbit size at n={n}, mm={mm}");
            let orbit: Vec<HElem> = (0..3)
                .map(|j| {
                    let mut x = k.clone();
                    for _ in 0..j {
                        x = x.mul(&HElem::sigma());
                    }
                    x
                })
                .collect();
            for h in &found {
                assert!(orbit.contains(h), "{h:?} outside the σ-orbit of κ");
            }
            cases += 1;
        }
    }
    let dt = start.elapsed();
    println!(
        "ACCEPTANCE 5 (κ properties and uniqueness): PASS ({cases} pairs, {:.3}s)",
        dt.as_secs_f64()
    );
}

#[test]
fn acceptance_06_index_of_o_over_zh() {
    let start = Instant::now();
    assert_eq!(index_o_over_zh().unwrap(), BigInt::from(3));
    // Same via the generic lattice-index machinery on the scaled copy.
    let o_scaled = starkindex::hring::o_lattice_scaled();
    let idx_3o = lattice_index(&o_scaled, 3).unwrap();
    assert_eq!(BigInt::from(27) / idx_3o, BigInt::from(3));
    let dt = start.elapsed();
    println!(
        "ACCEPTANCE 6 (O contains Z[H] with index 3): PASS ({:.3}s)",
        dt.as_secs_f64()
    );
}

#[test]
fn acceptance_07_tate_cohomology() {
    let start = Instant::now();
    // Ĥ¹ of the regular Z[H]-module vanishes.
    let regular = CyclicAction::new(
        3,
        3,
        vec![],
        IntMat::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]),
    )
    .unwrap();
    assert!(tate_h1(&regular).unwrap().is_empty());

    // Q(A, M) = 1 for 100 random finite modules.
    let mut rng = rng_from_seed(707);
    for _ in 0..100 {
        let c = random_finite_cyclic_action(&mut rng);
        assert!(herbrand_quotient(&c).unwrap().is_one());
    }

    // Herbrand multiplicativity on 100 split exact sequences.
    for _ in 0..100 {
        let ma = random_finite_cyclic_action(&mut rng);
        let pa = random_finite_cyclic_action(&mut rng);
        let n = num_integer::lcm(ma.n, pa.n);
        let (sm, sp) = (ma.dim(), pa.dim());
        let mut torsion = ma.torsion.clone();
        torsion.extend(pa.torsion.clone());
        let mut action = IntMat::zero(sm + sp, sm + sp);
        for i in 0..sm {
            for j in 0..sm {
                action[(i, j)] = ma.action[(i, j)].clone();
            }
        }
        for i in 0..sp {
            for j in 0..sp {
                action[(sm + i, sm + j)] = pa.action[(i, j)].clone();
            }
        }
        let m = CyclicAction::new(n, 0, ma.torsion.clone(), ma.action.clone()).unwrap();
        let p = CyclicAction::new(n, 0, pa.torsion.clone(), pa.action.clone()).unwrap();
        let nn = CyclicAction::new(n, 0, torsion, action).unwrap();
        let mut f = IntMat::zero(sm, sm + sp);
        for i in 0..sm {
            f[(i, i)] = BigInt::one();
        }
        let mut g = IntMat::zero(sm + sp, sp);
        for i in 0..sp {
            g[(sm + i, i)] = BigInt::one();
        }
        let rep = check_hexagon(&ShortExactSequence {
            m: &m,
            n: &nn,
            p: &p,
            f,
            g,
        })
        .unwrap();
        assert!(rep.alternating_product_ok);
        assert!(rep.herbrand_multiplicative);
        assert_eq!(
            herbrand_quotient(&nn).unwrap(),
            herbrand_quotient(&m).unwrap() * herbrand_quotient(&p).unwrap()
        );
    }
    let dt = start.elapsed();
    println!(
        "ACCEPTANCE 7 (Tate cohomology): PASS (regular Ĥ¹ + 100 finite + 100 split, {:.3}s)",
        dt.as_secs_f64()
    );
}

#[test]
fn acceptance_08_end_to_end_synthetic() {
    let start = Instant::now();
    let mut rng = rng_from_seed(808);
    let mut p2_checks = 0usize;
    for m in 1..=3usize {
        for i in 0..50usize {
            let d = 2 + (i % 2);
            let r = synth_record(m, d, &mut rng);
            let out = construct(&r).unwrap();
            let p1 = check_p1(&r, &out.candidate).unwrap();
            assert!(
                p1.pass,
                "m={m} i={i}: P1 index {} ≠ target {}",
                p1.index, p1.target
            );
            for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 3, 2] {
                if p > 50 || (2 * m) as u64 % p == 0 {
                    continue;
                }
                for psi in enumerate_psi(p, 2 * m).unwrap() {
                    let o = check_p2(&r, &out.candidate, &psi).unwrap();
                    assert!(o.pass, "m={m} i={i} p={p} {}", psi.label());
                    p2_checks += 1;
                }
            }
            // Abelian condition: unconditional for m ≤ 2 under the case
            // analysis inputs; for m = 3 whenever e − e' ≥ 2 (the
            // synthesizer keeps e − e' ≥ 2d − 2 ≥ 2).
            assert_eq!(
                out.abelian.verdict,
                Verdict::Pass,
                "m={m} i={i}: {}",
                out.abelian.note
            );
            // Sextic extras: the norm image matches the quadratic
            // construction on F and the norm-index identity is exact.
            if m == 3 {
                let sx = out.sextic.as_ref().expect("sextic report");
                assert_eq!(sx.norm_index_check, Verdict::Pass, "i={i}");
                assert_eq!(sx.f_unit_match, Verdict::Pass, "i={i}");
                assert_eq!(sx.norm_surjectivity, Verdict::Pass, "i={i}");
            }
        }
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 120.0, "runtime {dt:?} exceeds 120s");
    println!(
        "ACCEPTANCE 8 (end-to-end synthetic): PASS (150 records, {p2_checks} ψ-checks, {:.3}s)",
        dt.as_secs_f64()
    );
}

/// The five extensions named in the paper's examples, with the expected
/// squareness verdicts.
const PAPER_FIXTURES: &[(&str, bool, &str)] = &[
    (
        "quad_sqrt5_p11v2.json",
        false,
        "k = Q(√5), K the ray class field mod p11·v2 (quadratic; not a square)",
    ),
    (
        "quad_sqrt5_q11v1.json",
        true,
        "k = Q(√5), K the ray class field mod √5·q11·v1 (quadratic; square)",
    ),
    (
        "quad_cubic_disc_x3-x2-13x+1.json",
        false,
        "k cubic with α³−α²−13α+1 = 0, conductor Z_k·v2·v3 (quadratic; not a square)",
    ),
    (
        "quad_cubic_disc_x3-x2-24x-35.json",
        true,
        "k cubic with β³−β²−24β−35 = 0, conductor Z_k·v2·v3 (quadratic; square)",
    ),
    (
        "sextic_cubic_x3+x2-9x-8.json",
        false,
        "k cubic with α³+α²−9α−8 = 0, K ray class field mod Z_k·v2·v3 (sextic; not a square)",
    ),
];

#[test]
fn acceptance_09_paper_fixtures() {
    let start = Instant::now();
    let fixtures_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("fixtures");
    let mut verified = 0usize;
    let mut skipped = 0usize;
    for (name, expect_square, description) in PAPER_FIXTURES {
        let path = fixtures_dir.join(name);
        if !path.exists() {
            println!(
                "ACCEPTANCE 9: SKIPPED fixture {name} — oracle data unavailable \
                 (no computer-algebra oracle in this environment; see \
                 fixtures/README.md and scripts/make_fixtures.py). Case: {description}"
            );
            skipped += 1;
            continue;
        }
        let bytes = std::fs::read(&path).unwrap();
        let rf = RecordFile::from_bytes(&bytes).unwrap();
        let record = rf.into_extension(name).unwrap();
        assert_ne!(
            record.provenance.oracle, "synthetic",
            "{name}: paper fixtures must come from the external oracle"
        );
        let report =
            starkindex::record::verify_record(name, &record, &VerifyOptions::default());
        let p1 = report.p1.as_ref().expect("P1 must be checked");
        assert_eq!(p1.verdict, Verdict::Pass, "{name}: P1 exact check");
        let prodform = report.prodform.as_ref().expect("product formula");
        assert!(
            (prodform.ratio.abs() - 1.0).abs() <= 1e-8,
            "{name}: product-formula ratio {}",
            prodform.ratio
        );
        let sq = report.squareness.as_ref().expect("squareness verdict");
        let got_square = sq.kind == SquarenessKind::IffTrue;
        assert_eq!(
            got_square, *expect_square,
            "{name}: expected square = {expect_square}, inequality {}",
            sq.inequality
        );
        verified += 1;
    }
    let dt = start.elapsed();
    println!(
        "ACCEPTANCE 9 (paper fixtures): {} verified, {} skipped with provenance note ({:.3}s)",
        verified,
        skipped,
        dt.as_secs_f64()
    );
}

#[test]
fn acceptance_10_bound_validation() {
    let start = Instant::now();
    let mut rng = rng_from_seed(1010);

    // Quartic over d = 3: bound e ≥ 2d−4 = 2. Rejection below, acceptance
    // at the boundary.
    let r = synth_record(2, 3, &mut rng);
    let file = to_record_file(&r);
    let mut v = serde_json::to_value(&file).unwrap();
    assert!(v["field_summary"]["e"].as_u64().unwrap() >= 2);
    v["field_summary"]["e"] = serde_json::json!(1);
    let rf = RecordFile::from_bytes(serde_json::to_vec(&v).unwrap().as_slice()).unwrap();
    let err = rf.into_extension("boundary").unwrap_err();
    assert!(err.to_string().contains("e ≥"), "{err}");

    let mut v2 = serde_json::to_value(&file).unwrap();
    v2["field_summary"]["e"] = serde_json::json!(2);
    // Keep a consistent record: e only enters the bound and targets.
    let rf = RecordFile::from_bytes(serde_json::to_vec(&v2).unwrap().as_slice()).unwrap();
    assert!(rf.into_extension("boundary").is_ok());

    // Sextic parity and the 2d−2 bound.
    let r = synth_record(3, 2, &mut rng);
    let file = to_record_file(&r);
    let e_prime = file.field_summary.e_prime.unwrap();
    let mut v = serde_json::to_value(&file).unwrap();
    v["field_summary"]["e"] = serde_json::json!(e_prime + 3); // odd difference
    let rf = RecordFile::from_bytes(serde_json::to_vec(&v).unwrap().as_slice()).unwrap();
    assert!(rf.into_extension("parity").is_err());

    let mut v = serde_json::to_value(&file).unwrap();
    v["field_summary"]["e"] = serde_json::json!(e_prime); // e − e' = 0 < 2d−2
    let rf = RecordFile::from_bytes(serde_json::to_vec(&v).unwrap().as_slice()).unwrap();
    let err = rf.into_extension("bound2d2").unwrap_err();
    assert!(err.to_string().contains("2d − 2"), "{err}");

    let mut v = serde_json::to_value(&file).unwrap();
    v["field_summary"]["e"] = serde_json::json!(e_prime + 2); // exactly 2d−2 for d=2
    let rf = RecordFile::from_bytes(serde_json::to_vec(&v).unwrap().as_slice()).unwrap();
    assert!(rf.into_extension("bound2d2").is_ok());

    let dt = start.elapsed();
    println!(
        "ACCEPTANCE 10 (bound validation at ingest): PASS ({:.3}s)",
        dt.as_secs_f64()
    );
}
