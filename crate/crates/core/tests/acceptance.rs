//! Acceptance suite: one test per release criterion, each printing a
//! single PASS line (visible with `--nocapture`) and enforcing a wall-clock
//! budget.  Tolerances are pinned here, not imported, so a regression in a
//! library constant cannot silently weaken the gate.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use nefvol::conevol::{mc_volume, positive_cone_volume, v_rho, TruncatedCone};
use nefvol::exact_linalg::IntSymMatrix;
use nefvol::homlattice::{
    disc_product_cm, hom_no_cm, min_isogeny_degree_cm, ns_gram_product_cm, CmLattice, NoCmPair,
};
use nefvol::quadfield::{FieldDesc, OmegaKind};
use nefvol::quaternion::{intersection_matrix_q, s_delta_det, QuatAlg, QuatElem};
use nefvol::report::{parse_run_config, run, VolumeReport};
use nefvol::surfaces::{
    build_model, closed_form_discriminant, closed_form_volume, validate_ample, SurfaceModel,
    SurfaceSpec,
};

const REL_TOL: f64 = 1e-12;

fn finish(n: u32, name: &str, budget_s: f64, started: Instant, detail: &str) {
    let dt = started.elapsed().as_secs_f64();
    assert!(dt <= budget_s, "criterion {n} ({name}) took {dt:.1}s, budget {budget_s}s");
    println!("criterion {n} ({name}): PASS — {detail} [{dt:.2}s]");
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Representative parameters covering every branch of the classification.
fn taxonomy_grid() -> Vec<SurfaceSpec> {
    let mut specs = vec![SurfaceSpec::IntegerMult, SurfaceSpec::ProductNonIsogenous];
    for d in [2i64, 3, 5, 6, 7, 13, 17, 21] {
        for f in [1u32, 2, 3] {
            specs.push(SurfaceSpec::RealMult { d, f });
        }
    }
    for (d, f) in [(5i64, 1u32), (5, 2), (13, 1), (2, 1), (3, 2)] {
        specs.push(SurfaceSpec::ComplexMult { d, f });
    }
    for (alpha, beta) in [(2i64, -3i64), (3, -1), (5, 2), (6, -1), (7, -5), (10, 3)] {
        let alg = QuatAlg::new(alpha, beta).unwrap();
        let gens = [QuatElem::gen_i(alg), QuatElem::gen_j(alg), QuatElem::gen_ij(alg)];
        for a in &gens {
            for b in &gens {
                if a != b {
                    specs.push(SurfaceSpec::QuaternionMult { a: a.clone(), b: b.clone() });
                }
            }
        }
    }
    for k in [1u64, 2, 3, 5, 10, 36] {
        specs.push(SurfaceSpec::ProductIsogenousNoCm { min_degree: k });
    }
    for (d, f1, f2) in
        [(-1i64, 1u32, 1u32), (-1, 2, 3), (-3, 1, 2), (-7, 2, 2), (-15, 3, 4), (-19, 1, 6)]
    {
        specs.push(SurfaceSpec::ProductIsogenousCm { d, f1, f2 });
    }
    // Some quaternion (a, b) pairs fail the rank or signature gates; keep
    // only buildable models, but insist the grid stays broad.
    specs.retain(|s| build_model(s).is_ok());
    assert!(specs.len() >= 40, "taxonomy grid too small: {}", specs.len());
    specs
}

/// A few ample classes per model: the canonical one plus perturbations
/// that stay in the ample cone.
fn ample_candidates(model: &SurfaceModel) -> Vec<Vec<i64>> {
    let g = model.canonical_ample().to_vec();
    let mut cands = vec![g.clone()];
    cands.push(g.iter().map(|x| 2 * x).collect());
    cands.push(g.iter().map(|x| 7 * x).collect());
    let mut bump = g.clone();
    bump[0] += 1;
    cands.push(bump);
    if g.len() >= 2 {
        let mut mixed = g.clone();
        mixed[0] += 2;
        mixed[1] += 1;
        cands.push(mixed);
    }
    cands.retain(|c| validate_ample(model, c).is_ok());
    assert!(!cands.is_empty());
    cands
}

/// Random unimodular matrix as a product of elementary operations, built
/// together with its exact inverse (each row operation on U is mirrored by
/// the inverse column operation on U⁻¹).
fn random_unimodular(rng: &mut StdRng, n: usize, ops: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut u = vec![vec![0i64; n]; n];
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        u[i][i] = 1;
        inv[i][i] = 1;
    }
    for _ in 0..ops {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n);
        match rng.random_range(0..3u8) {
            0 if n > 1 => {
                while j == i {
                    j = rng.random_range(0..n);
                }
                let c = rng.random_range(-2..=2i64);
                let source = u[j].clone();
                for (k, v) in source.iter().enumerate() {
                    u[i][k] += c * v;
                }
                for row in inv.iter_mut() {
                    row[j] -= c * row[i];
                }
            }
            1 => {
                for k in 0..n {
                    u[i][k] = -u[i][k];
                    inv[k][i] = -inv[k][i];
                }
            }
            _ => {
                u.swap(i, j);
                for row in inv.iter_mut() {
                    row.swap(i, j);
                }
            }
        }
    }
    // guard the construction itself
    for (r, urow) in u.iter().enumerate() {
        for c in 0..n {
            let prod: i64 = urow.iter().zip(&inv).map(|(&a, irow)| a * irow[c]).sum();
            assert_eq!(prod, i64::from(r == c), "U * U^-1 != I");
        }
    }
    (u, inv)
}

#[test]
fn criterion_1_v_rho_reference_values_and_sampling() {
    let t = Instant::now();
    let pi = std::f64::consts::PI;
    assert_eq!(v_rho(1).unwrap(), 1.0);
    assert_eq!(v_rho(2).unwrap(), 1.0);
    for (rho, expect) in [(3, pi / 3.0), (4, pi / 3.0), (5, pi * pi / 10.0)] {
        let v = v_rho(rho).unwrap();
        assert!((v - expect).abs() <= 1e-15 * expect, "v_{rho} = {v}, expected {expect}");
    }
    // Rejection sampling of the standard cone x₀² ≥ x₁² + … + x_{ρ-1}²,
    // 0 ≤ x₀ ≤ 1, whose volume is exactly v_ρ: an oracle for the κ-recursion
    // in the two smallest ranks it has to extrapolate to.
    for rho in [5usize, 6] {
        let samples: u64 = 10_000_000;
        let mut rng = StdRng::seed_from_u64(0xC0FFEE + rho as u64);
        let mut hits = 0u64;
        for _ in 0..samples {
            let x0: f64 = rng.random();
            let mut s = x0 * x0;
            for _ in 1..rho {
                let xi: f64 = rng.random_range(-1.0..1.0);
                s -= xi * xi;
                if s < 0.0 {
                    break;
                }
            }
            if s >= 0.0 {
                hits += 1;
            }
        }
        let scale = (1u64 << (rho - 1)) as f64;
        let p = hits as f64 / samples as f64;
        let est = p * scale;
        let se = scale * (p * (1.0 - p) / samples as f64).sqrt();
        let v = v_rho(rho).unwrap();
        assert!(
            (est - v).abs() <= 4.0 * se,
            "v_{rho}: sampled {est} vs exact {v}, 4se = {:.2e}",
            4.0 * se
        );
    }
    finish(
        1,
        "v_rho reference values and standard-cone sampling",
        30.0,
        t,
        "ranks 1-5 pinned, ranks 5-6 vs 1e7 samples within 4 standard errors",
    );
}

#[test]
fn criterion_2_closed_form_volume_matches_lorentz_route() {
    let t = Instant::now();
    let mut cases = 0u32;
    for spec in taxonomy_grid() {
        let model = build_model(&spec).unwrap();
        for coords in ample_candidates(&model) {
            let h = validate_ample(&model, &coords).unwrap();
            let closed = closed_form_volume(&spec, &h).unwrap();
            let generic = positive_cone_volume(model.gram(), &coords).unwrap();
            let rel = rel_diff(closed, generic);
            assert!(
                rel <= REL_TOL,
                "{spec:?}, H = {coords:?}: closed {closed}, generic {generic}, rel {rel:.2e}"
            );
            cases += 1;
        }
    }
    assert!(cases >= 100, "only {cases} cases");
    finish(
        2,
        "closed-form volumes vs generic Lorentz route",
        30.0,
        t,
        &format!("{cases} (surface, ample) pairs agree to 1e-12"),
    );
}

#[test]
fn criterion_3_product_cm_discriminant_grid() {
    let t = Instant::now();
    const DS: [i64; 11] = [-1, -2, -3, -5, -6, -7, -10, -11, -13, -15, -19];
    let mut cases = 0u32;
    for d in DS {
        let field = FieldDesc::new(d).unwrap();
        for f1 in 1..=6u32 {
            for f2 in 1..=6u32 {
                let l1 = CmLattice::new(d, f1).unwrap();
                let l2 = CmLattice::new(d, f2).unwrap();
                let lcm = BigInt::from(f1.lcm(&f2));
                let l2abs = &lcm * &lcm * BigInt::from(d.abs());
                let expected = match field.kind() {
                    OmegaKind::Sqrt => BigInt::from(-4) * &l2abs,
                    OmegaKind::Half => -&l2abs,
                };
                assert_eq!(
                    disc_product_cm(&l1, &l2).unwrap(),
                    expected,
                    "disc route, d={d} f1={f1} f2={f2}"
                );
                let gram = ns_gram_product_cm(&l1, &l2).unwrap();
                assert_eq!(gram.det_exact(), expected, "det route, d={d} f1={f1} f2={f2}");
                assert!(gram.signature().is_hyperbolic(4));
                cases += 1;
            }
        }
    }
    assert_eq!(cases, 396);
    finish(
        3,
        "product-CM discriminants",
        10.0,
        t,
        "396 (d, f1, f2) lattices match -4 lcm^2 Im(omega)^2 on both routes",
    );
}

#[test]
fn criterion_4_taxonomy_discriminants_two_routes() {
    let t = Instant::now();
    let mut cases = 0u32;
    for spec in taxonomy_grid() {
        let model = build_model(&spec).unwrap();
        let closed = closed_form_discriminant(&spec).unwrap();
        assert_eq!(&closed, model.discriminant(), "{spec:?}");
        assert_eq!(closed, model.gram().det_exact(), "{spec:?}");
        // signature (1, ρ−1) forces the sign of the determinant
        let expect_positive = model.rho() % 2 == 1;
        assert_eq!(closed.is_positive(), expect_positive, "{spec:?}: {closed}");
        cases += 1;
    }
    assert!(cases >= 40);
    finish(
        4,
        "taxonomy discriminants",
        30.0,
        t,
        &format!("{cases} models: closed form == exact Gram determinant, correct sign"),
    );
}

#[test]
fn criterion_5_quaternion_determinant_identity() {
    let t = Instant::now();
    let algebras: [(i64, i64); 10] =
        [(2, -3), (3, -1), (2, 3), (3, 7), (5, 2), (6, -1), (-1, -1), (-2, 5), (7, -5), (10, 3)];
    let mut rng = StdRng::seed_from_u64(51);
    let mut cases = 0u32;
    let two = BigRational::from_integer(BigInt::from(2));
    while cases < 1200 {
        for (alpha, beta) in algebras {
            let alg = QuatAlg::new(alpha, beta).unwrap();
            let a = QuatElem::from_integers(alg, std::array::from_fn(|_| rng.random_range(-4..=4)));
            let b = QuatElem::from_integers(alg, std::array::from_fn(|_| rng.random_range(-4..=4)));
            let m = intersection_matrix_q(&a, &b).unwrap();
            let half = s_delta_det(&a, &b).unwrap() / &two;
            assert!(half.is_integer());
            assert_eq!(m.det_exact(), half.to_integer(), "({alpha},{beta}) a={a:?} b={b:?}");
            cases += 1;
        }
    }
    finish(
        5,
        "quaternion determinant identity",
        5.0,
        t,
        &format!("{cases} random pairs over {} algebras: det(M) == det(S_delta)/2", algebras.len()),
    );
}

#[test]
fn criterion_6_mc_agreement_in_every_rank() {
    let t = Instant::now();
    let alg = QuatAlg::new(2, -3).unwrap();
    let cases: [(SurfaceSpec, Vec<i64>); 4] = [
        (SurfaceSpec::IntegerMult, vec![1]),
        (SurfaceSpec::RealMult { d: 5, f: 2 }, vec![2, 1]),
        (
            SurfaceSpec::QuaternionMult { a: QuatElem::gen_i(alg), b: QuatElem::gen_ij(alg) },
            vec![1, 0, 0],
        ),
        (SurfaceSpec::ProductIsogenousCm { d: -1, f1: 2, f2: 3 }, vec![1, 1, 0, 0]),
    ];
    for (spec, h) in cases {
        let model = build_model(&spec).unwrap();
        let exact = positive_cone_volume(model.gram(), &h).unwrap();
        let cone = TruncatedCone::new(model.gram().clone(), h.clone()).unwrap();
        let est = mc_volume(&cone, 1_000_000, 2024).unwrap();
        let tol = 4.0 * est.stderr + 8.0 * f64::EPSILON * exact.abs();
        assert!(
            (est.estimate - exact).abs() <= tol,
            "rank {}: estimate {} vs exact {exact}, tol {tol:.3e}",
            model.rho(),
            est.estimate
        );
        assert!(
            est.stderr <= 0.02 * est.estimate,
            "rank {}: stderr {} too large for estimate {}",
            model.rho(),
            est.stderr,
            est.estimate
        );
    }
    finish(
        6,
        "Monte Carlo vs exact volume",
        60.0,
        t,
        "ranks 1-4 at 1e6 samples: within 4 standard errors, stderr < 2%",
    );
}

#[test]
fn criterion_7_invariance_under_basis_change_and_scaling() {
    let t = Instant::now();
    let models: Vec<SurfaceModel> =
        taxonomy_grid().iter().map(|s| build_model(s).unwrap()).collect();
    let mut rng = StdRng::seed_from_u64(7);
    for case in 0..100 {
        let model = &models[case % models.len()];
        let n = model.rho();
        let (u, u_inv) = random_unimodular(&mut rng, n, 6);
        let u_big: Vec<Vec<BigInt>> =
            u.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
        // x ↦ Ux is an isometry (UᵀSU, U⁻¹g) → (S, g), so the truncated
        // volumes must coincide.
        let changed = model.gram().congruent(&u_big).unwrap();
        let g = model.canonical_ample();
        let h_new: Vec<i64> = (0..n).map(|i| (0..n).map(|j| u_inv[i][j] * g[j]).sum()).collect();
        let v_old = positive_cone_volume(model.gram(), g).unwrap();
        let v_new = positive_cone_volume(&changed, &h_new).unwrap();
        let rel = rel_diff(v_old, v_new);
        assert!(rel <= REL_TOL, "congruence case {case}: {v_old} vs {v_new}, rel {rel:.2e}");
    }
    for case in 0..100 {
        let model = &models[case % models.len()];
        let c = rng.random_range(2..=9i64);
        let g = model.canonical_ample().to_vec();
        let cg: Vec<i64> = g.iter().map(|x| c * x).collect();
        let v1 = positive_cone_volume(model.gram(), &g).unwrap();
        let vc = positive_cone_volume(model.gram(), &cg).unwrap();
        let rel = rel_diff(vc * (c as f64).powi(model.rho() as i32), v1);
        assert!(rel <= REL_TOL, "scaling case {case}, c = {c}: {vc} vs {v1}, rel {rel:.2e}");
    }
    finish(
        7,
        "volume invariance",
        30.0,
        t,
        "100 unimodular congruences and 100 ample scalings at 1e-12",
    );
}

#[test]
fn criterion_8_minimal_isogeny_degrees() {
    let t = Instant::now();
    for k in 1..=50u64 {
        let hom = hom_no_cm(&NoCmPair::new(1, k).unwrap());
        assert_eq!(hom.generator, BigInt::from(k));
        assert_eq!(hom.min_degree, BigInt::from(k));
    }
    let l1 = CmLattice::new(-1, 1).unwrap();
    let l2 = CmLattice::new(-1, 2).unwrap();
    assert_eq!(min_isogeny_degree_cm(&l1, &l2).unwrap(), BigInt::from(2));
    finish(
        8,
        "minimal isogeny degrees",
        10.0,
        t,
        "non-CM pairs (1, k) for k <= 50, and the CM pair d=-1, conductors 1 and 2",
    );
}

#[test]
fn criterion_9_reports_are_byte_identical() {
    let t = Instant::now();
    let configs = [
        r#"{
            "surface": { "kind": "product_isogenous_cm", "d": -1, "f1": 2, "f2": 3 },
            "samples": 200000,
            "seed": 42
        }"#,
        r#"{
            "surface": { "kind": "simple_quaternion_mult", "alpha": 2, "beta": -3,
                         "a": [0, 1, 0, 0], "b": [0, 0, 0, 1] },
            "samples": 200000,
            "seed": 7,
            "precision": 9
        }"#,
        r#"{
            "surface": { "kind": "generic", "gram": [[0, 1], [1, 0]], "canonical_ample": [1, 1] },
            "samples": 100000
        }"#,
    ];
    for cfg_json in configs {
        let cfg = parse_run_config(cfg_json).unwrap();
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert!(a.all_passed(), "{}", a.to_text());
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(VolumeReport::from_json(&a.to_json()).unwrap(), a);
    }
    // Exact integers survive the JSON layer: a Gram entry outside f64's
    // integer range must round-trip digit for digit.
    let big = IntSymMatrix::from_bigint_rows(vec![
        vec![BigInt::from(0), "123456789012345678901".parse().unwrap()],
        vec!["123456789012345678901".parse().unwrap(), BigInt::from(0)],
    ])
    .unwrap();
    let det = big.det_exact();
    assert_eq!(det.to_string(), "-15241578753238836750437433565526596567801");
    finish(
        9,
        "deterministic reports",
        30.0,
        t,
        "3 configs emit byte-identical JSON across runs and round-trip exactly",
    );
}
