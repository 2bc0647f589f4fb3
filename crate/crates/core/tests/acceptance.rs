//! Acceptance suite: one test per criterion, every comparison exact rational
//! equality. Run with `cargo test -p okounkov --test acceptance -- --nocapture`
//! to see one line per criterion.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use okounkov::criteria::{
    largest_simplex_constant, origin_criterion, nested_check, sigma_variation_check,
    simplex_criterion, slice_check, theorem_c_report,
};
use okounkov::okounkov::okounkov_polygon;
use okounkov::polygon::Polygon;
use okounkov::suite::{sample_ample, sample_big, sample_pseudoeffective};
use okounkov::toric::{builtin_toric_for, hirzebruch_toric, p2_toric};
use okounkov::{cones, criteria, models, zariski};
use okounkov::{DivisorClass, Rat, SurfaceModel};

fn d(coeffs: &[i64]) -> DivisorClass {
    DivisorClass::from_ints(coeffs)
}

fn pt(x: i64, y: i64) -> (Rat, Rat) {
    (Rat::from_int(x), Rat::from_int(y))
}

fn pass(line: &str) {
    println!("[PASS] {line}");
}

/// Criterion 1: the cusp-tangent flag on the blown-up plane reproduces the
/// known polygon, sum minimum and asymptotic multiplicity exactly.
#[test]
fn acceptance_01_cusp_tangent_reproduction() {
    let f1 = models::f1();
    let cusp = f1.flag("cusp-tangent").unwrap();
    let divisor = d(&[1, 1]);

    let poly = okounkov_polygon(&f1, &divisor, cusp).unwrap();
    let expected = Polygon::hull_of([pt(0, 2), (Rat::new(1, 3), Rat::new(10, 3)), pt(0, 5)]);
    assert_eq!(poly, expected, "polygon vertices differ");

    let min_sum = poly.min_sum().unwrap();
    assert_eq!(min_sum, Rat::from_int(2));

    let mult = zariski::asymptotic_multiplicity(&f1, &divisor, cusp).unwrap();
    assert_eq!(mult, Rat::one());
    assert!(mult < min_sum, "strict inequality must hold");

    pass("criterion 1: polygon {(0,2),(1/3,10/3),(0,5)}, min-sum 2, multiplicity 1, 1 < 2");
}

/// Criterion 2: twice the polygon area equals the volume, exactly, for 200
/// random big integral classes across five models, against every flag.
#[test]
fn acceptance_02_area_volume_identity() {
    let targets: Vec<SurfaceModel> = vec![
        models::f1(),
        models::hirzebruch(1),
        models::hirzebruch(2),
        models::hirzebruch(3),
        models::dp7(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2EA);
    let mut classes_checked = 0usize;
    for model in &targets {
        for class in sample_big(model, 40, &mut rng) {
            let volume = zariski::volume(model, &class).unwrap();
            for flag in &model.flags {
                let poly = okounkov_polygon(model, &class, flag).unwrap();
                assert_eq!(
                    &poly.area() * &Rat::from_int(2),
                    volume,
                    "area-volume identity fails for {class} on flag {}",
                    flag.id
                );
            }
            classes_checked += 1;
        }
    }
    assert!(classes_checked >= 200);
    pass(&format!(
        "criterion 2: 2*area == volume for {classes_checked} big classes x all flags, exact"
    ));
}

/// Criterion 3: origin membership agrees with restricted-base-locus
/// membership on more than 500 (big class, flag) pairs.
#[test]
fn acceptance_03_origin_equivalence_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3A3);
    let mut pairs = 0usize;
    for model in models::bundled() {
        for class in sample_big(&model, 25, &mut rng) {
            for flag in &model.flags {
                let report = origin_criterion(&model, &class, flag).unwrap();
                assert!(
                    report.agree,
                    "origin criterion disagreement: {class} on {}: {report:?}",
                    flag.id
                );
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 500, "only {pairs} pairs generated");
    pass(&format!(
        "criterion 3: origin criterion agrees on all {pairs} pairs"
    ));
}

/// Criterion 4: the simplex criterion agrees everywhere; ample classes give
/// a positive constant on every flag; the constant vanishes exactly on the
/// augmented base locus.
#[test]
fn acceptance_04_simplex_equivalence_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4A4);
    let mut pairs = 0usize;
    for model in models::bundled() {
        for class in sample_big(&model, 25, &mut rng) {
            for flag in &model.flags {
                let report = simplex_criterion(&model, &class, flag).unwrap();
                assert!(
                    report.agree,
                    "simplex criterion disagreement: {class} on {}",
                    flag.id
                );
                let lambda = largest_simplex_constant(&model, &class, flag).unwrap().lambda;
                let on_bplus = zariski::point_in_bplus(&model, &class, flag).unwrap();
                assert_eq!(lambda.is_zero(), on_bplus, "lambda/bplus mismatch");
                pairs += 1;
            }
        }
        for class in sample_ample(&model, 10, &mut rng) {
            for flag in &model.flags {
                let lambda = largest_simplex_constant(&model, &class, flag).unwrap().lambda;
                assert!(
                    lambda.is_positive(),
                    "ample {class} must give lambda > 0 on {}",
                    flag.id
                );
            }
        }
    }
    assert!(pairs >= 500);
    pass(&format!(
        "criterion 4: simplex criterion agrees on {pairs} pairs; lambda > 0 on ample, 0 on B+"
    ));
}

/// Criterion 5: the three negative-part checks pass exactly on 200+ pairs,
/// including the hand-checkable translated polygon along the exceptional
/// curve.
#[test]
fn acceptance_05_negative_part_translation_suite() {
    let f1 = models::f1();
    let on_e = f1.flag("on-E").unwrap();
    let lhs = okounkov_polygon(&f1, &d(&[1, 1]), on_e).unwrap();
    assert_eq!(lhs, Polygon::hull_of([pt(1, 0), pt(2, 0), pt(2, 1)]));
    let rhs = okounkov_polygon(&f1, &d(&[1, 0]), on_e)
        .unwrap()
        .translate(&pt(1, 0));
    assert_eq!(lhs, rhs, "two independent chamber walks must agree");

    let mut rng = ChaCha8Rng::seed_from_u64(0xA5A5);
    let mut pairs = 0usize;
    for model in models::bundled() {
        for class in sample_big(&model, 10, &mut rng) {
            for flag in &model.flags {
                let report = theorem_c_report(&model, &class, flag).unwrap();
                assert!(
                    report.agree && report.left,
                    "negative-part check failed: {class} on {}: {report:?}",
                    flag.id
                );
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 200, "only {pairs} pairs");
    pass(&format!(
        "criterion 5: quadrant offset, very-general membership and translation identity on {pairs} pairs"
    ));
}

/// Criterion 6: the slice identity holds with exact polygon equality at ten
/// random rational parameters per pair, 100+ pairs.
#[test]
fn acceptance_06_slice_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6A6);
    let mut pairs = 0usize;
    for model in models::bundled() {
        for class in sample_big(&model, 6, &mut rng) {
            for flag in &model.flags {
                let mu = cones::mu_threshold(&model, &class, &flag.curve).unwrap();
                for k in 0..10u32 {
                    // spread over [0, mu) with varying denominators
                    let t = &mu * &Rat::new(2 * k as i64 + 1, 2 * (k as i64 + 3) + 17);
                    let report = slice_check(&model, &class, flag, &t).unwrap();
                    assert!(
                        report.left,
                        "slice identity fails at t={t} for {class} on {}",
                        flag.id
                    );
                }
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 100, "only {pairs} pairs");
    pass(&format!(
        "criterion 6: slice identity exact at 10 parameters each over {pairs} pairs"
    ));
}

/// Criterion 7: polygons nest monotonically under ample perturbations
/// eps in {1/4, 1/2, 1}.
#[test]
fn acceptance_07_nesting() {
    let eps = [Rat::new(1, 4), Rat::new(1, 2), Rat::one()];
    let mut rng = ChaCha8Rng::seed_from_u64(0xA7A7);
    let mut pairs = 0usize;
    for model in models::bundled() {
        let ample = sample_ample(&model, 1, &mut rng).remove(0);
        for class in sample_big(&model, 5, &mut rng) {
            for flag in &model.flags {
                let report = nested_check(&model, &class, &ample, flag, &eps).unwrap();
                assert!(
                    report.left,
                    "nesting fails for {class} + eps*{ample} on {}",
                    flag.id
                );
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 100, "only {pairs} pairs");
    pass(&format!(
        "criterion 7: monotone polygon chains for eps in {{1/4,1/2,1}} on {pairs} pairs"
    ));
}

/// Criterion 8: the iterative decomposition equals the exhaustive
/// support-subset search on 200 random pseudo-effective classes per model.
#[test]
fn acceptance_08_zariski_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA8A8);
    for model in models::bundled() {
        assert!(model.negative_curves().count() <= 6);
        for class in sample_pseudoeffective(&model, 200, &mut rng) {
            let fast = zariski::zariski_decompose(&model, &class).unwrap();
            let slow = zariski::exhaustive_zariski(&model, &class).unwrap();
            assert_eq!(fast, slow, "oracle disagreement on {class}");
        }
    }
    pass("criterion 8: iterative == exhaustive decomposition on 200 classes x 6 models");
}

/// Criterion 9: toric section hulls sit inside the polygon exactly; nef
/// integral classes are recovered with zero gap at level one; level six
/// never has a larger gap than level one on big non-nef classes.
#[test]
fn acceptance_09_toric_oracle() {
    // zero gap at level one for nef integral classes on invariant flags
    let p2 = models::p2();
    let p2_fan = p2_toric();
    for deg in 1..=6i64 {
        let class = d(&[deg]);
        let flag = p2.flag("linear").unwrap();
        let cmp = p2_fan.oracle_compare(&p2, &class, flag, 1).unwrap();
        assert!(cmp.contained && cmp.area_gap.is_zero());
    }
    for e in 1..=3u32 {
        let fe = models::hirzebruch(e);
        let fan = hirzebruch_toric(e);
        let mut rng = ChaCha8Rng::seed_from_u64(0xA900 + e as u64);
        let mut checked = 0;
        while checked < 12 {
            let class = sample_big(&fe, 1, &mut rng).remove(0);
            if !cones::is_nef(&fe, &class).unwrap().holds {
                continue;
            }
            checked += 1;
            for flag in &fe.flags {
                if !fan.flag_rays.contains_key(&flag.id) {
                    continue;
                }
                let cmp = fan.oracle_compare(&fe, &class, flag, 1).unwrap();
                assert!(cmp.contained, "hull escapes polygon for nef {class}");
                assert!(cmp.area_gap.is_zero(), "gap for nef {class} on {}", flag.id);
            }
        }
    }

    // refinement on big non-nef classes
    let mut rng = ChaCha8Rng::seed_from_u64(0xA9A9);
    let mut non_nef = 0usize;
    let pool: Vec<SurfaceModel> = vec![
        models::f1(),
        models::hirzebruch(1),
        models::hirzebruch(2),
        models::hirzebruch(3),
    ];
    'outer: loop {
        for model in &pool {
            let fan = builtin_toric_for(model).unwrap();
            let class = sample_big(model, 1, &mut rng).remove(0);
            if cones::is_nef(model, &class).unwrap().holds {
                continue;
            }
            for flag in &model.flags {
                if !fan.flag_rays.contains_key(&flag.id) {
                    continue;
                }
                let at_one = fan.oracle_compare(model, &class, flag, 1).unwrap();
                let at_six = fan.oracle_compare(model, &class, flag, 6).unwrap();
                assert!(at_one.contained && at_six.contained);
                assert!(
                    at_six.area_gap <= at_one.area_gap,
                    "refinement fails for {class} on {}",
                    flag.id
                );
            }
            non_nef += 1;
            if non_nef >= 50 {
                break 'outer;
            }
        }
    }
    pass("criterion 9: hulls contained; gap 0 at level 1 for nef; gap(6) <= gap(1) on 50 non-nef classes");
}

/// Criterion 10: both branches of the negative-part variation law hold on a
/// ten-point grid for 100+ (class, negative curve) pairs.
#[test]
fn acceptance_10_sigma_variation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAAAA);
    let mut pairs = 0usize;
    for model in models::bundled() {
        let negatives: Vec<String> = model.negative_curves().map(|c| c.id.clone()).collect();
        if negatives.is_empty() {
            continue;
        }
        for class in sample_big(&model, 18, &mut rng) {
            for id in &negatives {
                let sigma = zariski::sigma_coefficient(&model, &class, id).unwrap();
                let upper = if sigma.is_positive() {
                    sigma
                } else {
                    cones::mu_threshold(&model, &class, id).unwrap()
                };
                let grid: Vec<Rat> = (0..=9).map(|k| &upper * &Rat::new(k, 9)).collect();
                let report = sigma_variation_check(&model, &class, id, &grid).unwrap();
                assert!(report.left, "variation law fails for {class} along {id}");
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 100, "only {pairs} pairs");
    pass(&format!(
        "criterion 10: variation of the negative part verified on {pairs} (class, curve) pairs"
    ));
}

/// Criterion 11: for ample classes the multiplicity sequence of pD - A is
/// identically zero and the simplex intersections stabilize by p <= 8; the
/// witness class keeps multiplicity exactly one at every big level.
#[test]
fn acceptance_11_augmented_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xABAB);
    for model in models::bundled() {
        // the sequence pD - D for ample D: identically zero multiplicities,
        // intersections stabilizing immediately
        for class in sample_ample(&model, 3, &mut rng) {
            for flag in &model.flags {
                let report = criteria::augmented_sequence_check(
                    &model,
                    &class,
                    &class,
                    flag,
                    &Rat::new(1, 2),
                    8,
                )
                .unwrap();
                assert!(report.left && report.agree, "{class} on {}: {report:?}", flag.id);
                let stabilized = report.certificates["stabilized_at"].as_u64();
                assert!(
                    stabilized.is_some_and(|p| p <= 8),
                    "no stabilization by p <= 8 for ample {class}"
                );
                for level in report.certificates["levels"].as_array().unwrap() {
                    if level["big"].as_bool().unwrap() {
                        assert_eq!(
                            level["multiplicity"], serde_json::json!(0),
                            "nonzero multiplicity at an ample level"
                        );
                    }
                }
            }
        }
        // an independent ample shift must still show the predicted eventual
        // behaviour on both sides of the augmented base locus
        let ample_shift = sample_ample(&model, 1, &mut rng).remove(0);
        for class in sample_big(&model, 3, &mut rng) {
            for flag in &model.flags {
                match criteria::augmented_sequence_check(
                    &model,
                    &class,
                    &ample_shift,
                    flag,
                    &Rat::new(1, 2),
                    8,
                ) {
                    Ok(report) => assert!(
                        report.left && report.agree,
                        "{class} on {}: {report:?}",
                        flag.id
                    ),
                    Err(okounkov::Error::NoBigLevel(_)) => continue,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    // witness: x on the exceptional curve stays inside every B_+(pH - A)
    let f1 = models::f1();
    let on_e = f1.flag("on-E").unwrap();
    let ample = d(&[2, -1]);
    let mut saw_big_level = false;
    for p in 1..=8i64 {
        let level = &d(&[p, 0]) - &ample;
        if !cones::is_big(&f1, &level).unwrap() {
            continue;
        }
        saw_big_level = true;
        let mult = zariski::asymptotic_multiplicity(&f1, &level, on_e).unwrap();
        assert_eq!(mult, Rat::one(), "witness multiplicity at p={p}");
        assert_eq!(
            zariski::sigma_coefficient(&f1, &level, "E").unwrap(),
            Rat::one()
        );
    }
    assert!(saw_big_level);
    pass("criterion 11: ample sequences stabilize with zero multiplicity by p <= 8; witness multiplicity is 1 at every big level");
}
