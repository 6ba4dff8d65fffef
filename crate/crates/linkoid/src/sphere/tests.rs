use super::*;
use crate::fixtures;
use crate::projection::CurveComponent;

fn cfg(n: usize) -> SamplerConfig {
    SamplerConfig {
        sample_count: n,
        ..SamplerConfig::default()
    }
}

fn triangle() -> CurveSet {
    CurveSet::new(vec![CurveComponent {
        points: vec![[0.0, 0.0, 0.0], [1.0, 0.1, 0.2], [0.3, 1.0, 0.1]],
        closed: true,
    }])
    .unwrap()
}

#[test]
fn unknotted_triangle_is_constant_one() {
    let est = estimate_jones(&triangle(), &cfg(200)).unwrap();
    assert_eq!(est.type_census.len(), 1);
    assert_eq!(est.samples_used, 200);
    assert!(est.mean.approx_eq(&LaurentPoly::one().to_real(), 1e-12));
    assert!(est.stderr.is_empty());
}

#[test]
fn distant_segments_average_to_d_squared() {
    // three tiny mutually distant open segments: no projected crossings
    // from any direction, so every sample is the trivial 3-linkoid
    let seg = |o: [f64; 3]| CurveComponent {
        points: vec![o, [o[0] + 1e-3, o[1] + 2e-3, o[2] + 1.5e-3]],
        closed: false,
    };
    let curves = CurveSet::new(vec![
        seg([0.0, 0.0, 0.0]),
        seg([50.0, 3.0, 1.0]),
        seg([2.0, 60.0, 7.0]),
    ])
    .unwrap();
    let est = estimate_bracket(&curves, &cfg(150)).unwrap();
    assert_eq!(est.type_census.len(), 1);
    let d2 = LaurentPoly::d_power(2).unwrap().to_real();
    assert!(est.mean.approx_eq(&d2, 1e-12));
}

#[test]
fn closed_borromean_is_projection_invariant() {
    let w1 = fixtures::open_borromean().interpolate_closure(1.0).unwrap();
    let est = estimate_jones(&w1, &cfg(60)).unwrap();
    // a link invariant: every direction gives the same polynomial
    let expect = LaurentPoly::from_terms(&[
        (-12, -1),
        (-8, 3),
        (-4, -2),
        (0, 4),
        (4, -2),
        (8, 3),
        (12, -1),
    ])
    .to_real();
    assert!(
        est.mean.approx_eq(&expect, 1e-9),
        "mean was {}",
        est.mean.to_t().pretty(3)
    );
    for entry in est.type_census.values() {
        assert_eq!(entry.value.to_real(), expect);
    }
}

#[test]
fn census_counts_are_consistent() {
    let w0 = fixtures::open_borromean();
    let est = estimate_jones(&w0, &cfg(300)).unwrap();
    let total: u64 = est.type_census.values().map(|e| e.count).sum();
    assert_eq!(total, est.samples_used);
    assert!(est.hit_rate() > 0.5, "hit rate {}", est.hit_rate());
    // recomputing any cached type from its representative reproduces the
    // cached polynomial exactly
    let engine = crate::bracket::BracketEngine::default();
    for (sig, entry) in est.type_census.iter().take(5) {
        let outcome = crate::projection::project(&w0, entry.representative, 1e-9)
            .unwrap()
            .diagram()
            .expect("representative is regular");
        assert_eq!(&outcome.canonical_signature(), sig);
        assert_eq!(engine.jones(&outcome).unwrap().jones_a, entry.value);
    }
}

#[test]
fn mirror_audit_via_switched_diagrams() {
    // the A <-> A^-1 image of the mean equals the mean of the per-direction
    // polynomials computed on crossing-switched diagrams
    let w0 = fixtures::open_borromean();
    let n = 120;
    let est = estimate_jones(&w0, &cfg(n)).unwrap();
    let engine = crate::bracket::BracketEngine::default();
    let mut acc = LaurentPoly::zero();
    for i in 0..n {
        let dir = fibonacci_direction(i, n);
        let d = crate::projection::project(&w0, dir, 1e-9)
            .unwrap()
            .diagram()
            .expect("regular direction");
        acc += &engine.jones(&d.mirror_diagram()).unwrap().jones_a;
    }
    let switched_mean = acc.scale_rat(&BigRational::new(BigInt::from(1), BigInt::from(n)));
    assert!(est
        .mean
        .mirror()
        .approx_eq(&switched_mean.to_real(), 1e-9));
}

#[test]
fn sweep_runs_in_order() {
    let w0 = fixtures::open_borromean();
    let out = sweep(&w0, &[0.0, 1.0], &cfg(40)).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out[0].0, 0.0);
    assert_eq!(out[1].0, 1.0);
    assert!(sweep(&w0, &[], &cfg(10)).unwrap().is_empty());
}

#[test]
fn deterministic_given_mode_and_seed() {
    let w0 = fixtures::open_borromean();
    let a = estimate_jones(&w0, &cfg(80)).unwrap();
    let b = estimate_jones(&w0, &cfg(80)).unwrap();
    assert_eq!(a.mean, b.mean);
    let r = SamplerConfig {
        mode: SamplerMode::UniformRandom,
        sample_count: 80,
        seed: 42,
        ..SamplerConfig::default()
    };
    let c = estimate_jones(&w0, &r).unwrap();
    let d = estimate_jones(&w0, &r).unwrap();
    assert_eq!(c.mean, d.mean);
    assert!(!c.stderr.is_empty());
}

#[test]
fn two_segments_match_hand_derived_formula() {
    // For two skew segments every projection is a 2-component linkoid with
    // at most one crossing. By hand:
    //   no crossing:        f = d = -A^2 - A^-2
    //   positive crossing:  f = (-A^3)^-1 (A + A^-1) = -A^-2 - A^-4
    //   negative crossing:  f = (-A^3)^+1 (A + A^-1) = -A^4 - A^2
    // so the mean is fixed by the three direction-probabilities, which a
    // ten-line standalone projector can count.
    let p1 = [0.0, 0.0, 0.0];
    let p2 = [1.0, 0.1, 0.0];
    let q1 = [0.2, -0.5, 0.3];
    let q2 = [0.7, 0.8, 0.35];
    let curves = CurveSet::new(vec![
        CurveComponent {
            points: vec![p1, p2],
            closed: false,
        },
        CurveComponent {
            points: vec![q1, q2],
            closed: false,
        },
    ])
    .unwrap();
    let n = 4000;
    let (mut n0, mut nplus, mut nminus) = (0u64, 0u64, 0u64);
    let cross3 = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let dot3 = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    for i in 0..n {
        let xi = fibonacci_direction(i as usize, n as usize);
        let g = [0.12345, 0.76543, 0.54321];
        let mut u = cross3(g, xi);
        let l = dot3(u, u).sqrt();
        u = [u[0] / l, u[1] / l, u[2] / l];
        let v = cross3(xi, u);
        let flat = |p: [f64; 3]| [dot3(p, u), dot3(p, v)];
        let (a1, a2, b1, b2) = (flat(p1), flat(p2), flat(q1), flat(q2));
        let d1 = [a2[0] - a1[0], a2[1] - a1[1]];
        let d2 = [b2[0] - b1[0], b2[1] - b1[1]];
        let r = [b1[0] - a1[0], b1[1] - a1[1]];
        let det = d1[0] * d2[1] - d1[1] * d2[0];
        let t = (r[0] * d2[1] - r[1] * d2[0]) / det;
        let s = (r[0] * d1[1] - r[1] * d1[0]) / det;
        if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&s) {
            n0 += 1;
            continue;
        }
        let z1 = dot3(p1, xi) + t * (dot3(p2, xi) - dot3(p1, xi));
        let z2 = dot3(q1, xi) + s * (dot3(q2, xi) - dot3(q1, xi));
        let (d_over, d_under) = if z1 > z2 { (d1, d2) } else { (d2, d1) };
        if d_over[0] * d_under[1] - d_over[1] * d_under[0] > 0.0 {
            nplus += 1;
        } else {
            nminus += 1;
        }
    }
    let w = |k: u64| BigRational::new(BigInt::from(k), BigInt::from(n));
    let expect = &(&LaurentPoly::from_terms(&[(2, -1), (-2, -1)]).scale_rat(&w(n0))
        + &LaurentPoly::from_terms(&[(-2, -1), (-4, -1)]).scale_rat(&w(nplus)))
        + &LaurentPoly::from_terms(&[(4, -1), (2, -1)]).scale_rat(&w(nminus));
    let est = estimate_jones(&curves, &cfg(n as usize)).unwrap();
    assert!(
        est.mean.approx_eq(&expect.to_real(), 1e-9),
        "estimate {} vs oracle {}",
        est.mean.to_t().pretty(4),
        expect.to_real().to_t().pretty(4)
    );
}

#[test]
fn continuity_smoke_under_small_perturbation() {
    use rand::{Rng, SeedableRng};
    let w0 = fixtures::open_borromean();
    let base = estimate_jones(&w0, &cfg(400)).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let delta = 1e-3;
    let perturbed = w0.map_points(|p| {
        [
            p[0] + rng.gen_range(-delta..delta),
            p[1] + rng.gen_range(-delta..delta),
            p[2] + rng.gen_range(-delta..delta),
        ]
    });
    let est = estimate_jones(&perturbed, &cfg(400)).unwrap();
    assert!(
        est.mean.approx_eq(&base.mean, 0.05),
        "perturbation moved a coefficient too far: {} vs {}",
        est.mean.to_t().pretty(3),
        base.mean.to_t().pretty(3)
    );
}
