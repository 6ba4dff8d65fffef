use super::*;
use crate::diagram::tests::{find_poke_site, random_braid_diagram};
use crate::diagram::{
    braid_linkoid, legal_omega3_sites, omega1_add, omega2_poke, omega3_slide, BraidWord,
    Omega1Site, PokeSite,
};
use crate::fixtures;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly(pairs: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(pairs)
}

#[test]
fn trivial_linkoid_bracket_is_d_power() {
    for n in 1..=6 {
        let d = LinkoidDiagram::trivial(n);
        let expect = LaurentPoly::d_power(n as i64 - 1).unwrap();
        assert_eq!(bracket(&d).unwrap(), expect);
        let r = jones(&d).unwrap();
        assert_eq!(r.jones_a, expect);
        assert_eq!(r.writhe, 0);
    }
}

#[test]
fn unknots_and_unlinks() {
    assert_eq!(bracket(&LinkoidDiagram::unlink(1)).unwrap(), LaurentPoly::one());
    assert_eq!(bracket(&LinkoidDiagram::unlink(2)).unwrap(), LaurentPoly::d());
}

#[test]
fn empty_diagram_is_an_error() {
    let d = LinkoidDiagram::unlink(0);
    match bracket(&d) {
        Err(DiagramError::EmptyDiagram) => {}
        other => panic!("expected empty collection error, got {other:?}"),
    }
    assert_eq!(
        DiagramError::EmptyDiagram.to_string(),
        "empty collection"
    );
}

#[test]
fn hopf_linkoid_bracket_and_jones() {
    let d = fixtures::hopf_linkoid();
    let r = jones(&d).unwrap();
    assert_eq!(r.bracket, poly(&[(4, -1), (-4, -1)]));
    assert_eq!(r.writhe, -2);
    assert_eq!(r.jones_a, poly(&[(10, -1), (2, -1)]));
    // t-presentation: the Jones polynomial of the Hopf link
    assert_eq!(r.jones_a.to_t().pretty(2), "-t^(-5/2) - t^(-1/2)");
}

#[test]
fn hopf_link_closed_bracket() {
    let d = fixtures::hopf_linkoid().crossing_free_closure().unwrap();
    assert_eq!(bracket(&d).unwrap(), poly(&[(4, -1), (-4, -1)]));
    let r = jones(&d).unwrap();
    assert_eq!(r.jones_a, poly(&[(10, -1), (2, -1)]));
}

#[test]
fn positive_kink_multiplies_bracket_by_minus_a_cubed() {
    // one-kink circle: bracket must be -A^3 (positive) or -A^-3 (negative);
    // this pins the A-smoothing orientation convention
    let base = LinkoidDiagram::trivial(1);
    let plus = omega1_add(&base, Omega1Site { arc: 0, positive: true }).unwrap();
    let (p, _) = bracket_state_sum(&plus).unwrap();
    assert_eq!(p, poly(&[(3, -1)]));
    let minus = omega1_add(&base, Omega1Site { arc: 0, positive: false }).unwrap();
    let (m, _) = bracket_state_sum(&minus).unwrap();
    assert_eq!(m, poly(&[(-3, -1)]));
    // jones is unchanged by the kink
    assert_eq!(jones(&plus).unwrap().jones_a, LaurentPoly::one());
    assert_eq!(jones(&minus).unwrap().jones_a, LaurentPoly::one());
}

#[test]
fn knotoid_formula_oracle() {
    // for 1 open component, cyc = 1 always, so the bracket equals the
    // knotoid state sum A^sigma d^circ
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let mut d = LinkoidDiagram::trivial(1);
        for _ in 0..rng.gen_range(1..5) {
            let arc = rng.gen_range(0..d.arc_count());
            let positive = rng.gen_bool(0.5);
            d = omega1_add(&d, Omega1Site { arc, positive }).unwrap();
        }
        let mut oracle = LaurentPoly::zero();
        for (mask, res) in (0u64..).zip(d.enumerate_states().unwrap()) {
            let sigma = d.crossing_count() as i64 - 2 * mask.count_ones() as i64;
            let w = &LaurentPoly::monomial(sigma, 1)
                * &LaurentPoly::d_power(res.circ as i64).unwrap();
            oracle += &w;
        }
        assert_eq!(bracket(&d).unwrap(), oracle);
    }
}

/// Independent loop-count bracket for pure links: walks the smoothed
/// diagram port by port instead of using union-find.
fn textbook_link_bracket(d: &LinkoidDiagram) -> LaurentPoly {
    assert_eq!(d.open_count(), 0);
    let c = d.crossing_count();
    let mut acc = LaurentPoly::zero();
    for mask in 0..1u64 << c {
        // build the pairing of arc-ends induced by the smoothings
        use std::collections::HashMap;
        let mut join: HashMap<(usize, u8), (usize, u8)> = HashMap::new();
        for (x, cr) in (0..c).map(|x| (x, &d.crossings[x])) {
            let p: Vec<(usize, u8)> = cr
                .ports
                .iter()
                .map(|p| (p.arc, if p.end == crate::diagram::ArcEnd::Head { 1 } else { 0 }))
                .collect();
            let pairs = if mask >> x & 1 == 0 {
                [(p[0], p[1]), (p[2], p[3])]
            } else {
                [(p[0], p[3]), (p[1], p[2])]
            };
            for (a, b) in pairs {
                join.insert(a, b);
                join.insert(b, a);
            }
        }
        let mut seen: std::collections::HashSet<(usize, u8)> = Default::default();
        let mut loops = d.free_loop_count();
        for a in 0..d.arc_count() {
            for e in [0u8, 1] {
                let start = (a, e);
                if seen.contains(&start) {
                    continue;
                }
                loops += 1;
                let mut cur = start;
                loop {
                    seen.insert(cur);
                    seen.insert((cur.0, 1 - cur.1));
                    let far = (cur.0, 1 - cur.1);
                    cur = join[&far];
                    if cur == start {
                        break;
                    }
                }
            }
        }
        let sigma = c as i64 - 2 * mask.count_ones() as i64;
        let w = &LaurentPoly::monomial(sigma, 1)
            * &LaurentPoly::d_power(loops as i64 - 1).unwrap();
        acc += &w;
    }
    acc
}

#[test]
fn pure_link_specialization_matches_textbook_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..25 {
        let mut w = BraidWord {
            strands: rng.gen_range(2..=3),
            letters: (0..rng.gen_range(1..6))
                .map(|_| {
                    let i = rng.gen_range(1..3i32).min(2);
                    if rng.gen_bool(0.5) {
                        i
                    } else {
                        -i
                    }
                })
                .collect(),
        };
        w.letters.retain(|&l| l.unsigned_abs() < w.strands as u32);
        if w.letters.is_empty() {
            continue;
        }
        w.purify();
        let link = braid_linkoid(&w).unwrap().crossing_free_closure().unwrap();
        if link.crossing_count() > 10 {
            continue;
        }
        assert_eq!(bracket(&link).unwrap(), textbook_link_bracket(&link));
    }
}

#[test]
fn enumeration_and_skein_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    // forcing the threshold to zero drives the skein recursion to the bottom
    let skein_engine = BracketEngine::new(BracketOptions {
        enumeration_threshold: 0,
        ..BracketOptions::default()
    });
    for _ in 0..30 {
        let d = random_braid_diagram(&mut rng, 4, 8);
        let (by_enum, _) = bracket_state_sum(&d).unwrap();
        let by_skein = skein_engine.bracket(&d).unwrap();
        assert_eq!(by_enum, by_skein);
    }
}

#[test]
fn simplify_preserves_bracket_up_to_kink_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..30 {
        let mut d = random_braid_diagram(&mut rng, 3, 6);
        for _ in 0..rng.gen_range(0..3) {
            let arc = rng.gen_range(0..d.arc_count());
            d = omega1_add(
                &d,
                Omega1Site {
                    arc,
                    positive: rng.gen_bool(0.5),
                },
            )
            .unwrap();
        }
        if d.crossing_count() > 10 {
            continue;
        }
        let (sd, twist) = d.simplify();
        let (full, _) = bracket_state_sum(&d).unwrap();
        let (reduced, _) = bracket_state_sum(&sd).unwrap();
        let sign = if twist.rem_euclid(2) == 0 { 1 } else { -1 };
        let restored = &reduced * &LaurentPoly::monomial(3 * twist, sign);
        assert_eq!(full, restored);
    }
}

#[test]
fn mirror_image_mirrors_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..20 {
        let d = random_braid_diagram(&mut rng, 4, 7);
        let m = d.mirror_diagram();
        assert_eq!(bracket(&m).unwrap(), bracket(&d).unwrap().mirror());
        assert_eq!(m.writhe(), -d.writhe());
    }
}

#[test]
fn move_invariance_smoke() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let engine = BracketEngine::default();
    for _ in 0..15 {
        let d = random_braid_diagram(&mut rng, 3, 5);
        let b0 = engine.bracket(&d).unwrap();
        let j0 = engine.jones(&d).unwrap().jones_a;
        // Ω₁
        let arc = rng.gen_range(0..d.arc_count());
        let positive = rng.gen_bool(0.5);
        let kinked = omega1_add(&d, Omega1Site { arc, positive }).unwrap();
        let factor = LaurentPoly::monomial(if positive { 3 } else { -3 }, -1);
        assert_eq!(engine.bracket(&kinked).unwrap(), &b0 * &factor);
        assert_eq!(engine.jones(&kinked).unwrap().jones_a, j0);
        // Ω₂
        let faces = d.faces();
        if let Some((fi, i, j)) = find_poke_site(&faces, &mut rng) {
            let poked = omega2_poke(
                &d,
                &faces.faces[fi],
                PokeSite {
                    i,
                    j,
                    over_first: rng.gen_bool(0.5),
                },
            )
            .unwrap();
            assert_eq!(engine.bracket(&poked).unwrap(), b0);
            assert_eq!(engine.jones(&poked).unwrap().jones_a, j0);
        }
    }
}

#[test]
fn omega3_invariance_on_braid_relation() {
    let engine = BracketEngine::default();
    let d = braid_linkoid(&BraidWord {
        strands: 3,
        letters: vec![1, 2, 1],
    })
    .unwrap();
    let sites = legal_omega3_sites(&d);
    assert!(!sites.is_empty());
    for site in &sites {
        let slid = omega3_slide(&d, site).unwrap();
        assert_eq!(engine.bracket(&slid).unwrap(), engine.bracket(&d).unwrap());
        assert_eq!(
            engine.jones(&slid).unwrap().jones_a,
            engine.jones(&d).unwrap().jones_a
        );
    }
}

#[test]
fn linkoid_closure_preserves_jones() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let engine = BracketEngine::default();
    let mut checked = 0;
    for _ in 0..40 {
        let mut w = BraidWord {
            strands: rng.gen_range(2..=4),
            letters: Vec::new(),
        };
        for _ in 0..rng.gen_range(1..6) {
            let i = rng.gen_range(1..w.strands) as i32;
            w.letters.push(if rng.gen_bool(0.5) { i } else { -i });
        }
        w.purify();
        if w.letters.len() > 10 {
            continue;
        }
        let linkoid = braid_linkoid(&w).unwrap();
        let link = linkoid.crossing_free_closure().unwrap();
        let a = engine.jones(&linkoid).unwrap();
        let b = engine.jones(&link).unwrap();
        assert_eq!(a.jones_a, b.jones_a);
        assert_eq!(a.writhe, b.writhe);
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn skein_relation_holds() {
    let engine = BracketEngine::default();
    // one positive crossing on a trivial 2-component linkoid
    let twist = braid_linkoid(&BraidWord {
        strands: 2,
        letters: vec![1],
    })
    .unwrap();
    assert!(skein_check(&engine, &twist, 0).unwrap());
    // the Hopf-type linkoid at both sites
    let hopf = fixtures::hopf_linkoid();
    assert!(skein_check(&engine, &hopf, 0).unwrap());
    assert!(skein_check(&engine, &hopf, 1).unwrap());
    assert!(matches!(
        skein_check(&engine, &hopf, 5),
        Err(DiagramError::SiteOutOfRange(5))
    ));
    // random sites on random braids
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for _ in 0..20 {
        let d = random_braid_diagram(&mut rng, 3, 6);
        let site = rng.gen_range(0..d.crossing_count());
        assert!(skein_check(&engine, &d, site).unwrap());
    }
}

#[test]
fn cache_reports_hits() {
    let engine = BracketEngine::default();
    let d = fixtures::hopf_linkoid();
    let first = engine.jones(&d).unwrap();
    assert!(!first.cache_hit);
    let second = engine.jones(&d).unwrap();
    assert!(second.cache_hit);
    assert_eq!(first.jones_a, second.jones_a);
    let stats = engine.cache_stats();
    assert!(stats.entries >= 1);
    assert!(stats.hits >= 1);
}

#[test]
fn cap_exceeded_after_simplify() {
    let engine = BracketEngine::new(BracketOptions {
        enumeration_threshold: 2,
        crossing_cap: 2,
        ..BracketOptions::default()
    });
    // an irreducible 3-crossing diagram (trefoil-like braid closure)
    let mut w = BraidWord {
        strands: 2,
        letters: vec![1, 1, 1],
    };
    w.purify();
    let d = braid_linkoid(&w).unwrap();
    match engine.bracket(&d) {
        Err(DiagramError::CapExceeded { .. }) => {}
        other => panic!("expected cap error, got {other:?}"),
    }
}
