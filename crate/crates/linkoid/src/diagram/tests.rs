use super::*;
use crate::fixtures;
use crate::segcycle::Pairing;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn trivial_text(n: usize) -> String {
    let mut s = String::from("linkoid v1\n");
    for j in 1..=n {
        s.push_str(&format!("open {j}: a{j}\n"));
    }
    s
}

#[test]
fn parse_trivial_linkoid() {
    let d = parse_diagram(&trivial_text(3)).unwrap();
    assert_eq!(d.open_count(), 3);
    assert_eq!(d.crossing_count(), 0);
    assert_eq!(d.writhe(), 0);
    let res = d.resolve(&Smoothing(Vec::new())).unwrap();
    assert_eq!(res.circ, 0);
    assert_eq!(res.sigma, 0);
    assert_eq!(res.pairing, Pairing::head_leg(3).unwrap());
}

#[test]
fn hopf_linkoid_fixture() {
    let d = fixtures::hopf_linkoid();
    assert_eq!(d.open_count(), 2);
    assert_eq!(d.crossing_count(), 2);
    assert_eq!(d.writhe(), -2);
    assert_eq!(d.crossing_sign(0), -1);
    assert_eq!(d.crossing_sign(1), -1);
}

#[test]
fn hopf_linkoid_states() {
    let d = fixtures::hopf_linkoid();
    let states: Vec<StateResolution> = d.enumerate_states().unwrap().collect();
    assert_eq!(states.len(), 4);
    let hl = Pairing::head_leg(2).unwrap();
    let switched = Pairing::from_pairs(4, &[(1, 4), (2, 3)]).unwrap();
    // all-A state: two intact segments, no circle
    assert_eq!(states[0].sigma, 2);
    assert_eq!(states[0].circ, 0);
    assert_eq!(states[0].pairing, hl);
    // mixed states: rearranged pairing, no circle
    for s in [&states[1], &states[2]] {
        assert_eq!(s.sigma, 0);
        assert_eq!(s.circ, 0);
        assert_eq!(s.pairing, switched);
    }
    // all-B state: one circle plus rearranged pairing
    assert_eq!(states[3].sigma, -2);
    assert_eq!(states[3].circ, 1);
    assert_eq!(states[3].pairing, switched);
}

#[test]
fn enumerate_respects_cap() {
    let w = BraidWord {
        strands: 2,
        letters: vec![1, 1, 1],
    };
    let d = braid_linkoid(&w).unwrap();
    assert_eq!(d.enumerate_states().unwrap().count(), 8);
    match d.enumerate_states_capped(2).map(|_| ()) {
        Err(DiagramError::CapExceeded { crossings: 3, cap: 2 }) => {}
        other => panic!("expected cap error, got {:?}", other.err()),
    }
}

#[test]
fn writhe_of_braids() {
    let d = braid_linkoid(&BraidWord {
        strands: 3,
        letters: vec![1, 2, -1, 2],
    })
    .unwrap();
    assert_eq!(d.writhe(), 2);
    let m = d.mirror_diagram();
    assert_eq!(m.writhe(), -2);
}

#[test]
fn mirror_negates_random_braid_writhe() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let d = random_braid_diagram(&mut rng, 4, 8);
        assert_eq!(d.mirror_diagram().writhe(), -d.writhe());
    }
}

#[test]
fn parse_print_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..40 {
        let d = random_braid_diagram(&mut rng, 4, 9);
        let text = d.to_string();
        let back = parse_diagram(&text).unwrap();
        assert_eq!(back, d, "roundtrip failed for:\n{text}");
    }
    // fixtures too
    let d = fixtures::hopf_linkoid();
    assert_eq!(parse_diagram(&d.to_string()).unwrap(), d);
    let j = parse::print_diagram_json(&d);
    assert_eq!(parse_diagram_json(&j).unwrap(), d);
}

#[test]
fn crossing_line_order_is_immaterial() {
    let a = "linkoid v1
open 1: a0 X2.o a1 X1.u a2
open 2: b0 X1.o b1 X2.u b2
crossing X1: (a1 b0 a2 b1)
crossing X2: (b1 a0 b2 a1)
";
    let b = "linkoid v1
open 1: a0 X2.o a1 X1.u a2
open 2: b0 X1.o b1 X2.u b2
crossing X2: (b1 a0 b2 a1)
crossing X1: (a1 b0 a2 b1)
";
    let da = parse_diagram(a).unwrap();
    let db = parse_diagram(b).unwrap();
    assert_eq!(da, db);
    assert_eq!(da.canonical_signature(), db.canonical_signature());
    // the corresponding smoothings agree: crossing indices follow line
    // order, so swap the mask bits for the permuted file
    for mask in 0..4u64 {
        let ra = da.resolve(&Smoothing::from_mask(mask, 2)).unwrap();
        let swapped = (mask & 1) << 1 | (mask >> 1) & 1;
        let rb = db.resolve(&Smoothing::from_mask(swapped, 2)).unwrap();
        assert_eq!(ra, rb);
    }
}

#[test]
fn parse_rejects_malformed_input() {
    assert!(parse_diagram("").is_err());
    assert!(parse_diagram("linkoid v2\n").is_err());
    // missing crossing line
    assert!(parse_diagram("linkoid v1\nopen 1: a0 X0.u a1\n").is_err());
    // inconsistent valence: crossing passed under twice
    let bad = "linkoid v1
open 1: a0 X0.u a1
open 2: b0 X0.u b1
crossing X0: (a0 b0 a1 b1)
";
    assert!(parse_diagram(bad).is_err());
    // quadruple does not match the walks
    let bad2 = "linkoid v1
open 1: a0 X2.o a1 X1.u a2
open 2: b0 X1.o b1 X2.u b2
crossing X1: (a2 b0 a1 b1)
crossing X2: (b1 a0 b2 a1)
";
    assert!(parse_diagram(bad2).is_err());
    // open components out of order
    assert!(parse_diagram("linkoid v1\nopen 2: a0\n").is_err());
}

#[test]
fn parse_rejects_nonplanar() {
    // two closed curves crossing exactly once cannot embed in S^2
    let bad = "linkoid v1
closed: c0 X0.u
closed: c1 X0.o
crossing X0: (c0 c1> c0 c1<)
";
    match parse_diagram(bad) {
        Err(DiagramError::NotPlanar(_)) => {}
        other => panic!("expected planarity rejection, got {other:?}"),
    }
}

#[test]
fn circle_through_open_strand_is_planar() {
    // a circle crossed once by an open strand is fine on S^2
    let ok = "linkoid v1
open 1: a0 X0.u a1
closed: c0 X0.o
crossing X0: (a0 c0> a1 c0<)
";
    let d = parse_diagram(ok).unwrap();
    assert_eq!(d.crossing_count(), 1);
    assert_eq!(d.closed_walk_count(), 1);
    assert_eq!(parse_diagram(&d.to_string()).unwrap(), d);
}

#[test]
fn faces_of_hopf_linkoid() {
    let d = fixtures::hopf_linkoid();
    // the lens between the crossings plus the outer face
    assert_eq!(d.faces().faces.len(), 2);
    let closed = d.crossing_free_closure().unwrap();
    assert_eq!(closed.open_count(), 0);
    assert_eq!(closed.crossing_count(), 2);
    assert_eq!(closed.faces().faces.len(), 4);
}

#[test]
fn closure_of_trivial_components() {
    let d = LinkoidDiagram::trivial(1);
    let c = d.crossing_free_closure().unwrap();
    assert_eq!(c.free_loop_count(), 1);
    assert_eq!(c.crossing_count(), 0);
    assert_eq!(c.open_count(), 0);

    let d3 = LinkoidDiagram::trivial(3);
    let c3 = d3.crossing_free_closure().unwrap();
    assert_eq!(c3.free_loop_count(), 3);
}

#[test]
fn closure_rejects_bad_plan() {
    let d = fixtures::hopf_linkoid();
    let plan = ClosurePlan {
        face_routes: vec![0, 0],
    };
    let inferred = ClosurePlan::infer(&d).unwrap();
    // endpoints all sit on the outer face; a wrong route must be rejected
    if plan.face_routes != inferred.face_routes {
        assert!(d.close_linkoid(&plan).is_err());
    }
    assert!(d.close_linkoid(&inferred).is_ok());
}

#[test]
fn simplify_removes_added_kinks() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let d = random_braid_diagram(&mut rng, 3, 5);
        let (base, twist0) = d.simplify();
        let arc = rng.gen_range(0..d.arc_count());
        let positive = rng.gen_bool(0.5);
        let kinked = omega1_add(&d, Omega1Site { arc, positive }).unwrap();
        assert_eq!(kinked.crossing_count(), d.crossing_count() + 1);
        let (simplified, twist) = kinked.simplify();
        assert_eq!(twist, twist0 + if positive { 1 } else { -1 });
        assert_eq!(simplified.canonical_signature(), base.canonical_signature());
    }
}

#[test]
fn simplify_removes_pokes() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut exercised = 0;
    for _ in 0..40 {
        let d = random_braid_diagram(&mut rng, 3, 4);
        let faces = d.faces();
        let Some((fi, i, j)) = find_poke_site(&faces, &mut rng) else {
            continue;
        };
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
        assert_eq!(poked.crossing_count(), d.crossing_count() + 2);
        poked.validate_planar().unwrap();
        let (s1, t1) = poked.simplify();
        let (s0, t0) = d.simplify();
        assert_eq!(t1, t0);
        assert_eq!(s1.canonical_signature(), s0.canonical_signature());
        exercised += 1;
    }
    assert!(exercised >= 10, "only {exercised} poke sites found");
}

#[test]
fn omega3_sites_on_braid_triangle() {
    // sigma1 sigma2 sigma1 contains the Reidemeister III triangle
    let d = braid_linkoid(&BraidWord {
        strands: 3,
        letters: vec![1, 2, 1],
    })
    .unwrap();
    let sites = legal_omega3_sites(&d);
    assert!(!sites.is_empty());
    let slid = omega3_slide(&d, &sites[0]).unwrap();
    assert_eq!(slid.crossing_count(), 3);
    assert_eq!(slid.writhe(), d.writhe());
    slid.validate_planar().unwrap();
    // the slide moves the diagram to a different code
    assert_ne!(slid.canonical_signature(), d.canonical_signature());
}

#[test]
fn braid_purify() {
    let mut w = BraidWord {
        strands: 4,
        letters: vec![1, -3, 2],
    };
    assert!(!w.is_pure());
    w.purify();
    assert!(w.is_pure());
    let d = braid_linkoid(&w).unwrap();
    d.validate().unwrap();
}

#[test]
fn switch_crossing_flips_sign() {
    let d = fixtures::hopf_linkoid();
    let s = d.switch_crossing(0).unwrap();
    assert_eq!(s.crossing_sign(0), 1);
    assert_eq!(s.writhe(), 0);
    assert_eq!(s.switch_crossing(0).unwrap(), d);
}

#[test]
fn smooth_at_reduces_to_resolution() {
    // smoothing both crossings of the Hopf-type linkoid one at a time must
    // match the direct two-crossing resolution
    let d = fixtures::hopf_linkoid();
    for mask in 0..4u64 {
        let direct = d.resolve(&Smoothing::from_mask(mask, 2)).unwrap();
        let c0 = if mask & 1 == 0 {
            SmoothingChoice::A
        } else {
            SmoothingChoice::B
        };
        let c1 = if mask >> 1 & 1 == 0 {
            SmoothingChoice::A
        } else {
            SmoothingChoice::B
        };
        let step = d.smooth_at(1, c1).unwrap().smooth_at(0, c0).unwrap();
        let res = step.resolve(&Smoothing(Vec::new())).unwrap();
        assert_eq!(res.circ, direct.circ);
        assert_eq!(res.pairing, direct.pairing);
    }
}

pub(crate) fn random_braid_diagram(
    rng: &mut ChaCha8Rng,
    max_strands: usize,
    max_letters: usize,
) -> LinkoidDiagram {
    let strands = rng.gen_range(2..=max_strands);
    let n = rng.gen_range(1..=max_letters);
    let letters: Vec<i32> = (0..n)
        .map(|_| {
            let i = rng.gen_range(1..strands) as i32;
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    braid_linkoid(&BraidWord { strands, letters }).unwrap()
}

pub(crate) fn find_poke_site(
    faces: &Faces,
    rng: &mut ChaCha8Rng,
) -> Option<(usize, usize, usize)> {
    let mut candidates = Vec::new();
    for (fi, f) in faces.faces.iter().enumerate() {
        for i in 0..f.darcs.len() {
            for j in 0..f.darcs.len() {
                if i == j {
                    continue;
                }
                if f.darcs[i].1 == Dir::Fwd
                    && f.darcs[j].1 == Dir::Fwd
                    && f.darcs[i].0 != f.darcs[j].0
                {
                    candidates.push((fi, i, j));
                }
            }
        }
    }
    if candidates.is_empty() {
        None
    } else {
        Some(candidates[rng.gen_range(0..candidates.len())])
    }
}
