//! Built-in golden suite: fast end-to-end checks of the polynomial algebra,
//! the segment-cycle machinery, the bundled fixtures, closure equality, and
//! the sphere estimator. Prints one PASS/FAIL line per check.

use linkoid::bracket::{jones, BracketEngine};
use linkoid::diagram::{braid_linkoid, BraidWord, LinkoidDiagram};
use linkoid::fixtures;
use linkoid::poly::LaurentPoly;
use linkoid::segcycle::{cycle_count, Pairing};
use linkoid::sphere::{estimate_jones, SamplerConfig};

pub fn run() -> Result<(), String> {
    let mut failed = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("{} {}", if ok { "PASS" } else { "FAIL" }, name);
        if !ok {
            failed += 1;
        }
    };

    let d = LaurentPoly::d();
    check(
        "poly: d^2 = A^4 + 2 + A^-4",
        &d * &d == LaurentPoly::from_terms(&[(4, 1), (0, 2), (-4, 1)]),
    );
    check(
        "poly: (-A^3)^2 (-A^4 - A^-4) = -A^10 - A^2",
        LaurentPoly::from_terms(&[(4, -1), (-4, -1)]).writhe_normalize(-2)
            == LaurentPoly::from_terms(&[(10, -1), (2, -1)]),
    );
    check(
        "poly: t-presentation of -A^10 - A^2",
        LaurentPoly::from_terms(&[(10, -1), (2, -1)])
            .to_t()
            .pretty(2)
            == "-t^(-5/2) - t^(-1/2)",
    );

    let hl2 = Pairing::head_leg(2).unwrap();
    let j1 = Pairing::parse("(1 3)(2 4)").unwrap();
    check(
        "segcycle: (1 3)(2 4) has one segment cycle",
        cycle_count(&j1, &hl2).unwrap() == 1,
    );
    check(
        "segcycle: head-leg pairing has n segment cycles",
        cycle_count(&hl2, &hl2).unwrap() == 2,
    );

    let hopf = fixtures::hopf_linkoid();
    let r = jones(&hopf).map_err(|e| e.to_string())?;
    check(
        "hopf-type linkoid: bracket -A^4 - A^-4",
        r.bracket == LaurentPoly::from_terms(&[(4, -1), (-4, -1)]),
    );
    check("hopf-type linkoid: writhe -2", r.writhe == -2);
    check(
        "hopf-type linkoid: jones -A^10 - A^2",
        r.jones_a == LaurentPoly::from_terms(&[(10, -1), (2, -1)]),
    );

    let mut trivial_ok = true;
    for n in 1..=6 {
        let t = jones(&LinkoidDiagram::trivial(n)).map_err(|e| e.to_string())?;
        trivial_ok &= t.jones_a == LaurentPoly::d_power(n as i64 - 1).unwrap();
    }
    check("trivial linkoids n=1..6: jones = d^(n-1)", trivial_ok);

    let engine = BracketEngine::default();
    let closed = hopf.crossing_free_closure().map_err(|e| e.to_string())?;
    check(
        "closure: jones(linkoid) = jones(Hopf link)",
        engine.jones(&hopf).map_err(|e| e.to_string())?.jones_a
            == engine.jones(&closed).map_err(|e| e.to_string())?.jones_a,
    );

    let mut braid_ok = true;
    for letters in [vec![1, -1], vec![1, 2, 1, 1, 2, 1], vec![-1, 2, -1, 2, -1, 2]] {
        let mut w = BraidWord {
            strands: 3,
            letters,
        };
        w.purify();
        let l = braid_linkoid(&w).map_err(|e| e.to_string())?;
        let c = l.crossing_free_closure().map_err(|e| e.to_string())?;
        braid_ok &= engine.jones(&l).map_err(|e| e.to_string())?.jones_a
            == engine.jones(&c).map_err(|e| e.to_string())?.jones_a;
    }
    check("closure: pure braid linkoids equal their closures", braid_ok);

    let w1 = fixtures::open_borromean()
        .interpolate_closure(1.0)
        .map_err(|e| e.to_string())?;
    let cfg = SamplerConfig {
        sample_count: 64,
        ..SamplerConfig::default()
    };
    let est = estimate_jones(&w1, &cfg).map_err(|e| e.to_string())?;
    let borromean = LaurentPoly::from_terms(&[
        (-12, -1),
        (-8, 3),
        (-4, -2),
        (0, 4),
        (4, -2),
        (8, 3),
        (12, -1),
    ]);
    let exact = est
        .type_census
        .values()
        .all(|e| e.value == borromean);
    check(
        "sphere: closed Borromean gives the Borromean Jones from every direction",
        exact && est.mean.approx_eq(&borromean.to_real(), 1e-9),
    );

    if failed == 0 {
        println!("selftest: all checks passed");
        Ok(())
    } else {
        Err(format!("selftest: {failed} check(s) failed"))
    }
}
