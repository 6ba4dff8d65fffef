// print per-direction jones for the same directions the Python oracle kept
use linkoid::bracket::{BracketEngine, BracketOptions};
use linkoid::fixtures;
use linkoid::projection::{project, ProjectionOutcome};
use linkoid::sphere::fibonacci_direction;
use serde_json::json;

fn main() {
    let w0 = fixtures::open_borromean();
    let engine = BracketEngine::new(BracketOptions::sphere_default());
    let indices: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    for i in indices {
        let dir = fibonacci_direction(i, 400);
        let Ok(ProjectionOutcome::Diagram(d)) = project(&w0, dir, 1e-9) else {
            println!("{}", json!({"i": i, "skip": true}));
            continue;
        };
        let r = engine.jones(&d).unwrap();
        let mut terms = serde_json::Map::new();
        for e in r.jones_a.exponents() {
            let c = r.jones_a.coeff_exact(e).unwrap();
            terms.insert(e.to_string(), json!(c.to_string()));
        }
        println!("{}", json!({"i": i, "writhe": r.writhe, "jones": terms}));
    }
}
