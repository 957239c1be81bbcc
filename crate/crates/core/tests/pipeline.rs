use std::f64::consts::TAU;

use proptest::prelude::*;

use torus_morse::field::{detect_translation_symmetries, find_critical_points, TrigFieldSpec, TrigTerm};
use torus_morse::reeb::{build_reeb_graph, classify, ClassOverrides, MorseClassification};

/// `a cos 2π(p(x - dx) + q(y - dy))`
fn shifted(a: f64, p: i64, q: i64, (dx, dy): (f64, f64)) -> TrigTerm {
    TrigTerm::new(a, p, q, -TAU * (p as f64 * dx + q as f64 * dy))
}

fn run(terms: Vec<TrigTerm>) -> ((usize, usize, usize), i64, MorseClassification) {
    let spec = TrigFieldSpec::new(terms).unwrap();
    let cps = find_critical_points(&spec, 128, 1e-9).unwrap();
    let euler = cps.iter().map(|c| c.kind.euler_sign()).sum();
    let graph = build_reeb_graph(&spec, &cps, 128).unwrap();
    let sym = detect_translation_symmetries(&spec, 8, 1e-9).unwrap();
    let class = classify(&graph, &sym, &ClassOverrides::default()).unwrap();
    ((graph.vertices.len(), graph.edges.len(), graph.betti1), euler, class)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tilted_torus_is_stable_under_translation(dx in 0.0..1.0f64, dy in 0.0..1.0f64, b in 0.2..0.8f64) {
        let (shape, euler, class) = run(vec![shifted(1.0, 1, 0, (dx, dy)), shifted(b, 0, 1, (dx, dy))]);
        prop_assert_eq!(shape, (4, 4, 1));
        prop_assert_eq!(euler, 0);
        match class {
            MorseClassification::F1 { cyclic_index, decomposition, .. } => {
                prop_assert_eq!(cyclic_index, 1);
                prop_assert_eq!(decomposition.k, 2);
            }
            other => prop_assert!(false, "classified as {}", other.name()),
        }
    }

    #[test]
    fn egg_carton_is_stable_under_translation(dx in 0.0..1.0f64, dy in 0.0..1.0f64) {
        let (shape, euler, class) = run(vec![shifted(0.5, 1, -1, (dx, dy)), shifted(-0.5, 1, 1, (dx, dy))]);
        prop_assert_eq!(shape.2, 0);
        prop_assert_eq!(euler, 0);
        match class {
            MorseClassification::F0 { n, m, r, .. } => prop_assert_eq!((n, m, r), (1, 2, 2)),
            other => prop_assert!(false, "classified as {}", other.name()),
        }
    }
}
