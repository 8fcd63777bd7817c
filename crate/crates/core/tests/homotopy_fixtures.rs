use std::collections::BTreeMap;

use num::complex::Complex64;
use rand::Rng;
use rigidbound::graph::fixtures;
use rigidbound::homotopy::{solve_total_degree, ComplexSystem, TrackerOptions};
use rigidbound::rng::derive;
use rigidbound::system::MinorSystem;
use rigidbound::{build_cm, mv_inclusion_exclusion, Graph};

fn fixture_systems() -> Vec<(&'static str, Graph, Vec<[usize; 4]>)> {
    vec![
        ("desargues", fixtures::desargues(), vec![[1, 4, 5, 6], [1, 3, 5, 6], [1, 2, 3, 5]]),
        ("k33", fixtures::k33(), vec![[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 3, 6]]),
        ("seven", fixtures::seven_worst(), vec![[1, 4, 5, 7], [1, 3, 5, 6], [1, 4, 5, 6], [1, 2, 3, 5]]),
    ]
}

#[test]
fn generic_coefficients_reach_mixed_volume() {
    for (name, g, sets) in fixture_systems() {
        let cm = build_cm(&g);
        let sys = MinorSystem::from_index_sets(&cm, &sets).unwrap();
        let polys = sys.newton_polytopes().unwrap();
        let mv = mv_inclusion_exclusion(&polys).unwrap().value as usize;
        for draw in 0..8u64 {
            let mut rng = derive(17, draw);
            let generic = ComplexSystem::random_on_supports(&polys, &mut rng).unwrap();
            let r = solve_total_degree(&generic, draw, &TrackerOptions::default()).unwrap();
            assert!(!r.unreliable, "{name} draw {draw}");
            assert_eq!(r.count.torus_roots, mv, "{name} draw {draw}: {:?}", r.count);
            assert!(r.roots.iter().all(|x| x.residual < 1e-10));
            assert!(r.count.distinct_roots <= r.count.finite_roots);
            assert!(r.count.finite_roots <= r.count.total_paths);
        }
    }
}

#[test]
fn random_lengths_stay_within_mixed_volume() {
    // Coefficients coming from lengths are not generic for the support:
    // K3,3 reaches only 8 torus roots, its 16 complex embeddings up to
    // reflection. Desargues and the 7-point graph attain the bound.
    for (name, g, sets) in fixture_systems() {
        let cm = build_cm(&g);
        let sys = MinorSystem::from_index_sets(&cm, &sets).unwrap();
        let mv = mv_inclusion_exclusion(&sys.newton_polytopes().unwrap()).unwrap().value as usize;
        for draw in 0..3 {
            let mut rng = derive(3, draw);
            let params: BTreeMap<_, f64> = cm.parameters().into_iter().map(|v| (v, rng.gen_range(0.5..2.0))).collect();
            let f = ComplexSystem::from_minor_system(&sys, &params).unwrap();
            let r = solve_total_degree(&f, 11, &TrackerOptions::default()).unwrap();
            assert_eq!(r.failed_paths, 0, "{name}");
            let expect = if name == "k33" { 8 } else { mv };
            assert_eq!(r.count.torus_roots, expect, "{name}: {:?}", r.count);
            assert!(r.count.torus_roots <= mv);
        }
    }
}

#[test]
fn roots_do_not_depend_on_equation_order_or_seed() {
    let (_, g, sets) = fixture_systems().remove(0);
    let cm = build_cm(&g);
    let polys = MinorSystem::from_index_sets(&cm, &sets).unwrap().newton_polytopes().unwrap();
    let mut rng = derive(5, 5);
    let eqs: Vec<Vec<(Complex64, Vec<u32>)>> = polys
        .iter()
        .map(|p| {
            p.points
                .iter()
                .map(|e| {
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    (c, e.iter().map(|&k| k as u32).collect())
                })
                .collect()
        })
        .collect();
    let a = ComplexSystem::new(3, eqs.clone()).unwrap();
    let b = ComplexSystem::new(3, eqs.into_iter().rev().collect()).unwrap();
    let opts = TrackerOptions::default();
    let ra = solve_total_degree(&a, 1, &opts).unwrap();
    let ra2 = solve_total_degree(&a, 2, &opts).unwrap();
    let rb = solve_total_degree(&b, 1, &opts).unwrap();
    assert_eq!(ra.count, ra2.count);
    assert_eq!(ra.count, rb.count);
    for other in [&ra2, &rb] {
        for root in &ra.roots {
            let hit = other.roots.iter().any(|s| {
                root.coords
                    .iter()
                    .zip(&s.coords)
                    .all(|(p, q)| (p - q).norm() < 1e-6 * (1.0 + p.norm()))
            });
            assert!(hit);
        }
    }
}
