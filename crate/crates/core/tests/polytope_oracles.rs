//! Vertex enumeration against the combinatorial oracle, outer
//! approximation of the four-dimensional cover, and the refinement trend.

mod common;

use borsuk_core::covers::{build_demo_r2, build_ucs_r4, lassak_cover};
use borsuk_core::geometry::{haar_orthogonal, ray_exit, Halfspace, Point};
use borsuk_core::partition::{DirectionSystem, TemplateKind};
use borsuk_core::polytope::{circumscribe, objective_upper, vertex_enumeration};
use common as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Box constraints plus random sphere tangents: bounded by construction,
/// origin interior with slack.
fn random_bounded_system(rng: &mut ChaCha8Rng, dim: usize, extra: usize) -> Vec<Halfspace> {
    let mut hs = Vec::new();
    for i in 0..dim {
        let mut n = vec![0.0; dim];
        n[i] = 1.0;
        hs.push(Halfspace::new(n.clone(), rng.random_range(0.9..1.3)).unwrap());
        let neg: Vec<f64> = n.iter().map(|x| -x).collect();
        hs.push(Halfspace::new(neg, rng.random_range(0.9..1.3)).unwrap());
    }
    for _ in 0..extra {
        let n = oracle::random_unit(rng, dim);
        hs.push(Halfspace::new(n, rng.random_range(0.75..1.4)).unwrap());
    }
    hs
}

#[test]
fn vertex_enumeration_matches_brute_force_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for case in 0..10 {
        let hs = random_bounded_system(&mut rng, 4, 14);
        let got = vertex_enumeration(&hs).unwrap();
        let want = oracle::brute_force_vertices(&hs, 1e-8);
        assert_eq!(
            got.len(),
            want.len(),
            "case {case}: vertex count {} vs oracle {}",
            got.len(),
            want.len()
        );
        assert_vertex_sets_match(&got, &want, 1e-8, case);
    }
}

/// One-to-one matching of two vertex sets within `tol`.
fn assert_vertex_sets_match(got: &[Point], want: &[Vec<f64>], tol: f64, case: usize) {
    let mut used = vec![false; got.len()];
    for w in want {
        let hit = got
            .iter()
            .enumerate()
            .find(|(i, g)| !used[*i] && oracle::dist(g.coords(), w) <= tol);
        match hit {
            Some((i, _)) => used[i] = true,
            None => panic!("case {case}: oracle vertex {w:?} unmatched"),
        }
    }
}

#[test]
fn vertex_enumeration_matches_brute_force_in_the_plane() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for _ in 0..10 {
        let hs = random_bounded_system(&mut rng, 2, 8);
        let got = vertex_enumeration(&hs).unwrap();
        let want = oracle::brute_force_vertices(&hs, 1e-8);
        assert_eq!(got.len(), want.len());
        assert_vertex_sets_match(&got, &want, 1e-8, 0);
    }
}

#[test]
fn outer_polytope_contains_ray_cast_boundary_of_the_4d_cover() {
    let cover = lassak_cover(4).unwrap();
    let p = circumscribe(&cover, 3).unwrap();
    let w = cover.witness().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    for _ in 0..2000 {
        let d = oracle::random_unit(&mut rng, 4);
        let t = ray_exit(&cover, &w, &d).unwrap();
        let x: Vec<f64> = w
            .coords()
            .iter()
            .zip(&d)
            .map(|(wi, di)| wi + t * di)
            .collect();
        assert!(p.contains(&x, 1e-9));
    }
    // The same holds for every truncated element.
    for el in build_ucs_r4().unwrap().elements {
        let ph = circumscribe(&el, 3).unwrap();
        for _ in 0..500 {
            let d = oracle::random_unit(&mut rng, 4);
            let t = ray_exit(&el, el.witness(), &d).unwrap();
            let x: Vec<f64> = el
                .witness()
                .coords()
                .iter()
                .zip(&d)
                .map(|(wi, di)| wi + t * di)
                .collect();
            assert!(ph.contains(&x, 1e-9), "element {}", el.label());
        }
    }
}

#[test]
fn upper_objective_refines_on_average_with_the_grid() {
    // Trend over 20 random planar configurations: the mean certified bound
    // does not grow when the grid is refined.
    let demo = build_demo_r2().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let mut coarse_sum = 0.0;
    let mut fine_sum = 0.0;
    for k in 0..20u64 {
        let cover = &demo[(k % 2) as usize];
        let apex = oracle::sample_interior(cover, &mut rng, 1e-2);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hexagon,
            haar_orthogonal(600 + k, 2),
            apex,
            cover,
        )
        .unwrap();
        coarse_sum += objective_upper(cover, &ds, 5).unwrap().max_diameter;
        fine_sum += objective_upper(cover, &ds, 11).unwrap().max_diameter;
    }
    assert!(
        fine_sum <= coarse_sum + 1e-9,
        "mean refined bound {fine_sum} vs coarse {coarse_sum}"
    );
}

#[test]
fn enumeration_is_deterministic_and_lexicographically_ordered() {
    let mut rng = ChaCha8Rng::seed_from_u64(65);
    let hs = random_bounded_system(&mut rng, 4, 10);
    let a = vertex_enumeration(&hs).unwrap();
    let b = vertex_enumeration(&hs).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.coords(), y.coords(), "bit-identical repeat run");
    }
    for w in a.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        assert!(
            p.coords() <= q.coords(),
            "vertices must come out lexicographically sorted"
        );
    }
}
