//! Round-trip property over randomly generated valid spec files.

mod common;

use borsuk_core::geometry::{haar_orthogonal, Ball, Cover, Halfspace, Point};
use borsuk_core::partition::{DirectionSystem, TemplateKind};
use borsuk_core::specfile::SpecFile;
use common as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spec(rng: &mut ChaCha8Rng) -> SpecFile {
    let dim = if rng.random_bool(0.5) { 2 } else { 4 };
    let n_balls = rng.random_range(1..=3);
    let mut balls = Vec::new();
    for _ in 0..n_balls {
        let c: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.2..0.2)).collect();
        balls.push(Ball::new(Point::from(c), rng.random_range(0.8..1.6)).unwrap());
    }
    let mut halfspaces = Vec::new();
    for _ in 0..rng.random_range(0..5) {
        let n = oracle::random_unit(rng, dim);
        halfspaces.push(Halfspace::new(n, rng.random_range(0.4..1.0)).unwrap());
    }
    let cover = Cover::new(dim, balls, halfspaces, format!("R{dim}"), Point::zero(dim)).unwrap();
    let mut spec = SpecFile::new(
        cover.clone(),
        rng.random_range(0..10),
        rng.random_range(1..20),
        rng.random(),
    );
    let kind = TemplateKind::for_dimension(dim).unwrap();
    match rng.random_range(0..3) {
        0 => {}
        1 => {
            spec.directions = Some(
                DirectionSystem::rigid(
                    kind,
                    haar_orthogonal(rng.random(), dim),
                    Point::zero(dim),
                    &cover,
                )
                .unwrap(),
            );
        }
        _ => {
            // Free directions: Haar-rotated template, re-listed explicitly.
            let q = haar_orthogonal(rng.random(), dim);
            let dirs: Vec<Vec<f64>> = kind
                .template()
                .directions
                .iter()
                .map(|d| q.apply(d))
                .collect();
            spec.directions = Some(DirectionSystem::free(Point::zero(dim), dirs, &cover).unwrap());
        }
    }
    spec
}

#[test]
fn hundred_random_specs_round_trip_canonically() {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for case in 0..100 {
        let spec = random_spec(&mut rng);
        let text = spec.serialize();
        let back =
            SpecFile::parse(&text).unwrap_or_else(|e| panic!("case {case}: parse failed: {e}"));
        assert_eq!(back.serialize(), text, "case {case}: not a fixpoint");
        assert_eq!(back.seed, spec.seed);
        assert_eq!(back.m_lower, spec.m_lower);
        assert_eq!(back.m_upper, spec.m_upper);
        assert_eq!(back.cover.label(), spec.cover.label());
        // Numeric payloads survive bit-exactly.
        for (a, b) in back.cover.balls().iter().zip(spec.cover.balls()) {
            assert_eq!(a.radius().to_bits(), b.radius().to_bits());
            assert_eq!(a.center().coords(), b.center().coords());
        }
        match (&back.directions, &spec.directions) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                assert_eq!(a.apex().coords(), b.apex().coords());
                assert_eq!(a.directions(), b.directions());
                assert_eq!(a.is_rigid(), b.is_rigid());
            }
            _ => panic!("case {case}: direction presence changed"),
        }
    }
}
