//! Shared test oracles, deliberately independent of the library's
//! computational paths: bisection instead of closed-form ray exits, a
//! combinatorial solver instead of dual-hull vertex enumeration, and a
//! recursive Welzl miniball for universal-cover constructions.

#![allow(dead_code)]

use borsuk_core::geometry::{Ball, Cover, Halfspace, Point};
use rand::Rng;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn normalize(v: &mut [f64]) {
    let n = norm(v);
    for x in v.iter_mut() {
        *x /= n;
    }
}

pub fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim)
        .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
        .collect();
    normalize(&mut v);
    v
}

/// Gaussian elimination with partial pivoting, written independently of
/// the library's solver.
pub fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col].abs() < 1e-12 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            b.swap(col, piv);
        }
        for r in col + 1..n {
            let f = a[r * n + col] / a[col * n + col];
            for j in col..n {
                a[r * n + j] -= f * a[col * n + j];
            }
            b[r] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for j in col + 1..n {
            s -= a[col * n + j] * b[j];
        }
        b[col] = s / a[col * n + col];
    }
    Some(b)
}

/// Ray exit by bisection on cover membership.
pub fn bisect_ray_exit(cover: &Cover, w: &Point, d: &[f64]) -> f64 {
    let inside = |t: f64| {
        let x: Vec<f64> = w
            .coords()
            .iter()
            .zip(d)
            .map(|(wi, di)| wi + t * di)
            .collect();
        cover.membership(&Point::from(x)).unwrap()
    };
    let mut hi = 1e-3;
    while inside(hi) {
        hi *= 2.0;
        assert!(hi < 1e6, "ray never left the cover");
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exhaustive vertex enumeration: every dim-subset of hyperplanes, solved
/// and filtered by feasibility, deduplicated and sorted.
pub fn brute_force_vertices(halfspaces: &[Halfspace], tol: f64) -> Vec<Vec<f64>> {
    let dim = halfspaces[0].dim();
    let n = halfspaces.len();
    let mut subset: Vec<usize> = Vec::new();
    let mut out: Vec<Vec<f64>> = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        dim: usize,
        halfspaces: &[Halfspace],
        subset: &mut Vec<usize>,
        out: &mut Vec<Vec<f64>>,
    ) {
        if subset.len() == dim {
            let mut a = Vec::with_capacity(dim * dim);
            let mut b = Vec::with_capacity(dim);
            for &i in subset.iter() {
                a.extend_from_slice(halfspaces[i].normal());
                b.push(halfspaces[i].offset());
            }
            if let Some(x) = solve_dense(a, b, dim) {
                if halfspaces.iter().all(|h| h.eval(&x) <= 1e-9) {
                    out.push(x);
                }
            }
            return;
        }
        for i in start..n {
            subset.push(i);
            rec(i + 1, n, dim, halfspaces, subset, out);
            subset.pop();
        }
    }
    rec(0, n, dim, halfspaces, &mut subset, &mut out);
    // Deduplicate within tol and sort lexicographically.
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for x in out {
        if !kept.iter().any(|y| dist(&x, y) <= tol) {
            kept.push(x);
        }
    }
    kept.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match x.partial_cmp(y).unwrap() {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    kept
}

/// Smallest sphere through the support set (center restricted to its
/// affine hull).
fn circumsphere(points: &[Vec<f64>], boundary: &[usize]) -> (Vec<f64>, f64) {
    let dim = points[0].len();
    match boundary.len() {
        0 => (vec![0.0; dim], 0.0),
        1 => (points[boundary[0]].clone(), 0.0),
        k => {
            let base = &points[boundary[0]];
            let vs: Vec<Vec<f64>> = boundary[1..]
                .iter()
                .map(|&i| {
                    points[i]
                        .iter()
                        .zip(base)
                        .map(|(p, b)| p - b)
                        .collect::<Vec<f64>>()
                })
                .collect();
            let m = k - 1;
            let mut a = vec![0.0; m * m];
            let mut b = vec![0.0; m];
            for i in 0..m {
                for j in 0..m {
                    a[i * m + j] = 2.0 * dot(&vs[i], &vs[j]);
                }
                b[i] = dot(&vs[i], &vs[i]);
            }
            let t = solve_dense(a, b, m).expect("degenerate circumsphere support set");
            let mut center = base.clone();
            for (i, ti) in t.iter().enumerate() {
                for (c, v) in center.iter_mut().zip(&vs[i]) {
                    *c += ti * v;
                }
            }
            let r = dist(&center, base);
            (center, r)
        }
    }
}

fn welzl(points: &[Vec<f64>], n: usize, boundary: &mut Vec<usize>) -> (Vec<f64>, f64) {
    let dim = points[0].len();
    if n == 0 || boundary.len() == dim + 1 {
        return circumsphere(points, boundary);
    }
    let (c, r) = welzl(points, n - 1, boundary);
    if dist(&points[n - 1], &c) <= r + 1e-10 {
        return (c, r);
    }
    boundary.push(n - 1);
    let res = welzl(points, n - 1, boundary);
    boundary.pop();
    res
}

/// Minimal enclosing ball (Welzl's algorithm); exact for the small point
/// sets used in tests.
pub fn miniball(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let mut boundary = Vec::new();
    welzl(points, points.len(), &mut boundary)
}

/// Vertices of a regular unit-edge simplex in R^n, via the scaled standard
/// simplex of R^{n+1} expressed in an orthonormal basis of its affine hull.
pub fn regular_simplex(n: usize) -> Vec<Vec<f64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // Ambient points e_i / sqrt(2), pairwise distance exactly 1.
    let ambient: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            let mut v = vec![0.0; n + 1];
            v[i] = s;
            v
        })
        .collect();
    // Orthonormal basis of span{e_i - e_{n}} by Gram-Schmidt.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let mut v = vec![0.0; n + 1];
        v[i] = 1.0;
        v[n] = -1.0;
        for b in &basis {
            let c = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        normalize(&mut v);
        basis.push(v);
    }
    let origin = ambient[n].clone();
    ambient
        .iter()
        .map(|p| {
            let rel: Vec<f64> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
            basis.iter().map(|b| dot(&rel, b)).collect()
        })
        .collect()
}

/// Rejection-samples points of the cover from its first (bounding) ball.
pub fn sample_in_cover<R: Rng>(cover: &Cover, rng: &mut R, count: usize) -> Vec<Point> {
    let b = &cover.balls()[0];
    let dim = cover.dimension();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = random_unit(rng, dim);
        let r = b.radius() * rng.random_range(0.0f64..1.0).powf(1.0 / dim as f64);
        let x: Vec<f64> = b
            .center()
            .coords()
            .iter()
            .zip(&u)
            .map(|(c, ui)| c + r * ui)
            .collect();
        let p = Point::from(x);
        if cover.membership(&p).unwrap() {
            out.push(p);
        }
    }
    out
}

/// Random cover containing the origin with a comfortable margin: one to
/// three balls and up to four halfspaces.
pub fn random_cover<R: Rng>(rng: &mut R, dim: usize) -> Cover {
    let n_balls = rng.random_range(1..=3);
    let mut balls = Vec::new();
    for _ in 0..n_balls {
        let c: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.25..0.25)).collect();
        let r = rng.random_range(0.7..1.5);
        balls.push(Ball::new(Point::from(c), r).unwrap());
    }
    let n_hs = rng.random_range(0..=4);
    let mut hs = Vec::new();
    for _ in 0..n_hs {
        let n = random_unit(rng, dim);
        let off = rng.random_range(0.3..0.9);
        hs.push(Halfspace::new(n, off).unwrap());
    }
    Cover::new(dim, balls, hs, "random", Point::zero(dim)).unwrap()
}

/// Interior point of the cover with at least the requested margin, found
/// by rejection from the first ball.
pub fn sample_interior<R: Rng>(cover: &Cover, rng: &mut R, margin: f64) -> Point {
    loop {
        let p = sample_in_cover(cover, rng, 1).remove(0);
        if cover.interior_margin(p.coords()) >= margin {
            return p;
        }
    }
}
