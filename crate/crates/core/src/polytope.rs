//! Circumscribed polytopes and certified upper bounds.
//!
//! Vertex enumeration runs through the point duality about an interior
//! witness: halfspaces map to dual points, dual hull facets map back to
//! primal vertices.  A circumscribed polytope of a two-ball cover is built
//! from tangent halfspaces at ray-cast boundary points on a hypercube
//! boundary grid of directions; intersecting it with the facet cones of a
//! direction system yields the per-part polytopes whose exact vertex-set
//! diameters certify the upper bound.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, Cover, Halfspace, Point};
use crate::hull;
use crate::linalg;
use crate::partition::{cone_halfspaces, DirectionSystem};

/// Dual-facet offsets at or below this threshold flag an unbounded
/// intersection (the matching primal vertex would sit beyond 1e7).
const BOUNDED_OFFSET_MIN: f64 = 1e-7;
/// Vertex deduplication radius.
const VERTEX_DEDUP_TOL: f64 = 1e-9;

/// A bounded halfspace intersection with enumerated vertices.
///
/// The stored halfspaces are the facet-defining (essential) ones discovered
/// during enumeration; `incidence[v]` lists the halfspace indices active at
/// vertex `v`.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Point>,
    incidence: Vec<Vec<usize>>,
}

impl Polytope {
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.eval(x) <= tol)
    }

    /// Support function `max_x <u, x>` over the polytope.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| linalg::dot(u, v.coords()))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Exact diameter over the vertex set.
    pub fn diameter(&self) -> Result<(f64, (usize, usize))> {
        geometry::diameter(&self.vertices)
    }

    /// Checks the structural invariants: at least one vertex, every vertex
    /// inside every stored halfspace within 1e-9 and on at least `dim`
    /// facet hyperplanes within 1e-7.
    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyIntersection);
        }
        for (vi, v) in self.vertices.iter().enumerate() {
            let mut active = 0;
            for h in &self.halfspaces {
                let e = h.eval(v.coords());
                if e > 1e-9 {
                    return Err(Error::Degenerate(format!(
                        "vertex {vi} violates a facet halfspace by {e:.3e}"
                    )));
                }
                if e.abs() <= 1e-7 {
                    active += 1;
                }
            }
            if active < self.dim {
                return Err(Error::Degenerate(format!(
                    "vertex {vi} lies on only {active} facet hyperplanes"
                )));
            }
        }
        Ok(())
    }
}

/// All points of the grid `{0, 1/m, ..., 1}^n` having at least one
/// coordinate in `{0, 1}`; exactly `(m+1)^n - (m-1)^n` points, emitted in
/// lexicographic order of their index tuples.
pub fn hypercube_boundary_grid(n: usize, m: usize) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "boundary grid needs dimension >= 2".into(),
        ));
    }
    if m < 1 {
        return Err(Error::InvalidArgument(
            "boundary grid needs subdivision >= 1".into(),
        ));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        if idx.iter().any(|&i| i == 0 || i == m) {
            out.push(Point::from(
                idx.iter().map(|&i| i as f64 / m as f64).collect::<Vec<_>>(),
            ));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if idx[k] < m {
                idx[k] += 1;
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Finds a strictly interior point of a halfspace intersection by hill
/// climbing on the minimum slack.  Good enough for well-conditioned bounded
/// systems; callers with a known witness should pass it directly to
/// [`enumerate_polytope`].
pub fn find_interior_point(halfspaces: &[Halfspace]) -> Result<Vec<f64>> {
    if halfspaces.is_empty() {
        return Err(Error::InvalidArgument("no halfspaces given".into()));
    }
    let dim = halfspaces[0].dim();
    let scale = halfspaces
        .iter()
        .map(|h| h.offset().abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let min_slack = |x: &[f64]| -> f64 {
        halfspaces
            .iter()
            .map(|h| -h.eval(x))
            .fold(f64::INFINITY, f64::min)
    };
    let mut x = vec![0.0; dim];
    let mut best = min_slack(&x);
    let mut step = 0.25 * scale;
    let mut g = vec![0.0; dim];
    for _ in 0..4000 {
        if best > 0.05 * scale {
            break;
        }
        // Supergradient of the min slack: mean normal of the near-active set.
        let band = best + 1e-9 + 0.05 * best.abs();
        for v in g.iter_mut() {
            *v = 0.0;
        }
        let mut count = 0;
        for h in halfspaces {
            if -h.eval(&x) <= band {
                for (gi, ni) in g.iter_mut().zip(h.normal()) {
                    *gi += ni;
                }
                count += 1;
            }
        }
        if count == 0 {
            break;
        }
        if linalg::normalize(&mut g) < 1e-14 {
            break;
        }
        let cand = linalg::add_scaled(&x, -step, &g);
        let s = min_slack(&cand);
        if s > best {
            x = cand;
            best = s;
            step *= 1.3;
        } else {
            step *= 0.5;
            if step < 1e-15 * scale {
                break;
            }
        }
    }
    if best < geometry::INTERIOR_MARGIN {
        return Err(Error::EmptyIntersection);
    }
    Ok(x)
}

/// Vertex-enumerates the intersection of `halfspaces` around a strictly
/// interior witness (slack at least 1e-9 required).
pub fn enumerate_polytope(halfspaces: &[Halfspace], witness: &[f64]) -> Result<Polytope> {
    if halfspaces.is_empty() {
        return Err(Error::InvalidArgument("no halfspaces given".into()));
    }
    let dim = halfspaces[0].dim();
    if witness.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: witness.len(),
        });
    }
    let mut dual = Vec::with_capacity(halfspaces.len() * dim);
    for h in halfspaces {
        if h.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: h.dim(),
            });
        }
        let slack = -h.eval(witness);
        if slack < geometry::INTERIOR_MARGIN {
            return Err(Error::NotInterior {
                margin: slack,
                required: geometry::INTERIOR_MARGIN,
            });
        }
        dual.extend(h.normal().iter().map(|n| n / slack));
    }
    let facets = hull::convex_hull_facets(&dual, dim).map_err(|e| match e {
        // A lower-dimensional (or too small) dual point set means the
        // normals miss a direction entirely, so the primal intersection
        // is unbounded.
        Error::Degenerate(_) | Error::TooFewPoints { .. } => Error::Unbounded,
        other => other,
    })?;
    // Primal vertex of each dual facet plane <nu, q> = c is witness + nu/c.
    let mut cand = Vec::with_capacity(facets.len() * dim);
    for f in &facets {
        if f.offset <= BOUNDED_OFFSET_MIN {
            return Err(Error::Unbounded);
        }
        for k in 0..dim {
            cand.push(witness[k] + f.normal[k] / f.offset);
        }
    }
    let clusters = cluster_points(&cand, dim, VERTEX_DEDUP_TOL);
    // Representative vertex and active halfspace set per cluster.
    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(clusters.len());
    let mut incidence_orig: Vec<Vec<usize>> = Vec::with_capacity(clusters.len());
    for members in &clusters {
        let mut rep = vec![0.0; dim];
        let mut act: Vec<usize> = Vec::new();
        for &fi in members {
            for k in 0..dim {
                rep[k] += cand[fi * dim + k];
            }
            act.extend(facets[fi].vertices.iter().map(|&v| v as usize));
        }
        for r in rep.iter_mut() {
            *r /= members.len() as f64;
        }
        act.sort_unstable();
        act.dedup();
        verts.push(rep);
        incidence_orig.push(act);
    }
    // Essential halfspaces are exactly the dual hull vertices.
    let mut essential: Vec<usize> = incidence_orig.iter().flatten().copied().collect();
    essential.sort_unstable();
    essential.dedup();
    let mut remap = vec![usize::MAX; halfspaces.len()];
    for (new, &orig) in essential.iter().enumerate() {
        remap[orig] = new;
    }
    // Deterministic vertex order: lexicographic.
    let mut order: Vec<usize> = (0..verts.len()).collect();
    order.sort_by(|&a, &b| {
        for (x, y) in verts[a].iter().zip(&verts[b]) {
            match x.partial_cmp(y).unwrap() {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    let mut vertices = Vec::with_capacity(order.len());
    let mut incidence = Vec::with_capacity(order.len());
    for &i in &order {
        vertices.push(Point::from(verts[i].clone()));
        incidence.push(incidence_orig[i].iter().map(|&o| remap[o]).collect());
    }
    Ok(Polytope {
        dim,
        halfspaces: essential.iter().map(|&i| halfspaces[i].clone()).collect(),
        vertices,
        incidence,
    })
}

/// Vertices of a bounded, full-dimensional halfspace intersection in
/// deterministic (lexicographic) order.
pub fn vertex_enumeration(halfspaces: &[Halfspace]) -> Result<Vec<Point>> {
    let witness = find_interior_point(halfspaces)?;
    Ok(enumerate_polytope(halfspaces, &witness)?.vertices)
}

/// Single-linkage clustering of points within `tol`, deterministic.
fn cluster_points(flat: &[f64], dim: usize, tol: f64) -> Vec<Vec<usize>> {
    let k = flat.len() / dim;
    let mut order: Vec<u32> = (0..k as u32).collect();
    order.sort_by(|&a, &b| {
        let pa = &flat[a as usize * dim..(a as usize + 1) * dim];
        let pb = &flat[b as usize * dim..(b as usize + 1) * dim];
        for (x, y) in pa.iter().zip(pb) {
            match x.partial_cmp(y).unwrap() {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    // Position of each point in the x0-sorted order for window lookups.
    let tol_sq = tol * tol;
    let mut assigned = vec![false; k];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for oi in 0..k {
        let seed = order[oi] as usize;
        if assigned[seed] {
            continue;
        }
        let mut members = vec![seed];
        assigned[seed] = true;
        let mut head = 0;
        while head < members.len() {
            let t = members[head];
            head += 1;
            let tx = flat[t * dim];
            // Window in the sorted order with x0 within tol of t.
            let lo = order.partition_point(|&c| flat[c as usize * dim] < tx - tol);
            for &c in &order[lo..] {
                let ci = c as usize;
                if flat[ci * dim] > tx + tol {
                    break;
                }
                if assigned[ci] {
                    continue;
                }
                if linalg::dist_sq(
                    &flat[t * dim..(t + 1) * dim],
                    &flat[ci * dim..(ci + 1) * dim],
                ) <= tol_sq
                {
                    assigned[ci] = true;
                    members.push(ci);
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }
    clusters
}

/// Circumscribed polytope of a two-ball cover.
///
/// Grid directions are taken from the hypercube boundary grid recentred at
/// the first ball's center `c0`; rays from `c0` are cast to the lens
/// boundary and the tangent halfspace of each active ball is collected at
/// every exit point (both when the exit lies on the intersection sphere).
/// The cover's own truncation halfspaces are appended, near-duplicate
/// planes merged at 1e-10, and the intersection enumerated.
pub fn circumscribe(cover: &Cover, m: usize) -> Result<Polytope> {
    if cover.balls().len() != 2 {
        return Err(Error::InvalidArgument(
            "circumscribe expects a two-ball cover".into(),
        ));
    }
    if m < 1 {
        return Err(Error::InvalidArgument("grid parameter must be >= 1".into()));
    }
    let dim = cover.dimension();
    let lens = Cover::new(
        dim,
        cover.balls().to_vec(),
        vec![],
        cover.label().to_string(),
        cover.balls()[0].center().clone(),
    )?;
    let c0 = cover.balls()[0].center().coords();
    let grid = hypercube_boundary_grid(dim, m)?;
    let mut tangents: Vec<Halfspace> = Vec::with_capacity(grid.len() + 4);
    let mut d = vec![0.0; dim];
    for p in &grid {
        for k in 0..dim {
            d[k] = p.coords()[k] - 0.5;
        }
        if linalg::normalize(&mut d) < 1e-12 {
            continue; // center excluded from the grid by construction
        }
        let t = geometry::ray_exit_unchecked(&lens, c0, &d)?;
        let q = linalg::add_scaled(c0, t, &d);
        for b in cover.balls() {
            if b.slack(&q).abs() <= 1e-9 {
                let mut n = linalg::sub(&q, b.center().coords());
                linalg::normalize(&mut n);
                let off = linalg::dot(&n, &q);
                tangents.push(Halfspace::new(n, off)?);
            }
        }
    }
    dedup_halfspaces(&mut tangents, 1e-10);
    tangents.extend(cover.halfspaces().iter().cloned());
    enumerate_polytope(&tangents, cover.witness().coords())
}

/// Sorts and merges near-identical halfspaces (normal and offset within
/// `tol` component-wise).
fn dedup_halfspaces(hs: &mut Vec<Halfspace>, tol: f64) {
    hs.sort_by(|a, b| {
        for (x, y) in a.normal().iter().zip(b.normal()) {
            match x.partial_cmp(y).unwrap() {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        a.offset().partial_cmp(&b.offset()).unwrap()
    });
    hs.dedup_by(|a, b| {
        (a.offset() - b.offset()).abs() <= tol
            && a.normal()
                .iter()
                .zip(b.normal())
                .all(|(x, y)| (x - y).abs() <= tol)
    });
}

/// Per-part upper-bound summary.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperBoundReport {
    pub part_diameters: Vec<f64>,
    pub max_diameter: f64,
    pub grid_m: usize,
    pub vertex_counts: Vec<usize>,
}

/// Reusable circumscribed polytope of a cover at one grid resolution.
///
/// The polytope depends only on `(cover, m)`, so search loops build the
/// context once and evaluate many direction systems against it.
#[derive(Debug, Clone)]
pub struct UpperBoundContext {
    grid_m: usize,
    polytope: Polytope,
    facet_vertices: Vec<Vec<u32>>,
}

impl UpperBoundContext {
    pub fn new(cover: &Cover, m: usize) -> Result<Self> {
        let polytope = circumscribe(cover, m)?;
        let facet_vertices = invert_incidence(&polytope);
        Ok(UpperBoundContext {
            grid_m: m,
            polytope,
            facet_vertices,
        })
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn grid_m(&self) -> usize {
        self.grid_m
    }
}

fn invert_incidence(p: &Polytope) -> Vec<Vec<u32>> {
    let mut fv = vec![Vec::new(); p.halfspaces.len()];
    for (vi, act) in p.incidence.iter().enumerate() {
        for &h in act {
            fv[h].push(vi as u32);
        }
    }
    fv
}

/// Intersections of the circumscribed polytope with every facet cone of
/// the direction system, each vertex-enumerated.
pub fn part_polytopes(ph: &Polytope, ds: &DirectionSystem) -> Result<Vec<Polytope>> {
    let fv = invert_incidence(ph);
    (0..ds.part_count())
        .map(|i| build_part(ph, &fv, ds, i))
        .collect()
}

fn build_part(
    ph: &Polytope,
    facet_vertices: &[Vec<u32>],
    ds: &DirectionSystem,
    part: usize,
) -> Result<Polytope> {
    let dim = ph.dim;
    let w = ds.apex().coords();
    let cones = cone_halfspaces(ds, part)?;
    // A facet of the outer polytope cannot support the part when all of its
    // vertices lie strictly beyond one cone plane; dropping it can only
    // enlarge the part, which keeps the upper bound valid.
    let mut keep = vec![true; ph.halfspaces.len()];
    let mut outside = vec![false; ph.vertices.len()];
    for cone in &cones {
        for (vi, v) in ph.vertices.iter().enumerate() {
            outside[vi] = cone.eval(v.coords()) > 1e-12;
        }
        for (hi, verts) in facet_vertices.iter().enumerate() {
            if keep[hi] && !verts.is_empty() && verts.iter().all(|&v| outside[v as usize]) {
                keep[hi] = false;
            }
        }
    }
    let mut hs: Vec<Halfspace> = ph
        .halfspaces
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(h, _)| h.clone())
        .collect();
    hs.extend(cones.iter().cloned());
    // Interior witness: step from the apex along the cone's central
    // direction, far enough from the apex for cone slack and short of the
    // outer boundary for polytope slack.
    let facet = &ds.facets()[part];
    let mut axis = vec![0.0; dim];
    for &j in facet {
        for (a, d) in axis.iter_mut().zip(&ds.directions()[j]) {
            *a += d;
        }
    }
    if linalg::normalize(&mut axis) < 1e-12 {
        return Err(Error::EmptyPart(part));
    }
    let mut t_exit = f64::INFINITY;
    for h in &ph.halfspaces {
        let nd = linalg::dot(h.normal(), &axis);
        if nd > 0.0 {
            t_exit = t_exit.min(-h.eval(w) / nd);
        }
    }
    if !t_exit.is_finite() || t_exit <= 0.0 {
        return Err(Error::EmptyPart(part));
    }
    let mut witness = None;
    let mut t = 0.5 * t_exit;
    for _ in 0..24 {
        let cand = linalg::add_scaled(w, t, &axis);
        let slack = hs
            .iter()
            .map(|h| -h.eval(&cand))
            .fold(f64::INFINITY, f64::min);
        if slack >= geometry::INTERIOR_MARGIN {
            witness = Some(cand);
            break;
        }
        t *= 0.5;
    }
    let Some(witness) = witness else {
        return Err(Error::EmptyPart(part));
    };
    enumerate_polytope(&hs, &witness).map_err(|e| match e {
        Error::NotInterior { .. } | Error::EmptyIntersection => Error::EmptyPart(part),
        other => other,
    })
}

/// Upper-bound objective against a prebuilt circumscribed polytope.
pub fn objective_upper_with(
    ctx: &UpperBoundContext,
    ds: &DirectionSystem,
) -> Result<UpperBoundReport> {
    let parts: Vec<Result<Polytope>> = (0..ds.part_count())
        .into_par_iter()
        .map(|i| build_part(&ctx.polytope, &ctx.facet_vertices, ds, i))
        .collect();
    let mut part_diameters = Vec::with_capacity(parts.len());
    let mut vertex_counts = Vec::with_capacity(parts.len());
    for p in parts {
        let p = p?;
        if p.vertices.len() < 2 {
            return Err(Error::EmptyIntersection);
        }
        part_diameters.push(p.diameter()?.0);
        vertex_counts.push(p.vertices.len());
    }
    let max_diameter = part_diameters
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(UpperBoundReport {
        part_diameters,
        max_diameter,
        grid_m: ctx.grid_m,
        vertex_counts,
    })
}

/// The circumscribed upper-bound objective: max part polytope diameter.
pub fn objective_upper(cover: &Cover, ds: &DirectionSystem, m: usize) -> Result<UpperBoundReport> {
    let ctx = UpperBoundContext::new(cover, m)?;
    objective_upper_with(&ctx, ds)
}
