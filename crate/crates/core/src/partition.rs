//! Direction systems and cone-induced partitions of a cover.
//!
//! A direction system is an apex inside the cover plus a family of unit
//! directions grouped into facet index sets.  The cone from the apex over
//! each facet's directions cuts the cover into parts; the parts tile the
//! cover because the facet cones tile space.  In rigid mode the directions
//! are a stored rotation applied to a fixed combinatorial template, which
//! guarantees the tiling by construction; free mode carries arbitrary unit
//! directions and must pass [`fan_valid`] before being trusted.

use crate::error::{Error, Result};
use crate::geometry::{self, Cover, Halfspace, Point, Rotation, INTERIOR_MARGIN, UNIT_TOL};
use crate::hull;
use crate::linalg;

/// Combinatorial templates for the direction family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateKind {
    /// 16 normalized hypercube vertices in R^4, 8 facet families of 8.
    Hypercube,
    /// 6 hexagon directions in R^2, 3 overlapping arcs of 3.
    Hexagon,
}

impl TemplateKind {
    pub fn dimension(self) -> usize {
        match self {
            TemplateKind::Hypercube => 4,
            TemplateKind::Hexagon => 2,
        }
    }

    pub fn for_dimension(dim: usize) -> Result<TemplateKind> {
        match dim {
            4 => Ok(TemplateKind::Hypercube),
            2 => Ok(TemplateKind::Hexagon),
            _ => Err(Error::InvalidArgument(format!(
                "no direction template for dimension {dim}"
            ))),
        }
    }

    pub fn template(self) -> DirectionTemplate {
        match self {
            TemplateKind::Hypercube => hypercube_directions(),
            TemplateKind::Hexagon => hexagon_directions(),
        }
    }
}

/// Unit directions plus facet index families.
#[derive(Debug, Clone)]
pub struct DirectionTemplate {
    pub dim: usize,
    pub directions: Vec<Vec<f64>>,
    pub facets: Vec<Vec<usize>>,
}

/// The sixteen normalized vertices of `{-1,1}^4` in lexicographic order
/// (coordinates `±1/2`), with facet family `2j` selecting the vertices
/// whose coordinate `j` is negative and `2j + 1` those where it is
/// positive.
pub fn hypercube_directions() -> DirectionTemplate {
    let mut directions = Vec::with_capacity(16);
    for i in 0..16usize {
        let mut d = vec![0.0; 4];
        for (j, dj) in d.iter_mut().enumerate() {
            *dj = if (i >> (3 - j)) & 1 == 1 { 0.5 } else { -0.5 };
        }
        directions.push(d);
    }
    let mut facets = Vec::with_capacity(8);
    for j in 0..4usize {
        for bit in [0usize, 1] {
            let f: Vec<usize> = (0..16).filter(|i| (i >> (3 - j)) & 1 == bit).collect();
            facets.push(f);
        }
    }
    DirectionTemplate {
        dim: 4,
        directions,
        facets,
    }
}

/// Six directions at angles `2 pi k / 6` with arcs `{2j, 2j+1, 2j+2 mod 6}`
/// as the planar analogue of the hypercube system (three 120-degree cones).
pub fn hexagon_directions() -> DirectionTemplate {
    let directions: Vec<Vec<f64>> = (0..6)
        .map(|k| {
            let a = std::f64::consts::PI * (k as f64) / 3.0;
            vec![a.cos(), a.sin()]
        })
        .collect();
    let facets = (0..3)
        .map(|j| vec![2 * j, 2 * j + 1, (2 * j + 2) % 6])
        .collect();
    DirectionTemplate {
        dim: 2,
        directions,
        facets,
    }
}

/// How the directions of a system are constrained.
#[derive(Debug, Clone)]
pub enum Mode {
    /// Directions are `rotation` applied to the template of `kind`.
    Rigid {
        kind: TemplateKind,
        rotation: Rotation,
    },
    /// Arbitrary unit directions on the template combinatorics.
    Free,
}

/// Apex plus unit directions plus facet families.
#[derive(Debug, Clone)]
pub struct DirectionSystem {
    apex: Point,
    directions: Vec<Vec<f64>>,
    facets: Vec<Vec<usize>>,
    mode: Mode,
}

impl DirectionSystem {
    /// Rigid system: template directions rotated by `rotation`, apex
    /// strictly interior to `cover`.
    pub fn rigid(
        kind: TemplateKind,
        rotation: Rotation,
        apex: Point,
        cover: &Cover,
    ) -> Result<Self> {
        let dim = kind.dimension();
        if cover.dimension() != dim || rotation.dim() != dim || apex.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: cover.dimension(),
            });
        }
        let margin = cover.interior_margin(apex.coords());
        if margin < INTERIOR_MARGIN {
            return Err(Error::NotInterior {
                margin,
                required: INTERIOR_MARGIN,
            });
        }
        let tpl = kind.template();
        let directions = tpl.directions.iter().map(|d| rotation.apply(d)).collect();
        Ok(DirectionSystem {
            apex,
            directions,
            facets: tpl.facets,
            mode: Mode::Rigid { kind, rotation },
        })
    }

    /// Free system on the canonical combinatorics of the cover dimension.
    pub fn free(apex: Point, directions: Vec<Vec<f64>>, cover: &Cover) -> Result<Self> {
        let kind = TemplateKind::for_dimension(cover.dimension())?;
        let tpl = kind.template();
        if directions.len() != tpl.directions.len() {
            return Err(Error::InvalidArgument(format!(
                "free system needs {} directions, got {}",
                tpl.directions.len(),
                directions.len()
            )));
        }
        for d in &directions {
            if d.len() != tpl.dim {
                return Err(Error::DimensionMismatch {
                    expected: tpl.dim,
                    got: d.len(),
                });
            }
            if (linalg::norm(d) - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidArgument(
                    "free directions must be unit vectors".into(),
                ));
            }
        }
        let margin = cover.interior_margin(apex.coords());
        if margin < INTERIOR_MARGIN {
            return Err(Error::NotInterior {
                margin,
                required: INTERIOR_MARGIN,
            });
        }
        Ok(DirectionSystem {
            apex,
            directions,
            facets: tpl.facets,
            mode: Mode::Free,
        })
    }

    pub fn dim(&self) -> usize {
        self.apex.dim()
    }

    pub fn apex(&self) -> &Point {
        &self.apex
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn part_count(&self) -> usize {
        self.facets.len()
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn is_rigid(&self) -> bool {
        matches!(self.mode, Mode::Rigid { .. })
    }

    pub fn rotation(&self) -> Option<&Rotation> {
        match &self.mode {
            Mode::Rigid { rotation, .. } => Some(rotation),
            Mode::Free => None,
        }
    }

    /// Image under the isometry `x -> R x + shift`.
    pub fn transformed(&self, r: &Rotation, shift: &[f64]) -> DirectionSystem {
        let mut apex = r.apply(self.apex.coords());
        for (a, s) in apex.iter_mut().zip(shift) {
            *a += s;
        }
        let directions = self.directions.iter().map(|d| r.apply(d)).collect();
        let mode = match &self.mode {
            Mode::Rigid { kind, rotation } => Mode::Rigid {
                kind: *kind,
                rotation: r.compose(rotation),
            },
            Mode::Free => Mode::Free,
        };
        DirectionSystem {
            apex: Point::from(apex),
            directions,
            facets: self.facets.clone(),
            mode,
        }
    }
}

/// Ray exit points of all directions from the apex, with a convexity check
/// that the apex lies in the hull of the exits.
pub fn boundary_points(cover: &Cover, ds: &DirectionSystem) -> Result<Vec<Point>> {
    let w = ds.apex();
    let margin = cover.interior_margin(w.coords());
    if margin < INTERIOR_MARGIN {
        return Err(Error::NotInterior {
            margin,
            required: INTERIOR_MARGIN,
        });
    }
    let dim = cover.dimension();
    let mut flat = Vec::with_capacity(ds.directions().len() * dim);
    let mut pts = Vec::with_capacity(ds.directions().len());
    for d in ds.directions() {
        let t = geometry::ray_exit_unchecked(cover, w.coords(), d)?;
        let x = linalg::add_scaled(w.coords(), t, d);
        flat.extend_from_slice(&x);
        pts.push(Point::from(x));
    }
    // The apex must lie in the convex hull of the exit points.
    let facets = hull::convex_hull_facets(&flat, dim)?;
    for f in &facets {
        if linalg::dot(&f.normal, w.coords()) - f.offset > 1e-9 {
            return Err(Error::Degenerate(
                "apex escapes the hull of its boundary points".into(),
            ));
        }
    }
    Ok(pts)
}

/// Part index of `x` for a rigid system: scan the facet cones in order and
/// return the first containing the apex-relative coordinates (ties at cone
/// boundaries therefore resolve to the smallest facet index).
pub fn assign_part(x: &Point, ds: &DirectionSystem) -> Result<usize> {
    let Mode::Rigid { kind, rotation } = &ds.mode else {
        return Err(Error::InvalidArgument(
            "assign_part needs a rigid system; use cone_halfspaces for free systems".into(),
        ));
    };
    if x.dim() != ds.dim() {
        return Err(Error::DimensionMismatch {
            expected: ds.dim(),
            got: x.dim(),
        });
    }
    let rel = linalg::sub(x.coords(), ds.apex.coords());
    let y = rotation.apply_transpose(&rel);
    match kind {
        TemplateKind::Hypercube => {
            for f in 0..8usize {
                let j = f / 2;
                let s = if f % 2 == 0 { -1.0 } else { 1.0 };
                let v = s * y[j];
                if y.iter().all(|&yk| v >= yk.abs()) {
                    return Ok(f);
                }
            }
            unreachable!("the dominant coordinate always defines a cone");
        }
        TemplateKind::Hexagon => {
            let tpl = hexagon_directions();
            let cross = |a: &[f64], b: &[f64]| a[0] * b[1] - a[1] * b[0];
            for j in 0..3usize {
                let a = &tpl.directions[2 * j];
                let b = &tpl.directions[(2 * j + 2) % 6];
                if cross(a, &y) >= 0.0 && cross(&y, b) >= 0.0 {
                    return Ok(j);
                }
            }
            unreachable!("the three arcs tile the plane");
        }
    }
}

/// Facet halfspaces of the cone from the apex over facet `i`'s directions,
/// each passing through the apex, by hull facet enumeration of the
/// direction set augmented with the origin.
pub fn cone_halfspaces(ds: &DirectionSystem, i: usize) -> Result<Vec<Halfspace>> {
    let facet = ds
        .facets
        .get(i)
        .ok_or_else(|| Error::InvalidArgument(format!("facet index {i} out of range")))?;
    let dim = ds.dim();
    let mut flat = vec![0.0; dim]; // origin gets id 0
    for &j in facet {
        flat.extend_from_slice(&ds.directions[j]);
    }
    let facets = hull::convex_hull_facets(&flat, dim).map_err(|e| match e {
        Error::Degenerate(_) => {
            Error::Degenerate("facet directions do not span a full-dimensional cone".into())
        }
        other => other,
    })?;
    let merged = hull::merge_coplanar(&facets, 1e-9);
    let w = ds.apex.coords();
    let mut out = Vec::new();
    for m in merged {
        if m.offset.abs() <= 1e-9 && m.vertices.contains(&0) {
            out.push(Halfspace::new(m.normal.clone(), linalg::dot(&m.normal, w))?);
        }
    }
    if out.is_empty() {
        return Err(Error::Degenerate("cone is not pointed".into()));
    }
    Ok(out)
}

/// Inscribed point sample of one part: apex, ray exits of the facet
/// directions, and exits of the normalized theta-blends of all direction
/// pairs with `theta_r = r / (m + 1)`.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub part: usize,
    pub grid_m: usize,
    pub points: Vec<Point>,
}

pub fn lower_sample(cover: &Cover, ds: &DirectionSystem, i: usize, m: usize) -> Result<SampleSet> {
    let facet = ds
        .facets
        .get(i)
        .ok_or_else(|| Error::InvalidArgument(format!("facet index {i} out of range")))?;
    let w = ds.apex();
    let margin = cover.interior_margin(w.coords());
    if margin < INTERIOR_MARGIN {
        return Err(Error::NotInterior {
            margin,
            required: INTERIOR_MARGIN,
        });
    }
    let mut points = Vec::with_capacity(1 + facet.len() + facet.len() * (facet.len() - 1) / 2 * m);
    points.push(w.clone());
    for &p in facet {
        let t = geometry::ray_exit_unchecked(cover, w.coords(), &ds.directions[p])?;
        points.push(Point::from(linalg::add_scaled(
            w.coords(),
            t,
            &ds.directions[p],
        )));
    }
    let mut blend = vec![0.0; cover.dimension()];
    for (a, &p) in facet.iter().enumerate() {
        for &q in facet.iter().skip(a + 1) {
            for r in 1..=m {
                let theta = r as f64 / (m as f64 + 1.0);
                for (bi, (dp, dq)) in blend
                    .iter_mut()
                    .zip(ds.directions[p].iter().zip(&ds.directions[q]))
                {
                    *bi = theta * dp + (1.0 - theta) * dq;
                }
                let n = linalg::normalize(&mut blend);
                if n < 1e-6 {
                    return Err(Error::Degenerate(
                        "blend of near-antipodal directions vanished".into(),
                    ));
                }
                let t = geometry::ray_exit_unchecked(cover, w.coords(), &blend)?;
                points.push(Point::from(linalg::add_scaled(w.coords(), t, &blend)));
            }
        }
    }
    Ok(SampleSet {
        part: i,
        grid_m: m,
        points,
    })
}

/// Inscribed-sample diameter of each part.
pub fn lower_part_diameters(cover: &Cover, ds: &DirectionSystem, m: usize) -> Result<Vec<f64>> {
    let w = ds.apex();
    let margin = cover.interior_margin(w.coords());
    if margin < INTERIOR_MARGIN {
        return Err(Error::NotInterior {
            margin,
            required: INTERIOR_MARGIN,
        });
    }
    let dim = cover.dimension();
    // Boundary exits are shared by every facet containing the direction.
    let mut exits = Vec::with_capacity(ds.directions.len() * dim);
    for d in &ds.directions {
        let t = geometry::ray_exit_unchecked(cover, w.coords(), d)?;
        exits.extend_from_slice(&linalg::add_scaled(w.coords(), t, d));
    }
    let mut diams = Vec::with_capacity(ds.part_count());
    let mut flat: Vec<f64> = Vec::new();
    let mut blend = vec![0.0; dim];
    for facet in &ds.facets {
        flat.clear();
        flat.extend_from_slice(w.coords());
        for &p in facet {
            flat.extend_from_slice(&exits[p * dim..(p + 1) * dim]);
        }
        for (a, &p) in facet.iter().enumerate() {
            for &q in facet.iter().skip(a + 1) {
                for r in 1..=m {
                    let theta = r as f64 / (m as f64 + 1.0);
                    for (bi, (dp, dq)) in blend
                        .iter_mut()
                        .zip(ds.directions[p].iter().zip(&ds.directions[q]))
                    {
                        *bi = theta * dp + (1.0 - theta) * dq;
                    }
                    let n = linalg::normalize(&mut blend);
                    if n < 1e-6 {
                        return Err(Error::Degenerate(
                            "blend of near-antipodal directions vanished".into(),
                        ));
                    }
                    let t = geometry::ray_exit_unchecked(cover, w.coords(), &blend)?;
                    for (k, b) in blend.iter().enumerate() {
                        flat.push(w.coords()[k] + t * b);
                    }
                }
            }
        }
        diams.push(geometry::diameter_flat(&flat, dim));
    }
    Ok(diams)
}

/// The inscribed lower-bound objective: max part sample diameter.
pub fn objective_lower(cover: &Cover, ds: &DirectionSystem, m: usize) -> Result<f64> {
    Ok(lower_part_diameters(cover, ds, m)?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Checks that the facet cones jointly cover all of space by testing
/// `samples` seeded random unit directions against the cone halfspaces.
/// Rigid systems tile by construction but are checked the same way.
pub fn fan_valid(ds: &DirectionSystem, samples: usize, seed: u64) -> Result<bool> {
    use rand::{Rng, SeedableRng};
    let dim = ds.dim();
    let cones: Vec<Vec<Halfspace>> = (0..ds.part_count())
        .map(|i| cone_halfspaces(ds, i))
        .collect::<Result<_>>()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut v = vec![0.0; dim];
    for _ in 0..samples {
        for x in v.iter_mut() {
            *x = rng.sample(rand_distr::StandardNormal);
        }
        linalg::normalize(&mut v);
        let covered = cones
            .iter()
            .any(|cone| cone.iter().all(|h| linalg::dot(h.normal(), &v) <= 1e-9));
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers;
    use crate::geometry::Ball;

    fn unit_ball_cover(dim: usize) -> Cover {
        Cover::new(
            dim,
            vec![Ball::new(Point::zero(dim), 1.0).unwrap()],
            vec![],
            "ball",
            Point::zero(dim),
        )
        .unwrap()
    }

    #[test]
    fn hypercube_template_combinatorics() {
        let tpl = hypercube_directions();
        assert_eq!(tpl.directions.len(), 16);
        for d in &tpl.directions {
            assert!((linalg::norm(d) - 1.0).abs() < 1e-15);
            assert!(d.iter().all(|&x| x.abs() == 0.5));
        }
        assert_eq!(tpl.facets.len(), 8);
        for f in &tpl.facets {
            assert_eq!(f.len(), 8);
        }
        // Opposite facets partition the index set.
        for j in 0..4 {
            let a = &tpl.facets[2 * j];
            let b = &tpl.facets[2 * j + 1];
            let mut joined: Vec<usize> = a.iter().chain(b).copied().collect();
            joined.sort_unstable();
            assert_eq!(joined, (0..16).collect::<Vec<_>>());
            assert!(a.iter().all(|i| !b.contains(i)));
        }
        // Every direction lies in exactly 4 facets.
        for i in 0..16 {
            let count = tpl.facets.iter().filter(|f| f.contains(&i)).count();
            assert_eq!(count, 4);
        }
    }

    #[test]
    fn hexagon_template_combinatorics() {
        let tpl = hexagon_directions();
        assert_eq!(tpl.directions.len(), 6);
        assert_eq!(tpl.facets.len(), 3);
        for f in &tpl.facets {
            assert_eq!(f.len(), 3);
        }
        for i in 0..6 {
            let count = tpl.facets.iter().filter(|f| f.contains(&i)).count();
            assert_eq!(count, if i % 2 == 0 { 2 } else { 1 });
        }
    }

    #[test]
    fn boundary_points_on_unit_ball_are_apex_plus_direction() {
        let cover = unit_ball_cover(4);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hypercube,
            Rotation::identity(4),
            Point::zero(4),
            &cover,
        )
        .unwrap();
        let pts = boundary_points(&cover, &ds).unwrap();
        assert_eq!(pts.len(), 16);
        for (p, d) in pts.iter().zip(ds.directions()) {
            for k in 0..4 {
                assert!((p.coords()[k] - d[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn assign_part_dominant_coordinate() {
        let cover = unit_ball_cover(4);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hypercube,
            Rotation::identity(4),
            Point::zero(4),
            &cover,
        )
        .unwrap();
        // Dominant +coordinate-0 selects the positive facet of axis 0.
        let x = Point::from(vec![1.0, 0.2, -0.1, 0.0]);
        assert_eq!(assign_part(&x, &ds).unwrap(), 1);
        // The apex itself lands on the first facet by tie-break.
        assert_eq!(assign_part(&Point::zero(4), &ds).unwrap(), 0);
        let x = Point::from(vec![-0.3, 0.1, 0.0, 0.25]);
        assert_eq!(assign_part(&x, &ds).unwrap(), 0);
    }

    #[test]
    fn cone_halfspaces_identity_rotation_matches_coordinate_cone() {
        let cover = unit_ball_cover(4);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hypercube,
            Rotation::identity(4),
            Point::zero(4),
            &cover,
        )
        .unwrap();
        // Facet 1 is { y : y_0 >= |y_k| }, cut by six planes y_k = +-y_0.
        let hs = cone_halfspaces(&ds, 1).unwrap();
        assert_eq!(hs.len(), 6);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut expected: Vec<Vec<f64>> = Vec::new();
        for k in 1..4 {
            for sign in [1.0, -1.0] {
                let mut n = vec![0.0; 4];
                n[0] = -s;
                n[k] = sign * s;
                expected.push(n);
            }
        }
        for e in &expected {
            assert!(
                hs.iter().any(
                    |h| h.normal().iter().zip(e).all(|(a, b)| (a - b).abs() < 1e-12)
                        && h.offset().abs() < 1e-12
                ),
                "missing cone plane {e:?}"
            );
        }
        // Apex satisfies every plane with equality.
        for h in &hs {
            assert!(h.eval(&[0.0; 4]).abs() < 1e-12);
        }
    }

    #[test]
    fn assign_part_agrees_with_cone_membership() {
        use rand::{Rng, SeedableRng};
        let cover = covers::build_ucs_r4().unwrap().elements.remove(0);
        let q = geometry::haar_orthogonal(3, 4);
        let ds =
            DirectionSystem::rigid(TemplateKind::Hypercube, q, cover.witness().clone(), &cover)
                .unwrap();
        let cones: Vec<Vec<Halfspace>> = (0..8).map(|i| cone_halfspaces(&ds, i).unwrap()).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 2000 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-0.7..0.7)).collect();
            if !cover.contains_slice(&x, 0.0) {
                continue;
            }
            checked += 1;
            let p = Point::from(x.clone());
            let part = assign_part(&p, &ds).unwrap();
            assert!(
                cones[part].iter().all(|h| h.eval(&x) <= 1e-9),
                "assigned part must contain the point"
            );
            let containing = (0..8)
                .filter(|&i| cones[i].iter().all(|h| h.eval(&x) <= 1e-9))
                .count();
            assert!(containing >= 1);
            let strict = (0..8)
                .filter(|&i| cones[i].iter().all(|h| h.eval(&x) < -1e-9))
                .count();
            assert!(strict <= 1, "interiors of distinct cones are disjoint");
        }
    }

    #[test]
    fn lower_sample_counts_and_membership() {
        let mut ucs = covers::build_ucs_r4().unwrap();
        let cover = ucs.elements.remove(2);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hypercube,
            geometry::haar_orthogonal(17, 4),
            cover.witness().clone(),
            &cover,
        )
        .unwrap();
        let s0 = lower_sample(&cover, &ds, 0, 0).unwrap();
        assert_eq!(s0.points.len(), 9);
        let s3 = lower_sample(&cover, &ds, 4, 3).unwrap();
        assert_eq!(s3.points.len(), 1 + 8 + 28 * 3);
        for p in &s3.points {
            assert!(
                cover.contains_slice(p.coords(), 1e-9),
                "sample point leaves the cover"
            );
        }
        assert_eq!(s3.points[0], ds.apex().clone());
    }

    #[test]
    fn theta_grid_values() {
        // m = 3 puts blend weights at 1/4, 1/2, 3/4; verify via the exits
        // along blends on the unit ball with two orthogonal directions.
        let m = 3usize;
        let thetas: Vec<f64> = (1..=m).map(|r| r as f64 / (m as f64 + 1.0)).collect();
        assert_eq!(thetas, vec![0.25, 0.5, 0.75]);
    }

    #[test]
    fn objective_lower_on_jung_ball() {
        let r4 = covers::jung_radius(4).unwrap();
        let cover = Cover::new(
            4,
            vec![Ball::new(Point::zero(4), r4).unwrap()],
            vec![],
            "jung",
            Point::zero(4),
        )
        .unwrap();
        let ds = DirectionSystem::rigid(
            TemplateKind::Hypercube,
            Rotation::identity(4),
            Point::zero(4),
            &cover,
        )
        .unwrap();
        let v = objective_lower(&cover, &ds, 5).unwrap();
        assert!(v > 0.0 && v <= 2.0 * r4 + 1e-12);
    }

    #[test]
    fn lower_objective_monotone_under_sample_inclusion() {
        let mut ucs = covers::build_ucs_r4().unwrap();
        let cover = ucs.elements.remove(0);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hypercube,
            geometry::haar_orthogonal(5, 4),
            cover.witness().clone(),
            &cover,
        )
        .unwrap();
        // The m = 0 sample is a subset of the m = 5 sample united with it,
        // and the diameter is monotone under set inclusion.
        for i in 0..8 {
            let small = lower_sample(&cover, &ds, i, 0).unwrap();
            let large = lower_sample(&cover, &ds, i, 5).unwrap();
            let mut union = large.points.clone();
            union.extend(small.points.iter().cloned());
            let d_small = geometry::diameter(&small.points).unwrap().0;
            let d_union = geometry::diameter(&union).unwrap().0;
            assert!(d_small <= d_union + 1e-15);
        }
    }

    #[test]
    fn free_mode_requires_cone_route_for_assignment() {
        let cover = unit_ball_cover(4);
        let tpl = hypercube_directions();
        let ds = DirectionSystem::free(Point::zero(4), tpl.directions.clone(), &cover).unwrap();
        assert!(matches!(
            assign_part(&Point::zero(4), &ds),
            Err(Error::InvalidArgument(_))
        ));
        assert!(fan_valid(&ds, 20_000, 7).unwrap());
    }

    #[test]
    fn degenerate_direction_set_is_rejected() {
        // All sixteen directions collapsed onto one axis: the facet cone
        // is not full-dimensional.
        let cover = unit_ball_cover(4);
        let mut e1 = vec![0.0; 4];
        e1[0] = 1.0;
        let ds = DirectionSystem::free(Point::zero(4), vec![e1; 16], &cover).unwrap();
        assert!(matches!(
            cone_halfspaces(&ds, 0),
            Err(Error::Degenerate(_)) | Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn hexagon_assignment_and_cones() {
        let cover = unit_ball_cover(2);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hexagon,
            Rotation::identity(2),
            Point::zero(2),
            &cover,
        )
        .unwrap();
        for j in 0..3 {
            let hs = cone_halfspaces(&ds, j).unwrap();
            assert_eq!(hs.len(), 2, "planar cone has two boundary rays");
        }
        // Sector membership at a few angles.
        let probe = |deg: f64| {
            let a = deg.to_radians();
            assign_part(&Point::from(vec![a.cos() * 0.5, a.sin() * 0.5]), &ds).unwrap()
        };
        assert_eq!(probe(30.0), 0);
        assert_eq!(probe(150.0), 1);
        assert_eq!(probe(270.0), 2);
        assert!(fan_valid(&ds, 20_000, 3).unwrap());
    }
}
