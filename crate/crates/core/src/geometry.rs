//! Dimension-generic geometric primitives.
//!
//! A [`Cover`] is an intersection of closed balls and halfspaces with a
//! verified interior witness.  Membership, closed-form ray exits, exact
//! point-set diameters and Haar-random rotations are the primitives the
//! rest of the pipeline is built from.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg;

/// Inclusive tolerance for membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
/// Required interior margin for ray apexes.
pub const INTERIOR_MARGIN: f64 = 1e-9;
/// Tolerance on unit-norm invariants.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance on rotation orthogonality.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// A point of R^n with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(Point { coords })
    }

    pub fn zero(dim: usize) -> Self {
        Point {
            coords: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dist(&self, other: &Point) -> f64 {
        linalg::dist(&self.coords, &other.coords)
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Point { coords }
    }
}

/// The region `{x : <normal, x> <= offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    normal: Vec<f64>,
    offset: f64,
}

impl Halfspace {
    /// Requires `normal` to be unit within [`UNIT_TOL`].
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let n = linalg::norm(&normal);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidArgument(format!(
                "halfspace normal must be unit (norm {n:.17e})"
            )));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidArgument(
                "halfspace offset must be finite".into(),
            ));
        }
        Ok(Halfspace { normal, offset })
    }

    /// Normalizes `a . x <= b` by dividing both sides by `|a|`.
    pub fn from_unnormalized(mut a: Vec<f64>, b: f64) -> Result<Self> {
        let n = linalg::normalize(&mut a);
        if n < 1e-14 {
            return Err(Error::Degenerate("zero halfspace normal".into()));
        }
        Halfspace::new(a, b / n)
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed violation `<n, x> - offset`; nonpositive inside.
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.normal, x) - self.offset
    }

    #[inline]
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.eval(x) <= tol
    }
}

/// A closed Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Point,
    radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Ball { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Distance to the boundary sphere; positive inside.
    #[inline]
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.radius - linalg::dist(self.center.coords(), x)
    }
}

/// Intersection of closed balls and halfspaces with nonempty interior.
///
/// At least one ball is required, which keeps every cover bounded.  The
/// witness point is checked to be strictly interior on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    dimension: usize,
    balls: Vec<Ball>,
    halfspaces: Vec<Halfspace>,
    label: String,
    witness: Point,
}

impl Cover {
    pub fn new(
        dimension: usize,
        balls: Vec<Ball>,
        halfspaces: Vec<Halfspace>,
        label: impl Into<String>,
        witness: Point,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidArgument(
                "cover dimension must be at least 2".into(),
            ));
        }
        if balls.is_empty() {
            return Err(Error::InvalidArgument(
                "cover needs at least one ball to be bounded".into(),
            ));
        }
        for b in &balls {
            if b.dim() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: b.dim(),
                });
            }
        }
        for h in &halfspaces {
            if h.dim() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: h.dim(),
                });
            }
        }
        if witness.dim() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                got: witness.dim(),
            });
        }
        let cover = Cover {
            dimension,
            balls,
            halfspaces,
            label: label.into(),
            witness,
        };
        let margin = cover.interior_margin(cover.witness.coords());
        if margin < INTERIOR_MARGIN {
            return Err(Error::NotInterior {
                margin,
                required: INTERIOR_MARGIN,
            });
        }
        Ok(cover)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn witness(&self) -> &Point {
        &self.witness
    }

    /// Minimum slack over all constraints; positive strictly inside.
    pub fn interior_margin(&self, x: &[f64]) -> f64 {
        let mut m = f64::INFINITY;
        for b in &self.balls {
            m = m.min(b.slack(x));
        }
        for h in &self.halfspaces {
            m = m.min(-h.eval(x));
        }
        m
    }

    /// Membership with the inclusive boundary tolerance [`MEMBERSHIP_TOL`].
    pub fn membership(&self, x: &Point) -> Result<bool> {
        if x.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.dim(),
            });
        }
        Ok(self.contains_slice(x.coords(), MEMBERSHIP_TOL))
    }

    #[inline]
    pub(crate) fn contains_slice(&self, x: &[f64], tol: f64) -> bool {
        self.interior_margin(x) >= -tol
    }

    /// Image of the cover under `x -> R x + shift`.
    pub fn transformed(&self, rotation: &Rotation, shift: &[f64]) -> Result<Cover> {
        if rotation.dim() != self.dimension || shift.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: rotation.dim(),
            });
        }
        let balls = self
            .balls
            .iter()
            .map(|b| {
                let mut c = rotation.apply(b.center().coords());
                for (ci, si) in c.iter_mut().zip(shift) {
                    *ci += si;
                }
                Ball::new(Point::from(c), b.radius())
            })
            .collect::<Result<Vec<_>>>()?;
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| {
                let n = rotation.apply(h.normal());
                let off = h.offset() + linalg::dot(&n, shift);
                Halfspace::new(n, off)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut w = rotation.apply(self.witness.coords());
        for (wi, si) in w.iter_mut().zip(shift) {
            *wi += si;
        }
        Cover::new(
            self.dimension,
            balls,
            halfspaces,
            self.label.clone(),
            Point::from(w),
        )
    }
}

/// Exit parameter of the ray `w + t d` from a cover, in closed form.
///
/// Per ball the positive root of the boundary quadratic, per halfspace the
/// hyperplane hit when the ray points outward; the exit is the minimum over
/// constraints.  Requires the apex strictly interior (margin at least
/// [`INTERIOR_MARGIN`]) and `d` unit.
pub fn ray_exit(cover: &Cover, apex: &Point, dir: &[f64]) -> Result<f64> {
    if apex.dim() != cover.dimension() || dir.len() != cover.dimension() {
        return Err(Error::DimensionMismatch {
            expected: cover.dimension(),
            got: apex.dim().max(dir.len()),
        });
    }
    let margin = cover.interior_margin(apex.coords());
    if margin < INTERIOR_MARGIN {
        return Err(Error::NotInterior {
            margin,
            required: INTERIOR_MARGIN,
        });
    }
    if (linalg::norm(dir) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(
            "ray direction must be a unit vector".into(),
        ));
    }
    ray_exit_unchecked(cover, apex.coords(), dir)
}

/// Exit parameter without apex/direction validation (hot path).
#[inline]
pub(crate) fn ray_exit_unchecked(cover: &Cover, w: &[f64], d: &[f64]) -> Result<f64> {
    let mut t = f64::INFINITY;
    for b in cover.balls() {
        let c = b.center().coords();
        let mut od = 0.0;
        let mut oo = 0.0;
        for i in 0..w.len() {
            let o = w[i] - c[i];
            od += o * d[i];
            oo += o * o;
        }
        let disc = od * od - (oo - b.radius() * b.radius());
        // The apex is interior, so the discriminant is strictly positive.
        debug_assert!(disc > 0.0);
        let root = -od + disc.max(0.0).sqrt();
        t = t.min(root);
    }
    for h in cover.halfspaces() {
        let nd = linalg::dot(h.normal(), d);
        if nd > 0.0 {
            t = t.min(-h.eval(w) / nd);
        }
    }
    if !t.is_finite() {
        return Err(Error::UnboundedRay);
    }
    debug_assert!(t > 0.0);
    Ok(t)
}

/// Exact maximum pairwise distance with its lexicographically smallest
/// attaining index pair.
///
/// Pairs are pruned through the triangle bound `d(i, j) <= r_i + r_j`
/// around the centroid, visiting points in decreasing radius; only pairs
/// whose bound strictly undercuts the incumbent are skipped, so the value
/// is exact and ties still resolve to the smallest index pair.
pub fn diameter(points: &[Point]) -> Result<(f64, (usize, usize))> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            got: points.len(),
        });
    }
    let dim = points[0].dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }
    let k = points.len();
    let mut flat = Vec::with_capacity(k * dim);
    for p in points {
        flat.extend_from_slice(p.coords());
    }
    let (value, arg) = diameter_flat_arg(&flat, dim);
    debug_assert!(arg.0 < arg.1 || k < 2);
    Ok((value, arg))
}

/// Diameter over a flat `len/dim x dim` buffer (hot path, value only).
pub(crate) fn diameter_flat(coords: &[f64], dim: usize) -> f64 {
    diameter_flat_arg(coords, dim).0
}

fn diameter_flat_arg(coords: &[f64], dim: usize) -> (f64, (usize, usize)) {
    let k = coords.len() / dim;
    let mut center = vec![0.0; dim];
    for i in 0..k {
        for (c, x) in center.iter_mut().zip(&coords[i * dim..(i + 1) * dim]) {
            *c += x;
        }
    }
    for c in center.iter_mut() {
        *c /= k as f64;
    }
    let radii: Vec<f64> = (0..k)
        .map(|i| linalg::dist(&center, &coords[i * dim..(i + 1) * dim]))
        .collect();
    let mut order: Vec<u32> = (0..k as u32).collect();
    order.sort_by(|&a, &b| {
        radii[b as usize]
            .total_cmp(&radii[a as usize])
            .then(a.cmp(&b))
    });
    let mut best = -1.0f64;
    let mut arg = (0usize, 1usize);
    for a in 0..k {
        let i = order[a] as usize;
        // Every remaining pair is bounded by r_i plus the largest radius
        // that can still follow.
        if a + 1 < k && radii[i] + radii[order[a + 1] as usize] < best {
            break;
        }
        for b in a + 1..k {
            let j = order[b] as usize;
            if radii[i] + radii[j] < best {
                break;
            }
            let d = linalg::dist(
                &coords[i * dim..(i + 1) * dim],
                &coords[j * dim..(j + 1) * dim],
            );
            let pair = (i.min(j), i.max(j));
            if d > best || (d == best && pair < arg) {
                best = d;
                arg = pair;
            }
        }
    }
    (best, arg)
}

/// An n x n orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    n: usize,
    m: Vec<f64>, // row-major
}

impl Rotation {
    pub fn identity(n: usize) -> Self {
        Rotation {
            n,
            m: linalg::identity(n),
        }
    }

    /// Builds a rotation from row-major entries, checking orthogonality
    /// within [`ORTHOGONALITY_TOL`].
    pub fn from_rows(n: usize, m: Vec<f64>) -> Result<Self> {
        if m.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "rotation needs {} entries, got {}",
                n * n,
                m.len()
            )));
        }
        let r = Rotation { n, m };
        let err = r.orthogonality_error();
        if err > ORTHOGONALITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix is not orthogonal (max deviation {err:.3e})"
            )));
        }
        Ok(r)
    }

    /// Exponential of the skew-symmetric matrix with free entries `params`
    /// (the strict upper triangle in row order, `n (n - 1) / 2` values).
    pub fn from_skew_params(n: usize, params: &[f64]) -> Result<Self> {
        if params.len() != n * (n - 1) / 2 {
            return Err(Error::InvalidArgument(format!(
                "skew chart of dimension {n} needs {} parameters, got {}",
                n * (n - 1) / 2,
                params.len()
            )));
        }
        let mut s = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                s[i * n + j] = params[k];
                s[j * n + i] = -params[k];
                k += 1;
            }
        }
        Ok(Rotation {
            n,
            m: linalg::exp_skew(&s, n),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.m
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.n + j]
    }

    /// `Q x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.apply_into(x, &mut out);
        out
    }

    #[inline]
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            out[i] = linalg::dot(&self.m[i * self.n..(i + 1) * self.n], x);
        }
    }

    /// `Q^T x`.
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.apply_transpose_into(x, &mut out);
        out
    }

    #[inline]
    pub fn apply_transpose_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for o in out.iter_mut() {
            *o = 0.0;
        }
        for i in 0..self.n {
            let xi = x[i];
            let row = &self.m[i * self.n..(i + 1) * self.n];
            for j in 0..self.n {
                out[j] += row[j] * xi;
            }
        }
    }

    /// `self * other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        debug_assert_eq!(self.n, other.n);
        Rotation {
            n: self.n,
            m: linalg::mat_mul(&self.m, &other.m, self.n),
        }
    }

    pub fn transpose(&self) -> Rotation {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[j * n + i] = self.m[i * n + j];
            }
        }
        Rotation { n, m }
    }

    /// `max |Q^T Q - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.n;
        let mut err = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.m[k * n + i] * self.m[k * n + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((s - target).abs());
            }
        }
        err
    }

    pub fn det(&self) -> f64 {
        let mut buf = self.m.clone();
        linalg::det_in_place(&mut buf, self.n)
    }
}

/// Haar-distributed orthogonal matrix for a fixed seed.
///
/// QR of a standard-Gaussian matrix with the diagonal of R corrected to be
/// positive; without the sign correction the distribution is not Haar.
pub fn haar_orthogonal(seed: u64, n: usize) -> Rotation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_from_rng(&mut rng, n)
}

/// Haar-distributed orthogonal matrix drawn from an existing stream.
pub fn haar_from_rng<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Rotation {
    assert!(n >= 1, "rotation dimension must be at least 1");
    let mut a = vec![0.0; n * n];
    for x in a.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
    let (q, _r) = linalg::qr_positive(&a, n);
    Rotation { n, m: q }
}

/// Rotation mapping the unit vector `from` onto the unit vector `to`
/// (identity on their orthogonal complement).
pub fn rotation_between(from: &[f64], to: &[f64]) -> Result<Rotation> {
    let n = from.len();
    if to.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: to.len(),
        });
    }
    let c = linalg::dot(from, to);
    if c < -1.0 + 1e-12 {
        return Err(Error::Degenerate(
            "rotation between antipodal vectors is not unique".into(),
        ));
    }
    // R = I - (u+v)(u+v)^T / (1 + <u,v>) + 2 v u^T
    let mut m = linalg::identity(n);
    for i in 0..n {
        let si = from[i] + to[i];
        for j in 0..n {
            let sj = from[j] + to[j];
            m[i * n + j] += -si * sj / (1.0 + c) + 2.0 * to[i] * from[j];
        }
    }
    Rotation::from_rows(n, m)
}
