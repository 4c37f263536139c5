//! Universal covers and the four-element covering system in R^4.
//!
//! Canonical coordinates fix the intersection sphere of the two Lassak
//! balls inside the hyperplane `{x_n = 0}`, centered at the origin, with
//! both ball centers on the negative `x_n`-axis.  All constructions below
//! are deterministic closed forms.

use crate::error::{Error, Result};
use crate::geometry::{Ball, Cover, Halfspace, Point};
use crate::linalg;

/// Circumradius bound for unit-diameter sets: `sqrt(n / (2n + 2))`.
pub fn jung_radius(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "jung radius needs dimension >= 1".into(),
        ));
    }
    let nf = n as f64;
    Ok((nf / (2.0 * nf + 2.0)).sqrt())
}

/// Offsets of the two ball centers on the negative axis for the canonical
/// Lassak cover: returns `(h0, h1)` with `c0 = -h0 e_n`, `c1 = -h1 e_n`.
fn lassak_center_offsets(n: usize) -> (f64, f64) {
    let nf = n as f64;
    // h0^2 = r_n^2 - r_{n-1}^2, h1^2 = 1 - r_{n-1}^2, and h1 - h0 = r_n.
    let h0 = (1.0 / (nf * (2.0 * nf + 2.0))).sqrt();
    let h1 = ((nf + 1.0) / (2.0 * nf)).sqrt();
    (h0, h1)
}

/// The Lassak cover `B0 ∩ B1` in canonical coordinates.
///
/// `B0` has Jung radius `r_n` and center `c0`, `B1` has radius 1 and center
/// `c1`, with `|c0 - c1| = r_n`.  The two boundary spheres meet in a sphere
/// of radius `r_{n-1}` inside `{x_n = 0}` centered at the origin.  Ball 0 of
/// the returned cover is always `B0` and the witness is `c0`.
pub fn lassak_cover(n: usize) -> Result<Cover> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "lassak cover needs dimension >= 2".into(),
        ));
    }
    let r = jung_radius(n)?;
    let (h0, h1) = lassak_center_offsets(n);
    let mut c0 = vec![0.0; n];
    c0[n - 1] = -h0;
    let mut c1 = vec![0.0; n];
    c1[n - 1] = -h1;
    let witness = Point::from(c0.clone());
    Cover::new(
        n,
        vec![
            Ball::new(Point::from(c0), r)?,
            Ball::new(Point::from(c1), 1.0)?,
        ],
        vec![],
        format!("L{n}"),
        witness,
    )
}

/// The symmetry-axis points `(c0, c1)` of a cover built by [`lassak_cover`].
pub fn lassak_centers(cover: &Cover) -> (&Point, &Point) {
    (cover.balls()[0].center(), cover.balls()[1].center())
}

/// Unit normals of the six face pairs of a rhombic dodecahedron, embedded
/// in the hyperplane `{x_4 = 0}` of R^4, plus the distinguished vector `w`
/// orthogonal to `u1` and `u2`.
#[derive(Debug, Clone)]
pub struct NormalSystem {
    pub u: Vec<Point>,
    pub w: Point,
}

/// Canonical rhombic-dodecahedron normal system.
///
/// `u1 = (1,1,0,0)/sqrt(2)`, `u2 = (1,-1,0,0)/sqrt(2)`,
/// `u3 = (1,0,1,0)/sqrt(2)`, `u4 = (0,1,1,0)/sqrt(2)`,
/// `u5 = (-1,0,1,0)/sqrt(2)`, `u6 = (0,-1,1,0)/sqrt(2)`, `w = (0,0,1,0)`.
///
/// One normal is chosen per face pair of the rhombic dodecahedron.  The
/// sign representatives of `u4..u6` are fixed so that the four sign
/// classes of [`build_ucs_r4`] fall into four distinct congruence classes
/// under the symmetries that keep the `u1`/`u2` slab pair in place, with
/// the fourth class symmetric under the `w`-reflection (which is what
/// makes its two `w`-truncations congruent).
pub fn rhombic_dodecahedron_normals() -> NormalSystem {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let u = vec![
        Point::from(vec![s, s, 0.0, 0.0]),
        Point::from(vec![s, -s, 0.0, 0.0]),
        Point::from(vec![s, 0.0, s, 0.0]),
        Point::from(vec![0.0, s, s, 0.0]),
        Point::from(vec![-s, 0.0, s, 0.0]),
        Point::from(vec![0.0, -s, s, 0.0]),
    ];
    NormalSystem {
        u,
        w: Point::from(vec![0.0, 0.0, 1.0, 0.0]),
    }
}

/// An ordered universal covering system.
#[derive(Debug, Clone)]
pub struct Ucs {
    pub elements: Vec<Cover>,
}

/// Offset of the truncation hyperplanes from the origin.
pub const LAYER_OFFSET: f64 = 0.5;

fn layer_pair(u: &Point) -> Result<[Halfspace; 2]> {
    let plus = Halfspace::new(u.coords().to_vec(), LAYER_OFFSET)?;
    let minus = Halfspace::new(u.coords().iter().map(|x| -x).collect(), LAYER_OFFSET)?;
    Ok([plus, minus])
}

fn signed_single(u: &Point, sign: i8) -> Result<Halfspace> {
    let n: Vec<f64> = if sign > 0 {
        u.coords().to_vec()
    } else {
        u.coords().iter().map(|x| -x).collect()
    };
    Halfspace::new(n, LAYER_OFFSET)
}

/// The four truncations of the Lassak cover forming a universal covering
/// system in R^4.
///
/// Each element keeps the full layers for `u1`, `u2` and one signed
/// halfspace for each of `u3..u6`; the fourth element additionally keeps
/// the halfspace of `w`.  Sign classes per element:
/// `U1: (+,+,+,+)`, `U2: (+,+,+,-)`, `U3: (+,+,-,-)`, `U4p: (+,-,+,-)` with
/// the extra `w`-halfspace.
pub fn build_ucs_r4() -> Result<Ucs> {
    let base = lassak_cover(4)?;
    let ns = rhombic_dodecahedron_normals();
    let classes: [(&str, [i8; 4], bool); 4] = [
        ("U1", [1, 1, 1, 1], false),
        ("U2", [1, 1, 1, -1], false),
        ("U3", [1, 1, -1, -1], false),
        ("U4p", [1, -1, 1, -1], true),
    ];
    let mut elements = Vec::with_capacity(4);
    for (label, signs, with_w) in classes {
        let mut hs = Vec::with_capacity(9);
        hs.extend(layer_pair(&ns.u[0])?);
        hs.extend(layer_pair(&ns.u[1])?);
        for (k, &s) in signs.iter().enumerate() {
            hs.push(signed_single(&ns.u[2 + k], s)?);
        }
        if with_w {
            hs.push(signed_single(&ns.w, 1)?);
        }
        elements.push(Cover::new(
            4,
            base.balls().to_vec(),
            hs,
            label,
            base.witness().clone(),
        )?);
    }
    Ok(Ucs { elements })
}

/// The planar demo covers: the Lassak cover in R^2 and its truncation by a
/// single halfspace with normal along the first coordinate axis.
pub fn build_demo_r2() -> Result<Vec<Cover>> {
    let base = lassak_cover(2)?;
    let truncated = Cover::new(
        2,
        base.balls().to_vec(),
        vec![Halfspace::new(vec![1.0, 0.0], LAYER_OFFSET)?],
        "L2H",
        base.witness().clone(),
    )?;
    Ok(vec![base, truncated])
}

/// Support function of the lens `B0 ∩ B1` in direction `u` (unit), in
/// closed form: the tangent cap of whichever ball is active, otherwise the
/// supremum over the intersection sphere of the two boundary spheres.
pub fn lens_support(b0: &Ball, b1: &Ball, u: &[f64]) -> f64 {
    let cap0 = linalg::add_scaled(b0.center().coords(), b0.radius(), u);
    if b1.slack(&cap0) >= -1e-12 {
        return linalg::dot(u, &cap0);
    }
    let cap1 = linalg::add_scaled(b1.center().coords(), b1.radius(), u);
    if b0.slack(&cap1) >= -1e-12 {
        return linalg::dot(u, &cap1);
    }
    // Optimum on the sphere where the two boundaries meet.
    let c0 = b0.center().coords();
    let c1 = b1.center().coords();
    let axis = linalg::sub(c1, c0);
    let d = linalg::norm(&axis);
    let t = (d * d + b0.radius() * b0.radius() - b1.radius() * b1.radius()) / (2.0 * d);
    let rho = (b0.radius() * b0.radius() - t * t).max(0.0).sqrt();
    let center = linalg::add_scaled(c0, t / d, &axis);
    let ua = linalg::dot(u, &axis) / d;
    let mut tangential = 0.0;
    for i in 0..u.len() {
        let p = u[i] - ua * axis[i] / d;
        tangential += p * p;
    }
    linalg::dot(u, &center) + rho * tangential.sqrt()
}
