//! Plain-text figure data for the planar covers.
//!
//! Output is gnuplot-style: one block per curve or point cloud, `x y` per
//! row, blank lines between blocks, `#` headers naming each block.  This
//! is enough to re-plot the planar constructions: cover boundary,
//! circumscribed polygon, inscribed sample points and part polygons.

use std::fmt::Write as _;

use borsuk_core::error::Result;
use borsuk_core::geometry::{ray_exit, Cover};
use borsuk_core::partition::{lower_sample, DirectionSystem};
use borsuk_core::polytope::Polytope;
use borsuk_core::specfile::fmt_f64;

fn push_block(out: &mut String, name: &str, rows: &[Vec<f64>], close: bool) {
    let _ = writeln!(out, "# {name}");
    for r in rows {
        let _ = writeln!(out, "{} {}", fmt_f64(r[0]), fmt_f64(r[1]));
    }
    if close {
        if let Some(first) = rows.first() {
            let _ = writeln!(out, "{} {}", fmt_f64(first[0]), fmt_f64(first[1]));
        }
    }
    out.push('\n');
}

/// Vertices ordered counterclockwise around their centroid.
fn polygon_order(p: &Polytope) -> Vec<Vec<f64>> {
    let verts: Vec<Vec<f64>> = p.vertices().iter().map(|v| v.coords().to_vec()).collect();
    let n = verts.len() as f64;
    let cx = verts.iter().map(|v| v[0]).sum::<f64>() / n;
    let cy = verts.iter().map(|v| v[1]).sum::<f64>() / n;
    let mut ordered = verts;
    ordered.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    ordered
}

/// Assembles the figure blocks for one planar cover and configuration.
pub fn planar_figure(
    cover: &Cover,
    system: &DirectionSystem,
    m_lower: usize,
    outer: &Polytope,
    parts: &[Polytope],
) -> Result<String> {
    let mut out = String::new();
    // Dense boundary polyline by ray casting from the witness.
    let w = cover.witness();
    let mut boundary = Vec::with_capacity(720);
    for k in 0..720 {
        let a = 2.0 * std::f64::consts::PI * (k as f64) / 720.0;
        let d = [a.cos(), a.sin()];
        let t = ray_exit(cover, w, &d)?;
        boundary.push(vec![w.coords()[0] + t * d[0], w.coords()[1] + t * d[1]]);
    }
    push_block(&mut out, "cover-boundary", &boundary, true);
    push_block(
        &mut out,
        "circumscribed-polygon",
        &polygon_order(outer),
        true,
    );
    for (i, part) in parts.iter().enumerate() {
        let sample = lower_sample(cover, system, i, m_lower)?;
        let rows: Vec<Vec<f64>> = sample.points.iter().map(|p| p.coords().to_vec()).collect();
        push_block(&mut out, &format!("part-{i}-samples"), &rows, false);
        push_block(
            &mut out,
            &format!("part-{i}-polygon"),
            &polygon_order(part),
            true,
        );
    }
    Ok(out)
}
