//! Incremental convex hull with conflict lists for dimensions 2 to 4.
//!
//! Facets are kept simplicial; callers that need true (possibly
//! non-simplicial) facets merge coplanar simplices with [`merge_coplanar`].
//! The implementation is the classic quickhull scheme: seed simplex,
//! per-facet conflict sets, furthest-point insertion, horizon walk and
//! ridge matching.  All iteration is index-ordered, so results are
//! deterministic for a fixed input.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg;

const MAX_DIM: usize = 4;
const NONE: u32 = u32::MAX;

/// One simplicial facet of the hull.
#[derive(Debug, Clone)]
pub struct HullFacet {
    /// Unit outward normal.
    pub normal: Vec<f64>,
    /// `<normal, x> = offset` on the facet plane.
    pub offset: f64,
    /// `dim` input point indices.
    pub vertices: Vec<u32>,
}

/// A facet after merging coplanar simplices.
#[derive(Debug, Clone)]
pub struct MergedFacet {
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Unique ascending vertex ids over the merged group.
    pub vertices: Vec<u32>,
}

struct Facet {
    verts: [u32; MAX_DIM],
    nbrs: [u32; MAX_DIM],
    normal: [f64; MAX_DIM],
    offset: f64,
    outside: Vec<u32>,
    furthest: u32,
    furthest_dist: f64,
    alive: bool,
    visit: u32,
    visible_mark: bool,
}

impl Facet {
    fn blank() -> Self {
        Facet {
            verts: [NONE; MAX_DIM],
            nbrs: [NONE; MAX_DIM],
            normal: [0.0; MAX_DIM],
            offset: 0.0,
            outside: Vec::new(),
            furthest: NONE,
            furthest_dist: 0.0,
            alive: false,
            visit: 0,
            visible_mark: false,
        }
    }
}

struct HullBuilder<'a> {
    pts: &'a [f64],
    dim: usize,
    n: usize,
    eps: f64,
    interior: Vec<f64>,
    facets: Vec<Facet>,
    free: Vec<u32>,
    pending: Vec<u32>,
    epoch: u32,
}

/// Facets of the convex hull of `n = points.len() / dim` points.
///
/// Errors with [`Error::Degenerate`] when the input is not full-dimensional.
pub fn convex_hull_facets(points: &[f64], dim: usize) -> Result<Vec<HullFacet>> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::InvalidArgument(format!(
            "hull supports dimensions 2..=4, got {dim}"
        )));
    }
    if !points.len().is_multiple_of(dim) {
        return Err(Error::InvalidArgument(
            "flat point buffer length must be a multiple of dim".into(),
        ));
    }
    let n = points.len() / dim;
    if n < dim + 1 {
        return Err(Error::TooFewPoints {
            required: dim + 1,
            got: n,
        });
    }
    let mut scale = 0.0f64;
    for &x in points {
        if !x.is_finite() {
            return Err(Error::InvalidArgument("non-finite hull input".into()));
        }
        scale = scale.max(x.abs());
    }
    let eps = 1e-10 * scale.max(1.0);
    let mut builder = HullBuilder {
        pts: points,
        dim,
        n,
        eps,
        interior: vec![0.0; dim],
        facets: Vec::new(),
        free: Vec::new(),
        pending: Vec::new(),
        epoch: 0,
    };
    builder.run()?;
    let mut out = Vec::new();
    for f in &builder.facets {
        if f.alive {
            out.push(HullFacet {
                normal: f.normal[..dim].to_vec(),
                offset: f.offset,
                vertices: f.verts[..dim].to_vec(),
            });
        }
    }
    Ok(out)
}

impl<'a> HullBuilder<'a> {
    #[inline]
    fn point(&self, i: u32) -> &[f64] {
        &self.pts[i as usize * self.dim..(i as usize + 1) * self.dim]
    }

    #[inline]
    fn dist(&self, fid: u32, p: u32) -> f64 {
        let f = &self.facets[fid as usize];
        linalg::dot(&f.normal[..self.dim], self.point(p)) - f.offset
    }

    fn run(&mut self) -> Result<()> {
        let chosen = self.initial_simplex()?;
        let dim = self.dim;
        for i in 0..dim {
            let mut c = 0.0;
            for &v in &chosen {
                c += self.point(v)[i];
            }
            self.interior[i] = c / (dim as f64 + 1.0);
        }
        // Facet k omits chosen[k]; neighbor across verts[j] is the facet
        // omitting that vertex.
        for omit in 0..=dim {
            let mut verts = [NONE; MAX_DIM];
            let mut nbrs = [NONE; MAX_DIM];
            let mut w = 0;
            for (j, &v) in chosen.iter().enumerate() {
                if j == omit {
                    continue;
                }
                verts[w] = v;
                nbrs[w] = (chosen.iter().position(|&c| c == v).unwrap()) as u32;
                w += 1;
            }
            let fid = self.alloc();
            self.set_plane(fid, &verts)?;
            let f = &mut self.facets[fid as usize];
            f.verts = verts;
            f.nbrs = nbrs;
            f.alive = true;
        }
        // Initial conflict assignment.
        let nf = self.facets.len() as u32;
        for p in 0..self.n as u32 {
            if chosen.contains(&p) {
                continue;
            }
            let mut best = self.eps;
            let mut arg = NONE;
            for fid in 0..nf {
                let d = self.dist(fid, p);
                if d > best {
                    best = d;
                    arg = fid;
                }
            }
            if arg != NONE {
                self.push_outside(arg, p, best);
            }
        }
        for fid in 0..nf {
            if !self.facets[fid as usize].outside.is_empty() {
                self.pending.push(fid);
            }
        }
        // Furthest-point insertion loop.
        let mut visible = Vec::new();
        let mut horizon = Vec::new();
        let mut orphans: Vec<u32> = Vec::new();
        let mut ridge_map: HashMap<[u32; 2], (u32, u8)> = HashMap::new();
        while let Some(fid) = self.pending.pop() {
            let f = &self.facets[fid as usize];
            if !f.alive || f.outside.is_empty() {
                continue;
            }
            let p = f.furthest;
            self.collect_visible(fid, p, &mut visible, &mut horizon);
            orphans.clear();
            for &v in &visible {
                orphans.append(&mut self.facets[v as usize].outside);
                self.facets[v as usize].alive = false;
            }
            ridge_map.clear();
            let mut new_facets = Vec::with_capacity(horizon.len());
            for &(vis, slot, outer) in &horizon {
                let mut verts = [NONE; MAX_DIM];
                let mut w = 0;
                for k in 0..self.dim {
                    if k == slot as usize {
                        continue;
                    }
                    verts[w] = self.facets[vis as usize].verts[k];
                    w += 1;
                }
                verts[self.dim - 1] = p;
                let nid = self.alloc();
                self.set_plane(nid, &verts)?;
                {
                    let nf = &mut self.facets[nid as usize];
                    nf.verts = verts;
                    nf.nbrs = [NONE; MAX_DIM];
                    nf.nbrs[self.dim - 1] = outer;
                    nf.alive = true;
                }
                // Rewire the surviving facet across the horizon ridge.
                let of = &mut self.facets[outer as usize];
                for k in 0..self.dim {
                    if of.nbrs[k] == vis {
                        of.nbrs[k] = nid;
                        break;
                    }
                }
                new_facets.push(nid);
            }
            // Match side ridges (those containing p) among the new facets.
            if self.dim == 2 {
                debug_assert_eq!(new_facets.len(), 2);
                let (a, b) = (new_facets[0], new_facets[1]);
                self.facets[a as usize].nbrs[0] = b;
                self.facets[b as usize].nbrs[0] = a;
            } else {
                for &nid in &new_facets {
                    for s in 0..self.dim - 1 {
                        let mut key = [NONE; 2];
                        let mut w = 0;
                        let verts = self.facets[nid as usize].verts;
                        for k in 0..self.dim - 1 {
                            if k == s {
                                continue;
                            }
                            key[w] = verts[k];
                            w += 1;
                        }
                        if w == 2 && key[0] > key[1] {
                            key.swap(0, 1);
                        }
                        match ridge_map.insert(key, (nid, s as u8)) {
                            None => {}
                            Some((other, os)) => {
                                self.facets[nid as usize].nbrs[s] = other;
                                self.facets[other as usize].nbrs[os as usize] = nid;
                            }
                        }
                    }
                }
            }
            // Re-home orphaned conflict points onto the new cone.
            for &q in orphans.iter() {
                if q == p {
                    continue;
                }
                let mut best = self.eps;
                let mut arg = NONE;
                for &nid in &new_facets {
                    let d = self.dist(nid, q);
                    if d > best {
                        best = d;
                        arg = nid;
                    }
                }
                if arg != NONE {
                    self.push_outside(arg, q, best);
                }
            }
            for &v in &visible {
                self.release(v);
            }
            for &nid in &new_facets {
                if !self.facets[nid as usize].outside.is_empty() {
                    self.pending.push(nid);
                }
            }
        }
        Ok(())
    }

    fn collect_visible(
        &mut self,
        start: u32,
        p: u32,
        visible: &mut Vec<u32>,
        horizon: &mut Vec<(u32, u8, u32)>,
    ) {
        self.epoch += 1;
        visible.clear();
        horizon.clear();
        let mut stack = vec![start];
        self.facets[start as usize].visit = self.epoch;
        self.facets[start as usize].visible_mark = true;
        while let Some(fid) = stack.pop() {
            visible.push(fid);
            for k in 0..self.dim {
                let nbr = self.facets[fid as usize].nbrs[k];
                debug_assert_ne!(nbr, NONE);
                if self.facets[nbr as usize].visit == self.epoch {
                    if !self.facets[nbr as usize].visible_mark {
                        horizon.push((fid, k as u8, nbr));
                    }
                    continue;
                }
                self.facets[nbr as usize].visit = self.epoch;
                if self.dist(nbr, p) > self.eps {
                    self.facets[nbr as usize].visible_mark = true;
                    stack.push(nbr);
                } else {
                    self.facets[nbr as usize].visible_mark = false;
                    horizon.push((fid, k as u8, nbr));
                }
            }
        }
    }

    fn alloc(&mut self) -> u32 {
        if let Some(id) = self.free.pop() {
            let f = &mut self.facets[id as usize];
            f.outside.clear();
            f.furthest = NONE;
            f.furthest_dist = 0.0;
            f.alive = false;
            id
        } else {
            self.facets.push(Facet::blank());
            (self.facets.len() - 1) as u32
        }
    }

    fn release(&mut self, id: u32) {
        self.facets[id as usize].alive = false;
        self.free.push(id);
    }

    fn push_outside(&mut self, fid: u32, p: u32, d: f64) {
        let f = &mut self.facets[fid as usize];
        f.outside.push(p);
        if d > f.furthest_dist {
            f.furthest_dist = d;
            f.furthest = p;
        }
    }

    fn set_plane(&mut self, fid: u32, verts: &[u32; MAX_DIM]) -> Result<()> {
        let dim = self.dim;
        let base = self.point(verts[0]).to_vec();
        let mut edges = [[0.0f64; MAX_DIM]; MAX_DIM - 1];
        for k in 1..dim {
            let p = self.point(verts[k]);
            for i in 0..dim {
                edges[k - 1][i] = p[i] - base[i];
            }
        }
        let mut n = [0.0f64; MAX_DIM];
        match dim {
            2 => {
                n[0] = -edges[0][1];
                n[1] = edges[0][0];
            }
            3 => {
                n[0] = edges[0][1] * edges[1][2] - edges[0][2] * edges[1][1];
                n[1] = edges[0][2] * edges[1][0] - edges[0][0] * edges[1][2];
                n[2] = edges[0][0] * edges[1][1] - edges[0][1] * edges[1][0];
            }
            4 => {
                let det3 = |c0: usize, c1: usize, c2: usize| -> f64 {
                    edges[0][c0] * (edges[1][c1] * edges[2][c2] - edges[1][c2] * edges[2][c1])
                        - edges[0][c1] * (edges[1][c0] * edges[2][c2] - edges[1][c2] * edges[2][c0])
                        + edges[0][c2] * (edges[1][c0] * edges[2][c1] - edges[1][c1] * edges[2][c0])
                };
                n[0] = det3(1, 2, 3);
                n[1] = -det3(0, 2, 3);
                n[2] = det3(0, 1, 3);
                n[3] = -det3(0, 1, 2);
            }
            _ => unreachable!(),
        }
        let len = linalg::norm(&n[..dim]);
        if len < 1e-250 || !len.is_finite() {
            return Err(Error::Degenerate(
                "hull facet through affinely dependent points".into(),
            ));
        }
        for x in n[..dim].iter_mut() {
            *x /= len;
        }
        let mut offset = 0.0;
        for &v in &verts[..dim] {
            offset += linalg::dot(&n[..dim], self.point(v));
        }
        offset /= dim as f64;
        let side = linalg::dot(&n[..dim], &self.interior) - offset;
        if side > 0.0 {
            for x in n[..dim].iter_mut() {
                *x = -*x;
            }
            offset = -offset;
        }
        let f = &mut self.facets[fid as usize];
        f.normal = n;
        f.offset = offset;
        Ok(())
    }

    fn initial_simplex(&self) -> Result<Vec<u32>> {
        let dim = self.dim;
        // Widest axis-extreme pair.
        let mut best_pair = (0u32, 0u32);
        let mut best_d = -1.0;
        for axis in 0..dim {
            let mut lo = 0usize;
            let mut hi = 0usize;
            for i in 1..self.n {
                if self.pts[i * dim + axis] < self.pts[lo * dim + axis] {
                    lo = i;
                }
                if self.pts[i * dim + axis] > self.pts[hi * dim + axis] {
                    hi = i;
                }
            }
            let d = linalg::dist_sq(self.point(lo as u32), self.point(hi as u32));
            if d > best_d {
                best_d = d;
                best_pair = (lo as u32, hi as u32);
            }
        }
        if best_d.sqrt() <= self.eps {
            return Err(Error::Degenerate("all hull input points coincide".into()));
        }
        let mut chosen = vec![best_pair.0, best_pair.1];
        // Orthonormal basis of the span of the chosen edge vectors.
        let mut basis: Vec<Vec<f64>> = Vec::new();
        {
            let mut e = linalg::sub(self.point(chosen[1]), self.point(chosen[0]));
            linalg::normalize(&mut e);
            basis.push(e);
        }
        while chosen.len() < dim + 1 {
            let base = self.point(chosen[0]);
            let mut best = self.eps;
            let mut arg = NONE;
            let mut best_res = Vec::new();
            for i in 0..self.n as u32 {
                if chosen.contains(&i) {
                    continue;
                }
                let mut r = linalg::sub(self.point(i), base);
                for b in &basis {
                    let c = linalg::dot(&r, b);
                    for (ri, bi) in r.iter_mut().zip(b) {
                        *ri -= c * bi;
                    }
                }
                let d = linalg::norm(&r);
                if d > best {
                    best = d;
                    arg = i;
                    best_res = r;
                }
            }
            if arg == NONE {
                return Err(Error::Degenerate(
                    "hull input is not full-dimensional".into(),
                ));
            }
            chosen.push(arg);
            linalg::normalize(&mut best_res);
            basis.push(best_res);
        }
        Ok(chosen)
    }
}

/// Groups simplicial facets by coincident supporting planes.
pub fn merge_coplanar(facets: &[HullFacet], tol: f64) -> Vec<MergedFacet> {
    let mut order: Vec<usize> = (0..facets.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = &facets[a];
        let fb = &facets[b];
        for (x, y) in fa.normal.iter().zip(&fb.normal) {
            match x.partial_cmp(y).unwrap() {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        fa.offset.partial_cmp(&fb.offset).unwrap()
    });
    let mut merged: Vec<MergedFacet> = Vec::new();
    for &idx in &order {
        let f = &facets[idx];
        let matches_last = merged.last().is_some_and(|last| {
            (last.offset - f.offset).abs() <= tol
                && last
                    .normal
                    .iter()
                    .zip(&f.normal)
                    .all(|(x, y)| (x - y).abs() <= tol)
        });
        if matches_last {
            let last = merged.last_mut().unwrap();
            last.vertices.extend_from_slice(&f.vertices);
        } else {
            merged.push(MergedFacet {
                normal: f.normal.clone(),
                offset: f.offset,
                vertices: f.vertices.clone(),
            });
        }
    }
    for m in &mut merged {
        m.vertices.sort_unstable();
        m.vertices.dedup();
    }
    merged
}
