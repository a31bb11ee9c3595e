//! Faces, non-simply-connected regions, edge taxonomy, perimeters and Euler
//! characteristics of a planar bond graph.
//!
//! Every orbit of [`BondGraph::next_in_walk`] is a closed boundary walk with
//! its region on the left. Walks with positive signed area bound a bounded
//! region; the remaining walk of each component is its outer boundary. A
//! bounded region is a face when no other component lies inside its walk,
//! and a non-simply-connected region otherwise.

use serde::Serialize;

use crate::bond_graph::BondGraph;
use crate::error::{Error, Result};
use crate::geometry::{SpatialGrid, Vec2};
use crate::scalar::Scalar;

/// What lies on the left of a half-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Face(usize),
    Nsc(usize),
    Unbounded,
}

#[derive(Debug, Clone, Serialize)]
pub struct Face<S = f64> {
    /// Cyclic half-edge sequence; interior wires show up twice.
    pub boundary_walk: Vec<usize>,
    pub per_geom: usize,
    pub wire_int_count: usize,
    pub area: S,
    pub is_rhombus: bool,
    pub face_orientation: Option<Vec2<S>>,
}

impl<S: Scalar> Face<S> {
    /// Graph perimeter: geometric boundary plus twice the interior wires.
    #[inline]
    pub fn per_gr(&self) -> usize {
        self.per_geom + 2 * self.wire_int_count
    }

    /// Vertices visited by the boundary walk, in walk order (with repeats).
    pub fn walk_vertices(&self, graph: &BondGraph<S>) -> Vec<usize> {
        self.boundary_walk.iter().map(|&h| graph.origin(h)).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NscRegion<S = f64> {
    pub boundary_walk: Vec<usize>,
    pub area: S,
    /// Components whose representative vertex lies inside the walk.
    pub enclosed_components: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceSet<S = f64> {
    pub faces: Vec<Face<S>>,
    pub nsc_regions: Vec<NscRegion<S>>,
    pub unbounded_walks: Vec<Vec<usize>>,
    /// Region on the left of every half-edge.
    pub side: Vec<Side>,
    pub component_of: Vec<usize>,
    pub component_count: usize,
}

impl<S: Scalar> FaceSet<S> {
    /// Faces whose boundary walk visits `v`.
    pub fn faces_at(&self, graph: &BondGraph<S>, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = graph
            .rotation(v)
            .iter()
            .filter_map(|&h| match self.side[h] {
                Side::Face(f) => Some(f),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether `p` lies in the open face `f` (points on its boundary are
    /// reported as outside).
    pub fn face_contains(&self, graph: &BondGraph<S>, f: usize, p: Vec2<S>) -> bool {
        let pts: Vec<Vec2<S>> = self.faces[f]
            .boundary_walk
            .iter()
            .map(|&h| graph.positions()[graph.origin(h)])
            .collect();
        winding_number(&pts, p) != 0
    }
}

/// Winding number of the closed polyline `pts` around `p`.
pub fn winding_number<S: Scalar>(pts: &[Vec2<S>], p: Vec2<S>) -> i32 {
    let n = pts.len();
    let mut w = 0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let side = (b - a).cross(p - a);
        if a.y <= p.y {
            if b.y > p.y && side > S::zero() {
                w += 1;
            }
        } else if b.y <= p.y && side < S::zero() {
            w -= 1;
        }
    }
    w
}

fn segments_cross<S: Scalar>(a: Vec2<S>, b: Vec2<S>, c: Vec2<S>, d: Vec2<S>) -> bool {
    let eps = S::lit(S::DEFAULT_EPS);
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps))
        && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps))
}

/// First pair of edges whose open segments properly cross.
///
/// Graphs built from admissible configurations never have one: if unit
/// bonds `ab` and `cd` met at `P`, the four triangles around `P` would all
/// be nearly flat, which forces two endpoints to lie within about
/// `3 sqrt(eps)` of each other. Those graphs skip the scan.
pub fn find_crossing<S: Scalar>(graph: &BondGraph<S>) -> Option<(usize, usize)> {
    if graph.from_hard_discs() {
        return None;
    }
    scan_crossings(graph)
}

fn scan_crossings<S: Scalar>(graph: &BondGraph<S>) -> Option<(usize, usize)> {
    let pos = graph.positions();
    let edges = graph.edges();
    let long = edges
        .iter()
        .any(|&(i, j)| (pos[j] - pos[i]).norm() > S::lit(1.0 + 1e-3));
    let shares = |e: usize, f: usize| {
        let (a, b) = edges[e];
        let (c, d) = edges[f];
        a == c || a == d || b == c || b == d
    };
    let crosses = |e: usize, f: usize| {
        let (a, b) = edges[e];
        let (c, d) = edges[f];
        !shares(e, f) && segments_cross(pos[a], pos[b], pos[c], pos[d])
    };
    if long {
        for e in 0..edges.len() {
            for f in e + 1..edges.len() {
                if crosses(e, f) {
                    return Some((e, f));
                }
            }
        }
        return None;
    }
    // Two crossing segments of length at most 1.001 have midpoints at most
    // 1.001 apart, which is the grid cell width.
    let mids: Vec<Vec2<S>> = edges
        .iter()
        .map(|&(i, j)| (pos[i] + pos[j]) * S::lit(0.5))
        .collect();
    let grid = SpatialGrid::new(&mids);
    let mut found = None;
    for (e, &m) in mids.iter().enumerate() {
        grid.for_near(m, |f| {
            if f > e && found.is_none() && (mids[f] - m).norm_sq() <= S::lit(1.001 * 1.001) && crosses(e, f) {
                found = Some((e, f));
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn walk_points<S: Scalar>(graph: &BondGraph<S>, walk: &[usize]) -> Vec<Vec2<S>> {
    walk.iter()
        .map(|&h| graph.positions()[graph.origin(h)])
        .collect()
}

fn rhombus_check<S: Scalar>(graph: &BondGraph<S>, walk: &[usize]) -> Option<Vec2<S>> {
    if walk.len() != 4 {
        return None;
    }
    let vs: [usize; 4] = std::array::from_fn(|k| graph.origin(walk[k]));
    if (0..4).any(|a| (a + 1..4).any(|b| vs[a] == vs[b])) {
        return None;
    }
    let tol = S::lit(S::ANGLE_TOL);
    let third = S::PI() / S::lit(3.0);
    // cos is decreasing on [0, pi], so an angle band maps to a cosine band
    let band = |t: S| ((t + tol).cos(), (t - tol).cos());
    let (acute, obtuse) = (band(third), band(third + third));
    let pos = graph.positions();
    let mut cosines = [S::zero(); 4];
    for k in 0..4 {
        let prev = pos[vs[(k + 3) % 4]];
        let cur = pos[vs[k]];
        let next = pos[vs[(k + 1) % 4]];
        let a = prev - cur;
        let b = next - cur;
        let la = a.norm();
        if (la - S::one()).abs() > tol {
            return None;
        }
        cosines[k] = a.dot(b) / (la * b.norm());
    }
    let pattern = |start: usize| {
        (0..4).all(|k| {
            let (lo, hi) = if (k + start).is_multiple_of(2) { acute } else { obtuse };
            cosines[k] >= lo && cosines[k] <= hi
        })
    };
    if !(pattern(0) || pattern(1)) {
        return None;
    }
    let ori = graph.orientations();
    let v0 = ori[vs[0]];
    if vs.iter().all(|&v| (ori[v] - v0).norm() <= tol) {
        Some(v0)
    } else {
        None
    }
}

/// Enumerates faces, non-simply-connected regions and outer walks.
pub fn extract_faces<S: Scalar>(graph: &BondGraph<S>) -> Result<FaceSet<S>> {
    if let Some((e, f)) = find_crossing(graph) {
        return Err(Error::Nonplanar(format!(
            "edges {:?} and {:?} cross",
            graph.edges()[e],
            graph.edges()[f]
        )));
    }
    let nh = 2 * graph.edge_count();
    let mut walk_of = vec![usize::MAX; nh];
    let mut walks: Vec<Vec<usize>> = Vec::new();
    let mut buf = Vec::new();
    for start in 0..nh {
        if walk_of[start] != usize::MAX {
            continue;
        }
        let id = walks.len();
        buf.clear();
        let mut h = start;
        loop {
            walk_of[h] = id;
            buf.push(h);
            h = graph.next_in_walk(h);
            if h == start {
                break;
            }
            if walk_of[h] != usize::MAX {
                return Err(Error::Nonplanar("inconsistent rotation system".into()));
            }
        }
        walks.push(buf.clone());
    }

    let (component_of, component_count) = graph.component_labels();
    let threshold = S::lit(1e-6);
    let pos = graph.positions();
    let areas: Vec<S> = walks
        .iter()
        .map(|w| {
            let mut acc = S::zero();
            for &h in w {
                acc += pos[graph.origin(h)].cross(pos[graph.target(h)]);
            }
            acc / S::lit(2.0)
        })
        .collect();

    // Euler check per component: a planar embedding has E - V + 2 walks.
    let mut v_c = vec![0i64; component_count];
    let mut e_c = vec![0i64; component_count];
    let mut w_c = vec![0i64; component_count];
    let mut outer_c = vec![0i64; component_count];
    for &c in &component_of {
        v_c[c] += 1;
    }
    for &(i, _) in graph.edges() {
        e_c[component_of[i]] += 1;
    }
    for (w, &area) in walks.iter().zip(&areas) {
        let c = component_of[graph.origin(w[0])];
        w_c[c] += 1;
        if area <= threshold {
            outer_c[c] += 1;
        }
    }
    for c in 0..component_count {
        if e_c[c] == 0 {
            continue;
        }
        if w_c[c] != e_c[c] - v_c[c] + 2 || outer_c[c] != 1 {
            return Err(Error::Nonplanar(format!(
                "component {c}: {} vertices, {} edges, {} walks, {} outer walks",
                v_c[c], e_c[c], w_c[c], outer_c[c]
            )));
        }
    }

    // Representative vertex per component.
    let mut rep = vec![usize::MAX; component_count];
    for (v, &c) in component_of.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = v;
        }
    }

    let mut faces = Vec::new();
    let mut nsc_regions = Vec::new();
    let mut unbounded_walks = Vec::new();
    let mut side = vec![Side::Unbounded; nh];
    for (w, &area) in walks.into_iter().zip(&areas) {
        if area <= threshold {
            unbounded_walks.push(w);
            continue;
        }
        let own = component_of[graph.origin(w[0])];
        let mut enclosed = Vec::new();
        if component_count > 1 {
            let pts = walk_points(graph, &w);
            let (mut x0, mut x1, mut y0, mut y1) =
                (S::infinity(), S::neg_infinity(), S::infinity(), S::neg_infinity());
            for p in &pts {
                x0 = x0.min(p.x);
                x1 = x1.max(p.x);
                y0 = y0.min(p.y);
                y1 = y1.max(p.y);
            }
            for (c, &r) in rep.iter().enumerate() {
                if c == own {
                    continue;
                }
                let p = pos[r];
                if p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1 && winding_number(&pts, p) != 0
                {
                    enclosed.push(c);
                }
            }
        }
        if enclosed.is_empty() {
            let id = faces.len();
            for &h in &w {
                side[h] = Side::Face(id);
            }
            let total = w.len();
            let wire_int_count = if total <= 8 {
                (0..total)
                    .filter(|&a| (a + 1..total).any(|b| w[b] == BondGraph::<S>::twin(w[a])))
                    .count()
            } else {
                let mut edge_ids: Vec<usize> =
                    w.iter().map(|&h| BondGraph::<S>::edge_of(h)).collect();
                edge_ids.sort_unstable();
                edge_ids.dedup();
                total - edge_ids.len()
            };
            let face_orientation = rhombus_check(graph, &w);
            faces.push(Face {
                per_geom: total - 2 * wire_int_count,
                wire_int_count,
                area,
                is_rhombus: face_orientation.is_some(),
                face_orientation,
                boundary_walk: w,
            });
        } else {
            let id = nsc_regions.len();
            for &h in &w {
                side[h] = Side::Nsc(id);
            }
            nsc_regions.push(NscRegion {
                boundary_walk: w,
                area,
                enclosed_components: enclosed,
            });
        }
    }
    Ok(FaceSet {
        faces,
        nsc_regions,
        unbounded_walks,
        side,
        component_of,
        component_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Interior,
    Boundary,
    WireInterior,
    WireExterior,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeClassification {
    pub classes: Vec<EdgeClass>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EdgeCounts {
    pub interior: usize,
    pub boundary: usize,
    pub wire_interior: usize,
    pub wire_exterior: usize,
}

impl EdgeClassification {
    pub fn counts(&self) -> EdgeCounts {
        let mut c = EdgeCounts::default();
        for class in &self.classes {
            match class {
                EdgeClass::Interior => c.interior += 1,
                EdgeClass::Boundary => c.boundary += 1,
                EdgeClass::WireInterior => c.wire_interior += 1,
                EdgeClass::WireExterior => c.wire_exterior += 1,
            }
        }
        c
    }

    pub fn of(&self, edge: usize) -> EdgeClass {
        self.classes[edge]
    }
}

/// Classifies each edge by the faces on its two sides. An edge between a
/// face and a non-simply-connected region lies on the boundary of the union
/// of closed faces, so it counts as a boundary edge.
pub fn classify_edges<S: Scalar>(graph: &BondGraph<S>, faces: &FaceSet<S>) -> EdgeClassification {
    let classes = (0..graph.edge_count())
        .map(|e| match (faces.side[2 * e], faces.side[2 * e + 1]) {
            (Side::Face(a), Side::Face(b)) if a == b => EdgeClass::WireInterior,
            (Side::Face(_), Side::Face(_)) => EdgeClass::Interior,
            (Side::Face(_), _) | (_, Side::Face(_)) => EdgeClass::Boundary,
            _ => EdgeClass::WireExterior,
        })
        .collect();
    EdgeClassification { classes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Perimeter {
    /// Number of boundary edges (perimeter of the union of closed faces).
    pub per: usize,
    /// Boundary edges plus twice the exterior wires.
    pub per_gr: usize,
}

pub fn graph_perimeter(classification: &EdgeClassification) -> Perimeter {
    let c = classification.counts();
    Perimeter {
        per: c.boundary,
        per_gr: c.boundary + 2 * c.wire_exterior,
    }
}

/// `(chi, chi_euler)`: vertices minus edges plus faces, and the same with
/// non-simply-connected regions counted too.
pub fn euler_characteristics<S: Scalar>(graph: &BondGraph<S>, faces: &FaceSet<S>) -> (i64, i64) {
    let chi = graph.vertex_count() as i64 - graph.edge_count() as i64 + faces.faces.len() as i64;
    (chi, chi + faces.nsc_regions.len() as i64)
}

/// Particles on a boundary edge, on an exterior wire, or on no edge.
pub fn boundary_particles<S: Scalar>(
    graph: &BondGraph<S>,
    classification: &EdgeClassification,
) -> Vec<usize> {
    let mut on = vec![false; graph.vertex_count()];
    for (v, flag) in on.iter_mut().enumerate() {
        *flag = graph.degree(v) == 0;
    }
    for (e, &(i, j)) in graph.edges().iter().enumerate() {
        if matches!(
            classification.of(e),
            EdgeClass::Boundary | EdgeClass::WireExterior
        ) {
            on[i] = true;
            on[j] = true;
        }
    }
    on.iter()
        .enumerate()
        .filter_map(|(v, &b)| b.then_some(v))
        .collect()
}
