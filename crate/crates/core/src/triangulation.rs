//! Ear-clipping triangulation of a single face.
//!
//! The face boundary is treated as a weakly simple polygon given by the
//! vertex sequence of its boundary walk, so interior wires and pinch
//! vertices are handled without special cases. Each clipped ear adds one
//! chord and one triangle.

use serde::Serialize;

use crate::bond_graph::BondGraph;
use crate::error::{Error, Result};
use crate::faces::{winding_number, Face};
use crate::geometry::Vec2;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangulationResult {
    pub added_edges: Vec<(usize, usize)>,
    pub triangle_count: usize,
    /// Graph perimeters `(before, ear, rest)` of every split.
    pub splits: Vec<(usize, usize, usize)>,
}

fn strictly_inside_or_on<S: Scalar>(p: Vec2<S>, a: Vec2<S>, b: Vec2<S>, c: Vec2<S>) -> bool {
    let eps = S::lit(S::DEFAULT_EPS);
    let d1 = (b - a).cross(p - a);
    let d2 = (c - b).cross(p - b);
    let d3 = (a - c).cross(p - c);
    d1 >= -eps && d2 >= -eps && d3 >= -eps
}

/// Four strict left turns add up to one full turn, so the quadrilateral is
/// convex and simple.
fn convex_quad<S: Scalar>(positions: &[Vec2<S>], ids: [usize; 4]) -> bool {
    let eps = S::lit(S::DEFAULT_EPS);
    let p = ids.map(|v| positions[v]);
    (0..4).all(|k| (p[(k + 1) % 4] - p[k]).cross(p[(k + 2) % 4] - p[(k + 1) % 4]) > eps)
}

/// Chord and triangle counts of the triangulation of `face`.
pub fn split_counts<S: Scalar>(face: &Face<S>, graph: &BondGraph<S>) -> Result<(usize, usize)> {
    let walk = &face.boundary_walk;
    if walk.len() == 4 {
        let ids: [usize; 4] = std::array::from_fn(|k| graph.origin(walk[k]));
        if convex_quad(graph.positions(), ids) {
            return Ok((1, 2));
        }
    }
    let t = triangulate_face(face, graph)?;
    Ok((t.added_edges.len(), t.triangle_count))
}

fn proper_cross<S: Scalar>(a: Vec2<S>, b: Vec2<S>, c: Vec2<S>, d: Vec2<S>) -> bool {
    let eps = S::lit(S::DEFAULT_EPS);
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps))
        && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps))
}

/// Triangulates a counterclockwise weakly simple polygon given by vertex
/// ids into `positions`.
pub fn triangulate_polygon<S: Scalar>(
    positions: &[Vec2<S>],
    polygon: &[usize],
) -> Result<TriangulationResult> {
    let mut poly = polygon.to_vec();
    if poly.len() < 3 {
        return Err(Error::TriangulationFailed(format!(
            "polygon with {} sides",
            poly.len()
        )));
    }
    let eps = S::lit(S::DEFAULT_EPS);
    if let [a, b, c, d] = poly[..] {
        if convex_quad(positions, [a, b, c, d]) {
            return Ok(TriangulationResult {
                added_edges: vec![(a.min(c), a.max(c))],
                triangle_count: 2,
                splits: vec![(4, 3, 3)],
            });
        }
    }
    let mut added_edges = Vec::new();
    let mut splits = Vec::new();
    let mut triangle_count = 0;
    let mut pts: Vec<Vec2<S>> = Vec::with_capacity(poly.len());
    while poly.len() > 3 {
        let n = poly.len();
        pts.clear();
        pts.extend(poly.iter().map(|&v| positions[v]));
        let mut found = None;
        for k in 0..n {
            let (ip, inx) = ((k + n - 1) % n, (k + 1) % n);
            let (vp, vc, vn) = (poly[ip], poly[k], poly[inx]);
            if vp == vn {
                continue;
            }
            let (a, b, c) = (pts[ip], pts[k], pts[inx]);
            if (b - a).cross(c - b) <= eps {
                continue;
            }
            let blocked = poly.iter().zip(&pts).any(|(&v, &p)| {
                v != vp && v != vc && v != vn && strictly_inside_or_on(p, a, b, c)
            });
            if blocked {
                continue;
            }
            let crossing = (0..n).any(|m| {
                let (u, w) = (poly[m], poly[(m + 1) % n]);
                u != vp && u != vn && w != vp && w != vn
                    && proper_cross(a, c, pts[m], pts[(m + 1) % n])
            });
            if crossing {
                continue;
            }
            let mid = (a + c) * S::lit(0.5);
            if winding_number(&pts, mid) == 0 {
                continue;
            }
            found = Some(k);
            break;
        }
        let Some(k) = found else {
            return Err(Error::TriangulationFailed(format!(
                "no ear among {n} boundary vertices"
            )));
        };
        let (vp, vn) = (poly[(k + n - 1) % n], poly[(k + 1) % n]);
        added_edges.push((vp.min(vn), vp.max(vn)));
        splits.push((n, 3, n - 1));
        triangle_count += 1;
        poly.remove(k);
    }
    triangle_count += 1;
    Ok(TriangulationResult {
        added_edges,
        triangle_count,
        splits,
    })
}

/// Triangulates `face` by chords between its boundary vertices.
pub fn triangulate_face<S: Scalar>(face: &Face<S>, graph: &BondGraph<S>) -> Result<TriangulationResult> {
    let walk = &face.boundary_walk;
    if walk.len() == 4 {
        let ids: [usize; 4] = std::array::from_fn(|k| graph.origin(walk[k]));
        return triangulate_polygon(graph.positions(), &ids);
    }
    triangulate_polygon(graph.positions(), &face.walk_vertices(graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faces::extract_faces;

    fn graph(points: &[(f64, f64)], edges: &[(usize, usize)]) -> BondGraph<f64> {
        let pos: Vec<Vec2<f64>> = points.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
        let ori = vec![Vec2::new(0.0, 1.0); pos.len()];
        BondGraph::from_edges(pos, ori, 0.0, edges.to_vec())
    }

    fn counts(g: &BondGraph<f64>) -> Vec<(usize, usize, usize)> {
        let fs = extract_faces(g).unwrap();
        fs.faces
            .iter()
            .map(|f| {
                let t = triangulate_face(f, g).unwrap();
                for &(p, a, b) in &t.splits {
                    assert_eq!(a + b, p + 2);
                }
                (f.per_gr(), t.added_edges.len(), t.triangle_count)
            })
            .collect()
    }

    #[test]
    fn unit_rhombus() {
        let h = 3f64.sqrt() / 2.0;
        let g = graph(
            &[(0.0, 0.0), (0.5, h), (0.0, 2.0 * h), (-0.5, h)],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        );
        assert_eq!(counts(&g), vec![(4, 1, 2)]);
    }

    #[test]
    fn regular_pentagon() {
        let r = 1.0 / (2.0 * (std::f64::consts::PI / 5.0).sin());
        let pts: Vec<(f64, f64)> = (0..5)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                (r * t.cos(), r * t.sin())
            })
            .collect();
        let g = graph(&pts, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(counts(&g), vec![(5, 2, 3)]);
    }

    #[test]
    fn triangle_needs_no_chord() {
        let h = 3f64.sqrt() / 2.0;
        let g = graph(&[(0.0, 0.0), (1.0, 0.0), (0.5, h)], &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(counts(&g), vec![(3, 0, 1)]);
    }

    #[test]
    fn interior_wire_counts_twice() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = graph(
            &[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (s, s)],
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)],
        );
        assert_eq!(counts(&g), vec![(6, 3, 4)]);
    }

    #[test]
    fn nonconvex_hexagon() {
        // arrow shape
        let g = graph(
            &[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (1.0, 1.0), (0.0, 2.0)],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
        );
        assert_eq!(counts(&g), vec![(5, 2, 3)]);
    }
}
