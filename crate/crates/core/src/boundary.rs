//! Boundary particles, inner angles and the lemma-level boundary inequalities.

use std::fmt;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::energy::{decompose, decompose_analysis, is_critical, GraphAnalysis};
use crate::error::{Error, Result};
use crate::faces::{boundary_particles, graph_perimeter, EdgeClass, Side};
use crate::geometry::{Configuration, Tolerances};
use crate::scalar::Scalar;

/// Inner-angle class of a boundary particle: `x^ = j pi / 3`, or strictly
/// between two consecutive multiples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryClass {
    Y1,
    Y2,
    Y23,
    Y3,
    Y34,
    Y4,
    Y5,
}

impl BoundaryClass {
    pub fn from_angle<S: Scalar>(angle: S) -> Option<Self> {
        let tol = S::lit(S::ANGLE_TOL);
        let third = S::PI() / S::lit(3.0);
        let exact = [
            (1.0, Self::Y1),
            (2.0, Self::Y2),
            (3.0, Self::Y3),
            (4.0, Self::Y4),
            (5.0, Self::Y5),
        ];
        for (j, class) in exact {
            if (angle - third * S::lit(j)).abs() <= tol {
                return Some(class);
            }
        }
        if angle > third * S::lit(2.0) && angle < S::PI() {
            Some(Self::Y23)
        } else if angle > S::PI() && angle < third * S::lit(4.0) {
            Some(Self::Y34)
        } else {
            None
        }
    }

    /// Largest number of interior edges the class admits.
    pub fn max_interior_edges(self) -> usize {
        match self {
            Self::Y1 | Self::Y2 | Self::Y23 => 0,
            Self::Y3 | Self::Y34 => 1,
            Self::Y4 | Self::Y5 => 2,
        }
    }
}

impl fmt::Display for BoundaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Y1 => "1",
            Self::Y2 => "2",
            Self::Y23 => "2-3",
            Self::Y3 => "3",
            Self::Y34 => "3-4",
            Self::Y4 => "4",
            Self::Y5 => "5",
        })
    }
}

impl Serialize for BoundaryClass {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryVertex<S = f64> {
    pub vertex: usize,
    /// Boundary neighbours, the inner wedge running counterclockwise from
    /// the first to the second.
    pub wedge: (usize, usize),
    pub inner_angle: S,
    pub interior_edges: usize,
    pub class: BoundaryClass,
    /// Angles between consecutive bonds inside the wedge, in order.
    pub pieces: Vec<S>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryProfile<S = f64> {
    /// Boundary particles in counterclockwise order along the boundary.
    pub vertices: Vec<BoundaryVertex<S>>,
    pub gauss_bonnet_sum: S,
}

impl<S: Scalar> BoundaryProfile<S> {
    pub fn boundary_set(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.vertices.iter().map(|b| b.vertex).collect();
        v.sort_unstable();
        v
    }

    pub fn get(&self, vertex: usize) -> Option<&BoundaryVertex<S>> {
        self.vertices.iter().find(|b| b.vertex == vertex)
    }

    pub fn count(&self, class: BoundaryClass, interior_edges: usize) -> usize {
        self.vertices
            .iter()
            .filter(|b| b.class == class && b.interior_edges == interior_edges)
            .count()
    }
}

const PROBE: f64 = 1e-4;

/// Classifies every boundary particle of a connected critical-cone
/// configuration whose boundary is a simple closed polygon without exterior
/// wires.
pub fn boundary_profile<S: Scalar>(analysis: &GraphAnalysis<S>) -> Result<BoundaryProfile<S>> {
    let g = &analysis.graph;
    let hyp = |msg: String| Err(Error::ProfileHypotheses(msg));
    if !is_critical(g.gamma()) {
        return hyp(format!("cone parameter {} is not sqrt(3)/2", g.gamma()));
    }
    if g.vertex_count() == 0 || !g.is_connected() {
        return hyp("bond graph is empty or not connected".into());
    }
    let counts = analysis.classes.counts();
    if counts.wire_exterior > 0 {
        return hyp(format!("{} exterior wire edges", counts.wire_exterior));
    }
    if counts.boundary == 0 {
        return hyp("no faces".into());
    }
    let n = g.vertex_count();
    let mut bnbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut interior = vec![0usize; n];
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        match analysis.classes.of(e) {
            EdgeClass::Boundary => {
                bnbrs[i].push(j);
                bnbrs[j].push(i);
            }
            EdgeClass::Interior => {
                interior[i] += 1;
                interior[j] += 1;
            }
            _ => {}
        }
    }
    let bset = boundary_particles(g, &analysis.classes);
    for &v in &bset {
        if bnbrs[v].len() != 2 {
            return hyp(format!(
                "boundary particle {v} lies on {} boundary edges",
                bnbrs[v].len()
            ));
        }
    }

    // Walk the boundary cycle along half-edges with a face on the left, so
    // the traversal is counterclockwise.
    let start_h = (0..2 * g.edge_count())
        .find(|&h| {
            analysis.classes.of(h / 2) == EdgeClass::Boundary
                && matches!(analysis.faces.side[h], Side::Face(_))
        })
        .expect("a boundary edge exists");
    let mut order = Vec::with_capacity(bset.len());
    let mut h = start_h;
    loop {
        order.push(g.origin(h));
        let v = g.target(h);
        let next = g
            .rotation(v)
            .iter()
            .copied()
            .find(|&k| analysis.classes.of(k / 2) == EdgeClass::Boundary && k / 2 != h / 2)
            .expect("boundary vertex has two boundary edges");
        h = next;
        if h == start_h || order.len() > bset.len() {
            break;
        }
    }
    if order.len() != bset.len() {
        return hyp(format!(
            "boundary cycle visits {} of {} boundary particles",
            order.len(),
            bset.len()
        ));
    }

    let pos = g.positions();
    let two_pi = S::TAU();
    let m = order.len();
    let mut vertices = Vec::with_capacity(m);
    let mut gb = S::zero();
    for &x in &order {
        let (z1, z2) = (bnbrs[x][0], bnbrs[x][1]);
        let d1 = pos[z1] - pos[x];
        let d2 = pos[z2] - pos[x];
        let mut alpha = d2.angle() - d1.angle();
        if alpha <= S::zero() {
            alpha += two_pi;
        }
        // Probe the sector just counterclockwise of z1.
        let rot = g.rotation(x);
        let hz1 = rot
            .iter()
            .position(|&hh| g.target(hh) == z1)
            .expect("z1 is a neighbour");
        let succ = g.direction(rot[(hz1 + 1) % rot.len()]);
        let mut sector = succ.angle() - d1.angle();
        if sector <= S::zero() {
            sector += two_pi;
        }
        let probe = pos[x] + d1.normalized().rotate(sector / S::lit(2.0)) * S::lit(PROBE);
        let inside = analysis
            .faces
            .faces_at(g, x)
            .into_iter()
            .any(|f| analysis.faces.face_contains(g, f, probe));
        let (a, b, inner) = if inside {
            (z1, z2, alpha)
        } else {
            (z2, z1, two_pi - alpha)
        };
        let class = BoundaryClass::from_angle(inner).ok_or_else(|| {
            Error::ProfileHypotheses(format!("particle {x} has inner angle {inner}"))
        })?;
        // consecutive angles from a to b counterclockwise
        let ia = rot.iter().position(|&hh| g.target(hh) == a).unwrap();
        let mut pieces = Vec::new();
        let mut cur = ia;
        loop {
            let nxt = (cur + 1) % rot.len();
            let mut d = g.direction(rot[nxt]).angle() - g.direction(rot[cur]).angle();
            if d <= S::zero() {
                d += two_pi;
            }
            pieces.push(d);
            cur = nxt;
            if g.target(rot[cur]) == b {
                break;
            }
        }
        gb += S::PI() - inner;
        vertices.push(BoundaryVertex {
            vertex: x,
            wedge: (a, b),
            inner_angle: inner,
            interior_edges: interior[x],
            class,
            pieces,
        });
    }
    Ok(BoundaryProfile {
        vertices,
        gauss_bonnet_sum: gb,
    })
}

/// Checks the local angle facts at boundary particles with interior edges.
/// Returns one message per violation.
pub fn wedge_violations<S: Scalar>(
    analysis: &GraphAnalysis<S>,
    profile: &BoundaryProfile<S>,
) -> Vec<String> {
    let g = &analysis.graph;
    let tol = S::lit(S::ANGLE_TOL);
    let third = S::PI() / S::lit(3.0);
    let is = |a: S, k: f64| (a - third * S::lit(k)).abs() <= tol;
    let mut out = Vec::new();
    for b in &profile.vertices {
        let x = b.vertex;
        let rot = g.rotation(x);
        let ia = rot.iter().position(|&h| g.target(h) == b.wedge.0).unwrap();
        // Direction bisecting the piece with index `p`.
        let bisector = |p: usize| {
            let d0 = g.direction(rot[(ia + p) % rot.len()]).normalized();
            d0.rotate(b.pieces[p] / S::lit(2.0))
        };
        let parallel = |p: usize| bisector(p).cross(g.orientations()[x]).abs() <= tol;
        if b.interior_edges > b.class.max_interior_edges() {
            out.push(format!(
                "particle {x} in class {} has {} interior edges",
                b.class, b.interior_edges
            ));
            continue;
        }
        if b.pieces.len() != b.interior_edges + 1 {
            // interior wires add pieces without interior edges
            continue;
        }
        match (b.class, b.interior_edges) {
            (BoundaryClass::Y3 | BoundaryClass::Y34, 1) => {
                let p = if is(b.pieces[0], 1.0) {
                    Some(0)
                } else if is(b.pieces[1], 1.0) {
                    Some(1)
                } else {
                    None
                };
                match p {
                    None => out.push(format!("particle {x}: no pi/3 angle next to its interior edge")),
                    Some(p) if !parallel(p) => {
                        out.push(format!("particle {x}: orientation not along the pi/3 bisector"))
                    }
                    _ => {}
                }
            }
            (BoundaryClass::Y4, 2) => {
                let ok = is(b.pieces[0], 1.0) && is(b.pieces[1], 2.0) && is(b.pieces[2], 1.0);
                if !ok {
                    out.push(format!("particle {x}: wedge pattern is not pi/3, 2pi/3, pi/3"));
                } else if !(parallel(0) && parallel(2)) {
                    out.push(format!("particle {x}: orientation not along the pi/3 bisectors"));
                }
            }
            (BoundaryClass::Y5, 2) => {
                let ok = is(b.pieces[0], 2.0) && is(b.pieces[1], 1.0) && is(b.pieces[2], 2.0);
                if !ok {
                    out.push(format!("particle {x}: wedge pattern is not 2pi/3, pi/3, 2pi/3"));
                } else if !parallel(1) {
                    out.push(format!("particle {x}: orientation not along the pi/3 bisector"));
                }
            }
            _ => {}
        }
    }
    out
}

/// `Per_gr >= #boundary particles` for a connected configuration of at
/// least two particles.
pub fn check_puntidibordo<S: Scalar>(analysis: &GraphAnalysis<S>) -> Result<bool> {
    let g = &analysis.graph;
    if g.vertex_count() < 2 {
        return Err(Error::TooSmall(format!("{} particles, need 2", g.vertex_count())));
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let per_gr = graph_perimeter(&analysis.classes).per_gr;
    Ok(per_gr >= boundary_particles(g, &analysis.classes).len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IncreaseCheck {
    #[serde(serialize_with = "ratio")]
    pub f_outer: Rational64,
    #[serde(serialize_with = "ratio")]
    pub f_inner: Rational64,
    pub ok: bool,
}

fn ratio<Z: Serializer>(r: &Rational64, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_f64(*r.numer() as f64 / *r.denom() as f64)
}

/// Compares the surface term of a configuration with that of the
/// configuration left after deleting its boundary particles.
pub fn check_increase<S: Scalar>(
    config: &Configuration<S>,
    analysis: &GraphAnalysis<S>,
    tol: &Tolerances<S>,
) -> Result<IncreaseCheck> {
    let g = &analysis.graph;
    if g.vertex_count() < 8 {
        return Err(Error::TooSmall(format!("{} particles, need 8", g.vertex_count())));
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let f_outer = decompose_analysis(analysis)?.f_surface;
    let bset = boundary_particles(g, &analysis.classes);
    let mut is_b = vec![false; g.vertex_count()];
    for &v in &bset {
        is_b[v] = true;
    }
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&v| !is_b[v]).collect();
    let inner = config.subset(&keep);
    let f_inner = decompose(&inner, tol)?.f_surface;
    Ok(IncreaseCheck {
        f_outer,
        f_inner,
        ok: f_outer >= f_inner + Rational64::from_integer(4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical;
    use crate::energy::analyze;

    fn critical(n: u64) -> (Configuration<f64>, GraphAnalysis<f64>) {
        let c = canonical(n);
        let a = analyze(&c, 3f64.sqrt() / 2.0, &Tolerances::default()).unwrap();
        (c, a)
    }

    #[test]
    fn rhombus_corners() {
        let (_, a) = critical(4);
        let p = boundary_profile(&a).unwrap();
        assert_eq!(p.count(BoundaryClass::Y1, 0), 2);
        assert_eq!(p.count(BoundaryClass::Y2, 0), 2);
        assert!((p.gauss_bonnet_sum - std::f64::consts::TAU).abs() < 1e-9);
    }

    #[test]
    fn large_rhombus_sides_are_straight() {
        let (_, a) = critical(25);
        let p = boundary_profile(&a).unwrap();
        assert_eq!(p.vertices.len(), 16);
        assert_eq!(p.count(BoundaryClass::Y3, 1), 12);
        assert!(wedge_violations(&a, &p).is_empty());
        assert!((p.gauss_bonnet_sum - std::f64::consts::TAU).abs() < 1e-9);
    }

    #[test]
    fn partial_shells_profile() {
        let mut profiled = 0;
        for n in 4..80 {
            let (_, a) = critical(n);
            // a single shell site hangs on an exterior wire
            let Ok(p) = boundary_profile(&a) else {
                assert!(a.classes.counts().wire_exterior > 0, "n = {n}");
                continue;
            };
            profiled += 1;
            assert!((p.gauss_bonnet_sum - std::f64::consts::TAU).abs() < 1e-6, "n = {n}");
            assert!(wedge_violations(&a, &p).is_empty(), "n = {n}");
        }
        assert!(profiled > 60);
    }

    #[test]
    fn y9_and_y16_increase() {
        let tol = Tolerances::default();
        let (c, a) = critical(16);
        let r = check_increase(&c, &a, &tol).unwrap();
        assert_eq!(r.f_outer, Rational64::from_integer(8));
        assert_eq!(r.f_inner, Rational64::from_integer(4));
        assert!(r.ok);
        let (c, a) = critical(9);
        let r = check_increase(&c, &a, &tol).unwrap();
        assert_eq!((r.f_outer, r.f_inner), (Rational64::from_integer(6), Rational64::from_integer(2)));
        let (c, a) = critical(5);
        assert!(matches!(check_increase(&c, &a, &tol), Err(Error::TooSmall(_))));
    }

    #[test]
    fn single_edge_boundary_count() {
        let (_, a) = critical(2);
        assert!(check_puntidibordo(&a).unwrap());
        assert!(matches!(boundary_profile(&a), Err(Error::ProfileHypotheses(_))));
    }
}
