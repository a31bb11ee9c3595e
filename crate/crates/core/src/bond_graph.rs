//! The gamma-threshold bond graph and its planar rotation system.
//!
//! Two particles are bonded when they touch and the vector joining them lies
//! in both visual cones, read in the same direction for both particles.
//! Edges are stored once as `(i, j)` with `i < j`; edge `e` owns the
//! half-edges `2e` (`i -> j`) and `2e + 1` (`j -> i`). Around every vertex
//! the outgoing half-edges are kept sorted counterclockwise by polar angle.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::{
    contacts_if_admissible, particle_violation, Configuration, SpatialGrid, Tolerances, Vec2,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct BondGraph<S = f64> {
    positions: Vec<Vec2<S>>,
    orientations: Vec<Vec2<S>>,
    edges: Vec<(usize, usize)>,
    gamma: S,
    /// `rot[rot_start[v]..rot_start[v + 1]]` is the rotation at `v`.
    rot: Vec<usize>,
    rot_start: Vec<usize>,
    rot_index: Vec<usize>,
    /// Built from an admissible configuration with `eps_dist <= 1e-3`.
    hard_discs: bool,
}

/// Cone test for an already-touching pair.
#[inline]
pub fn in_both_cones<S: Scalar>(
    pi: Vec2<S>,
    vi: Vec2<S>,
    pj: Vec2<S>,
    vj: Vec2<S>,
    gamma: S,
    eps_angle: S,
) -> bool {
    let d = pj - pi;
    let thr = gamma - eps_angle;
    (d.dot(vi) >= thr && d.dot(vj) >= thr) || ((-d).dot(vi) >= thr && (-d).dot(vj) >= thr)
}

/// Full bond predicate: unit distance within `eps_dist` plus the cone test.
#[inline]
pub fn is_bond<S: Scalar>(
    pi: Vec2<S>,
    vi: Vec2<S>,
    pj: Vec2<S>,
    vj: Vec2<S>,
    gamma: S,
    tol: &Tolerances<S>,
) -> bool {
    ((pj - pi).norm() - S::one()).abs() <= tol.eps_dist
        && in_both_cones(pi, vi, pj, vj, gamma, tol.eps_angle)
}

fn check_gamma<S: Scalar>(gamma: S) -> Result<()> {
    if gamma >= S::zero() && gamma <= S::one() {
        Ok(())
    } else {
        Err(Error::InvalidGamma(format!("{gamma} not in [0, 1]")))
    }
}

/// Builds the bond graph of an admissible configuration.
pub fn build_edges<S: Scalar>(
    config: &Configuration<S>,
    gamma: S,
    tol: &Tolerances<S>,
) -> Result<BondGraph<S>> {
    check_gamma(gamma)?;
    if let Some(why) = particle_violation(config, tol) {
        return Err(Error::NotAdmissible(why));
    }
    let pos = config.positions();
    let ori: Vec<_> = config.particles.iter().map(|p| p.ori).collect();
    let edges = contacts_if_admissible(&pos, tol)
        .map_err(Error::NotAdmissible)?
        .into_iter()
        .filter(|&(i, j)| is_bond(pos[i], ori[i], pos[j], ori[j], gamma, tol))
        .collect();
    let mut g = BondGraph::from_edges(pos, ori, gamma, edges);
    g.hard_discs = tol.eps_dist <= S::lit(1e-3);
    Ok(g)
}

/// Hard-sphere contact pairs, independent of orientations.
pub fn contact_pairs<S: Scalar>(config: &Configuration<S>, tol: &Tolerances<S>) -> Vec<(usize, usize)> {
    let pos = config.positions();
    SpatialGrid::close_pairs(&pos, tol.eps_dist)
        .into_iter()
        .filter(|&(i, j)| ((pos[j] - pos[i]).norm() - S::one()).abs() <= tol.eps_dist)
        .collect()
}

/// Increasing function of the polar angle on `(-pi, pi]`, without atan2.
#[inline]
fn pseudo_angle<S: Scalar>(d: Vec2<S>) -> S {
    let r = d.y / (d.x.abs() + d.y.abs());
    let two = S::lit(2.0);
    if d.x >= S::zero() {
        r
    } else if d.y >= S::zero() {
        two - r
    } else {
        -two - r
    }
}

impl<S: Scalar> BondGraph<S> {
    /// Assembles a graph from explicit straight edges. The caller is
    /// responsible for planarity; [`extract_faces`](crate::faces::extract_faces)
    /// reports violations.
    pub fn from_edges(
        positions: Vec<Vec2<S>>,
        orientations: Vec<Vec2<S>>,
        gamma: S,
        edges: Vec<(usize, usize)>,
    ) -> Self {
        assert_eq!(positions.len(), orientations.len());
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(i, j)| if i < j { (i, j) } else { (j, i) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let n = positions.len();
        let mut rot_start = vec![0usize; n + 1];
        for &(i, j) in &edges {
            assert!(i != j && j < n, "bad edge ({i}, {j})");
            rot_start[i + 1] += 1;
            rot_start[j + 1] += 1;
        }
        for v in 0..n {
            rot_start[v + 1] += rot_start[v];
        }
        let mut fill = rot_start.clone();
        let mut rot = vec![0usize; 2 * edges.len()];
        for (e, &(i, j)) in edges.iter().enumerate() {
            rot[fill[i]] = 2 * e;
            fill[i] += 1;
            rot[fill[j]] = 2 * e + 1;
            fill[j] += 1;
        }
        let mut g = Self {
            positions,
            orientations,
            edges,
            gamma,
            rot: Vec::new(),
            rot_start,
            rot_index: Vec::new(),
            hard_discs: false,
        };
        let angle: Vec<S> = (0..rot.len()).map(|h| pseudo_angle(g.direction(h))).collect();
        let mut rot_index = vec![0; rot.len()];
        for v in 0..n {
            let hs = &mut rot[g.rot_start[v]..g.rot_start[v + 1]];
            hs.sort_by(|&a, &b| {
                angle[a]
                    .partial_cmp(&angle[b])
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            for (k, &h) in hs.iter().enumerate() {
                rot_index[h] = k;
            }
        }
        g.rot = rot;
        g.rot_index = rot_index;
        g
    }

    /// True when the graph came from [`build_edges`] on an admissible
    /// configuration, so its bonds are unit segments between discs that do
    /// not overlap.
    #[inline]
    pub fn from_hard_discs(&self) -> bool {
        self.hard_discs
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn gamma(&self) -> S {
        self.gamma
    }

    #[inline]
    pub fn positions(&self) -> &[Vec2<S>] {
        &self.positions
    }

    #[inline]
    pub fn orientations(&self) -> &[Vec2<S>] {
        &self.orientations
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rot_start[v + 1] - self.rot_start[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Outgoing half-edges of `v`, counterclockwise.
    #[inline]
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[self.rot_start[v]..self.rot_start[v + 1]]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rotation(v).iter().map(move |&h| self.target(h))
    }

    #[inline]
    pub fn origin(&self, h: usize) -> usize {
        let (i, j) = self.edges[h / 2];
        if h.is_multiple_of(2) {
            i
        } else {
            j
        }
    }

    #[inline]
    pub fn target(&self, h: usize) -> usize {
        self.origin(h ^ 1)
    }

    #[inline]
    pub fn twin(h: usize) -> usize {
        h ^ 1
    }

    #[inline]
    pub fn edge_of(h: usize) -> usize {
        h / 2
    }

    #[inline]
    pub fn direction(&self, h: usize) -> Vec2<S> {
        self.positions[self.target(h)] - self.positions[self.origin(h)]
    }

    /// Successor of `h` along the boundary walk that keeps its region on the
    /// left: the half-edge leaving `target(h)` just clockwise of the twin.
    #[inline]
    pub fn next_in_walk(&self, h: usize) -> usize {
        let v = self.target(h);
        let t = Self::twin(h);
        let (a, b) = (self.rot_start[v], self.rot_start[v + 1]);
        let k = self.rot_index[t];
        self.rot[if k == 0 { b - 1 } else { a + k - 1 }]
    }

    /// Counterclockwise angles between consecutive bonds at `v` (they sum to
    /// 2 pi); empty for isolated vertices.
    pub fn consecutive_angles(&self, v: usize) -> Vec<S> {
        let hs = self.rotation(v);
        let two_pi = S::TAU();
        match hs.len() {
            0 => Vec::new(),
            1 => vec![two_pi],
            k => (0..k)
                .map(|i| {
                    let a = self.direction(hs[i]).angle();
                    let b = self.direction(hs[(i + 1) % k]).angle();
                    let mut d = b - a;
                    if d <= S::zero() {
                        d += two_pi;
                    }
                    d
                })
                .collect(),
        }
    }

    /// Component index per vertex and the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 <= 1
    }
}

/// Connected components as sorted vertex lists, ordered by smallest member.
pub fn connected_components<S: Scalar>(graph: &BondGraph<S>) -> Vec<Vec<usize>> {
    let (label, count) = graph.component_labels();
    let mut out = vec![Vec::new(); count];
    for (v, &c) in label.iter().enumerate() {
        out[c].push(v);
    }
    out
}
