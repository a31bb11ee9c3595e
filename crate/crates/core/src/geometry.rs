//! Configurations of oriented hard discs, lattice helpers and rigid motions.
//!
//! Lengths are measured in disc diameters, so two particles touch at
//! distance 1 and admissible configurations keep every pair at least that far
//! apart.

use std::collections::HashMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Vec2<S> {
    #[inline]
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    /// Unit vector at polar angle `theta`.
    #[inline]
    pub fn from_angle(theta: S) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    #[inline]
    pub fn dot(self, o: Self) -> S {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> S {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> S {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> S {
        self.norm_sq().sqrt()
    }

    /// Polar angle in `(-pi, pi]`.
    #[inline]
    pub fn angle(self) -> S {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn rotate(self, theta: S) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }

    #[inline]
    pub fn dist(self, o: Self) -> S {
        (self - o).norm()
    }

    pub fn cast<T: Scalar>(self) -> Vec2<T> {
        Vec2::new(T::lit(self.x.as_f64()), T::lit(self.y.as_f64()))
    }
}

impl<S: Scalar> Add for Vec2<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<S: Scalar> AddAssign for Vec2<S> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl<S: Scalar> Sub for Vec2<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<S: Scalar> Neg for Vec2<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<S: Scalar> Mul<S> for Vec2<S> {
    type Output = Self;
    #[inline]
    fn mul(self, k: S) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

/// A disc center with its orientation (a unit vector).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Particle<S> {
    pub pos: Vec2<S>,
    pub ori: Vec2<S>,
}

impl<S: Scalar> Particle<S> {
    pub fn new(pos: Vec2<S>, ori: Vec2<S>) -> Self {
        Self { pos, ori }
    }
}

/// Ordered list of particles plus a free-form label.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Configuration<S = f64> {
    pub particles: Vec<Particle<S>>,
    pub label: String,
}

impl<S: Scalar> Configuration<S> {
    pub fn new(particles: Vec<Particle<S>>) -> Self {
        Self {
            particles,
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Builds a configuration where every particle shares the orientation `ori`.
    pub fn uniform(positions: impl IntoIterator<Item = Vec2<S>>, ori: Vec2<S>) -> Self {
        Self::new(positions.into_iter().map(|p| Particle::new(p, ori)).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.particles.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn positions(&self) -> Vec<Vec2<S>> {
        self.particles.iter().map(|p| p.pos).collect()
    }

    /// Sub-configuration made of the given particle indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            particles: indices.iter().map(|&i| self.particles[i]).collect(),
            label: self.label.clone(),
        }
    }

    /// Appends all particles of `other` translated by `shift`.
    pub fn extend_translated(&mut self, other: &Self, shift: Vec2<S>) {
        self.particles.extend(
            other
                .particles
                .iter()
                .map(|p| Particle::new(p.pos + shift, p.ori)),
        );
    }

    pub fn cast<T: Scalar>(&self) -> Configuration<T> {
        Configuration {
            particles: self
                .particles
                .iter()
                .map(|p| Particle::new(p.pos.cast(), p.ori.cast()))
                .collect(),
            label: self.label.clone(),
        }
    }
}

/// Numerical bands replacing the exact equalities of the continuum model.
///
/// Bond test: `|dist - 1| <= eps_dist`. Admissibility: `dist >= 1 - eps_dist`.
/// Cone test: `<u, v> >= gamma - eps_angle`; unit orientations are checked
/// against `eps_angle` as well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances<S = f64> {
    pub eps_dist: S,
    pub eps_angle: S,
}

impl<S: Scalar> Tolerances<S> {
    pub fn new(eps_dist: S, eps_angle: S) -> Result<Self> {
        let max = S::lit(1e-3);
        for (name, v) in [("eps_dist", eps_dist), ("eps_angle", eps_angle)] {
            if !(v > S::zero() && v < max) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} must lie in (0, 1e-3)"
                )));
            }
        }
        Ok(Self {
            eps_dist,
            eps_angle,
        })
    }
}

impl<S: Scalar> Default for Tolerances<S> {
    fn default() -> Self {
        Self {
            eps_dist: S::lit(S::DEFAULT_EPS),
            eps_angle: S::lit(S::DEFAULT_EPS),
        }
    }
}

/// Uniform bucket grid with cells slightly wider than one diameter, so all
/// pairs at distance `<= 1 + eps` sit in neighbouring cells. Compact
/// point sets use a dense cell array, sparse ones a hash map.
pub(crate) struct SpatialGrid {
    inv_cell: f64,
    store: Store,
}

enum Store {
    Dense {
        x0: i64,
        y0: i64,
        w: i64,
        h: i64,
        /// `items[start[c]..start[c + 1]]` are the points of cell `c`.
        start: Vec<u32>,
        items: Vec<u32>,
    },
    Sparse(HashMap<(i64, i64), Vec<usize>>),
}

impl SpatialGrid {
    const CELL: f64 = 1.001;

    pub(crate) fn new<S: Scalar>(points: &[Vec2<S>]) -> Self {
        let inv_cell = 1.0 / Self::CELL;
        let keys: Vec<(i64, i64)> = points.iter().map(|&p| Self::key(p, inv_cell)).collect();
        let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for &(x, y) in &keys {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let dense_ok = !keys.is_empty()
            && points.len() < u32::MAX as usize
            && (x1 - x0) < 1 << 20
            && (y1 - y0) < 1 << 20
            && ((x1 - x0 + 1) * (y1 - y0 + 1)) as usize <= 4 * points.len() + 64;
        let store = if dense_ok {
            let (w, h) = (x1 - x0 + 1, y1 - y0 + 1);
            let cell = |k: (i64, i64)| ((k.1 - y0) * w + (k.0 - x0)) as usize;
            let mut start = vec![0u32; (w * h) as usize + 1];
            for &k in &keys {
                start[cell(k) + 1] += 1;
            }
            for c in 0..(w * h) as usize {
                start[c + 1] += start[c];
            }
            let mut fill = start.clone();
            let mut items = vec![0u32; keys.len()];
            for (i, &k) in keys.iter().enumerate() {
                let c = cell(k);
                items[fill[c] as usize] = i as u32;
                fill[c] += 1;
            }
            Store::Dense {
                x0,
                y0,
                w,
                h,
                start,
                items,
            }
        } else {
            let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::with_capacity(points.len());
            for (i, &k) in keys.iter().enumerate() {
                cells.entry(k).or_default().push(i);
            }
            Store::Sparse(cells)
        };
        Self { inv_cell, store }
    }

    #[inline]
    fn key<S: Scalar>(p: Vec2<S>, inv_cell: f64) -> (i64, i64) {
        // truncation then correction; cheaper than floor without SSE4.1
        let fl = |x: f64| {
            let t = x as i64;
            if (t as f64) > x {
                t - 1
            } else {
                t
            }
        };
        (fl(p.x.as_f64() * inv_cell), fl(p.y.as_f64() * inv_cell))
    }

    /// Calls `f` on every index stored in the 3x3 block of cells around `p`.
    #[inline]
    pub(crate) fn for_near<S: Scalar>(&self, p: Vec2<S>, mut f: impl FnMut(usize)) {
        let (cx, cy) = Self::key(p, self.inv_cell);
        match &self.store {
            Store::Dense {
                x0,
                y0,
                w,
                h,
                start,
                items,
            } => {
                for y in (cy - 1).max(*y0)..=(cy + 1).min(y0 + h - 1) {
                    let xa = (cx - 1).max(*x0);
                    let xb = (cx + 1).min(x0 + w - 1);
                    if xa > xb {
                        continue;
                    }
                    // cells of one row are contiguous
                    let row = (y - y0) * w;
                    let a = start[(row + xa - x0) as usize] as usize;
                    let b = start[(row + xb - x0) as usize + 1] as usize;
                    for &i in &items[a..b] {
                        f(i as usize);
                    }
                }
            }
            Store::Sparse(cells) => {
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        if let Some(v) = cells.get(&(cx + dx, cy + dy)) {
                            v.iter().for_each(|&i| f(i));
                        }
                    }
                }
            }
        }
    }

    /// All unordered pairs `(i, j)`, `i < j`, at distance `<= 1 + slack`,
    /// in lexicographic order.
    pub(crate) fn close_pairs<S: Scalar>(points: &[Vec2<S>], slack: S) -> Vec<(usize, usize)> {
        let grid = Self::new(points);
        let r2 = (S::one() + slack) * (S::one() + slack);
        let mut out = Vec::with_capacity(3 * points.len());
        for (i, &p) in points.iter().enumerate() {
            let from = out.len();
            grid.for_near(p, |j| {
                if j > i && (points[j] - p).norm_sq() <= r2 {
                    out.push((i, j));
                }
            });
            out[from..].sort_unstable();
        }
        out
    }
}

/// First violation of admissibility, if any.
pub fn admissibility_violation<S: Scalar>(
    config: &Configuration<S>,
    tol: &Tolerances<S>,
) -> Option<String> {
    particle_violation(config, tol).or_else(|| contacts_if_admissible(&config.positions(), tol).err())
}

/// Non-unit orientation or non-finite position.
pub(crate) fn particle_violation<S: Scalar>(
    config: &Configuration<S>,
    tol: &Tolerances<S>,
) -> Option<String> {
    for (i, p) in config.particles.iter().enumerate() {
        let n = p.ori.norm();
        if !n.is_finite() || (n - S::one()).abs() > tol.eps_angle {
            return Some(format!("particle {i} has orientation norm {n}"));
        }
        if !(p.pos.x.is_finite() && p.pos.y.is_finite()) {
            return Some(format!("particle {i} has a non-finite position"));
        }
    }
    None
}

/// Pairs at distance `<= 1 + eps_dist` in lexicographic order, or the first
/// pair closer than `1 - eps_dist`.
pub(crate) fn contacts_if_admissible<S: Scalar>(
    positions: &[Vec2<S>],
    tol: &Tolerances<S>,
) -> std::result::Result<Vec<(usize, usize)>, String> {
    let min2 = (S::one() - tol.eps_dist) * (S::one() - tol.eps_dist);
    let max2 = (S::one() + tol.eps_dist) * (S::one() + tol.eps_dist);
    let grid = SpatialGrid::new(positions);
    let mut out = Vec::with_capacity(3 * positions.len());
    let mut bad = None;
    for (i, &p) in positions.iter().enumerate() {
        let from = out.len();
        grid.for_near(p, |j| {
            if j > i {
                let d2 = (positions[j] - p).norm_sq();
                if d2 < min2 {
                    bad.get_or_insert((j, d2.sqrt()));
                } else if d2 <= max2 {
                    out.push((i, j));
                }
            }
        });
        if let Some((j, d)) = bad {
            return Err(format!("particles {i} and {j} at distance {d}"));
        }
        out[from..].sort_unstable();
    }
    Ok(out)
}

/// Hard-disc admissibility with unit orientations.
pub fn is_admissible<S: Scalar>(config: &Configuration<S>, tol: &Tolerances<S>) -> bool {
    admissibility_violation(config, tol).is_none()
}

/// Point `a (1, 0) + b (1/2, sqrt(3)/2)` of the unit triangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeCoord {
    pub a: i64,
    pub b: i64,
}

impl LatticeCoord {
    /// The six unit steps of the lattice, counterclockwise from (1, 0).
    pub const UNIT_STEPS: [LatticeCoord; 6] = [
        LatticeCoord { a: 1, b: 0 },
        LatticeCoord { a: 0, b: 1 },
        LatticeCoord { a: -1, b: 1 },
        LatticeCoord { a: -1, b: 0 },
        LatticeCoord { a: 0, b: -1 },
        LatticeCoord { a: 1, b: -1 },
    ];

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn embed<S: Scalar>(self) -> Vec2<S> {
        let a = S::lit(self.a as f64);
        let b = S::lit(self.b as f64);
        Vec2::new(a + b / S::lit(2.0), b * S::sqrt3_2())
    }

    /// Squared Euclidean norm of the embedded point, `a^2 + ab + b^2`.
    pub const fn norm_sq(self) -> i64 {
        self.a * self.a + self.a * self.b + self.b * self.b
    }

    pub const fn is_unit(self) -> bool {
        self.norm_sq() == 1
    }

    /// Rotation by pi/3 about the origin.
    pub const fn rotate60(self) -> Self {
        Self::new(-self.b, self.a + self.b)
    }

    /// Reflection across the horizontal axis.
    pub const fn reflect(self) -> Self {
        Self::new(self.a + self.b, -self.b)
    }

    pub fn neighbors(self) -> impl Iterator<Item = LatticeCoord> {
        Self::UNIT_STEPS.into_iter().map(move |s| self + s)
    }
}

impl Add for LatticeCoord {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for LatticeCoord {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

/// Closed convex polygon given by its vertices (either orientation).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion<S = f64> {
    pub vertices: Vec<Vec2<S>>,
}

impl<S: Scalar> ConvexRegion<S> {
    pub fn new(vertices: Vec<Vec2<S>>) -> Self {
        Self { vertices }
    }

    /// Closed rhombus with angles pi/3, 2pi/3 whose long diagonal is
    /// `{0} x [0, sqrt(3) l]`.
    pub fn rhombus(l: u32) -> Self {
        let l = S::lit(l as f64);
        let h = S::sqrt3_2() * l;
        let half = l / S::lit(2.0);
        Self::new(vec![
            Vec2::new(S::zero(), S::zero()),
            Vec2::new(half, h),
            Vec2::new(S::zero(), h + h),
            Vec2::new(-half, h),
        ])
    }

    fn signed_area(&self) -> S {
        polygon_signed_area(&self.vertices)
    }
}

/// Shoelace signed area (positive for counterclockwise).
pub fn polygon_signed_area<S: Scalar>(pts: &[Vec2<S>]) -> S {
    let n = pts.len();
    let mut acc = S::zero();
    for i in 0..n {
        acc += pts[i].cross(pts[(i + 1) % n]);
    }
    acc / S::lit(2.0)
}

/// Lattice points inside the closed region, ordered lexicographically in `(b, a)`.
pub fn lattice_patch<S: Scalar>(region: &ConvexRegion<S>) -> Result<Vec<LatticeCoord>> {
    if region.vertices.is_empty() {
        return Ok(Vec::new());
    }
    if region.vertices.len() < 3
        || region
            .vertices
            .iter()
            .any(|v| !(v.x.is_finite() && v.y.is_finite()))
    {
        return Err(Error::UnboundedRegion(
            "need at least three finite vertices".into(),
        ));
    }
    let area = region.signed_area();
    let p0: Vec2<f64> = region.vertices[0].cast();
    if region.vertices.iter().all(|v| v.cast::<f64>().dist(p0) <= 1e-12) {
        // a single point, as for R_0
        let b = (p0.y * 2.0 / 3f64.sqrt()).round() as i64;
        let a = (p0.x - b as f64 / 2.0).round() as i64;
        let c = LatticeCoord::new(a, b);
        return Ok(if c.embed::<f64>().dist(p0) <= 1e-9 { vec![c] } else { Vec::new() });
    }
    if area.abs() <= S::lit(1e-12) {
        return Err(Error::UnboundedRegion("zero-area polygon".into()));
    }
    let mut verts: Vec<Vec2<f64>> = region.vertices.iter().map(|v| v.cast()).collect();
    if area < S::zero() {
        verts.reverse();
    }
    let n = verts.len();
    for i in 0..n {
        let (p, q, r) = (verts[i], verts[(i + 1) % n], verts[(i + 2) % n]);
        if (q - p).cross(r - q) < -1e-12 {
            return Err(Error::UnboundedRegion("polygon is not convex".into()));
        }
    }
    let inside = |x: Vec2<f64>| {
        (0..n).all(|i| {
            let (p, q) = (verts[i], verts[(i + 1) % n]);
            let e = q - p;
            e.cross(x - p) >= -1e-9 * e.norm().max(1.0)
        })
    };
    let h = 3f64.sqrt() / 2.0;
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for v in &verts {
        xmin = xmin.min(v.x);
        xmax = xmax.max(v.x);
        ymin = ymin.min(v.y);
        ymax = ymax.max(v.y);
    }
    let mut out = Vec::new();
    let b_lo = (ymin / h).floor() as i64 - 1;
    let b_hi = (ymax / h).ceil() as i64 + 1;
    for b in b_lo..=b_hi {
        let a_lo = (xmin - b as f64 / 2.0).floor() as i64 - 1;
        let a_hi = (xmax - b as f64 / 2.0).ceil() as i64 + 1;
        for a in a_lo..=a_hi {
            let c = LatticeCoord::new(a, b);
            if inside(c.embed()) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Rotates positions and orientations by `rotation`, translates positions,
/// and optionally negates every orientation.
pub fn apply_rigid_motion<S: Scalar>(
    config: &Configuration<S>,
    rotation: S,
    translation: Vec2<S>,
    flip_orientations: bool,
) -> Configuration<S> {
    let particles = config
        .particles
        .iter()
        .map(|p| {
            let ori = p.ori.rotate(rotation);
            Particle::new(
                p.pos.rotate(rotation) + translation,
                if flip_orientations { -ori } else { ori },
            )
        })
        .collect();
    Configuration {
        particles,
        label: config.label.clone(),
    }
}

/// Maps positions by `diag(1 + rho, sqrt(3 - rho^2 - 2 rho) / sqrt(3))`,
/// which sends the triangular lattice onto a unit rhombic lattice.
pub fn rhombic_perturb<S: Scalar>(config: &Configuration<S>, rho: S) -> Result<Configuration<S>> {
    if !(rho >= S::zero() && rho < S::one()) {
        return Err(Error::InvalidRho(rho.as_f64()));
    }
    let three = S::lit(3.0);
    let sx = S::one() + rho;
    let sy = (three - rho * rho - rho - rho).sqrt() / three.sqrt();
    let particles = config
        .particles
        .iter()
        .map(|p| Particle::new(Vec2::new(p.pos.x * sx, p.pos.y * sy), p.ori))
        .collect();
    Ok(Configuration {
        particles,
        label: config.label.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up() -> Vec2<f64> {
        Vec2::new(0.0, 1.0)
    }

    #[test]
    fn touching_pair_is_admissible() {
        let c = Configuration::uniform([Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)], up());
        assert!(is_admissible(&c, &Tolerances::default()));
    }

    #[test]
    fn overlapping_pair_is_rejected() {
        let c = Configuration::uniform([Vec2::new(0.0, 0.0), Vec2::new(0.9, 0.0)], up());
        assert!(!is_admissible(&c, &Tolerances::default()));
    }

    #[test]
    fn non_unit_orientation_is_rejected() {
        let c = Configuration::uniform([Vec2::new(0.0, 0.0)], Vec2::new(0.0, 1.1));
        assert!(!is_admissible(&c, &Tolerances::default()));
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerances::new(1e-9, 1e-9).is_ok());
        assert!(Tolerances::new(0.0, 1e-9).is_err());
        assert!(Tolerances::new(1e-9, 1e-2).is_err());
    }

    #[test]
    fn lattice_norm_matches_embedding() {
        for a in -4..=4 {
            for b in -4..=4 {
                let c = LatticeCoord::new(a, b);
                let e: Vec2<f64> = c.embed();
                assert!((e.norm_sq() - c.norm_sq() as f64).abs() < 1e-12);
            }
        }
        let unit: Vec<_> = LatticeCoord::UNIT_STEPS.iter().map(|s| s.norm_sq()).collect();
        assert_eq!(unit, vec![1; 6]);
    }

    #[test]
    fn rotate60_six_times_is_identity() {
        let c = LatticeCoord::new(3, -2);
        let mut r = c;
        for _ in 0..6 {
            r = r.rotate60();
        }
        assert_eq!(r, c);
        let e: Vec2<f64> = c.rotate60().embed();
        let expect = c.embed::<f64>().rotate(std::f64::consts::FRAC_PI_3);
        assert!((e - expect).norm() < 1e-12);
    }

    #[test]
    fn patch_of_unit_rhombus_has_four_points() {
        let pts = lattice_patch(&ConvexRegion::<f64>::rhombus(1)).unwrap();
        assert_eq!(pts.len(), 4);
        let pts = lattice_patch(&ConvexRegion::<f64>::rhombus(3)).unwrap();
        assert_eq!(pts.len(), 16);
    }

    #[test]
    fn patch_order_is_lexicographic_in_b_then_a() {
        let pts = lattice_patch(&ConvexRegion::<f64>::rhombus(4)).unwrap();
        let keys: Vec<_> = pts.iter().map(|c| (c.b, c.a)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn empty_and_degenerate_regions() {
        assert!(lattice_patch(&ConvexRegion::<f64>::new(vec![]))
            .unwrap()
            .is_empty());
        // small triangle that contains no lattice point
        let tri = ConvexRegion::new(vec![
            Vec2::new(0.2, 0.1),
            Vec2::new(0.4, 0.1),
            Vec2::new(0.3, 0.3),
        ]);
        assert!(lattice_patch(&tri).unwrap().is_empty());
        let seg = ConvexRegion::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
        ]);
        let err = lattice_patch(&seg).unwrap_err();
        assert!(err.to_string().starts_with("unbounded-region"));
        let inf = ConvexRegion::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(f64::INFINITY, 0.0),
            Vec2::new(0.0, 1.0),
        ]);
        assert!(lattice_patch(&inf).is_err());
    }

    #[test]
    fn identity_motion_is_identity() {
        let c = Configuration::uniform([Vec2::new(0.3, 0.1), Vec2::new(1.3, 0.1)], up());
        assert_eq!(apply_rigid_motion(&c, 0.0, Vec2::zero(), false), c);
    }

    #[test]
    fn rho_zero_is_identity_and_range_checked() {
        let c = Configuration::uniform([Vec2::new(0.5, 3f64.sqrt() / 2.0)], up());
        let p = rhombic_perturb(&c, 0.0).unwrap();
        assert!((p.particles[0].pos - c.particles[0].pos).norm() < 1e-15);
        assert!(matches!(rhombic_perturb(&c, 1.0), Err(Error::InvalidRho(_))));
        assert!(matches!(rhombic_perturb(&c, -0.1), Err(Error::InvalidRho(_))));
    }

    #[test]
    fn perturbation_keeps_slanted_bonds_unit() {
        let c = Configuration::uniform(
            [
                Vec2::new(0.0, 0.0),
                Vec2::new(0.5, 3f64.sqrt() / 2.0),
                Vec2::new(1.0, 0.0),
            ],
            up(),
        );
        let p = rhombic_perturb(&c, 0.2).unwrap();
        let d = p.particles[0].pos.dist(p.particles[1].pos);
        assert!((d - 1.0).abs() < 1e-12);
        let h = p.particles[0].pos.dist(p.particles[2].pos);
        assert!((h - 1.2).abs() < 1e-12);
    }
}
