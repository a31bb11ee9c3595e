//! Seeded random configurations for the verification suites.
//!
//! Every generator is a pure function of its seed, so a failing trial is
//! reproduced by its seed alone.

use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bond_graph::{build_edges, connected_components};
use crate::canonical::rhombic_site;
use crate::geometry::{rhombic_perturb, Configuration, LatticeCoord, Particle, Tolerances, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    /// Random connected lattice cluster, orientations up.
    LatticeBlob,
    /// Lattice cluster with some orientations flipped or turned by a
    /// multiple of pi/3.
    TurnedBlob,
    /// Lattice cluster with small random orientation noise.
    NoisyBlob,
    /// Rhombic patch stretched horizontally.
    StretchedPatch,
    /// Rhombic patch with hanging chains.
    WiredPatch,
    /// Off-lattice growth along cone edges.
    ContinuousGrowth,
    /// Patch with a hole holding an isolated particle.
    HoledPatch,
    /// Rhombic patch with boundary sites removed.
    ErodedPatch,
}

impl SampleKind {
    pub const ALL: [SampleKind; 8] = [
        SampleKind::LatticeBlob,
        SampleKind::TurnedBlob,
        SampleKind::NoisyBlob,
        SampleKind::StretchedPatch,
        SampleKind::WiredPatch,
        SampleKind::ContinuousGrowth,
        SampleKind::HoledPatch,
        SampleKind::ErodedPatch,
    ];
}

fn up() -> Vec2<f64> {
    Vec2::new(0.0, 1.0)
}

/// Eden growth of `n` lattice sites from the origin.
pub fn lattice_blob_sites(n: usize, rng: &mut ChaCha8Rng) -> Vec<LatticeCoord> {
    let mut sites = Vec::with_capacity(n);
    let mut occupied = HashSet::new();
    let mut frontier: Vec<LatticeCoord> = Vec::new();
    let mut in_frontier = HashSet::new();
    let mut add = |c: LatticeCoord,
                   sites: &mut Vec<LatticeCoord>,
                   frontier: &mut Vec<LatticeCoord>,
                   occupied: &mut HashSet<LatticeCoord>| {
        occupied.insert(c);
        sites.push(c);
        for d in c.neighbors() {
            if !occupied.contains(&d) && in_frontier.insert(d) {
                frontier.push(d);
            }
        }
    };
    if n > 0 {
        add(LatticeCoord::new(0, 0), &mut sites, &mut frontier, &mut occupied);
    }
    while sites.len() < n {
        let k = rng.random_range(0..frontier.len());
        let c = frontier.swap_remove(k);
        add(c, &mut sites, &mut frontier, &mut occupied);
    }
    sites
}

fn lattice_config(sites: &[LatticeCoord]) -> Configuration<f64> {
    Configuration::uniform(sites.iter().map(|c| c.embed()), up())
}

fn rhombus_sites(l: i64) -> Vec<LatticeCoord> {
    let mut out = Vec::new();
    for j in 0..=l {
        for i in 0..=l {
            out.push(rhombic_site(i, j));
        }
    }
    out
}

fn lattice_blob(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let n = rng.random_range(2..=40);
    lattice_config(&lattice_blob_sites(n, rng))
}

fn turned_blob(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let mut c = lattice_blob(rng);
    let p = rng.random_range(0.05..0.5);
    for part in &mut c.particles {
        if rng.random_bool(p) {
            let k = rng.random_range(1..6) as f64;
            part.ori = part.ori.rotate(k * std::f64::consts::FRAC_PI_3);
        }
    }
    c
}

fn noisy_blob(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let mut c = lattice_blob(rng);
    let amp = [1e-12, 1e-6, 1e-3, 0.05][rng.random_range(0..4)];
    for part in &mut c.particles {
        part.ori = part.ori.rotate(rng.random_range(-amp..=amp));
    }
    c
}

fn stretched_patch(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let l = rng.random_range(1..=6);
    let mut sites = rhombus_sites(l);
    let remove = rng.random_range(0..=sites.len() / 3);
    for _ in 0..remove {
        let k = rng.random_range(0..sites.len());
        sites.swap_remove(k);
    }
    // beyond sqrt(3) - 1 the vertical pairs at distance sqrt(3) overlap
    let rho = rng.random_range(0.0..0.7);
    rhombic_perturb(&lattice_config(&sites), rho).expect("rho in range")
}

/// Bond steps for upward orientations: the four slanted lattice directions.
const SLANTED: [LatticeCoord; 4] = [
    LatticeCoord { a: 0, b: 1 },
    LatticeCoord { a: -1, b: 1 },
    LatticeCoord { a: 0, b: -1 },
    LatticeCoord { a: 1, b: -1 },
];

fn wired_patch(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let l = rng.random_range(1..=5);
    let mut sites = rhombus_sites(l);
    let mut occupied: HashSet<LatticeCoord> = sites.iter().copied().collect();
    let chains = rng.random_range(1..=4);
    for _ in 0..chains {
        let mut tip = *sites.choose(rng).expect("nonempty");
        let len = rng.random_range(1..=5);
        for _ in 0..len {
            let step = *SLANTED.choose(rng).expect("nonempty");
            let next = tip + step;
            // stay a chain: touch only the current tip
            let touching = next.neighbors().filter(|d| occupied.contains(d)).count();
            if occupied.contains(&next) || touching != 1 {
                break;
            }
            occupied.insert(next);
            sites.push(next);
            tip = next;
        }
    }
    lattice_config(&sites)
}

/// Off-lattice growth: each new particle touches an existing one along one
/// of its cone edges, with a copied, slightly turned or random orientation.
pub fn continuous_growth(n: usize, rng: &mut ChaCha8Rng) -> Configuration<f64> {
    cone_growth(n, std::f64::consts::FRAC_PI_6, rng)
}

/// Like [`continuous_growth`] for cone half-angle `half_angle`.
pub fn cone_growth(n: usize, half_angle: f64, rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let mut parts = vec![Particle::new(Vec2::zero(), up())];
    let mut attempts = 0;
    while parts.len() < n && attempts < 50 * n {
        attempts += 1;
        let j = rng.random_range(0..parts.len());
        let vj = parts[j].ori;
        let dir = if rng.random_bool(0.85) {
            let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let k = if rng.random_bool(0.5) { 0.0 } else { std::f64::consts::PI };
            let f = if rng.random_bool(0.7) { 1.0 } else { rng.random_range(0.0..1.0) };
            vj.angle() + s * f * half_angle + k
        } else {
            rng.random_range(0.0..std::f64::consts::TAU)
        };
        let p = parts[j].pos + Vec2::from_angle(dir);
        let r: f64 = rng.random();
        let v = if r < 0.6 {
            vj
        } else if r < 0.85 {
            vj.rotate(rng.random_range(-0.4..0.4))
        } else {
            Vec2::from_angle(rng.random_range(0.0..std::f64::consts::TAU))
        };
        if parts.iter().all(|q| (q.pos - p).norm() >= 1.0 - 1e-12) {
            parts.push(Particle::new(p, v));
        }
    }
    Configuration::new(parts)
}

fn holed_patch(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let l = rng.random_range(4..=7);
    let ci = rng.random_range(2..=l - 2);
    let cj = rng.random_range(2..=l - 2);
    let center = rhombic_site(ci, cj);
    let mut sites: Vec<LatticeCoord> = rhombus_sites(l)
        .into_iter()
        .filter(|&s| (s - center).norm_sq() != 1)
        .collect();
    if rng.random_bool(0.3) {
        sites.retain(|&s| s != center);
    }
    let mut c = lattice_config(&sites);
    if rng.random_bool(0.5) {
        if let Some(p) = c.particles.iter_mut().find(|p| {
            let q = center.embed::<f64>();
            (p.pos - q).norm() < 1e-9
        }) {
            p.ori = p.ori.rotate(rng.random_range(0.0..std::f64::consts::TAU));
        }
    }
    c
}

fn eroded_patch(rng: &mut ChaCha8Rng) -> Configuration<f64> {
    let l = rng.random_range(2..=8);
    let mut sites: Vec<LatticeCoord> = rhombus_sites(l);
    let removals = rng.random_range(0..=2 * l as usize);
    for _ in 0..removals {
        let set: HashSet<LatticeCoord> = sites.iter().copied().collect();
        let rim: Vec<usize> = (0..sites.len())
            .filter(|&k| sites[k].neighbors().any(|d| !set.contains(&d)))
            .collect();
        if rim.len() <= 4 {
            break;
        }
        let k = *rim.choose(rng).expect("nonempty");
        sites.swap_remove(k);
    }
    let extra = rng.random_range(0..=l as usize);
    for _ in 0..extra {
        let set: HashSet<LatticeCoord> = sites.iter().copied().collect();
        let anchor = *sites.choose(rng).expect("nonempty");
        let step = *SLANTED.choose(rng).expect("nonempty");
        let s = anchor + step;
        if !set.contains(&s) && s.neighbors().filter(|d| set.contains(d)).count() >= 2 {
            sites.push(s);
        }
    }
    lattice_config(&sites)
}

/// Configuration for trial seed `seed`, of kind `SampleKind::ALL[seed % 8]`.
pub fn sample(seed: u64) -> (SampleKind, Configuration<f64>) {
    let kind = SampleKind::ALL[(seed % SampleKind::ALL.len() as u64) as usize];
    (kind, sample_of_kind(kind, seed))
}

pub fn sample_of_kind(kind: SampleKind, seed: u64) -> Configuration<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = match kind {
        SampleKind::LatticeBlob => lattice_blob(&mut rng),
        SampleKind::TurnedBlob => turned_blob(&mut rng),
        SampleKind::NoisyBlob => noisy_blob(&mut rng),
        SampleKind::StretchedPatch => stretched_patch(&mut rng),
        SampleKind::WiredPatch => wired_patch(&mut rng),
        SampleKind::ContinuousGrowth => {
            let n = rng.random_range(2..=40);
            continuous_growth(n, &mut rng)
        }
        SampleKind::HoledPatch => holed_patch(&mut rng),
        SampleKind::ErodedPatch => eroded_patch(&mut rng),
    };
    c.with_label(format!("{kind:?} seed={seed}"))
}

/// Particles of the largest bond-graph component (lowest index on ties).
pub fn largest_component(config: &Configuration<f64>, gamma: f64) -> Configuration<f64> {
    let tol = Tolerances::default();
    let Ok(g) = build_edges(config, gamma, &tol) else {
        return config.clone();
    };
    let comps = connected_components(&g);
    let best = comps
        .iter()
        .enumerate()
        .max_by_key(|(k, c)| (c.len(), std::cmp::Reverse(*k)))
        .map(|(_, c)| c.clone())
        .unwrap_or_default();
    config.subset(&best)
}

/// Random lattice cluster of `n` sites with a constant orientation drawn at
/// random.
pub fn random_lattice_subset(n: usize, seed: u64) -> Configuration<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = lattice_blob_sites(n, &mut rng);
    let v = Vec2::from_angle(rng.random_range(0.0..std::f64::consts::TAU));
    Configuration::uniform(sites.iter().map(|c| c.embed()), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_admissible;

    #[test]
    fn samples_are_admissible_and_reproducible() {
        let tol = Tolerances::default();
        for seed in 0..200 {
            let (_, c) = sample(seed);
            assert!(is_admissible(&c, &tol), "seed {seed}");
            assert_eq!(c, sample(seed).1);
        }
    }

    #[test]
    fn blob_is_lattice_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sites = lattice_blob_sites(30, &mut rng);
        let set: HashSet<_> = sites.iter().copied().collect();
        assert_eq!(set.len(), 30);
        let mut seen = HashSet::from([sites[0]]);
        let mut stack = vec![sites[0]];
        while let Some(c) = stack.pop() {
            for d in c.neighbors() {
                if set.contains(&d) && seen.insert(d) {
                    stack.push(d);
                }
            }
        }
        assert_eq!(seen.len(), 30);
    }

    #[test]
    fn largest_component_is_connected() {
        let g = 3f64.sqrt() / 2.0;
        for seed in 0..50 {
            let c = largest_component(&sample(seed).1, g);
            let graph = build_edges(&c, g, &Tolerances::default()).unwrap();
            assert!(graph.is_connected());
        }
    }
}
