//! Explicit candidate minimizers for each cone regime.

use std::collections::HashSet;

use serde::Serialize;

use crate::canonical::canonical;
use crate::energy::{energy, n_gamma};
use crate::error::{Error, Result};
use crate::geometry::{Configuration, LatticeCoord, Particle, Tolerances, Vec2};

/// `n` collinear touching particles along the x axis, oriented along it.
pub fn row(n: usize) -> Configuration<f64> {
    Configuration::uniform((0..n).map(|k| Vec2::new(k as f64, 0.0)), Vec2::new(1.0, 0.0))
        .with_label(format!("row n={n}"))
}

/// Regular polygon with unit sides and orientations tangent to the
/// circumcircle.
pub fn ring(n: usize) -> Configuration<f64> {
    let pi = std::f64::consts::PI;
    let r = 1.0 / (2.0 * (pi / n as f64).sin());
    let particles = (0..n)
        .map(|k| {
            let t = 2.0 * pi * k as f64 / n as f64;
            Particle::new(Vec2::from_angle(t) * r, Vec2::from_angle(t + pi / 2.0))
        })
        .collect();
    Configuration::new(particles).with_label(format!("ring n={n}"))
}

/// Greedy hexagonal growth: each new site has the most occupied
/// neighbours, ties broken by distance from the origin and then by angle.
/// Orientations are horizontal.
pub fn hr_spiral(n: usize) -> Configuration<f64> {
    let mut occupied: HashSet<LatticeCoord> = HashSet::new();
    let mut order = Vec::with_capacity(n);
    let mut frontier: HashSet<LatticeCoord> = HashSet::new();
    if n > 0 {
        let o = LatticeCoord::new(0, 0);
        occupied.insert(o);
        order.push(o);
        frontier.extend(o.neighbors());
    }
    while order.len() < n {
        let key = |c: &LatticeCoord| {
            let k = c.neighbors().filter(|d| occupied.contains(d)).count();
            let p = c.embed::<f64>();
            let mut a = p.angle();
            if a < -1e-12 {
                a += std::f64::consts::TAU;
            }
            (std::cmp::Reverse(k), c.norm_sq(), (a * 1e9).round() as i64)
        };
        let next = *frontier
            .iter()
            .min_by_key(|c| key(c))
            .expect("frontier is never empty");
        frontier.remove(&next);
        occupied.insert(next);
        order.push(next);
        frontier.extend(next.neighbors().filter(|d| !occupied.contains(d)));
    }
    Configuration::uniform(order.into_iter().map(LatticeCoord::embed), Vec2::new(1.0, 0.0))
        .with_label(format!("hexagonal n={n}"))
}

/// The explicit candidate minimizer of each regime.
pub fn reference_minimizer(n: usize, gamma: f64) -> Result<Configuration<f64>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidGamma(format!("{gamma} not in [0, 1]")));
    }
    let crit = 3f64.sqrt() / 2.0;
    Ok(if gamma <= 0.5 {
        hr_spiral(n)
    } else if gamma <= crit + 1e-12 {
        canonical(n as u64)
    } else if gamma < 1.0 {
        let ng = n_gamma(gamma)? as usize;
        if n >= ng && n >= 3 {
            ring(n)
        } else {
            row(n)
        }
    } else {
        row(n)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub n: usize,
    pub energy: i64,
    /// `E >= -4 n`.
    pub lower_ok: bool,
    /// `(E + 4 n) / sqrt(n)`.
    pub scaled: f64,
    /// `(E + 2 n) / sqrt(n)`.
    pub scaled_half: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub gamma: f64,
    pub rows: Vec<AsymptoticRow>,
    /// Smallest `C` with `E <= -4 n + C sqrt(n)` on every row.
    pub c_fit: f64,
    /// Smallest `C` with `E <= -2 n + C sqrt(n)` on every row.
    pub c_fit_half: f64,
}

/// Energies of the reference minimizers against the `-4 n` bulk bound.
pub fn check_asymptotic_bounds(n_list: &[usize], gamma: f64) -> Result<AsymptoticReport> {
    if !(gamma > 0.5 && gamma <= 3f64.sqrt() / 2.0 + 1e-12) {
        return Err(Error::InvalidGamma(format!("{gamma} outside (1/2, sqrt(3)/2]")));
    }
    let tol = Tolerances::default();
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let e = energy(&reference_minimizer(n, gamma)?, gamma, &tol)?;
        let s = (n as f64).sqrt().max(1.0);
        rows.push(AsymptoticRow {
            n,
            energy: e,
            lower_ok: e >= -4 * n as i64,
            scaled: (e + 4 * n as i64) as f64 / s,
            scaled_half: (e + 2 * n as i64) as f64 / s,
        });
    }
    let c_fit = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    let c_fit_half = rows.iter().map(|r| r.scaled_half).fold(0.0, f64::max);
    Ok(AsymptoticReport {
        gamma,
        rows,
        c_fit,
        c_fit_half,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::hr_energy;

    #[test]
    fn spiral_matches_closed_form() {
        let tol = Tolerances::default();
        for n in 1..=200usize {
            let c = hr_spiral(n);
            let want = (3.0 * n as f64 - (12.0 * n as f64 - 3.0).sqrt()).floor() as i64;
            assert_eq!(hr_energy(&c, &tol), -want, "n = {n}");
            assert_eq!(energy(&c, 0.5, &tol).unwrap(), -want, "n = {n}");
        }
    }

    #[test]
    fn ring_and_row() {
        let tol = Tolerances::default();
        let c = reference_minimizer(12, 0.95).unwrap();
        assert_eq!(energy(&c, 0.95, &tol).unwrap(), -12);
        let c = reference_minimizer(9, 0.95).unwrap();
        assert_eq!(energy(&c, 0.95, &tol).unwrap(), -8);
        let c = reference_minimizer(6, 1.0).unwrap();
        assert_eq!(energy(&c, 1.0, &tol).unwrap(), -5);
        let g = (std::f64::consts::PI / 12.0).cos();
        assert_eq!(energy(&ring(12), g, &tol).unwrap(), -12);
        assert_eq!(energy(&ring(11), g, &tol).unwrap(), 0);
    }

    #[test]
    fn asymptotic_rows() {
        let r = check_asymptotic_bounds(&[4, 100], 3f64.sqrt() / 2.0).unwrap();
        assert_eq!(r.rows[0].energy, -4);
        assert!(r.rows.iter().all(|x| x.lower_ok));
        assert!(check_asymptotic_bounds(&[4], 0.4).is_err());
    }
}
