//! Brute-force lattice oracle: every connected cluster of the triangular
//! lattice up to isometry, with orientations drawn from a finite set.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::{LatticeCoord, Vec2};

pub const ORACLE_MAX_N: usize = 10;

/// The twelve lattice isometries fixing the origin.
fn isometries(c: LatticeCoord) -> [LatticeCoord; 12] {
    let mut out = [c; 12];
    let mut r = c;
    for k in 0..6 {
        out[k] = r;
        out[k + 6] = r.reflect();
        r = r.rotate60();
    }
    out
}

/// Translation-normalized, sorted copy.
fn normalize(mut cells: Vec<LatticeCoord>) -> Vec<LatticeCoord> {
    cells.sort_unstable();
    let base = cells[0];
    for c in &mut cells {
        *c = *c - base;
    }
    cells
}

/// Least representative over all isometries.
fn canonical_form(cells: &[LatticeCoord]) -> Vec<LatticeCoord> {
    (0..12)
        .map(|k| normalize(cells.iter().map(|&c| isometries(c)[k]).collect()))
        .min()
        .expect("twelve images")
}

/// Connected `n`-site clusters of the triangular lattice (six-neighbour
/// adjacency), one per isometry class, in a deterministic order.
pub fn lattice_animals(n: usize) -> Vec<Vec<LatticeCoord>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut level: Vec<Vec<LatticeCoord>> = vec![vec![LatticeCoord::new(0, 0)]];
    for _ in 1..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for cells in &level {
            let occupied: HashSet<LatticeCoord> = cells.iter().copied().collect();
            for &c in cells {
                for nb in c.neighbors() {
                    if occupied.contains(&nb) {
                        continue;
                    }
                    let mut grown = cells.clone();
                    grown.push(nb);
                    let key = canonical_form(&grown);
                    if seen.insert(key.clone()) {
                        next.push(key);
                    }
                }
            }
        }
        next.sort_unstable();
        level = next;
    }
    level
}

/// Lowest bond energy over all lattice clusters of size `n`, with
/// orientations from `directions` evenly spaced angles. Each cluster starts
/// from every uniform field and is improved by per-particle sweeps.
pub fn enumerate_lattice_oracle(n: usize, gamma: f64, directions: usize) -> Result<i64> {
    if n > ORACLE_MAX_N {
        return Err(Error::OracleLimit(format!(
            "n = {n} exceeds {ORACLE_MAX_N}"
        )));
    }
    if directions < 12 {
        return Err(Error::InvalidArgument(format!(
            "need at least 12 directions, got {directions}"
        )));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidGamma(format!("{gamma} not in [0, 1]")));
    }
    if n < 2 {
        return Ok(0);
    }
    let thr = gamma - <f64 as crate::scalar::Scalar>::DEFAULT_EPS;
    let steps = LatticeCoord::UNIT_STEPS;
    // plus[m][s]: step s lies in the forward cone of direction m
    let mut plus = vec![[false; 6]; directions];
    let mut minus = vec![[false; 6]; directions];
    for m in 0..directions {
        let v = Vec2::from_angle(std::f64::consts::TAU * m as f64 / directions as f64);
        for (s, st) in steps.iter().enumerate() {
            let d = st.embed::<f64>().dot(v);
            plus[m][s] = d >= thr;
            minus[m][s] = -d >= thr;
        }
    }
    let bonded = |mi: usize, mj: usize, s: usize| {
        (plus[mi][s] && plus[mj][s]) || (minus[mi][s] && minus[mj][s])
    };

    let mut best = 0i64;
    for cells in lattice_animals(n) {
        // adjacency as (neighbour, step index)
        let adj: Vec<Vec<(usize, usize)>> = cells
            .iter()
            .map(|&c| {
                cells
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &d)| {
                        steps.iter().position(|&s| c + s == d).map(|s| (j, s))
                    })
                    .collect()
            })
            .collect();
        let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        if -(edges as i64) >= best {
            continue;
        }
        let energy = |ori: &[usize]| -> i64 {
            let mut e = 0;
            for (i, nb) in adj.iter().enumerate() {
                for &(j, s) in nb {
                    if i < j && bonded(ori[i], ori[j], s) {
                        e -= 1;
                    }
                }
            }
            e
        };
        for m0 in 0..directions {
            let mut ori = vec![m0; n];
            loop {
                let mut improved = false;
                for i in 0..n {
                    let local = |m: usize| {
                        adj[i]
                            .iter()
                            .filter(|&&(j, s)| bonded(m, ori[j], s))
                            .count()
                    };
                    let cur = local(ori[i]);
                    let (bm, bc) = (0..directions)
                        .map(|m| (m, local(m)))
                        .max_by_key(|&(m, c)| (c, std::cmp::Reverse(m)))
                        .unwrap();
                    if bc > cur {
                        ori[i] = bm;
                        improved = true;
                    }
                }
                if !improved {
                    break;
                }
            }
            best = best.min(energy(&ori));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_polyhex_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| lattice_animals(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 7, 22, 82]);
    }

    #[test]
    fn critical_cone_minima() {
        let g = 3f64.sqrt() / 2.0;
        assert_eq!(enumerate_lattice_oracle(3, g, 12).unwrap(), -2);
        assert_eq!(enumerate_lattice_oracle(6, g, 12).unwrap(), -7);
    }

    #[test]
    fn hard_disc_regime() {
        assert_eq!(enumerate_lattice_oracle(4, 0.3, 12).unwrap(), -5);
    }

    #[test]
    fn limits() {
        assert!(matches!(enumerate_lattice_oracle(11, 0.5, 12), Err(Error::OracleLimit(_))));
        assert!(matches!(enumerate_lattice_oracle(4, 0.5, 8), Err(Error::InvalidArgument(_))));
    }
}
