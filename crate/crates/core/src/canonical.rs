//! Canonical diamond configurations and their perimeter law.
//!
//! For `n = (l + 1)^2 + eta` with `0 <= eta < 2l + 3` the canonical
//! configuration is the lattice rhombus `R_l` (side `l`, long diagonal
//! vertical, bottom corner at the origin) plus the first `eta` sites of the
//! next shell, walked from the right corner of `R_{l+1}` over its apex. All
//! orientations point up.
//!
//! Sites are addressed by rhombic coordinates `(i, j)`, `0 <= i, j <= l`,
//! i.e. the lattice point `i (1/2, sqrt(3)/2) + j (-1/2, sqrt(3)/2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, LatticeCoord, Vec2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CanonicalSpec {
    pub n: u64,
    pub l: u64,
    pub eta: u64,
    pub expected_per_gr: u64,
}

/// `(l, eta)` and the closed-form perimeter; `None` for `n = 0`.
pub fn canonical_spec(n: u64) -> Option<CanonicalSpec> {
    if n == 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    let l = r - 1;
    let eta = n - r * r;
    let expected_per_gr = if eta == 0 {
        4 * l
    } else if eta <= l + 1 {
        4 * l + 2
    } else {
        4 * l + 4
    };
    Some(CanonicalSpec {
        n,
        l,
        eta,
        expected_per_gr,
    })
}

pub fn canonical_perimeter(n: u64) -> u64 {
    canonical_spec(n).map_or(0, |s| s.expected_per_gr)
}

/// Lattice point with rhombic coordinates `(i, j)`.
pub fn rhombic_site(i: i64, j: i64) -> LatticeCoord {
    LatticeCoord::new(-j, i + j)
}

/// `t`-th site of the shell around `R_l`, `0 <= t <= 2l + 2`.
pub fn shell_site(l: u64, t: u64) -> LatticeCoord {
    let (l, t) = (l as i64, t as i64);
    if t <= l + 1 {
        rhombic_site(l + 1, t)
    } else {
        rhombic_site(2 * l + 2 - t, l + 1)
    }
}

/// Sites of the canonical configuration: the rhombus row by row, then the
/// shell in walk order.
pub fn canonical_sites(n: u64) -> Vec<LatticeCoord> {
    let Some(spec) = canonical_spec(n) else {
        return Vec::new();
    };
    let l = spec.l as i64;
    let mut out = Vec::with_capacity(n as usize);
    for j in 0..=l {
        for i in 0..=l {
            out.push(rhombic_site(i, j));
        }
    }
    out.extend((0..spec.eta).map(|t| shell_site(spec.l, t)));
    out
}

pub fn canonical<S: Scalar>(n: u64) -> Configuration<S> {
    Configuration::uniform(
        canonical_sites(n).into_iter().map(LatticeCoord::embed),
        Vec2::new(S::zero(), S::one()),
    )
    .with_label(format!("Y_{n}"))
}

/// `n = n' + k (P + 4 (k + 1)) + delta` with `P` the perimeter at `n'`, and
/// the perimeter excess `r = per(n) - per(n') - 8 k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShellDecomposition {
    pub n: u64,
    pub n_prime: u64,
    pub k: u64,
    pub delta: u64,
    pub r: i64,
}

pub fn shell_decompose(n: u64, n_prime: u64) -> Result<ShellDecomposition> {
    if n <= n_prime {
        return Err(Error::InvalidArgument(format!(
            "need n > n', got n = {n}, n' = {n_prime}"
        )));
    }
    let p = canonical_perimeter(n_prime);
    let m = n - n_prime;
    let layer = |k: u64| k * (p + 4 * (k + 1));
    let mut k = 0;
    while layer(k + 1) <= m {
        k += 1;
    }
    let delta = m - layer(k);
    let r = canonical_perimeter(n) as i64 - p as i64 - 8 * k as i64;
    let d = ShellDecomposition {
        n,
        n_prime,
        k,
        delta,
        r,
    };
    let fail = |what: &str| Err(Error::ShellViolated(format!("{what}: {d:?}")));
    if delta >= p + 8 * (k + 1) {
        return fail("remainder too large");
    }
    if !matches!(r, 0 | 2 | 4 | 6 | 8) {
        return fail("excess not in {0, 2, 4, 6, 8}");
    }
    if delta == 0 && r != 0 {
        return fail("excess without remainder");
    }
    if k >= 1 && r > 2 * delta.div_ceil(2) as i64 {
        return fail("excess above remainder");
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perimeter_values() {
        assert_eq!(canonical_perimeter(0), 0);
        assert_eq!(canonical_perimeter(1), 0);
        assert_eq!(canonical_perimeter(9), 8);
        assert_eq!(canonical_perimeter(12), 10);
        assert_eq!(canonical_perimeter(15), 12);
    }

    #[test]
    fn small_seeds() {
        let y2: Configuration<f64> = canonical(2);
        assert_eq!(y2.positions()[0], Vec2::new(0.0, 0.0));
        let p = y2.positions()[1];
        assert!((p.x - 0.5).abs() < 1e-15 && (p.y - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let y3 = canonical_sites(3);
        assert_eq!(y3[2], rhombic_site(1, 1));
        assert!(canonical::<f64>(0).is_empty());
    }

    #[test]
    fn shell_is_upper_boundary() {
        for l in 0..6u64 {
            let sites: Vec<_> = (0..2 * l + 3).map(|t| shell_site(l, t)).collect();
            for w in sites.windows(2) {
                assert!((w[1] - w[0]).is_unit());
            }
            for s in &sites {
                assert!(s.b > l as i64);
            }
        }
    }

    #[test]
    fn shell_examples() {
        let d = shell_decompose(8, 0).unwrap();
        assert_eq!((d.k, d.delta, d.r), (1, 0, 0));
        let d = shell_decompose(16, 4).unwrap();
        assert_eq!((d.k, d.delta, d.r), (1, 0, 0));
        let d = shell_decompose(10, 9).unwrap();
        assert_eq!((d.k, d.delta, d.r), (0, 1, 2));
        assert!(shell_decompose(3, 3).is_err());
    }
}
