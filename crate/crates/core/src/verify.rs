//! Randomized verification suites, one per structural property of the
//! critical-cone bond graph.
//!
//! Trial `t` of a run with base seed `s` uses seed `s + t`; a failure is
//! reported with that seed and reproduced by [`run_trial`].

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bond_graph::BondGraph;
use crate::boundary::{boundary_profile, check_increase, check_puntidibordo, wedge_violations};
use crate::canonical::{canonical, canonical_perimeter, shell_decompose};
use crate::energy::{analyze, decompose_analysis};
use crate::error::Error;
use crate::geometry::{Configuration, Tolerances};
use crate::samples::{cone_growth, largest_component, sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Angles,
    NoTriangles,
    Decomposition,
    Percan,
    Shell,
    Boundary,
    Increase,
    GaussBonnet,
    Degree,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Angles,
        Suite::NoTriangles,
        Suite::Decomposition,
        Suite::Percan,
        Suite::Shell,
        Suite::Boundary,
        Suite::Increase,
        Suite::GaussBonnet,
        Suite::Degree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Angles => "angles",
            Suite::NoTriangles => "notriangles",
            Suite::Decomposition => "decomposition",
            Suite::Percan => "percan",
            Suite::Shell => "shell",
            Suite::Boundary => "boundary",
            Suite::Increase => "increase",
            Suite::GaussBonnet => "gaussbonnet",
            Suite::Degree => "degree",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::InvalidArgument(format!("unknown suite `{s}` (known: {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySuiteReport {
    pub suite: Suite,
    pub trials: u64,
    /// Trials whose sample met the suite's preconditions.
    pub checked: u64,
    pub failures: Vec<(u64, String)>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerifySuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Result of a single trial.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

fn crit() -> f64 {
    3f64.sqrt() / 2.0
}

const ANGLE_TOL: f64 = 1e-7;
const GAUSS_BONNET_TOL: f64 = 1e-6;

/// Bond-angle facts at every particle: pairwise angles in
/// `{pi/3} U [2pi/3, pi]`, no bond with two partners at the same angle
/// `pi/3` or `2pi/3`, at most four bonds and the alternating pattern when
/// there are four.
pub fn angle_violations(g: &BondGraph<f64>) -> Vec<String> {
    let third = std::f64::consts::FRAC_PI_3;
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        let dirs: Vec<_> = g.rotation(v).iter().map(|&h| g.direction(h).normalized()).collect();
        let deg = dirs.len();
        if deg > 4 {
            out.push(format!("particle {v} has {deg} bonds"));
            continue;
        }
        let minor = |a: usize, b: usize| dirs[a].cross(dirs[b]).abs().atan2(dirs[a].dot(dirs[b]));
        for a in 0..deg {
            let (mut at_third, mut at_two_thirds) = (0, 0);
            for b in 0..deg {
                if a == b {
                    continue;
                }
                let t = minor(a, b);
                let ok = (t - third).abs() <= ANGLE_TOL || t >= 2.0 * third - ANGLE_TOL;
                if !ok && a < b {
                    out.push(format!("particle {v}: bond angle {t}"));
                }
                if (t - third).abs() <= ANGLE_TOL {
                    at_third += 1;
                }
                if (t - 2.0 * third).abs() <= ANGLE_TOL {
                    at_two_thirds += 1;
                }
            }
            if at_third > 1 || at_two_thirds > 1 {
                out.push(format!("particle {v}: repeated adjacent angle at bond {a}"));
            }
        }
        if deg == 4 {
            let c = g.consecutive_angles(v);
            let alt = |s: usize| {
                (0..4).all(|k| {
                    let want = if (k + s).is_multiple_of(2) { third } else { 2.0 * third };
                    (c[k] - want).abs() <= ANGLE_TOL
                })
            };
            if !(alt(0) || alt(1)) {
                out.push(format!("particle {v}: four bonds with angles {c:?}"));
            }
        }
    }
    out
}

fn critical_sample(seed: u64, connected: bool) -> Configuration<f64> {
    let (_, c) = sample(seed);
    if connected {
        largest_component(&c, crit())
    } else {
        c
    }
}

/// Runs one trial of `suite` with `seed`.
pub fn run_trial(suite: Suite, seed: u64) -> Outcome {
    match trial(suite, seed) {
        Ok(o) => o,
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn fail_if(msgs: Vec<String>) -> Outcome {
    if msgs.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail(msgs.join("; "))
    }
}

fn trial(suite: Suite, seed: u64) -> Result<Outcome, Error> {
    let tol = Tolerances::default();
    let g = crit();
    Ok(match suite {
        Suite::Angles => {
            let a = analyze(&critical_sample(seed, false), g, &tol)?;
            fail_if(angle_violations(&a.graph))
        }
        Suite::NoTriangles => {
            let a = analyze(&critical_sample(seed, false), g, &tol)?;
            let msgs = a
                .faces
                .faces
                .iter()
                .enumerate()
                .filter_map(|(k, f)| {
                    if f.per_gr() < 4 {
                        Some(format!("face {k} has graph perimeter {}", f.per_gr()))
                    } else if f.per_gr() == 4 && !f.is_rhombus {
                        Some(format!("face {k} has four sides but is not a unit rhombus"))
                    } else {
                        None
                    }
                })
                .collect();
            fail_if(msgs)
        }
        Suite::Decomposition => {
            let a = analyze(&critical_sample(seed, false), g, &tol)?;
            let r = decompose_analysis(&a)?;
            if r.residual == 0 {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("residual {}", r.residual))
            }
        }
        Suite::Percan => {
            let n = seed;
            let a = analyze(&canonical::<f64>(n), g, &tol)?;
            let r = decompose_analysis(&a)?;
            let want = canonical_perimeter(n);
            let mut msgs = Vec::new();
            if r.per_gr as u64 != want {
                msgs.push(format!("n = {n}: measured {} but law gives {want}", r.per_gr));
            }
            if n > 0 && (r.def_gr != 0 || r.chi != 1 || r.energy != -2 * n as i64 + want as i64 / 2 + 2) {
                msgs.push(format!("n = {n}: {r:?}"));
            }
            fail_if(msgs)
        }
        Suite::Shell => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n_prime = rng.random_range(0..2000u64);
            let n = rng.random_range(n_prime + 1..=2000);
            shell_decompose(n, n_prime)?;
            Outcome::Pass
        }
        Suite::Boundary => {
            let c = critical_sample(seed, true);
            if c.len() < 2 {
                return Ok(Outcome::Skip);
            }
            let a = analyze(&c, g, &tol)?;
            if check_puntidibordo(&a)? {
                Outcome::Pass
            } else {
                Outcome::Fail("graph perimeter below boundary particle count".into())
            }
        }
        Suite::Increase => {
            let c = critical_sample(seed, true);
            if c.len() < 8 {
                return Ok(Outcome::Skip);
            }
            let a = analyze(&c, g, &tol)?;
            let r = check_increase(&c, &a, &tol)?;
            if r.ok {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("F = {} but inner F = {}", r.f_outer, r.f_inner))
            }
        }
        Suite::GaussBonnet => {
            let c = critical_sample(seed, true);
            let a = analyze(&c, g, &tol)?;
            let p = match boundary_profile(&a) {
                Ok(p) => p,
                Err(Error::ProfileHypotheses(_)) => return Ok(Outcome::Skip),
                Err(e) => return Err(e),
            };
            let mut msgs = Vec::new();
            let gb = p.gauss_bonnet_sum;
            if (gb - std::f64::consts::TAU).abs() > GAUSS_BONNET_TOL {
                msgs.push(format!("turning sum {gb}"));
            }
            msgs.extend(wedge_violations(&a, &p));
            fail_if(msgs)
        }
        Suite::Degree => {
            let a = analyze(&critical_sample(seed, false), g, &tol)?;
            let mut msgs = Vec::new();
            if a.graph.max_degree() > 4 {
                msgs.push(format!("critical cone: degree {}", a.graph.max_degree()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let gamma = rng.random_range(g + 1e-6..=1.0);
            let n = rng.random_range(2..=30);
            let c = cone_growth(n, gamma.acos(), &mut rng);
            let sharp = crate::bond_graph::build_edges(&c, gamma, &tol)?;
            if sharp.max_degree() > 2 {
                msgs.push(format!("gamma {gamma}: degree {}", sharp.max_degree()));
            }
            fail_if(msgs)
        }
    })
}

/// Runs `trials` trials of `suite` with seeds `seed, seed + 1, ...`. For
/// the perimeter-law suite the seeds are the particle numbers themselves.
pub fn run_suite(suite: Suite, trials: u64, seed: u64) -> VerifySuiteReport {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for t in 0..trials {
        let s = seed.wrapping_add(t);
        match run_trial(suite, s) {
            Outcome::Pass => checked += 1,
            Outcome::Skip => {}
            Outcome::Fail(msg) => {
                checked += 1;
                failures.push((s, msg));
            }
        }
    }
    VerifySuiteReport {
        suite,
        trials,
        checked,
        failures,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn canonical_angles_are_clean() {
        let tol = Tolerances::default();
        let a = analyze(&canonical::<f64>(16), crit(), &tol).unwrap();
        assert!(angle_violations(&a.graph).is_empty());
    }

    #[test]
    fn short_runs_pass() {
        for s in Suite::ALL {
            let r = run_suite(s, 40, 1);
            assert!(r.passed(), "{s}: {:?}", r.failures);
        }
    }
}
