//! OCL v1 text format.
//!
//! UTF-8, one particle per line as `x y vx vy`, `#` starts a comment. A
//! comment of the form `# label: <text>` carries the configuration label.
//! Numbers are written in shortest round-trip decimal form, so reading a
//! written file reproduces every coordinate bit for bit. The cone parameter
//! is never stored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Particle, Vec2};
use crate::scalar::Scalar;

pub const HEADER: &str = "# OCL v1";
const LABEL_PREFIX: &str = "label:";

pub fn parse_config<S: Scalar>(text: &str) -> Result<Configuration<S>> {
    let mut particles = Vec::new();
    let mut label = String::new();
    let tol = S::DEFAULT_EPS;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (body, comment) = match raw.find('#') {
            Some(k) => (&raw[..k], Some(raw[k + 1..].trim())),
            None => (raw, None),
        };
        if let Some(rest) = comment.and_then(|c| c.strip_prefix(LABEL_PREFIX)) {
            label = rest.trim().to_string();
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 4 fields `x y vx vy`, found {}", fields.len()),
            });
        }
        let mut vals = [0.0f64; 4];
        for (slot, f) in vals.iter_mut().zip(&fields) {
            *slot = f.parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad number `{f}`: {e}"),
            })?;
            if !slot.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("non-finite number `{f}`"),
                });
            }
        }
        let norm = vals[2].hypot(vals[3]);
        if (norm - 1.0).abs() > tol {
            return Err(Error::BadOrientation { line: line_no, norm });
        }
        particles.push(Particle::new(
            Vec2::new(S::lit(vals[0]), S::lit(vals[1])),
            Vec2::new(S::lit(vals[2]), S::lit(vals[3])),
        ));
    }
    Ok(Configuration { particles, label })
}

pub fn format_config<S: Scalar>(config: &Configuration<S>) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    if !config.label.is_empty() {
        let _ = writeln!(out, "# {LABEL_PREFIX} {}", config.label.replace('\n', " "));
    }
    for p in &config.particles {
        let _ = writeln!(
            out,
            "{} {} {} {}",
            p.pos.x.as_f64(),
            p.pos.y.as_f64(),
            p.ori.x.as_f64(),
            p.ori.y.as_f64()
        );
    }
    out
}

pub fn read_config<S: Scalar>(path: impl AsRef<Path>) -> Result<Configuration<S>> {
    let text = fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn write_config<S: Scalar>(config: &Configuration<S>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_config(config))?;
    Ok(())
}
