//! Finite-size diagnostics of the rescaled empirical measures: rhombic
//! area and perimeter, the defect set of particles not surrounded by four
//! rhombi, and a rasterized orientation field.
//!
//! Positions are rescaled by `1 / sqrt(n)`, so areas pick up `1 / n`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::energy::{analyze, GraphAnalysis};
use crate::error::{Error, Result};
use crate::faces::{winding_number, Side};
use crate::geometry::{Configuration, Tolerances, Vec2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureDiagnostics {
    pub n: usize,
    pub z_count: usize,
    pub rhombic_area: f64,
    pub rhombic_perimeter: f64,
    pub mass_residual: f64,
    pub scaled_energy: f64,
}

impl MeasureDiagnostics {
    /// `z_count / sqrt(n)`, the quantity expected to stay bounded.
    pub fn z_ratio(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.z_count as f64 / (self.n as f64).sqrt()
        }
    }
}

/// Number of rhombic faces incident to each particle.
pub fn rhombic_incidence<S: Scalar>(analysis: &GraphAnalysis<S>) -> Vec<usize> {
    let g = &analysis.graph;
    (0..g.vertex_count())
        .map(|v| {
            analysis
                .faces
                .faces_at(g, v)
                .into_iter()
                .filter(|&f| analysis.faces.faces[f].is_rhombus)
                .count()
        })
        .collect()
}

pub fn diagnose<S: Scalar>(config: &Configuration<S>, tol: &Tolerances<S>) -> Result<MeasureDiagnostics> {
    let analysis = analyze(config, S::sqrt3_2(), tol)?;
    Ok(diagnose_analysis(&analysis))
}

pub fn diagnose_analysis<S: Scalar>(analysis: &GraphAnalysis<S>) -> MeasureDiagnostics {
    let g = &analysis.graph;
    let n = g.vertex_count();
    if n == 0 {
        return MeasureDiagnostics {
            n: 0,
            z_count: 0,
            rhombic_area: 0.0,
            rhombic_perimeter: 0.0,
            mass_residual: 0.0,
            scaled_energy: 0.0,
        };
    }
    let nf = n as f64;
    let faces = &analysis.faces;
    let k = rhombic_incidence(analysis);
    let z_count = k.iter().filter(|&&c| c < 4).count();

    // |mu_n / n - mu_hat_n| as a sum of point masses
    let mut residual = 0.0;
    for v in 0..n {
        let mut acc = g.orientations()[v].cast::<f64>();
        for f in faces.faces_at(g, v) {
            if let Some(o) = faces.faces[f].face_orientation {
                acc = acc - o.cast::<f64>() * 0.25;
            }
        }
        residual += acc.norm();
    }

    let rhombi = faces.faces.iter().filter(|f| f.is_rhombus).count();
    let rhombic_side = |s: Side| matches!(s, Side::Face(f) if faces.faces[f].is_rhombus);
    let rim = (0..g.edge_count())
        .filter(|&e| rhombic_side(faces.side[2 * e]) != rhombic_side(faces.side[2 * e + 1]))
        .count();
    let energy = -(g.edge_count() as f64);
    MeasureDiagnostics {
        n,
        z_count,
        rhombic_area: rhombi as f64 * 3f64.sqrt() / 2.0 / nf,
        rhombic_perimeter: rim as f64 / nf.sqrt(),
        mass_residual: residual / nf,
        scaled_energy: (energy + 2.0 * nf) / nf.sqrt(),
    }
}

/// Orientation field `sum_f v(f) 1_f` over rhombic faces in rescaled
/// coordinates, sampled at cell centers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityField {
    pub origin: (f64, f64),
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `ny` rows of `nx` cells.
    pub values: Vec<(f64, f64)>,
}

impl DensityField {
    pub fn at(&self, ix: usize, iy: usize) -> (f64, f64) {
        self.values[iy * self.nx + ix]
    }

    /// Integral of the field magnitude.
    pub fn mass(&self) -> f64 {
        self.values
            .iter()
            .map(|&(x, y)| x.hypot(y))
            .sum::<f64>()
            * self.step
            * self.step
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,vx,vy\n");
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let (vx, vy) = self.at(ix, iy);
                let x = self.origin.0 + (ix as f64 + 0.5) * self.step;
                let y = self.origin.1 + (iy as f64 + 0.5) * self.step;
                let _ = writeln!(out, "{x:.6},{y:.6},{vx:.6},{vy:.6}");
            }
        }
        out
    }
}

pub fn density_profile<S: Scalar>(analysis: &GraphAnalysis<S>, grid_step: f64) -> Result<DensityField> {
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "grid step must be positive, got {grid_step}"
        )));
    }
    let g = &analysis.graph;
    let n = g.vertex_count();
    let scale = if n == 0 { 1.0 } else { 1.0 / (n as f64).sqrt() };
    let polys: Vec<(Vec<Vec2<f64>>, Vec2<f64>)> = analysis
        .faces
        .faces
        .iter()
        .filter_map(|f| {
            let o = f.face_orientation?;
            let pts = f
                .boundary_walk
                .iter()
                .map(|&h| g.positions()[g.origin(h)].cast::<f64>() * scale)
                .collect();
            Some((pts, o.cast()))
        })
        .collect();
    if polys.is_empty() {
        return Ok(DensityField {
            origin: (0.0, 0.0),
            step: grid_step,
            nx: 0,
            ny: 0,
            values: Vec::new(),
        });
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (pts, _) in &polys {
        for p in pts {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
    }
    let x0 = (x0 / grid_step).floor() * grid_step;
    let y0 = (y0 / grid_step).floor() * grid_step;
    let nx = ((x1 - x0) / grid_step).ceil() as usize + 1;
    let ny = ((y1 - y0) / grid_step).ceil() as usize + 1;
    let mut values = vec![(0.0, 0.0); nx * ny];
    for (pts, o) in &polys {
        let (mut px0, mut px1, mut py0, mut py1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in pts {
            px0 = px0.min(p.x);
            px1 = px1.max(p.x);
            py0 = py0.min(p.y);
            py1 = py1.max(p.y);
        }
        let ix0 = ((px0 - x0) / grid_step).floor().max(0.0) as usize;
        let ix1 = (((px1 - x0) / grid_step).ceil() as usize).min(nx - 1);
        let iy0 = ((py0 - y0) / grid_step).floor().max(0.0) as usize;
        let iy1 = (((py1 - y0) / grid_step).ceil() as usize).min(ny - 1);
        for iy in iy0..=iy1 {
            for ix in ix0..=ix1 {
                let c = Vec2::new(
                    x0 + (ix as f64 + 0.5) * grid_step,
                    y0 + (iy as f64 + 0.5) * grid_step,
                );
                if winding_number(pts, c) != 0 {
                    let cell = &mut values[iy * nx + ix];
                    cell.0 += o.x;
                    cell.1 += o.y;
                }
            }
        }
    }
    Ok(DensityField {
        origin: (x0, y0),
        step: grid_step,
        nx,
        ny,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical;

    fn analysis(n: u64) -> GraphAnalysis<f64> {
        analyze(&canonical::<f64>(n), 3f64.sqrt() / 2.0, &Tolerances::default()).unwrap()
    }

    #[test]
    fn single_particle_and_rhombus() {
        let d = diagnose_analysis(&analysis(1));
        assert_eq!((d.z_count, d.rhombic_area), (1, 0.0));
        let d = diagnose_analysis(&analysis(4));
        assert_eq!(d.z_count, 4);
        assert!(d.mass_residual <= d.z_count as f64 / 4.0 + 1e-12);
    }

    #[test]
    fn large_rhombus_counts() {
        // l = 20: only the boundary ring of 80 particles misses a rhombus
        let d = diagnose_analysis(&analysis(441));
        assert_eq!(d.z_count, 80);
        assert!((d.rhombic_area - 400.0 * 3f64.sqrt() / 2.0 / 441.0).abs() < 1e-12);
        assert!((d.rhombic_perimeter - 80.0 / 21.0).abs() < 1e-12);
        assert!(d.mass_residual <= d.z_count as f64 / 441.0 + 1e-12);
    }

    #[test]
    fn field_mass_matches_area() {
        let a = analysis(441);
        let d = diagnose_analysis(&a);
        let f = density_profile(&a, 0.005).unwrap();
        assert!((f.mass() - d.rhombic_area).abs() / d.rhombic_area < 0.02);
        for &(vx, vy) in &f.values {
            assert!(vx == 0.0 && (vy == 0.0 || vy == 1.0));
        }
        assert!(density_profile(&a, 0.0).is_err());
        let empty = density_profile(&analysis(3), 0.02).unwrap();
        assert!(empty.values.is_empty());
    }
}
