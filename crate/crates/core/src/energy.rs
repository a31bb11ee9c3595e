//! Bond energy, the hard-disc (all contacts) energy and the exact split of
//! the critical-cone energy into bulk, perimeter, defect and topology terms.

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::bond_graph::{build_edges, contact_pairs, BondGraph};
use crate::error::{Error, Result};
use crate::faces::{
    classify_edges, euler_characteristics, extract_faces, graph_perimeter, EdgeClassification,
    FaceSet,
};
use crate::geometry::{Configuration, Tolerances};
use crate::scalar::Scalar;
use crate::triangulation::split_counts;

/// `-(number of bonds)`.
pub fn energy<S: Scalar>(config: &Configuration<S>, gamma: S, tol: &Tolerances<S>) -> Result<i64> {
    Ok(-(build_edges(config, gamma, tol)?.edge_count() as i64))
}

/// `-(number of unit-distance pairs)`, ignoring orientations.
pub fn hr_energy<S: Scalar>(config: &Configuration<S>, tol: &Tolerances<S>) -> i64 {
    -(contact_pairs(config, tol).len() as i64)
}

/// Smallest ring size `ceil(pi / acos(gamma))` for `sqrt(3)/2 < gamma < 1`.
pub fn n_gamma(gamma: f64) -> Result<u64> {
    if !(gamma > 3f64.sqrt() / 2.0 && gamma < 1.0) {
        return Err(Error::InvalidGamma(format!(
            "{gamma} outside (sqrt(3)/2, 1)"
        )));
    }
    let x = std::f64::consts::PI / gamma.acos();
    let r = x.round();
    Ok(if (x - r).abs() <= 1e-9 { r } else { x.ceil() } as u64)
}

/// Whether `gamma` is the critical value `sqrt(3)/2` up to rounding.
pub fn is_critical<S: Scalar>(gamma: S) -> bool {
    (gamma - S::sqrt3_2()).abs() <= S::lit(S::DEFAULT_EPS)
}

/// Bond graph together with its faces and edge classes.
#[derive(Debug, Clone)]
pub struct GraphAnalysis<S = f64> {
    pub graph: BondGraph<S>,
    pub faces: FaceSet<S>,
    pub classes: EdgeClassification,
}

pub fn analyze<S: Scalar>(
    config: &Configuration<S>,
    gamma: S,
    tol: &Tolerances<S>,
) -> Result<GraphAnalysis<S>> {
    let graph = build_edges(config, gamma, tol)?;
    analyze_graph(graph)
}

pub fn analyze_graph<S: Scalar>(graph: BondGraph<S>) -> Result<GraphAnalysis<S>> {
    let faces = extract_faces(&graph)?;
    let classes = classify_edges(&graph, &faces);
    Ok(GraphAnalysis {
        graph,
        faces,
        classes,
    })
}

/// Graph counts available for every cone parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergySummary {
    pub n: usize,
    pub edge_count: usize,
    pub energy: i64,
    pub hr_energy: i64,
    pub per: usize,
    pub per_gr: usize,
    pub chi: i64,
    pub chi_euler: i64,
    pub components: usize,
    pub faces: usize,
    pub rhombic_faces: usize,
}

pub fn summarize<S: Scalar>(
    config: &Configuration<S>,
    analysis: &GraphAnalysis<S>,
    tol: &Tolerances<S>,
) -> EnergySummary {
    let p = graph_perimeter(&analysis.classes);
    let (chi, chi_euler) = euler_characteristics(&analysis.graph, &analysis.faces);
    EnergySummary {
        n: config.len(),
        edge_count: analysis.graph.edge_count(),
        energy: -(analysis.graph.edge_count() as i64),
        hr_energy: hr_energy(config, tol),
        per: p.per,
        per_gr: p.per_gr,
        chi,
        chi_euler,
        components: analysis.faces.component_count,
        faces: analysis.faces.faces.len(),
        rhombic_faces: analysis.faces.faces.iter().filter(|f| f.is_rhombus).count(),
    }
}

fn rational_as_f64<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(*r.numer() as f64 / *r.denom() as f64)
}

/// Terms of `E = -2 n + def/2 + per_gr/2 + 2 chi` at the critical cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyReport {
    pub n: usize,
    pub edge_count: usize,
    pub energy: i64,
    pub per: usize,
    pub per_gr: usize,
    pub def_gr: i64,
    pub chi: i64,
    pub chi_euler: i64,
    #[serde(serialize_with = "rational_as_f64")]
    pub f_surface: Rational64,
    pub residual: i64,
}

impl EnergyReport {
    /// Empty configuration: every count is zero.
    pub fn empty() -> Self {
        Self {
            n: 0,
            edge_count: 0,
            energy: 0,
            per: 0,
            per_gr: 0,
            def_gr: 0,
            chi: 0,
            chi_euler: 0,
            f_surface: Rational64::from_integer(0),
            residual: 0,
        }
    }
}

/// Decomposition at the critical cone `sqrt(3)/2`.
pub fn decompose<S: Scalar>(config: &Configuration<S>, tol: &Tolerances<S>) -> Result<EnergyReport> {
    decompose_at(config, S::sqrt3_2(), tol)
}

/// Like [`decompose`] with an explicit cone parameter, which must be
/// critical.
pub fn decompose_at<S: Scalar>(
    config: &Configuration<S>,
    gamma: S,
    tol: &Tolerances<S>,
) -> Result<EnergyReport> {
    if !is_critical(gamma) {
        return Err(Error::UnsupportedGamma(gamma.as_f64()));
    }
    let analysis = analyze(config, gamma, tol)?;
    decompose_analysis(&analysis)
}

pub fn decompose_analysis<S: Scalar>(analysis: &GraphAnalysis<S>) -> Result<EnergyReport> {
    let graph = &analysis.graph;
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(EnergyReport::empty());
    }
    let p = graph_perimeter(&analysis.classes);
    let (chi, chi_euler) = euler_characteristics(graph, &analysis.faces);
    let mut def_gr = 0i64;
    let mut def_tri = 0i64;
    for face in &analysis.faces.faces {
        def_gr += face.per_gr() as i64 - 4;
        let (add, tri) = split_counts(face, graph)?;
        let (add, tri) = (add as i64, tri as i64);
        if add != face.per_gr() as i64 - 3 || tri != face.per_gr() as i64 - 2 {
            return Err(Error::DecompositionViolated(format!(
                "face of graph perimeter {} split into {add} chords and {tri} triangles",
                face.per_gr()
            )));
        }
        def_tri += 2 * add - tri;
    }
    if def_tri != def_gr {
        return Err(Error::DecompositionViolated(format!(
            "defect {def_gr} but triangulation gives {def_tri}"
        )));
    }
    let energy = -(graph.edge_count() as i64);
    let f_surface = Rational64::new(def_gr + p.per_gr as i64, 2) + Rational64::from_integer(2 * chi);
    let residual = Rational64::from_integer(energy + 2 * n as i64) - f_surface;
    if !residual.is_integer() || residual != Rational64::from_integer(0) {
        return Err(Error::DecompositionViolated(format!(
            "E = {energy}, n = {n}, def = {def_gr}, per_gr = {}, chi = {chi}",
            p.per_gr
        )));
    }
    Ok(EnergyReport {
        n,
        edge_count: graph.edge_count(),
        energy,
        per: p.per,
        per_gr: p.per_gr,
        def_gr,
        chi,
        chi_euler,
        f_surface,
        residual: residual.to_integer(),
    })
}

/// Surface term `def/2 + per_gr/2 + 2 chi`; zero for the empty configuration.
pub fn surface_functional<S: Scalar>(config: &Configuration<S>, tol: &Tolerances<S>) -> Result<Rational64> {
    Ok(decompose(config, tol)?.f_surface)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LatticeCoord, Vec2};

    fn lattice(coords: &[(i64, i64)]) -> Configuration<f64> {
        Configuration::uniform(
            coords.iter().map(|&(a, b)| LatticeCoord::new(a, b).embed()),
            Vec2::new(0.0, 1.0),
        )
    }

    #[test]
    fn n_gamma_values() {
        assert_eq!(n_gamma(0.95).unwrap(), 10);
        assert_eq!(n_gamma((std::f64::consts::PI / 12.0).cos()).unwrap(), 12);
        assert_eq!(n_gamma(0.8661).unwrap(), 7);
        assert!(matches!(n_gamma(0.5), Err(Error::InvalidGamma(_))));
        assert!(matches!(n_gamma(1.0), Err(Error::InvalidGamma(_))));
    }

    #[test]
    fn isolated_particle() {
        let c = lattice(&[(0, 0)]);
        let r = decompose(&c, &Tolerances::default()).unwrap();
        assert_eq!((r.energy, r.chi, r.residual), (0, 1, 0));
        assert_eq!(r.f_surface, Rational64::from_integer(2));
    }

    #[test]
    fn rhombus_hr_energy() {
        // unit rhombus in lattice coordinates: all five short pairs touch
        let c = lattice(&[(0, 0), (0, 1), (-1, 1), (-1, 2)]);
        assert_eq!(hr_energy(&c, &Tolerances::default()), -5);
        let r = decompose(&c, &Tolerances::default()).unwrap();
        assert_eq!((r.energy, r.per_gr, r.def_gr, r.chi), (-4, 4, 0, 1));
    }

    #[test]
    fn other_gamma_is_refused() {
        let c = lattice(&[(0, 0)]);
        assert_eq!(
            decompose_at(&c, 0.5, &Tolerances::default()),
            Err(Error::UnsupportedGamma(0.5))
        );
    }

    #[test]
    fn row_at_gamma_one() {
        let c = Configuration::uniform(
            (0..6).map(|k| Vec2::new(k as f64, 0.0)),
            Vec2::new(1.0, 0.0),
        );
        assert_eq!(energy(&c, 1.0, &Tolerances::default()).unwrap(), -5);
    }
}
