//! Ground states of oriented hard discs with a cone-restricted sticky
//! interaction.
//!
//! Particles are unit-diameter discs carrying a unit orientation. Two
//! touching discs bond when the segment joining them lies inside both
//! visual cones of half-angle `acos(gamma)`. The energy is minus the number
//! of bonds. At the critical value `gamma = sqrt(3)/2` the bond graph of a
//! ground state is a union of unit rhombi and the energy splits exactly into
//! bulk, perimeter, defect and topology terms.

pub mod bond_graph;
pub mod boundary;
pub mod canonical;
pub mod diagnostics;
pub mod energy;
pub mod error;
pub mod faces;
pub mod geometry;
pub mod io;
pub mod samples;
pub mod render;
pub mod scalar;
pub mod search;
pub mod triangulation;
pub mod verify;

pub use bond_graph::{build_edges, BondGraph};
pub use error::{Error, Result};
pub use geometry::{Configuration, LatticeCoord, Particle, Tolerances, Vec2};
pub use scalar::Scalar;

pub type Vec2f = Vec2<f32>;
pub type Vec2d = Vec2<f64>;
pub type Particle32 = Particle<f32>;
pub type Particle64 = Particle<f64>;
pub type Config32 = Configuration<f32>;
pub type Config64 = Configuration<f64>;
pub type Tolerances32 = Tolerances<f32>;
pub type Tolerances64 = Tolerances<f64>;
pub type BondGraph32 = BondGraph<f32>;
pub type BondGraph64 = BondGraph<f64>;
