//! Timelike geodesics in Kerr spacetime, Marck's parallel-propagated frame,
//! the observers' reference triad and the precession of Dirac spin measured
//! against it.
//!
//! All tensors are stored in Boyer–Lindquist coordinate components with
//! signature (+,−,−,−). Frame components are obtained by explicit contraction.

pub mod error;
pub mod geodesic;
pub mod kerr;
pub mod marck;
pub mod precession;
pub mod sampling;
pub mod spin;
pub mod triad;

pub use error::{Error, Result};
pub use geodesic::{
    conservation_report, initial_state_from_constants, integrate_geodesic, potentials_at,
    ConservationReport, ConservedSet, GeodesicState, IntegratorConfig, Potentials, Trajectory,
};
pub use kerr::{BlackHoleParams, SpacetimePoint, Tetrad, TetradKind};
pub use marck::{ChiSign, MarckFrame};
pub use precession::{PrecessionSeries, Rotation3};
pub use triad::ReferenceTriad;

/// Minkowski metric in frame indices.
pub fn eta() -> nalgebra::Matrix4<f64> {
    nalgebra::Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}
