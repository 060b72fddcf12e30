use thiserror::Error;

use crate::geodesic::{ConservationReport, Trajectory};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-extreme case violated: require M > a >= 0, got M = {m}, a = {a}")]
    NonExtreme { m: f64, a: f64 },

    #[error("point outside domain: {0}")]
    OutsideDomain(String),

    #[error("forbidden region: {potential} = {value:e} < 0")]
    ForbiddenRegion { potential: &'static str, value: f64 },

    #[error("4-velocity not unit normalized: |g(U,U) - 1| = {deviation:e}")]
    NonUnitVelocity { deviation: f64 },

    #[error("Marck frame undefined: {0}")]
    MarckUndefined(String),

    #[error("semiclassical breakdown: {which} = {value:e} below turning-point threshold")]
    SemiclassicalBreakdown { which: &'static str, value: f64 },

    #[error("reference frame degenerate: {which} = {value:e} <= 0")]
    ReferenceDegenerate { which: &'static str, value: f64 },

    #[error("horizon approach at tau = {tau}: {reason}")]
    HorizonApproach {
        tau: f64,
        reason: String,
        partial: Box<Trajectory>,
    },

    #[error("integration failed at tau = {tau}: {reason}")]
    Integration {
        tau: f64,
        reason: String,
        partial: Box<Trajectory>,
    },

    #[error("conservation drift exceeded tolerance {tolerance:e}: {report}")]
    DriftExceeded {
        tolerance: f64,
        report: Box<ConservationReport>,
        partial: Box<Trajectory>,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}
