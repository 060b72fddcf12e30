//! Seeded random exterior points and timelike states for validation sweeps.

use nalgebra::Vector4;
use rand::Rng;

use crate::geodesic::GeodesicState;
use crate::kerr::{symmetric_legs, BlackHoleParams, SpacetimePoint};

/// Outer edge of the sampled radial range, in units of M.
pub const R_MAX: f64 = 30.0;

pub fn random_point<R: Rng>(rng: &mut R, params: &BlackHoleParams) -> SpacetimePoint {
    let m = params.mass();
    let r = params.r_plus() + m * (0.1 + rng.gen::<f64>() * (R_MAX - 0.1 - params.r_plus() / m));
    let theta = 0.05 + rng.gen::<f64>() * (std::f64::consts::PI - 0.1);
    let t = rng.gen_range(-10.0..10.0);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    SpacetimePoint::new(t, r, theta, phi)
}

/// Unit timelike velocity with rapidity up to `max_rapidity` relative to the Carter observer.
pub fn random_state<R: Rng>(rng: &mut R, params: &BlackHoleParams, max_rapidity: f64) -> GeodesicState {
    let point = random_point(rng, params);
    let zeta = rng.gen::<f64>() * max_rapidity;
    let z: f64 = rng.gen_range(-1.0..1.0);
    let az = rng.gen_range(0.0..std::f64::consts::TAU);
    let rho = (1.0 - z * z).sqrt();
    let n = Vector4::new(0.0, rho * az.cos(), rho * az.sin(), z);
    let comps = Vector4::new(zeta.cosh(), 0.0, 0.0, 0.0) + n * zeta.sinh();
    let e = symmetric_legs(params, point.r, point.theta);
    let u = e[0] * comps[0] + e[1] * comps[1] + e[2] * comps[2] + e[3] * comps[3];
    GeodesicState::new(point, u, 0.0)
}

pub fn random_params<R: Rng>(rng: &mut R) -> BlackHoleParams {
    let m = rng.gen_range(0.5..2.0);
    let a = m * rng.gen_range(0.0..0.99);
    BlackHoleParams::new(m, a).expect("sampled parameters are non-extreme")
}
