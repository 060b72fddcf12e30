//! Marck's parallel-propagated tetrad along a timelike geodesic.

use nalgebra::Vector4;

use crate::error::{Error, Result};
use crate::geodesic::{ConservedSet, GeodesicState, Trajectory};
use crate::kerr::{
    christoffel_components, contract_christoffel, inverse_metric_components,
    killing_yano_components, metric_components, symmetric_coframe, symmetric_legs,
    BlackHoleParams, Tetrad, TetradKind,
};

/// Sign carried by the D-term of dχ/dτ.
///
/// `Printed` is `(√κ/Σ)[P/(r²+κ) − a sinϑ D/(κ − a²cos²ϑ)]`; `Flipped` uses `+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChiSign {
    #[default]
    Printed,
    Flipped,
}

impl ChiSign {
    fn d_factor(self) -> f64 {
        match self {
            ChiSign::Printed => -1.0,
            ChiSign::Flipped => 1.0,
        }
    }
}

pub(crate) fn chi_rate_unchecked(
    params: &BlackHoleParams,
    c: &ConservedSet,
    r: f64,
    theta: f64,
    sign: ChiSign,
) -> f64 {
    let a = params.spin();
    let kappa = c.carter;
    let (s, cs) = theta.sin_cos();
    let p = c.energy * (r * r + a * a) - a * c.angular_momentum;
    let d = a * c.energy * s - c.angular_momentum / s;
    let sigma = params.sigma(r, theta);
    // F′ṙ = √κ P/((r²+κ)Σ) and G′ϑ̇ = ∓√κ a sinϑ D/((κ−a²cos²ϑ)Σ): the roots cancel.
    kappa.sqrt() / sigma
        * (p / (r * r + kappa) + sign.d_factor() * a * s * d / (kappa - a * a * cs * cs))
}

fn check_marck(params: &BlackHoleParams, kappa: f64, theta: f64) -> Result<()> {
    let a = params.spin();
    let cs = theta.cos();
    if !(kappa > 0.0) {
        return Err(Error::MarckUndefined(format!("kappa = {kappa:e} is not positive")));
    }
    let q = kappa - a * a * cs * cs;
    if !(q > 0.0) {
        return Err(Error::MarckUndefined(format!(
            "kappa - a^2 cos^2(theta) = {q:e} is not positive"
        )));
    }
    Ok(())
}

pub fn chi_rate(state: &GeodesicState, kappa: f64, params: &BlackHoleParams, sign: ChiSign) -> Result<f64> {
    state.check(params)?;
    check_marck(params, kappa, state.point.theta)?;
    let mut c = state.constants(params);
    c.carter = kappa;
    Ok(chi_rate_unchecked(params, &c, state.point.r, state.point.theta, sign))
}

/// The χ-independent legs L_(3), L̃_(1), L̃_(2) in coordinate components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticLegs {
    pub l3: Vector4<f64>,
    pub l1_tilde: Vector4<f64>,
    pub l2_tilde: Vector4<f64>,
}

/// √((κ − a²cos²ϑ)/(r² + κ)), the normalization that makes the legs unit.
pub fn frame_varpi(params: &BlackHoleParams, kappa: f64, r: f64, theta: f64) -> f64 {
    let a = params.spin();
    let cs = theta.cos();
    ((kappa - a * a * cs * cs) / (r * r + kappa)).sqrt()
}

/// ϖ with κ − a²cos²ϑ replaced by D² + Θ = Σ(u₂² + u₃²) from the frame velocity,
/// which stays accurate when κ − a²cos²ϑ is small.
pub(crate) fn local_varpi(kappa: f64, r: f64, sigma: f64, u: &Vector4<f64>) -> f64 {
    (sigma * (u[2] * u[2] + u[3] * u[3]) / (r * r + kappa)).sqrt()
}

pub fn marck_static_legs(state: &GeodesicState, kappa: f64, params: &BlackHoleParams) -> Result<StaticLegs> {
    state.check(params)?;
    check_marck(params, kappa, state.point.theta)?;
    Ok(static_legs_unchecked(state, kappa, params))
}

pub(crate) fn static_legs_unchecked(state: &GeodesicState, kappa: f64, params: &BlackHoleParams) -> StaticLegs {
    let (r, theta) = (state.point.r, state.point.theta);
    let a = params.spin();
    let ac = a * theta.cos();
    let w = symmetric_coframe(params, r, theta);
    let u = Vector4::from_fn(|i, _| w[i].dot(&state.velocity));
    let vp = local_varpi(kappa, r, params.sigma(r, theta), &u);
    let sk = kappa.sqrt();
    let l3 = Vector4::new(ac * u[1], ac * u[0], r * u[3], -r * u[2]) / sk;
    let l1 = Vector4::new(vp * r * u[1], vp * r * u[0], -ac * u[3] / vp, ac * u[2] / vp) / sk;
    let l2 = Vector4::new(vp * u[0], vp * u[1], u[2] / vp, u[3] / vp);
    let e = symmetric_legs(params, r, theta);
    let lift = |c: Vector4<f64>| e[0] * c[0] + e[1] * c[1] + e[2] * c[2] + e[3] * c[3];
    StaticLegs {
        l3: lift(l3),
        l1_tilde: lift(l1),
        l2_tilde: lift(l2),
    }
}

/// (ι_U f)^μ = g^{μν} U^ρ f_ρν, the unnormalized Killing–Yano image of U.
pub fn killing_yano_image(state: &GeodesicState, params: &BlackHoleParams) -> Vector4<f64> {
    let (r, theta) = (state.point.r, state.point.theta);
    let f = killing_yano_components(params, r, theta);
    inverse_metric_components(params, r, theta) * (f.transpose() * state.velocity)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarckFrame {
    /// L_(0) = U, L_(1), L_(2), L_(3).
    pub legs: [Vector4<f64>; 4],
    pub chi: f64,
    pub tau: f64,
}

impl MarckFrame {
    pub fn tetrad(&self) -> Tetrad {
        Tetrad {
            legs: self.legs,
            kind: TetradKind::Marck,
        }
    }
}

pub fn marck_frame_at(state: &GeodesicState, kappa: f64, chi: f64, params: &BlackHoleParams) -> Result<MarckFrame> {
    let s = marck_static_legs(state, kappa, params)?;
    let (sn, cs) = chi.sin_cos();
    Ok(MarckFrame {
        legs: [
            state.velocity,
            s.l1_tilde * cs - s.l2_tilde * sn,
            s.l1_tilde * sn + s.l2_tilde * cs,
            s.l3,
        ],
        chi,
        tau: state.tau,
    })
}

pub fn propagate_marck_frame(trajectory: &Trajectory, chi0: f64) -> Result<Vec<MarckFrame>> {
    if !trajectory.chi_defined {
        return Err(Error::MarckUndefined(
            "trajectory was integrated without a rotation angle".into(),
        ));
    }
    let kappa = trajectory.constants.carter;
    trajectory
        .samples
        .iter()
        .map(|s| marck_frame_at(&s.state, kappa, s.chi + chi0, &trajectory.params))
        .collect()
}

/// Fourth-order central difference weights for the first derivative.
pub(crate) fn d1_stencil<T>(f: impl Fn(isize) -> T, h: f64) -> T
where
    T: std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    (f(-2) - f(2)) * (1.0 / (12.0 * h)) + (f(1) - f(-1)) * (8.0 / (12.0 * h))
}

/// Per-leg maximum of ‖dL/dτ + Γ(U, L)‖ over interior samples.
///
/// The norm is the largest symmetric-frame component; dL/dτ comes from
/// fourth-order central differences on the trajectory grid.
pub fn transport_residuals(trajectory: &Trajectory, frames: &[MarckFrame]) -> [f64; 4] {
    let params = &trajectory.params;
    let n = frames.len().min(trajectory.samples.len());
    let mut worst = [0.0f64; 4];
    if n < 5 {
        return worst;
    }
    let h = trajectory.config.output_step;
    for i in 2..n - 2 {
        let st = &trajectory.samples[i].state;
        let gamma = christoffel_components(params, st.point.r, st.point.theta);
        let w = symmetric_coframe(params, st.point.r, st.point.theta);
        for (leg, worst_leg) in worst.iter_mut().enumerate() {
            let dl = d1_stencil(|k| frames[(i as isize + k) as usize].legs[leg], h);
            let res = dl + contract_christoffel(&gamma, &st.velocity, &frames[i].legs[leg]);
            let m = (0..4).map(|a| w[a].dot(&res).abs()).fold(0.0, f64::max);
            *worst_leg = worst_leg.max(m);
        }
    }
    worst
}

/// max |g(L_a, L_b) − η_ab| over a frame sequence.
pub fn frame_orthonormality(trajectory: &Trajectory, frames: &[MarckFrame]) -> f64 {
    frames
        .iter()
        .zip(&trajectory.samples)
        .map(|(f, s)| {
            let g = metric_components(&trajectory.params, s.state.point.r, s.state.point.theta);
            f.tetrad().orthonormality_residual(&g)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{initial_state_from_constants, integrate_geodesic, IntegratorConfig};
    use crate::kerr::carter_constant_unchecked;
    use crate::sampling::{random_params, random_state};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn frame_comps(params: &BlackHoleParams, st: &GeodesicState, v: &Vector4<f64>) -> Vector4<f64> {
        let w = symmetric_coframe(params, st.point.r, st.point.theta);
        Vector4::from_fn(|a, _| w[a].dot(v))
    }

    fn equatorial() -> (BlackHoleParams, GeodesicState, f64) {
        let p = BlackHoleParams::new(1.0, 0.6).unwrap();
        let kappa = (0.6f64 * 1.0 - 2.0).powi(2);
        let s = initial_state_from_constants(&ConservedSet::new(1.0, 2.0, kappa), 10.0, FRAC_PI_2, 0.0, 1.0, 1.0, &p)
            .unwrap();
        (p, s, kappa)
    }

    fn generic_trajectory(chi_sign: ChiSign) -> Trajectory {
        let p = BlackHoleParams::new(1.0, 0.6).unwrap();
        let s = initial_state_from_constants(&ConservedSet::new(0.97, 3.0, 12.0), 15.0, 1.2, 0.0, 1.0, 1.0, &p).unwrap();
        let cfg = IntegratorConfig {
            tau_max: 300.0,
            chi_sign,
            ..Default::default()
        };
        integrate_geodesic(&s, &cfg, &p).unwrap()
    }

    #[test]
    fn equatorial_third_leg() {
        let (p, s, kappa) = equatorial();
        let legs = marck_static_legs(&s, kappa, &p).unwrap();
        let c = frame_comps(&p, &s, &legs.l3);
        // D = aE − Lz = −1.4
        assert!((c - Vector4::new(0.0, 0.0, 0.0, 1.0)).abs().max() < 1e-12, "{c}");
    }

    #[test]
    fn second_tilde_leg_is_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let s = random_state(&mut rng, &p, 1.5);
            let kappa = carter_constant_unchecked(&p, s.point.r, s.point.theta, &s.velocity);
            let legs = marck_static_legs(&s, kappa, &p).unwrap();
            let g = metric_components(&p, s.point.r, s.point.theta);
            assert_relative_eq!(legs.l2_tilde.dot(&(g * legs.l2_tilde)), -1.0, epsilon = 1e-10);
            assert!(legs.l3.dot(&(g * s.velocity)).abs() < 1e-10);
        }
    }

    #[test]
    fn chi_rate_equatorial_example() {
        let (p, s, kappa) = equatorial();
        let printed = chi_rate(&s, kappa, &p, ChiSign::Printed).unwrap();
        assert_relative_eq!(printed, 0.0196, epsilon = 5e-5);
        // the other sign gives a clearly different value
        let flipped = chi_rate(&s, kappa, &p, ChiSign::Flipped).unwrap();
        assert!((flipped - 0.0196).abs() > 1e-2);
    }

    #[test]
    fn chi_rate_without_spin_has_no_polar_term() {
        let p = BlackHoleParams::new(1.0, 0.0).unwrap();
        let s = initial_state_from_constants(&ConservedSet::new(0.97, 3.0, 12.0), 15.0, 1.2, 0.0, 1.0, 1.0, &p).unwrap();
        let a = chi_rate(&s, 12.0, &p, ChiSign::Printed).unwrap();
        let b = chi_rate(&s, 12.0, &p, ChiSign::Flipped).unwrap();
        assert_eq!(a, b);
        let sigma = 225.0;
        assert_relative_eq!(a, 12f64.sqrt() * 0.97 * 225.0 / (sigma * (225.0 + 12.0)), max_relative = 1e-14);
    }

    #[test]
    fn degenerate_constant_is_rejected() {
        let p = BlackHoleParams::new(1.0, 0.0).unwrap();
        let s = initial_state_from_constants(&ConservedSet::new(1.1, 0.0, 0.0), 10.0, FRAC_PI_2, 0.0, 1.0, 1.0, &p).unwrap();
        assert!(matches!(marck_static_legs(&s, 0.0, &p), Err(Error::MarckUndefined(_))));
        assert!(matches!(chi_rate(&s, 0.0, &p, ChiSign::Printed), Err(Error::MarckUndefined(_))));
    }

    #[test]
    fn orthonormal_at_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..1000 {
            let p = random_params(&mut rng);
            let s = random_state(&mut rng, &p, 2.0);
            let kappa = carter_constant_unchecked(&p, s.point.r, s.point.theta, &s.velocity);
            let f = marck_frame_at(&s, kappa, 0.7, &p).unwrap();
            let g = metric_components(&p, s.point.r, s.point.theta);
            assert!(f.tetrad().orthonormality_residual(&g) < 1e-10);
        }
    }

    #[test]
    fn printed_sign_transports_and_flipped_does_not() {
        let printed = generic_trajectory(ChiSign::Printed);
        let frames = propagate_marck_frame(&printed, 0.0).unwrap();
        let res = transport_residuals(&printed, &frames);
        assert!(res.iter().all(|r| *r < 1e-6), "{res:?}");
        assert!(frame_orthonormality(&printed, &frames) < 1e-10);

        let flipped = generic_trajectory(ChiSign::Flipped);
        let frames = propagate_marck_frame(&flipped, 0.0).unwrap();
        let res = transport_residuals(&flipped, &frames);
        assert!(res[0] < 1e-6 && res[3] < 1e-6);
        assert!(res[1] > 1e-4 && res[2] > 1e-4, "{res:?}");
    }

    #[test]
    fn propagated_frame_structure() {
        let traj = generic_trajectory(ChiSign::Printed);
        let chi0 = 0.4;
        let frames = propagate_marck_frame(&traj, chi0).unwrap();
        assert_eq!(frames[0].chi, chi0);
        let kappa = traj.constants.carter;
        let p = traj.params;
        for (f, s) in frames.iter().zip(&traj.samples).step_by(7) {
            let g = metric_components(&p, s.state.point.r, s.state.point.theta);
            for leg in [f.legs[1], f.legs[2]] {
                assert!(leg.dot(&(g * f.legs[0])).abs() < 1e-10);
                assert!(leg.dot(&(g * f.legs[3])).abs() < 1e-10);
            }
            // L_(3) = ι_U f/√κ, with positive normalization
            let image = killing_yano_image(&s.state, &p);
            let d = (f.legs[3] - image / kappa.sqrt()).abs().max();
            assert!(d < 1e-10 * image.abs().max().max(1.0), "{d}");
            assert!(-f.legs[3].dot(&(g * image)) > 0.0);
        }
    }
}
