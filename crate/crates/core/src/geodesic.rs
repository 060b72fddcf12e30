//! Timelike geodesics: potentials, initial data, integration and first-integral monitoring.

use std::fmt;

use nalgebra::{SVector, Vector4};
use ode_solvers::dop853::Dop853;
use ode_solvers::dop_shared::IntegrationError;
use ode_solvers::{OutputType, System};

use crate::error::{Error, Result};
use crate::kerr::{
    carter_constant_unchecked, check_domain, christoffel_components, contract_christoffel,
    metric_components, symmetric_coframe, symmetric_legs, BlackHoleParams, SpacetimePoint,
};
use crate::marck::{chi_rate_unchecked, ChiSign};

/// (x^μ, U^μ, χ, V^μ) with V an optional parallel-transported vector.
type State = SVector<f64, 13>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedSet {
    pub energy: f64,
    pub angular_momentum: f64,
    pub carter: f64,
}

impl ConservedSet {
    pub fn new(energy: f64, angular_momentum: f64, carter: f64) -> Self {
        Self {
            energy,
            angular_momentum,
            carter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potentials {
    pub p: f64,
    pub d: f64,
    pub radial: f64,
    pub polar: f64,
}

pub fn potentials_at(r: f64, theta: f64, c: &ConservedSet, params: &BlackHoleParams) -> Result<Potentials> {
    check_domain(params, r, theta)?;
    Ok(potentials_unchecked(params, c, r, theta))
}

pub(crate) fn potentials_unchecked(params: &BlackHoleParams, c: &ConservedSet, r: f64, theta: f64) -> Potentials {
    let a = params.spin();
    let (s, cs) = theta.sin_cos();
    let p = c.energy * (r * r + a * a) - a * c.angular_momentum;
    let d = a * c.energy * s - c.angular_momentum / s;
    Potentials {
        p,
        d,
        radial: p * p - params.delta(r) * (c.carter + r * r),
        polar: c.carter - a * a * cs * cs - d * d,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub point: SpacetimePoint,
    pub velocity: Vector4<f64>,
    pub tau: f64,
}

impl GeodesicState {
    pub fn new(point: SpacetimePoint, velocity: Vector4<f64>, tau: f64) -> Self {
        Self { point, velocity, tau }
    }

    pub fn norm(&self, params: &BlackHoleParams) -> f64 {
        let g = metric_components(params, self.point.r, self.point.theta);
        self.velocity.dot(&(g * self.velocity))
    }

    /// U♭ = g·U.
    pub fn covelocity(&self, params: &BlackHoleParams) -> Vector4<f64> {
        metric_components(params, self.point.r, self.point.theta) * self.velocity
    }

    /// (E, Lz, κ) recomputed from the velocity.
    pub fn constants(&self, params: &BlackHoleParams) -> ConservedSet {
        let u = self.covelocity(params);
        ConservedSet {
            energy: u[0],
            angular_momentum: -u[3],
            carter: carter_constant_unchecked(params, self.point.r, self.point.theta, &self.velocity),
        }
    }

    /// Symmetric-frame components of the velocity.
    pub fn frame_velocity(&self, params: &BlackHoleParams) -> Vector4<f64> {
        let w = symmetric_coframe(params, self.point.r, self.point.theta);
        Vector4::from_fn(|a, _| w[a].dot(&self.velocity))
    }

    /// Signed (√R, √Θ) = (Σṙ, Σϑ̇).
    pub fn signed_roots(&self, params: &BlackHoleParams) -> (f64, f64) {
        let sigma = params.sigma(self.point.r, self.point.theta);
        (sigma * self.velocity[1], sigma * self.velocity[2])
    }

    pub fn check(&self, params: &BlackHoleParams) -> Result<()> {
        self.point.check(params)?;
        if !self.velocity.iter().all(|x| x.is_finite()) {
            return Err(Error::Invalid("non-finite velocity".into()));
        }
        Ok(())
    }
}

/// Relative slack applied before a slightly negative potential is treated as forbidden.
const ROOT_SLACK: f64 = 1e-12;
/// Potentials this close to zero (relative) are roundoff at a turning point or on the equator.
const ROOT_SNAP: f64 = 64.0 * f64::EPSILON;

fn signed_sqrt(value: f64, scale: f64, sign: f64, name: &'static str) -> Result<f64> {
    if value.abs() <= ROOT_SNAP * scale.max(1.0) {
        Ok(0.0)
    } else if value >= 0.0 {
        Ok(sign * value.sqrt())
    } else if value >= -ROOT_SLACK * scale {
        Ok(0.0)
    } else {
        Err(Error::ForbiddenRegion { potential: name, value })
    }
}

fn check_sign(sign: f64, name: &str) -> Result<()> {
    if sign == 1.0 || sign == -1.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{name} must be +1 or -1, got {sign}")))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn initial_state_from_constants(
    c: &ConservedSet,
    r0: f64,
    theta0: f64,
    phi0: f64,
    sign_r: f64,
    sign_theta: f64,
    params: &BlackHoleParams,
) -> Result<GeodesicState> {
    check_domain(params, r0, theta0)?;
    check_sign(sign_r, "sign_r")?;
    check_sign(sign_theta, "sign_theta")?;
    let pot = potentials_unchecked(params, c, r0, theta0);
    let sqrt_r = signed_sqrt(pot.radial, pot.p * pot.p, sign_r, "R(r)")?;
    let sqrt_th = signed_sqrt(pot.polar, c.carter.abs() + pot.d * pot.d, sign_theta, "Theta(theta)")?;
    let sigma = params.sigma(r0, theta0);
    let sd = params.delta(r0).sqrt();
    let comps = Vector4::new(pot.p / sd, sqrt_r / sd, pot.d, sqrt_th) / sigma.sqrt();
    let e = symmetric_legs(params, r0, theta0);
    let u = e[0] * comps[0] + e[1] * comps[1] + e[2] * comps[2] + e[3] * comps[3];
    Ok(GeodesicState::new(SpacetimePoint::new(0.0, r0, theta0, phi0), u, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Maximum step; `None` means 0.5 M.
    pub max_step: Option<f64>,
    pub output_step: f64,
    pub tau_max: f64,
    pub max_steps: u32,
    /// Maximum relative drift accepted on E, Lz, κ and the norm; `None` disables the check.
    pub drift_tolerance: Option<f64>,
    /// Stop once r comes within this distance of r₊.
    pub horizon_margin: f64,
    pub chi_sign: ChiSign,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-12,
            max_step: None,
            output_step: 0.01,
            tau_max: 500.0,
            max_steps: 10_000_000,
            drift_tolerance: Some(1e-8),
            horizon_margin: 1e-6,
            chi_sign: ChiSign::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub state: GeodesicState,
    /// Marck rotation angle with χ(0) = 0.
    pub chi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: BlackHoleParams,
    pub constants: ConservedSet,
    pub samples: Vec<TrajectorySample>,
    pub config: IntegratorConfig,
    /// False when κ or κ − a²cos²ϑ vanish at the start, so χ was not integrated.
    pub chi_defined: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.state.tau).collect()
    }

    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }
}

struct GeodesicSystem {
    params: BlackHoleParams,
    constants: ConservedSet,
    chi: Option<ChiSign>,
    r_stop: f64,
    stopped: bool,
}

impl System<f64, State> for GeodesicSystem {
    fn system(&self, _tau: f64, y: &State, dy: &mut State) {
        let (r, th) = (y[1], y[2]);
        let u = Vector4::new(y[4], y[5], y[6], y[7]);
        let gamma = christoffel_components(&self.params, r, th);
        let acc = contract_christoffel(&gamma, &u, &u);
        let v = Vector4::new(y[9], y[10], y[11], y[12]);
        let dv = contract_christoffel(&gamma, &u, &v);
        for i in 0..4 {
            dy[i] = u[i];
            dy[i + 4] = -acc[i];
            dy[i + 9] = -dv[i];
        }
        dy[8] = match self.chi {
            Some(sign) => chi_rate_unchecked(&self.params, &self.constants, r, th, sign),
            None => 0.0,
        };
    }

    fn solout(&mut self, _tau: f64, y: &State, _dy: &State) -> bool {
        if !(y[1] > self.r_stop) {
            self.stopped = true;
        }
        self.stopped
    }
}

fn pack(state: &GeodesicState, v: &Vector4<f64>) -> State {
    let p = state.point;
    let u = state.velocity;
    State::from_column_slice(&[
        p.t, p.r, p.theta, p.phi, u[0], u[1], u[2], u[3], 0.0, v[0], v[1], v[2], v[3],
    ])
}

fn unpack(tau: f64, y: &State) -> TrajectorySample {
    TrajectorySample {
        state: GeodesicState::new(
            SpacetimePoint::new(y[0], y[1], y[2], y[3]),
            Vector4::new(y[4], y[5], y[6], y[7]),
            tau,
        ),
        chi: y[8],
    }
}

pub(crate) fn chi_is_defined(params: &BlackHoleParams, c: &ConservedSet, theta: f64) -> bool {
    let a = params.spin();
    let cs = theta.cos();
    c.carter > 0.0 && c.carter - a * a * cs * cs > 0.0
}

pub fn integrate_geodesic(
    state0: &GeodesicState,
    config: &IntegratorConfig,
    params: &BlackHoleParams,
) -> Result<Trajectory> {
    integrate_inner(state0, &Vector4::zeros(), config, params).map(|(t, _)| t)
}

/// Integrates the geodesic together with the parallel transport of `v0`,
/// returning the transported coordinate components at every sample.
pub fn integrate_with_transport(
    state0: &GeodesicState,
    v0: &Vector4<f64>,
    config: &IntegratorConfig,
    params: &BlackHoleParams,
) -> Result<(Trajectory, Vec<Vector4<f64>>)> {
    integrate_inner(state0, v0, config, params)
}

fn integrate_inner(
    state0: &GeodesicState,
    v0: &Vector4<f64>,
    config: &IntegratorConfig,
    params: &BlackHoleParams,
) -> Result<(Trajectory, Vec<Vector4<f64>>)> {
    state0.check(params)?;
    if !(config.output_step > 0.0) || !(config.tau_max >= 0.0) {
        return Err(Error::Invalid(format!(
            "output step {} and tau_max {} must be positive",
            config.output_step, config.tau_max
        )));
    }
    let constants = state0.constants(params);
    let chi_defined = chi_is_defined(params, &constants, state0.point.theta);
    let start = GeodesicState { tau: 0.0, ..*state0 };
    let mut traj = Trajectory {
        params: *params,
        constants,
        samples: vec![TrajectorySample { state: start, chi: 0.0 }],
        config: *config,
        chi_defined,
    };
    if config.tau_max == 0.0 {
        return Ok((traj, vec![*v0]));
    }

    let r_stop = params.r_plus() + config.horizon_margin;
    let system = GeodesicSystem {
        params: *params,
        constants,
        chi: chi_defined.then_some(config.chi_sign),
        r_stop,
        stopped: false,
    };
    let h_max = config.max_step.unwrap_or(0.5 * params.mass());
    let mut solver = Dop853::from_param(
        system,
        0.0,
        config.tau_max,
        config.output_step,
        pack(&start, v0),
        config.rtol,
        config.atol,
        0.9,
        0.0,
        0.333,
        6.0,
        h_max,
        0.0,
        config.max_steps,
        u32::MAX,
        OutputType::Dense,
    );
    let outcome = solver.integrate();

    traj.samples.clear();
    let mut transported = Vec::new();
    for (tau, y) in solver.x_out().iter().zip(solver.y_out()) {
        if traj.samples.last().is_some_and(|s| s.state.tau >= *tau) {
            continue;
        }
        if !(y[1] > r_stop) || !y.iter().all(|v| v.is_finite()) {
            break;
        }
        traj.samples.push(unpack(*tau, y));
        transported.push(Vector4::new(y[9], y[10], y[11], y[12]));
    }
    let tau_last = traj.last().map_or(0.0, |s| s.state.tau);
    let r_last = traj.last().map_or(start.point.r, |s| s.state.point.r);
    let near_horizon = r_last < params.r_plus() + 0.05 * params.mass();

    let truncated = tau_last < config.tau_max - config.output_step;

    match outcome {
        Ok(_) if truncated => {
            return Err(Error::HorizonApproach {
                tau: tau_last,
                reason: format!("r reached r+ + {:e}", config.horizon_margin),
                partial: Box::new(traj),
            })
        }
        Ok(_) => {}
        Err(e) => {
            let reason = match e {
                IntegrationError::MaxNumStepReached { n_step, .. } => format!("step limit {n_step} reached"),
                IntegrationError::StepSizeUnderflow { .. } => "step size underflow".to_string(),
                IntegrationError::StiffnessDetected { .. } => "stiffness detected".to_string(),
            };
            if near_horizon {
                return Err(Error::HorizonApproach {
                    tau: tau_last,
                    reason,
                    partial: Box::new(traj),
                });
            }
            return Err(Error::Integration {
                tau: tau_last,
                reason,
                partial: Box::new(traj),
            });
        }
    }

    if let Some(tol) = config.drift_tolerance {
        let report = conservation_report(&traj);
        if report.max_drift() > tol {
            return Err(Error::DriftExceeded {
                tolerance: tol,
                report: Box::new(report),
                partial: Box::new(traj),
            });
        }
    }
    Ok((traj, transported))
}

/// Relative change with the reference magnitude floored at one.
pub fn relative_drift(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Drift {
    pub energy: f64,
    pub angular_momentum: f64,
    pub carter: f64,
    pub norm: f64,
}

impl Drift {
    pub fn max(&self) -> f64 {
        self.energy.max(self.angular_momentum).max(self.carter).max(self.norm)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub reference: ConservedSet,
    pub per_sample: Vec<Drift>,
    pub max: Drift,
}

impl ConservationReport {
    pub fn max_drift(&self) -> f64 {
        self.max.max()
    }
}

impl fmt::Display for ConservationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max drift E={:e} Lz={:e} kappa={:e} norm={:e} over {} samples",
            self.max.energy,
            self.max.angular_momentum,
            self.max.carter,
            self.max.norm,
            self.per_sample.len()
        )
    }
}

pub fn sample_drift(state: &GeodesicState, reference: &ConservedSet, params: &BlackHoleParams) -> Drift {
    let c = state.constants(params);
    Drift {
        energy: relative_drift(c.energy, reference.energy),
        angular_momentum: relative_drift(c.angular_momentum, reference.angular_momentum),
        carter: relative_drift(c.carter, reference.carter),
        norm: (state.norm(params) - 1.0).abs(),
    }
}

pub fn conservation_report(trajectory: &Trajectory) -> ConservationReport {
    let per_sample: Vec<Drift> = trajectory
        .samples
        .iter()
        .map(|s| sample_drift(&s.state, &trajectory.constants, &trajectory.params))
        .collect();
    let max = per_sample.iter().fold(Drift::default(), |m, d| Drift {
        energy: m.energy.max(d.energy),
        angular_momentum: m.angular_momentum.max(d.angular_momentum),
        carter: m.carter.max(d.carter),
        norm: m.norm.max(d.norm),
    });
    ConservationReport {
        reference: trajectory.constants,
        per_sample,
        max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn example_params() -> BlackHoleParams {
        BlackHoleParams::new(1.0, 0.6).unwrap()
    }

    /// Bound inclined orbit: r ∈ [7.99, 23.74], ϑ ∈ [0.88, 2.26].
    fn bound_state(params: &BlackHoleParams) -> GeodesicState {
        initial_state_from_constants(&ConservedSet::new(0.97, 3.0, 12.0), 15.0, 1.2, 0.0, 1.0, 1.0, params).unwrap()
    }

    #[test]
    fn potentials_example() {
        let p = example_params();
        let c = ConservedSet::new(1.0, 2.0, 1.96);
        let pot = potentials_at(10.0, std::f64::consts::FRAC_PI_2, &c, &p).unwrap();
        assert_relative_eq!(pot.p, 99.16, epsilon = 1e-12);
        assert_relative_eq!(p.delta(10.0), 80.36, epsilon = 1e-12);
        assert_relative_eq!(pot.radial, 99.16 * 99.16 - 80.36 * 101.96, epsilon = 1e-9);
        assert_relative_eq!(pot.radial, 1639.2, epsilon = 0.05);
        assert!(pot.polar.abs() < 1e-14);
    }

    #[test]
    fn forbidden_region_names_potential() {
        let p = example_params();
        let err = initial_state_from_constants(&ConservedSet::new(0.5, 2.0, 4.0), 20.0, 1.2, 0.0, 1.0, 1.0, &p)
            .unwrap_err();
        assert!(matches!(err, Error::ForbiddenRegion { potential: "R(r)", .. }), "{err}");
        let err = initial_state_from_constants(&ConservedSet::new(1.0, 2.0, 0.1), 20.0, 1.2, 0.0, 1.0, 1.0, &p)
            .unwrap_err();
        assert!(matches!(err, Error::ForbiddenRegion { potential: "Theta(theta)", .. }), "{err}");
        assert!(initial_state_from_constants(&ConservedSet::new(1.0, 2.0, 4.0), 20.0, 1.2, 0.0, 0.5, 1.0, &p).is_err());
    }

    #[test]
    fn initial_state_satisfies_first_order_equations() {
        let p = BlackHoleParams::new(1.25, 0.8).unwrap();
        for (e, l, k, sr) in [(2.0, 3.0, 12.0, 1.0), (1.004, -4.0, 60.0, -1.0), (1.004, 4.0, 16.0, -1.0)] {
            let c = ConservedSet::new(e, l, k);
            let s = initial_state_from_constants(&c, 20.0, 1.57, 0.0, sr, 1.0, &p).unwrap();
            assert!((s.norm(&p) - 1.0).abs() < 1e-12);
            let back = s.constants(&p);
            assert_relative_eq!(back.energy, e, max_relative = 1e-12);
            assert_relative_eq!(back.angular_momentum, l, max_relative = 1e-12);
            assert_relative_eq!(back.carter, k, max_relative = 1e-12);
            let pot = potentials_at(20.0, 1.57, &c, &p).unwrap();
            let (sr_root, st_root) = s.signed_roots(&p);
            assert_relative_eq!(sr_root, sr * pot.radial.sqrt(), max_relative = 1e-12);
            assert_relative_eq!(st_root, pot.polar.sqrt(), max_relative = 1e-10);
        }
    }

    #[test]
    fn equatorial_state_has_no_polar_velocity() {
        let p = example_params();
        let c = ConservedSet::new(1.0, 2.0, 1.96);
        for sign in [1.0, -1.0] {
            let s = initial_state_from_constants(&c, 10.0, std::f64::consts::FRAC_PI_2, 0.0, 1.0, sign, &p).unwrap();
            assert!(s.velocity[2].abs() < 1e-15);
        }
    }

    #[test]
    fn fresh_state_has_zero_drift() {
        let p = example_params();
        let s = bound_state(&p);
        let cfg = IntegratorConfig {
            tau_max: 0.0,
            ..Default::default()
        };
        let traj = integrate_geodesic(&s, &cfg, &p).unwrap();
        assert_eq!(traj.len(), 1);
        let rep = conservation_report(&traj);
        assert_eq!(rep.max.energy, 0.0);
        assert_eq!(rep.max.angular_momentum, 0.0);
        assert_eq!(rep.max.carter, 0.0);
        assert!(rep.max.norm < 1e-14);
    }

    #[test]
    fn bound_orbit_conserves_first_integrals() {
        let p = example_params();
        let cfg = IntegratorConfig {
            tau_max: 1000.0,
            output_step: 0.05,
            ..Default::default()
        };
        let traj = integrate_geodesic(&bound_state(&p), &cfg, &p).unwrap();
        let rep = conservation_report(&traj);
        assert!(rep.max.norm < 1e-9, "{rep}");
        assert!(rep.max_drift() < 1e-8, "{rep}");
        let taus = traj.taus();
        assert!(taus.windows(2).all(|w| w[1] > w[0]));
        assert_relative_eq!(*taus.last().unwrap(), 1000.0, epsilon = 1e-9);

        let rs: Vec<f64> = traj.samples.iter().map(|s| s.state.point.r).collect();
        let rmin = rs.iter().copied().fold(f64::MAX, f64::min);
        let rmax = rs.iter().copied().fold(0.0, f64::max);
        assert!(rmin > 7.9 && rmin < 8.1 && rmax > 23.6 && rmax < 23.8, "{rmin} {rmax}");

        // The second-order solution reproduces the first-order potentials, turning points included.
        let mut worst = 0.0f64;
        for s in &traj.samples {
            let st = &s.state;
            let pot = potentials_unchecked(&p, &traj.constants, st.point.r, st.point.theta);
            let (sr, sth) = st.signed_roots(&p);
            worst = worst.max((sr * sr - pot.radial).abs()).max((sth * sth - pot.polar).abs());
        }
        assert!(worst < 1e-7, "{worst}");
    }

    #[test]
    fn time_reversal_returns_to_start() {
        let p = example_params();
        let cfg = IntegratorConfig {
            tau_max: 200.0,
            ..Default::default()
        };
        let s0 = bound_state(&p);
        let fwd = integrate_geodesic(&s0, &cfg, &p).unwrap();
        let end = fwd.last().unwrap().state;
        let rev = GeodesicState::new(end.point, -end.velocity, 0.0);
        let back = integrate_geodesic(&rev, &cfg, &p).unwrap();
        let fin = back.last().unwrap().state;
        let d = (fin.point.to_vector() - s0.point.to_vector()).abs().max();
        assert!(d < 1e-6, "{d}");
        assert!((fin.velocity + s0.velocity).abs().max() < 1e-6);
    }

    #[test]
    fn corrupted_velocity_is_flagged() {
        let p = example_params();
        let s = bound_state(&p);
        let traj = integrate_geodesic(&s, &IntegratorConfig { tau_max: 1.0, ..Default::default() }, &p).unwrap();
        let bad = GeodesicState::new(s.point, s.velocity * 1.01, 0.0);
        let d = sample_drift(&bad, &traj.constants, &p);
        assert!(d.norm > 1e-3);
    }

    #[test]
    fn plunge_reports_horizon_approach() {
        let p = example_params();
        let s = initial_state_from_constants(&ConservedSet::new(1.0, 0.5, 1.0), 10.0, 1.3, 0.0, -1.0, 1.0, &p).unwrap();
        match integrate_geodesic(&s, &IntegratorConfig::default(), &p) {
            Err(Error::HorizonApproach { tau, partial, .. }) => {
                assert!(tau > 0.0 && tau < 100.0);
                assert!(partial.len() > 10);
                let r_end = partial.last().unwrap().state.point.r;
                assert!(r_end > p.r_plus() && r_end < p.r_plus() + 0.1, "{r_end}");
            }
            other => panic!("expected horizon approach, got {other:?}"),
        }
    }

    #[test]
    fn drift_tolerance_violation_is_reported() {
        let p = example_params();
        let cfg = IntegratorConfig {
            rtol: 1e-3,
            atol: 1e-3,
            max_step: Some(5.0),
            drift_tolerance: Some(1e-12),
            tau_max: 300.0,
            ..Default::default()
        };
        match integrate_geodesic(&bound_state(&p), &cfg, &p) {
            Err(Error::DriftExceeded { report, .. }) => assert!(report.max_drift() > 1e-12),
            other => panic!("expected drift error, got {other:?}"),
        }
    }
}
