//! integrate → Marck frame → triad → Λ → Ŵ → k_g, flattened into output rows.

use kerr_spin::geodesic::{conservation_report, Drift, TrajectorySample};
use kerr_spin::marck::marck_frame_at;
use kerr_spin::precession::{basis_change_matrix, precession_series, PrecessionSeries};
use kerr_spin::triad::reference_triad_at;
use kerr_spin::{initial_state_from_constants, integrate_geodesic, Error, GeodesicState, Trajectory};
use nalgebra::Vector3;
use serde::Serialize;

use crate::config::{SpinInput, ValidatedConfig};
use crate::CliError;

/// SO(3) and unit-norm tolerance reported in the summary.
pub const ROTATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputRow {
    pub tau: f64,
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub r_dot: f64,
    pub theta_dot: f64,
    pub chi: f64,
    pub w: Option<[f64; 3]>,
    pub k_g: Option<f64>,
    pub drift: Drift,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub name: String,
    pub samples: usize,
    pub tau_final: f64,
    pub max_drift_energy: f64,
    pub max_drift_angular_momentum: f64,
    pub max_drift_carter: f64,
    pub max_drift_norm: f64,
    pub drift_tolerance: f64,
    pub max_so3_residual: Option<f64>,
    pub max_spin_norm_error: Option<f64>,
    pub kg_defined_samples: usize,
    pub tolerances_met: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<OutputRow>,
    pub summary: Summary,
    pub trajectory: Trajectory,
    pub series: Option<PrecessionSeries>,
}

impl RunOutput {
    pub fn failed(&self) -> bool {
        self.summary.error.is_some()
    }
}

fn module_of(e: &Error) -> &'static str {
    match e {
        Error::NonExtreme { .. } | Error::OutsideDomain(_) => "kerr-geometry",
        Error::ForbiddenRegion { .. }
        | Error::NonUnitVelocity { .. }
        | Error::HorizonApproach { .. }
        | Error::Integration { .. }
        | Error::DriftExceeded { .. } => "geodesic-integrator",
        Error::MarckUndefined(_) => "marck-frame",
        Error::SemiclassicalBreakdown { .. } => "semiclassical-spin",
        Error::ReferenceDegenerate { .. } => "reference-frame",
        Error::Invalid(_) => "precession",
    }
}

fn describe(e: &Error) -> String {
    let tau = match e {
        Error::HorizonApproach { tau, .. } | Error::Integration { tau, .. } => format!(" at tau = {tau}"),
        _ => String::new(),
    };
    format!("{}{tau}: {e}", module_of(e))
}

/// Ŵ(0) in the reference triad.
fn initial_spin(cfg: &ValidatedConfig, state0: &GeodesicState) -> Result<Vector3<f64>, Error> {
    match cfg.spin {
        SpinInput::Measured(w) => Ok(w),
        SpinInput::Spinor(k) => {
            let w = k.spin_vector()?;
            let w_pp = Vector3::new(w[1], w[2], w[3]).normalize();
            let kappa = cfg.constants.carter;
            let frame = marck_frame_at(state0, kappa, cfg.raw.spin.chi0, &cfg.params)?;
            let triad = reference_triad_at(state0, kappa, &cfg.params)?;
            Ok(basis_change_matrix(&frame, &triad, &cfg.params)? * w_pp)
        }
    }
}

fn row(sample: &TrajectorySample, chi0: f64, drift: Drift) -> OutputRow {
    let s = &sample.state;
    OutputRow {
        tau: s.tau,
        t: s.point.t,
        r: s.point.r,
        theta: s.point.theta,
        phi: s.point.phi,
        r_dot: s.velocity[1],
        theta_dot: s.velocity[2],
        chi: sample.chi + chi0,
        w: None,
        k_g: None,
        drift,
    }
}

pub fn run_simulation(cfg: &ValidatedConfig) -> Result<RunOutput, CliError> {
    let i = &cfg.raw.initial;
    let state0 = initial_state_from_constants(
        &cfg.constants,
        i.r0,
        i.theta0,
        i.phi0,
        f64::from(i.sign_r),
        f64::from(i.sign_theta),
        &cfg.params,
    )
    .map_err(|e| CliError::Config(format!("initial: {e}")))?;

    let mut integrator = cfg.integrator;
    let tolerance = integrator.drift_tolerance.take().unwrap_or(f64::INFINITY);
    let mut error = None;
    let trajectory = match integrate_geodesic(&state0, &integrator, &cfg.params) {
        Ok(t) => t,
        Err(e) => {
            let msg = describe(&e);
            match e {
                Error::HorizonApproach { partial, .. } | Error::Integration { partial, .. } => {
                    error = Some(msg);
                    *partial
                }
                other => return Err(CliError::Runtime(describe(&other))),
            }
        }
    };

    let chi0 = cfg.raw.spin.chi0;
    let report = conservation_report(&trajectory);
    let mut rows: Vec<OutputRow> = trajectory
        .samples
        .iter()
        .zip(&report.per_sample)
        .map(|(s, d)| row(s, chi0, *d))
        .collect();

    let series = match initial_spin(cfg, &state0).and_then(|w0| precession_series(&trajectory, chi0, &w0)) {
        Ok(series) => {
            if let Some(gap) = &series.gap {
                error.get_or_insert(format!("reference-frame at tau = {}: {}", gap.tau, gap.reason));
                rows.truncate(series.spin.len());
            }
            for (r, (w, k)) in rows.iter_mut().zip(series.spin.iter().zip(&series.curvature)) {
                r.w = Some([w[0], w[1], w[2]]);
                r.k_g = *k;
            }
            Some(series)
        }
        Err(e) => {
            error.get_or_insert(describe(&e));
            None
        }
    };

    let so3 = series.as_ref().map(|s| s.max_so3_residual());
    let norm_err = series
        .as_ref()
        .map(|s| s.spin.iter().map(|w| (w.norm() - 1.0).abs()).fold(0.0, f64::max));
    let m = report.max;
    let tolerances_met = report.max_drift() <= tolerance
        && so3.is_some_and(|x| x <= ROTATION_TOLERANCE)
        && norm_err.is_some_and(|x| x <= ROTATION_TOLERANCE);
    let summary = Summary {
        name: cfg.raw.output.name.clone(),
        samples: rows.len(),
        tau_final: rows.last().map_or(0.0, |r| r.tau),
        max_drift_energy: m.energy,
        max_drift_angular_momentum: m.angular_momentum,
        max_drift_carter: m.carter,
        max_drift_norm: m.norm,
        drift_tolerance: tolerance,
        max_so3_residual: so3,
        max_spin_norm_error: norm_err,
        kg_defined_samples: rows.iter().filter(|r| r.k_g.is_some()).count(),
        tolerances_met,
        error,
    };
    Ok(RunOutput {
        rows,
        summary,
        trajectory,
        series,
    })
}
