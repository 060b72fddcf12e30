//! Basis change between Marck's spatial legs and the reference triad, the
//! precession rotation Λ(τ), the measured spin Ŵ(τ) and its spherical curvature.

use nalgebra::{Matrix3, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::geodesic::{conservation_report, integrate_with_transport, Drift, GeodesicState, IntegratorConfig, Trajectory};
use crate::kerr::{metric_components, symmetric_coframe, BlackHoleParams};
use crate::marck::{local_varpi, marck_frame_at, propagate_marck_frame, MarckFrame};
use crate::triad::{reference_triad_at, ReferenceTriad};

/// Threshold on ‖Ẇ‖ below which k_g is reported undefined.
pub const SPIN_RATE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    pub matrix: Matrix3<f64>,
}

impl Rotation3 {
    pub fn identity() -> Self {
        Self {
            matrix: Matrix3::identity(),
        }
    }

    /// max |ΛᵀΛ − I|.
    pub fn orthogonality_residual(&self) -> f64 {
        (self.matrix.transpose() * self.matrix - Matrix3::identity()).abs().max()
    }

    pub fn det_residual(&self) -> f64 {
        (self.matrix.determinant() - 1.0).abs()
    }
}

/// M_ij = −g(T_i, L_(j)) with T = (X, Y, Z) and columns ordered L_(1), L_(2), L_(3).
pub fn basis_change_matrix(marck: &MarckFrame, triad: &ReferenceTriad, params: &BlackHoleParams) -> Result<Matrix3<f64>> {
    if marck.tau != triad.tau {
        return Err(Error::Invalid(format!(
            "frame anchored at tau = {} but triad at tau = {}",
            marck.tau, triad.tau
        )));
    }
    let g = metric_components(params, triad.point.r, triad.point.theta);
    let t = triad.vectors();
    Ok(Matrix3::from_fn(|i, j| -t[i].dot(&(g * marck.legs[j + 1]))))
}

/// The printed closed form of M(τ), whose columns are ordered (L_(3), −L_(1), −L_(2)).
pub fn basis_change_closed_form(
    state: &GeodesicState,
    kappa: f64,
    chi: f64,
    params: &BlackHoleParams,
) -> Result<Matrix3<f64>> {
    let triad = reference_triad_at(state, kappa, params)?;
    let (r, theta) = (state.point.r, state.point.theta);
    let a = params.spin();
    let ac = a * theta.cos();
    let sigma = params.sigma(r, theta);
    let u = state.frame_velocity(params);
    let sd = (sigma * params.delta(r)).sqrt();
    let ss = sigma.sqrt();
    let (p, sqrt_r, d, sqrt_th) = (u[0] * sd, u[1] * sd, u[2] * ss, u[3] * ss);
    let (rho, vr) = (triad.rho, triad.varrho);
    let k = kappa;
    let sk = k.sqrt();
    let kr = k + r * r;
    let wh = local_varpi(k, r, sigma, &u);
    let wp = wh * wh;
    let (sn, cs) = chi.sin_cos();
    let c1 = kr * (r * wp * sqrt_r * sqrt_th - ac * d * p);
    let c2 = kr * (ac * vr * sqrt_th + r * wp * d * p * sqrt_r);
    let big_a = (k * sigma * rho).sqrt();
    let big_b = (k * sigma * vr * rho).sqrt();
    let big_c = (k * vr).sqrt();
    Ok(Matrix3::new(
        (r * d * p + ac * sqrt_r * sqrt_th) / big_a,
        -(sk * sn * sigma * p * sqrt_th + c1 * cs) / (wh * kr * big_a),
        (sk * cs * sigma * p * sqrt_th - c1 * sn) / (wh * kr * big_a),
        (r * vr * sqrt_th - ac * d * p * sqrt_r) / big_b,
        (sk * sn * sigma * d * p * p + c2 * cs) / (wh * kr * big_b),
        (-sk * cs * sigma * d * p * p + c2 * sn) / (wh * kr * big_b),
        -ac * p / big_c,
        wh * (cs * r * p - sk * sn * sqrt_r) / big_c,
        wh * (sn * r * p + sk * cs * sqrt_r) / big_c,
    ))
}

/// Reorders the closed form's columns (L_(3), −L_(1), −L_(2)) to (L_(1), L_(2), L_(3)).
pub fn closed_form_in_marck_order(m: &Matrix3<f64>) -> Matrix3<f64> {
    Matrix3::from_columns(&[-m.column(1), -m.column(2), m.column(0).into_owned()])
}

pub fn precession_rotation(ms: &[Matrix3<f64>]) -> Vec<Rotation3> {
    let Some(m0) = ms.first() else {
        return Vec::new();
    };
    let m0t = m0.transpose();
    ms.iter().map(|m| Rotation3 { matrix: m * m0t }).collect()
}

pub fn evolve_spin(w0: &Vector3<f64>, lambdas: &[Rotation3]) -> Result<Vec<Vector3<f64>>> {
    let n = w0.norm();
    if !((n - 1.0).abs() <= 1e-10) {
        return Err(Error::Invalid(format!("initial spin vector has norm {n}, expected 1")));
    }
    Ok(lambdas.iter().map(|l| l.matrix * w0).collect())
}

/// Smallest arc on the sphere covered by one stencil step. Slower stretches
/// of the curve use a wider stride so roundoff in Ẅ stays near 1e-7.
pub const MIN_STENCIL_ARC: f64 = 1e-4;

/// k_g = Ẇ·(Ẅ×W)/‖Ẇ‖³ with fourth-order central differences.
///
/// The stride at sample i is the smallest s ≥ 1 with s·h·‖Ẇ‖ ≥
/// [`MIN_STENCIL_ARC`]. `None` where the stencil does not fit in the series
/// or ‖Ẇ‖ < [`SPIN_RATE_EPSILON`].
pub fn spherical_curvature(ws: &[Vector3<f64>], h: f64) -> Result<Vec<Option<f64>>> {
    if ws.len() < 5 {
        return Err(Error::Invalid(format!(
            "spherical curvature needs at least 5 samples, got {}",
            ws.len()
        )));
    }
    let n = ws.len();
    let stencil = |i: usize, s: usize| {
        let hs = h * s as f64;
        let (wm2, wm1, w, wp1, wp2) = (ws[i - 2 * s], ws[i - s], ws[i], ws[i + s], ws[i + 2 * s]);
        let d1 = (wm2 - wp2 + (wp1 - wm1) * 8.0) / (12.0 * hs);
        let d2 = (-wm2 - wp2 + (wm1 + wp1) * 16.0 - w * 30.0) / (12.0 * hs * hs);
        (d1, d2, w)
    };
    let mut out = vec![None; n];
    for i in 2..n - 2 {
        let speed = stencil(i, 1).0.norm();
        if speed < SPIN_RATE_EPSILON {
            continue;
        }
        let s = (MIN_STENCIL_ARC / (speed * h)).ceil().max(1.0);
        if s * 2.0 > i.min(n - 1 - i) as f64 {
            continue;
        }
        let (d1, d2, w) = stencil(i, s as usize);
        out[i] = Some(d1.dot(&d2.cross(&w)) / d1.norm().powi(3));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesGap {
    pub tau: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecessionSeries {
    pub taus: Vec<f64>,
    pub chi: Vec<f64>,
    pub basis_change: Vec<Matrix3<f64>>,
    pub lambda: Vec<Rotation3>,
    pub spin: Vec<Vector3<f64>>,
    pub curvature: Vec<Option<f64>>,
    pub drift: Vec<Drift>,
    /// Set when a degenerate triad ended the series before the trajectory did.
    pub gap: Option<SeriesGap>,
}

impl PrecessionSeries {
    pub fn max_so3_residual(&self) -> f64 {
        self.lambda
            .iter()
            .map(|l| l.orthogonality_residual().max(l.det_residual()))
            .fold(0.0, f64::max)
    }
}

/// Marck frames and triads along a trajectory, stopping at the first degenerate triad.
pub fn frames_along(
    trajectory: &Trajectory,
    chi0: f64,
) -> Result<(Vec<MarckFrame>, Vec<ReferenceTriad>, Option<SeriesGap>)> {
    if !trajectory.chi_defined {
        return Err(Error::MarckUndefined(
            "trajectory was integrated without a rotation angle".into(),
        ));
    }
    let kappa = trajectory.constants.carter;
    let params = &trajectory.params;
    let mut frames = Vec::with_capacity(trajectory.len());
    let mut triads = Vec::with_capacity(trajectory.len());
    for s in &trajectory.samples {
        let triad = match reference_triad_at(&s.state, kappa, params) {
            Ok(t) => t,
            Err(e @ Error::ReferenceDegenerate { .. }) => {
                return Ok((
                    frames,
                    triads,
                    Some(SeriesGap {
                        tau: s.state.tau,
                        reason: e.to_string(),
                    }),
                ))
            }
            Err(e) => return Err(e),
        };
        frames.push(marck_frame_at(&s.state, kappa, s.chi + chi0, params)?);
        triads.push(triad);
    }
    Ok((frames, triads, None))
}

pub fn precession_series(trajectory: &Trajectory, chi0: f64, w0: &Vector3<f64>) -> Result<PrecessionSeries> {
    let (frames, triads, gap) = frames_along(trajectory, chi0)?;
    if frames.is_empty() {
        return Err(Error::ReferenceDegenerate {
            which: "initial triad",
            value: 0.0,
        });
    }
    let params = &trajectory.params;
    let basis_change = frames
        .iter()
        .zip(&triads)
        .map(|(f, t)| basis_change_matrix(f, t, params))
        .collect::<Result<Vec<_>>>()?;
    let lambda = precession_rotation(&basis_change);
    let spin = evolve_spin(w0, &lambda)?;
    let curvature = if spin.len() >= 5 {
        spherical_curvature(&spin, trajectory.config.output_step)?
    } else {
        vec![None; spin.len()]
    };
    let n = frames.len();
    let mut drift = conservation_report(trajectory).per_sample;
    drift.truncate(n);
    Ok(PrecessionSeries {
        taus: frames.iter().map(|f| f.tau).collect(),
        chi: frames.iter().map(|f| f.chi).collect(),
        basis_change,
        lambda,
        spin,
        curvature,
        drift,
        gap,
    })
}

/// Coordinate components of the spin vector with constant parallel-propagated components.
pub fn spin_from_pp(frame: &MarckFrame, w_pp: &Vector3<f64>) -> Vector4<f64> {
    frame.legs[1] * w_pp[0] + frame.legs[2] * w_pp[1] + frame.legs[3] * w_pp[2]
}

/// Parallel-transports the spin vector with constant Marck components `w_pp`
/// through the geodesic equations and returns the largest symmetric-frame
/// component of its difference from the Marck-frame construction.
pub fn spin_transport_residual(
    state0: &GeodesicState,
    w_pp: &Vector3<f64>,
    config: &IntegratorConfig,
    params: &BlackHoleParams,
) -> Result<f64> {
    let kappa = state0.constants(params).carter;
    let frame0 = marck_frame_at(state0, kappa, 0.0, params)?;
    let (trajectory, transported) = integrate_with_transport(state0, &spin_from_pp(&frame0, w_pp), config, params)?;
    let frames = propagate_marck_frame(&trajectory, 0.0)?;
    let mut worst = 0.0f64;
    for ((s, f), v) in trajectory.samples.iter().zip(&frames).zip(&transported) {
        let w = symmetric_coframe(params, s.state.point.r, s.state.point.theta);
        let d = v - spin_from_pp(f, w_pp);
        worst = (0..4).map(|a| w[a].dot(&d).abs()).fold(worst, f64::max);
    }
    Ok(worst)
}
