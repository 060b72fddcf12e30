//! The observers' reference triad {X, Y, Z} spanning the rest space of U.

use nalgebra::Vector4;

use crate::error::{Error, Result};
use crate::geodesic::GeodesicState;
use crate::kerr::{carter_acceleration_frame, symmetric_coframe, symmetric_legs, BlackHoleParams, SpacetimePoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceTriad {
    pub x: Vector4<f64>,
    pub y: Vector4<f64>,
    pub z: Vector4<f64>,
    /// ρ = P² − ΔΘ.
    pub rho: f64,
    /// ϱ = P² − Δ(κ − a²cos²ϑ).
    pub varrho: f64,
    pub point: SpacetimePoint,
    pub tau: f64,
}

impl ReferenceTriad {
    pub fn vectors(&self) -> [Vector4<f64>; 3] {
        [self.x, self.y, self.z]
    }
}

struct Local {
    p: f64,
    d: f64,
    sqrt_r: f64,
    sqrt_th: f64,
    delta: f64,
    sigma: f64,
    rho: f64,
    varrho: f64,
}

fn local_quantities(state: &GeodesicState, kappa: f64, params: &BlackHoleParams) -> Result<Local> {
    state.check(params)?;
    let (r, theta) = (state.point.r, state.point.theta);
    let a = params.spin();
    let cs = theta.cos();
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let u = frame_components(params, r, theta, &state.velocity);
    let sd = (sigma * delta).sqrt();
    let ss = sigma.sqrt();
    let (p, sqrt_r, d, sqrt_th) = (u[0] * sd, u[1] * sd, u[2] * ss, u[3] * ss);
    let rho = p * p - delta * sqrt_th * sqrt_th;
    let varrho = p * p - delta * (kappa - a * a * cs * cs);
    if !(rho > 0.0) {
        return Err(Error::ReferenceDegenerate { which: "rho", value: rho });
    }
    if !(varrho > 0.0) {
        return Err(Error::ReferenceDegenerate { which: "varrho", value: varrho });
    }
    Ok(Local {
        p,
        d,
        sqrt_r,
        sqrt_th,
        delta,
        sigma,
        rho,
        varrho,
    })
}

fn frame_components(params: &BlackHoleParams, r: f64, theta: f64, v: &Vector4<f64>) -> Vector4<f64> {
    let w = symmetric_coframe(params, r, theta);
    Vector4::from_fn(|a, _| w[a].dot(v))
}

fn lift(params: &BlackHoleParams, r: f64, theta: f64, c: &Vector4<f64>) -> Vector4<f64> {
    let e = symmetric_legs(params, r, theta);
    e[0] * c[0] + e[1] * c[1] + e[2] * c[2] + e[3] * c[3]
}

/// Closed-form triad in symmetric-frame components.
fn closed_form_components(l: &Local) -> [Vector4<f64>; 3] {
    let sd = l.delta.sqrt();
    let x = Vector4::new(-sd * l.sqrt_th, 0.0, 0.0, -l.p) / l.rho.sqrt();
    let y = Vector4::new(sd * l.p * l.d, 0.0, l.rho, l.delta * l.d * l.sqrt_th) / (l.rho * l.varrho).sqrt();
    let z = Vector4::new(
        -l.p * l.sqrt_r,
        -l.varrho,
        -l.d * sd * l.sqrt_r,
        -sd * l.sqrt_th * l.sqrt_r,
    ) / (l.delta * l.sigma * l.varrho).sqrt();
    [x, y, z]
}

pub fn reference_triad_at(state: &GeodesicState, kappa: f64, params: &BlackHoleParams) -> Result<ReferenceTriad> {
    let l = local_quantities(state, kappa, params)?;
    let (r, theta) = (state.point.r, state.point.theta);
    let [x, y, z] = closed_form_components(&l).map(|c| lift(params, r, theta, &c));
    Ok(ReferenceTriad {
        x,
        y,
        z,
        rho: l.rho,
        varrho: l.varrho,
        point: state.point,
        tau: state.tau,
    })
}

/// Ω = ι_U vol in symmetric-frame components, `omega[b][c][d] = ε_{abcd} U^a`.
pub fn volume_form(u: &Vector4<f64>) -> [[[f64; 4]; 4]; 4] {
    let mut om = [[[0.0; 4]; 4]; 4];
    for (b, ob) in om.iter_mut().enumerate() {
        for (c, oc) in ob.iter_mut().enumerate() {
            for (d, od) in oc.iter_mut().enumerate() {
                *od = (0..4).map(|a| levi_civita([a, b, c, d]) * u[a]).sum();
            }
        }
    }
    om
}

/// ε_{abcd} with ε_{0123} = +1.
pub fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut v = idx;
    let mut sign = 1.0;
    for i in 0..4 {
        for j in 0..3 - i {
            if v[j] == v[j + 1] {
                return 0.0;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    sign
}

pub fn omega_eval(om: &[[[f64; 4]; 4]; 4], v1: &Vector4<f64>, v2: &Vector4<f64>, v3: &Vector4<f64>) -> f64 {
    let mut s = 0.0;
    for b in 0..4 {
        for c in 0..4 {
            for d in 0..4 {
                s += om[b][c][d] * v1[b] * v2[c] * v3[d];
            }
        }
    }
    s
}

/// Ω evaluated on three coordinate vectors at the state's position.
pub fn omega_on(state: &GeodesicState, params: &BlackHoleParams, v: [&Vector4<f64>; 3]) -> f64 {
    let (r, theta) = (state.point.r, state.point.theta);
    let om = volume_form(&frame_components(params, r, theta, &state.velocity));
    let f = |x: &Vector4<f64>| frame_components(params, r, theta, x);
    omega_eval(&om, &f(v[0]), &f(v[1]), &f(v[2]))
}

fn minkowski(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

pub fn triad_via_gram_schmidt(state: &GeodesicState, kappa: f64, params: &BlackHoleParams) -> Result<ReferenceTriad> {
    let l = local_quantities(state, kappa, params)?;
    let (r, theta) = (state.point.r, state.point.theta);
    let om = volume_form(&frame_components(params, r, theta, &state.velocity));
    let mut out: Vec<Vector4<f64>> = Vec::with_capacity(3);
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        // e_i ⌟ e_j ⌟ Ω, raised with η
        let mut w = Vector4::from_fn(|d, _| {
            let low = om[i][j][d];
            if d == 0 {
                low
            } else {
                -low
            }
        });
        for q in &out {
            w += q * minkowski(&w, q);
        }
        let n = -minkowski(&w, &w);
        if !(n > 0.0) {
            return Err(Error::ReferenceDegenerate { which: "gram-schmidt norm", value: n });
        }
        out.push(w / n.sqrt());
    }
    Ok(ReferenceTriad {
        x: lift(params, r, theta, &out[0]),
        y: lift(params, r, theta, &out[1]),
        z: lift(params, r, theta, &out[2]),
        rho: l.rho,
        varrho: l.varrho,
        point: state.point,
        tau: state.tau,
    })
}

/// U♭ in the symmetric coframe from the display
/// (ΔΣ)^{-1/2}(P ω⁰ − √R ω¹) − Σ^{-1/2}(D ω² + √Θ ω³).
pub fn lowered_velocity_display(state: &GeodesicState, kappa: f64, params: &BlackHoleParams) -> Result<Vector4<f64>> {
    let l = local_quantities(state, kappa, params)?;
    let sd = (l.delta * l.sigma).sqrt();
    let ss = l.sigma.sqrt();
    Ok(Vector4::new(l.p / sd, -l.sqrt_r / sd, -l.d / ss, -l.sqrt_th / ss))
}

/// U♭ in the symmetric coframe computed from g·U.
pub fn lowered_velocity(state: &GeodesicState, params: &BlackHoleParams) -> Vector4<f64> {
    let (r, theta) = (state.point.r, state.point.theta);
    let e = symmetric_legs(params, r, theta);
    let ub = state.covelocity(params);
    Vector4::from_fn(|a, _| e[a].dot(&ub))
}

/// Which of e₂, e₃ the Carter acceleration is orthogonal to (2 or 3), if exactly one.
pub fn carter_labeling(params: &BlackHoleParams, r: f64, theta: f64, tol: f64) -> Option<usize> {
    let acc = carter_acceleration_frame(params, r, theta);
    match (acc[2].abs() <= tol, acc[3].abs() <= tol) {
        (true, false) => Some(2),
        (false, true) => Some(3),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{initial_state_from_constants, ConservedSet};
    use crate::kerr::{carter_constant_unchecked, metric_components, Tetrad, TetradKind};
    use crate::marck::marck_frame_at;
    use crate::sampling::{random_params, random_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn states(seed: u64, n: usize) -> Vec<(BlackHoleParams, GeodesicState, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let p = random_params(&mut rng);
                let s = random_state(&mut rng, &p, 2.0);
                let k = carter_constant_unchecked(&p, s.point.r, s.point.theta, &s.velocity);
                (p, s, k)
            })
            .collect()
    }

    #[test]
    fn closed_form_matches_gram_schmidt() {
        for (p, s, k) in states(31, 100) {
            let a = reference_triad_at(&s, k, &p).unwrap();
            let b = triad_via_gram_schmidt(&s, k, &p).unwrap();
            for (x, y) in a.vectors().iter().zip(b.vectors().iter()) {
                let d = frame_components(&p, s.point.r, s.point.theta, &(x - y));
                assert!(d.abs().max() < 1e-10, "{d}");
            }
        }
    }

    #[test]
    fn triad_is_orthonormal_rest_space() {
        for (p, s, k) in states(32, 500) {
            let t = reference_triad_at(&s, k, &p).unwrap();
            let g = metric_components(&p, s.point.r, s.point.theta);
            let tet = Tetrad {
                legs: [s.velocity, t.x, t.y, t.z],
                kind: TetradKind::Reference,
            };
            assert!(tet.orthonormality_residual(&g) < 1e-10);
            assert!(t.rho > 0.0 && t.varrho > 0.0);
        }
    }

    #[test]
    fn equatorial_first_vector() {
        let p = BlackHoleParams::new(1.0, 0.6).unwrap();
        let s = initial_state_from_constants(&ConservedSet::new(1.0, 2.0, 1.96), 10.0, FRAC_PI_2, 0.0, 1.0, 1.0, &p)
            .unwrap();
        let t = reference_triad_at(&s, 1.96, &p).unwrap();
        let x = frame_components(&p, 10.0, FRAC_PI_2, &t.x);
        assert!((x - Vector4::new(0.0, 0.0, 0.0, -1.0)).abs().max() < 1e-14, "{x}");
    }

    #[test]
    fn inconsistent_constant_is_degenerate() {
        let (p, s, _) = states(33, 1).remove(0);
        match reference_triad_at(&s, 1e8, &p) {
            Err(Error::ReferenceDegenerate { which, .. }) => assert_eq!(which, "varrho"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lowered_velocity_matches_display() {
        for (p, s, k) in states(34, 200) {
            let a = lowered_velocity_display(&s, k, &p).unwrap();
            let b = lowered_velocity(&s, &p);
            assert!((a - b).abs().max() < 1e-12 * b.abs().max().max(1.0), "{a} {b}");
        }
    }

    #[test]
    fn volume_form_on_marck_legs() {
        for (p, s, k) in states(35, 100) {
            let f = marck_frame_at(&s, k, 0.3, &p).unwrap();
            let v = omega_on(&s, &p, [&f.legs[1], &f.legs[2], &f.legs[3]]);
            assert!((v + 1.0).abs() < 1e-10, "{v}");
            // with the opposite orientation of the radial leg the volume is +1
            let refl = |x: &Vector4<f64>| {
                let mut c = frame_components(&p, s.point.r, s.point.theta, x);
                c[1] = -c[1];
                c
            };
            let om = volume_form(&refl(&s.velocity));
            let w = omega_eval(&om, &refl(&f.legs[1]), &refl(&f.legs[2]), &refl(&f.legs[3]));
            assert!((w - 1.0).abs() < 1e-10);
            // the reference triad itself is negatively oriented in the same sense
            let t = reference_triad_at(&s, k, &p).unwrap();
            let v = omega_on(&s, &p, [&t.x, &t.y, &t.z]);
            assert!((v.abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn carter_acceleration_labels_second_leg() {
        let p = BlackHoleParams::new(1.0, 0.7).unwrap();
        for theta in [0.3, 1.0, 2.0, 2.9] {
            assert_eq!(carter_labeling(&p, 6.0, theta, 1e-14), Some(2));
        }
        assert_eq!(carter_labeling(&p, 6.0, FRAC_PI_2, 1e-14), None);
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita([0, 1, 2, 3]), 1.0);
        assert_eq!(levi_civita([1, 0, 2, 3]), -1.0);
        assert_eq!(levi_civita([3, 2, 1, 0]), 1.0);
        assert_eq!(levi_civita([0, 0, 2, 3]), 0.0);
    }
}
