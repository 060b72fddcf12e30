//! Kerr geometry in Boyer–Lindquist coordinates.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Half-width of the excluded zone around each pole.
pub const POLE_EPSILON: f64 = 1e-6;

/// Christoffel symbols, indexed `gamma[mu][(alpha, beta)]`.
pub type Christoffel = [Matrix4<f64>; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHoleParams {
    m: f64,
    a: f64,
}

impl BlackHoleParams {
    pub fn new(m: f64, a: f64) -> Result<Self> {
        if !(m.is_finite() && a.is_finite()) || m <= 0.0 || a < 0.0 || a >= m {
            return Err(Error::NonExtreme { m, a });
        }
        Ok(Self { m, a })
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn spin(&self) -> f64 {
        self.a
    }

    pub fn r_plus(&self) -> f64 {
        self.m + (self.m * self.m - self.a * self.a).sqrt()
    }

    pub fn r_minus(&self) -> f64 {
        // a²/r₊ avoids cancellation for small a
        self.a * self.a / self.r_plus()
    }

    pub fn delta(&self, r: f64) -> f64 {
        r * r - 2.0 * self.m * r + self.a * self.a
    }

    pub fn sigma(&self, r: f64, theta: f64) -> f64 {
        let c = theta.cos();
        r * r + self.a * self.a * c * c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        Self { t, r, theta, phi }
    }

    pub fn from_vector(x: &Vector4<f64>) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::new(self.t, self.r, self.theta, self.phi)
    }

    pub fn check(&self, params: &BlackHoleParams) -> Result<()> {
        check_domain(params, self.r, self.theta)
    }
}

pub(crate) fn check_domain(params: &BlackHoleParams, r: f64, theta: f64) -> Result<()> {
    let rp = params.r_plus();
    if !r.is_finite() || r <= rp {
        return Err(Error::OutsideDomain(format!("r = {r} <= r+ = {rp}")));
    }
    if !(POLE_EPSILON..=std::f64::consts::PI - POLE_EPSILON).contains(&theta) {
        return Err(Error::OutsideDomain(format!(
            "theta = {theta} within {POLE_EPSILON:e} of a pole"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub g: Matrix4<f64>,
    pub inv: Matrix4<f64>,
}

pub fn metric_at(point: &SpacetimePoint, params: &BlackHoleParams) -> Result<Metric> {
    point.check(params)?;
    Ok(Metric {
        g: metric_components(params, point.r, point.theta),
        inv: inverse_metric_components(params, point.r, point.theta),
    })
}

pub(crate) fn metric_components(params: &BlackHoleParams, r: f64, theta: f64) -> Matrix4<f64> {
    let (m, a) = (params.m, params.a);
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let s2 = theta.sin().powi(2);
    let mut g = Matrix4::zeros();
    g[(0, 0)] = 1.0 - 2.0 * m * r / sigma;
    g[(0, 3)] = 2.0 * m * r * a * s2 / sigma;
    g[(3, 0)] = g[(0, 3)];
    g[(3, 3)] = -s2 * (r * r + a * a) - 2.0 * m * r * a * a * s2 * s2 / sigma;
    g[(1, 1)] = -sigma / delta;
    g[(2, 2)] = -sigma;
    g
}

pub(crate) fn inverse_metric_components(
    params: &BlackHoleParams,
    r: f64,
    theta: f64,
) -> Matrix4<f64> {
    let (m, a) = (params.m, params.a);
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let s2 = theta.sin().powi(2);
    let rr = r * r + a * a;
    let mut gi = Matrix4::zeros();
    gi[(0, 0)] = (rr * rr - delta * a * a * s2) / (sigma * delta);
    gi[(0, 3)] = 2.0 * m * r * a / (sigma * delta);
    gi[(3, 0)] = gi[(0, 3)];
    gi[(3, 3)] = -(delta - a * a * s2) / (sigma * delta * s2);
    gi[(1, 1)] = -delta / sigma;
    gi[(2, 2)] = -1.0 / sigma;
    gi
}

/// Analytic partial derivatives of the metric, `[∂_t g, ∂_r g, ∂_ϑ g, ∂_φ g]`.
pub(crate) fn metric_derivatives(params: &BlackHoleParams, r: f64, theta: f64) -> [Matrix4<f64>; 4] {
    let (m, a) = (params.m, params.a);
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let (s, c) = theta.sin_cos();
    let s2 = s * s;
    let sig2 = sigma * sigma;
    let d_sigma_th = -2.0 * a * a * c * s;
    // d/dr (r/Σ)
    let q = (sigma - 2.0 * r * r) / sig2;

    let mut dr = Matrix4::zeros();
    dr[(0, 0)] = -2.0 * m * q;
    dr[(0, 3)] = 2.0 * m * a * s2 * q;
    dr[(3, 0)] = dr[(0, 3)];
    dr[(3, 3)] = -2.0 * r * s2 - 2.0 * m * a * a * s2 * s2 * q;
    dr[(1, 1)] = -(2.0 * r * delta - sigma * (2.0 * r - 2.0 * m)) / (delta * delta);
    dr[(2, 2)] = -2.0 * r;

    let mut dth = Matrix4::zeros();
    dth[(0, 0)] = 2.0 * m * r * d_sigma_th / sig2;
    dth[(0, 3)] = 4.0 * m * r * a * s * c * (r * r + a * a) / sig2;
    dth[(3, 0)] = dth[(0, 3)];
    dth[(3, 3)] = -2.0 * s * c * (r * r + a * a)
        - 2.0 * m * r * a * a * (4.0 * s2 * s * c * sigma - s2 * s2 * d_sigma_th) / sig2;
    dth[(1, 1)] = -d_sigma_th / delta;
    dth[(2, 2)] = -d_sigma_th;

    [Matrix4::zeros(), dr, dth, Matrix4::zeros()]
}

/// Christoffel symbols from metric derivatives `dg[λ] = ∂_λ g`.
pub(crate) fn christoffels_from(inv: &Matrix4<f64>, dg: &[Matrix4<f64>; 4]) -> Christoffel {
    let mut gamma = [Matrix4::zeros(); 4];
    for (mu, gm) in gamma.iter_mut().enumerate() {
        for al in 0..4 {
            for be in al..4 {
                let mut acc = 0.0;
                for nu in 0..4 {
                    let gi = inv[(mu, nu)];
                    if gi == 0.0 {
                        continue;
                    }
                    acc += gi * (dg[al][(nu, be)] + dg[be][(nu, al)] - dg[nu][(al, be)]);
                }
                gm[(al, be)] = 0.5 * acc;
                gm[(be, al)] = 0.5 * acc;
            }
        }
    }
    gamma
}

pub(crate) fn christoffel_components(params: &BlackHoleParams, r: f64, theta: f64) -> Christoffel {
    christoffels_from(
        &inverse_metric_components(params, r, theta),
        &metric_derivatives(params, r, theta),
    )
}

pub fn christoffels_at(point: &SpacetimePoint, params: &BlackHoleParams) -> Result<Christoffel> {
    point.check(params)?;
    Ok(christoffel_components(params, point.r, point.theta))
}

/// Contracts `Γ^μ_{αβ} u^α v^β`.
pub fn contract_christoffel(gamma: &Christoffel, u: &Vector4<f64>, v: &Vector4<f64>) -> Vector4<f64> {
    Vector4::from_fn(|mu, _| u.dot(&(gamma[mu] * v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TetradKind {
    Symmetric,
    Marck,
    Reference,
}

/// Four legs in coordinate components, `legs[0]` timelike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad {
    pub legs: [Vector4<f64>; 4],
    pub kind: TetradKind,
}

impl Tetrad {
    pub fn gram(&self, g: &Matrix4<f64>) -> Matrix4<f64> {
        Matrix4::from_fn(|a, b| self.legs[a].dot(&(g * self.legs[b])))
    }

    /// max |g(e_a, e_b) − η_ab|.
    pub fn orthonormality_residual(&self, g: &Matrix4<f64>) -> f64 {
        (self.gram(g) - crate::eta()).abs().max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricFrame {
    pub frame: Tetrad,
    /// Orthonormal coframe ω^a as covector components.
    pub coframe: [Vector4<f64>; 4],
    /// Null coframe ϑ¹..ϑ⁴ (ϑ³, ϑ⁴ complex conjugate).
    pub null_coframe: [Vector4<Complex64>; 4],
}

impl SymmetricFrame {
    /// Frame components ω^a(v) of a coordinate vector.
    pub fn components(&self, v: &Vector4<f64>) -> Vector4<f64> {
        Vector4::from_fn(|a, _| self.coframe[a].dot(v))
    }

    /// Coordinate vector from frame components.
    pub fn vector(&self, comps: &Vector4<f64>) -> Vector4<f64> {
        let e = &self.frame.legs;
        e[0] * comps[0] + e[1] * comps[1] + e[2] * comps[2] + e[3] * comps[3]
    }
}

pub(crate) fn symmetric_legs(params: &BlackHoleParams, r: f64, theta: f64) -> [Vector4<f64>; 4] {
    let a = params.a;
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let s = theta.sin();
    let sd = (sigma * delta).sqrt();
    let ss = sigma.sqrt();
    [
        Vector4::new((r * r + a * a) / sd, 0.0, 0.0, a / sd),
        Vector4::new(0.0, (delta / sigma).sqrt(), 0.0, 0.0),
        Vector4::new(-a * s / ss, 0.0, 0.0, -1.0 / (ss * s)),
        Vector4::new(0.0, 0.0, 1.0 / ss, 0.0),
    ]
}

pub(crate) fn symmetric_coframe(params: &BlackHoleParams, r: f64, theta: f64) -> [Vector4<f64>; 4] {
    let a = params.a;
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let s = theta.sin();
    let k = (delta / sigma).sqrt();
    let ss = sigma.sqrt();
    [
        Vector4::new(k, 0.0, 0.0, -k * a * s * s),
        Vector4::new(0.0, 1.0 / k, 0.0, 0.0),
        Vector4::new(s * a / ss, 0.0, 0.0, -s * (r * r + a * a) / ss),
        Vector4::new(0.0, 0.0, ss, 0.0),
    ]
}

fn null_coframe(params: &BlackHoleParams, r: f64, theta: f64) -> [Vector4<Complex64>; 4] {
    let a = params.a;
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let s = theta.sin();
    let n = (2.0 * sigma * delta).sqrt();
    let re = |v: Vector4<f64>| v.map(|x| Complex64::new(x, 0.0));
    let th1 = re(Vector4::new(delta, sigma, 0.0, -a * s * s * delta) / n);
    let th2 = re(Vector4::new(delta, -sigma, 0.0, -a * s * s * delta) / n);
    // ϑ³ = ((r²+a²) s dφ − a s dt − i Σ dϑ)/√(2Σ); ϑ⁴ its conjugate.
    let k = 1.0 / (2.0 * sigma).sqrt();
    let th3 = Vector4::new(
        Complex64::new(-a * s * k, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -sigma * k),
        Complex64::new((r * r + a * a) * s * k, 0.0),
    );
    let th4 = th3.map(|z| z.conj());
    [th1, th2, th3, th4]
}

pub fn symmetric_frame_at(point: &SpacetimePoint, params: &BlackHoleParams) -> Result<SymmetricFrame> {
    point.check(params)?;
    Ok(symmetric_frame_unchecked(params, point.r, point.theta))
}

pub(crate) fn symmetric_frame_unchecked(params: &BlackHoleParams, r: f64, theta: f64) -> SymmetricFrame {
    SymmetricFrame {
        frame: Tetrad {
            legs: symmetric_legs(params, r, theta),
            kind: TetradKind::Symmetric,
        },
        coframe: symmetric_coframe(params, r, theta),
        null_coframe: null_coframe(params, r, theta),
    }
}

/// The orthonormal coframe rebuilt from the null coframe:
/// ω⁰ = (ϑ¹+ϑ²)/√2, ω¹ = (ϑ¹−ϑ²)/√2, ω² = −(ϑ³+ϑ⁴)/√2, ω³ = i(ϑ³−ϑ⁴)/√2.
pub fn coframe_from_null(null: &[Vector4<Complex64>; 4]) -> [Vector4<f64>; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::i();
    let w0 = (null[0] + null[1]) * Complex64::new(h, 0.0);
    let w1 = (null[0] - null[1]) * Complex64::new(h, 0.0);
    let w2 = -(null[2] + null[3]) * Complex64::new(h, 0.0);
    let w3 = (null[2] - null[3]) * (i * h);
    [w0, w1, w2, w3].map(|v| v.map(|z| z.re))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarterObserver {
    pub velocity: Vector4<f64>,
    pub acceleration: Vector4<f64>,
    pub l: Vector4<f64>,
    pub n: Vector4<f64>,
}

pub fn carter_observer_at(point: &SpacetimePoint, params: &BlackHoleParams) -> Result<CarterObserver> {
    point.check(params)?;
    let (r, theta) = (point.r, point.theta);
    let a = params.a;
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let o = symmetric_legs(params, r, theta)[0];
    let gamma = christoffel_components(params, r, theta);
    let nn = (2.0 * sigma * delta).sqrt();
    Ok(CarterObserver {
        velocity: o,
        acceleration: contract_christoffel(&gamma, &o, &o),
        l: Vector4::new(r * r + a * a, delta, 0.0, a) / nn,
        n: Vector4::new(r * r + a * a, -delta, 0.0, a) / nn,
    })
}

/// Carter-observer acceleration in symmetric-frame components (closed form).
pub fn carter_acceleration_frame(params: &BlackHoleParams, r: f64, theta: f64) -> Vector4<f64> {
    let (m, a) = (params.m, params.a);
    let sigma = params.sigma(r, theta);
    let delta = params.delta(r);
    let (s, c) = theta.sin_cos();
    let s32 = sigma.powf(1.5);
    Vector4::new(
        0.0,
        ((r * r - a * a * c * c) * m - r * a * a * s * s) / (s32 * delta.sqrt()),
        0.0,
        -a * a * c * s / s32,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingStructures {
    /// Killing–Yano 2-form, covariant components.
    pub f: Matrix4<f64>,
    /// Killing tensor, covariant components.
    pub k: Matrix4<f64>,
}

pub(crate) fn killing_yano_components(params: &BlackHoleParams, r: f64, theta: f64) -> Matrix4<f64> {
    let w = symmetric_coframe(params, r, theta);
    let c = theta.cos();
    // f = −a cosϑ ω⁰∧ω¹ + r ω²∧ω³
    let wedge = |x: &Vector4<f64>, y: &Vector4<f64>| x * y.transpose() - y * x.transpose();
    wedge(&w[0], &w[1]) * (-params.a * c) + wedge(&w[2], &w[3]) * r
}

pub(crate) fn killing_tensor_components(params: &BlackHoleParams, r: f64, theta: f64) -> Matrix4<f64> {
    let f = killing_yano_components(params, r, theta);
    let gi = inverse_metric_components(params, r, theta);
    f * gi * f
}

pub fn killing_structures_at(point: &SpacetimePoint, params: &BlackHoleParams) -> Result<KillingStructures> {
    point.check(params)?;
    Ok(KillingStructures {
        f: killing_yano_components(params, point.r, point.theta),
        k: killing_tensor_components(params, point.r, point.theta),
    })
}

/// Tolerance on |g(U,U) − 1| accepted by [`carter_constant`].
pub const UNIT_NORM_TOLERANCE: f64 = 1e-8;

pub fn carter_constant(u: &Vector4<f64>, point: &SpacetimePoint, params: &BlackHoleParams) -> Result<f64> {
    point.check(params)?;
    let g = metric_components(params, point.r, point.theta);
    let dev = (u.dot(&(g * u)) - 1.0).abs();
    if !(dev <= UNIT_NORM_TOLERANCE) {
        return Err(Error::NonUnitVelocity { deviation: dev });
    }
    Ok(carter_constant_unchecked(params, point.r, point.theta, u))
}

pub(crate) fn carter_constant_unchecked(params: &BlackHoleParams, r: f64, theta: f64, u: &Vector4<f64>) -> f64 {
    u.dot(&(killing_tensor_components(params, r, theta) * u))
}

/// Sixth-order central differences in r and ϑ of a matrix field.
pub(crate) fn fd_partials<F>(f: F, r: f64, theta: f64, h: f64) -> [Matrix4<f64>; 4]
where
    F: Fn(f64, f64) -> Matrix4<f64>,
{
    const W: [f64; 3] = [45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0];
    let mut dr = Matrix4::zeros();
    let mut dth = Matrix4::zeros();
    for (k, w) in W.iter().enumerate() {
        let s = (k + 1) as f64 * h;
        dr += (f(r + s, theta) - f(r - s, theta)) * *w;
        dth += (f(r, theta + s) - f(r, theta - s)) * *w;
    }
    [Matrix4::zeros(), dr / h, dth / h, Matrix4::zeros()]
}

/// Covariant derivative ∇_λ T_μν of a (0,2) field from its coordinate partials.
fn covariant_derivative(t: &Matrix4<f64>, dt: &[Matrix4<f64>; 4], gamma: &Christoffel) -> [Matrix4<f64>; 4] {
    let mut out = *dt;
    for (lam, o) in out.iter_mut().enumerate() {
        for mu in 0..4 {
            for nu in 0..4 {
                let mut acc = 0.0;
                for s in 0..4 {
                    acc += gamma[s][(lam, mu)] * t[(s, nu)] + gamma[s][(lam, nu)] * t[(mu, s)];
                }
                o[(mu, nu)] -= acc;
            }
        }
    }
    out
}

/// Step used by the finite-difference residual oracles.
pub const FD_STEP: f64 = 1e-3;

/// Frame components T_{cab} = e_c^λ e_a^μ e_b^ν T_λμν of a rank-3 covariant array.
fn to_frame(t: &[Matrix4<f64>; 4], e: &[Vector4<f64>; 4]) -> [[[f64; 4]; 4]; 4] {
    let mut out = [[[0.0; 4]; 4]; 4];
    for (c, oc) in out.iter_mut().enumerate() {
        let tc: Matrix4<f64> = (0..4).map(|l| t[l] * e[c][l]).sum();
        for (a, oa) in oc.iter_mut().enumerate() {
            for (b, ob) in oa.iter_mut().enumerate() {
                *ob = e[a].dot(&(tc * e[b]));
            }
        }
    }
    out
}

fn frame_covariant_derivative<F>(field: F, params: &BlackHoleParams, r: f64, theta: f64) -> [[[f64; 4]; 4]; 4]
where
    F: Fn(f64, f64) -> Matrix4<f64>,
{
    let t = field(r, theta);
    let dt = fd_partials(&field, r, theta, FD_STEP);
    let gamma = christoffel_components(params, r, theta);
    to_frame(&covariant_derivative(&t, &dt, &gamma), &symmetric_legs(params, r, theta))
}

/// max |∇_c g_ab| in orthonormal-frame components, with finite-difference metric partials.
pub fn metric_compatibility_residual(params: &BlackHoleParams, r: f64, theta: f64) -> f64 {
    let n = frame_covariant_derivative(|r, th| metric_components(params, r, th), params, r, theta);
    n.iter().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

/// max |∇_c f_ab + ∇_a f_cb| in orthonormal-frame components.
pub fn killing_yano_residual(params: &BlackHoleParams, r: f64, theta: f64) -> f64 {
    let n = frame_covariant_derivative(|r, th| killing_yano_components(params, r, th), params, r, theta);
    let mut worst: f64 = 0.0;
    for l in 0..4 {
        for m in 0..4 {
            for k in 0..4 {
                worst = worst.max((n[l][m][k] + n[m][l][k]).abs());
            }
        }
    }
    worst
}

/// max |∇_(c K_ab)| in orthonormal-frame components.
pub fn killing_tensor_residual(params: &BlackHoleParams, r: f64, theta: f64) -> f64 {
    let n = frame_covariant_derivative(|r, th| killing_tensor_components(params, r, th), params, r, theta);
    let mut worst: f64 = 0.0;
    for l in 0..4 {
        for m in 0..4 {
            for k in 0..4 {
                worst = worst.max((n[l][m][k] + n[m][k][l] + n[k][l][m]).abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_params, random_point};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn kerr(a: f64) -> BlackHoleParams {
        BlackHoleParams::new(1.0, a).unwrap()
    }

    #[test]
    fn schwarzschild_components() {
        let p = kerr(0.0);
        let m = metric_at(&SpacetimePoint::new(0.0, 4.0, FRAC_PI_2, 0.0), &p).unwrap();
        assert_relative_eq!(m.g[(0, 0)], 0.5, epsilon = 1e-15);
        assert_relative_eq!(m.g[(1, 1)], -2.0, epsilon = 1e-15);
        assert_eq!(p.sigma(3.0, FRAC_PI_2), 9.0);
        assert_eq!(p.delta(2.0), 0.0);
    }

    #[test]
    fn rejects_extreme_and_interior() {
        assert!(matches!(BlackHoleParams::new(1.0, 1.0), Err(Error::NonExtreme { .. })));
        assert!(matches!(BlackHoleParams::new(1.0, -0.1), Err(Error::NonExtreme { .. })));
        assert!(BlackHoleParams::new(0.0, 0.0).is_err());
        let p = kerr(0.6);
        let inside = SpacetimePoint::new(0.0, p.r_plus(), 1.0, 0.0);
        assert!(matches!(metric_at(&inside, &p), Err(Error::OutsideDomain(_))));
        for th in [0.0, std::f64::consts::PI, 5e-7] {
            let pole = SpacetimePoint::new(0.0, 5.0, th, 0.0);
            assert!(matches!(christoffels_at(&pole, &p), Err(Error::OutsideDomain(_))));
        }
    }

    #[test]
    fn horizons_are_roots_of_delta() {
        for a in [0.0, 0.3, 0.8, 0.999] {
            let p = kerr(a);
            assert!(p.r_plus() > p.r_minus());
            assert!(p.delta(p.r_plus()).abs() < 1e-15);
            assert!(p.delta(p.r_minus()).abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_metric_and_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let p = random_params(&mut rng);
            let x = random_point(&mut rng, &p);
            let m = metric_at(&x, &p).unwrap();
            assert!((m.g * m.inv - Matrix4::identity()).abs().max() < 1e-12);
            assert_eq!(m.g, m.g.transpose());
            let mut ev: Vec<f64> = m.g.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            assert!(ev[0] < 0.0 && ev[1] < 0.0 && ev[2] < 0.0 && ev[3] > 0.0);
        }
    }

    #[test]
    fn schwarzschild_christoffel_rtt() {
        let p = kerr(0.0);
        for r in [3.0, 6.0, 17.0] {
            let g = christoffels_at(&SpacetimePoint::new(0.0, r, FRAC_PI_2, 0.0), &p).unwrap();
            assert_relative_eq!(g[1][(0, 0)], (r - 2.0) / r.powi(3), max_relative = 1e-14);
        }
    }

    #[test]
    fn christoffels_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = 1e-6;
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let x = random_point(&mut rng, &p);
            let analytic = christoffel_components(&p, x.r, x.theta);
            let f = |r, th| metric_components(&p, r, th);
            let dg = [
                Matrix4::zeros(),
                (f(x.r + h, x.theta) - f(x.r - h, x.theta)) / (2.0 * h),
                (f(x.r, x.theta + h) - f(x.r, x.theta - h)) / (2.0 * h),
                Matrix4::zeros(),
            ];
            let fd = christoffels_from(&inverse_metric_components(&p, x.r, x.theta), &dg);
            for mu in 0..4 {
                assert_eq!(analytic[mu], analytic[mu].transpose());
                for (an, fd) in analytic[mu].iter().zip(fd[mu].iter()) {
                    let err = (an - fd).abs();
                    assert!(err < 1e-8 * an.abs().max(1.0), "mu={mu} err={err:e} at {x:?}");
                }
            }
        }
    }

    #[test]
    fn metric_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = random_params(&mut rng);
            let x = random_point(&mut rng, &p);
            let res = metric_compatibility_residual(&p, x.r, x.theta);
            assert!(res < 1e-10, "residual {res:e} at {x:?}");
        }
    }

    #[test]
    fn symmetric_frame_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let p = random_params(&mut rng);
            let x = random_point(&mut rng, &p);
            let sf = symmetric_frame_at(&x, &p).unwrap();
            let g = metric_components(&p, x.r, x.theta);
            assert!(sf.frame.orthonormality_residual(&g) < 1e-12);
            for a in 0..4 {
                for b in 0..4 {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((sf.coframe[a].dot(&sf.frame.legs[b]) - want).abs() < 1e-12);
                }
            }
            let rebuilt = coframe_from_null(&sf.null_coframe);
            for a in 0..4 {
                assert!((rebuilt[a] - sf.coframe[a]).abs().max() < 1e-12 * (1.0 + sf.coframe[a].abs().max()));
            }
            let obs = carter_observer_at(&x, &p).unwrap();
            assert!((obs.velocity - sf.frame.legs[0]).abs().max() < 1e-15);
            let e1 = (obs.l - obs.n) * std::f64::consts::FRAC_1_SQRT_2;
            assert!((e1 - sf.frame.legs[1]).abs().max() < 1e-12);
            assert!(sf.frame.legs[0][0] > 0.0);
        }
    }

    #[test]
    fn carter_observer_kinematics() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let p = random_params(&mut rng);
            let x = random_point(&mut rng, &p);
            let g = metric_components(&p, x.r, x.theta);
            let o = carter_observer_at(&x, &p).unwrap();
            let ip = |u: &Vector4<f64>, v: &Vector4<f64>| u.dot(&(g * v));
            assert!((ip(&o.velocity, &o.velocity) - 1.0).abs() < 1e-12);
            assert!(ip(&o.velocity, &o.acceleration).abs() < 1e-12);
            assert!(ip(&o.l, &o.l).abs() < 1e-12 && ip(&o.n, &o.n).abs() < 1e-12);
            let a = p.spin();
            assert_relative_eq!(o.velocity[3] / o.velocity[0], a / (x.r * x.r + a * a), max_relative = 1e-14);
            let w = symmetric_coframe(&p, x.r, x.theta);
            let frame = Vector4::from_fn(|i, _| w[i].dot(&o.acceleration));
            let closed = carter_acceleration_frame(&p, x.r, x.theta);
            assert!((frame - closed).abs().max() < 1e-12 * (1.0 + closed.abs().max()));
        }
        let p = kerr(0.7);
        assert!(carter_acceleration_frame(&p, 5.0, FRAC_PI_2)[3].abs() < 1e-17);
    }

    #[test]
    fn killing_tensor_is_square_of_killing_yano() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let x = random_point(&mut rng, &p);
            let ks = killing_structures_at(&x, &p).unwrap();
            assert_eq!(ks.f, -ks.f.transpose());
            assert!((ks.k - ks.k.transpose()).abs().max() <= 1e-12 * ks.k.abs().max());
            // frame-diagonal form diag(a²cos²ϑ, −a²cos²ϑ, r², r²)
            let w = symmetric_coframe(&p, x.r, x.theta);
            let ac2 = (p.spin() * x.theta.cos()).powi(2);
            let diag = [ac2, -ac2, x.r * x.r, x.r * x.r];
            let k: Matrix4<f64> = (0..4).map(|a| w[a] * w[a].transpose() * diag[a]).sum();
            assert!((k - ks.k).abs().max() < 1e-12 * (1.0 + k.abs().max()));
        }
    }

    #[test]
    fn killing_residuals_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let x = random_point(&mut rng, &p);
            let ky = killing_yano_residual(&p, x.r, x.theta);
            let kt = killing_tensor_residual(&p, x.r, x.theta);
            assert!(ky < 1e-8, "Killing-Yano residual {ky:e} at {x:?}");
            assert!(kt < 1e-8, "Killing tensor residual {kt:e} at {x:?}");
        }
    }

    #[test]
    fn equatorial_carter_constant() {
        let p = kerr(0.6);
        let c = crate::ConservedSet::new(1.0, 2.0, 1.96);
        let s = crate::initial_state_from_constants(&c, 10.0, FRAC_PI_2, 0.0, 1.0, 1.0, &p).unwrap();
        let kappa = carter_constant(&s.velocity, &s.point, &p).unwrap();
        assert_relative_eq!(kappa, (0.6f64 - 2.0).powi(2), max_relative = 1e-13);
        assert_relative_eq!(kappa, 1.96, max_relative = 1e-13);
        let bad = s.velocity * 1.001;
        assert!(matches!(carter_constant(&bad, &s.point, &p), Err(Error::NonUnitVelocity { .. })));
    }
}
