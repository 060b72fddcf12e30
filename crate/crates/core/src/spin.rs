//! Constant spinor algebra, the semiclassical scalar amplitude β and the
//! spin vector in the parallel-propagated frame.

use nalgebra::{Matrix4, Vector4};
use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::geodesic::{potentials_unchecked, GeodesicState, Trajectory};
use crate::marck::{d1_stencil, marck_frame_at};

/// Gaussian-integer 4×4 matrices for exact algebra checks.
pub type ExactMatrix = Matrix4<Complex<i64>>;

/// η^{ab}.
pub const ETA: [i64; 4] = [1, -1, -1, -1];

fn pauli_exact() -> [[[Complex<i64>; 2]; 2]; 3] {
    let z = Complex::new(0, 0);
    let one = Complex::new(1, 0);
    let i = Complex::new(0, 1);
    [
        [[z, one], [one, z]],
        [[z, -i], [i, z]],
        [[one, z], [z, -one]],
    ]
}

/// Dirac representation: γ⁰ = diag(1, 1, −1, −1), γⁱ = ((0, σⁱ), (−σⁱ, 0)).
pub fn exact_gammas() -> [ExactMatrix; 4] {
    let one = Complex::new(1, 0);
    let mut g0 = ExactMatrix::zeros();
    for k in 0..4 {
        g0[(k, k)] = if k < 2 { one } else { -one };
    }
    let mut out = [g0, ExactMatrix::zeros(), ExactMatrix::zeros(), ExactMatrix::zeros()];
    for (n, s) in pauli_exact().iter().enumerate() {
        let g = &mut out[n + 1];
        for r in 0..2 {
            for c in 0..2 {
                g[(r, c + 2)] = s[r][c];
                g[(r + 2, c)] = -s[r][c];
            }
        }
    }
    out
}

/// σ^{ab} = (i/2)[γ^a, γ^b], exact.
pub fn exact_sigma(a: usize, b: usize) -> ExactMatrix {
    let g = exact_gammas();
    let comm = g[a] * g[b] - g[b] * g[a];
    comm.map(|z| {
        debug_assert!(z.re % 2 == 0 && z.im % 2 == 0);
        Complex::new(0, 1) * Complex::new(z.re / 2, z.im / 2)
    })
}

/// Index pairs (a, b) where γ^aγ^b + γ^bγ^a ≠ 2η^{ab}·1.
pub fn clifford_violations() -> Vec<(usize, usize)> {
    let g = exact_gammas();
    let mut bad = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            let lhs = g[a] * g[b] + g[b] * g[a];
            let eta = if a == b { 2 * ETA[a] } else { 0 };
            let rhs = ExactMatrix::identity() * Complex::new(eta, 0);
            if lhs != rhs {
                bad.push((a, b));
            }
        }
    }
    bad
}

fn eta(a: usize, b: usize) -> i64 {
    if a == b {
        ETA[a]
    } else {
        0
    }
}

/// Index quadruples where
/// [σ^{ab}, σ^{cd}] ≠ factor·i(η^{ad}σ^{bc} − η^{ac}σ^{bd} + η^{bc}σ^{ad} − η^{bd}σ^{ac}).
///
/// For σ itself the identity holds with `factor = 2`; `factor = 1` is the
/// same identity written for the generators σ/2.
pub fn lorentz_algebra_violations(factor: i64) -> Vec<[usize; 4]> {
    let s: Vec<Vec<ExactMatrix>> = (0..4).map(|a| (0..4).map(|b| exact_sigma(a, b)).collect()).collect();
    let i = Complex::new(0, factor);
    let mut bad = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let lhs = s[a][b] * s[c][d] - s[c][d] * s[a][b];
                    let comb = s[b][c] * Complex::new(eta(a, d), 0) - s[b][d] * Complex::new(eta(a, c), 0)
                        + s[a][d] * Complex::new(eta(b, c), 0)
                        - s[a][c] * Complex::new(eta(b, d), 0);
                    if lhs != comb * i {
                        bad.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    bad
}

/// [σ/2, σ/2] = i η (σ/2) checked exactly by scaling both sides by 4:
/// [σ^{ab}, σ^{cd}] = 2i(…) over the Gaussian integers.
pub fn generator_algebra_violations() -> Vec<[usize; 4]> {
    lorentz_algebra_violations(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaAlgebra {
    pub gamma: [Matrix4<Complex64>; 4],
}

impl GammaAlgebra {
    pub fn sigma(&self, a: usize, b: usize) -> Matrix4<Complex64> {
        let g = &self.gamma;
        (g[a] * g[b] - g[b] * g[a]) * Complex64::new(0.0, 0.5)
    }

    /// γ^a k_a for lower-index frame components k_a.
    pub fn slash(&self, k_lower: &Vector4<f64>) -> Matrix4<Complex64> {
        (0..4).fold(Matrix4::zeros(), |acc, a| acc + self.gamma[a] * Complex64::new(k_lower[a], 0.0))
    }

    /// Dirac adjoint product ψ̄φ = ψ†γ⁰φ.
    pub fn adjoint_product(&self, psi: &Vector4<Complex64>, phi: &Vector4<Complex64>) -> Complex64 {
        (psi.adjoint() * self.gamma[0] * phi)[(0, 0)]
    }
}

pub fn clifford_basis() -> GammaAlgebra {
    GammaAlgebra {
        gamma: exact_gammas().map(|m| m.map(|z| Complex64::new(z.re as f64, z.im as f64))),
    }
}

/// Lowers a frame vector with η.
pub fn lower(p: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(p[0], -p[1], -p[2], -p[3])
}

/// (b₀₁, b₀₂, b₁₁, b₁₂) for frame momentum p^a with η p·p = m².
pub fn basis_spinors(p: &Vector4<f64>, m: f64) -> Result<[Vector4<Complex64>; 4]> {
    let pp = p.dot(&lower(p));
    if !(m > 0.0) {
        return Err(Error::Invalid(format!("mass must be positive, got {m}")));
    }
    if !(pp > 0.0) {
        return Err(Error::Invalid(format!("momentum is not timelike: p.p = {pp:e}")));
    }
    if !(p[0] > 0.0) {
        return Err(Error::Invalid(format!("momentum is past pointing: p0 = {}", p[0])));
    }
    if (pp - m * m).abs() > 1e-9 * m * m {
        return Err(Error::Invalid(format!("momentum off shell: p.p = {pp}, m^2 = {}", m * m)));
    }
    let e = p[0];
    let n = ((e + m) / (2.0 * m)).sqrt();
    let q = |re: f64, im: f64| Complex64::new(re / (e + m), im / (e + m));
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let p3 = q(p[3], 0.0);
    let pp_ = q(p[1], p[2]);
    let pm = q(p[1], -p[2]);
    let s = Complex64::new(n, 0.0);
    Ok([
        Vector4::new(one, zero, p3, pp_) * s,
        Vector4::new(zero, one, pm, -p3) * s,
        Vector4::new(p3, pp_, one, zero) * s,
        Vector4::new(pm, -p3, zero, one) * s,
    ])
}

/// b₀ = (β₁b₀₁ + β₂b₀₂)/f with f = √(|β₁|² + |β₂|²).
pub fn normalized_b0(b01: &Vector4<Complex64>, b02: &Vector4<Complex64>, beta1: Complex64, beta2: Complex64) -> Result<Vector4<Complex64>> {
    let f = (beta1.norm_sqr() + beta2.norm_sqr()).sqrt();
    if !(f > 0.0) {
        return Err(Error::Invalid("both amplitudes vanish".into()));
    }
    Ok((b01 * beta1 + b02 * beta2) / Complex64::new(f, 0.0))
}

/// Threshold on R and Θ below which β is treated as singular.
pub const TURNING_POINT_EPSILON: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarAmplitude {
    pub beta: Complex64,
    pub c: Complex64,
    pub r: f64,
    pub theta: f64,
    /// d/dτ ln(RΘ sinϑ).
    pub expansion: f64,
    /// β,_(a) from the closed forms.
    pub closed: [Complex64; 4],
    /// β,_(a) from coordinate partials of β contracted with L_(a).
    pub direct: [Complex64; 4],
}

impl ScalarAmplitude {
    /// max_a |closed − direct| / max_a |direct|.
    pub fn relative_deviation(&self) -> f64 {
        let scale = self.direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let diff = (0..4).map(|a| (self.closed[a] - self.direct[a]).norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }
}

struct RadialPolar {
    radial: f64,
    d_radial: f64,
    polar: f64,
    d_polar: f64,
    p: f64,
    d: f64,
}

fn radial_polar(state: &GeodesicState, kappa: f64, params: &crate::BlackHoleParams) -> RadialPolar {
    let (r, theta) = (state.point.r, state.point.theta);
    let a = params.spin();
    let m = params.mass();
    let mut c = state.constants(params);
    c.carter = kappa;
    let pot = potentials_unchecked(params, &c, r, theta);
    let (s, cs) = theta.sin_cos();
    let delta = params.delta(r);
    let d_radial = 4.0 * c.energy * r * pot.p - (2.0 * r - 2.0 * m) * (kappa + r * r) - 2.0 * r * delta;
    let d_d = a * c.energy * cs + c.angular_momentum * cs / (s * s);
    let d_polar = 2.0 * a * a * cs * s - 2.0 * pot.d * d_d;
    RadialPolar {
        radial: pot.radial,
        d_radial,
        polar: pot.polar,
        d_polar,
        p: pot.p,
        d: pot.d,
    }
}

fn check_off_turning(rp: &RadialPolar) -> Result<()> {
    if !(rp.radial >= TURNING_POINT_EPSILON) {
        return Err(Error::SemiclassicalBreakdown { which: "R", value: rp.radial });
    }
    if !(rp.polar >= TURNING_POINT_EPSILON) {
        return Err(Error::SemiclassicalBreakdown { which: "Theta", value: rp.polar });
    }
    Ok(())
}

/// β = c/√(RΘ sinϑ), its expansion rate and its four frame derivatives along
/// the Marck frame with rotation angle `chi`.
pub fn scalar_amplitude(
    state: &GeodesicState,
    kappa: f64,
    chi: f64,
    c: Complex64,
    params: &crate::BlackHoleParams,
) -> Result<ScalarAmplitude> {
    state.check(params)?;
    let rp = radial_polar(state, kappa, params);
    check_off_turning(&rp)?;
    let frame = marck_frame_at(state, kappa, chi, params)?;
    let (r, theta) = (state.point.r, state.point.theta);
    let (s, cs) = theta.sin_cos();
    let cot = cs / s;
    let beta = c / (rp.radial * rp.polar * s).sqrt();
    let ang = rp.d_polar / rp.polar + cot;
    let rad = rp.d_radial / rp.radial;
    let expansion = rad * state.velocity[1] + ang * state.velocity[2];

    // dβ = −(β/2)(R′/R dr + (Θ′/Θ + cotϑ) dϑ)
    let dr = -0.5 * rad;
    let dth = -0.5 * ang;
    let direct: [Complex64; 4] = frame.legs.map(|l| beta * (dr * l[1] + dth * l[2]));

    let a = params.spin();
    let ac = a * cs;
    let sigma = params.sigma(r, theta);
    let sk = kappa.sqrt();
    let vp = crate::marck::frame_varpi(params, kappa, r, theta);
    let (sqrt_r, sqrt_th) = state.signed_roots(params);
    let l3 = -(ac * rp.p * rad - r * rp.d * ang) / (2.0 * sk * sigma);
    let l1t = -(vp * r * rp.p * rad + ac * rp.d * ang / vp) / (2.0 * sk * sigma);
    let l2t = -(vp * rp.d_radial / sqrt_r + sqrt_th * ang / vp) / (2.0 * sigma);
    let (sn, cc) = chi.sin_cos();
    let closed = [
        beta * (-0.5 * expansion),
        beta * (cc * l1t - sn * l2t),
        beta * (sn * l1t + cc * l2t),
        beta * l3,
    ];
    Ok(ScalarAmplitude {
        beta,
        c,
        r,
        theta,
        expansion,
        closed,
        direct,
    })
}

/// |R^(0)| of the spin-transport proof for amplitudes β_k = c_k/√(RΘ sinϑ), with m = 1.
pub fn verify_gordon_r_term(
    state: &GeodesicState,
    kappa: f64,
    chi: f64,
    c1: Complex64,
    c2: Complex64,
    params: &crate::BlackHoleParams,
) -> Result<f64> {
    let b1 = scalar_amplitude(state, kappa, chi, c1, params)?;
    let b2 = scalar_amplitude(state, kappa, chi, c2, params)?;
    let (x1, x2) = (b1.beta, b2.beta);
    let f2 = x1.norm_sqr() + x2.norm_sqr();
    if !(f2 > 0.0) {
        return Err(Error::Invalid("both amplitudes vanish".into()));
    }
    let pair = |i: usize| {
        let (d1, d2) = (b1.closed[i], b2.closed[i]);
        d1 * x1.conj() - d1.conj() * x1 + d2 * x2.conj() - d2.conj() * x2
    };
    let i = Complex64::i();
    let bracket = (x1.conj() * x2 + x2.conj() * x1) * pair(1)
        + i * (x1.conj() * x2 - x2.conj() * x1) * pair(2)
        + (x2.conj() * x2 - x1.conj() * x1) * pair(3);
    let m = 1.0;
    Ok((bracket / (2.0 * m * i * f2 * f2)).norm())
}

/// ζ(i) = β_{k,(i)}/β_k for the two amplitudes, i = 1, 2, 3.
pub fn zeta_ratios(
    state: &GeodesicState,
    kappa: f64,
    chi: f64,
    c1: Complex64,
    c2: Complex64,
    params: &crate::BlackHoleParams,
) -> Result<[(Complex64, Complex64); 3]> {
    let b1 = scalar_amplitude(state, kappa, chi, c1, params)?;
    let b2 = scalar_amplitude(state, kappa, chi, c2, params)?;
    Ok([1, 2, 3].map(|i| (b1.closed[i] / b1.beta, b2.closed[i] / b2.beta)))
}

/// max |dβ/dτ + (θ/2)β| / |β| over interior samples where R, Θ exceed `margin`.
///
/// dβ/dτ is a fourth-order central difference on the trajectory grid.
pub fn amplitude_transport_residual(trajectory: &Trajectory, c: Complex64, margin: f64) -> f64 {
    let params = &trajectory.params;
    let kappa = trajectory.constants.carter;
    let n = trajectory.len();
    let h = trajectory.config.output_step;
    let value = |st: &GeodesicState| -> Option<(Complex64, f64)> {
        let rp = radial_polar(st, kappa, params);
        if rp.radial < margin || rp.polar < margin {
            return None;
        }
        let s = st.point.theta.sin();
        let cot = st.point.theta.cos() / s;
        let beta = c / (rp.radial * rp.polar * s).sqrt();
        let th = rp.d_radial / rp.radial * st.velocity[1] + (rp.d_polar / rp.polar + cot) * st.velocity[2];
        Some((beta, th))
    };
    let vals: Vec<Option<(Complex64, f64)>> = trajectory.samples.iter().map(|s| value(&s.state)).collect();
    let mut worst: f64 = 0.0;
    for i in 2..n.saturating_sub(2) {
        if (i - 2..=i + 2).any(|k| vals[k].is_none()) {
            continue;
        }
        let db = d1_stencil(|k| vals[(i as isize + k) as usize].unwrap().0, h);
        let (beta, th) = vals[i].unwrap();
        worst = worst.max((db + beta * (0.5 * th)).norm() / beta.norm());
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorConstants {
    pub c1: Complex64,
    pub c2: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub hbar: f64,
}

impl SpinorConstants {
    pub fn new(c1: Complex64, c2: Complex64) -> Self {
        Self {
            c1,
            c2,
            d1: Complex64::new(0.0, 0.0),
            d2: Complex64::new(0.0, 0.0),
            hbar: 0.0,
        }
    }

    /// W₀ + ħW₁.
    pub fn spin_vector(&self) -> Result<Vector4<f64>> {
        let (w0, w1) = spin_vector_pp(self)?;
        Ok(w0 + w1 * self.hbar)
    }
}

/// (W₀, W₁) in the parallel-propagated frame; both are constant along the orbit.
pub fn spin_vector_pp(k: &SpinorConstants) -> Result<(Vector4<f64>, Vector4<f64>)> {
    let (w0, w1) = spin_vector_pp_complex(k)?;
    Ok((w0.map(|z| z.re), w1.map(|z| z.re)))
}

/// The closed forms before taking real parts; the imaginary parts vanish identically.
pub fn spin_vector_pp_complex(k: &SpinorConstants) -> Result<(Vector4<Complex64>, Vector4<Complex64>)> {
    let (c1, c2, d1, d2) = (k.c1, k.c2, k.d1, k.d2);
    let n = c1.norm_sqr() + c2.norm_sqr();
    if !(n > 0.0) {
        return Err(Error::Invalid("spinor constants c1 = c2 = 0 are not normalizable".into()));
    }
    let i = Complex64::i();
    let w0c = Vector4::new(
        Complex64::new(0.0, 0.0),
        c1.conj() * c2 + c2.conj() * c1,
        i * (c1.conj() * c2 - c2.conj() * c1),
        c2.conj() * c2 - c1.conj() * c1,
    ) / Complex64::new(n, 0.0);
    let c0 = (c1.conj() * d1 + c2.conj() * d2) - (d1.conj() * c1 + d2.conj() * c2);
    let q = Vector4::new(
        Complex64::new(0.0, 0.0),
        (d1.conj() * c2 + d2.conj() * c1) - (c1.conj() * d2 + c2.conj() * d1),
        i * ((c2.conj() * d1 + d1.conj() * c2) - (c1.conj() * d2 + d2.conj() * c1)),
        (c1.conj() * d1 + d2.conj() * c2) - (d1.conj() * c1 + c2.conj() * d2),
    );
    let w1c = (w0c * c0 + q) * (i / n);
    Ok((w0c, w1c))
}
