//! TOML run configuration.
//!
//! ```toml
//! [params]
//! M = 1.25
//! a = 0.8
//!
//! [constants]
//! E = 2.0
//! Lz = 3.0
//! kappa = 12.0
//!
//! [initial]
//! r0 = 20.0
//! theta0 = 1.57
//! phi0 = 0.0
//! sign_r = 1
//! sign_theta = 1
//!
//! [integration]      # optional, defaults shown
//! tau_max = 500.0
//! output_step = 0.01
//! rtol = 1e-12
//! atol = 1e-12
//! max_step = 0.625   # default 0.5 M
//! drift_tolerance = 1e-8
//! chi_sign = "printed"
//!
//! [spin]             # optional; W0 or spinor constants c1, c2 (d1, d2, hbar)
//! W0 = [1.0, 0.0, 0.0]
//! chi0 = 0.0
//!
//! [output]
//! name = "fig1"
//! ```

use std::path::Path;

use kerr_spin::geodesic::IntegratorConfig;
use kerr_spin::spin::SpinorConstants;
use kerr_spin::{BlackHoleParams, ChiSign, ConservedSet};
use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsSection,
    pub constants: ConstantsSection,
    pub initial: InitialSection,
    #[serde(default)]
    pub integration: IntegrationSection,
    #[serde(default)]
    pub spin: SpinSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    #[serde(rename = "M")]
    pub m: f64,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSection {
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "Lz")]
    pub angular_momentum: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub r0: f64,
    pub theta0: f64,
    #[serde(default)]
    pub phi0: f64,
    pub sign_r: i32,
    pub sign_theta: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegrationSection {
    pub tau_max: f64,
    pub output_step: f64,
    pub rtol: f64,
    pub atol: f64,
    pub max_step: Option<f64>,
    pub drift_tolerance: f64,
    pub chi_sign: ChiSignName,
}

impl Default for IntegrationSection {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        Self {
            tau_max: d.tau_max,
            output_step: d.output_step,
            rtol: d.rtol,
            atol: d.atol,
            max_step: d.max_step,
            drift_tolerance: d.drift_tolerance.unwrap_or(1e-8),
            chi_sign: ChiSignName::Printed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiSignName {
    #[default]
    Printed,
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpinSection {
    #[serde(rename = "W0")]
    pub w0: Option<[f64; 3]>,
    /// Spinor constants as [re, im].
    pub c1: Option<[f64; 2]>,
    pub c2: Option<[f64; 2]>,
    pub d1: Option<[f64; 2]>,
    pub d2: Option<[f64; 2]>,
    pub hbar: f64,
    pub chi0: f64,
}

impl Default for SpinSection {
    fn default() -> Self {
        Self {
            w0: None,
            c1: None,
            c2: None,
            d1: None,
            d2: None,
            hbar: 0.0,
            chi0: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub name: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { name: "run".into() }
    }
}

/// How the initial spin is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinInput {
    /// Ŵ(0) in the reference triad.
    Measured(Vector3<f64>),
    /// Constant components in the parallel-propagated frame, from spinor constants.
    Spinor(SpinorConstants),
}

/// A configuration whose fields have all been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedConfig {
    pub raw: RunConfig,
    pub params: BlackHoleParams,
    pub constants: ConservedSet,
    pub integrator: IntegratorConfig,
    pub spin: SpinInput,
}

fn field(name: &str, message: impl Into<String>) -> CliError {
    CliError::Config(format!("{name}: {}", message.into()))
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(field(name, format!("must be finite, got {x}")))
    }
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(field(name, format!("must be positive, got {x}")))
    }
}

fn sign(name: &str, s: i32) -> Result<f64, CliError> {
    match s {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(field(name, format!("must be +1 or -1, got {s}"))),
    }
}

fn complex(v: Option<[f64; 2]>) -> Complex64 {
    v.map_or(Complex64::new(0.0, 0.0), |[re, im]| Complex64::new(re, im))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<ValidatedConfig, CliError> {
        let p = &self.params;
        let params = BlackHoleParams::new(finite("params.M", p.m)?, finite("params.a", p.a)?)
            .map_err(|e| field("params", e.to_string()))?;

        let c = &self.constants;
        let constants = ConservedSet::new(
            finite("constants.E", c.energy)?,
            finite("constants.Lz", c.angular_momentum)?,
            finite("constants.kappa", c.carter_checked()?)?,
        );

        let i = &self.initial;
        finite("initial.r0", i.r0)?;
        finite("initial.theta0", i.theta0)?;
        finite("initial.phi0", i.phi0)?;
        sign("initial.sign_r", i.sign_r)?;
        sign("initial.sign_theta", i.sign_theta)?;
        if !(i.r0 > params.r_plus()) {
            return Err(field(
                "initial.r0",
                format!("must lie outside the horizon r+ = {}", params.r_plus()),
            ));
        }

        let g = &self.integration;
        if !(g.tau_max.is_finite() && g.tau_max >= 0.0) {
            return Err(field("integration.tau_max", format!("must be non-negative, got {}", g.tau_max)));
        }
        let integrator = IntegratorConfig {
            rtol: positive("integration.rtol", g.rtol)?,
            atol: positive("integration.atol", g.atol)?,
            max_step: g.max_step.map(|h| positive("integration.max_step", h)).transpose()?,
            output_step: positive("integration.output_step", g.output_step)?,
            tau_max: g.tau_max,
            drift_tolerance: Some(positive("integration.drift_tolerance", g.drift_tolerance)?),
            chi_sign: match g.chi_sign {
                ChiSignName::Printed => ChiSign::Printed,
                ChiSignName::Flipped => ChiSign::Flipped,
            },
            ..IntegratorConfig::default()
        };

        let s = &self.spin;
        finite("spin.chi0", s.chi0)?;
        finite("spin.hbar", s.hbar)?;
        let spinor = s.c1.is_some() || s.c2.is_some() || s.d1.is_some() || s.d2.is_some();
        let spin = match (s.w0, spinor) {
            (Some(_), true) => return Err(field("spin", "give either W0 or spinor constants, not both")),
            (Some(w), false) => {
                let w = Vector3::from(w);
                if !((w.norm() - 1.0).abs() <= 1e-10) {
                    return Err(field("spin.W0", format!("must be a unit vector, has norm {}", w.norm())));
                }
                SpinInput::Measured(w)
            }
            (None, true) => {
                let mut k = SpinorConstants::new(complex(s.c1), complex(s.c2));
                k.d1 = complex(s.d1);
                k.d2 = complex(s.d2);
                k.hbar = s.hbar;
                let w = k.spin_vector().map_err(|e| field("spin", e.to_string()))?;
                if !(w.fixed_rows::<3>(1).norm() > 0.0) {
                    return Err(field("spin", "spinor constants give a vanishing spin vector"));
                }
                SpinInput::Spinor(k)
            }
            (None, false) => SpinInput::Measured(Vector3::new(1.0, 0.0, 0.0)),
        };

        if self.output.name.is_empty() || self.output.name.contains(['/', '\\']) {
            return Err(field("output.name", "must be a non-empty file stem"));
        }

        Ok(ValidatedConfig {
            raw: self.clone(),
            params,
            constants,
            integrator,
            spin,
        })
    }
}

impl ConstantsSection {
    fn carter_checked(&self) -> Result<f64, CliError> {
        if self.kappa < 0.0 {
            return Err(field("constants.kappa", format!("must be non-negative, got {}", self.kappa)));
        }
        Ok(self.kappa)
    }
}
