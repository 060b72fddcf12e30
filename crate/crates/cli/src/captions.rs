//! Parameter sets of the three reference orbit figures.
//!
//! The figures do not state M and a. a = 0.8 with M = 1.25 is used because
//! the second figure's initial data is a forbidden region at M = 1.

use crate::config::{
    ConstantsSection, InitialSection, IntegrationSection, OutputSection, ParamsSection, RunConfig, SpinSection,
};

pub const CAPTION_M: f64 = 1.25;
pub const CAPTION_A: f64 = 0.8;

/// (name, E, Lz, κ, sign of ṙ at τ = 0).
pub const CAPTIONS: [(&str, f64, f64, f64, i32); 3] = [
    ("fig1", 2.0, 3.0, 12.0, 1),
    ("fig2", 1.004, -4.0, 60.0, -1),
    ("fig3", 1.004, 4.0, 16.0, -1),
];

pub fn caption_config(index: usize, m: f64, a: f64) -> RunConfig {
    let (name, e, lz, kappa, sign_r) = CAPTIONS[index];
    RunConfig {
        params: ParamsSection { m, a },
        constants: ConstantsSection {
            energy: e,
            angular_momentum: lz,
            kappa,
        },
        initial: InitialSection {
            r0: 20.0,
            theta0: 1.57,
            phi0: 0.0,
            sign_r,
            sign_theta: 1,
        },
        integration: IntegrationSection::default(),
        spin: SpinSection::default(),
        output: OutputSection { name: name.into() },
    }
}

pub fn caption_configs() -> Vec<RunConfig> {
    (0..CAPTIONS.len()).map(|i| caption_config(i, CAPTION_M, CAPTION_A)).collect()
}

/// Exactly equatorial orbit (ϑ₀ = π/2, κ = (aE − Lz)²) with the first figure's E and Lz.
pub fn equatorial_config(m: f64, a: f64) -> RunConfig {
    let mut c = caption_config(0, m, a);
    c.initial.theta0 = std::f64::consts::FRAC_PI_2;
    c.constants.kappa = (a * c.constants.energy - c.constants.angular_momentum).powi(2);
    c.output.name = "equatorial".into();
    c
}
