//! Configuration, pipeline, CSV/SVG output and validation checks behind the
//! `kerrspin` binary.

pub mod captions;
pub mod config;
pub mod csvio;
pub mod figures;
pub mod pipeline;
pub mod suite;

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

/// Parses `M=..,a=..` in any order.
pub fn parse_params(text: &str) -> Result<kerr_spin::BlackHoleParams, CliError> {
    let (mut m, mut a) = (None, None);
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--params: expected key=value, got '{part}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("--params: '{}' is not a number", value.trim())))?;
        match key.trim() {
            "M" => m = Some(value),
            "a" => a = Some(value),
            other => return Err(CliError::Config(format!("--params: unknown key '{other}'"))),
        }
    }
    let m = m.ok_or_else(|| CliError::Config("--params: missing M".into()))?;
    let a = a.ok_or_else(|| CliError::Config("--params: missing a".into()))?;
    kerr_spin::BlackHoleParams::new(m, a).map_err(|e| CliError::Config(format!("--params: {e}")))
}

pub(crate) fn write_file(path: &Path, body: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))
}

/// Runs a config and writes `{name}.csv` and `{name}_summary.json` into `out`.
pub fn simulate(config: &Path, out: &Path) -> Result<pipeline::RunOutput, CliError> {
    let cfg = config::RunConfig::load(config)?.validate()?;
    let run = pipeline::run_simulation(&cfg)?;
    create_dir(out)?;
    let name = &cfg.raw.output.name;
    write_file(&out.join(format!("{name}.csv")), csvio::rows_to_string(&run.rows).as_bytes())?;
    let summary = serde_json::to_string_pretty(&run.summary).expect("summary serializes");
    write_file(&out.join(format!("{name}_summary.json")), summary.as_bytes())?;
    Ok(run)
}

/// Runs a config and writes its three SVG panels into `out`.
pub fn figures(config: &Path, out: &Path) -> Result<(pipeline::RunOutput, Vec<std::path::PathBuf>), CliError> {
    let cfg = config::RunConfig::load(config)?.validate()?;
    let run = pipeline::run_simulation(&cfg)?;
    let panels = figures::render(&cfg, &run.rows)?;
    let paths = figures::write_panels(out, &cfg.raw.output.name, &panels)?;
    Ok((run, paths))
}

/// Turns a finished run into the error the binary should exit with, if any.
pub fn run_status(run: &pipeline::RunOutput) -> Result<(), CliError> {
    if let Some(e) = &run.summary.error {
        return Err(CliError::Runtime(e.clone()));
    }
    if !run.summary.tolerances_met {
        return Err(CliError::Validation(format!("{}: tolerances not met", run.summary.name)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_argument() {
        let p = parse_params("M=1.25,a=0.8").unwrap();
        assert_eq!((p.mass(), p.spin()), (1.25, 0.8));
        let p = parse_params(" a = 0.1 , M = 2 ").unwrap();
        assert_eq!((p.mass(), p.spin()), (2.0, 0.1));
        for bad in ["M=1", "a=0.5", "M=1,a=x", "M=1,b=0", "M1,a=0"] {
            assert!(matches!(parse_params(bad), Err(CliError::Config(_))), "{bad}");
        }
        let Err(e) = parse_params("M=1,a=1") else { panic!() };
        assert!(e.to_string().contains("non-extreme case violated"));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Validation(String::new()).exit_code(), 1);
        assert_eq!(CliError::Config(String::new()).exit_code(), 2);
        assert_eq!(CliError::Runtime(String::new()).exit_code(), 3);
    }
}
