//! Three SVG panels per run: polar orbit, projected 3D orbit and k_g(τ).

use std::path::{Path, PathBuf};

use plotters::prelude::*;

use crate::config::ValidatedConfig;
use crate::pipeline::OutputRow;
use crate::CliError;

const SIZE: (u32, u32) = (720, 720);
/// Viewing angles of the 3D projection.
const AZIMUTH: f64 = 0.6;
const ELEVATION: f64 = 0.35;

pub const UNDEFINED_NOTE: &str = "k_g undefined (no precession)";

#[derive(Debug, Clone, PartialEq)]
pub struct Panels {
    pub polar: String,
    pub projected: String,
    pub curvature: String,
}

pub fn annotation(cfg: &ValidatedConfig) -> String {
    let c = &cfg.raw.constants;
    format!(
        "M = {}, a = {}, E = {}, Lz = {}, kappa = {}, r0 = {}, theta0 = {}",
        cfg.raw.params.m, cfg.raw.params.a, c.energy, c.angular_momentum, c.kappa, cfg.raw.initial.r0, cfg.raw.initial.theta0
    )
}

fn plot_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(format!("svg: {e}"))
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
    (lo - pad, hi + pad)
}

/// Square window around a set of points so the orbit keeps its aspect ratio.
fn square(points: &[(f64, f64)]) -> ((f64, f64), (f64, f64)) {
    let (x0, x1) = bounds(points.iter().map(|p| p.0));
    let (y0, y1) = bounds(points.iter().map(|p| p.1));
    let half = 0.5 * (x1 - x0).max(y1 - y0);
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    ((cx - half, cx + half), (cy - half, cy + half))
}

fn xy_panel(title: &str, note: &str, axes: (&str, &str), points: &[(f64, f64)]) -> Result<String, CliError> {
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, SIZE).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        let (xr, yr) = square(points);
        let mut chart = ChartBuilder::on(&root)
            .caption(title, ("sans-serif", 20))
            .margin(24)
            .x_label_area_size(44)
            .y_label_area_size(60)
            .build_cartesian_2d(xr.0..xr.1, yr.0..yr.1)
            .map_err(plot_err)?;
        chart
            .configure_mesh()
            .x_desc(axes.0)
            .y_desc(axes.1)
            .draw()
            .map_err(plot_err)?;
        chart
            .draw_series(LineSeries::new(points.iter().copied(), &BLUE))
            .map_err(plot_err)?;
        root.draw(&Text::new(note.to_string(), (70, SIZE.1 as i32 - 16), ("sans-serif", 13)))
            .map_err(plot_err)?;
        root.present().map_err(plot_err)?;
    }
    Ok(svg)
}

fn curvature_panel(note: &str, rows: &[OutputRow]) -> Result<String, CliError> {
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, SIZE).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        let (t0, t1) = bounds(rows.iter().map(|r| r.tau));
        let (k0, k1) = bounds(rows.iter().filter_map(|r| r.k_g));
        let mut chart = ChartBuilder::on(&root)
            .caption("spherical curvature", ("sans-serif", 20))
            .margin(24)
            .x_label_area_size(44)
            .y_label_area_size(70)
            .build_cartesian_2d(t0..t1, k0..k1)
            .map_err(plot_err)?;
        chart
            .configure_mesh()
            .x_desc("proper time tau")
            .y_desc("k_g")
            .draw()
            .map_err(plot_err)?;
        let mut segment = Vec::new();
        let mut segments = Vec::new();
        for r in rows {
            match r.k_g {
                Some(k) => segment.push((r.tau, k)),
                None if !segment.is_empty() => segments.push(std::mem::take(&mut segment)),
                None => {}
            }
        }
        if !segment.is_empty() {
            segments.push(segment);
        }
        if segments.is_empty() {
            root.draw(&Text::new(
                UNDEFINED_NOTE,
                (SIZE.0 as i32 / 2 - 130, SIZE.1 as i32 / 2),
                ("sans-serif", 20),
            ))
            .map_err(plot_err)?;
        }
        for seg in segments {
            chart.draw_series(LineSeries::new(seg, &RED)).map_err(plot_err)?;
        }
        root.draw(&Text::new(note.to_string(), (70, SIZE.1 as i32 - 16), ("sans-serif", 13)))
            .map_err(plot_err)?;
        root.present().map_err(plot_err)?;
    }
    Ok(svg)
}

/// (r cosφ sinϑ, r sinφ sinϑ, r cosϑ) seen from the viewing angles.
pub fn project(r: f64, theta: f64, phi: f64) -> (f64, f64) {
    let (x, y, z) = (r * phi.cos() * theta.sin(), r * phi.sin() * theta.sin(), r * theta.cos());
    let (sa, ca) = AZIMUTH.sin_cos();
    let (se, ce) = ELEVATION.sin_cos();
    (-x * sa + y * ca, -(x * ca + y * sa) * se + z * ce)
}

pub fn render(cfg: &ValidatedConfig, rows: &[OutputRow]) -> Result<Panels, CliError> {
    let note = annotation(cfg);
    let polar: Vec<_> = rows.iter().map(|r| (r.r * r.phi.cos(), r.r * r.phi.sin())).collect();
    let projected: Vec<_> = rows.iter().map(|r| project(r.r, r.theta, r.phi)).collect();
    Ok(Panels {
        polar: xy_panel("orbit in polar coordinates", &note, ("x = r cos(phi)", "y = r sin(phi)"), &polar)?,
        projected: xy_panel("orbit in three dimensions (projected)", &note, ("projected x", "projected z"), &projected)?,
        curvature: curvature_panel(&note, rows)?,
    })
}

pub fn write_panels(dir: &Path, stem: &str, panels: &Panels) -> Result<Vec<PathBuf>, CliError> {
    crate::create_dir(dir)?;
    let mut out = Vec::new();
    for (suffix, body) in [("orbit_polar", &panels.polar), ("orbit_3d", &panels.projected), ("kg", &panels.curvature)] {
        let path = dir.join(format!("{stem}_{suffix}.svg"));
        crate::write_file(&path, body.as_bytes())?;
        out.push(path);
    }
    Ok(out)
}
