use std::fmt::Write as _;
use std::path::Path;

use dbf_core::geometry::Displacement;
use dbf_core::motion_fit::{annotations_to_displacements, compare_fits, AxisFit, FitReport};

use crate::annotation::parse_groundtruth;
use crate::error::Result;

/// Pools relative displacements from every annotation file and fits both
/// families per axis.
pub fn run_fit(gts: &[impl AsRef<Path>], bins: usize) -> Result<FitReport> {
    let mut pooled: Vec<Displacement> = Vec::new();
    for p in gts {
        let boxes = parse_groundtruth(p.as_ref())?;
        pooled.extend(annotations_to_displacements(&boxes)?);
    }
    Ok(compare_fits(&pooled, bins)?)
}

fn axis_lines(s: &mut String, axis: &str, fit: &AxisFit) {
    let g = &fit.gaussian;
    let l = &fit.laplace;
    let _ = writeln!(s, "{axis}\tgaussian\tmean={}\tstd={}\tr2={}", g.location, g.scale, g.r_squared);
    let _ = writeln!(s, "{axis}\tlaplace\tlambda={}\tr2={}", l.lambda(), l.r_squared);
    let _ = writeln!(s, "{axis}\twinner={}", fit.winner().name());
}

pub fn render_fit(report: &FitReport) -> String {
    let mut s = format!("samples={}\n", report.samples);
    axis_lines(&mut s, "x", &report.x);
    axis_lines(&mut s, "y", &report.y);
    s
}
